import math
from dataclasses import replace

import pytest

from sftcalc import degeneration
from sftcalc.buildings import add_node, disjoint_union, trivial_cylinder
from sftcalc.degeneration import (
    check_main_theorem,
    classify_stable_limit,
    constant_boundary_data,
    constant_subbuilding_bound,
    enumerate_limits,
    materialize_limit,
    maximal_constant_subbuildings,
    maximal_trivial_subbuildings,
    trivial_boundary_data,
    trivial_identity_direct,
    trivial_subbuilding_check,
    validate_nice,
)
from sftcalc.errors import ConsistencyError, IncompleteInputError, InvalidInputError
from sftcalc.models import Building, Component, OrbitRef, Puncture, TrivialBoundaryData
from sftcalc.schemas import parse_catalog

ROTATION_TABLE = [
    [2 * math.pi * n - math.pi / 2, n, 2] for n in range(-2, 3)
]
MU_TWO_TABLE = [[-9.0, 0, 1], [-4.0, 0, 1], [-1.5, 1, 1], [2.0, 1, 1], [5.0, 2, 1], [10.0, 2, 1]]


def _table_catalog(**tables):
    orbits = [
        {"id": name, "period": 1.0, "hyperbolic": hyperbolic,
         "model": {"type": "table", "covers": {"1": rows}}}
        for name, (rows, hyperbolic) in sorted(tables.items())
    ]
    return parse_catalog({"format": 1, "orbits": orbits})


def _smooth_plane(cid="p", image_class=None):
    """Plano de índice 1 en la órbita h2 (μ = 2) con autofunción extremal"""
    return Building(components=(Component(
        id=cid,
        wind_pi=0,
        image_class=image_class,
        punctures=(Puncture("+", OrbitRef("h2"), controlling_winding=1),),
    ),))


# Edificios "nice"

def test_broken_pair_is_nicely_embedded(broken_pair, demo_catalog):
    verdict = validate_nice(broken_pair, demo_catalog)
    assert verdict.ok
    assert verdict.violations == ()
    assert verdict.assumptions == ("bottom and top: projections assumed disjoint",)


@pytest.mark.parametrize("name, code", [
    ("odd_breaking", "BREAKING_ORBIT_ODD"),
    ("not_bad_double", "NOT_BAD_DOUBLE"),
])
def test_breaking_orbit_mutants(mutant, demo_catalog, name, code):
    assert validate_nice(mutant(name), demo_catalog).codes == [code]


def test_nodes_are_not_nice(broken_pair, demo_catalog):
    verdict = validate_nice(add_node(broken_pair, "top", "bottom"), demo_catalog)
    assert verdict.codes == ["HAS_NODE"]


def test_nice_needs_wind_pi_and_controlling_windings(broken_pair, demo_catalog):
    bare = broken_pair.replace_puncture(("bottom", 0), Puncture("+", OrbitRef("a")))
    with pytest.raises(IncompleteInputError) as excinfo:
        validate_nice(bare, demo_catalog)
    assert excinfo.value.missing == ["bottom:0.controlling_winding"]


def test_positive_defect_is_reported(broken_pair, demo_catalog):
    shifted = broken_pair.replace_puncture(("top", 0), Puncture("+", OrbitRef("a"), controlling_winding=-1))
    assert validate_nice(shifted, demo_catalog).codes == ["DEFECT_POSITIVE", "MIXED_MULTIPLICITY"]


# Subedificios triviales y constantes

def test_bad_double_boundary_data_is_accepted():
    verdict = trivial_subbuilding_check(TrivialBoundaryData(
        p=1, q=2, r=1, s=0, m_C=2, m_E=2, w_C=1, w_E=1, chi=-1,
        alpha_minus_C=1, alpha_plus_C=1,
    ))
    assert verdict.ok
    assert verdict.branch == "bad_double"
    assert verdict.multiplicity == 2


def test_multiplicity_relation_failure():
    verdict = trivial_subbuilding_check(TrivialBoundaryData(
        p=2, q=1, r=0, s=1, m_C=1, m_E=3, w_C=0, w_E=0, chi=-1,
    ))
    assert not verdict.ok
    assert "MULTIPLICITY_RELATION" in {v.code for v in verdict.violations}


def test_cylindrical_boundary_data():
    verdict = trivial_subbuilding_check(TrivialBoundaryData(
        p=1, q=1, r=0, s=0, m_C=1, m_E=1, w_C=0, w_E=0, chi=0,
        simple_even=True, neighbor_defects=(0, 0),
    ))
    assert verdict.ok
    assert verdict.branch == "simple"
    assert verdict.identity_lhs == verdict.minus_chi == 0
    assert verdict.cylindrical


def test_simple_opposite_ends_need_an_even_orbit():
    verdict = trivial_subbuilding_check(TrivialBoundaryData(
        p=1, q=1, r=0, s=0, m_C=1, m_E=1, w_C=0, w_E=0, chi=0,
        alpha_minus_C=0, alpha_plus_C=1, simple_even=False,
    ))
    assert "OPPOSITE_SIGN_ENDS" in {v.code for v in verdict.violations}


def test_boundary_without_ends_is_invalid():
    verdict = trivial_subbuilding_check(TrivialBoundaryData(
        p=0, q=0, r=1, s=1, m_C=1, m_E=1, w_C=0, w_E=0, chi=0,
    ))
    assert [v.code for v in verdict.violations] == ["INVALID_BOUNDARY"]
    assert verdict.identity_lhs is None


@pytest.mark.parametrize("chi_closed, n_attach, stability, value, ok", [
    (2, 3, [-1], 4, True),
    (0, 1, [-1], 2, True),
    (2, 1, [1], 0, False),
])
def test_constant_subbuilding_bound(chi_closed, n_attach, stability, value, ok):
    verdict = constant_subbuilding_bound(chi_closed, n_attach, stability)
    assert verdict.value == value
    assert verdict.ok is ok


def test_unstable_sphere_is_reported():
    verdict = constant_subbuilding_bound(2, 1, [1])
    assert {v.code for v in verdict.violations} == {"UNSTABLE_CONSTANT", "NONPOSITIVE_BOUND"}
    with pytest.raises(InvalidInputError):
        constant_subbuilding_bound(2, 0, [2])


def test_constant_boundary_data_of_a_bubble_tree():
    b = Building(
        components=(Component(id="s", kind="constant"), *_smooth_plane().components),
        nodal_pairs=(("s", "p"), ("s", "p"), ("s", "p")),
    )
    assert maximal_constant_subbuildings(b) == [["s"]]
    assert constant_boundary_data(b, ["s"]) == (2, 3, [-1])


def test_trivial_boundary_data_of_broken_pair(broken_pair, demo_catalog):
    assert maximal_trivial_subbuildings(broken_pair) == [["T1"], ["T2"]]
    data = trivial_boundary_data(broken_pair, ["T1"], demo_catalog)
    assert (data.p, data.q, data.r, data.s) == (0, 1, 1, 0)
    assert (data.m_C, data.m_E, data.w_C, data.w_E, data.chi) == (1, 1, 0, 0, 0)
    assert data.simple_even is False
    assert data.neighbor_defects == (0,)
    verdict = trivial_subbuilding_check(data)
    assert verdict.ok
    assert verdict.branch == "simple"
    assert verdict.cylindrical


@pytest.mark.parametrize("ids", [["T1"], ["T2"]])
def test_direct_route_agrees_with_the_boundary_formula(broken_pair, demo_catalog, ids):
    verdict = trivial_subbuilding_check(trivial_boundary_data(broken_pair, ids, demo_catalog))
    assert trivial_identity_direct(broken_pair, ids, demo_catalog) == verdict.identity_lhs == 0


def test_direct_route_needs_the_neighbor_windings(broken_pair, demo_catalog):
    key = ("top", 0)
    b = broken_pair.replace_puncture(key, replace(broken_pair.puncture(key), controlling_winding=None))
    with pytest.raises(IncompleteInputError):
        trivial_identity_direct(b, ["T1"], demo_catalog)


def test_neighbor_defects_are_compared_with_their_sign():
    data = TrivialBoundaryData(
        p=1, q=1, r=0, s=0, m_C=1, m_E=1, w_C=0, w_E=0, chi=0,
        alpha_minus_C=1, alpha_plus_C=1, simple_even=True, neighbor_defects=(1, 1),
    )
    codes = {v.code for v in trivial_subbuilding_check(data).violations}
    assert codes == {"NEGATIVE_DEFECT", "DEFECT_MISMATCH"}

    signed = replace(data, neighbor_defects=(-1, 1))
    assert {v.code for v in trivial_subbuilding_check(signed).violations} == {"NEGATIVE_DEFECT"}


def test_main_theorem_cross_checks_the_direct_route(broken_pair, demo_catalog, monkeypatch):
    monkeypatch.setattr(degeneration, "trivial_identity_direct", lambda b, ids, catalog: 7)
    with pytest.raises(ConsistencyError):
        check_main_theorem(broken_pair, demo_catalog)


# Clasificación de límites estables

def test_single_index_one_component_is_smooth(table_catalog):
    verdict = classify_stable_limit(_smooth_plane(), table_catalog)
    assert verdict.taxonomy == "SMOOTH"
    assert verdict.index == 1
    assert verdict.core_components == ("p",)


def test_broken_pair_is_a_broken_pair(broken_pair, demo_catalog):
    verdict = classify_stable_limit(broken_pair, demo_catalog)
    assert verdict.taxonomy == "BROKEN_PAIR"
    assert verdict.breaking_orbit == OrbitRef("delta")
    assert verdict.index == 2
    assert verdict.core_components == ("bottom", "top")


def test_nongeneric_middle_has_an_index_zero_interior_component(nongeneric_middle, demo_catalog):
    verdict = classify_stable_limit(nongeneric_middle, demo_catalog)
    assert verdict.taxonomy == "REJECTED"
    assert [(v.code, v.location) for v in verdict.violations] == [("NON_GENERIC", "middle")]


def test_two_even_punctures_on_a_side(mutant, demo_catalog):
    b = mutant("two_even_punctures")
    assert validate_nice(b, demo_catalog).ok
    verdict = classify_stable_limit(b, demo_catalog)
    assert [v.code for v in verdict.violations] == ["EVEN_PUNCTURES"]


def test_disconnected_limit_is_rejected(table_catalog):
    b = disjoint_union(_smooth_plane(), _smooth_plane())
    assert [v.code for v in classify_stable_limit(b, table_catalog).violations] == ["DISCONNECTED"]


def test_building_without_core_is_out_of_range(demo_catalog):
    verdict = classify_stable_limit(trivial_cylinder(OrbitRef("delta")), demo_catalog)
    assert [v.code for v in verdict.violations] == ["INDEX_OUT_OF_RANGE"]


def test_nodal_limit_is_rejected_by_the_nice_check(broken_pair, demo_catalog):
    verdict = classify_stable_limit(add_node(broken_pair, "top", "bottom"), demo_catalog)
    assert [v.code for v in verdict.violations] == ["HAS_NODE"]


def test_main_theorem_on_broken_pair(broken_pair, demo_catalog):
    verdict = check_main_theorem(broken_pair, demo_catalog)
    assert verdict.ok
    assert verdict.c_N == 0
    assert verdict.core_c_N == (("bottom", 0), ("top", 0))
    assert [cid for cid, _ in verdict.trivial_checks] == ["T1", "T2"]
    assert all(check.ok and check.cylindrical for _, check in verdict.trivial_checks)


# Enumeración de límites rotos

def test_two_odd_punctures_break_along_delta(two_odd_punctures, demo_catalog):
    limits = enumerate_limits(two_odd_punctures, demo_catalog)
    assert [(l.top_punctures, l.bottom_punctures, l.breaking_orbit) for l in limits] == [
        ((0,), (1,), OrbitRef("delta")),
        ((1,), (0,), OrbitRef("delta")),
    ]
    assert enumerate_limits(two_odd_punctures, demo_catalog, max_workers=1) == limits


def test_breaking_orbit_of_index_two_leaves_the_bottom_empty(two_odd_punctures):
    catalog = _table_catalog(a=(ROTATION_TABLE, False), dprime=(MU_TWO_TABLE, True))
    limits = enumerate_limits(two_odd_punctures, catalog)
    assert [(l.top_punctures, l.bottom_punctures, l.breaking_orbit) for l in limits] == [
        ((0, 1), (), OrbitRef("dprime")),
    ]


def test_no_breaking_candidates(two_odd_punctures):
    catalog = _table_catalog(a=(ROTATION_TABLE, False))
    assert catalog.breaking_candidates() == []
    assert enumerate_limits(two_odd_punctures, catalog) == []


def test_unstable_asymptotics_are_rejected(demo_catalog, table_catalog):
    with pytest.raises(InvalidInputError):
        enumerate_limits([Puncture("+", OrbitRef("a"))], demo_catalog)
    even_pair = [Puncture("+", OrbitRef("h2")), Puncture("+", OrbitRef("h0"))]
    with pytest.raises(InvalidInputError) as excinfo:
        enumerate_limits(even_pair, table_catalog)
    assert "even constrained punctures" in excinfo.value.message


def test_materialized_limits_are_broken_pairs(two_odd_punctures, demo_catalog):
    for limit in enumerate_limits(two_odd_punctures, demo_catalog):
        b = materialize_limit(limit, two_odd_punctures, demo_catalog)
        assert validate_nice(b, demo_catalog).ok
        verdict = classify_stable_limit(b, demo_catalog)
        assert verdict.taxonomy == "BROKEN_PAIR"
        assert verdict.breaking_orbit == limit.breaking_orbit
        assert check_main_theorem(b, demo_catalog).ok
