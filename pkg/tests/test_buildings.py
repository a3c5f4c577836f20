import pytest

from sftcalc.buildings import (
    add_node,
    apply_constraints,
    arithmetic_genus,
    augment,
    connected_pieces,
    core,
    disjoint_union,
    euler_char,
    glue_punctures,
    graph,
    is_connected,
    is_cylindrical,
    is_stable,
    is_trivial_breaking,
    is_trivial_building,
    nontrivial_breaking_pairs,
    subbuilding,
    trivial_cylinder,
)
from sftcalc.errors import InvalidInputError, NoCoreError, SurgeryError
from sftcalc.models import Building, Component, ConstraintSet, OrbitRef, Puncture

X = OrbitRef("x")


def _comp(cid, *signs, genus=0, kind="nontrivial"):
    return Component(
        id=cid,
        genus=genus,
        kind=kind,
        punctures=tuple(Puncture(sign=s, orbit=X) for s in signs),
    )


def _cyl(cid="cyl"):
    return Component(
        id=cid,
        kind="trivial",
        orbit="x",
        punctures=(Puncture(sign="+", orbit=X), Puncture(sign="-", orbit=X)),
    )


@pytest.fixture
def chain():
    """c1 (cilindro no trivial) encima de c2 (plano), unidos por un par de ruptura"""
    return Building(
        components=(_comp("c1", "+", "-"), _comp("c2", "+")),
        breaking_pairs=((("c2", 0), ("c1", 1)),),
    )


@pytest.fixture
def spliced_chain():
    """upper, cilindro trivial y lower encadenados"""
    return Building(
        components=(_comp("upper", "-"), _cyl(), _comp("lower", "+")),
        breaking_pairs=((("lower", 0), ("cyl", 1)), (("cyl", 0), ("upper", 0))),
    )


# Invariantes topológicos

def test_trivial_cylinder_invariants():
    b = trivial_cylinder(X)
    assert euler_char(b) == 0
    assert arithmetic_genus(b) == 0
    assert is_cylindrical(b)
    assert is_trivial_building(b)


def test_node_endpoints_lower_euler_characteristic():
    sphere = _comp("s", kind="constant")
    tori = [_comp(cid, genus=1, kind="constant") for cid in ("a", "b", "c")]
    b = Building(components=(sphere, *tori), nodal_pairs=(("s", "a"), ("s", "b"), ("s", "c")))
    # esfera con tres nodos: 2 − 3 = −1; cada toro con un nodo: −1
    assert euler_char(b) == -1 + 3 * (-1)
    assert is_stable(b)


def test_chain_invariants(chain):
    assert euler_char(chain) == 1
    assert arithmetic_genus(chain) == 0
    assert chain.external_keys() == [("c1", 0)]


def test_two_tori_glued_along_two_necks():
    b = Building(
        components=(_comp("t1", "+", "+", genus=1), _comp("t2", "-", "-", genus=1)),
        breaking_pairs=((("t1", 0), ("t2", 0)), (("t1", 1), ("t2", 1))),
    )
    assert euler_char(b) == -4
    assert arithmetic_genus(b) == 3
    assert graph(b).number_of_edges() == 2


def test_genus_needs_a_connected_building():
    b = disjoint_union(trivial_cylinder(X), trivial_cylinder(X))
    assert not is_connected(b)
    assert connected_pieces(b) == [["triv"], ["triv_1"]]
    with pytest.raises(InvalidInputError):
        arithmetic_genus(b)


# Pares de ruptura triviales

def test_breaking_pair_next_to_a_trivial_cylinder_is_trivial():
    b = Building(
        components=(_cyl(), _comp("n", "-", "+")),
        breaking_pairs=((("cyl", 0), ("n", 0)),),
    )
    assert is_trivial_breaking(b, 0)
    assert is_trivial_breaking(b, (("cyl", 0), ("n", 0)))
    assert nontrivial_breaking_pairs(b) == []


def test_breaking_pair_between_nontrivial_components(chain):
    assert not is_trivial_breaking(chain, 0)
    assert nontrivial_breaking_pairs(chain) == [0]


def test_edges_of_a_cycle_are_nontrivial():
    b = Building(
        components=(_cyl(), _comp("n", "+", "-")),
        breaking_pairs=((("cyl", 0), ("n", 1)), (("n", 0), ("cyl", 1))),
    )
    assert nontrivial_breaking_pairs(b) == [0, 1]


def test_unknown_breaking_pair(chain):
    with pytest.raises(InvalidInputError):
        is_trivial_breaking(chain, 3)


# Cirugía

def test_union_with_empty_building_is_identity(chain):
    assert disjoint_union(Building(), chain) == chain


def test_union_of_two_cylinders():
    b = disjoint_union(trivial_cylinder(X), trivial_cylinder(X))
    assert euler_char(b) == 0
    assert len(b.external_keys()) == 4


def test_node_drops_euler_characteristic_by_two(chain):
    separate = disjoint_union(chain, trivial_cylinder(X))
    joined = add_node(separate, "c2", "triv")
    assert euler_char(joined) == euler_char(separate) - 2
    assert is_connected(joined)
    with pytest.raises(InvalidInputError):
        add_node(chain, "c1", "nope")


def test_glue_two_cylinders_end_to_end():
    b = disjoint_union(trivial_cylinder(X), trivial_cylinder(X))
    glued = glue_punctures(b, ("triv", 0), ("triv_1", 1))
    assert euler_char(glued) == 0
    assert len(glued.external_keys()) == 2
    with pytest.raises(SurgeryError):
        glue_punctures(glued, ("triv", 0), ("triv", 1))


def test_glue_rejects_bad_punctures():
    constrained = disjoint_union(trivial_cylinder(X, positive_constraint=1.0), trivial_cylinder(X))
    with pytest.raises(SurgeryError):
        glue_punctures(constrained, ("triv", 0), ("triv_1", 1))
    plain = disjoint_union(trivial_cylinder(X), trivial_cylinder(OrbitRef("x", 2)))
    with pytest.raises(SurgeryError):
        glue_punctures(plain, ("triv", 0), ("triv_1", 1))
    with pytest.raises(SurgeryError):
        glue_punctures(plain, ("triv", 1), ("triv_1", 0))


def test_augmenting_a_trivial_cylinder_gives_a_chain():
    b = augment(trivial_cylinder(X), ("triv", 0))
    assert len(b.components) == 2
    assert euler_char(b) == 0
    assert arithmetic_genus(b) == 0
    with pytest.raises(NoCoreError):
        core(b)


def test_augment_moves_the_outer_constraint_onto_the_cylinder():
    b = Building(components=(Component(id="n", punctures=(Puncture(sign="+", orbit=X, constraint=2.0),)),))
    augmented = augment(b, ("n", 0))
    assert augmented.puncture(("n", 0)).constraint == 0.0
    assert augmented.puncture(("triv", 0)).constraint == 2.0
    assert augmented.breaking_pairs == ((("n", 0), ("triv", 1)),)
    assert core(augmented) == b


def test_augment_rejects_glued_punctures(chain):
    with pytest.raises(SurgeryError):
        augment(chain, ("c2", 0))


def test_core_splices_a_chain(spliced_chain):
    result = core(spliced_chain)
    assert result.component_ids == ["upper", "lower"]
    assert result.breaking_pairs == ((("lower", 0), ("upper", 0)),)


def test_core_of_broken_pair(broken_pair):
    result = core(broken_pair)
    assert result.component_ids == ["top", "bottom"]
    assert result.breaking_pairs == ((("bottom", 1), ("top", 1)),)
    assert core(augment(broken_pair, 2)).canonical() == result.canonical()


def test_core_rejects_a_free_cylinder(chain):
    with pytest.raises(NoCoreError):
        core(disjoint_union(chain, trivial_cylinder(X)))
    with pytest.raises(NoCoreError):
        core(Building())


# Subedificios

def test_subbuilding_on_all_components(chain):
    sub, constraints = subbuilding(chain, chain.component_ids)
    assert sub == chain
    assert constraints == ConstraintSet.from_building(chain)


def test_subbuilding_severs_breaking_pairs(chain):
    sub, constraints = subbuilding(chain, ["c1"])
    assert sub.component_ids == ["c1"]
    assert sub.breaking_pairs == ()
    assert constraints.values == {("c1", 0): 0.0, ("c1", 1): 0.0}
    with pytest.raises(InvalidInputError):
        subbuilding(chain, ["zz"])


def test_apply_constraints_only_on_external_punctures(chain):
    constrained = apply_constraints(chain, ConstraintSet({("c1", 0): 1.5}))
    assert constrained.puncture(("c1", 0)).constraint == 1.5
    with pytest.raises(InvalidInputError):
        apply_constraints(chain, ConstraintSet({("c2", 0): 1.0}))


def test_unstable_constant_sphere():
    b = Building(
        components=(_comp("s", kind="constant"), _comp("n", "+")),
        nodal_pairs=(("s", "n"),),
    )
    assert not is_stable(b)
