"""
Degeneraciones de curvas bien embebidas: validación de edificios "nice",
aritmética de subedificios triviales y constantes, clasificación de límites
estables de índice 1/2 y enumeración de límites rotos.

Las proposiciones de intersección se aplican sólo como condiciones necesarias.
"""
import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx

from sftcalc.buildings import (
    core,
    euler_char,
    graph,
    is_connected,
    is_trivial_breaking,
    subbuilding,
)
from sftcalc.config import get_settings
from sftcalc.errors import (
    CatalogError,
    ConsistencyError,
    IncompleteInputError,
    InvalidInputError,
    NoCoreError,
)
from sftcalc.index_calculus import (
    component_index,
    defect_terms,
    fredholm_index,
    isolated_component,
    normal_chern,
    puncture_parities,
    resolve_constraints,
)
from sftcalc.models import (
    Building,
    Component,
    ConstantVerdict,
    ConstraintSet,
    LimitType,
    MainTheoremVerdict,
    NiceVerdict,
    OrbitRef,
    Puncture,
    PunctureKey,
    StableLimitVerdict,
    SubbuildingVerdict,
    TrivialBoundaryData,
    Violation,
    format_key,
)
from sftcalc.orbits import OrbitCatalog
from sftcalc.utils import gcd_cover
from sftcalc.validation import building_validator

logger = logging.getLogger(__name__)


# Edificios "nice"

def _image_groups(b: Building) -> Dict[str, List[Component]]:
    groups: Dict[str, List[Component]] = {}
    for comp in b.components:
        label = comp.image_class if comp.image_class is not None else f"<{comp.id}>"
        groups.setdefault(label, []).append(comp)
    return groups


def _end_signature(comp: Component) -> List[Tuple[str, str, int]]:
    return sorted((p.sign, p.orbit.simple, p.orbit.k) for p in comp.punctures)


def validate_nice(b: Building, catalog: OrbitCatalog, c: Optional[ConstraintSet] = None) -> NiceVerdict:
    """Comprobar que el edificio es "nice" (condiciones combinatorias necesarias)"""
    b = building_validator.check(resolve_constraints(b, c))
    violations: List[Violation] = []
    assumptions: List[str] = []

    missing = []
    for comp in b.components:
        if comp.kind != "nontrivial":
            continue
        if comp.wind_pi is None:
            missing.append(f"{comp.id}.wind_pi")
        missing.extend(
            f"{format_key((comp.id, i))}.controlling_winding"
            for i, p in enumerate(comp.punctures) if p.controlling_winding is None
        )
    if missing:
        raise IncompleteInputError(missing)

    for idx, (x, y) in enumerate(b.nodal_pairs):
        violations.append(Violation("HAS_NODE", f"node {idx}", f"nodal pair ({x}, {y})"))

    zero_defect = set()
    for comp in b.components:
        if comp.kind == "constant":
            violations.append(Violation("BAD_COMPONENT_KIND", comp.id, "constant component"))
        elif comp.kind == "trivial":
            if not comp.is_trivial_cylinder:
                violations.append(Violation("BAD_COMPONENT_KIND", comp.id,
                                            "trivial component is not a trivial cylinder"))
        else:
            if comp.wind_pi != 0:
                violations.append(Violation("BAD_COMPONENT_KIND", comp.id,
                                            f"wind_pi = {comp.wind_pi}, embedded projection needs 0"))
            terms, _ = defect_terms(isolated_component(b, comp.id), comp.id, catalog)
            for i, value in terms:
                if value > 0:
                    violations.append(Violation("DEFECT_POSITIVE", format_key((comp.id, i)),
                                                f"asymptotic defect {value}"))
                else:
                    zero_defect.add((comp.id, i))

    groups = _image_groups(b)
    for label, members in sorted(groups.items()):
        reference = _end_signature(members[0])
        for comp in members[1:]:
            if _end_signature(comp) != reference:
                violations.append(Violation("IMAGE_CLASH", comp.id,
                                            f"image class {label!r} shared with {members[0].id!r} "
                                            "but the puncture orbits differ"))
    nontrivial = [comp for comp in b.components if comp.kind == "nontrivial"]
    for a, other in itertools.combinations(sorted(nontrivial, key=lambda comp: comp.id), 2):
        if a.image_class is None or a.image_class != other.image_class:
            assumptions.append(f"{a.id} and {other.id}: projections assumed disjoint")

    # Órbitas de ruptura no triviales
    flagged = set()
    for idx, (pos, neg) in enumerate(b.breaking_pairs):
        if is_trivial_breaking(b, idx):
            continue
        orbit = b.puncture(pos).orbit
        where = f"pair {idx}"
        code = None
        if catalog.parity(orbit) == 1:
            code, message = "BREAKING_ORBIT_ODD", f"breaking orbit {orbit} is odd"
        elif orbit.k == 2 and not catalog.is_bad(orbit):
            code, message = "NOT_BAD_DOUBLE", f"breaking orbit {orbit} is a double cover but not bad"
        elif orbit.k >= 3:
            code, message = "BREAKING_ORBIT_MULTIPLICITY", f"breaking orbit {orbit} has multiplicity {orbit.k}"
        if code:
            violations.append(Violation(code, where, message))
            flagged.update((pos, neg))

    ends: List[Tuple[PunctureKey, Component, Puncture]] = [
        ((comp.id, i), comp, z) for comp in nontrivial for i, z in enumerate(comp.punctures)
    ]
    for key, comp, z in ends:
        if key in flagged or key not in zero_defect:
            continue
        if gcd_cover(z.orbit.k, z.controlling_winding) != 1:
            violations.append(Violation("NON_SIMPLE_EXTREMAL", format_key(key),
                                        f"extremal eigenfunction of {z.orbit} with winding "
                                        f"{z.controlling_winding} is multiply covered"))

    direct = {frozenset(pair) for pair in b.breaking_pairs}
    for (k1, c1, z1), (k2, c2, z2) in itertools.combinations(ends, 2):
        if z1.orbit.simple != z2.orbit.simple or k1 in flagged or k2 in flagged:
            continue
        if frozenset((k1, k2)) in direct:
            continue
        if c1.id != c2.id and c1.image_class is not None and c1.image_class == c2.image_class:
            continue
        where = f"{format_key(k1)},{format_key(k2)}"
        if z1.sign == z2.sign:
            if z1.orbit.k != z2.orbit.k or z1.controlling_winding != z2.controlling_winding:
                violations.append(Violation("MIXED_MULTIPLICITY", where,
                                            "ends of the same sign at one orbit need equal "
                                            "multiplicity and winding"))
        else:
            orbit = z1.orbit
            allowed = z1.orbit.k == z2.orbit.k and (
                (orbit.k == 1 and catalog.is_even(orbit)) or (orbit.k == 2 and catalog.is_bad(orbit))
            )
            if not allowed:
                violations.append(Violation("MIXED_MULTIPLICITY", where,
                                            "ends of opposite signs at one orbit need a simple even "
                                            "or a bad double cover"))

    return NiceVerdict(violations=tuple(sorted(violations)), assumptions=tuple(assumptions))


# Subedificios triviales

def trivial_subbuilding_check(d: TrivialBoundaryData) -> SubbuildingVerdict:
    """Relaciones lineales de frontera e identidad de c_N de un subedificio trivial maximal"""
    minus_chi = -d.chi
    problems = []
    if min(d.p, d.q, d.r, d.s) < 0 or d.m_C < 1 or d.m_E < 1:
        problems.append("counts must be nonnegative and multiplicities positive")
    if d.p + d.r == 0 or d.q + d.s == 0 or d.p + d.q == 0:
        problems.append("need p + r > 0, q + s > 0 and p + q > 0")
    if problems:
        return SubbuildingVerdict(
            violations=tuple(Violation("INVALID_BOUNDARY", "boundary", m) for m in problems),
            branch=None, multiplicity=None, identity_lhs=None, minus_chi=minus_chi,
        )

    violations = []
    if d.p * d.m_C + d.r * d.m_E != d.q * d.m_C + d.s * d.m_E:
        violations.append(Violation(
            "MULTIPLICITY_RELATION", "boundary",
            f"p*m_C + r*m_E = {d.p * d.m_C + d.r * d.m_E} != q*m_C + s*m_E = {d.q * d.m_C + d.s * d.m_E}",
        ))
    if d.p * d.w_C + d.r * d.w_E != d.q * d.w_C + d.s * d.w_E:
        violations.append(Violation(
            "WINDING_RELATION", "boundary",
            f"p*w_C + r*w_E = {d.p * d.w_C + d.r * d.w_E} != q*w_C + s*w_E = {d.q * d.w_C + d.s * d.w_E}",
        ))

    branch, multiplicity = None, None
    if d.p == d.q and d.r == d.s:
        m = d.m_C
        if d.r > 0 and (d.m_E != d.m_C or d.w_E != d.w_C):
            violations.append(Violation("OPPOSITE_SIGN_ENDS", "boundary",
                                        "balanced ends need m_C = m_E and w_C = w_E"))
        if m == 1:
            if d.simple_even is False:
                violations.append(Violation("OPPOSITE_SIGN_ENDS", "boundary",
                                            "simple ends of opposite signs need an even orbit"))
            branch, multiplicity = "simple", 1
        elif m == 2:
            if d.simple_odd_hyperbolic is False:
                violations.append(Violation("OPPOSITE_SIGN_ENDS", "boundary",
                                            "double ends of opposite signs need an odd hyperbolic orbit"))
            branch, multiplicity = "bad_double", 2
        else:
            violations.append(Violation("OPPOSITE_SIGN_ENDS", "boundary",
                                        f"multiplicity {m} is neither 1 nor 2"))
    else:
        if d.m_C * d.w_E != d.m_E * d.w_C:
            violations.append(Violation("WINDING_RATIO", "boundary",
                                        f"m_C*w_E = {d.m_C * d.w_E} != m_E*w_C = {d.m_E * d.w_C}"))
        if gcd_cover(d.m_C, d.w_C) != 1 or gcd_cover(d.m_E, d.w_E) != 1:
            violations.append(Violation("NON_SIMPLE_EXTREMAL", "boundary",
                                        "extremal eigenfunctions at the boundary are multiply covered"))
        if not violations:
            multiplicity = d.m_C
            branch = "bad_double" if multiplicity == 2 else "simple"

    expected = []
    if d.p:
        expected += [d.w_C - d.alpha_plus_C] * d.p
    if d.q:
        expected += [d.alpha_minus_C - d.w_C] * d.q
    if any(value < 0 for value in expected):
        violations.append(Violation("NEGATIVE_DEFECT", "boundary",
                                    "neighbor windings lie on the wrong side of the extremal ones"))
    defects = expected
    if d.neighbor_defects is not None:
        defects = list(d.neighbor_defects)
        if len(defects) != d.p + d.q or defects != expected:
            violations.append(Violation("DEFECT_MISMATCH", "boundary",
                                        f"neighbor defects {defects} differ from {expected}"))

    # c_N(ũᵗ; ĉ) + Σ_{Γ̂_C} [p + def] por la definición directa
    c_n = minus_chi + d.p * d.alpha_minus_C + d.r * d.w_E - d.q * d.alpha_plus_C - d.s * d.w_E
    identity_lhs = c_n + (d.p + d.q) * d.parity_C + sum(defects)
    return SubbuildingVerdict(
        violations=tuple(violations),
        branch=branch,
        multiplicity=multiplicity,
        identity_lhs=identity_lhs,
        minus_chi=minus_chi,
    )


def constant_subbuilding_bound(chi_closed: int, n_attach: int, stability: Sequence[int]) -> ConstantVerdict:
    """c_N(ũᶜ) + 2·#Δ̂_N = −χ + 2·n_attach, que debe ser positivo"""
    if n_attach < 1:
        raise InvalidInputError(f"a maximal constant subbuilding attaches by at least one node, got {n_attach}")
    violations = [
        Violation("UNSTABLE_CONSTANT", f"constant {i}", f"chi = {chi} is not negative")
        for i, chi in enumerate(stability) if chi >= 0
    ]
    value = -chi_closed + 2 * n_attach
    if value <= 0:
        violations.append(Violation("NONPOSITIVE_BOUND", "constant", f"bound value {value} is not positive"))
    return ConstantVerdict(violations=tuple(violations), c_N=-chi_closed, n_attach=n_attach, value=value)


def _pieces_of_kind(b: Building, kind: str) -> List[List[str]]:
    ids = [comp.id for comp in b.components if comp.kind == kind]
    sub = graph(b).subgraph(ids)
    return sorted(sorted(piece) for piece in nx.connected_components(sub))


def maximal_trivial_subbuildings(b: Building) -> List[List[str]]:
    return _pieces_of_kind(b, "trivial")


def maximal_constant_subbuildings(b: Building) -> List[List[str]]:
    return _pieces_of_kind(b, "constant")


def _single(values: List[int], name: str) -> int:
    if len(set(values)) != 1:
        raise InvalidInputError(f"boundary data needs a single {name}, got {sorted(set(values))}")
    return values[0]


def trivial_boundary_data(b: Building, component_ids: Sequence[str], catalog: OrbitCatalog) -> TrivialBoundaryData:
    """Datos de frontera (p, q, r, s, m, w, χ) de un subedificio trivial maximal"""
    sub, _ = subbuilding(b, component_ids)
    glued = b.glued_keys()
    severed = [key for key in sub.external_keys() if key in glued]
    inherited = [key for key in sub.external_keys() if key not in glued]
    if not severed:
        raise InvalidInputError("trivial subbuilding has no severed breaking punctures")

    partners: Dict[PunctureKey, PunctureKey] = {}
    for pos, neg in b.breaking_pairs:
        partners[pos] = neg
        partners[neg] = pos

    simple = {b.puncture(key).orbit.simple for key in severed + inherited}
    if len(simple) != 1:
        raise InvalidInputError(f"boundary punctures lie over several simple orbits: {sorted(simple)}")

    windings, missing = [], []
    for key in severed:
        partner = b.puncture(partners[key])
        if partner.controlling_winding is None:
            missing.append(f"{format_key(partners[key])}.controlling_winding")
        windings.append(partner.controlling_winding)
    if missing:
        raise IncompleteInputError(missing)

    m_C = _single([b.puncture(key).orbit.k for key in severed], "severed multiplicity")
    w_C = _single(windings, "severed winding")
    orbit_C = OrbitRef(simple.pop(), m_C)
    base = catalog.cz_index(orbit_C, 0.0)

    if inherited:
        m_E = _single([b.puncture(key).orbit.k for key in inherited], "inherited multiplicity")
        e_windings = []
        for key in inherited:
            z = b.puncture(key)
            if z.controlling_winding is not None:
                e_windings.append(z.controlling_winding)
            else:
                summary = catalog.cz_index(z.orbit, z.threshold)
                e_windings.append(summary.alpha_minus if z.sign == "+" else summary.alpha_plus)
        w_E = _single(e_windings, "inherited winding")
    else:
        m_E, w_E = m_C, w_C

    try:
        simple_ref = OrbitRef(orbit_C.simple, 1)
        simple_even = catalog.is_even(simple_ref)
        simple_odd_hyperbolic = not simple_even and catalog.is_hyperbolic(orbit_C.simple)
    except CatalogError:
        simple_even, simple_odd_hyperbolic = None, None

    defects = []
    for sign in ("+", "-"):
        for key in severed:
            if b.puncture(key).sign != sign:
                continue
            # signo: los vecinos sobre Γ̂⁺_C acotan por α⁺, los de Γ̂⁻_C por α⁻
            defects.append(w_C - base.alpha_plus if sign == "+" else base.alpha_minus - w_C)

    return TrivialBoundaryData(
        p=sum(1 for key in severed if b.puncture(key).sign == "+"),
        q=sum(1 for key in severed if b.puncture(key).sign == "-"),
        r=sum(1 for key in inherited if b.puncture(key).sign == "+"),
        s=sum(1 for key in inherited if b.puncture(key).sign == "-"),
        m_C=m_C,
        m_E=m_E,
        w_C=w_C,
        w_E=w_E,
        chi=euler_char(sub),
        alpha_minus_C=base.alpha_minus,
        alpha_plus_C=base.alpha_plus,
        simple_even=simple_even,
        simple_odd_hyperbolic=simple_odd_hyperbolic,
        neighbor_defects=tuple(defects),
    )


def trivial_identity_direct(b: Building, component_ids: Sequence[str], catalog: OrbitCatalog) -> int:
    """c_N(ũᵗ; ĉ) + Σ_{Γ̂_C} [p + def] evaluado sobre el subedificio y sus vecinos reales"""
    sub, constraints = subbuilding(b, component_ids)
    glued = b.glued_keys()
    partners: Dict[PunctureKey, PunctureKey] = {}
    for pos, neg in b.breaking_pairs:
        partners[pos] = neg
        partners[neg] = pos

    total = normal_chern(sub, catalog, constraints)
    missing = []
    for key in sub.external_keys():
        if key not in glued:
            continue
        total += catalog.parity(b.puncture(key).orbit)
        cid, idx = partners[key]
        terms, _ = defect_terms(isolated_component(b, cid), cid, catalog)
        found = dict(terms)
        if idx not in found:
            missing.append(f"{format_key((cid, idx))}.controlling_winding")
            continue
        total += found[idx]
    if missing:
        raise IncompleteInputError(missing)
    return total


def constant_boundary_data(b: Building, component_ids: Sequence[str]) -> Tuple[int, int, List[int]]:
    """(χ cerrado, nodos de anclaje, χ(Ṡᵢ) por componente) de un subedificio constante"""
    wanted = set(component_ids)
    sub, _ = subbuilding(b, component_ids)
    n_attach = sum(1 for x, y in b.nodal_pairs if (x in wanted) != (y in wanted))
    stability = [2 - 2 * comp.genus - b.node_endpoints(comp.id) for comp in sub.components]
    return euler_char(sub), n_attach, stability


# Límites estables

def _reject(code: str, location: str, message: str, **fields) -> StableLimitVerdict:
    return StableLimitVerdict(taxonomy="REJECTED", violations=(Violation(code, location, message),), **fields)


def _even_punctures(single: Building, catalog: OrbitCatalog) -> Tuple[PunctureKey, ...]:
    gamma0, _ = puncture_parities(single, catalog)
    return gamma0


def classify_stable_limit(b: Building, catalog: OrbitCatalog,
                          c: Optional[ConstraintSet] = None) -> StableLimitVerdict:
    """Clasificar un límite de curvas estables de índice 1 o 2 (SMOOTH / BROKEN_PAIR / REJECTED)"""
    b = resolve_constraints(b, c)
    nice = validate_nice(b, catalog)
    if not nice.ok:
        return StableLimitVerdict(taxonomy="REJECTED", violations=nice.violations)
    if not is_connected(b):
        return _reject("DISCONNECTED", "building", "building is not connected")

    index = fredholm_index(b, catalog)
    try:
        cb = core(b)
    except NoCoreError:
        return _reject("INDEX_OUT_OF_RANGE", "building", "building has no nontrivial core", index=index)
    core_ids = tuple(sorted(cb.component_ids))
    per = {cid: component_index(cb, cid, catalog) for cid in core_ids}

    for cid in core_ids:
        if per[cid].index <= 0:
            return _reject("NON_GENERIC", cid, f"core component has index {per[cid].index}",
                           index=index, core_components=core_ids)

    evens = {cid: _even_punctures(isolated_component(cb, cid), catalog) for cid in core_ids}
    if len(core_ids) > 1:
        for cid in core_ids:
            if len(evens[cid]) != 1:
                return _reject("EVEN_PUNCTURES", cid,
                               f"core component has {len(evens[cid])} even constrained punctures",
                               index=index, core_components=core_ids)

    if index not in (1, 2):
        return _reject("INDEX_OUT_OF_RANGE", "building", f"index {index} is not 1 or 2",
                       index=index, core_components=core_ids)
    if len(core_ids) == 1:
        return StableLimitVerdict(taxonomy="SMOOTH", index=index, core_components=core_ids)
    if index == 1 or len(core_ids) > 2:
        return _reject("CORE_COMPONENT_COUNT", "core", f"index {index} with {len(core_ids)} core components",
                       index=index, core_components=core_ids)
    if len(cb.breaking_pairs) != 1:
        return _reject("BREAKING_PAIR_COUNT", "core",
                       f"core has {len(cb.breaking_pairs)} breaking pairs", index=index, core_components=core_ids)

    for cid in core_ids:
        if per[cid].index != 1:
            return _reject("SIDE_INDEX", cid, f"side index {per[cid].index} is not 1",
                           index=index, core_components=core_ids)
    pos, neg = cb.breaking_pairs[0]
    for key in (pos, neg):
        if evens[key[0]] != (key,):
            return _reject("EVEN_PUNCTURE_NOT_BREAKING", key[0],
                           "the even puncture of the side is not its breaking puncture",
                           index=index, core_components=core_ids)
    top, bottom = cb.component(neg[0]), cb.component(pos[0])
    if top.image_class is not None and top.image_class == bottom.image_class:
        return _reject("SHARED_IMAGE", "core", f"both sides share image class {top.image_class!r}",
                       index=index, core_components=core_ids)

    return StableLimitVerdict(taxonomy="BROKEN_PAIR", index=index, breaking_orbit=cb.puncture(pos).orbit,
                              core_components=core_ids)


def check_main_theorem(b: Building, catalog: OrbitCatalog, c: Optional[ConstraintSet] = None) -> MainTheoremVerdict:
    """Límite de curvas bien embebidas con c_N = 0: c_N(b) = 0, b "nice" y c_N = 0 en el núcleo"""
    b = resolve_constraints(b, c)
    c_n = normal_chern(b, catalog)
    nice = validate_nice(b, catalog)
    violations = []
    if c_n != 0:
        violations.append(Violation("CN_NONZERO", "building", f"c_N = {c_n}"))

    core_values: List[Tuple[str, int]] = []
    try:
        cb = core(b)
    except NoCoreError as e:
        logger.warning("main theorem check without core: %s", e.message)
    else:
        for cid in sorted(cb.component_ids):
            value = component_index(cb, cid, catalog).c_N
            core_values.append((cid, value))
            if value != 0:
                violations.append(Violation("CORE_CN_NONZERO", cid, f"core component has c_N = {value}"))

    trivial_checks = []
    for ids in maximal_trivial_subbuildings(b):
        try:
            data = trivial_boundary_data(b, ids, catalog)
        except (IncompleteInputError, InvalidInputError) as e:
            logger.warning("trivial subbuilding %s skipped: %s", ids, e.message)
            continue
        verdict = trivial_subbuilding_check(data)
        comparable = not any(b.component(cid).rel_c1 for cid in ids) and not any(
            b.puncture(key).controlling_winding is not None for key in b.external_keys() if key[0] in ids
        )
        if verdict.ok and comparable:
            direct = trivial_identity_direct(b, ids, catalog)
            if direct != verdict.identity_lhs:
                raise ConsistencyError(
                    f"trivial subbuilding {ids}: boundary formula gives {verdict.identity_lhs}, "
                    f"direct c_N route gives {direct}"
                )
        trivial_checks.append((ids[0], verdict))
    constant_checks = []
    for ids in maximal_constant_subbuildings(b):
        chi_closed, n_attach, stability = constant_boundary_data(b, ids)
        if n_attach < 1:
            logger.warning("constant subbuilding %s has no attaching node", ids)
            continue
        constant_checks.append((ids[0], constant_subbuilding_bound(chi_closed, n_attach, stability)))

    return MainTheoremVerdict(
        c_N=c_n,
        nice=nice,
        violations=tuple(violations),
        core_c_N=tuple(core_values),
        trivial_checks=tuple(trivial_checks),
        constant_checks=tuple(constant_checks),
    )


# Enumeración de límites rotos

def _side(punctures: Sequence[Puncture], component_id: str = "side") -> Building:
    """Componente de género 0 en el marco global (rel_c1 = 0)"""
    return Building(components=(Component(id=component_id, genus=0, punctures=tuple(punctures)),))


def _check_stable_input(asymptotics: Sequence[Puncture], catalog: OrbitCatalog) -> None:
    whole = _side(asymptotics)
    index = fredholm_index(whole, catalog)
    if index != 2:
        raise InvalidInputError(f"asymptotics describe an index {index} curve, expected index 2")
    gamma0, _ = puncture_parities(whole, catalog)
    if gamma0:
        raise InvalidInputError(
            f"2c_N = ind - 2 + 2g + #Gamma0 = {len(gamma0)} != 0: even constrained punctures "
            + ", ".join(str(i) for _, i in gamma0)
        )


def _evaluate_candidate(asymptotics: Sequence[Puncture], top: Tuple[int, ...], orbit: OrbitRef,
                        catalog: OrbitCatalog) -> Optional[LimitType]:
    bottom = tuple(i for i in range(len(asymptotics)) if i not in top)
    upper = _side([asymptotics[i] for i in top] + [Puncture(sign="-", orbit=orbit)])
    lower = _side([asymptotics[i] for i in bottom] + [Puncture(sign="+", orbit=orbit)])
    top_index = fredholm_index(upper, catalog)
    bottom_index = fredholm_index(lower, catalog)
    if top_index != 1 or bottom_index != 1:
        return None
    top_c_n = normal_chern(upper, catalog)
    bottom_c_n = normal_chern(lower, catalog)
    if top_c_n != 0 or bottom_c_n != 0:
        return None
    return LimitType(top_punctures=top, bottom_punctures=bottom, breaking_orbit=orbit,
                     top_index=top_index, top_c_N=top_c_n, bottom_index=bottom_index, bottom_c_N=bottom_c_n)


def enumerate_limits(asymptotics: Sequence[Puncture], catalog: OrbitCatalog,
                     max_workers: Optional[int] = None) -> List[LimitType]:
    """Todos los límites rotos (arriba, abajo, órbita de ruptura) de una curva estable de índice 2"""
    _check_stable_input(asymptotics, catalog)
    candidates = catalog.breaking_candidates()
    n = len(asymptotics)
    tops = [
        tuple(i for i in range(n) if mask >> i & 1)
        for mask in range(2 ** n)
    ]
    jobs = [(top, orbit) for top in tops for orbit in candidates]
    logger.info("enumerating %d partitions x %d breaking orbits", len(tops), len(candidates))
    workers = max_workers or get_settings().max_concurrency
    with ThreadPoolExecutor(max_workers=workers) as pool:
        results = list(pool.map(lambda job: _evaluate_candidate(asymptotics, job[0], job[1], catalog), jobs))
    return sorted(limit for limit in results if limit is not None)


def materialize_limit(limit: LimitType, asymptotics: Sequence[Puncture], catalog: OrbitCatalog) -> Building:
    """Edificio de dos componentes ("top" arriba, "bottom" abajo) con ventanas extremales"""

    def extremal(z: Puncture) -> Puncture:
        summary = catalog.cz_index(z.orbit, z.threshold)
        winding = summary.alpha_minus if z.sign == "+" else summary.alpha_plus
        return Puncture(sign=z.sign, orbit=z.orbit, constraint=z.constraint, controlling_winding=winding)

    top_ends = [extremal(asymptotics[i]) for i in limit.top_punctures]
    top_ends.append(extremal(Puncture(sign="-", orbit=limit.breaking_orbit)))
    bottom_ends = [extremal(asymptotics[i]) for i in limit.bottom_punctures]
    bottom_ends.append(extremal(Puncture(sign="+", orbit=limit.breaking_orbit)))
    top = Component(id="top", punctures=tuple(top_ends), wind_pi=0, image_class="top")
    bottom = Component(id="bottom", punctures=tuple(bottom_ends), wind_pi=0, image_class="bottom")
    pair = (("bottom", len(bottom_ends) - 1), ("top", len(top_ends) - 1))
    return Building(components=(top, bottom), breaking_pairs=(pair,))
