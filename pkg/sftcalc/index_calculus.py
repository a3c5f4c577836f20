"""
Índices y números de Chern: CZ total restringido, índice de Fredholm,
c_N restringido, paridades de punturas, defectos asintóticos y auditorías
de aditividad.

Convención para edificios no conexos: χ se suma sobre componentes y Γ son
todas las punturas externas, de modo que la aditividad es una identidad.
"""
import logging
from typing import List, Optional, Tuple

from sftcalc.buildings import (
    apply_constraints,
    arithmetic_genus,
    euler_char,
    is_connected,
    subbuilding,
)
from sftcalc.errors import (
    ConsistencyError,
    IncompleteInputError,
    InconsistentDataError,
    InvalidInputError,
)
from sftcalc.models import (
    AdditivityReport,
    Building,
    ComponentIndex,
    ConstraintSet,
    DefectReport,
    IndexReport,
    PunctureKey,
    format_key,
)
from sftcalc.orbits import OrbitCatalog

logger = logging.getLogger(__name__)


def resolve_constraints(b: Building, c: Optional[ConstraintSet]) -> Building:
    """Edificio con las restricciones de c escritas en línea"""
    return b if c is None else apply_constraints(b, c)


def cz_total(b: Building, catalog: OrbitCatalog, c: Optional[ConstraintSet] = None) -> int:
    """Σ_{Γ⁺} μ(γ_z; c_z) − Σ_{Γ⁻} μ(γ_z; −c_z) sobre punturas externas"""
    b = resolve_constraints(b, c)
    total = 0
    for key in b.external_keys():
        z = b.puncture(key)
        mu = catalog.cz_index(z.orbit, z.threshold).mu_cz
        total += mu if z.sign == "+" else -mu
    return total


def fredholm_index(b: Building, catalog: OrbitCatalog, c: Optional[ConstraintSet] = None) -> int:
    """ind(b; c) = −χ + 2·Σ c1 + CZ total"""
    b = resolve_constraints(b, c)
    return -euler_char(b) + 2 * sum(comp.rel_c1 for comp in b.components) + cz_total(b, catalog)


def puncture_parities(b: Building, catalog: OrbitCatalog,
                      c: Optional[ConstraintSet] = None) -> Tuple[Tuple[PunctureKey, ...], Tuple[PunctureKey, ...]]:
    """(Γ₀, Γ₁): punturas externas de paridad restringida par e impar"""
    b = resolve_constraints(b, c)
    even, odd = [], []
    for key in b.external_keys():
        z = b.puncture(key)
        (odd if catalog.cz_index(z.orbit, z.threshold).parity else even).append(key)
    return tuple(sorted(even)), tuple(sorted(odd))


def _alpha_sum(b: Building, catalog: OrbitCatalog) -> int:
    total = 0
    for key in b.external_keys():
        z = b.puncture(key)
        summary = catalog.cz_index(z.orbit, z.threshold)
        total += summary.alpha_minus if z.sign == "+" else -summary.alpha_plus
    return total


def normal_chern(b: Building, catalog: OrbitCatalog, c: Optional[ConstraintSet] = None) -> int:
    """c_N(b; c) = Σ c1 − χ + Σ_{Γ⁺} α−(−c) − Σ_{Γ⁻} α+(+c)"""
    b = resolve_constraints(b, c)
    value = sum(comp.rel_c1 for comp in b.components) - euler_char(b) + _alpha_sum(b, catalog)
    if is_connected(b):
        index = fredholm_index(b, catalog)
        genus = arithmetic_genus(b)
        gamma0, _ = puncture_parities(b, catalog)
        if 2 * value != index - 2 + 2 * genus + len(gamma0):
            raise ConsistencyError(
                f"2*c_N = {2 * value} but ind - 2 + 2g + #Gamma0 = {index - 2 + 2 * genus + len(gamma0)}"
            )
    return value


def isolated_component(b: Building, component_id: str) -> Building:
    """La componente suave sola, con restricciones inducidas y sin puntos nodales"""
    sub, _ = subbuilding(b, [component_id])
    return Building(components=sub.components)


def defect_terms(b: Building, component_id: str, catalog: OrbitCatalog) -> Tuple[List[Tuple[int, int]], List[str]]:
    comp = b.component(component_id)
    terms, missing = [], []
    for idx, z in enumerate(comp.punctures):
        if z.controlling_winding is None:
            missing.append(f"{format_key((component_id, idx))}.controlling_winding")
            continue
        summary = catalog.cz_index(z.orbit, z.threshold)
        extremal = summary.alpha_minus if z.sign == "+" else summary.alpha_plus
        terms.append((idx, abs(extremal - z.controlling_winding)))
    return terms, missing


def defect(b: Building, component_id: str, catalog: OrbitCatalog,
           c: Optional[ConstraintSet] = None) -> Optional[DefectReport]:
    """Defecto asintótico restringido de una componente no trivial (None si es trivial)"""
    b = resolve_constraints(b, c)
    comp = b.component(component_id)
    if comp.kind != "nontrivial":
        return None
    single = isolated_component(b, component_id)
    terms, missing = defect_terms(single, component_id, catalog)
    if missing:
        raise IncompleteInputError(missing)
    total = sum(d for _, d in terms)
    c_n = normal_chern(single, catalog)
    if comp.wind_pi is not None:
        if comp.wind_pi + total != c_n:
            raise InconsistentDataError(
                f"component {component_id!r}: wind_pi {comp.wind_pi} + defect {total} != c_N {c_n}"
            )
        wind_pi, supplied = comp.wind_pi, True
    else:
        wind_pi, supplied = c_n - total, False
        if wind_pi < 0:
            raise InconsistentDataError(
                f"component {component_id!r}: implied wind_pi = c_N - defect = {wind_pi} is negative"
            )
    return DefectReport(
        component=component_id,
        per_puncture=tuple(terms),
        total=total,
        c_N=c_n,
        wind_pi=wind_pi,
        wind_pi_supplied=supplied,
    )


def component_index(b: Building, component_id: str, catalog: OrbitCatalog,
                    c: Optional[ConstraintSet] = None) -> ComponentIndex:
    """Índice, c_N y defecto de una componente con restricciones inducidas"""
    b = resolve_constraints(b, c)
    single = isolated_component(b, component_id)
    comp = single.components[0]
    index = fredholm_index(single, catalog)
    c_n = normal_chern(single, catalog)

    total_defect, consistent = None, None
    if comp.kind == "nontrivial":
        terms, missing = defect_terms(single, component_id, catalog)
        if not missing:
            total_defect = sum(d for _, d in terms)
            if comp.wind_pi is not None:
                consistent = comp.wind_pi + total_defect == c_n
            else:
                consistent = c_n - total_defect >= 0
    return ComponentIndex(
        component=component_id,
        constraints=ConstraintSet.from_building(single),
        index=index,
        c_N=c_n,
        defect=total_defect,
        wind_pi_consistent=consistent,
    )


def index_report(b: Building, catalog: OrbitCatalog, c: Optional[ConstraintSet] = None) -> IndexReport:
    """Informe completo de índices del edificio"""
    b = resolve_constraints(b, c)
    gamma0, gamma1 = puncture_parities(b, catalog)
    per_component = tuple(
        component_index(b, cid, catalog) for cid in sorted(b.component_ids)
    )
    report = IndexReport(
        chi=euler_char(b),
        genus=arithmetic_genus(b) if is_connected(b) else None,
        c1_total=sum(comp.rel_c1 for comp in b.components),
        mu_total=cz_total(b, catalog),
        index=fredholm_index(b, catalog),
        c_N=normal_chern(b, catalog),
        gamma0=gamma0,
        gamma1=gamma1,
        per_component=per_component,
    )
    logger.info("index report: ind=%d c_N=%d chi=%d", report.index, report.c_N, report.chi)
    return report


def verify_additivity(b: Building, catalog: OrbitCatalog, c: Optional[ConstraintSet] = None) -> AdditivityReport:
    """Aditividad del índice y de c_N sobre componentes con restricciones inducidas"""
    b = resolve_constraints(b, c)
    if not b.components:
        raise InvalidInputError("building has no components")
    per_component = tuple(component_index(b, cid, catalog) for cid in sorted(b.component_ids))
    node_points = 2 * len(b.nodal_pairs)
    breaking_parity = sum(catalog.parity(b.puncture(pos).orbit) for pos, _ in b.breaking_pairs)
    report = AdditivityReport(
        index_total=fredholm_index(b, catalog),
        index_components=sum(ci.index for ci in per_component),
        node_points=node_points,
        c_N_total=normal_chern(b, catalog),
        c_N_components=sum(ci.c_N for ci in per_component),
        breaking_parity=breaking_parity,
        per_component=per_component,
    )
    if report.index_total != report.index_rhs:
        raise ConsistencyError(f"index additivity fails: {report.index_total} != {report.index_rhs}")
    if report.c_N_total != report.c_N_rhs:
        raise ConsistencyError(f"c_N additivity fails: {report.c_N_total} != {report.c_N_rhs}")
    return report
