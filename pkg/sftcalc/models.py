from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Literal, Mapping, Optional, Tuple

from sftcalc.errors import InvalidInputError

Sign = Literal["+", "-"]
Kind = Literal["nontrivial", "trivial", "constant"]
Side = Literal["minus", "plus"]
Taxonomy = Literal["SMOOTH", "BROKEN_PAIR", "REJECTED"]

# (id de componente, índice de puntura)
PunctureKey = Tuple[str, int]
# (puntura positiva, puntura negativa)
BreakingPair = Tuple[PunctureKey, PunctureKey]
NodalPair = Tuple[str, str]


def key_to_list(key: PunctureKey) -> List[Any]:
    return [key[0], key[1]]


def format_key(key: PunctureKey) -> str:
    return f"{key[0]}:{key[1]}"


@dataclass(frozen=True, order=True)
class OrbitRef:
    """Órbita posiblemente múltiple γ^k"""

    simple: str
    k: int = 1

    def __post_init__(self) -> None:
        if self.k < 1:
            raise InvalidInputError(f"cover multiplicity must be >= 1, got {self.k}")

    def __str__(self) -> str:
        return self.simple if self.k == 1 else f"{self.simple}^{self.k}"

    def to_dict(self) -> Dict[str, Any]:
        return {"simple": self.simple, "k": self.k}


@dataclass(frozen=True)
class Puncture:
    sign: Sign
    orbit: OrbitRef
    constraint: float = 0.0
    controlling_winding: Optional[int] = None

    @property
    def threshold(self) -> float:
        """Corte espectral con signo: −c en punturas positivas, +c en negativas"""
        return -self.constraint if self.sign == "+" else self.constraint

    def with_constraint(self, constraint: float) -> "Puncture":
        return replace(self, constraint=float(constraint))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "sign": self.sign,
            "orbit": self.orbit.to_dict(),
            "constraint": float(self.constraint),
        }
        if self.controlling_winding is not None:
            data["controlling_winding"] = self.controlling_winding
        return data


@dataclass(frozen=True)
class Component:
    id: str
    genus: int = 0
    punctures: Tuple[Puncture, ...] = ()
    rel_c1: int = 0
    kind: Kind = "nontrivial"
    # Órbita simple subyacente de una componente trivial
    orbit: Optional[str] = None
    wind_pi: Optional[int] = None
    image_class: Optional[str] = None

    @property
    def is_trivial_cylinder(self) -> bool:
        return self.kind == "trivial" and self.genus == 0 and len(self.punctures) == 2

    def with_punctures(self, punctures: Tuple[Puncture, ...]) -> "Component":
        return replace(self, punctures=tuple(punctures))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            "id": self.id,
            "genus": self.genus,
            "rel_c1": self.rel_c1,
            "kind": self.kind,
            "punctures": [p.to_dict() for p in self.punctures],
        }
        if self.orbit is not None:
            data["orbit"] = self.orbit
        if self.wind_pi is not None:
            data["wind_pi"] = self.wind_pi
        if self.image_class is not None:
            data["image_class"] = self.image_class
        return data


@dataclass(frozen=True)
class Building:
    components: Tuple[Component, ...] = ()
    breaking_pairs: Tuple[BreakingPair, ...] = ()
    nodal_pairs: Tuple[NodalPair, ...] = ()

    @property
    def component_ids(self) -> List[str]:
        return [c.id for c in self.components]

    def has_component(self, component_id: str) -> bool:
        return any(c.id == component_id for c in self.components)

    def component(self, component_id: str) -> Component:
        for comp in self.components:
            if comp.id == component_id:
                return comp
        raise InvalidInputError(f"unknown component {component_id!r}")

    def has_puncture(self, key: PunctureKey) -> bool:
        if not self.has_component(key[0]):
            return False
        return 0 <= key[1] < len(self.component(key[0]).punctures)

    def puncture(self, key: PunctureKey) -> Puncture:
        comp = self.component(key[0])
        if not 0 <= key[1] < len(comp.punctures):
            raise InvalidInputError(f"component {key[0]!r} has no puncture {key[1]}")
        return comp.punctures[key[1]]

    def puncture_keys(self) -> List[PunctureKey]:
        return [(c.id, i) for c in self.components for i in range(len(c.punctures))]

    def glued_keys(self) -> Dict[PunctureKey, int]:
        """Punturas de ruptura → índice del par que las contiene"""
        glued: Dict[PunctureKey, int] = {}
        for idx, (pos, neg) in enumerate(self.breaking_pairs):
            glued[pos] = idx
            glued[neg] = idx
        return glued

    def external_keys(self) -> List[PunctureKey]:
        glued = self.glued_keys()
        return [key for key in self.puncture_keys() if key not in glued]

    def node_endpoints(self, component_id: str) -> int:
        return sum((a == component_id) + (b == component_id) for a, b in self.nodal_pairs)

    def replace_puncture(self, key: PunctureKey, puncture: Puncture) -> "Building":
        comps = []
        for comp in self.components:
            if comp.id == key[0]:
                punctures = list(comp.punctures)
                punctures[key[1]] = puncture
                comp = comp.with_punctures(tuple(punctures))
            comps.append(comp)
        return replace(self, components=tuple(comps))

    def canonical(self) -> "Building":
        """Forma canónica: componentes por id, pares ordenados"""
        return Building(
            components=tuple(sorted(self.components, key=lambda c: c.id)),
            breaking_pairs=tuple(sorted(self.breaking_pairs)),
            nodal_pairs=tuple(sorted(tuple(sorted(pair)) for pair in self.nodal_pairs)),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "format": 1,
            "components": [c.to_dict() for c in self.components],
            "breaking_pairs": [[key_to_list(pos), key_to_list(neg)] for pos, neg in self.breaking_pairs],
            "nodal_pairs": [[a, b] for a, b in self.nodal_pairs],
        }


@dataclass(frozen=True)
class ConstraintSet:
    """Restricción asintótica c_z ≥ 0 por puntura externa"""

    values: Mapping[PunctureKey, float] = field(default_factory=dict)

    @classmethod
    def from_building(cls, building: Building) -> "ConstraintSet":
        return cls({key: building.puncture(key).constraint for key in building.external_keys()})

    def get(self, key: PunctureKey) -> float:
        return float(self.values.get(key, 0.0))

    def to_dict(self) -> Dict[str, float]:
        return {format_key(key): float(value) for key, value in sorted(self.values.items())}


@dataclass(frozen=True)
class SpectralEntry:
    eigenvalue: float
    winding: int
    multiplicity: int

    def to_dict(self) -> Dict[str, Any]:
        return {"eigenvalue": self.eigenvalue, "winding": self.winding, "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class SpectralTable:
    entries: Tuple[SpectralEntry, ...]
    window: float
    grid: Optional[int] = None

    def below(self, threshold: float) -> List[SpectralEntry]:
        return [e for e in self.entries if e.eigenvalue < threshold]

    def above(self, threshold: float) -> List[SpectralEntry]:
        return [e for e in self.entries if e.eigenvalue > threshold]

    def count_between(self, lower: float, upper: float) -> int:
        """Autovalores en (lower, upper) contados con multiplicidad"""
        return sum(e.multiplicity for e in self.entries if lower < e.eigenvalue < upper)

    def clipped(self, window: float) -> "SpectralTable":
        entries = tuple(e for e in self.entries if abs(e.eigenvalue) <= window)
        return SpectralTable(entries=entries, window=min(window, self.window), grid=self.grid)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "entries": [e.to_dict() for e in self.entries],
            "window": self.window,
            "grid": self.grid,
        }


@dataclass(frozen=True)
class SpectralSummary:
    alpha_minus: int
    alpha_plus: int
    parity: int
    mu_cz: int
    threshold: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha_minus": self.alpha_minus,
            "alpha_plus": self.alpha_plus,
            "parity": self.parity,
            "mu_cz": self.mu_cz,
            "threshold": self.threshold,
        }


@dataclass(frozen=True)
class ComponentIndex:
    component: str
    constraints: ConstraintSet
    index: int
    c_N: int
    defect: Optional[int] = None
    wind_pi_consistent: Optional[bool] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "component": self.component,
            "constraints": self.constraints.to_dict(),
            "index": self.index,
            "c_N": self.c_N,
            "defect": self.defect,
            "wind_pi_consistent": self.wind_pi_consistent,
        }


@dataclass(frozen=True)
class IndexReport:
    chi: int
    genus: Optional[int]
    c1_total: int
    mu_total: int
    index: int
    c_N: int
    gamma0: Tuple[PunctureKey, ...]
    gamma1: Tuple[PunctureKey, ...]
    per_component: Tuple[ComponentIndex, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "chi": self.chi,
            "genus": self.genus,
            "c1_total": self.c1_total,
            "mu_total": self.mu_total,
            "index": self.index,
            "c_N": self.c_N,
            "gamma0": [format_key(k) for k in self.gamma0],
            "gamma1": [format_key(k) for k in self.gamma1],
            "per_component": [c.to_dict() for c in self.per_component],
        }


@dataclass(frozen=True)
class DefectReport:
    component: str
    per_puncture: Tuple[Tuple[int, int], ...]
    total: int
    c_N: int
    wind_pi: int
    wind_pi_supplied: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "component": self.component,
            "per_puncture": [[i, d] for i, d in self.per_puncture],
            "total": self.total,
            "c_N": self.c_N,
            "wind_pi": self.wind_pi,
            "wind_pi_supplied": self.wind_pi_supplied,
        }


@dataclass(frozen=True)
class AdditivityReport:
    index_total: int
    index_components: int
    node_points: int
    c_N_total: int
    c_N_components: int
    breaking_parity: int
    per_component: Tuple[ComponentIndex, ...]

    @property
    def index_rhs(self) -> int:
        return self.index_components + self.node_points

    @property
    def c_N_rhs(self) -> int:
        return self.c_N_components + self.breaking_parity + self.node_points

    def to_dict(self) -> Dict[str, Any]:
        return {
            "index": {"building": self.index_total, "components": self.index_components,
                      "node_points": self.node_points, "rhs": self.index_rhs},
            "c_N": {"building": self.c_N_total, "components": self.c_N_components,
                    "breaking_parity": self.breaking_parity, "node_points": self.node_points,
                    "rhs": self.c_N_rhs},
            "per_component": [c.to_dict() for c in self.per_component],
        }


@dataclass(frozen=True, order=True)
class Violation:
    code: str
    location: str
    message: str

    def to_dict(self) -> Dict[str, str]:
        return {"code": self.code, "location": self.location, "message": self.message}


@dataclass(frozen=True)
class NiceVerdict:
    violations: Tuple[Violation, ...] = ()
    assumptions: Tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> List[str]:
        return sorted({v.code for v in self.violations})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "assumptions": list(self.assumptions),
        }


@dataclass(frozen=True)
class TrivialBoundaryData:
    """Datos de frontera de un subedificio trivial maximal"""

    p: int
    q: int
    r: int
    s: int
    m_C: int
    m_E: int
    w_C: int
    w_E: int
    chi: int
    # α∓ de la cubierta γ^{m_C} sin restricción
    alpha_minus_C: int = 0
    alpha_plus_C: int = 0
    simple_even: Optional[bool] = None
    simple_odd_hyperbolic: Optional[bool] = None
    # Defectos de los vecinos: primero los p de Γ̂⁺_C, luego los q de Γ̂⁻_C
    neighbor_defects: Optional[Tuple[int, ...]] = None

    @property
    def parity_C(self) -> int:
        return self.alpha_plus_C - self.alpha_minus_C

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p, "q": self.q, "r": self.r, "s": self.s,
            "m_C": self.m_C, "m_E": self.m_E, "w_C": self.w_C, "w_E": self.w_E,
            "chi": self.chi,
            "alpha_minus_C": self.alpha_minus_C, "alpha_plus_C": self.alpha_plus_C,
            "simple_even": self.simple_even, "simple_odd_hyperbolic": self.simple_odd_hyperbolic,
            "neighbor_defects": list(self.neighbor_defects) if self.neighbor_defects is not None else None,
        }


@dataclass(frozen=True)
class SubbuildingVerdict:
    violations: Tuple[Violation, ...]
    branch: Optional[str]
    multiplicity: Optional[int]
    identity_lhs: Optional[int]
    minus_chi: int

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def cylindrical(self) -> bool:
        return self.identity_lhs == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "branch": self.branch,
            "multiplicity": self.multiplicity,
            "identity_lhs": self.identity_lhs,
            "minus_chi": self.minus_chi,
            "cylindrical": self.cylindrical,
        }


@dataclass(frozen=True)
class ConstantVerdict:
    violations: Tuple[Violation, ...]
    c_N: int
    n_attach: int
    value: int

    @property
    def ok(self) -> bool:
        return not self.violations and self.value > 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
            "c_N": self.c_N,
            "n_attach": self.n_attach,
            "value": self.value,
        }


@dataclass(frozen=True)
class StableLimitVerdict:
    taxonomy: Taxonomy
    index: Optional[int] = None
    breaking_orbit: Optional[OrbitRef] = None
    core_components: Tuple[str, ...] = ()
    violations: Tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return self.taxonomy != "REJECTED"

    def to_dict(self) -> Dict[str, Any]:
        return {
            "taxonomy": self.taxonomy,
            "index": self.index,
            "breaking_orbit": self.breaking_orbit.to_dict() if self.breaking_orbit else None,
            "core_components": list(self.core_components),
            "violations": [v.to_dict() for v in self.violations],
        }


@dataclass(frozen=True, order=True)
class LimitType:
    top_punctures: Tuple[int, ...]
    bottom_punctures: Tuple[int, ...]
    breaking_orbit: OrbitRef
    top_index: int = 1
    top_c_N: int = 0
    bottom_index: int = 1
    bottom_c_N: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "top_punctures": list(self.top_punctures),
            "bottom_punctures": list(self.bottom_punctures),
            "breaking_orbit": self.breaking_orbit.to_dict(),
            "top": {"index": self.top_index, "c_N": self.top_c_N},
            "bottom": {"index": self.bottom_index, "c_N": self.bottom_c_N},
        }


@dataclass(frozen=True)
class MainTheoremVerdict:
    c_N: int
    nice: NiceVerdict
    violations: Tuple[Violation, ...] = ()
    core_c_N: Tuple[Tuple[str, int], ...] = ()
    # Subedificios triviales y constantes maximales, por primer id de componente
    trivial_checks: Tuple[Tuple[str, SubbuildingVerdict], ...] = ()
    constant_checks: Tuple[Tuple[str, ConstantVerdict], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations and self.nice.ok

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ok": self.ok,
            "c_N": self.c_N,
            "nice": self.nice.to_dict(),
            "violations": [v.to_dict() for v in self.violations],
            "core_c_N": {cid: value for cid, value in self.core_c_N},
            "trivial_subbuildings": {cid: v.to_dict() for cid, v in self.trivial_checks},
            "constant_subbuildings": {cid: v.to_dict() for cid, v in self.constant_checks},
        }
