"""
Catálogo de órbitas y sus invariantes enteros: α±, paridad, índice de
Conley-Zehnder (restringido), órbitas malas y autofunciones simplemente cubiertas.

Los enteros α± y μ dependen de la trivialización implícita en las coordenadas
de cada modelo; sólo tiene sentido compararlos entre punturas sobre la misma
órbita simple (una trivialización fija por órbita simple).
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Union

import numpy as np

from sftcalc.config import get_settings
from sftcalc.errors import (
    CatalogError,
    ConsistencyError,
    DegenerateConstraintError,
    DegenerateOrbitError,
    InvalidInputError,
    ResolutionError,
)
from sftcalc.models import OrbitRef, Side, SpectralSummary, SpectralTable
from sftcalc.spectral.flow import FlowModel
from sftcalc.spectral.operator import cover_degree, is_hyperbolic_monodromy, monodromy_parity
from sftcalc.spectral.spectrum import cluster_tolerance, refine_spectrum, spectrum_of
from sftcalc.spectral.table import TableModel
from sftcalc.utils import gcd_cover
from sftcalc.validation import table_validator

logger = logging.getLogger(__name__)


def is_simply_covered_eigenfunction(k: int, w: int) -> bool:
    """Una autofunción de γ^k con w vueltas es simplemente cubierta sii gcd(k, w) = 1"""
    if k < 1:
        raise InvalidInputError(f"cover multiplicity must be >= 1, got {k}")
    return gcd_cover(k, w) == 1


@dataclass(frozen=True)
class SimpleOrbit:
    id: str
    period: float
    model: Union[FlowModel, TableModel]
    hyperbolic: Optional[bool] = None


@dataclass(frozen=True)
class CoverCheck:
    eigenvalue: float
    winding: int
    cover_degree: int
    simply_covered: bool

    @property
    def agrees(self) -> bool:
        return (self.cover_degree == 1) == self.simply_covered

    def to_dict(self) -> dict:
        return {
            "eigenvalue": self.eigenvalue,
            "winding": self.winding,
            "cover_degree": self.cover_degree,
            "simply_covered": self.simply_covered,
            "agrees": self.agrees,
        }


class OrbitCatalog:
    """Catálogo inmutable de órbitas simples"""

    def __init__(self, orbits: Iterable[SimpleOrbit], audit: bool = True):
        self._orbits: Dict[str, SimpleOrbit] = {}
        for orbit in orbits:
            if orbit.id in self._orbits:
                raise CatalogError(f"duplicate orbit id {orbit.id!r}")
            if orbit.period <= 0:
                raise CatalogError(f"orbit {orbit.id!r} has non-positive period")
            if isinstance(orbit.model, FlowModel) and orbit.model.loop.period != orbit.period:
                raise CatalogError(
                    f"orbit {orbit.id!r}: loop period {orbit.model.loop.period} differs from orbit period {orbit.period}"
                )
            self._orbits[orbit.id] = orbit
        # paridad k=1 de los modelos de flujo según el signo de la monodromía
        self._monodromy_parity: Dict[str, int] = {}
        if audit:
            self.audit()

    @property
    def ids(self) -> List[str]:
        return sorted(self._orbits)

    def __contains__(self, orbit_id: str) -> bool:
        return orbit_id in self._orbits

    def __len__(self) -> int:
        return len(self._orbits)

    def get(self, orbit_id: str) -> SimpleOrbit:
        try:
            return self._orbits[orbit_id]
        except KeyError:
            raise InvalidInputError(f"unknown orbit {orbit_id!r}") from None

    def has_cover(self, ref: OrbitRef) -> bool:
        return ref.simple in self._orbits and self._orbits[ref.simple].model.has_cover(ref.k)

    # Espectros

    def spectrum_of(self, ref: OrbitRef, window: float, grid: Optional[int] = None,
                    refine: bool = False) -> SpectralTable:
        """Tabla espectral de γ^k en la ventana"""
        model = self.get(ref.simple).model
        if refine:
            return refine_spectrum(model, ref.k, window, grid)
        return spectrum_of(model, ref.k, window, grid)

    def _table_around(self, ref: OrbitRef, threshold: float) -> SpectralTable:
        """Tabla que resuelve el espectro a ambos lados de threshold y de 0"""
        model = self.get(ref.simple).model
        if isinstance(model, TableModel):
            if not model.has_cover(ref.k):
                raise CatalogError(f"orbit {ref.simple!r} has no table for cover k={ref.k}")
            table = model.covers[ref.k]
        else:
            settings = get_settings()
            window = max(settings.window, abs(threshold) + settings.window_margin)
            table = refine_spectrum(model, ref.k, window)
        lowest = min(threshold, 0.0)
        highest = max(threshold, 0.0)
        if not table.below(lowest) or not table.above(highest):
            raise ResolutionError(
                f"spectrum of {ref} (window {table.window}) does not extend past threshold {threshold}"
            )
        return table

    def alpha(self, ref: OrbitRef, threshold: float, side: Side) -> int:
        """α−: mayor número de vueltas bajo el corte; α+: menor sobre el corte"""
        summary = self.cz_index(ref, threshold)
        if side == "minus":
            return summary.alpha_minus
        if side == "plus":
            return summary.alpha_plus
        raise InvalidInputError(f"side must be 'minus' or 'plus', got {side!r}")

    def cz_index(self, ref: OrbitRef, threshold: float) -> SpectralSummary:
        """Resumen espectral en el corte dado (−c en punturas positivas, +c en negativas)"""
        table = self._table_around(ref, threshold)
        tol = cluster_tolerance(table.window)
        for entry in table.entries:
            if abs(entry.eigenvalue) <= tol:
                raise DegenerateOrbitError(f"orbit {ref} is degenerate: 0 is an eigenvalue")
            if abs(entry.eigenvalue - threshold) <= tol:
                raise DegenerateConstraintError(
                    f"threshold {threshold} hits the eigenvalue {entry.eigenvalue} of {ref}"
                )

        summary = _summary(table, threshold)
        base = _summary(table, 0.0)
        # Forma de conteo del índice restringido
        if threshold < 0:
            counted = base.mu_cz - table.count_between(threshold, 0.0)
        else:
            counted = base.mu_cz + table.count_between(0.0, threshold)
        if counted != summary.mu_cz:
            raise ConsistencyError(
                f"{ref} at threshold {threshold}: winding form gives {summary.mu_cz}, counting form {counted}"
            )
        return summary

    def parity(self, ref: OrbitRef) -> int:
        value = self.cz_index(ref, 0.0).parity
        derived = self._monodromy_parity.get(ref.simple) if ref.k == 1 else None
        if derived is not None and derived != value:
            raise ConsistencyError(
                f"{ref}: spectral parity {value} but the monodromy trace gives parity {derived}"
            )
        return value

    def is_even(self, ref: OrbitRef) -> bool:
        return self.parity(ref) == 0

    def is_hyperbolic(self, orbit_id: str) -> bool:
        """Tipo hiperbólico: bandera guardada o monodromía del modelo de flujo"""
        orbit = self.get(orbit_id)
        if orbit.hyperbolic is not None:
            return orbit.hyperbolic
        flag = orbit.model.is_hyperbolic()
        if flag is None:
            raise CatalogError(f"orbit {orbit_id!r} needs a 'hyperbolic' flag for bad-orbit queries")
        return flag

    def is_bad(self, ref: OrbitRef) -> bool:
        """γ^k es mala sii k es par, γ^{k/2} es impar e hiperbólica y γ^k es par"""
        if ref.k % 2:
            return False
        if not self.is_hyperbolic(ref.simple):
            return False
        half = OrbitRef(ref.simple, ref.k // 2)
        return self.parity(half) == 1 and self.parity(ref) == 0

    def breaking_candidates(self) -> List[OrbitRef]:
        """Órbitas de ruptura admisibles: pares con k=1 o malas con k=2"""
        candidates = []
        for orbit_id in self.ids:
            simple = OrbitRef(orbit_id, 1)
            if self.has_cover(simple) and self.is_even(simple):
                candidates.append(simple)
            double = OrbitRef(orbit_id, 2)
            if not self.has_cover(double):
                logger.debug("orbit %s: no double cover available, skipped as bad-orbit candidate", orbit_id)
                continue
            try:
                if self.is_bad(double):
                    candidates.append(double)
            except CatalogError as e:
                logger.warning("orbit %s skipped as bad-orbit candidate: %s", orbit_id, e)
        return candidates

    def covering_check(self, ref: OrbitRef, window: float, grid: Optional[int] = None) -> List[CoverCheck]:
        """Grado de cubierta (soporte de Fourier) frente a la predicción por gcd"""
        model = self.get(ref.simple).model
        if not isinstance(model, FlowModel):
            raise InvalidInputError(f"orbit {ref.simple!r} has no flow model; covering check needs eigenvectors")
        table = spectrum_of(model, ref.k, window, grid)
        values, vectors = model.eigenvectors(ref.k, window, grid)
        checks = []
        for entry in table.entries:
            members = np.flatnonzero(np.abs(values - entry.eigenvalue) <= cluster_tolerance(window))
            for idx in members:
                checks.append(CoverCheck(
                    eigenvalue=float(values[idx]),
                    winding=entry.winding,
                    cover_degree=cover_degree(vectors[:, idx], ref.k),
                    simply_covered=is_simply_covered_eigenfunction(ref.k, entry.winding),
                ))
        return checks

    def audit(self) -> None:
        """Auditoría de carga: tablas válidas, no degeneración, par ⇒ hiperbólica"""
        for orbit_id in self.ids:
            orbit = self._orbits[orbit_id]
            model = orbit.model
            if isinstance(model, TableModel):
                if 1 not in model.covers:
                    raise CatalogError(f"orbit {orbit_id!r} has no table for k=1")
                for k, table in sorted(model.covers.items()):
                    problems = table_validator.audit(table)
                    if problems:
                        raise CatalogError(f"orbit {orbit_id!r}, cover {k}: {'; '.join(problems)}")
                    try:
                        even = self.is_even(OrbitRef(orbit_id, k))
                    except (DegenerateOrbitError, ResolutionError) as e:
                        raise CatalogError(f"orbit {orbit_id!r}, cover {k}: {e.message}") from None
                    if even and orbit.hyperbolic is False:
                        raise CatalogError(f"orbit {orbit_id!r}, cover {k} is even but flagged non-hyperbolic")
            else:
                psi = model.monodromy(1)
                if abs(float(np.linalg.det(psi - np.eye(2)))) < 1e-8:
                    raise CatalogError(f"orbit {orbit_id!r} is degenerate (monodromy has eigenvalue 1)")
                self._monodromy_parity[orbit_id] = monodromy_parity(psi)
                derived = is_hyperbolic_monodromy(psi)
                if orbit.hyperbolic is not None and orbit.hyperbolic != derived:
                    raise CatalogError(
                        f"orbit {orbit_id!r}: hyperbolic flag {orbit.hyperbolic} contradicts the monodromy"
                    )
            logger.info("orbit %s (%s model) audited", orbit_id, model.name)


def _summary(table: SpectralTable, threshold: float) -> SpectralSummary:
    alpha_minus = max(e.winding for e in table.below(threshold))
    alpha_plus = min(e.winding for e in table.above(threshold))
    parity = alpha_plus - alpha_minus
    if parity not in (0, 1):
        raise ConsistencyError(f"parity {parity} at threshold {threshold} is not 0 or 1")
    mu = 2 * alpha_minus + parity
    if mu != 2 * alpha_plus - parity:
        raise ConsistencyError("the two winding forms of the Conley-Zehnder index disagree")
    return SpectralSummary(alpha_minus=alpha_minus, alpha_plus=alpha_plus, parity=parity,
                           mu_cz=mu, threshold=float(threshold))
