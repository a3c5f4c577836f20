"""
Tablas espectrales a partir de sistemas propios discretos, con auditoría
de dos autovalores por número de vueltas y refinamiento automático de malla.
"""
import logging
from typing import List, Optional

import numpy as np
from tenacity import retry, retry_if_exception_type, stop_after_attempt

from sftcalc.config import get_settings
from sftcalc.errors import DegenerateOrbitError, InvalidInputError, ResolutionError
from sftcalc.models import SpectralEntry, SpectralTable
from sftcalc.spectral.base import SpectralModel
from sftcalc.spectral.operator import DiscreteLoop, winding
from sftcalc.validation import table_validator

logger = logging.getLogger(__name__)


def cluster_tolerance(window: float) -> float:
    return 1e-7 * max(1.0, window)


def table_from_eigensystem(eigenvalues: np.ndarray, eigenvectors: np.ndarray,
                           window: float, grid: int) -> SpectralTable:
    """Agrupar autovalores en clases de multiplicidad y calcular sus números de vueltas"""
    tol = cluster_tolerance(window)
    inside = np.flatnonzero(np.abs(eigenvalues) <= window)

    clusters: List[List[int]] = []
    for idx in inside:
        if clusters and eigenvalues[idx] - eigenvalues[clusters[-1][-1]] <= tol:
            clusters[-1].append(int(idx))
        else:
            clusters.append([int(idx)])

    entries = []
    for members in clusters:
        windings = {winding(DiscreteLoop.from_eigenvector(eigenvectors[:, i])) for i in members}
        if len(windings) != 1:
            raise ResolutionError(
                f"eigenvalue {eigenvalues[members[0]]:.6f} mixes windings {sorted(windings)} at grid {grid}; "
                "use a larger grid"
            )
        value = float(np.mean(eigenvalues[members]))
        if abs(value) <= tol:
            raise DegenerateOrbitError(f"0 is an eigenvalue (|lambda| = {abs(value):.2e})")
        entries.append(SpectralEntry(eigenvalue=value, winding=windings.pop(), multiplicity=len(members)))

    table = SpectralTable(entries=tuple(entries), window=float(window), grid=grid)
    problems = table_validator.audit(table)
    if problems:
        raise ResolutionError(
            f"grid {grid} does not resolve window {window}: {'; '.join(problems)}; use a larger grid"
        )
    return table


def spectrum_of(model: SpectralModel, k: int, window: float, grid: Optional[int] = None) -> SpectralTable:
    """Espectro de γ^k en la ventana |λ| ≤ window"""
    if k < 1:
        raise InvalidInputError(f"cover multiplicity must be >= 1, got {k}")
    if window <= 0:
        raise InvalidInputError(f"window must be positive, got {window}")
    return model.spectrum(k, window, grid)


def refine_spectrum(model: SpectralModel, k: int, window: float, grid: Optional[int] = None,
                    attempts: Optional[int] = None) -> SpectralTable:
    """Reintentar con mallas N → 2N+1 mientras la resolución sea insuficiente"""
    grid = grid or get_settings().grid
    if model.name != "flow":
        return spectrum_of(model, k, window, grid)
    attempts = attempts or get_settings().refine_attempts

    grids = [grid]

    def _next_grid(retry_state) -> None:
        grids.append(2 * grids[-1] + 1)
        logger.info("cover %d unresolved at grid %d, retrying with %d", k, grids[-2], grids[-1])

    @retry(
        stop=stop_after_attempt(attempts),
        retry=retry_if_exception_type(ResolutionError),
        before_sleep=_next_grid,
        reraise=True,
    )
    def _attempt() -> SpectralTable:
        logger.debug("spectrum attempt with grid %d", grids[-1])
        return spectrum_of(model, k, window, grids[-1])

    return _attempt()
