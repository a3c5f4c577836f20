import hashlib
import logging
import time
from dataclasses import dataclass
from typing import ClassVar, Optional, Sequence, Tuple

import numpy as np

from sftcalc.cache import cache_manager
from sftcalc.config import get_settings
from sftcalc.errors import InvalidInputError
from sftcalc.models import SpectralTable
from sftcalc.spectral.jacobi import jacobi_eigh
from sftcalc.spectral.operator import (
    assemble,
    check_samples,
    crossing_index,
    is_hyperbolic_monodromy,
    matrix_from_symmetric_triples,
    monodromy,
    real_fourier_basis,
    resample,
)
from sftcalc.spectral.spectrum import table_from_eigensystem
from sftcalc.utils import format_latency

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FlowLoop:
    """Lazo muestreado S(t_j) de matrices simétricas 2×2 en t_j = j/M"""

    samples: np.ndarray
    period: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "samples", check_samples(self.samples))
        if self.period <= 0:
            raise InvalidInputError(f"period must be positive, got {self.period}")

    @classmethod
    def from_triples(cls, triples: Sequence[Sequence[float]], period: float = 1.0) -> "FlowLoop":
        return cls(matrix_from_symmetric_triples(triples), period)

    @property
    def size(self) -> int:
        return self.samples.shape[0]

    @property
    def fingerprint(self) -> str:
        return hashlib.md5(self.samples.tobytes()).hexdigest()


def build_operator(loop: FlowLoop) -> np.ndarray:
    """Operador asintótico discretizado (2N×2N simétrica) sobre las muestras del lazo"""
    return assemble(loop.samples)


def eigensystem(loop: FlowLoop, k: int, grid: int) -> Tuple[np.ndarray, np.ndarray]:
    """Autovalores y autovectores (en la malla) del lazo k veces recorrido"""
    cached = cache_manager.get_eigensystem("flow", loop.fingerprint, k, grid)
    if cached is not None:
        return cached

    start = time.time()
    matrix = assemble(resample(loop.samples, grid, k))
    # Base de Fourier real: la parte diferencial queda casi diagonal
    basis = np.kron(real_fourier_basis(grid), np.eye(2))
    values, vectors = jacobi_eigh(basis.T @ matrix @ basis, get_settings().jacobi_max_sweeps)
    result = (values, basis @ vectors)
    logger.debug("eigensystem k=%d grid=%d in %.1f ms", k, grid, format_latency(start))

    cache_manager.set_eigensystem("flow", loop.fingerprint, k, grid, result)
    return result


class FlowModel:
    name: ClassVar[str] = "flow"

    def __init__(self, loop: FlowLoop, steps_per_unit: Optional[int] = None):
        self.loop = loop
        self.steps_per_unit = steps_per_unit or get_settings().crossing_steps

    def has_cover(self, k: int) -> bool:
        return k >= 1

    def spectrum(self, k: int, window: float, grid: Optional[int] = None) -> SpectralTable:
        """Tabla espectral del lazo k veces recorrido"""
        grid = grid or get_settings().grid
        cached = cache_manager.get_table("flow", self.loop.fingerprint, k, window, grid)
        if cached is not None:
            return cached
        values, vectors = eigensystem(self.loop, k, grid)
        table = table_from_eigensystem(values, vectors, window, grid)
        cache_manager.set_table("flow", self.loop.fingerprint, k, window, grid, table)
        return table

    def eigenvectors(self, k: int, window: float, grid: Optional[int] = None) -> Tuple[np.ndarray, np.ndarray]:
        """Autovalores y autovectores en la ventana"""
        values, vectors = eigensystem(self.loop, k, grid or get_settings().grid)
        inside = np.abs(values) <= window
        return values[inside], vectors[:, inside]

    def monodromy(self, k: int = 1) -> np.ndarray:
        return monodromy(self.loop.samples, k, self.steps_per_unit)

    def is_hyperbolic(self) -> Optional[bool]:
        return is_hyperbolic_monodromy(self.monodromy(1))

    def cz_crossing(self, k: int) -> int:
        return cz_crossing(self.loop, k, self.steps_per_unit)


def cz_crossing(loop: FlowLoop, cover: int, steps_per_unit: Optional[int] = None) -> int:
    """Índice de Conley-Zehnder por el flujo linealizado (oráculo independiente del espectro)"""
    if cover < 1:
        raise InvalidInputError(f"cover must be >= 1, got {cover}")
    return crossing_index(loop.samples, cover, steps_per_unit or get_settings().crossing_steps)
