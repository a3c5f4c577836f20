"""
Discretización del operador asintótico A = −J₀ ∂_t − S(t), números de
rotación de lazos discretos y el flujo linealizado Ψ' = J₀ S Ψ.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from sftcalc.errors import DegenerateOrbitError, InvalidInputError, ResolutionError

logger = logging.getLogger(__name__)

J0 = np.array([[0.0, -1.0], [1.0, 0.0]])
SYMMETRY_TOL = 1e-12
WINDING_GUARD = 0.1
DEGENERACY_TOL = 1e-8


@dataclass(frozen=True)
class DiscreteLoop:
    """Lazo de vectores del plano, ninguno nulo"""

    points: np.ndarray

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) == 0:
            raise InvalidInputError(f"loop points must have shape (N, 2), got {pts.shape}")
        if np.any(np.hypot(pts[:, 0], pts[:, 1]) == 0.0):
            raise InvalidInputError("loop passes through the zero vector")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_eigenvector(cls, vector: np.ndarray) -> "DiscreteLoop":
        """Vector intercalado (x_0, y_0, x_1, y_1, ...) → lazo"""
        return cls(np.asarray(vector, dtype=float).reshape(-1, 2))


def check_samples(samples: Union[np.ndarray, Sequence]) -> np.ndarray:
    """Validar muestras S(t_j): cantidad impar ≥ 3, matrices 2×2 simétricas"""
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 3 or arr.shape[1:] != (2, 2):
        raise InvalidInputError(f"samples must have shape (M, 2, 2), got {arr.shape}")
    count = arr.shape[0]
    if count < 3 or count % 2 == 0:
        raise InvalidInputError(f"sample count must be odd and >= 3, got {count}")
    asym = np.abs(arr[:, 0, 1] - arr[:, 1, 0])
    if np.any(asym > SYMMETRY_TOL):
        bad = int(np.argmax(asym))
        raise InvalidInputError(f"sample {bad} is not symmetric (defect {asym[bad]:.3e})")
    return arr


def fourier_diff_matrix(n: int) -> np.ndarray:
    """Matriz de diferenciación espectral de Fourier en [0, 1) para n impar (antisimétrica)"""
    if n < 3 or n % 2 == 0:
        raise InvalidInputError(f"Fourier differentiation needs an odd grid >= 3, got {n}")
    freqs = np.fft.fftfreq(n, d=1.0 / n)
    symbol = 2j * np.pi * freqs
    d = np.fft.ifft(symbol[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0).real
    return 0.5 * (d - d.T)


def evaluate_loop(samples: np.ndarray, times: np.ndarray, cover: int = 1) -> np.ndarray:
    """Interpolación trigonométrica del lazo k veces recorrido: S_k(t) = k·S(k t)"""
    count = samples.shape[0]
    freqs = np.fft.fftfreq(count, d=1.0 / count)
    coeffs = np.fft.fft(samples, axis=0) / count
    phases = np.exp(2j * np.pi * np.outer(np.asarray(times, dtype=float) * cover, freqs))
    values = cover * np.einsum("tm,mab->tab", phases, coeffs).real
    return 0.5 * (values + np.transpose(values, (0, 2, 1)))


def resample(samples: np.ndarray, grid: int, cover: int = 1) -> np.ndarray:
    """Muestras de S_k en la malla uniforme de tamaño grid"""
    if grid < samples.shape[0]:
        raise InvalidInputError(f"grid {grid} is smaller than the sample count {samples.shape[0]}")
    if cover == 1 and grid == samples.shape[0]:
        return samples.copy()
    return evaluate_loop(samples, np.arange(grid) / grid, cover)


def assemble(samples: np.ndarray) -> np.ndarray:
    """Matriz −D⊗J₀ − blockdiag(S(t_j)) en orden intercalado (x_j, y_j)"""
    n = samples.shape[0]
    d = fourier_diff_matrix(n)
    h = -np.kron(d, J0)
    rows = 2 * np.arange(n)
    h[rows, rows] -= samples[:, 0, 0]
    h[rows, rows + 1] -= samples[:, 0, 1]
    h[rows + 1, rows] -= samples[:, 1, 0]
    h[rows + 1, rows + 1] -= samples[:, 1, 1]
    return 0.5 * (h + h.T)


def real_fourier_basis(n: int) -> np.ndarray:
    """Base ortonormal real (constante, cosenos, senos) en la malla de n puntos"""
    t = np.arange(n) / n
    columns = [np.full(n, 1.0 / math.sqrt(n))]
    scale = math.sqrt(2.0 / n)
    for m in range(1, (n - 1) // 2 + 1):
        columns.append(scale * np.cos(2 * np.pi * m * t))
        columns.append(scale * np.sin(2 * np.pi * m * t))
    return np.column_stack(columns)


def winding(loop: Union[DiscreteLoop, np.ndarray, Sequence]) -> int:
    """Número de vueltas de un lazo discreto"""
    if not isinstance(loop, DiscreteLoop):
        loop = DiscreteLoop(np.asarray(loop, dtype=float))
    pts = loop.points
    nxt = np.roll(pts, -1, axis=0)
    cross = pts[:, 0] * nxt[:, 1] - pts[:, 1] * nxt[:, 0]
    dot = pts[:, 0] * nxt[:, 0] + pts[:, 1] * nxt[:, 1]
    steps = np.arctan2(cross, dot)
    largest = float(np.max(np.abs(steps)))
    if largest >= np.pi / 2:
        raise ResolutionError(
            f"winding step angle {largest:.3f} rad exceeds pi/2 on a {len(pts)}-point loop; use a larger grid"
        )
    turns = float(np.sum(steps)) / (2 * np.pi)
    rounded = round(turns)
    if abs(turns - rounded) > WINDING_GUARD:
        raise ResolutionError(f"winding {turns:.3f} is not close to an integer; use a larger grid")
    return int(rounded)


def linearized_flow(samples: np.ndarray, cover: int, steps_per_unit: int) -> np.ndarray:
    """Camino Ψ(t), t ∈ [0, 1], del flujo linealizado del lazo k veces recorrido (RK4)"""
    steps = steps_per_unit * cover
    h = 1.0 / steps
    mats = np.einsum("ab,tbc->tac", J0, evaluate_loop(samples, np.arange(2 * steps + 1) * (h / 2), cover))
    path = np.empty((steps + 1, 2, 2))
    psi = np.eye(2)
    path[0] = psi
    for i in range(steps):
        m0, mh, m1 = mats[2 * i], mats[2 * i + 1], mats[2 * i + 2]
        k1 = m0 @ psi
        k2 = mh @ (psi + 0.5 * h * k1)
        k3 = mh @ (psi + 0.5 * h * k2)
        k4 = m1 @ (psi + h * k3)
        psi = psi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        path[i + 1] = psi
    return path


def rotation_interval(path: np.ndarray, directions: int = 360) -> Tuple[float, float]:
    """Intervalo de rotación {Δθ(v)/2π} sobre direcciones v del plano"""
    angles = np.linspace(0.0, np.pi, directions, endpoint=False)
    vecs = np.vstack((np.cos(angles), np.sin(angles)))
    images = path @ vecs
    theta = np.unwrap(np.arctan2(images[:, 1, :], images[:, 0, :]), axis=0)
    turns = (theta[-1] - theta[0]) / (2 * np.pi)
    return float(turns.min()), float(turns.max())


def cz_from_interval(lower: float, upper: float) -> int:
    """Índice a partir del intervalo de rotación: 2k si k es interior, 2k+1 si I ⊂ (k, k+1)"""
    inner = [n for n in range(math.floor(lower), math.ceil(upper) + 1) if lower < n < upper]
    if len(inner) > 1:
        raise ResolutionError(f"rotation interval [{lower:.3f}, {upper:.3f}] is too wide; refine the flow")
    if inner:
        return 2 * inner[0]
    return 2 * math.floor(lower) + 1


def monodromy(samples: np.ndarray, cover: int, steps_per_unit: int) -> np.ndarray:
    return linearized_flow(samples, cover, steps_per_unit)[-1]


def crossing_index(samples: np.ndarray, cover: int, steps_per_unit: int) -> int:
    """Conley-Zehnder del flujo linealizado, independiente del espectro"""
    path = linearized_flow(samples, cover, steps_per_unit)
    psi = path[-1]
    gap = abs(float(np.linalg.det(psi - np.eye(2))))
    if gap < DEGENERACY_TOL:
        raise DegenerateOrbitError(f"monodromy of cover {cover} has eigenvalue 1 (det(Psi - I) = {gap:.2e})")
    lower, upper = rotation_interval(path)
    logger.debug("cover %d: rotation interval [%.4f, %.4f]", cover, lower, upper)
    return cz_from_interval(lower, upper)


def is_hyperbolic_monodromy(psi: np.ndarray) -> bool:
    return abs(float(np.trace(psi))) > 2.0


def monodromy_parity(psi: np.ndarray) -> int:
    """Paridad de CZ leída de la monodromía: par sii hiperbólica positiva (tr Ψ > 2)"""
    return 0 if float(np.trace(psi)) > 2.0 else 1


def cover_degree(vector: np.ndarray, k: int, tol: float = 1e-6) -> int:
    """Mayor divisor d de k tal que la autofunción sólo tiene modos de Fourier en dℤ"""
    pts = np.asarray(vector, dtype=float).reshape(-1, 2)
    n = len(pts)
    spectrum = np.abs(np.fft.fft(pts, axis=0)) ** 2
    energy = spectrum.sum(axis=1)
    freqs = np.fft.fftfreq(n, d=1.0 / n).astype(int)
    total = float(energy.sum())
    best = 1
    for d in range(2, k + 1):
        if k % d:
            continue
        leak = float(energy[freqs % d != 0].sum())
        if leak <= tol * total:
            best = d
    return best


def matrix_from_symmetric_triples(triples: Optional[Sequence[Sequence[float]]]) -> np.ndarray:
    """[[s11, s12, s22], ...] → arreglo (M, 2, 2)"""
    arr = np.asarray(triples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise InvalidInputError(f"flow samples must be [s11, s12, s22] triples, got shape {arr.shape}")
    out = np.empty((len(arr), 2, 2))
    out[:, 0, 0] = arr[:, 0]
    out[:, 0, 1] = arr[:, 1]
    out[:, 1, 0] = arr[:, 1]
    out[:, 1, 1] = arr[:, 2]
    return out
