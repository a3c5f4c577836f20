"""
Jacobi cíclico paralelo (orden round-robin) para matrices simétricas densas
"""
import logging
from typing import Tuple

import numpy as np

from sftcalc.errors import InvalidInputError, ResolutionError

logger = logging.getLogger(__name__)


def off_norm(a: np.ndarray) -> float:
    """Norma de Frobenius de la parte fuera de la diagonal"""
    return float(np.sqrt(max(np.sum(a * a) - np.sum(np.diag(a) ** 2), 0.0)))


def _rotate(a: np.ndarray, v: np.ndarray, p: np.ndarray, q: np.ndarray) -> None:
    """Anular a[p, q] para todos los pares disjuntos (p, q) a la vez"""
    app = a[p, p]
    aqq = a[q, q]
    apq = a[p, q]
    negligible = np.abs(apq) <= np.finfo(float).eps * 1e-3 * np.sqrt(np.abs(app * aqq) + 1e-300)

    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        theta = (aqq - app) / (2.0 * apq)
        sign = np.where(theta >= 0.0, 1.0, -1.0)
        t = sign / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
    t = np.where(negligible | ~np.isfinite(t), 0.0, t)
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c

    rows_p = a[p, :]
    rows_q = a[q, :]
    a[p, :] = c[:, None] * rows_p - s[:, None] * rows_q
    a[q, :] = s[:, None] * rows_p + c[:, None] * rows_q

    cols_p = a[:, p]
    cols_q = a[:, q]
    a[:, p] = cols_p * c - cols_q * s
    a[:, q] = cols_p * s + cols_q * c

    vec_p = v[:, p]
    vec_q = v[:, q]
    v[:, p] = vec_p * c - vec_q * s
    v[:, q] = vec_p * s + vec_q * c


def jacobi_eigh(matrix: np.ndarray, max_sweeps: int = 60) -> Tuple[np.ndarray, np.ndarray]:
    """
    Autovalores (ascendentes) y autovectores (columnas) de una matriz simétrica.

    Cada barrido recorre los n−1 emparejamientos de un torneo round-robin;
    las rotaciones de un mismo emparejamiento actúan sobre índices disjuntos
    y se aplican simultáneamente.
    """
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n == 0:
        return np.zeros(0), np.zeros((0, 0))
    scale = max(1.0, float(np.max(np.abs(a))))
    if np.max(np.abs(a - a.T)) > 1e-12 * scale:
        raise InvalidInputError("matrix is not symmetric")
    a = 0.5 * (a + a.T)

    # Índice ficticio desacoplado para dimensión impar
    padded = n % 2 == 1
    if padded:
        a = np.pad(a, ((0, 1), (0, 1)))
    size = a.shape[0]
    half = size // 2
    v = np.eye(size)

    norm = float(np.linalg.norm(a))
    tol = size * np.finfo(float).eps * norm
    players = np.arange(size)

    sweeps = 0
    off = off_norm(a)
    while off > tol:
        if sweeps >= max_sweeps:
            raise ResolutionError(
                f"Jacobi solver did not converge in {max_sweeps} sweeps (off-norm {off:.3e}); "
                "raise SFTCALC_JACOBI_MAX_SWEEPS"
            )
        for _ in range(size - 1):
            _rotate(a, v, players[:half], players[::-1][:half])
            players = np.concatenate((players[:1], np.roll(players[1:], 1)))
        sweeps += 1
        off = off_norm(a)
        logger.debug("jacobi sweep %d: off-norm %.3e (tol %.3e)", sweeps, off, tol)

    eigenvalues = np.diag(a).copy()
    if padded:
        eigenvalues = eigenvalues[:n]
        v = v[:n, :n]
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]
