"""
Configuración de la calculadora desde variables de entorno (y .env opcional)
"""
import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

from sftcalc.errors import InvalidInputError

load_dotenv()

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class Settings:
    grid: int = 201
    window: float = 20.0
    window_margin: float = 8.0
    refine_attempts: int = 3
    jacobi_max_sweeps: int = 60
    crossing_steps: int = 4000
    max_concurrency: int = 4
    cache_size: int = 256
    log_level: str = "WARNING"

    def __post_init__(self) -> None:
        if self.grid < 3 or self.grid % 2 == 0:
            raise InvalidInputError(f"SFTCALC_GRID must be odd and >= 3, got {self.grid}")
        for name in ("window", "window_margin"):
            if getattr(self, name) <= 0:
                raise InvalidInputError(f"{name} must be positive")
        for name in ("refine_attempts", "jacobi_max_sweeps", "crossing_steps", "max_concurrency", "cache_size"):
            if getattr(self, name) < 1:
                raise InvalidInputError(f"{name} must be >= 1")
        if self.log_level not in LOG_LEVELS:
            raise InvalidInputError(f"unknown log level {self.log_level!r}")


def _read_int(name: str, default: int) -> int:
    raw = os.getenv(name, str(default))
    try:
        return int(raw)
    except ValueError:
        raise InvalidInputError(f"{name} must be an integer, got {raw!r}") from None


def _read_float(name: str, default: float) -> float:
    raw = os.getenv(name, str(default))
    try:
        return float(raw)
    except ValueError:
        raise InvalidInputError(f"{name} must be a number, got {raw!r}") from None


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Leer configuración del entorno"""
    return Settings(
        grid=_read_int("SFTCALC_GRID", 201),
        window=_read_float("SFTCALC_WINDOW", 20.0),
        window_margin=_read_float("SFTCALC_WINDOW_MARGIN", 8.0),
        refine_attempts=_read_int("SFTCALC_REFINE_ATTEMPTS", 3),
        jacobi_max_sweeps=_read_int("SFTCALC_JACOBI_MAX_SWEEPS", 60),
        crossing_steps=_read_int("SFTCALC_CRM_STEPS", 4000),
        max_concurrency=_read_int("SFTCALC_MAX_CONCURRENCY", 4),
        cache_size=_read_int("SFTCALC_CACHE_SIZE", 256),
        log_level=os.getenv("SFTCALC_LOG_LEVEL", "WARNING").upper(),
    )
