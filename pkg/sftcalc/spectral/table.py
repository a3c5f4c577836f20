from typing import ClassVar, Dict, Optional

from sftcalc.errors import CatalogError, ResolutionError
from sftcalc.models import SpectralTable


class TableModel:
    """Tablas espectrales explícitas por cubierta"""

    name: ClassVar[str] = "table"

    def __init__(self, covers: Dict[int, SpectralTable], hyperbolic: Optional[bool] = None):
        self.covers = dict(covers)
        self.hyperbolic = hyperbolic

    def has_cover(self, k: int) -> bool:
        return k in self.covers

    def spectrum(self, k: int, window: float, grid: Optional[int] = None) -> SpectralTable:
        if k not in self.covers:
            raise CatalogError(f"no spectral table stored for cover k={k}")
        stored = self.covers[k]
        if window > stored.window:
            raise ResolutionError(
                f"stored table for k={k} only covers |lambda| <= {stored.window}, window {window} requested"
            )
        return stored.clipped(window)

    def is_hyperbolic(self) -> Optional[bool]:
        return self.hyperbolic
