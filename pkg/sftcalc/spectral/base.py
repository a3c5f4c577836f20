from typing import ClassVar, Optional, Protocol

from sftcalc.models import SpectralTable


class SpectralModel(Protocol):
    name: ClassVar[str]

    def has_cover(self, k: int) -> bool:
        """Indicar si el modelo puede dar el espectro de la cubierta γ^k"""
        ...

    def spectrum(self, k: int, window: float, grid: Optional[int] = None) -> SpectralTable:
        """Tabla espectral de γ^k recortada a |λ| ≤ window"""
        ...

    def is_hyperbolic(self) -> Optional[bool]:
        """Tipo hiperbólico de la órbita simple (None si se desconoce)"""
        ...
