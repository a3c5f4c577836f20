"""Modelos espectrales del operador asintótico"""

from .flow import FlowLoop, FlowModel, build_operator, cz_crossing
from .operator import DiscreteLoop, winding
from .spectrum import refine_spectrum, spectrum_of
from .table import TableModel

__all__ = [
    "DiscreteLoop",
    "FlowLoop",
    "FlowModel",
    "TableModel",
    "build_operator",
    "cz_crossing",
    "refine_spectrum",
    "spectrum_of",
    "winding",
]
