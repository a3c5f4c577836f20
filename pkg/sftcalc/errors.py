"""
Jerarquía de errores con códigos estables (parte del contrato de salida del CLI)
"""
from typing import List, Optional


class SftCalcError(Exception):
    """Error base de la calculadora"""

    code = "ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message}


class InvalidInputError(SftCalcError):
    code = "INVALID_INPUT"


class SchemaError(SftCalcError):
    code = "SCHEMA"

    def __init__(self, message: str, path: str = ""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class CatalogError(SftCalcError):
    code = "CATALOG"


class ResolutionError(SftCalcError):
    code = "RESOLUTION"


class DegenerateOrbitError(SftCalcError):
    code = "DEGENERATE_ORBIT"


class DegenerateConstraintError(SftCalcError):
    code = "DEGENERATE_CONSTRAINT"


class InvalidBuildingError(SftCalcError):
    code = "INVALID_BUILDING"

    def __init__(self, problems: List[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


class SurgeryError(SftCalcError):
    code = "SURGERY"


class NoCoreError(SftCalcError):
    code = "NO_CORE"


class IncompleteInputError(SftCalcError):
    code = "INCOMPLETE_INPUT"

    def __init__(self, missing: List[str], message: Optional[str] = None):
        super().__init__(message or "missing fields: " + ", ".join(missing))
        self.missing = missing


class InconsistentDataError(SftCalcError):
    code = "INCONSISTENT_DATA"


class ConsistencyError(SftCalcError):
    """Dos rutas de cálculo de una identidad no coinciden (nunca debería ocurrir)"""

    code = "INTERNAL_CONSISTENCY"
