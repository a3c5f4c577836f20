import math
import time
from typing import Any, Sequence, Union

import orjson

JSON_OPTIONS = orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2


def format_latency(start_time: float) -> float:
    """Formatear latencia en milisegundos"""
    return round((time.time() - start_time) * 1000, 2)


def gcd_cover(k: int, w: int) -> int:
    """gcd(k, w) con la convención gcd(k, 0) = k"""
    return math.gcd(k, w) if w != 0 else k


def dumps_json(obj: Any) -> bytes:
    """Serializar con claves ordenadas y salto final (salida byte-estable)"""
    return orjson.dumps(obj, option=JSON_OPTIONS) + b"\n"


def loads_json(data: Union[bytes, str]) -> Any:
    """Parsear JSON"""
    return orjson.loads(data)


def format_loc(loc: Sequence[Union[str, int]]) -> str:
    """Convertir la ubicación de un error de pydantic en una ruta JSON"""
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path or "$"
