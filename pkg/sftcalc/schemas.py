"""
Esquemas de archivo (formato 1): catálogos de órbitas, edificios y asintóticas.
Carga y emisión con rutas JSON en los errores de esquema.
"""
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple, Type, TypeVar, Union

import orjson
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from sftcalc.errors import CatalogError, InvalidInputError, SchemaError
from sftcalc.models import Building, Component, Kind, OrbitRef, Puncture, SpectralEntry, SpectralTable
from sftcalc.orbits import OrbitCatalog, SimpleOrbit
from sftcalc.spectral.flow import FlowLoop, FlowModel
from sftcalc.spectral.table import TableModel
from sftcalc.utils import dumps_json, format_loc, loads_json
from sftcalc.validation import building_validator

FORMAT = 1

SchemaT = TypeVar("SchemaT", bound=BaseModel)


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class OrbitRefSpec(StrictModel):
    simple: str = Field(min_length=1)
    k: int = Field(1, ge=1)


class PunctureSpec(StrictModel):
    sign: Literal["+", "-"]
    orbit: OrbitRefSpec
    constraint: float = Field(0.0, ge=0)
    controlling_winding: Optional[int] = None


class ComponentSpec(StrictModel):
    id: str = Field(min_length=1)
    genus: int = Field(0, ge=0)
    rel_c1: int = 0
    kind: Kind = "nontrivial"
    orbit: Optional[str] = None
    wind_pi: Optional[int] = Field(None, ge=0)
    image_class: Optional[str] = None
    punctures: List[PunctureSpec] = Field(default_factory=list)


class BuildingFile(StrictModel):
    format: Literal[1] = FORMAT
    components: List[ComponentSpec]
    breaking_pairs: List[Tuple[Tuple[str, int], Tuple[str, int]]] = Field(default_factory=list)
    nodal_pairs: List[Tuple[str, str]] = Field(default_factory=list)


class FlowModelSpec(StrictModel):
    type: Literal["flow"]
    samples: List[Tuple[float, float, float]] = Field(min_length=3)


class TableModelSpec(StrictModel):
    type: Literal["table"]
    covers: Dict[int, List[Tuple[float, int, int]]] = Field(min_length=1)


class OrbitSpec(StrictModel):
    id: str = Field(min_length=1)
    period: float = Field(gt=0)
    model: Annotated[Union[FlowModelSpec, TableModelSpec], Field(discriminator="type")]
    hyperbolic: Optional[bool] = None


class CatalogFile(StrictModel):
    format: Literal[1] = FORMAT
    orbits: List[OrbitSpec]


class AsymptoticsFile(StrictModel):
    format: Literal[1] = FORMAT
    punctures: List[PunctureSpec]


def validate_schema(schema: Type[SchemaT], data: Any) -> SchemaT:
    """Validar datos contra un esquema; el primer error cita su ruta JSON"""
    try:
        return schema.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise SchemaError(first["msg"], path=format_loc(first["loc"])) from None


def read_json(path: Union[str, Path]) -> Any:
    """Leer un archivo JSON"""
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise InvalidInputError(f"cannot read {path}: {e.strerror}") from None
    try:
        return loads_json(raw)
    except orjson.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}", path=str(path)) from None


# Catálogos

def _orbit_from_spec(spec: OrbitSpec) -> SimpleOrbit:
    if isinstance(spec.model, FlowModelSpec):
        try:
            model = FlowModel(FlowLoop.from_triples(spec.model.samples, period=spec.period))
        except InvalidInputError as e:
            raise CatalogError(f"orbit {spec.id!r}: {e.message}") from None
    else:
        covers = {}
        for k, rows in sorted(spec.model.covers.items()):
            if k < 1:
                raise CatalogError(f"orbit {spec.id!r}: cover multiplicity {k} must be >= 1")
            entries = tuple(SpectralEntry(eigenvalue=float(lam), winding=w, multiplicity=m) for lam, w, m in rows)
            if not entries:
                raise CatalogError(f"orbit {spec.id!r}: empty table for cover k={k}")
            window = max(abs(e.eigenvalue) for e in entries)
            covers[k] = SpectralTable(entries=entries, window=window)
        model = TableModel(covers, hyperbolic=spec.hyperbolic)
    return SimpleOrbit(id=spec.id, period=spec.period, model=model, hyperbolic=spec.hyperbolic)


def parse_catalog(data: Any, audit: bool = True) -> OrbitCatalog:
    spec = validate_schema(CatalogFile, data)
    return OrbitCatalog((_orbit_from_spec(orbit) for orbit in spec.orbits), audit=audit)


def load_catalog(path: Union[str, Path], audit: bool = True) -> OrbitCatalog:
    """Cargar y auditar un catálogo de órbitas"""
    return parse_catalog(read_json(path), audit=audit)


def _orbit_to_dict(orbit: SimpleOrbit) -> Dict[str, Any]:
    if isinstance(orbit.model, FlowModel):
        samples = orbit.model.loop.samples
        model = {
            "type": "flow",
            "samples": [[float(s[0, 0]), float(s[0, 1]), float(s[1, 1])] for s in samples],
        }
    else:
        model = {
            "type": "table",
            "covers": {
                str(k): [[e.eigenvalue, e.winding, e.multiplicity] for e in table.entries]
                for k, table in sorted(orbit.model.covers.items())
            },
        }
    data: Dict[str, Any] = {"id": orbit.id, "period": orbit.period, "model": model}
    if orbit.hyperbolic is not None:
        data["hyperbolic"] = orbit.hyperbolic
    return data


def catalog_to_dict(catalog: OrbitCatalog) -> Dict[str, Any]:
    return {"format": FORMAT, "orbits": [_orbit_to_dict(catalog.get(orbit_id)) for orbit_id in catalog.ids]}


def dump_catalog(catalog: OrbitCatalog) -> bytes:
    return dumps_json(catalog_to_dict(catalog))


# Edificios y asintóticas

def _puncture_from_spec(spec: PunctureSpec) -> Puncture:
    return Puncture(
        sign=spec.sign,
        orbit=OrbitRef(spec.orbit.simple, spec.orbit.k),
        constraint=float(spec.constraint),
        controlling_winding=spec.controlling_winding,
    )


def parse_building(data: Any, validate: bool = True) -> Building:
    spec = validate_schema(BuildingFile, data)
    components = tuple(
        Component(
            id=c.id,
            genus=c.genus,
            punctures=tuple(_puncture_from_spec(p) for p in c.punctures),
            rel_c1=c.rel_c1,
            kind=c.kind,
            orbit=c.orbit,
            wind_pi=c.wind_pi,
            image_class=c.image_class,
        )
        for c in spec.components
    )
    building = Building(
        components=components,
        breaking_pairs=tuple(((p[0], p[1]), (n[0], n[1])) for p, n in spec.breaking_pairs),
        nodal_pairs=tuple((a, b) for a, b in spec.nodal_pairs),
    )
    if validate:
        building_validator.check(building)
    return building


def load_building(path: Union[str, Path], validate: bool = True) -> Building:
    return parse_building(read_json(path), validate=validate)


def dump_building(building: Building) -> bytes:
    return dumps_json(building.to_dict())


def parse_asymptotics(data: Any) -> List[Puncture]:
    spec = validate_schema(AsymptoticsFile, data)
    return [_puncture_from_spec(p) for p in spec.punctures]


def load_asymptotics(path: Union[str, Path]) -> List[Puncture]:
    return parse_asymptotics(read_json(path))


def asymptotics_to_dict(punctures: List[Puncture]) -> Dict[str, Any]:
    return {"format": FORMAT, "punctures": [p.to_dict() for p in punctures]}


def dump_asymptotics(punctures: List[Puncture]) -> bytes:
    return dumps_json(asymptotics_to_dict(punctures))
