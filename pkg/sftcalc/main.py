"""
Interfaz de línea de comandos: spectrum, index, validate, surgery, enumerate, check.

Códigos de salida: 0 correcto, 1 veredicto con violaciones, 2 error de entrada.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from sftcalc import __version__
from sftcalc.buildings import add_node, augment, core, disjoint_union, glue_punctures
from sftcalc.cache import cache_manager
from sftcalc.config import LOG_LEVELS, get_settings
from sftcalc.degeneration import (
    check_main_theorem,
    classify_stable_limit,
    enumerate_limits,
    validate_nice,
)
from sftcalc.errors import InvalidInputError, SftCalcError
from sftcalc.index_calculus import index_report, verify_additivity
from sftcalc.models import OrbitRef, PunctureKey, format_key
from sftcalc.schemas import dump_building, load_asymptotics, load_building, load_catalog
from sftcalc.spectral.flow import FlowModel
from sftcalc.utils import dumps_json
from sftcalc.validation import building_validator

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_ERROR = 2


def parse_key(raw: str) -> PunctureKey:
    """'comp:idx' → (comp, idx)"""
    cid, sep, idx = raw.rpartition(":")
    if not sep or not cid:
        raise InvalidInputError(f"puncture must be written as component:index, got {raw!r}")
    try:
        return cid, int(idx)
    except ValueError:
        raise InvalidInputError(f"puncture index must be an integer, got {raw!r}") from None


def create_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sftcalc",
        description="Calculus of holomorphic buildings in 4-dimensional symplectizations",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--log-level", choices=LOG_LEVELS, default=None,
                        help="log level for stderr (default: SFTCALC_LOG_LEVEL or WARNING)")
    sub = parser.add_subparsers(dest="command", required=True)

    spectrum = sub.add_parser("spectrum", help="spectral table and winding invariants of an orbit cover")
    spectrum.add_argument("--catalog", required=True, type=Path)
    spectrum.add_argument("--orbit", required=True)
    spectrum.add_argument("--cover", type=int, default=1)
    spectrum.add_argument("--window", type=float, default=None)
    spectrum.add_argument("--grid", type=int, default=None)
    spectrum.add_argument("--refine", action="store_true", help="refine the grid on resolution errors")
    spectrum.add_argument("--crossing", action="store_true", help="also run the crossing-form index (flow models)")
    spectrum.add_argument("--json", action="store_true")

    index = sub.add_parser("index", help="Fredholm index, c_N and additivity report of a building")
    index.add_argument("--catalog", required=True, type=Path)
    index.add_argument("--building", required=True, type=Path)
    index.add_argument("--json", action="store_true")

    validate = sub.add_parser("validate", help="check that a building is nicely embedded")
    validate.add_argument("--catalog", required=True, type=Path)
    validate.add_argument("--building", required=True, type=Path)
    validate.add_argument("--json", action="store_true")

    surgery = sub.add_parser("surgery", help="building surgery; writes the result as JSON")
    surgery.add_argument("--building", required=True, type=Path)
    surgery.add_argument("--op", required=True, choices=("augment", "core", "node", "glue", "union"))
    surgery.add_argument("--site", help="external puncture comp:idx (augment)")
    surgery.add_argument("--pair", type=int, help="breaking pair index (augment)")
    surgery.add_argument("--components", nargs=2, metavar=("A", "B"), help="components joined by a node")
    surgery.add_argument("--pos", help="positive puncture comp:idx (glue)")
    surgery.add_argument("--neg", help="negative puncture comp:idx (glue)")
    surgery.add_argument("--other", type=Path, help="second building (union)")
    surgery.add_argument("--out", type=Path, help="output file (default: stdout)")

    enumerate_ = sub.add_parser("enumerate", help="broken limits of a stable index-2 curve")
    enumerate_.add_argument("--catalog", required=True, type=Path)
    enumerate_.add_argument("--asymptotics", required=True, type=Path)
    enumerate_.add_argument("--json", action="store_true")

    check = sub.add_parser("check", help="theorem checks on a building")
    check.add_argument("--catalog", required=True, type=Path)
    check.add_argument("--building", required=True, type=Path)
    check.add_argument("--theorem", choices=("stable", "main"), default="stable")
    check.add_argument("--json", action="store_true")
    return parser


def _write(text: str) -> None:
    sys.stdout.write(text)


def _emit(payload: Dict[str, Any], as_json: bool, lines: Sequence[str]) -> None:
    if as_json:
        _write(dumps_json(payload).decode())
    else:
        _write("".join(f"{line}\n" for line in lines))


def _violation_lines(violations: Sequence[Dict[str, str]]) -> List[str]:
    return [f"  {v['code']} at {v['location']}: {v['message']}" for v in violations]


# Subcomandos

def cmd_spectrum(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    ref = OrbitRef(args.orbit, args.cover)
    window = args.window if args.window is not None else get_settings().window
    table = catalog.spectrum_of(ref, window, grid=args.grid, refine=args.refine)
    summary = catalog.cz_index(ref, 0.0)
    payload: Dict[str, Any] = {"orbit": ref.to_dict(), "table": table.to_dict(), "summary": summary.to_dict()}

    lines = [f"orbit {ref} (window {table.window:g}, grid {table.grid})"]
    lines += [f"  {e.eigenvalue: .10f}  winding {e.winding:>3}  multiplicity {e.multiplicity}" for e in table.entries]
    lines.append(
        f"alpha- = {summary.alpha_minus}  alpha+ = {summary.alpha_plus}  parity = {summary.parity}  "
        f"mu_CZ = {summary.mu_cz}"
    )
    if args.crossing:
        model = catalog.get(ref.simple).model
        if not isinstance(model, FlowModel):
            raise InvalidInputError(f"orbit {ref.simple!r} has no flow model for the crossing computation")
        payload["cz_crossing"] = model.cz_crossing(ref.k)
        lines.append(f"mu_CZ (crossing form) = {payload['cz_crossing']}")
    _emit(payload, args.json, lines)
    return EXIT_OK


def cmd_index(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    building = load_building(args.building)
    report = index_report(building, catalog)
    additivity = verify_additivity(building, catalog)
    payload = {"report": report.to_dict(), "additivity": additivity.to_dict()}

    lines = [
        f"chi = {report.chi}",
        f"genus = {report.genus if report.genus is not None else '-'}",
        f"c1 = {report.c1_total}",
        f"mu_CZ total = {report.mu_total}",
        f"ind = {report.index}",
        f"c_N = {report.c_N}",
        "Gamma0 = {" + ", ".join(format_key(k) for k in report.gamma0) + "}",
        "Gamma1 = {" + ", ".join(format_key(k) for k in report.gamma1) + "}",
    ]
    for ci in report.per_component:
        defect = "-" if ci.defect is None else ci.defect
        lines.append(f"  {ci.component}: ind = {ci.index}, c_N = {ci.c_N}, defect = {defect}")
    _emit(payload, args.json, lines)
    return EXIT_OK


def cmd_validate(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    building = load_building(args.building)
    verdict = validate_nice(building, catalog)
    payload = verdict.to_dict()
    lines = ["nicely embedded: ok" if verdict.ok else "nicely embedded: violations"]
    lines += _violation_lines(payload["violations"])
    lines += [f"  assumption: {a}" for a in verdict.assumptions]
    _emit(payload, args.json, lines)
    return EXIT_OK if verdict.ok else EXIT_VIOLATIONS


def cmd_surgery(args: argparse.Namespace) -> int:
    building = load_building(args.building)
    if args.op == "augment":
        if (args.site is None) == (args.pair is None):
            raise InvalidInputError("augment needs exactly one of --site or --pair")
        result = augment(building, parse_key(args.site) if args.site else args.pair)
    elif args.op == "core":
        result = core(building)
    elif args.op == "node":
        if not args.components:
            raise InvalidInputError("node needs --components A B")
        result = add_node(building, *args.components)
    elif args.op == "glue":
        if not args.pos or not args.neg:
            raise InvalidInputError("glue needs --pos and --neg")
        result = glue_punctures(building, parse_key(args.pos), parse_key(args.neg))
    else:
        if args.other is None:
            raise InvalidInputError("union needs --other")
        result = disjoint_union(building, load_building(args.other))
    building_validator.check(result)

    data = dump_building(result)
    if args.out:
        args.out.write_bytes(data)
        logger.info("building written to %s", args.out)
    else:
        _write(data.decode())
    return EXIT_OK


def cmd_enumerate(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    asymptotics = load_asymptotics(args.asymptotics)
    limits = enumerate_limits(asymptotics, catalog)
    payload = {"limits": [limit.to_dict() for limit in limits]}
    lines = [f"{len(limits)} broken limits"]
    for limit in limits:
        lines.append(
            f"  top {list(limit.top_punctures)} / bottom {list(limit.bottom_punctures)} "
            f"at {limit.breaking_orbit}"
        )
    _emit(payload, args.json, lines)
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    catalog = load_catalog(args.catalog)
    building = load_building(args.building)
    if args.theorem == "stable":
        verdict = classify_stable_limit(building, catalog)
        payload = verdict.to_dict()
        lines = [f"taxonomy: {verdict.taxonomy}"]
        if verdict.breaking_orbit is not None:
            lines.append(f"breaking orbit: {verdict.breaking_orbit}")
        lines += _violation_lines(payload["violations"])
    else:
        verdict = check_main_theorem(building, catalog)
        payload = verdict.to_dict()
        lines = [f"main theorem: {'ok' if verdict.ok else 'violations'}", f"c_N = {verdict.c_N}"]
        lines += _violation_lines(payload["violations"])
        lines += _violation_lines(payload["nice"]["violations"])
    _emit(payload, args.json, lines)
    return EXIT_OK if verdict.ok else EXIT_VIOLATIONS


COMMANDS = {
    "spectrum": cmd_spectrum,
    "index": cmd_index,
    "validate": cmd_validate,
    "surgery": cmd_surgery,
    "enumerate": cmd_enumerate,
    "check": cmd_check,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Ejecutar un subcomando y devolver el código de salida"""
    parser = create_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_ERROR

    try:
        level = args.log_level or get_settings().log_level
        logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
        logging.getLogger().setLevel(level)
        code = COMMANDS[args.command](args)
        logger.debug("cache: %s", cache_manager.get_cache_stats())
        return code
    except SftCalcError as e:
        sys.stderr.write(f"error[{e.code}]: {e.message}\n")
        return EXIT_ERROR


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
