import orjson
import pytest

from sftcalc.errors import InvalidInputError
from sftcalc.main import EXIT_ERROR, EXIT_OK, EXIT_VIOLATIONS, parse_key, run
from sftcalc.schemas import (
    dump_asymptotics,
    dump_building,
    dump_catalog,
    load_asymptotics,
    load_building,
    load_catalog,
    parse_asymptotics,
    parse_building,
    parse_catalog,
)
from sftcalc.utils import dumps_json

from tests.conftest import fixture_path

DEMO = str(fixture_path("catalog_demo.json"))
FLOW = str(fixture_path("catalog_flow.json"))
BROKEN_PAIR = str(fixture_path("broken_pair.json"))
ASYMPTOTICS = str(fixture_path("asymptotics_two_odd.json"))

BUILDING_FIXTURES = [
    ("trivial_cylinder.json",),
    ("broken_pair.json",),
    ("nongeneric_middle.json",),
    ("mutants", "odd_breaking.json"),
    ("mutants", "not_bad_double.json"),
    ("mutants", "two_even_punctures.json"),
]


def _run(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_parse_key():
    assert parse_key("top:1") == ("top", 1)
    assert parse_key("a:b:2") == ("a:b", 2)
    for raw in ("top", ":1", "top:x"):
        with pytest.raises(InvalidInputError):
            parse_key(raw)


# index / check / validate

def test_index_of_trivial_cylinder(capsys):
    code, out, _ = _run(capsys, "index", "--catalog", DEMO, "--building", str(fixture_path("trivial_cylinder.json")))
    assert code == EXIT_OK
    assert "ind = 0" in out.splitlines()
    assert "c_N = 0" in out.splitlines()


def test_index_json_report(capsys):
    code, out, _ = _run(capsys, "index", "--catalog", DEMO, "--building", BROKEN_PAIR, "--json")
    payload = orjson.loads(out)
    assert code == EXIT_OK
    assert payload["report"]["index"] == 2
    assert payload["additivity"]["c_N"]["rhs"] == payload["report"]["c_N"] == 0


def test_check_stable_on_broken_pair(capsys):
    code, out, _ = _run(capsys, "check", "--catalog", DEMO, "--building", BROKEN_PAIR, "--theorem", "stable")
    assert code == EXIT_OK
    assert "taxonomy: BROKEN_PAIR" in out
    assert "breaking orbit: delta" in out


def test_check_main_on_broken_pair(capsys):
    code, out, _ = _run(capsys, "check", "--catalog", DEMO, "--building", BROKEN_PAIR, "--theorem", "main")
    assert code == EXIT_OK
    assert out.startswith("main theorem: ok")


def test_check_stable_rejects_nongeneric_middle(capsys):
    code, out, _ = _run(capsys, "check", "--catalog", DEMO, "--building", str(fixture_path("nongeneric_middle.json")))
    assert code == EXIT_VIOLATIONS
    assert "NON_GENERIC at middle" in out


def test_validate_odd_breaking_mutant(capsys):
    building = str(fixture_path("mutants", "odd_breaking.json"))
    code, out, _ = _run(capsys, "validate", "--catalog", DEMO, "--building", building)
    assert code == EXIT_VIOLATIONS
    assert "BREAKING_ORBIT_ODD" in out


# Errores de entrada

def test_schema_error_names_the_json_path(capsys, tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_bytes(orjson.dumps({"format": 1, "components": [{"id": "x", "genus": -1}]}))
    code, _, err = _run(capsys, "index", "--catalog", DEMO, "--building", str(broken))
    assert code == EXIT_ERROR
    assert err.startswith("error[SCHEMA]: components[0].genus:")


def test_unreadable_file(capsys, tmp_path):
    code, _, err = _run(capsys, "validate", "--catalog", DEMO, "--building", str(tmp_path / "missing.json"))
    assert code == EXIT_ERROR
    assert err.startswith("error[INVALID_INPUT]")


def test_usage_error_exit_code(capsys):
    code, _, _ = _run(capsys, "surgery")
    assert code == EXIT_ERROR


# spectrum

def test_spectrum_of_table_orbit(capsys):
    code, out, _ = _run(capsys, "spectrum", "--catalog", DEMO, "--orbit", "a", "--window", "10", "--json")
    payload = orjson.loads(out)
    assert code == EXIT_OK
    assert [e["winding"] for e in payload["table"]["entries"]] == [-1, 0, 1]
    assert payload["summary"]["mu_cz"] == 1


def test_spectrum_crossing_needs_a_flow_model(capsys):
    code, _, err = _run(capsys, "spectrum", "--catalog", DEMO, "--orbit", "a", "--window", "10", "--crossing")
    assert code == EXIT_ERROR
    assert "no flow model" in err


def test_spectrum_of_flow_orbit_with_crossing_index(capsys):
    code, out, _ = _run(capsys, "spectrum", "--catalog", FLOW, "--orbit", "rotation", "--window", "10", "--crossing")
    assert code == EXIT_OK
    assert "alpha- = 0  alpha+ = 1  parity = 1  mu_CZ = 1" in out
    assert "mu_CZ (crossing form) = 1" in out


# surgery

def test_surgery_augment_writes_a_building(capsys, tmp_path):
    out_file = tmp_path / "augmented.json"
    code, _, _ = _run(capsys, "surgery", "--building", str(fixture_path("trivial_cylinder.json")),
                      "--op", "augment", "--site", "cyl:0", "--out", str(out_file))
    assert code == EXIT_OK
    augmented = load_building(out_file)
    assert augmented.component_ids == ["cyl", "triv"]
    assert augmented.breaking_pairs == ((("cyl", 0), ("triv", 1)),)


def test_surgery_core_to_stdout(capsys):
    code, out, _ = _run(capsys, "surgery", "--building", BROKEN_PAIR, "--op", "core")
    assert code == EXIT_OK
    assert parse_building(orjson.loads(out)).component_ids == ["top", "bottom"]


def test_surgery_augment_needs_one_site(capsys):
    code, _, err = _run(capsys, "surgery", "--building", BROKEN_PAIR, "--op", "augment")
    assert code == EXIT_ERROR
    assert "exactly one of --site or --pair" in err


def test_surgery_augment_on_glued_puncture_fails(capsys):
    code, _, err = _run(capsys, "surgery", "--building", BROKEN_PAIR, "--op", "augment", "--site", "top:0")
    assert code == EXIT_ERROR
    assert err.startswith("error[SURGERY]")


# enumerate

def test_enumerate_json(capsys):
    code, out, _ = _run(capsys, "enumerate", "--catalog", DEMO,
                        "--asymptotics", ASYMPTOTICS, "--json")
    limits = orjson.loads(out)["limits"]
    assert code == EXIT_OK
    assert [(l["top_punctures"], l["bottom_punctures"]) for l in limits] == [([0], [1]), ([1], [0])]
    assert {l["breaking_orbit"]["simple"] for l in limits} == {"delta"}


# Determinismo y formato de archivo

JSON_COMMANDS = [
    ("index", "--catalog", DEMO, "--building", BROKEN_PAIR, "--json"),
    ("validate", "--catalog", DEMO, "--building", BROKEN_PAIR, "--json"),
    ("enumerate", "--catalog", DEMO, "--asymptotics", ASYMPTOTICS, "--json"),
    ("spectrum", "--catalog", FLOW, "--orbit", "rotation", "--window", "10", "--json"),
    ("check", "--catalog", DEMO, "--building", BROKEN_PAIR, "--theorem", "stable", "--json"),
    ("check", "--catalog", DEMO, "--building", BROKEN_PAIR, "--theorem", "main", "--json"),
    ("surgery", "--building", BROKEN_PAIR, "--op", "core"),
]


@pytest.mark.parametrize("argv", JSON_COMMANDS)
def test_output_is_deterministic(capsys, argv):
    first = _run(capsys, *argv)
    second = _run(capsys, *argv)
    assert first == second
    out = first[1].encode()
    assert out == dumps_json(orjson.loads(out))


@pytest.mark.parametrize("parts", BUILDING_FIXTURES)
def test_building_fixtures_survive_a_round_trip(parts):
    building = load_building(fixture_path(*parts))
    first = dump_building(building)
    again = parse_building(orjson.loads(first))
    assert again == building
    assert dump_building(again) == first


@pytest.mark.parametrize("name", ["catalog_demo.json", "catalog_tables.json", "catalog_flow.json"])
def test_catalog_fixtures_survive_a_round_trip(name):
    catalog = load_catalog(fixture_path(name))
    first = dump_catalog(catalog)
    again = parse_catalog(orjson.loads(first))
    assert again.ids == catalog.ids
    assert dump_catalog(again) == first


def test_asymptotics_fixture_survives_a_round_trip():
    punctures = load_asymptotics(fixture_path("asymptotics_two_odd.json"))
    first = dump_asymptotics(punctures)
    again = parse_asymptotics(orjson.loads(first))
    assert again == punctures
    assert dump_asymptotics(again) == first


def test_surgery_file_output_matches_stdout(capsys, tmp_path):
    out_file = tmp_path / "core.json"
    _, out, _ = _run(capsys, "surgery", "--building", BROKEN_PAIR, "--op", "core")
    code, _, _ = _run(capsys, "surgery", "--building", BROKEN_PAIR, "--op", "core", "--out", str(out_file))
    assert code == EXIT_OK
    assert out_file.read_bytes() == out.encode()
