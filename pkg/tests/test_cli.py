# tests/test_cli.py

import csv
import io
import json
from fractions import Fraction

import pytest

from trace_map_toolkit.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, main
from trace_map_toolkit.cli.output import dumps_json, format_float, to_jsonable
from trace_map_toolkit.core.commands import get_command_manager
from trace_map_toolkit.core.errors import UnknownSubcommand
from trace_map_toolkit.core.settings import Settings

BUILTIN_COMMANDS = {
    "derive",
    "classify",
    "invariant-scan",
    "gaplabel",
    "idos",
    "ising",
    "kick",
    "orbit",
}


@pytest.fixture
def settings() -> Settings:
    return Settings(jobs=1, progress=False, log_to_file=False)


@pytest.fixture
def run_cli(capsys, settings):
    """Run the CLI and return ``(exit code, stdout, stderr)``."""

    def run(*argv: str) -> tuple[int, str, str]:
        code = main(list(argv), settings=settings)
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


def _csv_rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


# 🔹 Test 1: command discovery
def test_command_manager_lists_builtins():
    manager = get_command_manager()
    missing = BUILTIN_COMMANDS - set(manager.names)
    assert not missing, f"commands not discovered: {missing}"
    assert manager.get("derive").name == "derive"
    with pytest.raises(UnknownSubcommand):
        manager.get("no-such-command")


def test_metadata_carries_output_format():
    meta = get_command_manager().metadata()
    assert meta["idos"].output_format == "csv"
    assert meta["derive"].output_format == "json"


# 🔹 Test 2: usage errors
def test_unknown_subcommand(run_cli):
    code, out, err = run_cli("frobnicate")
    assert code == EXIT_USAGE and out == ""
    assert err.startswith("UnknownSubcommand:")


def test_missing_subcommand(run_cli):
    code, _, err = run_cli()
    assert code == EXIT_USAGE and "UnknownSubcommand" in err


def test_bad_rule_is_usage_error(run_cli):
    code, _, err = run_cli("derive", "--rule", "a->bx;b->a")
    assert code == EXIT_USAGE and err.startswith("BadFlagValue:")


def test_bad_log_level(run_cli):
    code, _, err = run_cli("--log-level", "loud", "derive", "--rule", "a->b;b->ba")
    assert code == EXIT_USAGE and "--log-level" in err


def test_help_exits_cleanly(run_cli):
    code, out, _ = run_cli("derive", "--help")
    assert code == EXIT_OK and "--rule" in out


# 🔹 Test 3: JSON commands
def test_derive_fibonacci(run_cli):
    code, out, _ = run_cli("derive", "--rule", "a->b;b->ba")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert next(iter(doc)) == "schema" and doc["schema"] == 1
    assert (doc["fx"], doc["fy"], doc["fz"]) == ("y", "z", "2*y*z - x")
    assert doc["P"] == "1" and doc["class"] == "Invertible"
    assert doc["checks"]["fixes_111"] is True


def test_classify_sigma(run_cli):
    code, out, _ = run_cli("classify", "--rule", "a->A;b->b")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["matrix"] == [[-1, 0], [0, 1]] and doc["det"] == -1
    assert doc["commutator_sign"] == -1 and doc["class"] == "Invertible"


def test_classify_injective_not_onto(run_cli):
    _, out, _ = run_cli("classify", "--rule", "a->b;b->baa")
    doc = json.loads(out)
    assert doc["class"] == "InjectiveNotOnto" and doc["P"] == "4*x^2"
    assert doc["commutator_sign"] is None


def test_invariant_scan(run_cli):
    code, out, _ = run_cli(
        "invariant-scan", "--kmin", "1", "--kmax", "3", "--lmin", "0", "--lmax", "2"
    )
    assert code == EXIT_OK
    rows = {(r["k"], r["l"]): r for r in json.loads(out)["rows"]}
    assert len(rows) == 9
    assert rows[(1, 0)]["invariant"] == "H,H_tilde"
    assert rows[(2, 1)]["invariant"] == "H" and rows[(2, 1)]["integer_eigenvalue_m"] == 1
    assert rows[(1, 1)]["invariant"] == "none" and rows[(1, 1)]["integer_eigenvalue_m"] is None
    assert rows[(3, 2)]["P"] == "16*x^4 - 8*x^2 + 1"


def test_invariant_scan_empty_range(run_cli):
    code, _, err = run_cli(
        "invariant-scan", "--kmin", "3", "--kmax", "1", "--lmin", "0", "--lmax", "0"
    )
    assert code == EXIT_USAGE and "BadFlagValue" in err


def test_gaplabel_fibonacci(run_cli):
    code, out, _ = run_cli(
        "gaplabel", "--k", "1", "--l", "1", "--test", "(0,1,0)", "--test", "1,-1,0"
    )
    assert code == EXIT_OK
    doc = json.loads(out)
    assert doc["D"] == 1
    assert doc["M1"] == [[0, 1], [1, 1]]
    assert doc["M2_charpoly"] == [1, -1, -1, 0, 0]
    assert doc["lambda"]["sqrt_form"] == ["1/2", "1/2", 5]
    assert [t["in_module"] for t in doc["tests"]] == [True, True]


def test_gaplabel_degenerate(run_cli):
    code, out, err = run_cli("gaplabel", "--k", "0", "--l", "3")
    assert code == EXIT_FAILURE and out == ""
    assert err.startswith("DegenerateD:")


def test_ising_commuting(run_cli):
    code, out, _ = run_cli("ising", "--K0", "0.3", "--K1", "0.7", "--n", "10")
    assert code == EXIT_OK
    doc = json.loads(out)
    assert len(doc["generations"]) == 11
    assert doc["generations"][-1]["N"] == 89
    assert doc["commuting"] is True
    assert doc["commuting_free_energy"] == pytest.approx(doc["generations"][-1]["F"], rel=1e-3)


def test_ising_antiferro(run_cli):
    code, _, err = run_cli("ising", "--K0", "-0.2", "--K1", "0.7")
    assert code == EXIT_FAILURE and err.startswith("AntiferroNormalization:")


# 🔹 Test 4: CSV commands
def test_idos_csv(run_cli):
    code, out, _ = run_cli("idos", "--k", "1", "--l", "2", "--n", "3", "--grid", "2000")
    assert code == EXIT_OK
    rows = _csv_rows(out)
    assert list(rows[0]) == ["E_low", "E_high", "type", "idos_num", "idos_den", "mu", "nu"]
    gaps = [r for r in rows if r["type"] == "gap"]
    assert sorted(int(r["idos_num"]) for r in gaps) == list(range(1, 7))
    assert all(r["idos_den"] == "7" and r["mu"] != "" for r in gaps)


def test_kick_csv(run_cli):
    argv = ["kick", "--a0", "0.7", "--n0x", "0", "--n0y", "0", "--n0z", "1"]
    argv += ["--a1", "1.3", "--n1x", "1", "--n1y", "0", "--n1z", "0", "--steps", "5"]
    code, out, _ = run_cli(*argv, "--matrix-check")
    assert code == EXIT_OK
    rows = _csv_rows(out)
    assert [int(r["n"]) for r in rows] == list(range(6))
    invariants = [float(r["I"]) for r in rows]
    assert max(invariants) - min(invariants) < 1e-9


def test_kick_rejects_non_unit_axis(run_cli):
    argv = ["kick", "--a0", "0.7", "--n0x", "1", "--n0y", "1", "--n0z", "0"]
    argv += ["--a1", "1.3", "--n1x", "1", "--n1y", "0", "--n1z", "0"]
    code, _, err = run_cli(*argv)
    assert code == EXIT_FAILURE and err.startswith("InvalidKick:")


def test_orbit_exact(run_cli):
    code, out, _ = run_cli(
        "orbit", "--rule", "a->b;b->ba", "--start", "1/2", "1/3", "1/5", "--steps", "2", "--exact"
    )
    assert code == EXIT_OK
    rows = _csv_rows(out)
    assert (rows[1]["x"], rows[1]["y"], rows[1]["z"]) == ("1/3", "1/5", "-11/30")
    assert len({r["I"] for r in rows}) == 1, "I must be exactly conserved"


def test_orbit_bad_start(run_cli):
    code, _, err = run_cli(
        "orbit", "--rule", "a->b;b->ba", "--start", "0.5", "abc", "1", "--exact"
    )
    assert code == EXIT_USAGE and err.startswith("BadFlagValue:")


def test_orbit_on_sheet_adds_family_invariant(run_cli):
    code, out, _ = run_cli(
        "orbit", "--rule", "a->b;b->baa", "--on-sheet", "0.3", "0.6", "--steps", "10"
    )
    assert code == EXIT_OK
    rows = _csv_rows(out)
    assert list(rows[0]) == ["n", "x", "y", "z", "I", "H"]
    assert len(rows) == 11
    h0 = float(rows[0]["H"])
    for row in rows:
        assert float(row["I"]) == pytest.approx(0, abs=1e-9), f"n={row['n']}"
        assert float(row["H"]) == pytest.approx(h0, abs=1e-9), f"n={row['n']}"


def test_orbit_other_branch_and_plain_rule(run_cli):
    code, out, _ = run_cli(
        "orbit", "--rule", "a->ab;b->b", "--on-sheet", "0.3", "0.6", "--branch", "-1"
    )
    assert code == EXIT_OK
    rows = _csv_rows(out)
    assert list(rows[0]) == ["n", "x", "y", "z", "I"]
    assert float(rows[0]["z"]) == pytest.approx(0.18 + (0.91 * 0.64) ** 0.5)


@pytest.mark.parametrize(
    "extra",
    [
        ("--on-sheet", "0.5", "1.5"),
        ("--on-sheet", "0.3", "0.6", "--exact"),
        ("--on-sheet", "0.3", "0.6", "--start", "1", "1", "1"),
        (),
    ],
)
def test_orbit_bad_seed(run_cli, extra):
    code, _, err = run_cli("orbit", "--rule", "a->b;b->baa", *extra)
    assert code == EXIT_USAGE and err.startswith("BadFlagValue:")


# 🔹 Test 5: output destination and encoding
def test_output_file(run_cli, tmp_path):
    target = tmp_path / "nested" / "derive.json"
    code, out, _ = run_cli("derive", "--rule", "a->ab;b->b", "-o", str(target))
    assert code == EXIT_OK and out == ""
    assert json.loads(target.read_text("utf-8"))["fz"] == "2*y*z - x"


def test_float_formatting():
    assert format_float(0.1) == "0.10000000000000001"
    assert format_float(float("nan")) == "NaN"
    assert format_float(float("-inf")) == "-Infinity"


def test_jsonable_domain_values():
    assert to_jsonable(Fraction(3, 2)) == "3/2"
    assert to_jsonable(Fraction(4, 2)) == 2
    with pytest.raises(TypeError):
        to_jsonable(object())
    assert dumps_json({"a": [1, 2]}).startswith('{\n  "schema": 1,')
