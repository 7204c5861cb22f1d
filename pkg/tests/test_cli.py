import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from takagi.cli import main
from takagi.core_numbers import parse_binexp, parse_rat


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def record(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    rec = json.loads(out)
    assert set(rec) == {"command", "inputs", "results"}
    return rec["results"]


def test_eval(capsys):
    assert record(["eval", "1/3"], capsys)["tau"] == "2/3"
    assert record(["eval", "83581/87040"], capsys)["tau"] == "1/5"
    res = record(["eval", "1/2", "--partial", "1"], capsys)
    assert res["partial"] == "1/2"
    res = record(["eval", "0.0011(01)", "--series", "30"], capsys)
    assert res["tau"] == "13/24"
    err = abs(parse_rat(res["series"]) - Fraction(13, 24))
    assert err <= parse_rat(res["series_error_bound"])


def test_localset(capsys):
    res = record(["localset", "1/3"], capsys)
    assert res["cardinality"] == "uncountable" and res["hausdorff_dim"] == "1/2"
    res = record(["localset", "0.01(0)"], capsys)
    assert len(res["members"]) == 4
    res = record(["localset", "0"], capsys)
    assert [parse_binexp(m).value for m in res["members"]] == [0, 1]


def test_omega(capsys):
    res = record(["omega", "check", "5/24"], capsys)
    assert res["in_omega_L"] is True and res["variant"] == "LOW_TAIL"
    res = record(["omega", "check", "0.1"], capsys)
    assert res["in_omega_L"] is False
    res = record(["omega", "project", "7/16"], capsys)
    assert res["value"] == "1/3" and parse_binexp(res["projection"]).value == Fraction(1, 3)


def test_gaps_csv(capsys):
    code, out, _ = run(["gaps", "--max-2m", "4", "--format", "csv"], capsys)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert rows[1] == {
        "two_m": "4",
        "B": "3/16",
        "x_minus": "5/24",
        "x_plus": "1/4",
        "tau_x_minus": "13/24",
        "tau_x_plus": "1/2",
    }
    _, out, _ = run(["gaps", "--max-2m", "6", "--format", "csv"], capsys)
    # header, B_empty, and the four gaps with 2m in {4, 6}
    assert len(out.strip().split("\n")) == 6
    _, out, _ = run(["gaps", "--max-2m", "2", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 1 and (rows[0]["x_minus"], rows[0]["x_plus"]) == ("1/3", "1/1")


def test_breakpoints_and_families(capsys):
    res = record(["breakpoints", "3"], capsys)
    assert res["count"] == "5"
    res = record(["level-half", "inf"], capsys)
    assert res["x"] == "1/6" and res["tau"] == "1/2"
    res = record(["level-half", "2"], capsys)
    assert res["x"] == "3/16"
    res = record(["family", "3/16", "4"], capsys)
    assert res["y"] == res["tau"] == "17/32"


def test_sample(capsys):
    res = record(["sample", "--function", "partial:1", "--depth", "1"], capsys)
    assert res["values"] == ["0/1", "1/2", "0/1"]
    code, out, _ = run(["sample", "--depth", "3", "--format", "csv"], capsys)
    assert code == 0 and out.startswith("x,tau,tauL,tauS\n")


def test_coarea(capsys):
    res = record(["coarea", "--depth", "12"], capsys)
    assert res["coarea_equals_variation"] is True
    assert res["coarea_integral"] == res["total_variation"]
    res = record(["coarea", "--depth", "4", "--samples", "16", "--seed", "2"], capsys)
    assert parse_rat(res["total_variation"]) >= 1
    code, out, _ = run(["coarea", "--depth", "8", "--samples", "5", "--format", "csv"], capsys)
    assert out.startswith("t,N_estimate\n") and len(out.strip().split("\n")) == 6


def test_exit_codes(capsys):
    assert run(["eval", "3/2"], capsys)[0] == 2
    assert run(["eval", "x"], capsys)[0] == 2
    assert run(["family", "1/8", "1"], capsys)[0] == 2
    assert run(["gaps", "--max-2m", "5"], capsys)[0] == 2
    assert run(["gaps", "--max-2m", "26"], capsys)[0] == 3
    assert run(["sample", "--function", "tauL", "--depth", "25"], capsys)[0] == 3
    with pytest.raises(SystemExit) as exc:
        main(["nosuchcommand"])
    assert exc.value.code == 2


def _check_parseable(value):
    if isinstance(value, list):
        for v in value:
            _check_parseable(v)
    elif isinstance(value, dict):
        for v in value.values():
            _check_parseable(v)
    elif isinstance(value, str):
        if value.startswith("0.") and ("(" in value or set(value[2:]) <= {"0", "1"}):
            assert str(parse_binexp(value)) == value
        elif "/" in value:
            assert f"{parse_rat(value).numerator}/{parse_rat(value).denominator}" == value


COMMANDS = [
    ["eval", "5/24", "--partial", "3", "--series", "8"],
    ["eval", "0.0(01)"],
    ["localset", "1/5", "--depth", "3"],
    ["localset", "0.0011"],
    ["omega", "check", "1/3"],
    ["omega", "project", "0.0111"],
    ["breakpoints", "2"],
    ["gaps", "--max-2m", "8"],
    ["level-half", "5"],
    ["family", "1/4", "2"],
    ["sample", "--function", "tauS", "--depth", "3"],
    ["coarea", "--depth", "6", "--samples", "8", "--seed", "1"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a))
def test_round_trip_and_determinism(argv, capsys):
    code, first, _ = run(argv, capsys)
    assert code == 0
    _check_parseable(json.loads(first)["results"])
    code, second, _ = run(argv, capsys)
    assert first == second


def test_decimal_rendering(capsys):
    res = record(["--decimal", "4", "eval", "1/3"], capsys)
    assert res["tau"] == "0.6667"


def test_module_entry_point():
    out = subprocess.run(
        [sys.executable, "-m", "takagi", "eval", "1/6"], capture_output=True, text=True, check=True
    )
    assert json.loads(out.stdout)["results"]["tau"] == "1/2"
