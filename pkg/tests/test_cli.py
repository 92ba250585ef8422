import json
import subprocess
import sys

import pytest

from quotdt import cli, series
from quotdt.motive import ONE, TateClass


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_expand_csv_first_coefficient(capsys):
    code, out, _ = run(capsys, "expand", "--formula", "z-affine", "--rank", "1", "--order", "1", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,class,chi,weight"
    assert lines[2].startswith("1,L^(3/2),")


def test_expand_u_notation(capsys):
    code, out, _ = run(capsys, "expand", "--formula", "z-affine", "--rank", "1", "--order", "1", "--format", "csv", "--var", "u")
    assert code == 0 and out.splitlines()[2].startswith("1,-u^3,")


def test_expand_dt_series_text(capsys):
    code, out, _ = run(capsys, "expand", "--formula", "dt-series", "--rank", "2", "--chi", "-200", "--order", "1")
    assert code == 0 and out == "1, -400·q\n"


def test_expand_dt_series_chern(capsys):
    code, out, err = run(capsys, "expand", "--formula", "dt-series", "--rank", "2", "--chern", "24,4", "--order", "1", "--format", "json")
    payload = json.loads(out)
    assert code == 0 and payload["conjectural"] is True
    assert payload["coeffs"] == ["1", "-40"]
    assert "conjectural" in err


def test_expand_macmahon_order_zero(capsys):
    assert run(capsys, "expand", "--formula", "macmahon", "--order", "0") == (0, "1\n", "")


@pytest.mark.parametrize("formula", cli.FORMULAS)
@pytest.mark.parametrize("fmt", ["text", "json", "csv", "latex"])
def test_every_formula_renders(capsys, formula, fmt):
    extra = {"dt-series": ["--chi", "24"], "z-threefold": ["--motive", "P3"]}.get(formula, [])
    code, out, _ = run(capsys, "expand", "--formula", formula, "--rank", "2", "--order", "3", "--format", fmt, *extra)
    assert code == 0 and out


def test_json_coefficients_round_trip(capsys):
    code, out, _ = run(capsys, "expand", "--formula", "p-punctual", "--rank", "2", "--order", "3", "--format", "json")
    coeffs = [TateClass.from_json(c) for c in json.loads(out)["coeffs"]]
    assert coeffs[0] == ONE and len(coeffs) == 4


@pytest.mark.parametrize(
    "argv",
    [
        ["expand", "--formula", "bogus"],
        ["expand", "--formula", "dt-series", "--rank", "2"],
        ["expand", "--formula", "dt-series", "--chern", "x"],
        ["expand", "--formula", "z-threefold"],
        ["expand", "--formula", "z-threefold", "--motive", "L^(1/3)"],
        ["expand", "--formula", "macmahon", "--order", "-1"],
        ["verify", "--suite", "nope"],
        ["verify", "--suite", "identities", "--identity", "nope"],
        ["verify", "--ranks", "0"],
        ["oracle", "quot-count", "--rank", "1", "--points", "1", "--q", "4"],
        [],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and err


def test_budget_refusal(capsys):
    code, out, err = run(capsys, "oracle", "quot-count", "--rank", "2", "--points", "3", "--q", "5")
    assert code == 2 and out == "" and "--force" in err


def test_oracle_quot_count(capsys):
    code, out, _ = run(capsys, "oracle", "quot-count", "--rank", "1", "--points", "1", "--q", "3")
    assert code == 0 and json.loads(out)["count_quot"] == 27


def test_oracle_plane_partitions(capsys):
    code, out, _ = run(capsys, "oracle", "plane-partitions", "--colors", "1", "--size", "4")
    assert code == 0 and json.loads(out)["count"] == 13


def test_oracle_pin(capsys, tmp_path):
    pin = tmp_path / "oracle_counts.json"
    args = ["oracle", "ncquot-count", "--rank", "1", "--points", "1", "--q", "2", "--pin", "--pin-file", str(pin)]
    assert run(capsys, *args)[0] == 0
    assert json.loads(pin.read_text()) == [{"count_ncquot": 8, "count_quot": None, "n": 1, "q": 2, "r": 1}]
    pin.write_text(json.dumps([{"count_ncquot": 9, "count_quot": None, "n": 1, "q": 2, "r": 1}]))
    code, _, err = run(capsys, *args)
    assert code == 1 and "regression mismatch" in err


def test_verify_identities_pass(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "identities", "--order", "10", "--ranks", "1,2,3")
    report = json.loads(out)
    assert code == 0 and report["passed"]
    names = {c["identity"] for c in report["cases"]}
    assert names == {"local-product", "omega-exp", "closed-form", "rank1-omega", "vc-weight"}


@pytest.mark.parametrize("name", ["local-product", "omega-exp", "closed-form", "rank1-omega", "vc-weight"])
def test_verify_single_identity(capsys, name):
    code, out, _ = run(capsys, "verify", "--identity", name, "--order", "4", "--ranks", "1,2")
    cases = json.loads(out)["cases"]
    assert code == 0 and cases and all(c["identity"] == name for c in cases)


def test_verify_euler(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "euler", "--order", "8")
    assert code == 0 and any(c["identity"] == "euler-macmahon" for c in json.loads(out)["cases"])


def test_verify_is_deterministic(capsys):
    argv = ["verify", "--suite", "all", "--order", "4", "--ranks", "1,2", "--instances", "5", "--threads", "3"]
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0
    assert "elapsed_ms" not in first[1]


def test_timing_flag(capsys):
    _, out, _ = run(capsys, "verify", "--suite", "effectivity", "--order", "3", "--ranks", "1", "--timing")
    assert "elapsed_ms" in json.loads(out)["cases"][0]


def test_corrupted_power_reports_lowest_degree(capsys, monkeypatch):
    real = series.power

    def broken(a, m):
        out = real(a, m)
        if a.order < 3:
            return out
        cs = list(out.coeffs)
        cs[3] = cs[3] + 1
        return series.MotiveSeries(cs, out.order)

    monkeypatch.setattr(series, "power", broken)
    code, out, _ = run(capsys, "verify", "--suite", "axioms", "--order", "6", "--instances", "10")
    report = json.loads(out)
    assert code == 1 and not report["passed"]
    failing = [c for c in report["cases"] if c["status"] == "fail"]
    assert failing
    for c in failing:
        assert c["first_discrepancy"]["degree"] == 3
    assert all(c["first_discrepancy"] is None for c in report["cases"] if c["status"] == "pass")


def test_console_script_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "quotdt.cli", "expand", "--formula", "macmahon", "--order", "3"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout == "1, q, 3·q^2, 6·q^3\n"
