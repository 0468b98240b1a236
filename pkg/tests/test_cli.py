import json
import math

import pytest

from adsstar.errors import InvalidConfigError
from adsstar.grid import read_grid
from adsstar.verify_cli import (FIELDS, REGISTRY, SUITES, CheckReport, dumps, emit, loads, main,
                                make_entry, read_report, run_suite)


def _entry(err=1e-9, tol=1e-6):
    return make_entry("specfun.demo", {"x": 1.0}, err, tol, 3)


def test_entry_and_report_invariants():
    e = _entry()
    assert tuple(e) == FIELDS and e["pass"]
    assert not _entry(err=math.inf)["pass"]
    assert not _entry(err=math.nan)["pass"]
    with pytest.raises(InvalidConfigError):
        CheckReport("specfun", [])
    bad = dict(e, **{"pass": False})
    with pytest.raises(InvalidConfigError):
        CheckReport("specfun", [bad])
    with pytest.raises(InvalidConfigError):
        CheckReport("specfun", [{k: e[k] for k in FIELDS[:-1]}])


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_serialization_round_trip(fmt, tmp_path):
    rep = CheckReport("specfun", [_entry(), _entry(err=2e-6)])
    path = tmp_path / f"r.{fmt}"
    emit(rep, fmt, path)
    back = read_report(path)
    assert back.entries == rep.entries
    if fmt == "csv":
        lines = path.read_text().strip().splitlines()
        assert lines[0].split(",") == list(FIELDS)
        assert len(lines) == 3
    with pytest.raises(InvalidConfigError):
        loads("check_id,params\n", "csv")


def test_registry_is_well_formed():
    ids = [f"{s}.{n}" for s, n, _, _ in REGISTRY]
    assert len(ids) == len(set(ids))
    assert {s for s, *_ in REGISTRY} == set(SUITES)
    assert all(t >= 0 for *_, t in REGISTRY)


def test_full_report(full_report):
    assert len(full_report.entries) >= 25
    assert {e["check_id"].split(".")[0] for e in full_report.entries} == set(SUITES)
    for e in full_report.entries:
        assert e["pass"] == (math.isfinite(e["measured_error"]) and e["measured_error"] <= e["tolerance"])
        json.dumps(e)
    assert loads(dumps(full_report, "csv"), "csv").entries == loads(dumps(full_report)).entries


def test_tolerance_override_recorded():
    rep = run_suite("identity", tol=1.0, only="watson")
    assert all(e["params"]["tolerance_override"] and e["tolerance"] == 1.0 for e in rep.entries)
    with pytest.raises(InvalidConfigError):
        run_suite("identity", only="no-such-check")
    with pytest.raises(InvalidConfigError):
        run_suite("nonsense")


def test_check_exit_codes(capsys, tmp_path):
    assert main(["check", "specfun"]) == 0
    out, err = capsys.readouterr()
    assert len(json.loads(out)) == 6
    assert err.count("PASS") == 6
    # the four boundary cases of the spectral identity fail at the stated tolerance
    assert main(["check", "identity", "--only", "final_a1_b1_t1_r1", "--format", "csv",
                 "--out", str(tmp_path / "x.csv")]) == 1
    assert read_report(tmp_path / "x.csv").entries[0]["pass"] is False


@pytest.mark.parametrize("argv", [
    ["check", "specfun", "--theta", "0"],
    ["check", "specfun", "--tol", "-1"],
    ["check", "nonsense"],
    ["check", "specfun", "--grid-n", "4"],
    ["eval", "nonsense"],
    ["eval", "tilde_family", "--args", "tau=1"],
    ["eval", "tilde_family", "--args", "tau=one", "x=1"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert main(argv) == 2


def test_eval_targets(capsys, tmp_path):
    assert main(["eval", "tilde_family", "--args", "kind=J", "tau=1", "x=2"]) == 0
    assert "value" in json.loads(capsys.readouterr().out)
    assert main(["eval", "spectral_A", "--args", "tau=1", "alpha=1", "s=0.5"]) == 0
    capsys.readouterr()
    assert main(["eval", "identity_rhs", "--args", "tau=1", "alpha=1", "beta=1", "rho=1"]) == 0
    v = json.loads(capsys.readouterr().out)["value"]
    assert abs(complex(*v) - complex(0.3079, 0.1682)) < 1e-3
    out = tmp_path / "w.grid"
    assert main(["eval", "w_eps", "--theta", "1", "--kappa", "4", "--out", str(out),
                 "--args", "na=17", "nl=32"]) == 0
    res = json.loads(capsys.readouterr().out)
    assert res["shape"] == [17, 32]
    assert read_grid(out).chart == "phi"
    # the spectral form needs theta > 0
    assert main(["eval", "starexp_F_bessel", "--theta", "-1", "--args", "t=0.5", "x=0", "y=0"]) == 2
