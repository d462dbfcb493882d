import functools
import json
import subprocess
import sys

import pytest

from gspin import cli
from gspin.report import Check, Report
from gspin.suite import ConfigError, SuiteConfig, emit_report, run_suite


@functools.lru_cache(maxsize=None)
def _z2_all():
    return run_suite(SuiteConfig())


def test_z2_all_suite_passes():
    rep = _z2_all()
    assert rep.ok, str(rep.first_failure())
    ids = [c.id for c in rep]
    for prefix in ("crossed.jones.", "basic.phi.", "quasi.", "dual.", "iterated.psi.", "iterated.tau.",
                   "matrixfield.takai.", "tower."):
        assert any(i.startswith(prefix) for i in ids), prefix
    assert all(c.ref for c in rep)
    assert rep.meta["group"] and rep.meta["window"] == "1/2:2"


def test_cli_exit_zero_and_json(tmp_path):
    out = tmp_path / "r.json"
    code = cli.main(["--suite", "hopf,field", "--format", "json", "--no-timing", "--out", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"meta", "checks"}
    assert {"group", "window", "seed", "scalar-mode", "tol", "version"} <= set(doc["meta"])
    row = doc["checks"][0]
    assert {"id", "paper_ref", "mode", "status", "elapsed_ms"} <= set(row)
    assert [r["id"] for r in doc["checks"]] == sorted(r["id"] for r in doc["checks"])


def test_seeded_s3_run_is_deterministic(tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        code = cli.main(["--group", "symmetric:3", "--suite", "matrixfield", "--seed", "42", "--samples", "100",
                         "--format", "json", "--no-timing", "--out", str(p)])
        assert code == 0
    a, b = (p.read_bytes() for p in paths)
    assert a == b
    assert any(r["mode"] == "sampled" for r in json.loads(a)["checks"])


@pytest.mark.parametrize("argv", [
    ["--window", "1:1", "--suite", "quasi"],
    ["--group", "klein:4"],
    ["--suite", "nonsense"],
    ["--tol", "0"],
    ["--samples", "0"],
    ["--window", "3:1"],
])
def test_configuration_errors_exit_2(argv, capsys):
    assert cli.main(argv) == 2
    assert "error" in capsys.readouterr().err


def test_config_error_raised_before_running():
    with pytest.raises(ConfigError):
        run_suite(SuiteConfig(window="1:1", suites=["quasi"]))


def test_failing_report_exits_1(monkeypatch, capsys):
    bad = Report([Check("x.check", False, witness=("d[a]@1", "r[u]@1/2"))])
    monkeypatch.setattr(cli, "run_suite", lambda cfg: bad)
    assert cli.main(["--format", "json"]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["checks"][0]["status"] == "fail"
    assert doc["checks"][0]["witness"] == ["d[a]@1", "r[u]@1/2"]


def test_empty_report_json():
    doc = json.loads(Report().to_json())
    assert doc == {"meta": {}, "checks": []}


def test_json_round_trip_byte_identical():
    text = _z2_all().to_json(timing=False)
    again = json.dumps(json.loads(text), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    assert again == text


def test_text_report(capsys, tmp_path):
    emit_report(_z2_all(), "text", timing=False)
    out = capsys.readouterr().out
    meta, _, table = out.partition("\n\n")
    assert "group: Z2" in meta.splitlines()
    assert table.splitlines()[0].startswith("check") and "status" in table.splitlines()[0]
    with pytest.raises(ConfigError):
        emit_report(Report(), "yaml")


def test_unwritable_output_exits_2(tmp_path):
    assert cli.main(["--suite", "hopf", "--out", str(tmp_path / "missing" / "r.json")]) == 2


def test_eval(capsys):
    assert cli.main(["--eval", "E(d[a]@1 * d[a]@2 * r[u]@1/2 * r[u]@3/2)"]) == 0
    assert capsys.readouterr().out.strip() == "1/2*d[u]@1*d[u]@2+1/2*d[a]@1*d[a]@2"
    assert cli.main(["--eval", "d[z]@1"]) == 2
    err = capsys.readouterr().err.splitlines()
    assert err[1] == "  ^" and "unknown-element" in err[2]


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "gspin", "--eval", "star(d[a]@1)"], capture_output=True, text=True)
    # printed in the expanded basis of the default window
    assert r.returncode == 0 and r.stdout.strip() == "d[a]@1*d[u]@2+d[a]@1*d[a]@2"
