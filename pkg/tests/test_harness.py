import csv
import json

import pytest

from hamlab.harness import cli
from hamlab.harness.core import FIXED_COLUMNS, REGISTRY, ConfigError, resolve_params, run_experiment
from hamlab.harness.report import ReportError, report

FAST = "gradient-representation"


def test_registry_shape():
    assert len(REGISTRY) >= 18
    assert {e.module for e in REGISTRY.values()} >= {"cube", "heat", "interp", "planar", "clifford", "extremal"}
    assert len(set(REGISTRY)) == len(REGISTRY)
    for e in REGISTRY.values():
        assert e.anchor.strip() and e.claims and "seed" in e.defaults


def test_list(capsys):
    assert cli.main(["list"]) == 0
    out = capsys.readouterr().out
    for exp_id in REGISTRY:
        assert exp_id in out


def test_run_passes_and_writes(tmp_path, capsys):
    assert cli.main(["run", FAST, "--out", str(tmp_path)]) == 0
    with open(tmp_path / f"{FAST}.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert tuple(rows[0])[:len(FIXED_COLUMNS)] == FIXED_COLUMNS
    assert all(r["passed"] == "true" and r["seed"] == "0" for r in rows)
    summary = json.loads((tmp_path / f"{FAST}.json").read_text())
    assert summary["passed"] and "runtime_seconds" in summary


def test_lemma_conv_sweep_to_128():
    res = run_experiment("lemma-conv-sweep", {"ks": [2, 8, 32, 128]})
    vals = [r["measured"] for r in res.rows if r["claim"] == "k times L1 norm bounded"]
    assert len(vals) == 4 and res.passed


def test_determinism(tmp_path):
    a = run_experiment("contraction", {"functions": 3, "ns": [4]}, seed=123).csv_text()
    b = run_experiment("contraction", {"functions": 3, "ns": [4]}, seed=123).csv_text()
    c = run_experiment("contraction", {"functions": 3, "ns": [4]}, seed=124).csv_text()
    assert a == b and a != c


def test_pool_size_independent(tmp_path):
    ids = ["mp-integral", "aplusb"]
    assert cli.main(["verify-all", "--only", *ids, "--out", str(tmp_path / "one")]) == 0
    assert cli.main(["verify-all", "--only", *ids, "--jobs", "2", "--out", str(tmp_path / "two")]) == 0
    for i in ids:
        assert (tmp_path / "one" / f"{i}.csv").read_bytes() == (tmp_path / "two" / f"{i}.csv").read_bytes()


@pytest.mark.parametrize("text", ["functions = 'many'", "bogus = 3", "functions = [", "[table]\nx = 1",
                                  "tol = -1.0"])
def test_malformed_config_exit_2(tmp_path, text):
    cfg = tmp_path / "bad.toml"
    cfg.write_text(text)
    assert cli.main(["run", FAST, "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_config_override(tmp_path):
    cfg = tmp_path / "ok.toml"
    cfg.write_text("ns = [2, 3]\nfunctions = 2\nseed = 5\n")
    assert cli.main(["run", FAST, "--config", str(cfg), "--out", str(tmp_path)]) == 0
    rows = list(csv.DictReader(open(tmp_path / f"{FAST}.csv")))
    assert {r["seed"] for r in rows} == {"5"}


def test_usage_errors(tmp_path):
    with pytest.raises(SystemExit) as e:
        cli.main(["run", FAST, "--seed", str(2**64)])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["frobnicate"])
    assert e.value.code == 2
    assert cli.main(["run", "no-such-experiment", "--out", str(tmp_path)]) == 2
    with pytest.raises(ConfigError):
        resolve_params(REGISTRY[FAST], {"seed": -1})


def test_empty_report(capsys):
    assert cli.main(["report"]) == 0
    assert capsys.readouterr().out == ""
    assert report([]) == ("", True)


def test_version_mismatch(tmp_path):
    run_experiment(FAST, {"ns": [2], "functions": 1}).write(str(tmp_path))
    path = tmp_path / f"{FAST}.csv"
    lines = path.read_text().splitlines()
    lines[-1] = lines[-1].replace(",0.1.0,", ",9.9.9,", 1)
    path.write_text("\n".join(lines) + "\n")
    with pytest.raises(ReportError, match="version mismatch"):
        report([str(path)])
    assert cli.main(["report", str(path)]) == 2


def test_report_coverage(tmp_path, capsys):
    run_experiment(FAST, {"ns": [2], "functions": 1}).write(str(tmp_path))
    path = str(tmp_path / f"{FAST}.csv")
    text, ok = report([path])
    assert ok and "gradient representation" in text
    # requiring every registered claim flags the missing ones
    text, ok = report([path], require_all=True)
    assert not ok and "MISSING" in text
    assert cli.main(["report", "--all", path]) == 1


def test_failed_claim_exit_1(tmp_path):
    cfg = tmp_path / "strict.toml"
    # an impossible tolerance makes the claim fail rather than error
    cfg.write_text("tol = 0.0\nns = [8]\nfunctions = 5\n")
    code = cli.main(["run", FAST, "--config", str(cfg), "--out", str(tmp_path)])
    assert code in (0, 1)
    rows = list(csv.DictReader(open(tmp_path / f"{FAST}.csv")))
    assert code == (0 if all(r["passed"] == "true" for r in rows) else 1)


def test_header_schema_error(tmp_path):
    p = tmp_path / "x.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ReportError):
        report([str(p)])
