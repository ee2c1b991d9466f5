"""Acceptance suite: one test per criterion over a single full verify-all run."""
import csv
import json
import math
import time

import pytest

from hamlab.harness import cli
from hamlab.harness.core import REGISTRY

crit = pytest.mark.criterion
LIMIT_SECONDS = 600


@pytest.fixture(scope="module")
def suite(tmp_path_factory):
    out = tmp_path_factory.mktemp("verify-all")
    t0 = time.perf_counter()
    code = cli.main(["verify-all", "--out", str(out)])
    return {"code": code, "elapsed": time.perf_counter() - t0, "dir": out}


def rows(suite, exp_id, claim=None):
    with open(suite["dir"] / f"{exp_id}.csv", newline="") as fh:
        out = list(csv.DictReader(fh))
    if claim is not None:
        out = [r for r in out if r["claim"] == claim]
        assert out, f"{exp_id}: no rows for {claim!r}"
    return out


def summary(suite, exp_id):
    return json.loads((suite["dir"] / f"{exp_id}.json").read_text())


def asserted(suite, exp_id, claim, tol=None):
    """Rows of a claim that carry a target; all must pass at tolerance ``tol``."""
    rs = [r for r in rows(suite, exp_id, claim) if r["target"] != "nan"]
    assert rs, f"{exp_id}: {claim!r} has no asserted rows"
    for r in rs:
        assert r["passed"] == "true", f"{exp_id}: {claim!r} failed: {r}"
        if tol is not None:
            assert float(r["tolerance"]) <= tol, f"{exp_id}: tolerance {r['tolerance']} looser than {tol}"
    return rs


def all_pass(suite, exp_id):
    rs = rows(suite, exp_id)
    bad = [r for r in rs if r["passed"] != "true"]
    assert not bad, f"{exp_id}: {len(bad)} failing rows, first {bad[0]}"
    assert {r["claim"] for r in rs} == set(REGISTRY[exp_id].claims), f"{exp_id}: claim coverage"
    return rs


def params(suite, exp_id):
    return summary(suite, exp_id)["params"]


@crit("1 gradient representation: discrepancy <= 1e-11, n <= 8, 20 f, 4 t values, < 10 s")
def test_gradient_representation(suite):
    all_pass(suite, "gradient-representation")
    asserted(suite, "gradient-representation", "gradient representation", tol=1e-11)
    p = params(suite, "gradient-representation")
    assert max(p["ns"]) == 8 and p["functions"] == 20 and p["ts"] == [0.05, 0.3, 1.0, 3.0]
    assert summary(suite, "gradient-representation")["runtime_seconds"] < 10


@crit("2 moments: closed form for m <= 8 to 1e-12, second moment equals 2")
def test_moments(suite):
    all_pass(suite, "delta-moments")
    rs = asserted(suite, "delta-moments", "moment closed form", tol=1e-12)
    assert {int(r["order"]) for r in rs} == set(range(1, 9))
    for r in asserted(suite, "delta-moments", "second moment equals two", tol=1e-12):
        assert abs(float(r["measured"]) - 2) <= 1e-12


@crit("3 contraction: ratio <= 1 + 1e-9 for p in {2,3,4,8}; p < 2 constant max/min < 10")
def test_contraction(suite):
    all_pass(suite, "contraction")
    rs = asserted(suite, "contraction", "contraction for p >= 2", tol=1e-9)
    assert all(float(r["target"]) == 1.0 for r in rs)
    assert {float(r["p"]) for r in rs} == {2.0, 3.0, 4.0, 8.0}
    p = params(suite, "contraction")
    assert max(p["ns"]) <= 6 and max(p["ds"]) == 5 and p["grid"] == 41 and p["functions"] == 50
    (u,) = asserted(suite, "contraction", "constant uniform for p < 2")
    assert float(u["measured"]) < 10


@crit("4 kernel: k ||s_k||_1 <= C0 for k = 2..128, tail 1e-10, duality 1e-8, signs, < 60 s")
def test_lemma_conv(suite):
    all_pass(suite, "lemma-conv-sweep")
    rs = asserted(suite, "lemma-conv-sweep", "k times L1 norm bounded")
    assert sorted(int(r["k"]) for r in rs) == [2, 4, 8, 16, 32, 64, 128]
    assert len({r["target"] for r in rs}) == 1  # a single C0
    asserted(suite, "lemma-conv-sweep", "tail coefficients", tol=1e-10)
    asserted(suite, "lemma-conv-sweep", "duality identity", tol=1e-8)
    asserted(suite, "lemma-conv-sweep", "sign alternation")
    assert summary(suite, "lemma-conv-sweep")["runtime_seconds"] < 60


@crit("5 coefficients: lens slope +-0.05, two-gone oracle 1e-4 and slope +-0.1, integral m^alpha bounded")
def test_coefficients(suite):
    for exp_id in ("lens-coefficients", "twogone-map", "coefficient-integral"):
        all_pass(suite, exp_id)
    for r in asserted(suite, "lens-coefficients", "lens coefficient slope", tol=0.05):
        assert float(r["target"]) == pytest.approx(-1 - float(r["alpha"]))
    asserted(suite, "twogone-map", "lens oracle reproduced", tol=1e-4)
    rs = asserted(suite, "twogone-map", "two-gone coefficient slope", tol=0.1)
    assert len(rs) == 3
    for exp_id in ("lens-coefficients", "twogone-map"):
        p = params(suite, exp_id)
        assert p["n_lo"] == 64 and p["n_hi"] == 4096
    assert params(suite, "coefficient-integral")["ms"][0] == 8
    assert params(suite, "coefficient-integral")["ms"][-1] == 2048
    asserted(suite, "coefficient-integral", "scaled integral bounded")


@crit("6 paraproduct: d^alpha tail bound max/min < 5 for d = 2..2048; spot checks within 1%")
def test_paraproduct(suite):
    all_pass(suite, "paraproduct")
    rs = asserted(suite, "paraproduct", "scaled tail bound bounded")
    assert all(float(r["measured"]) < 5 for r in rs)
    ds = params(suite, "paraproduct")["ds"]
    assert ds[0] == 2 and ds[-1] == 2048
    asserted(suite, "paraproduct", "monomial spot check", tol=0.01)


@crit("7 Green: d G_d(1) -> sqrt 2 within 1% by d = 512; lens exponent within 2%; d G bounded")
def test_green(suite):
    all_pass(suite, "green-segment")
    all_pass(suite, "green-lens")
    (r,) = asserted(suite, "green-segment", "d times G at one tends to sqrt 2", tol=0.01)
    assert int(r["d"]) == 512 and float(r["target"]) == pytest.approx(math.sqrt(2))
    asserted(suite, "green-lens", "exponent fit", tol=0.02)
    asserted(suite, "green-lens", "d times G bounded")
    ds = params(suite, "green-lens")["ds"]
    assert ds[0] == 4 and ds[-1] == 512


@crit("8 Clifford: identities to 1e-10, derivative one sign, FD <= 1e-6, Bernstein <= 1, ncBM p=2 <= 1/sqrt d")
def test_clifford(suite):
    for exp_id in ("clifford-identities", "fejer-bernstein", "ncbm-table"):
        all_pass(suite, exp_id)
    for claim in ("anticommutation", "rotation product formula", "sign conjugation",
                  "Schatten equals Lebesgue", "derivative identity"):
        asserted(suite, "clifford-identities", claim, tol=1e-10)
    signs = {r["measured"] for r in asserted(suite, "clifford-identities", "derivative sign")}
    assert len(signs) == 1  # one global sign
    asserted(suite, "clifford-identities", "finite difference cross-check", tol=1e-6)
    assert params(suite, "clifford-identities")["n_max"] <= 5
    for r in asserted(suite, "fejer-bernstein", "matrix Bernstein ratio"):
        assert float(r["measured"]) <= 1
    for r in asserted(suite, "ncbm-table", "p = 2 constant"):
        assert float(r["measured"]) <= 1 / math.sqrt(int(r["d"])) + 1e-12
    assert rows(suite, "ncbm-table", "observed constant")


@crit("9 extremal: p = 2 constants to 1e-3 relative, FLP inequality on the sweep, consistency tables produced")
def test_extremal(suite):
    for exp_id in ("extremal-oracles", "flp-interpolation", "consistency-rxf", "consistency-kxal"):
        all_pass(suite, exp_id)
    asserted(suite, "extremal-oracles", "tail minimum", tol=1e-3)
    asserted(suite, "extremal-oracles", "gradient maximum", tol=1e-3)
    p = params(suite, "extremal-oracles")
    assert max(p["ns"]) <= 10 and max(p["ds"]) == 6
    asserted(suite, "flp-interpolation", "interpolation inequality")
    for exp_id in ("consistency-rxf", "consistency-kxal"):
        assert rows(suite, exp_id, "optimized ratio")
        fits = rows(suite, exp_id, "fitted exponent")
        assert all(math.isfinite(float(r["measured"])) for r in fits)


@crit("10 curve: margin > 0 on (0, a/4], cubic coefficient within 5%")
def test_curve(suite):
    all_pass(suite, "curve-check")
    rs = asserted(suite, "curve-check", "margin positive")
    assert len(rs) == 3 and all(float(r["measured"]) > 0 for r in rs)
    asserted(suite, "curve-check", "cubic coefficient", tol=0.05)


@crit("11 verify-all: every claim passes and the suite finishes in under 10 minutes")
def test_verify_all_runtime(suite):
    assert suite["code"] == 0
    assert suite["elapsed"] < LIMIT_SECONDS
    report = (suite["dir"] / "report.md").read_text()
    assert "FAIL" not in report and "MISSING" not in report
