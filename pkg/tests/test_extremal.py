import math

import numpy as np
import pytest

from hamlab.cube import CubeFunction, Spectrum
from hamlab.extremal import (RatioProblem, consistency_table, exact_p2_constant, flp_interpolation_check,
                             optimize_ratio, predicted_exponent, ratio_value, riesz_comparison)
from hamlab.fitting import DegenerateFit, fit_exponent


def test_exact_constants():
    assert exact_p2_constant(RatioProblem("laplacian", 2.0, (4, 6), 6, "minimize")) == 4
    assert exact_p2_constant(RatioProblem("gradient", 2.0, (0, 4), 6)) == 2
    assert exact_p2_constant(RatioProblem("laplacian", 2.0, (0, 1), 6)) == 1


@pytest.mark.parametrize("problem", [
    RatioProblem("laplacian", 2.0, (4, 6), 6, "minimize"),
    RatioProblem("gradient", 2.0, (0, 3), 6),
    RatioProblem("laplacian", 2.0, (0, 2), 5),
])
def test_optimizer_matches_oracle(problem):
    est = optimize_ratio(problem, seeds=3, iters=400, seed=1)
    assert est.value == pytest.approx(exact_p2_constant(problem), rel=1e-3)


def test_optimizer_deterministic():
    pr = RatioProblem("gradient", 4.0, (0, 2), 5)
    a = optimize_ratio(pr, seeds=2, iters=100, seed=9)
    b = optimize_ratio(pr, seeds=2, iters=100, seed=9)
    assert a.value == b.value
    assert np.array_equal(a.witness.coeffs, b.witness.coeffs)


def test_witness_lower_bound():
    n = 5
    pr = RatioProblem("gradient", 3.0, (0, n), n)
    witness = Spectrum.from_dict(n, {1: 1.0})
    assert ratio_value(pr, witness) >= 1 - 1e-12
    assert optimize_ratio(pr, seeds=2, iters=150).value >= 1 - 1e-9


def test_problem_validation():
    with pytest.raises(ValueError):
        RatioProblem("laplacian", 1.0, (0, 1), 3)
    with pytest.raises(ValueError):
        RatioProblem("laplacian", 2.0, (3, 2), 3)
    with pytest.raises(ValueError):
        RatioProblem("curl", 2.0, (0, 1), 3)


def test_flp():
    f = CubeFunction.character(4, 1)
    holds, ratio = flp_interpolation_check(f, 0.5, 2.0)
    assert holds and ratio == pytest.approx(0.25)
    rng = np.random.default_rng(3)
    for _ in range(5):
        g = CubeFunction.random(8, rng)
        for beta in (0.25, 0.5, 0.75):
            for p in (1.5, 2.0, 4.0):
                assert flp_interpolation_check(g, beta, p)[0]


def test_riesz():
    rng = np.random.default_rng(4)
    g = CubeFunction.random(6, rng)
    a, b = riesz_comparison(g, 2.0)
    assert a == pytest.approx(1, abs=1e-12) and b == pytest.approx(1, abs=1e-12)
    assert riesz_comparison(CubeFunction.character(3, 2), 5.0)[0] == pytest.approx(1)


def test_predicted_exponents():
    assert predicted_exponent("beta", 2.0) == pytest.approx(1)
    assert predicted_exponent("beta", 4.0) == pytest.approx(4 / 3)
    assert predicted_exponent("KXal", 3.0, alpha=0.4) == 0.4
    with pytest.raises(KeyError):
        predicted_exponent("nope", 2.0)


def test_fit_exact_power_law():
    fit = fit_exponent([(d, math.sqrt(d)) for d in range(1, 9)])
    assert fit.slope == pytest.approx(0.5, abs=1e-9)
    with pytest.raises(DegenerateFit):
        fit_exponent([(2, 1.0)])


def test_consistency_table_p2():
    rows, fit = consistency_table("p2-gradient", "gradient", 6, [1, 2, 3, 4], 2.0, seeds=2, iters=300)
    assert [r.d for r in rows] == [1, 2, 3, 4]
    assert fit.slope == pytest.approx(0.5, abs=1e-3)
