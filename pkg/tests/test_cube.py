import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hamlab.cube import (CubeFunction, DimensionError, Spectrum, ValueNormSpec, fwht, gradient_field,
                         heat, inverse_wht, laplacian, lp_norm, naive_wht, partial_d, project_band, wht)


def eps(n, *idx):
    return CubeFunction.character(n, sum(1 << i for i in idx))


def test_character_coefficients():
    c = wht(eps(1, 0)).coeffs[:, 0]
    assert c[1] == pytest.approx(1) and abs(c[0]) < 1e-15
    c2 = wht(eps(2, 0, 1)).coeffs[:, 0]
    assert np.allclose(c2, [0, 0, 0, 1])


def test_fast_matches_naive():
    rng = np.random.default_rng(1)
    v = rng.standard_normal(1 << 7)
    assert np.allclose(fwht(v) / 2**7, naive_wht(v), atol=1e-13)
    assert np.allclose(fwht(fwht(v)) / 2**7, v, atol=1e-12)


@given(st.integers(0, 8), st.integers(0, 2**32 - 1))
@settings(max_examples=20, deadline=None)
def test_roundtrip(n, seed):
    f = CubeFunction.random(n, np.random.default_rng(seed))
    assert np.allclose(inverse_wht(wht(f)).values, f.values, atol=1e-12)


def test_lp_examples():
    assert lp_norm(eps(3, 1), 3.0) == pytest.approx(1)
    f = CubeFunction.constant(1) + eps(1, 0)
    assert lp_norm(f, 2.0) == pytest.approx(math.sqrt(2))
    for p in (1.0, 1.5, 4.0):
        assert lp_norm(f, p) == pytest.approx(2 ** (1 - 1 / p))


def test_laplacian_and_gradient():
    g = eps(3, 0, 1)
    assert np.allclose(laplacian(g).values, 2 * g.values)
    f = eps(2, 0) + eps(2, 1)
    assert np.allclose(gradient_field(f).values, math.sqrt(2))
    h = CubeFunction.random(6, np.random.default_rng(2))
    total = sum(partial_d(h, j).values for j in range(6))
    assert np.allclose(total, laplacian(h).values, atol=1e-12)
    energy = sum(lp_norm(partial_d(h, j), 2.0) ** 2 for j in range(6))
    c = h.spectrum().coeffs[:, 0]
    deg = np.array([bin(x).count("1") for x in range(64)])
    assert energy == pytest.approx(float(np.sum(deg * c**2)), rel=1e-12)


def test_heat_semigroup():
    f = CubeFunction.random(5, np.random.default_rng(3))
    assert np.allclose(heat(f, 1.0).values, f.values)
    assert np.allclose(heat(f, 0.0).values, f.spectrum().coeffs[0, 0])
    assert np.allclose(heat(heat(f, 0.3), 0.7).values, heat(f, 0.21).values, atol=1e-12)


def test_project_band():
    n = 2
    f = CubeFunction.constant(n) + eps(n, 0) + eps(n, 0, 1)
    assert np.allclose(project_band(f, 1, 1).values, eps(n, 0).values)
    assert np.allclose(project_band(f, 0, n).values, f.values)
    g = CubeFunction.random(6, np.random.default_rng(4))
    assert np.allclose((project_band(g, 0, 2) + project_band(g, 3, 6)).values, g.values, atol=1e-12)


def test_value_norms():
    v = np.array([[3.0, 4.0]])
    assert ValueNormSpec(2.0).norm(v)[0] == pytest.approx(5)
    assert ValueNormSpec(1.0).norm(v)[0] == pytest.approx(7)
    assert ValueNormSpec(math.inf).norm(v)[0] == pytest.approx(4)
    assert ValueNormSpec(4.0).dual.q == pytest.approx(4 / 3)


def test_bad_input():
    with pytest.raises(DimensionError):
        CubeFunction(np.ones(3))
    with pytest.raises(ValueError):
        CubeFunction([1.0, math.nan])


def test_json_roundtrip():
    f = CubeFunction.random(3, np.random.default_rng(5), m=2)
    g, spec = CubeFunction.from_json(f.to_json(q=4.0))
    assert np.array_equal(g.values, f.values) and spec.q == 4.0
    s = f.spectrum()
    assert np.allclose(Spectrum.from_json(s.to_json()).coeffs, s.coeffs)
