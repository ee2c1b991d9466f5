import math

import numpy as np
import pytest

from hamlab.interp import (KernelS, certificate, duality_identity_check, gauss_legendre,
                           integration_via_kernel_check, interpolant, sawtooth, sawtooth_coefficient,
                           square_wave_pairing, triangular_cos)


def test_sawtooth_values_and_coefficients():
    assert sawtooth(math.pi / 2) == pytest.approx(math.pi / 4)
    assert sawtooth(0.0) == 0
    M = 1 << 14
    x = 2 * math.pi * np.arange(M) / M
    c = np.fft.fft(sawtooth(x)) / M
    for j in (1, 2, 5):
        assert c[j] == pytest.approx(sawtooth_coefficient(j), abs=1e-3)


def test_literal_two_node_interpolant():
    L = interpolant(2, "literal")
    x = np.linspace(-3, 3, 7)
    assert np.allclose(L(x), 2 * math.pi / (3 * math.sqrt(3)) * np.sin(x), atol=1e-12)


@pytest.mark.parametrize("construction", ["dual", "literal"])
def test_interpolant_odd_and_band_limited(construction):
    L = interpolant(8, construction)
    x = np.linspace(0.1, 3.0, 11)
    assert np.allclose(L(-x), -L(x), atol=1e-12)
    c = L.sample_coefficients(64)
    m = np.fft.fftfreq(64, 1 / 64)
    assert np.all(np.abs(c[np.abs(m) > 7]) < 1e-12)


def test_triangular_certificate():
    assert triangular_cos(0.0) == pytest.approx(1)
    assert triangular_cos(math.pi) == pytest.approx(-1)
    assert abs(gauss_legendre(triangular_cos, np.linspace(-math.pi, math.pi, 3), 4)) < 1e-12
    k = 6
    M = 64 * (k + 1)
    x = 2 * math.pi * np.arange(M) / M
    c = np.fft.fft(triangular_cos((k + 1) * x)) / M
    m = np.fft.fftfreq(M, 1 / M)
    assert np.all(np.abs(c[np.abs(m) <= k]) < 1e-12)


def test_tail_coefficients_k2():
    s = KernelS(2)
    assert s.coefficient(2) == pytest.approx(1 / 2, abs=1e-10)
    assert s.coefficient(3) == pytest.approx(1 / 3, abs=1e-10)
    assert s.coefficient(-3) == pytest.approx(-1 / 3, abs=1e-10)


@pytest.mark.parametrize("k", [2, 4, 16])
def test_tail_band(k):
    tail = KernelS(k).tail_coefficients()
    assert max(abs(v - 1 / m) for m, v in tail.items()) < 1e-10


def test_l1_bound_uniform():
    vals = [k * KernelS(k).l1_norm() for k in (2, 4, 8, 16, 32)]
    assert max(vals) <= math.pi / 2 + 1e-9


@pytest.mark.parametrize("k", [2, 8, 32])
def test_duality(k):
    rep = duality_identity_check(k)
    assert rep.discrepancy < 1e-8
    assert rep.interpolant_pairing < 1e-10
    assert rep.sign_pattern_ok and rep.sign_changes == rep.expected_sign_changes
    assert k * square_wave_pairing(k) <= math.pi / 2 + 1e-12


def test_literal_construction_defect():
    # nodes pi r/(k+1), r odd: sign(S - L_k) does not follow c'((k+1)x), so the
    # pairing differs from the L1 norm already at k = 2
    assert not duality_identity_check(4, "literal").sign_pattern_ok
    assert duality_identity_check(2, "literal").discrepancy > 0.1
    assert duality_identity_check(2, "dual").discrepancy < 1e-8


def test_certificate_is_square_wave():
    w = certificate(4)
    x = np.array([0.1, 0.9, -0.1])
    assert np.allclose(w(x), np.sign(np.sin(4 * x)))


@pytest.mark.parametrize("k,m", [(4, 4), (4, 10), (16, 40)])
def test_integration_through_kernel(k, m):
    assert integration_via_kernel_check(k, m) < 1e-10


def test_monomial_max_modulus():
    k = 8
    assert 1 / (k + 1) <= (math.pi / 2) / k
    with pytest.raises(ValueError):
        integration_via_kernel_check(8, 3)
    with pytest.raises(ValueError):
        KernelS(3)
