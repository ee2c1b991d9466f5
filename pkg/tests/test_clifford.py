import math

import numpy as np
import pytest

from hamlab import clifford as CL
from hamlab.cube import CubeFunction, lp_norm


def rand_f(n, seed, band=None):
    return CubeFunction.random(n, np.random.default_rng(seed), band=band)


def test_lift_examples():
    assert np.array_equal(CL.lift(CubeFunction.character(1, 1)), CL.Q)
    assert np.allclose(CL.lift(CubeFunction.constant(3, 2.5)), 2.5 * np.eye(8))
    f = rand_f(4, 0)
    assert np.allclose(CL.lift(f), CL.lift_by_words(f), atol=1e-13)


def test_anticommutation():
    assert np.array_equal(CL.Q @ CL.P, -CL.P @ CL.Q)
    for j in range(3):
        Qj, Pj = CL.site_op(3, j, "Q"), CL.site_op(3, j, "P")
        assert np.array_equal(Qj @ Pj, -Pj @ Qj)


def test_schatten_norms():
    I = np.eye(8, dtype=complex)
    for p in (1.0, 2.0, math.inf):
        assert CL.schatten_norm(I, p) == pytest.approx(1)
        assert CL.schatten_norm(CL.q_word(3, 5), p) == pytest.approx(1)
    f = rand_f(5, 1)
    T = CL.lift(f)
    for p in (1.0, 1.5, 2.0, 3.0, math.inf):
        assert abs(CL.schatten_norm(T, p) - lp_norm(f, p)) < 1e-12


def test_hadamard_diagonalizes():
    f = rand_f(4, 2)
    H = CL.hadamard(4)
    D = H @ CL.lift(f) @ H
    assert np.allclose(D, np.diag(np.diag(D)), atol=1e-13)
    assert np.allclose(np.sort(np.diag(D).real), np.sort(f.scalar))


def test_rotation():
    for t in (0.0, 0.4, 2.0):
        assert np.allclose(CL.rotate(CL.Q, t), math.cos(t) * CL.Q + math.sin(t) * CL.P, atol=1e-15)
    A = np.random.default_rng(3).standard_normal((16, 16)) + 0j
    assert np.array_equal(CL.rotate(A, 0.0), A)
    for t in (0.3, 1.7):
        for p in (1.0, 3.0, math.inf):
            assert CL.schatten_norm(CL.rotate(A, t), p) == pytest.approx(CL.schatten_norm(A, p), rel=1e-12)
    mask = 0b1011
    assert np.allclose(CL.rotate(CL.q_word(4, mask), 0.7), CL.rotated_word(4, mask, 0.7), atol=1e-13)


def test_derivative_identity_examples():
    chk = CL.derivative_identity_check(CubeFunction.character(1, 1), 0.0)
    assert chk.discrepancy == 0
    assert np.allclose(CL.rotation_derivative(CL.Q, 0.0), CL.P)
    const = CL.derivative_identity_check(CubeFunction.constant(2, 3.0), 0.5)
    assert const.discrepancy == 0


@pytest.mark.parametrize("theta", [0.0, 0.3, 1.1])
def test_derivative_identity_random(theta):
    chk = CL.derivative_identity_check(rand_f(4, 4), theta)
    assert chk.discrepancy <= 1e-10
    assert chk.sign == 1
    assert chk.other_sign_discrepancy > 1
    assert chk.fd_discrepancy <= 1e-6


def test_sign_conjugation():
    f = CubeFunction.character(1, 1)
    assert np.allclose(CL.Q @ CL.P @ CL.Q, -CL.P)
    assert CL.sign_conjugation_check(f, 0) == 0
    assert CL.sign_conjugation_check(CubeFunction.constant(2), 1) == 0
    g = rand_f(4, 5)
    assert max(CL.sign_conjugation_check(g, k) for k in range(4)) <= 1e-12


def test_fejer_bernstein():
    grid = np.linspace(0, 2 * math.pi, 16, endpoint=False)
    assert CL.fejer_bernstein_check(CubeFunction.character(1, 1), 1, math.inf, grid) == pytest.approx(0.5)
    assert CL.fejer_bernstein_check(CubeFunction.constant(2), 1, 2.0, grid) == 0
    for d in (1, 2, 4):
        f = rand_f(4, 10 + d, band=(0, d))
        for p in (1.0, 2.0, math.inf):
            assert CL.fejer_bernstein_check(f, d, p, grid) <= 1 + 1e-12


def test_nc_khintchine():
    avg, sq, ratio = CL.nc_khintchine_sides(CubeFunction.character(1, 1), 2.0)
    assert avg == pytest.approx(1) and sq == pytest.approx(2) and ratio == pytest.approx(0.5)
    assert CL.nc_khintchine_sides(CubeFunction.constant(2), 4.0) == (0.0, 0.0, 0.0)
    r = CL.nc_khintchine_sides(rand_f(3, 6), 4.0)[2]
    assert 0.25 < r <= 1


def test_ncbm():
    row = CL.ncbm_check(3, 1, 2.0, trials=1)
    assert row.max_constant <= 1 + 1e-12
    for d in (1, 2, 3):
        row = CL.ncbm_check(5, d, 2.0, trials=10, seed=d)
        assert row.max_constant <= 1 / math.sqrt(d) + 1e-12
        assert row.max_lift_discrepancy < 1e-10


def test_diag_and_projection():
    D = np.diag([1.0, -2.0, 0.5, 3.0]).astype(complex)
    assert CL.schatten_norm(CL.diag(D), 3.0) == pytest.approx(CL.schatten_norm(D, 3.0))
    assert CL.schatten_norm(CL.diag(CL.Q), 1.0) == 0
    rng = np.random.default_rng(7)
    for n in (1, 2, 3):
        A = rng.standard_normal((1 << n, 1 << n)) + 1j * rng.standard_normal((1 << n, 1 << n))
        for p in (1.0, 2.0, 3.0, math.inf):
            assert CL.diag_contraction_check(A, p)
        Pq = CL.project_q(A)
        assert np.allclose(CL.project_q(Pq), Pq, atol=1e-13)
    T = CL.lift(rand_f(3, 8))
    assert np.allclose(CL.project_q(T), T, atol=1e-13)


def test_limits():
    with pytest.raises(ValueError):
        CL.word("IIIIIII")
    with pytest.raises(ValueError):
        CL.word("X")
    with pytest.raises(IndexError):
        CL.sign_conjugation_check(rand_f(2, 0), 2)
