"""An L^1 kernel with prescribed tail Fourier coefficients 1/m.

The sawtooth S(x) = sum_{j>=1} sin(jx)/j has exponential coefficients
1/(2im). Subtracting an odd trigonometric interpolant L of degree < k and
setting s = 2i (S - L) leaves s^(m) = 1/m for every |m| >= k; the L^1 norm
of s is certified through a square-wave dual function.

Two interpolants are provided:

* ``lagrange_interpolant`` -- a polynomial of degree k-1 in sin x through
  the k nodes pi r/(k+1), r odd;
* ``sine_interpolant`` -- the sine polynomial of degree k-1 through the
  2k-1 nodes j pi/k, whose residual changes sign exactly where the square
  wave sign(sin kx) does.

Only the second one gives ||s||_1 = O(1/k): a polynomial in sin x is
symmetric about pi/2 while S is not, so the first residual stays of order
one in L^1 (the ``literal`` construction is kept for comparison).

All L^1 norms and inner products use the normalized measure dx / 2pi on
(-pi, pi).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
from scipy import optimize
from scipy.interpolate import BarycentricInterpolator

GL_ORDER = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_ORDER)
CONSTRUCTIONS = ("dual", "literal")


def _check_k(k: int) -> None:
    if k < 2 or k % 2:
        raise ValueError(f"k must be an even integer >= 2, got {k}")


def _wrap(x):
    """Reduce to [-pi, pi)."""
    return np.mod(np.asarray(x, dtype=float) + math.pi, 2 * math.pi) - math.pi


def sawtooth(x):
    """S(x) = (pi - x)/2 on (0, 2pi), 2pi-periodic, S(0) = 0."""
    y = np.mod(np.asarray(x, dtype=float), 2 * math.pi)
    return np.where(y == 0, 0.0, (math.pi - y) / 2)


def sawtooth_coefficient(m: int) -> complex:
    """Exact coefficient of e^{imx} in S."""
    return 0j if m == 0 else 1 / (2j * m)


def triangular_cos(x):
    """Piecewise-linear even 2pi-periodic c with c(0) = 1, c(+-pi) = -1."""
    y = np.abs(_wrap(x))
    return 1 - 2 * y / math.pi


def square_wave(x):
    """c'(x): -2/pi on (0, pi), +2/pi on (-pi, 0); right limit at the kinks."""
    y = _wrap(x)
    return np.where((y >= 0) & (y < math.pi), -2 / math.pi, 2 / math.pi)


def gauss_legendre_rule(breaks, panels: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of composite Gauss-Legendre over sorted breakpoints, about ``panels`` panels."""
    breaks = np.unique(np.asarray(breaks, dtype=float))
    span = breaks[-1] - breaks[0]
    xs, ws = [], []
    for a, b in zip(breaks[:-1], breaks[1:]):
        sub = max(1, int(math.ceil(panels * (b - a) / span)))
        edges = np.linspace(a, b, sub + 1)
        mid = (edges[:-1] + edges[1:]) / 2
        half = (edges[1:] - edges[:-1]) / 2
        xs.append((mid[:, None] + half[:, None] * _GL_X[None, :]).ravel())
        ws.append((half[:, None] * _GL_W[None, :]).ravel())
    return np.concatenate(xs), np.concatenate(ws)


def gauss_legendre(fn: Callable, breaks, panels: int) -> complex:
    x, w = gauss_legendre_rule(breaks, panels)
    return np.sum(w * fn(x))


class TrigPoly:
    """sum_{m=-N}^{N} coeffs[m + N] e^{imx}."""

    def __init__(self, coeffs):
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 1 or len(c) % 2 != 1:
            raise ValueError("need 2N+1 coefficients")
        self.coeffs = c
        self.N = (len(c) - 1) // 2

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        m = np.arange(-self.N, self.N + 1)
        out = np.exp(1j * np.multiply.outer(x, m)) @ self.coeffs
        return out.real if self.is_real else out

    @property
    def is_real(self) -> bool:
        return bool(np.allclose(self.coeffs, self.coeffs[::-1].conj(), atol=1e-13, rtol=0))

    def coefficient(self, m: int) -> complex:
        return complex(self.coeffs[m + self.N]) if abs(m) <= self.N else 0j

    @classmethod
    def from_samples(cls, values, N: int) -> "TrigPoly":
        """Coefficients of degree <= N from samples at 2pi j / M, M = len(values) > 2N."""
        values = np.asarray(values)
        M = len(values)
        if M <= 2 * N:
            raise ValueError("too few samples")
        c = np.fft.fft(values) / M
        m = np.arange(-N, N + 1)
        return cls(c[m % M])

    def sample_coefficients(self, M: int) -> np.ndarray:
        """FFT of M uniform samples (all frequencies, numpy ordering)."""
        x = 2 * math.pi * np.arange(M) / M
        return np.fft.fft(self(x)) / M


def lagrange_nodes(k: int) -> np.ndarray:
    _check_k(k)
    return math.pi * np.arange(-k + 1, k, 2) / (k + 1)


def lagrange_interpolant(k: int) -> TrigPoly:
    """Polynomial of degree k-1 in sin x through S at x_r = pi r/(k+1), r odd."""
    x = lagrange_nodes(k)
    y = np.sin(x)
    if len(np.unique(np.round(y, 14))) != len(y):
        raise AssertionError("interpolation nodes collide")
    P = BarycentricInterpolator(y, sawtooth(x))
    M = 4 * (k + 1)
    grid = 2 * math.pi * np.arange(M) / M
    return TrigPoly.from_samples(P(np.sin(grid)), k - 1)


def sine_nodes(k: int) -> np.ndarray:
    _check_k(k)
    return math.pi * np.arange(1, k) / k


def sine_interpolant(k: int) -> TrigPoly:
    """sum_{j<k} b_j sin(jx) matching S at j pi/k, j = 1..k-1 (hence at all -k < j < k)."""
    x = sine_nodes(k)
    j = np.arange(1, k)
    # the matrix sin(i j pi / k) is its own inverse up to the factor k/2
    b = (2 / k) * np.sin(np.outer(j, x)) @ sawtooth(x)
    c = np.zeros(2 * k - 1, dtype=complex)
    c[k - 1 + j] = b / 2j
    c[k - 1 - j] = -b / 2j
    return TrigPoly(c)


def interpolant(k: int, construction: str = "dual") -> TrigPoly:
    if construction == "dual":
        return sine_interpolant(k)
    if construction == "literal":
        return lagrange_interpolant(k)
    raise ValueError(f"unknown construction {construction!r}")


def certificate_frequency(k: int, construction: str = "dual") -> int:
    """N such that the dual square wave is -(pi/2) c'(N x)."""
    return k if construction == "dual" else k + 1


@dataclass
class PeriodicFunction:
    """Closed-form evaluator on [-pi, pi] with known breakpoints."""

    evaluate: Callable
    breakpoints: np.ndarray

    def __call__(self, x):
        return self.evaluate(x)


class KernelS:
    """s = 2i (S - L_k) with s^(m) = 1/m for |m| >= k."""

    def __init__(self, k: int, construction: str = "dual"):
        _check_k(k)
        self.k = k
        self.construction = construction
        self.L = interpolant(k, construction)
        self.panels = 8 * (k + 1)

    def residual(self, x):
        """S - L_k."""
        return sawtooth(x) - self.L(x)

    def __call__(self, x):
        return 2j * self.residual(x)

    @cached_property
    def zeros(self) -> np.ndarray:
        """Sign changes of S - L_k on (-pi, pi), located by bracketing and Brent refinement."""
        grid = np.linspace(-math.pi, math.pi, 64 * (self.k + 1) + 1)[1:-1]
        nodes = np.concatenate([-sine_nodes(self.k)[::-1], [0.0], sine_nodes(self.k)]) \
            if self.construction == "dual" else np.concatenate([lagrange_nodes(self.k), [0.0]])
        pts = np.unique(np.concatenate([grid, nodes]))
        vals = self.residual(pts)
        out = [float(p) for p, v in zip(pts, vals) if v == 0]
        def scalar(t):
            return float(self.residual(np.array([t]))[0])

        for a, b, va, vb in zip(pts[:-1], pts[1:], vals[:-1], vals[1:]):
            if va * vb < 0:
                if scalar(a) * scalar(b) < 0:
                    out.append(optimize.brentq(scalar, a, b, xtol=1e-15))
                else:
                    # sign flip at rounding level, i.e. an exact node
                    out.append(a if abs(va) < abs(vb) else b)
        # S jumps at 0; the residual changes sign there even though S(0) = 0
        out.append(0.0)
        return np.unique(np.round(out, 13))

    def breakpoints(self) -> np.ndarray:
        N = certificate_frequency(self.k, self.construction)
        kinks = math.pi * np.arange(-N, N + 1) / N
        return np.unique(np.concatenate([[-math.pi, math.pi], kinks, self.zeros]))

    def as_periodic(self) -> PeriodicFunction:
        return PeriodicFunction(self, self.breakpoints())

    def residual_l1(self) -> float:
        """||S - L_k||_1 (normalized) by composite Gauss-Legendre split at every sign change."""
        val = gauss_legendre(lambda x: np.abs(self.residual(x)), self.breakpoints(), self.panels)
        return float(val) / (2 * math.pi)

    def l1_norm(self) -> float:
        return 2 * self.residual_l1()

    def coefficient(self, m: int) -> complex:
        """s^(m) = (1/2pi) int s(x) e^{-imx} dx by quadrature."""
        val = gauss_legendre(lambda x: self(x) * np.exp(-1j * m * x), self.breakpoints(), self.panels)
        return complex(val) / (2 * math.pi)

    def coefficients(self, ms) -> np.ndarray:
        """Vectorized quadrature for several frequencies at once."""
        ms = np.asarray(ms)
        x, w = gauss_legendre_rule(self.breakpoints(), self.panels)
        sw = w * self(x)
        out = np.empty(len(ms), dtype=complex)
        for i in range(0, len(ms), 64):
            chunk = ms[i:i + 64]
            out[i:i + 64] = np.exp(-1j * np.outer(chunk, x)) @ sw
        return out / (2 * math.pi)

    def tail_coefficients(self, hi: int | None = None) -> dict[int, complex]:
        """Quadrature coefficients for k <= |m| <= hi (default 4k)."""
        hi = 4 * self.k if hi is None else hi
        ms = [m for m in range(-hi, hi + 1) if abs(m) >= self.k]
        return dict(zip(ms, self.coefficients(ms)))


def kernel_s(k: int, construction: str = "dual") -> KernelS:
    return KernelS(k, construction)


def square_wave_pairing(k: int, construction: str = "dual") -> float:
    """<S, w> for w = -(pi/2) c'(N x) = sign(sin N x), integrated exactly piece by piece."""
    N = certificate_frequency(k, construction)
    total = 0.0
    h = math.pi / N
    # on (0, pi): S = (pi - x)/2 and w = (-1)^j on (j h, (j+1) h)
    for j in range(N):
        a, b = j * h, (j + 1) * h
        integral = (math.pi * (b - a) - (b * b - a * a) / 2) / 2
        total += (-1) ** j * integral
    # both S and w are odd, so (-pi, 0) contributes the same amount
    return 2 * total / (2 * math.pi)


def certificate(k: int, construction: str = "dual") -> Callable:
    N = certificate_frequency(k, construction)
    return lambda x: -(math.pi / 2) * square_wave(N * np.asarray(x, dtype=float))


@dataclass(frozen=True)
class DualityReport:
    k: int
    construction: str
    residual_l1: float
    pairing: float
    interpolant_pairing: float
    residual_pairing: float
    sign_pattern_ok: bool
    sign_changes: int
    expected_sign_changes: int

    @property
    def discrepancy(self) -> float:
        return abs(self.residual_l1 - self.pairing)


def sign_pattern_check(kern: KernelS, samples: int = 10_000) -> tuple[bool, int, int]:
    """Compare sign(S - L_k) with the certificate on a dense grid.

    Returns (pattern matches, observed sign changes on (-pi, pi), expected).
    Grid points within 1e-9 of a certificate kink are skipped.
    """
    k, cons = kern.k, kern.construction
    x = np.linspace(-math.pi, math.pi, samples + 2)[1:-1]
    if cons == "dual":
        kinks = np.concatenate([[0.0], sine_nodes(k), -sine_nodes(k)])
        expected_sign = np.sign(np.sin(k * x))
    else:
        kinks = np.concatenate([[0.0], lagrange_nodes(k)])
        # claimed pattern: + on (0, pi/(k+1)), then alternating between odd nodes
        r = np.floor((np.abs(x) * (k + 1) / math.pi + 1) / 2)
        expected_sign = np.sign(x) * (-1.0) ** r
    far = np.min(np.abs(x[:, None] - kinks[None, :]), axis=1) > 1e-9
    res = kern.residual(x)
    ok = bool(np.all(np.sign(res[far]) == expected_sign[far]))
    s = np.sign(res[far])
    changes = int(np.sum(s[1:] != s[:-1]))
    return ok, changes, len(kinks)


def duality_identity_check(k: int, construction: str = "dual") -> DualityReport:
    """||S - L_k||_1 (quadrature) against <S, w> (exact piecewise integration)."""
    kern = KernelS(k, construction)
    w = certificate(k, construction)
    N = certificate_frequency(k, construction)
    breaks = np.unique(np.concatenate([kern.breakpoints(), math.pi * np.arange(-N, N + 1) / N]))
    ip_L = gauss_legendre(lambda x: kern.L(x) * w(x), breaks, kern.panels) / (2 * math.pi)
    ip_R = gauss_legendre(lambda x: kern.residual(x) * w(x), breaks, kern.panels) / (2 * math.pi)
    ok, changes, expected = sign_pattern_check(kern)
    return DualityReport(k, construction, kern.residual_l1(), square_wave_pairing(k, construction),
                         float(abs(ip_L)), float(np.real(ip_R)), ok, changes, expected)


def integration_via_kernel_check(k: int, m: int, construction: str = "dual", samples: int = 64) -> float:
    """sup over the circle of |s * (zeta g) - int_0^z g| for g = z^m.

    The integral of z^m is z^{m+1}/(m+1); convolution with s multiplies the
    coefficient of z^{m+1} by s^(m+1), computed here by quadrature.
    """
    if m < k:
        raise ValueError(f"degree m={m} below the kernel tail k={k}")
    kern = KernelS(k, construction)
    coef = kern.coefficient(m + 1)
    x = 2 * math.pi * np.arange(samples) / samples
    conv = coef * np.exp(1j * (m + 1) * x)
    exact = np.exp(1j * (m + 1) * x) / (m + 1)
    return float(np.max(np.abs(conv - exact)))
