"""Probabilistic side of the heat semigroup on the cube.

The biased signs xi_j(t) take the value +1 with probability (1 + e^-t)/2.
Every expectation over xi is computed by exact weighted enumeration of the
product measure.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .cube import (CubeFunction, ValueNormSpec, gradient_field, heat, lp_norm,
                   partial_d, popcount)

MAX_ENUM_N = 12


def _check_t(t: float) -> None:
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")


@dataclass(frozen=True)
class BiasedSign:
    t: float

    def __post_init__(self):
        _check_t(self.t)

    @property
    def p_plus(self) -> float:
        return (1 + math.exp(-self.t)) / 2

    @property
    def mean(self) -> float:
        return math.exp(-self.t)

    @property
    def variance(self) -> float:
        return -math.expm1(-2 * self.t)


@dataclass(frozen=True)
class DeltaVariable:
    """delta_j(t) ("centered") or its symmetrization delta'_j(t) ("symmetrized")."""

    kind: str
    t: float

    def __post_init__(self):
        if self.kind not in ("centered", "symmetrized"):
            raise ValueError(f"unknown kind {self.kind!r}")
        _check_t(self.t)

    def law(self) -> tuple[np.ndarray, np.ndarray]:
        """Support points and probabilities of the (finite) distribution."""
        xi = BiasedSign(self.t)
        s = math.sqrt(xi.variance)
        pp, pm = xi.p_plus, 1 - xi.p_plus
        if self.kind == "centered":
            return (np.array([(1 - xi.mean) / s, (-1 - xi.mean) / s]),
                    np.array([pp, pm]))
        # xi - xi' in {0, +2, -2}
        return (np.array([0.0, 2 / s, -2 / s]),
                np.array([pp * pp + pm * pm, pp * pm, pm * pp]))


def delta_moment(kind: str, t: float, order: int, absolute: bool = True) -> float:
    """E|delta|^m (or the signed E delta^m with ``absolute=False``) by enumeration."""
    if order < 1:
        raise ValueError("order must be >= 1")
    vals, probs = DeltaVariable(kind, t).law()
    base = np.abs(vals) if absolute else vals
    return float(np.sum(probs * base**order))


def symmetrized_moment_closed_form(t: float, order: int) -> float:
    """E|delta'|^m = 2^(m-1) (1 - e^-2t)^(1 - m/2)."""
    _check_t(t)
    return 2.0 ** (order - 1) * (-math.expm1(-2 * t)) ** (1 - order / 2)


def symmetrized_moment_bound(t: float, order: int) -> float:
    """The displayed upper bound 2^(m-1) / sqrt(1 - e^-2t)^(m-2)."""
    return 2.0 ** (order - 1) / math.sqrt(-math.expm1(-2 * t)) ** (order - 2)


def _xi_weights(n: int, t: float) -> np.ndarray:
    """Product-measure probability of each xi pattern y (bit j set iff xi_j = -1)."""
    pp = BiasedSign(t).p_plus
    k = popcount(np.arange(1 << n))
    return pp ** (n - k) * (1 - pp) ** k


def gradient_representation_rhs(f: CubeFunction, t: float, j: int) -> np.ndarray:
    """e^-t / sqrt(1-e^-2t) * E_xi[delta_j(t) f(eps * xi)] at every eps, by enumeration."""
    _check_t(t)
    n = f.n
    if n > MAX_ENUM_N:
        raise ValueError(f"exact enumeration limited to n <= {MAX_ENUM_N}")
    y = np.arange(1 << n)
    w = _xi_weights(n, t)
    xi_j = 1.0 - 2.0 * ((y >> j) & 1)
    s = math.sqrt(-math.expm1(-2 * t))
    weight = w * (xi_j - math.exp(-t)) / s
    v = f.values
    out = np.zeros_like(v, dtype=np.result_type(v.dtype, float))
    # eps * xi corresponds to x XOR y
    for x in range(1 << n):
        out[x] = weight @ v[x ^ y]
    return math.exp(-t) / s * out


def gradient_representation_check(f: CubeFunction, t: float, j: int) -> float:
    """sup_eps |D_j e^{-t Delta} f - RHS| for the heat-kernel gradient formula."""
    lhs = partial_d(heat(f, math.exp(-t)), j).values
    rhs = gradient_representation_rhs(f, t, j)
    return float(np.max(np.abs(lhs - rhs)))


def mp_integral(t: float, u: float) -> float:
    """int_0^inf P(|xi - xi'| > s)^(1/u) ds in closed form."""
    _check_t(t)
    if not u >= 1:
        raise ValueError(f"exponent must be >= 1, got {u}")
    if math.isinf(u):
        return 2.0
    return 2.0 ** (1 - 1 / u) * (-math.expm1(-2 * t)) ** (1 / u)


def mp_integral_quadrature(t: float, u: float) -> float:
    """The same integral by quadrature of the tail function (independent route)."""
    _check_t(t)
    vals, probs = DeltaVariable("symmetrized", t).law()
    jump = vals * math.sqrt(-math.expm1(-2 * t))  # xi - xi'

    def tail(s):
        return float(np.sum(probs[np.abs(jump) > s])) ** (1 / u)

    value, _ = integrate.quad(tail, 0, 3, points=[2.0], limit=200)
    return value


def aplusb_check(a: float, b: float, Q: float) -> bool:
    """(a+b)^Q <= 6 a^Q + Q^Q b^Q, compared in log space."""
    if a < 0 or b < 0:
        raise ValueError("a, b must be nonnegative")
    if Q < 2:
        raise ValueError("Q must be >= 2")
    if a == 0 and b == 0:
        return True
    lhs = Q * math.log(a + b)
    terms = []
    if a > 0:
        terms.append(math.log(6) + Q * math.log(a))
    if b > 0:
        terms.append(Q * math.log(Q) + Q * math.log(b))
    rhs = float(np.logaddexp.reduce(terms))
    return lhs <= rhs + 1e-12 * max(1.0, abs(rhs))


def contraction_ratios(f: CubeFunction, p: float, xs) -> np.ndarray:
    """||grad F(x,.)||_p / (|x| (1-x^2)^(-e) ||f||_p) for each x, e = 1/2 (p>=2) or 1/p."""
    if f.m != 1:
        raise ValueError("contraction check is for scalar functions")
    if not p > 1:
        raise ValueError("p must exceed 1")
    xs = np.asarray(xs, dtype=float)
    if np.any(np.abs(xs) >= 1):
        raise ValueError("grid must lie in (-1, 1)")
    expo = 0.5 if p >= 2 else 1.0 / p
    fp = lp_norm(f, p)
    out = np.empty(len(xs))
    for i, x in enumerate(xs):
        lhs = lp_norm(gradient_field(heat(f, x)), p)
        rhs = abs(x) / (1 - x * x) ** expo * fp
        out[i] = 0.0 if lhs == 0 else lhs / rhs
    return out


def contraction_inequality_check(f: CubeFunction, p: float, xs) -> float:
    """Worst ratio over the grid; must be <= 1 for p >= 2, reported as a constant below 2."""
    return float(contraction_ratios(f, p, xs).max())


def _sign_patterns(n: int) -> np.ndarray:
    return np.array(list(itertools.product([1.0, -1.0], repeat=n))).reshape(-1, n)


@dataclass(frozen=True)
class ChainResult:
    B: float
    B_symmetrized: float
    bound_factor: float
    constant: float


def rosenthal_chain_check(lam, t: float, q: int, dual_norm: ValueNormSpec | None = None) -> ChainResult:
    """Exact B = (E ||sum_j lam_j delta_j(t)||^q)^(1/q) and the symmetrized counterpart.

    ``lam`` has shape (n, m): n vectors in R^m normalized in l^2_n(X*). The
    reported constant is B (1 - e^-2t)^(1/2 - 1/q).
    """
    _check_t(t)
    lam = np.asarray(lam, dtype=float)
    if lam.ndim == 1:
        lam = lam[:, None]
    n = lam.shape[0]
    if n > 5:
        raise ValueError("exact (xi, xi') enumeration limited to n <= 5")
    if q < 2 or q % 2:
        raise ValueError("q must be an even integer >= 2")
    if dual_norm is None:
        dual_norm = ValueNormSpec(q / (q - 1))
    vals_c, probs_c = DeltaVariable("centered", t).law()
    vals_s, probs_s = DeltaVariable("symmetrized", t).law()

    def moment(vals, probs):
        total = 0.0
        for combo in itertools.product(range(len(vals)), repeat=n):
            combo = list(combo)
            pr = float(np.prod(probs[combo]))
            if pr == 0:
                continue
            vec = vals[combo] @ lam
            total += pr * float(dual_norm.norm(vec[None, :])[0]) ** q
        return total ** (1 / q)

    B = moment(vals_c, probs_c)
    Bs = moment(vals_s, probs_s)
    factor = (-math.expm1(-2 * t)) ** -(0.5 - 1 / q)
    return ChainResult(B, Bs, factor, B / factor)


def orthonormality_gram(n: int, t: float) -> np.ndarray:
    """E[delta_i delta_j] for i, j < n by enumeration over xi."""
    y = np.arange(1 << n)
    w = _xi_weights(n, t)
    xi = 1.0 - 2.0 * ((y[:, None] >> np.arange(n)[None, :]) & 1)
    s = math.sqrt(-math.expm1(-2 * t))
    d = (xi - math.exp(-t)) / s
    return (d * w[:, None]).T @ d


def monte_carlo_moment(t: float, order: int, samples: int, rng: np.random.Generator) -> tuple[float, float]:
    """Sampling estimate of E|delta'|^m with its standard error (sanity only)."""
    pp = BiasedSign(t).p_plus
    xi = np.where(rng.random(samples) < pp, 1.0, -1.0)
    xi2 = np.where(rng.random(samples) < pp, 1.0, -1.0)
    d = np.abs(xi - xi2) / math.sqrt(-math.expm1(-2 * t))
    vals = d**order
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(samples))
