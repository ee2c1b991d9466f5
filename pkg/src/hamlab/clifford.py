"""Pauli-type matrix algebra on n sites and the noncommutative derivative identities.

Site j of a tensor product corresponds to coordinate j of the cube: the
Kronecker product is taken with site n-1 leftmost, so bit j of a basis index
is the state of site j.  Q flips a site and acts on the computational basis
like the character eps_j does on the Hadamard basis.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .cube import CubeFunction, Spectrum, gradient_field, inverse_wht, lp_norm

MAX_SITES = 6

I2 = np.eye(2, dtype=complex)
Q = np.array([[0, 1], [1, 0]], dtype=complex)
P = np.array([[0, 1j], [-1j, 0]], dtype=complex)
U = 1j * Q @ P
LETTERS = {"I": I2, "Q": Q, "P": P, "U": U}


def _check_sites(n: int) -> None:
    if not 0 <= n <= MAX_SITES:
        raise ValueError(f"site count must lie in [0, {MAX_SITES}], got {n}")


def word(letters: str) -> np.ndarray:
    """Tensor product for a word; letters[j] is the factor on site j."""
    _check_sites(len(letters))
    try:
        mats = [LETTERS[c] for c in reversed(letters)]
    except KeyError as e:
        raise ValueError(f"unknown letter {e.args[0]!r}") from None
    return reduce(np.kron, mats, np.eye(1, dtype=complex))


build = word


def site_op(n: int, j: int, letter: str) -> np.ndarray:
    if not 0 <= j < n:
        raise IndexError(f"site {j} out of range for n={n}")
    return word("".join(letter if i == j else "I" for i in range(n)))


def q_word(n: int, mask: int) -> np.ndarray:
    """Q_A as a tensor product, A given as a bit mask."""
    return word("".join("Q" if mask >> i & 1 else "I" for i in range(n)))


def lift(f: CubeFunction) -> np.ndarray:
    """T_f = sum_A f^(A) Q_A; entrywise T_f[x, y] = f^(x xor y)."""
    if f.m != 1:
        raise ValueError("only scalar functions lift to matrices")
    _check_sites(f.n)
    c = f.spectrum().coeffs[:, 0]
    x = np.arange(1 << f.n)
    return c[x[:, None] ^ x[None, :]].astype(complex)


def lift_by_words(f: CubeFunction) -> np.ndarray:
    """Same matrix assembled term by term from tensor products."""
    if f.m != 1:
        raise ValueError("only scalar functions lift to matrices")
    c = f.spectrum().coeffs[:, 0]
    return sum(c[A] * q_word(f.n, A) for A in range(1 << f.n))


def hadamard(n: int) -> np.ndarray:
    H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    return reduce(np.kron, [H] * n, np.eye(1, dtype=complex))


def _sites(A: np.ndarray) -> int:
    n = A.shape[0].bit_length() - 1
    if A.shape != (1 << n, 1 << n):
        raise ValueError("matrix must be 2^n x 2^n")
    return n


def trace(A: np.ndarray) -> complex:
    """Normalized trace, tr(I) = 1."""
    return np.trace(A) / A.shape[0]


def schatten_norm(A: np.ndarray, p: float) -> float:
    """(tr |A|^p)^(1/p) with the normalized trace; p = inf is the operator norm."""
    if not p >= 1:
        raise ValueError("p must be >= 1")
    if np.allclose(A, A.conj().T, rtol=0, atol=1e-14 * max(1.0, np.abs(A).max())):
        s = np.abs(np.linalg.eigvalsh((A + A.conj().T) / 2))
    else:
        s = np.linalg.svd(A, compute_uv=False)
    if math.isinf(p):
        return float(s.max())
    top = s.max()
    if top == 0:
        return 0.0
    return float(top * np.mean((s / top) ** p) ** (1 / p))


def rotation_unitary(n: int, theta: float) -> np.ndarray:
    """n-fold tensor power of diag(1, e^{i theta})."""
    k = np.array([bin(x).count("1") for x in range(1 << n)])
    return np.diag(np.exp(1j * theta * k))


def rotate(A: np.ndarray, theta: float) -> np.ndarray:
    """R(theta)^* A R(theta)."""
    n = _sites(A)
    d = np.exp(1j * theta * np.array([bin(x).count("1") for x in range(1 << n)]))
    return d.conj()[:, None] * A * d[None, :]


def rotated_word(n: int, mask: int, theta: float) -> np.ndarray:
    """prod over j in A of (cos theta Q_j + sin theta P_j)."""
    c, s = math.cos(theta), math.sin(theta)
    out = np.eye(1 << n, dtype=complex)
    for j in range(n):
        if mask >> j & 1:
            out = out @ (c * site_op(n, j, "Q") + s * site_op(n, j, "P"))
    return out


def rotation_derivative(A: np.ndarray, theta: float) -> np.ndarray:
    """d/dtheta R^* A R = i R^* [A, N] R with N the number operator."""
    n = _sites(A)
    N = np.diag(np.array([bin(x).count("1") for x in range(1 << n)], dtype=complex))
    return rotate(1j * (A @ N - N @ A), theta)


def strip(f: CubeFunction, j: int) -> CubeFunction:
    """The algebraic derivative: eps^A -> eps^(A minus j) if j in A, else 0."""
    c = f.spectrum().coeffs.copy()
    masks = np.arange(1 << f.n)
    out = np.zeros_like(c)
    has = (masks >> j & 1).astype(bool)
    out[masks[has] ^ (1 << j)] = c[has]
    return inverse_wht(Spectrum(out, n=f.n))


def nc_gradient_sum(f: CubeFunction, signs=None) -> np.ndarray:
    """sum_j sign_j P_j d_j T_f."""
    n = f.n
    signs = np.ones(n) if signs is None else np.asarray(signs, dtype=float)
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for j in range(n):
        out += signs[j] * site_op(n, j, "P") @ lift(strip(f, j))
    return out


@dataclass(frozen=True)
class DerivativeCheck:
    discrepancy: float
    sign: int
    other_sign_discrepancy: float
    fd_discrepancy: float


def derivative_identity_check(f: CubeFunction, theta: float, h: float = 1e-5) -> DerivativeCheck:
    """Compare dA_f/dtheta with +-R(theta)(sum_j P_j d_j T_f).

    The exact derivative comes from the commutator with the number operator;
    a central difference with step h gives an independent estimate.
    """
    if f.n > 5:
        raise ValueError("derivative check limited to n <= 5")
    T = lift(f)
    exact = rotation_derivative(T, theta)
    cand = rotate(nc_gradient_sum(f), theta)
    dp = float(np.linalg.norm(exact - cand))
    dm = float(np.linalg.norm(exact + cand))
    sign, best, other = (1, dp, dm) if dp <= dm else (-1, dm, dp)
    if best > 1e-8 * max(1.0, float(np.linalg.norm(exact))):
        raise ArithmeticError(f"neither sign matches (residuals {dp:.3e}, {dm:.3e})")
    fd = (rotate(T, theta + h) - rotate(T, theta - h)) / (2 * h)
    return DerivativeCheck(best, sign, other, float(np.abs(fd - exact).max()))


def sign_conjugation_check(f: CubeFunction, k: int) -> float:
    """max | Q_k (sum P_j d_j T_f) Q_k - sum eps^(k)_j P_j d_j T_f |, k a 0-based site."""
    if not 0 <= k < f.n:
        raise IndexError(f"site {k} out of range for n={f.n}")
    Qk = site_op(f.n, k, "Q")
    lhs = Qk @ nc_gradient_sum(f) @ Qk
    signs = np.ones(f.n)
    signs[k] = -1
    return float(np.abs(lhs - nc_gradient_sum(f, signs)).max())


def fejer_bernstein_check(f: CubeFunction, d: int, p: float, thetas) -> float:
    """max ||A_f'(theta)||_p / (2d max ||A_f(theta)||_p) over the grid."""
    thetas = list(thetas)
    if not thetas:
        raise ValueError("empty theta grid")
    if f.spectrum().degree(1e-12) > d:
        raise ValueError(f"f has degree above {d}")
    T = lift(f)
    num = max(schatten_norm(rotation_derivative(T, t), p) for t in thetas)
    den = max(schatten_norm(rotate(T, t), p) for t in thetas)
    if num == 0:
        return 0.0
    return num / (2 * d * den)


def psd_sqrt(A: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh((A + A.conj().T) / 2)
    return (V * np.sqrt(np.clip(w, 0, None))) @ V.conj().T


def square_function(f: CubeFunction) -> np.ndarray:
    """(sum_j (d_j T_f)^* d_j T_f)^(1/2)."""
    n = f.n
    S = np.zeros((1 << n, 1 << n), dtype=complex)
    for j in range(n):
        D = lift(strip(f, j))
        S += D.conj().T @ D
    return psd_sqrt(S)


def nc_khintchine_sides(f: CubeFunction, p: float) -> tuple[float, float, float]:
    """(E_eps ||sum eps_j P_j d_j T_f||_p, 2 ||square function||_p, their ratio)."""
    if p < 2:
        raise ValueError("the square-function form needs p >= 2")
    if f.n > 5:
        raise ValueError("exact sign average limited to n <= 5")
    n = f.n
    avg = 0.0
    for signs in itertools.product((1.0, -1.0), repeat=n):
        avg += schatten_norm(nc_gradient_sum(f, signs), p)
    avg /= 2**n
    sq = 2 * schatten_norm(square_function(f), p)
    return avg, sq, (avg / sq if sq > 0 else 0.0)


@dataclass(frozen=True)
class NCBMRow:
    n: int
    d: int
    p: float
    trials: int
    max_constant: float
    max_lift_discrepancy: float
    seed: int


def ncbm_check(n: int, d: int, p: float, trials: int, seed: int = 0) -> NCBMRow:
    """max over random f in P_d of || |grad f| ||_p / (d ||f||_p).

    Along the way the square-function norm is compared with || |grad f| ||_p;
    both are lifts of the same scalar function.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    rng = np.random.default_rng(seed)
    worst = 0.0
    gap = 0.0
    for _ in range(trials):
        f = CubeFunction.random(n, rng, band=(0, d))
        g = lp_norm(gradient_field(f), p)
        worst = max(worst, g / (d * lp_norm(f, p)))
        gap = max(gap, abs(schatten_norm(square_function(f), p) - g) / max(g, 1e-300))
    return NCBMRow(n, d, p, trials, worst, gap, seed)


def diag(A: np.ndarray) -> np.ndarray:
    return np.diag(np.diag(A))


def diag_contraction_check(A: np.ndarray, p: float) -> bool:
    return schatten_norm(diag(A), p) <= schatten_norm(A, p) * (1 + 1e-12)


def pauli_expansion(A: np.ndarray) -> dict[str, complex]:
    """Coefficients of A in the orthonormal basis of words over {I, Q, P, U}."""
    n = _sites(A)
    out = {}
    for letters in itertools.product("IQPU", repeat=n):
        w = "".join(letters)
        c = trace(word(w).conj().T @ A)
        if c != 0:
            out[w] = c
    return out


def project_q(A: np.ndarray) -> np.ndarray:
    """Keep only the words built from I and Q."""
    n = _sites(A)
    terms = pauli_expansion(A)
    out = np.zeros_like(A, dtype=complex)
    for w, c in terms.items():
        if set(w) <= {"I", "Q"}:
            out += c * word(w)
    return out
