"""Walsh-Fourier analysis on the Hamming cube {-1, 1}^n.

Points are encoded as integers: bit i of the index is set iff eps_i = -1.
Subsets S of coordinates are encoded the same way (bit i set iff i in S), so
the character eps^S evaluated at point x is (-1)^popcount(S & x).

Coefficients use the expectation normalization f^(S) = E[f eps^S].
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

MAX_N_SCALAR = 24
MAX_N_VECTOR = 14


class DimensionError(ValueError):
    pass


def popcount(x: np.ndarray | int) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    out = np.zeros_like(x)
    while np.any(x):
        out += x & 1
        x = x >> 1
    return out


_DEGREE_CACHE: dict[int, np.ndarray] = {}


def degrees(n: int) -> np.ndarray:
    """|S| for every mask S in [0, 2^n)."""
    if n not in _DEGREE_CACHE:
        d = np.zeros(1, dtype=np.int64)
        for _ in range(n):
            d = np.concatenate([d, d + 1])
        d.setflags(write=False)
        _DEGREE_CACHE[n] = d
    return _DEGREE_CACHE[n]


def _check_dims(n: int, m: int) -> None:
    if n < 0:
        raise DimensionError(f"negative dimension n={n}")
    limit = MAX_N_SCALAR if m == 1 else MAX_N_VECTOR
    if n > limit:
        raise DimensionError(f"n={n} exceeds limit {limit} for m={m}")


def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard butterfly along axis 0.

    Returns sum_x a[x] (-1)^popcount(S & x) for each S. The transform is its
    own inverse up to a factor 2^n.
    """
    a = np.asarray(a)
    size = a.shape[0]
    n = size.bit_length() - 1
    if 1 << n != size:
        raise DimensionError(f"length {size} is not a power of two")
    rest = a.shape[1:]
    out = np.array(a, dtype=np.result_type(a.dtype, np.float64), copy=True)
    # bit i of the index corresponds to axis n-1-i of the (2,)*n view
    view = out.reshape((2,) * n + rest)
    for axis in range(n):
        lo = np.take(view, 0, axis=axis)
        hi = np.take(view, 1, axis=axis)
        s = lo + hi
        d = lo - hi
        idx0 = [slice(None)] * view.ndim
        idx1 = [slice(None)] * view.ndim
        idx0[axis] = 0
        idx1[axis] = 1
        view[tuple(idx0)] = s
        view[tuple(idx1)] = d
    return out


def naive_wht(values: np.ndarray) -> np.ndarray:
    """O(4^n) reference transform with expectation normalization (test oracle)."""
    values = np.asarray(values)
    size = values.shape[0]
    idx = np.arange(size)
    signs = 1 - 2 * (popcount(idx[:, None] & idx[None, :]) & 1)
    return signs @ values / size


@dataclass(frozen=True)
class ValueNormSpec:
    """The q-norm |v|_X = (sum |v_i|^q)^(1/q) on R^m modelling the space X."""

    q: float = 2.0

    def __post_init__(self):
        if not (self.q >= 1):
            raise ValueError(f"q must be >= 1, got {self.q}")

    def norm(self, v: np.ndarray) -> np.ndarray:
        """Pointwise norm over the last axis."""
        a = np.abs(v)
        if a.shape[-1] == 1:
            return a[..., 0]
        if math.isinf(self.q):
            return a.max(axis=-1)
        if self.q == 2:
            return np.sqrt((a * a).sum(axis=-1))
        return (a**self.q).sum(axis=-1) ** (1.0 / self.q)

    @property
    def dual(self) -> "ValueNormSpec":
        if self.q == 1:
            return ValueNormSpec(math.inf)
        if math.isinf(self.q):
            return ValueNormSpec(1.0)
        return ValueNormSpec(self.q / (self.q - 1))


SCALAR = ValueNormSpec(2.0)


class CubeFunction:
    """A function on {-1,1}^n with values in R^m (or C^m), immutable.

    ``values`` has shape (2^n, m). The Walsh spectrum is computed lazily and
    cached; since values cannot be mutated the cache never goes stale.
    """

    __slots__ = ("n", "m", "_values", "_spectrum")

    def __init__(self, values, n: int | None = None):
        v = np.array(values, copy=True)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise ValueError("values must be 1-d or 2-d")
        if not np.issubdtype(v.dtype, np.complexfloating):
            v = v.astype(np.float64)
        size = v.shape[0]
        nn = size.bit_length() - 1
        if size == 0 or 1 << nn != size:
            raise DimensionError(f"{size} values is not a power of two")
        if n is not None and n != nn:
            raise DimensionError(f"expected 2^{n} values, got {size}")
        _check_dims(nn, v.shape[1])
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        v.setflags(write=False)
        self.n = nn
        self.m = v.shape[1]
        self._values = v
        self._spectrum = None

    @property
    def values(self) -> np.ndarray:
        return self._values

    @property
    def scalar(self) -> np.ndarray:
        """Values as a flat array (scalar functions only)."""
        if self.m != 1:
            raise ValueError("function is vector-valued")
        return self._values[:, 0]

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self._values)

    def spectrum(self) -> "Spectrum":
        if self._spectrum is None:
            self._spectrum = wht(self)
        return self._spectrum

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[np.ndarray], np.ndarray]) -> "CubeFunction":
        """Build from fn(eps) where eps has shape (2^n, n) with entries +-1."""
        return cls(fn(points(n)), n=n)

    @classmethod
    def character(cls, n: int, mask: int, coeff=1.0) -> "CubeFunction":
        x = np.arange(1 << n)
        return cls(coeff * (1 - 2 * (popcount(x & mask) & 1)).astype(float), n=n)

    @classmethod
    def constant(cls, n: int, c=1.0, m: int = 1) -> "CubeFunction":
        return cls(np.full((1 << n, m), c, dtype=float), n=n)

    @classmethod
    def random(cls, n: int, rng: np.random.Generator, m: int = 1,
               band: tuple[int, int] | None = None) -> "CubeFunction":
        """Gaussian coefficients, optionally restricted to a degree band."""
        coeffs = rng.standard_normal((1 << n, m))
        if band is not None:
            deg = degrees(n)
            coeffs[(deg < band[0]) | (deg > band[1])] = 0.0
        return inverse_wht(Spectrum(coeffs, n=n))

    def __add__(self, other: "CubeFunction") -> "CubeFunction":
        return CubeFunction(self._values + other._values)

    def __sub__(self, other: "CubeFunction") -> "CubeFunction":
        return CubeFunction(self._values - other._values)

    def __mul__(self, c) -> "CubeFunction":
        return CubeFunction(self._values * c)

    __rmul__ = __mul__

    def __call__(self, eps) -> np.ndarray:
        return self._values[point_index(eps)]

    def __repr__(self):
        return f"CubeFunction(n={self.n}, m={self.m})"

    def to_json(self, q: float = 2.0) -> str:
        vals = self._values
        if np.iscomplexobj(vals):
            raise ValueError("JSON format holds real values only")
        return json.dumps({"n": self.n, "m": self.m, "q": q, "values": vals.tolist()})

    @classmethod
    def from_json(cls, text: str) -> tuple["CubeFunction", ValueNormSpec]:
        obj = json.loads(text)
        q = obj.get("q", 2.0)
        q = math.inf if q in ("inf", "Infinity", None) else float(q)
        f = cls(np.asarray(obj["values"], dtype=float).reshape(1 << obj["n"], obj["m"]), n=obj["n"])
        return f, ValueNormSpec(q)


class Spectrum:
    """Walsh coefficients indexed by subset mask, shape (2^n, m)."""

    __slots__ = ("n", "m", "_coeffs")

    def __init__(self, coeffs, n: int | None = None):
        c = np.array(coeffs, copy=True)
        if c.ndim == 1:
            c = c[:, None]
        if not np.issubdtype(c.dtype, np.complexfloating):
            c = c.astype(np.float64)
        size = c.shape[0]
        nn = size.bit_length() - 1
        if size == 0 or 1 << nn != size:
            raise DimensionError(f"{size} coefficients is not a power of two")
        if n is not None and n != nn:
            raise DimensionError(f"expected 2^{n} coefficients, got {size}")
        _check_dims(nn, c.shape[1])
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        c.setflags(write=False)
        self.n = nn
        self.m = c.shape[1]
        self._coeffs = c

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    def __getitem__(self, mask: int) -> np.ndarray:
        if not 0 <= mask < (1 << self.n):
            raise IndexError(mask)
        return self._coeffs[mask]

    def support(self, tol: float = 0.0) -> np.ndarray:
        return np.flatnonzero(np.abs(self._coeffs).max(axis=1) > tol)

    def degree(self, tol: float = 0.0) -> int:
        s = self.support(tol)
        return int(degrees(self.n)[s].max()) if len(s) else 0

    @classmethod
    def from_dict(cls, n: int, coeffs: Mapping[int, object], m: int = 1) -> "Spectrum":
        arr = np.zeros((1 << n, m))
        for mask, v in coeffs.items():
            arr[int(mask)] = v
        return cls(arr, n=n)

    def to_json(self) -> str:
        nz = self.support()
        return json.dumps({"n": self.n, "m": self.m,
                           "coeffs": {str(int(s)): self._coeffs[s].tolist() for s in nz}})

    @classmethod
    def from_json(cls, text: str) -> "Spectrum":
        obj = json.loads(text)
        return cls.from_dict(obj["n"], {int(k): v for k, v in obj["coeffs"].items()}, m=obj["m"])


def points(n: int) -> np.ndarray:
    """All points of the cube as a (2^n, n) array of +-1, row x = point index x."""
    x = np.arange(1 << n)[:, None]
    bits = (x >> np.arange(n)[None, :]) & 1
    return (1 - 2 * bits).astype(float)


def point_index(eps) -> int | np.ndarray:
    eps = np.asarray(eps)
    bits = (eps < 0).astype(np.int64)
    return (bits << np.arange(eps.shape[-1])).sum(axis=-1)


def wht(f: CubeFunction) -> Spectrum:
    return Spectrum(fwht(f.values) / (1 << f.n), n=f.n)


def inverse_wht(s: Spectrum) -> CubeFunction:
    return CubeFunction(fwht(s.coeffs), n=s.n)


def lp_norm(f: CubeFunction, p: float, xnorm: ValueNormSpec = SCALAR) -> float:
    """(E |f|_X^p)^(1/p); the maximum for p = inf."""
    if not (p >= 1):
        raise ValueError(f"p must be >= 1, got {p}")
    a = xnorm.norm(f.values)
    if math.isinf(p):
        return float(a.max())
    top = a.max()
    if top == 0:
        return 0.0
    # rescale to avoid overflow for large p
    return float(top * np.mean((a / top) ** p) ** (1.0 / p))


def partial_d(f: CubeFunction, j: int) -> CubeFunction:
    """D_j f(eps) = (f(eps) - f(eps with coordinate j flipped)) / 2."""
    if not 0 <= j < f.n:
        raise IndexError(f"coordinate {j} out of range for n={f.n}")
    x = np.arange(1 << f.n)
    v = f.values
    return CubeFunction((v - v[x ^ (1 << j)]) / 2)


def gradient_components(f: CubeFunction) -> np.ndarray:
    """Array of shape (2^n, n, m) holding D_j f at every point."""
    x = np.arange(1 << f.n)
    v = f.values
    return np.stack([(v - v[x ^ (1 << j)]) / 2 for j in range(f.n)], axis=1)


def gradient_field(f: CubeFunction, xnorm: ValueNormSpec = SCALAR) -> CubeFunction:
    """|grad f|_X (eps) = (sum_j |D_j f(eps)|_X^2)^(1/2), a scalar function."""
    if f.n == 0:
        return CubeFunction(np.zeros(1))
    g = xnorm.norm(gradient_components(f))
    return CubeFunction(np.sqrt((g * g).sum(axis=1)))


def multiplier(f: CubeFunction, lam: Callable[[np.ndarray], np.ndarray] | np.ndarray) -> CubeFunction:
    """Apply the degree multiplier f^(S) -> lam(|S|) f^(S).

    ``lam`` is either a callable on an integer array of degrees or an array
    of length n+1 indexed by degree.
    """
    deg = degrees(f.n)
    if callable(lam):
        table = np.asarray(lam(np.arange(f.n + 1)))
    else:
        table = np.asarray(lam)
        if table.shape[0] < f.n + 1:
            raise ValueError("multiplier table shorter than n+1")
    factor = table[deg][:, None]
    out = fwht(factor * f.spectrum().coeffs)
    if not np.iscomplexobj(out) or np.all(out.imag == 0):
        out = out.real if np.iscomplexobj(out) else out
    return CubeFunction(out, n=f.n)


def laplacian(f: CubeFunction) -> CubeFunction:
    return multiplier(f, lambda k: k.astype(float))


def heat(f: CubeFunction, w) -> CubeFunction:
    """F(w, .) = sum_S w^|S| f^(S) eps^S; w may be complex. Equals e^{-t Delta} f for w = e^{-t}."""
    return multiplier(f, lambda k: np.power(complex(w) if np.iscomplexobj(w) else float(w), k))


def fractional_laplacian(f: CubeFunction, beta: float) -> CubeFunction:
    return multiplier(f, lambda k: k.astype(float) ** beta)


def sqrt_laplacian(f: CubeFunction) -> CubeFunction:
    return fractional_laplacian(f, 0.5)


def project_band(f: CubeFunction, lo: int, hi: int) -> CubeFunction:
    """Keep exactly the coefficients with lo <= |S| <= hi."""
    if not 0 <= lo <= hi <= f.n:
        raise ValueError(f"empty or invalid band [{lo}, {hi}] for n={f.n}")
    return multiplier(f, lambda k: ((k >= lo) & (k <= hi)).astype(float))
