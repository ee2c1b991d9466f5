"""Planar domains, conformal maps, Green's functions and the analytic paraproduct.

Two families of symmetric domains with corners at +-1 are treated:

* the lens Omega(r), the intersection of the disks of radius r centred at
  +-i sqrt(r^2 - 1), with interior corner angle 2 arcsin(1/r);
* the two-gone O_alpha = G_alpha u -G_alpha with G_alpha = exp(-sector of
  half-angle pi alpha / 2).

The two-gone is starlike with respect to 0.  Writing w = e^{-z}, z = x + iy,
the sector condition |y| <= tan(pi alpha / 2) x becomes, for the branch with
|arg w| <= pi/2, log(1/|w|) >= cot(pi alpha / 2) |arg w|.  Reflecting through
0 gives the polar boundary R(theta) = exp(-c min(|theta|, pi - |theta|)) with
c = cot(pi alpha / 2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .fitting import DegenerateFit, ExponentFit, fit_exponent

FLOOR = 1e-14


class ConvergenceError(RuntimeError):
    def __init__(self, msg: str, residual: float, iterations: int):
        super().__init__(f"{msg} (residual {residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


def alpha_from_r(r: float) -> float:
    if not r > 1:
        raise ValueError("lens radius must exceed 1")
    return 2 / math.pi * math.asin(1 / r)


def r_from_alpha(alpha: float) -> float:
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    return 1 / math.sin(math.pi * alpha / 2)


def alpha_from_p(p: float) -> float:
    """Corner parameter with pi alpha = 2 arcsin(2 sqrt(p-1)/p)."""
    if not p > 1:
        raise ValueError("p must exceed 1")
    return 2 / math.pi * math.asin(min(1.0, 2 * math.sqrt(p - 1) / p))


def beta_from_p(p: float) -> float:
    return 2 - alpha_from_p(p)


# ---------------------------------------------------------------- domains

@dataclass(frozen=True)
class Lens:
    r: float
    s: float = 1.0

    def __post_init__(self):
        if not self.r > 1:
            raise ValueError("lens radius must exceed 1")
        if not 0 < self.s <= 1:
            raise ValueError("scale must lie in (0, 1]")

    @classmethod
    def from_alpha(cls, alpha: float, s: float = 1.0) -> "Lens":
        return cls(r_from_alpha(alpha), s)

    @property
    def h(self) -> float:
        return math.sqrt(self.r * self.r - 1)

    @property
    def alpha(self) -> float:
        return alpha_from_r(self.r)

    def contains(self, z, tol: float = 0.0):
        z = np.asarray(z, dtype=complex) / self.s
        far = np.maximum(np.abs(z - 1j * self.h), np.abs(z + 1j * self.h))
        return far <= self.r * (1 + tol)

    def polar_radius(self, theta) -> np.ndarray:
        st = np.abs(np.sin(np.asarray(theta, dtype=float)))
        return self.s * (np.sqrt(self.h**2 * st * st + 1) - self.h * st)

    def log_radius(self, theta) -> np.ndarray:
        return np.log(self.polar_radius(theta))

    def boundary(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return self.polar_radius(theta) * np.exp(1j * theta)

    def corner_angle(self) -> float:
        """Interior angle at the corner s between the two arc tangents."""
        corner = self.s
        tangents = []
        for centre in (1j * self.h * self.s, -1j * self.h * self.s):
            t = 1j * (corner - centre)
            if t.real > 0:
                t = -t
            tangents.append(t)
        return abs(float(np.angle(tangents[0] / tangents[1])))


@dataclass(frozen=True)
class TwoGone:
    alpha: float

    def __post_init__(self):
        if not 0 < self.alpha <= 1:
            raise ValueError("alpha must lie in (0, 1]")

    @property
    def c(self) -> float:
        return 1 / math.tan(math.pi * self.alpha / 2)

    def log_radius(self, theta) -> np.ndarray:
        t = np.mod(np.asarray(theta, dtype=float) + np.pi, 2 * np.pi) - np.pi
        a = np.abs(t)
        return -self.c * np.minimum(a, np.pi - a)

    def polar_radius(self, theta) -> np.ndarray:
        return np.exp(self.log_radius(theta))

    def boundary(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        return self.polar_radius(theta) * np.exp(1j * theta)

    def contains(self, w, tol: float = 0.0):
        w = np.asarray(w, dtype=complex)
        rad = np.abs(w)
        inside = rad <= self.polar_radius(np.angle(w)) * (1 + tol)
        return np.where(rad == 0, True, inside)


def twogone_contains(alpha: float, w, tol: float = 1e-12) -> bool | np.ndarray:
    """Closed-domain membership; ``tol`` absorbs rounding for boundary points."""
    out = TwoGone(alpha).contains(w, tol)
    return bool(out) if np.ndim(out) == 0 else out


# ---------------------------------------------------------------- series

@dataclass(frozen=True)
class PowerSeries:
    """Taylor coefficients c_0..c_N of a map on the unit disk."""

    coeffs: np.ndarray
    radius: float = 1.0
    truncation_error: float = float("nan")

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.ndim != 1 or len(c) == 0:
            raise ValueError("coefficients must be a non-empty vector")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite coefficients")
        object.__setattr__(self, "coeffs", c)

    def __len__(self):
        return len(self.coeffs)

    def __call__(self, z):
        return np.polynomial.polynomial.polyval(np.asarray(z, dtype=complex), self.coeffs)

    def derivative(self) -> "PowerSeries":
        c = self.coeffs
        if len(c) == 1:
            return PowerSeries(np.zeros(1, dtype=c.dtype), self.radius)
        return PowerSeries(c[1:] * np.arange(1, len(c)), self.radius)

    def is_real(self, tol: float = 1e-12) -> bool:
        return bool(np.all(np.abs(np.imag(self.coeffs)) <= tol))

    def truncate(self, N: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[:N + 1], self.radius, self.truncation_error)

    def circle_values(self, M: int | None = None) -> np.ndarray:
        """Values on M equispaced points of |z| = 1 (M >= len)."""
        M = M or 1 << int(math.ceil(math.log2(2 * len(self))))
        if M < len(self):
            raise ValueError("sampling grid coarser than the series")
        buf = np.zeros(M, dtype=complex)
        buf[:len(self)] = self.coeffs
        return np.fft.ifft(buf) * M

    def sup_norm(self, M: int | None = None) -> float:
        return float(np.max(np.abs(self.circle_values(M))))

    def rows(self):
        for n, c in enumerate(self.coeffs):
            yield n, float(np.real(c)), float(np.imag(c))


def lens_map(r: float, s: float = 1.0):
    """Closed-form conformal map of the disk onto s * Omega(r)."""
    alpha = alpha_from_r(r)

    def phi(z):
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) >= 1):
            raise ValueError("lens_map is defined on the open unit disk")
        H = ((1 + z) / (1 - z)) ** alpha
        return s * (H - 1) / (H + 1)

    return phi


def lens_boundary(r: float, psi) -> np.ndarray:
    """Boundary values of the lens map at e^{i psi}; the corners are +-1."""
    alpha = alpha_from_r(r)
    z = np.exp(1j * np.asarray(psi, dtype=float))
    with np.errstate(divide="ignore", invalid="ignore"):
        H = ((1 + z) / (1 - z)) ** alpha
        w = (H - 1) / (H + 1)
    w = np.where(np.isclose(z, 1, rtol=0, atol=1e-15), 1.0, w)
    return np.where(np.isclose(z, -1, rtol=0, atol=1e-15), -1.0, w)


def _lens_boundary_values(alpha: float, M: int) -> np.ndarray:
    z = np.exp(2j * np.pi * np.arange(M) / M)
    with np.errstate(divide="ignore", invalid="ignore"):
        H = ((1 + z) / (1 - z)) ** alpha
        w = (H - 1) / (H + 1)
    w[0] = 1.0
    return w


def lens_series(r: float, N: int, M: int | None = None) -> PowerSeries:
    """Taylor coefficients of the lens map by FFT of its boundary values.

    The corner singularity makes the coefficients decay like n^(-1-alpha),
    so the aliasing error of an M-point grid is about M^(-1-alpha); the
    default oversamples by 64.
    """
    alpha = alpha_from_r(r)
    M = M or max(1 << 16, 1 << int(math.ceil(math.log2(64 * (N + 1)))))
    if M < 4 * (N + 1):
        raise ValueError("grid too coarse for the requested length")
    c = np.fft.fft(_lens_boundary_values(alpha, M))[:N + 1] / M
    c = c.real
    c[0::2] = 0.0  # odd map
    return PowerSeries(c, truncation_error=float(M) ** (-1 - alpha))


def power_law_series(alpha: float, N: int, odd_only: bool = False) -> PowerSeries:
    """Model series with |c_m| = m^(-1-alpha)."""
    m = np.arange(N + 1, dtype=float)
    c = np.zeros(N + 1)
    c[1:] = m[1:] ** (-1 - alpha)
    if odd_only:
        c[0::2] = 0.0
    return PowerSeries(c)


# ---------------------------------------------------------------- numeric map

@dataclass
class ConformalMap:
    series: PowerSeries
    psi: np.ndarray = field(repr=False)
    theta: np.ndarray = field(repr=False)
    iterations: int = 0
    residual: float = 0.0
    even_residual: float = 0.0
    imag_residual: float = 0.0

    def boundary_residual(self, log_radius) -> float:
        """sup | |phi(e^{i psi})| - R(theta(psi)) | on the solver grid.

        phi is rebuilt from the nonnegative frequencies of the computed
        boundary values, so the residual measures how far those values are
        from the trace of an analytic function.  Corners make it decay only
        like a power of M.
        """
        M = len(self.psi)
        R = np.exp(log_radius(self.theta))
        F = np.fft.fft(R * np.exp(1j * self.theta))
        F[M // 2:] = 0
        return float(np.max(np.abs(np.abs(np.fft.ifft(F)) - R)))


def _relaxation(alpha: float) -> float:
    c = 1 / math.tan(math.pi * alpha / 2)
    return min(0.5, 1 / (1 + c * c))


def theodorsen(log_radius, M: int, omega: float = 0.5, tol: float = 1e-10,
               maxit: int = 20000) -> ConformalMap:
    """Boundary correspondence theta(psi) for a starlike domain with polar
    boundary exp(log_radius(theta)).

    Fixed point of theta = psi + K[log R(theta)] where K is the periodic
    conjugate-function operator applied by FFT; under-relaxed by omega.
    The map phi with phi(0) = 0, phi'(0) > 0 has boundary values
    R(theta(psi)) e^{i theta(psi)}; N = M/4 Taylor coefficients are returned.
    """
    if M < 256 or M & (M - 1):
        raise ValueError("M must be a power of two >= 256")
    psi = 2 * np.pi * np.arange(M) / M
    k = np.fft.fftfreq(M, 1.0 / M)
    conj = -1j * np.sign(k)
    theta = psi.copy()
    delta = math.inf
    for it in range(1, maxit + 1):
        u = log_radius(theta)
        target = psi + np.fft.ifft(conj * np.fft.fft(u)).real
        new = (1 - omega) * theta + omega * target
        delta = float(np.max(np.abs(new - theta)))
        theta = new
        if delta < tol:
            break
    else:
        raise ConvergenceError("boundary correspondence did not converge", delta, maxit)
    w = np.exp(log_radius(theta) + 1j * theta)
    c = np.fft.fft(w)[:M // 4] / M
    return ConformalMap(PowerSeries(c), psi, theta, it, delta)


def twogone_map(alpha: float, M: int = 1 << 14, tol: float = 1e-10,
                maxit: int = 20000, domain=None) -> ConformalMap:
    """Numeric conformal map of the disk onto O_alpha.

    ``domain`` substitutes another starlike symmetric domain with the same
    corner parameter (the lens serves as a closed-form oracle).
    """
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    dom = domain if domain is not None else TwoGone(alpha)
    omega = 0.5 if alpha == 1 else _relaxation(alpha)
    cm = theodorsen(dom.log_radius, M, omega, tol, maxit)
    raw = cm.series.coeffs
    cm.even_residual = float(np.abs(raw[0::2]).max())
    cm.imag_residual = float(np.abs(raw.imag).max())
    c = raw.real.copy()
    c[0::2] = 0.0  # symmetric under z -> -z
    cm.series = PowerSeries(c, truncation_error=float(M) ** (-1 - alpha))
    return cm


# ---------------------------------------------------------------- asymptotics

def coeff_asymptotics_check(series: PowerSeries, alpha: float, lo: int = 64,
                            hi: int | None = None, floor: float = FLOOR) -> ExponentFit | None:
    """Fit log|c_n| against log n on lo <= n <= hi.

    Coefficients below ``floor`` (the exact zeros of an odd map among them)
    are excluded.  Returns None for alpha = 1, where the map is linear.
    """
    if len(series) < 128:
        raise ValueError("series too short for an asymptotic fit")
    if alpha == 1:
        return None
    hi = len(series) - 1 if hi is None else min(hi, len(series) - 1)
    n = np.arange(len(series))
    a = np.abs(series.coeffs)
    sel = (n >= lo) & (n <= hi) & (a > floor)
    if sel.sum() < 3:
        raise DegenerateFit("too few coefficients above the floor")
    return fit_exponent(zip(n[sel], a[sel]))


def coeff_bound_integral(alpha: float, m: int, a: float = 1.0) -> float:
    """int_0^2 (1 + a y)^(-m) y^(alpha-1) dy by algebraic-weight quadrature."""
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    if m < 1 or a <= 0:
        raise ValueError("need m >= 1 and a > 0")
    val, _ = integrate.quad(lambda y: (1 + a * y) ** (-m), 0, 2,
                            weight="alg", wvar=(alpha - 1, 0), limit=200)
    return val


def coeff_bound_integral_exact(alpha: float, m: int, a: float = 1.0) -> float:
    """Same integral as a^(-alpha) B(x; alpha, m - alpha), x = 2a / (1 + 2a)."""
    x = 2 * a / (1 + 2 * a)
    b = m - alpha
    return a ** (-alpha) * special.betainc(alpha, b, x) * special.beta(alpha, b)


def derivative_profile(series: PowerSeries, alpha: float, xs) -> np.ndarray:
    """|phi'(x)| / (1 - x^2)^(alpha-1) along the real radius (reported only)."""
    xs = np.asarray(xs, dtype=float)
    d = np.abs(series.derivative()(xs))
    return d / (1 - xs * xs) ** (alpha - 1)


# ---------------------------------------------------------------- paraproduct

def paraproduct_apply(g: PowerSeries, phi: PowerSeries) -> PowerSeries:
    """Coefficients of T_phi g = int_0^z g phi' dzeta."""
    prod = np.convolve(g.coeffs, phi.derivative().coeffs)
    out = np.zeros(len(prod) + 1, dtype=prod.dtype)
    out[1:] = prod / np.arange(1, len(prod) + 1)
    return PowerSeries(out)


@dataclass(frozen=True)
class TailBound:
    value: float
    partial: float
    tail: float
    tail_error: float
    cutoff: int
    fit: ExponentFit | None


def paraproduct_tail_bound(phi: PowerSeries, d: int, factor: int = 64,
                           fit_lo: int | None = None) -> TailBound:
    """Sum over m >= 1 of m |c_m| / (d + m - 1).

    Summed exactly up to m = factor * d (or the series end); the remainder is
    modelled by a power law fitted to the last octave of the series, counting
    only the parity class that carries nonzero coefficients, and integrated.
    The error of that integral against the modelled sum is at most the first
    omitted term; it must stay below 1% of the total.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    c = np.abs(phi.coeffs)
    N = len(c) - 1
    if N < 4 * d:
        raise ValueError(f"series of length {N} too short for d={d}")
    cut = min(factor * d, N)
    m = np.arange(1, cut + 1)
    partial = float(np.sum(m * c[1:cut + 1] / (d + m - 1)))
    lo = fit_lo or max(64, N // 2)
    n = np.arange(len(c))
    sel = (n >= lo) & (c > FLOOR)
    fit = None
    tail = tail_err = 0.0
    if sel.sum() >= 3:
        fit = fit_exponent(zip(n[sel], c[sel]))
        density = sel.sum() / (N - lo + 1)
        C, s = fit.constant, -fit.slope
        if s <= 1:
            raise ValueError("coefficient decay too slow for a finite tail")
        X, b, e = cut + 0.5, d - 1.0, s - 1
        # int_X^inf x^(-e) / (x + b) dx = X^(-e) / e * 2F1(1, e; e + 1; -b/X)
        tail = density * C * X ** (-e) / e * special.hyp2f1(1, e, e + 1, -b / X)
        tail_err = density * C * X ** (1 - s) / (d + X - 1)
    total = partial + tail
    if tail_err > 0.01 * total:
        raise ValueError(f"tail estimate error {tail_err:.3e} exceeds 1% of {total:.3e}")
    return TailBound(total, partial, tail, tail_err, cut, fit)


def monomial_spot_check(phi: PowerSeries, d: int, M: int | None = None) -> tuple[float, float]:
    """Sampled sup of T_phi z^(d-1) on |z| = 1 against sum m |c_m| / (d + m - 1).

    Both sides use the same coefficients, so for a series with nonnegative
    coefficients they agree and the bound is attained at z = 1.
    """
    g = np.zeros(d)
    g[d - 1] = 1.0
    Tg = paraproduct_apply(PowerSeries(g), phi)
    m = np.arange(1, len(phi))
    direct = float(np.sum(m * np.abs(phi.coeffs[1:]) / (d + m - 1)))
    return Tg.sup_norm(M), direct


# ---------------------------------------------------------------- Green

def green_segment(c: float):
    """Green's function of C minus [-c, c] with pole at infinity."""
    if not c > 0:
        raise ValueError("half-length must be positive")

    def G(z):
        z = np.asarray(z, dtype=complex)
        on = (np.abs(z.imag) == 0) & (np.abs(z.real) <= c)
        if np.any(on):
            raise ValueError("point on the segment")
        u = z / c
        root = np.sqrt(u - 1) * np.sqrt(u + 1)  # branch cut on [-1, 1]
        return np.log(np.maximum(np.abs(u + root), np.abs(u - root)))

    return G


def green_lens_exterior(r: float, s: float = 1.0):
    """Green's function of the exterior of s * Omega(r) with pole at infinity.

    mu = (s + w)/(s - w) sends the lens onto the sector |arg mu| < pi alpha/2,
    so -mu ranges over the exterior sector of opening 2 pi - pi alpha; the
    power gamma = pi / (2 pi - pi alpha) opens it to the right half-plane
    with infinity sent to 1, and the Cayley map finishes.
    """
    lens = Lens(r, s)
    gamma = math.pi / (2 * math.pi - math.pi * lens.alpha)

    def G(z):
        z = np.asarray(z, dtype=complex)
        if np.any(lens.contains(z, tol=-1e-15)):
            raise ValueError("point inside the lens")
        mu = (s + z) / (s - z)
        nu = (-mu) ** gamma
        return np.log(np.abs((nu + 1) / (nu - 1)))

    return G


def green_exponent(p: float, beta: float) -> float:
    """Predicted power of d in G(1) for the lens scaled by 1 - d^-beta."""
    return -beta * math.pi / (2 * math.pi - 2 * math.asin(min(1.0, 2 * math.sqrt(p - 1) / p)))


def green_lens_sweep(p: float, beta: float, ds) -> list[tuple[int, float]]:
    r = 1 / math.sin(math.pi * alpha_from_p(p) / 2)
    return [(d, float(green_lens_exterior(r, 1 - d ** (-beta))(1.0))) for d in ds]


def mean_value_discrepancy(G, z0: complex, radius: float, samples: int = 256) -> float:
    """|average of G over a circle - G(z0)|; the trapezoid rule is spectral here."""
    pts = z0 + radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    return float(abs(np.mean(G(pts)) - G(z0)))


# ---------------------------------------------------------------- curve check

def curve_parameter(alpha: float) -> float:
    """a with tan(pi alpha / 2) = pi / a."""
    return math.pi / math.tan(math.pi * alpha / 2)


def curve_margin(alpha: float, t) -> np.ndarray:
    """1 - e^{-2t} - 2 e^{-t} (a/pi) sin(pi t / a)."""
    a = curve_parameter(alpha)
    t = np.asarray(t, dtype=float)
    return -np.expm1(-2 * t) - 2 * np.exp(-t) * (a / math.pi) * np.sin(math.pi * t / a)


def cubic_coefficient_predicted(alpha: float) -> float:
    """2 c + 1/3 with c = (pi/a)^2 / 6, the t^3 term of the sine expansion."""
    return 1 / 3 + math.tan(math.pi * alpha / 2) ** 2 / 3


@dataclass(frozen=True)
class CurveCheck:
    alpha: float
    t_max: float
    worst_margin: float
    cubic_fit: float
    cubic_predicted: float

    @property
    def cubic_rel_error(self) -> float:
        return abs(self.cubic_fit / self.cubic_predicted - 1)


def addendum2_curve_check(alpha: float, t_max: float | None = None,
                          samples: int = 4000) -> CurveCheck:
    a = curve_parameter(alpha)
    t_max = a / 4 if t_max is None else t_max
    if not 0 < t_max <= a / 2:
        raise ValueError("t_max must lie in (0, a/2]")
    ts = np.linspace(t_max / samples, t_max, samples)
    worst = float(curve_margin(alpha, ts).min())
    small = np.geomspace(1e-4, 1e-2, 40) * min(1.0, a)
    ratio = curve_margin(alpha, small) / small**3
    # margin / t^3 = k3 + k4 t + O(t^2)
    coef = np.polyfit(small, ratio, 2)
    return CurveCheck(alpha, t_max, worst, float(coef[-1]), cubic_coefficient_predicted(alpha))


def curve_points(alpha: float, ts) -> np.ndarray:
    a = curve_parameter(alpha)
    ts = np.asarray(ts, dtype=float)
    return np.exp(-ts) * np.exp(1j * math.pi * ts / a)


def curve_on_twogone_boundary(alpha: float, samples: int = 512) -> float:
    """sup | |Gamma(t)| - R(arg Gamma(t)) | over t in (0, a/2]."""
    a = curve_parameter(alpha)
    ts = np.linspace(a / 2 / samples, a / 2, samples)
    w = curve_points(alpha, ts)
    return float(np.max(np.abs(np.abs(w) - TwoGone(alpha).polar_radius(np.angle(w)))))


def curve_inside_lens(alpha: float, samples: int = 512) -> tuple[bool, float]:
    """Whether the sampled arc Gamma(a/2) lies in Omega(r), r = 1/sin(pi alpha/2).

    Also returns the smallest slack r - max(|w - ih|, |w + ih|).
    """
    a = curve_parameter(alpha)
    lens = Lens.from_alpha(alpha)
    ts = np.linspace(a / 2 / samples, a / 2, samples)
    w = curve_points(alpha, ts)
    slack = lens.r - np.maximum(np.abs(w - 1j * lens.h), np.abs(w + 1j * lens.h))
    return bool(np.all(slack > 0)), float(slack.min())
