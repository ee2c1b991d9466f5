"""Registered experiments.  Each one records claim rows through a Recorder."""
from __future__ import annotations

import math

import numpy as np

from .. import clifford as C
from .. import extremal as E
from .. import heat as H
from .. import interp as I
from .. import planar as PL
from ..cube import (CubeFunction, Spectrum, ValueNormSpec, degrees, fwht,
                    gradient_field, inverse_wht, lp_norm, naive_wht, wht)
from ..fitting import fit_exponent
from .core import experiment


def _rng(params, salt: int = 0) -> np.random.Generator:
    return np.random.default_rng([params["seed"], salt])


def _spread(values) -> float:
    v = np.asarray(list(values), dtype=float)
    return float(v.max() / v.min())


# ------------------------------------------------------------------ cube

@experiment("walsh-transform", "cube",
            "f^(S) = E[f eps^S]; fast transform, inverse and Parseval",
            claims=("fast transform matches naive sum", "inverse round trip", "Parseval identity"),
            columns=("n",), n_max=10, trials=4)
def walsh_transform(params, rec):
    """Fast Walsh-Hadamard transform against the O(4^n) definition."""
    rng = _rng(params)
    for n in range(1, params["n_max"] + 1):
        worst = [0.0, 0.0, 0.0]
        for _ in range(params["trials"]):
            f = CubeFunction(rng.standard_normal(1 << n))
            s = wht(f).coeffs
            worst[0] = max(worst[0], float(np.abs(s - naive_wht(f.values)).max()))
            worst[1] = max(worst[1], float(np.abs(inverse_wht(wht(f)).values - f.values).max()))
            worst[2] = max(worst[2], abs(float(np.mean(f.values**2)) - float(np.sum(s**2))))
        rec.claim("fast transform matches naive sum", worst[0], 0.0, 1e-12, "abs", n=n)
        rec.claim("inverse round trip", worst[1], 0.0, 1e-12, "abs", n=n)
        rec.claim("Parseval identity", worst[2], 0.0, 1e-12, "abs", n=n)


@experiment("vector-gradient", "cube",
            "E |grad f|^2 = sum_S |S| |f^(S)|^2 for Hilbert-valued f; l^q value norms",
            claims=("gradient energy identity", "value norm ordering"),
            columns=("n", "m", "q"), n=6, m=3, trials=10)
def vector_gradient(params, rec):
    """Vector-valued gradients with l^q_m surrogate value spaces."""
    rng = _rng(params)
    n, m = params["n"], params["m"]
    deg = degrees(n)
    worst = 0.0
    order_gap = -math.inf
    for _ in range(params["trials"]):
        f = CubeFunction(rng.standard_normal((1 << n, m)))
        lhs = float(np.mean(gradient_field(f).scalar ** 2))
        rhs = float(np.sum(deg[:, None] * wht(f).coeffs ** 2))
        worst = max(worst, abs(lhs - rhs) / rhs)
        g = [gradient_field(f, ValueNormSpec(q)).scalar for q in (math.inf, 2.0, 1.0)]
        order_gap = max(order_gap, float(np.max(g[0] - g[1])), float(np.max(g[1] - g[2])))
    rec.claim("gradient energy identity", worst, 0.0, 1e-12, "abs", n=n, m=m, q=2.0)
    rec.claim("value norm ordering", order_gap, 0.0, 1e-12, "le", n=n, m=m, q=math.inf)


# ------------------------------------------------------------------ heat

@experiment("gradient-representation", "heat",
            "D_j e^{-t Delta} f(eps) = e^{-t}(1-e^{-2t})^{-1/2} E_xi[delta_j(t) f(eps xi)]",
            claims=("gradient representation",), columns=("n", "t", "functions"),
            ns=[2, 4, 6, 8], ts=[0.05, 0.3, 1.0, 3.0], functions=20, tol=1e-11,
            validate=lambda p: "n must be <= 8" if max(p["ns"]) > 8 else None)
def gradient_representation(params, rec):
    """Exact enumeration of the heat-kernel gradient formula."""
    rng = _rng(params)
    for n in params["ns"]:
        fs = [CubeFunction.random(n, rng) for _ in range(params["functions"])]
        for t in params["ts"]:
            worst = max(H.gradient_representation_check(f, t, j) for f in fs for j in range(n))
            rec.claim("gradient representation", worst, 0.0, params["tol"], "le",
                      n=n, t=t, functions=len(fs))


@experiment("delta-moments", "heat",
            "E|delta'_j(t)|^m = 2^{m-1}(1-e^{-2t})^{1-m/2}; E|delta'|^2 = 2",
            claims=("moment closed form", "second moment equals two", "moment bound"),
            columns=("order", "t"), orders=[1, 2, 3, 4, 5, 6, 7, 8],
            ts=[0.01, 0.05, 0.3, 1.0, 3.0, 10.0], tol=1e-12)
def delta_moments(params, rec):
    """Moments of the symmetrized variables by enumeration of their law."""
    for t in params["ts"]:
        for m in params["orders"]:
            enum = H.delta_moment("symmetrized", t, m)
            closed = H.symmetrized_moment_closed_form(t, m)
            rec.claim("moment closed form", enum, closed, params["tol"], "rel", order=m, t=t)
            rec.claim("moment bound", closed, H.symmetrized_moment_bound(t, m), 1e-12, "le",
                      order=m, t=t)
            if m == 2:
                rec.claim("second moment equals two", enum, 2.0, params["tol"], "abs", order=2, t=t)


@experiment("contraction", "heat",
            "|| |grad F(x,.)| ||_p <= |x| (1-x^2)^{-1/2} ||f||_p for p >= 2, constant C_p for 1 < p < 2",
            claims=("contraction for p >= 2", "constant for p < 2", "constant uniform for p < 2"),
            columns=("p", "n", "d", "functions"),
            ps=[2.0, 3.0, 4.0, 8.0], small_ps=[1.25, 1.5, 1.75], ns=[4, 6], ds=[1, 3, 5],
            functions=50, grid=41)
def contraction(params, rec):
    """Gradient of the annealed function on a grid of x in (-1, 1)."""
    rng = _rng(params)
    xs = np.linspace(-0.95, 0.95, params["grid"])
    consts = []
    for p in params["ps"] + params["small_ps"]:
        for n in params["ns"]:
            for d in params["ds"]:
                d_eff = min(d, n)
                w = max(H.contraction_inequality_check(CubeFunction.random(n, rng, band=(0, d_eff)), p, xs)
                        for _ in range(params["functions"]))
                extra = dict(p=p, n=n, d=d_eff, functions=params["functions"])
                if p >= 2:
                    rec.claim("contraction for p >= 2", w, 1.0, 1e-9, "le", **extra)
                else:
                    consts.append(w)
                    rec.info("constant for p < 2", w, **extra)
    if consts:
        rec.claim("constant uniform for p < 2", _spread(consts), 10.0, 0.0, "le")


@experiment("mp-integral", "heat",
            "int_0^inf P(|xi - xi'| > s)^{1/u} ds = 2^{1-1/u}(1-e^{-2t})^{1/u}",
            claims=("integral closed form",), columns=("t", "u"),
            ts=[0.01, 0.1, 0.5, 1.0, 2.0, 5.0], us=[1.0, 1.5, 2.0, 3.0, 8.0])
def mp_integral(params, rec):
    """Tail integral of the symmetrized sign difference."""
    for t in params["ts"]:
        for u in params["us"]:
            rec.claim("integral closed form", H.mp_integral_quadrature(t, u), H.mp_integral(t, u),
                      1e-8, "abs", t=t, u=u)


@experiment("aplusb", "heat", "(a+b)^Q <= 6 a^Q + Q^Q b^Q for Q >= 2",
            claims=("elementary power inequality",), columns=("samples",), samples=20000)
def aplusb(params, rec):
    """Random and boundary-case sweep of the elementary inequality."""
    rng = _rng(params)
    a = np.exp(rng.uniform(-20, 20, params["samples"]))
    b = np.exp(rng.uniform(-20, 20, params["samples"]))
    Q = 2 + np.exp(rng.uniform(-5, 5, params["samples"]))
    fails = sum(not H.aplusb_check(x, y, q) for x, y, q in zip(a, b, Q))
    fails += sum((not H.aplusb_check(x, 0.0, q)) + (not H.aplusb_check(0.0, x, q))
                 for x, q in zip(a[:100], Q[:100]))
    rec.claim("elementary power inequality", fails, 0.0, 0.0, "le", samples=params["samples"])


@experiment("rosenthal-chain", "heat",
            "(E||sum lam_j delta_j(t)||^q)^{1/q} <= C (1-e^{-2t})^{1/q-1/2} ||lam||",
            claims=("centered below symmetrized", "chain constant uniform in t", "orthonormality"),
            columns=("t", "q", "n", "constant"),
            ts=[0.01, 0.05, 0.3, 1.0, 3.0], qs=[2, 4, 6], n=4, m=2)
def rosenthal_chain(params, rec):
    """Exact moments of weighted sums of the biased-sign variables."""
    rng = _rng(params)
    n, m = params["n"], params["m"]
    for q in params["qs"]:
        lam = rng.standard_normal((n, m))
        lam /= np.linalg.norm(lam)
        consts = []
        for t in params["ts"]:
            r = H.rosenthal_chain_check(lam, t, q)
            consts.append(r.constant)
            rec.claim("centered below symmetrized", r.B, r.B_symmetrized, 1e-12, "le",
                      t=t, q=q, n=n, constant=r.constant)
        rec.claim("chain constant uniform in t", _spread(consts), 10.0, 0.0, "le", q=q, n=n,
                  constant=max(consts))
    for t in params["ts"]:
        G = H.orthonormality_gram(n, t)
        rec.claim("orthonormality", float(np.abs(G - np.eye(n)).max()), 0.0, 1e-12, "abs", t=t, n=n)


# ------------------------------------------------------------------ interp

@experiment("lemma-conv-sweep", "interp",
            "k ||s_k||_1 <= C_0, s_k^(m) = 1/m for |m| >= k, ||S - L_k||_1 = <S, sign(sin Nx)>",
            claims=("k times L1 norm bounded", "tail coefficients", "duality identity",
                    "sign alternation", "literal construction k times L1"),
            columns=("k", "construction", "sign_changes"),
            ks=[2, 4, 8, 16, 32, 64, 128], c0=math.pi / 2, literal_k_max=64)
def lemma_conv(params, rec):
    """Kernel with prescribed tail coefficients and its L1 certificate."""
    for k in params["ks"]:
        kern = I.KernelS(k)
        rep = I.duality_identity_check(k)
        tail = kern.tail_coefficients()
        err = max(abs(v - 1 / m) for m, v in tail.items())
        extra = dict(k=k, construction="dual", sign_changes=rep.sign_changes)
        rec.claim("k times L1 norm bounded", k * 2 * rep.residual_l1, params["c0"], 1e-9, "le", **extra)
        rec.claim("tail coefficients", err, 0.0, 1e-10, "abs", **extra)
        rec.claim("duality identity", rep.discrepancy, 0.0, 1e-8, "abs", **extra)
        rec.claim("sign alternation", rep.sign_pattern_ok and rep.sign_changes == rep.expected_sign_changes,
                  True, 0.0, "true", **extra)
        if k <= params["literal_k_max"]:
            lit = I.KernelS(k, "literal")
            rec.info("literal construction k times L1", k * lit.l1_norm(), k=k, construction="literal")


@experiment("kernel-integration", "interp",
            "convolution with s_k multiplies e^{imx} by 1/m for |m| >= k",
            claims=("convolution divides tail modes",), columns=("k", "m"),
            ks=[4, 16, 64], m_factors=[1, 2, 3])
def kernel_integration(params, rec):
    """Tail modes recovered through the kernel."""
    for k in params["ks"]:
        for f in params["m_factors"]:
            m = f * k
            rec.claim("convolution divides tail modes", I.integration_via_kernel_check(k, m), 0.0,
                      1e-10, "abs", k=k, m=m)


# ------------------------------------------------------------------ planar

def _alphas_ok(p):
    return "alphas must lie in (0, 1)" if any(not 0 < a < 1 for a in p["alphas"]) else None


@experiment("lens-coefficients", "planar",
            "|c_n| ~ n^{-1-alpha} for the lens map; corner angle 2 arcsin(1/r)",
            claims=("lens coefficient slope", "lens boundary membership", "lens corner angle"),
            columns=("alpha", "n_lo", "n_hi", "r_squared"),
            alphas=[1 / 3, 1 / 2, 2 / 3], n_lo=64, n_hi=4096, validate=_alphas_ok)
def lens_coefficients(params, rec):
    """Closed-form lens map: coefficient decay and geometry."""
    for a in params["alphas"]:
        lens = PL.Lens.from_alpha(a)
        s = PL.lens_series(lens.r, params["n_hi"])
        fit = PL.coeff_asymptotics_check(s, a, params["n_lo"], params["n_hi"])
        extra = dict(alpha=a, n_lo=params["n_lo"], n_hi=params["n_hi"])
        rec.claim("lens coefficient slope", fit.slope, -(1 + a), 0.05, "abs", r_squared=fit.r_squared, **extra)
        psi = 2 * np.pi * (np.arange(512) + 0.5) / 512
        w = PL.lens_boundary(lens.r, psi)
        dev = np.minimum(np.abs(np.abs(w - 1j * lens.h) - lens.r), np.abs(np.abs(w + 1j * lens.h) - lens.r))
        rec.claim("lens boundary membership", float(dev.max()), 0.0, 1e-10, "abs", **extra)
        rec.claim("lens corner angle", lens.corner_angle(), math.pi * a, 1e-10, "abs", **extra)


@experiment("twogone-map", "planar",
            "conformal map onto O_alpha: lens oracle reproduced, |c_n| ~ n^{-1-alpha}",
            claims=("lens oracle reproduced", "two-gone coefficient slope", "odd symmetry",
                    "identity at alpha one", "boundary correspondence residual"),
            columns=("alpha", "M", "iterations", "n_lo", "n_hi"),
            alphas=[1 / 3, 1 / 2, 2 / 3], oracle_M=4096, M=65536, n_lo=64, n_hi=4096,
            validate=_alphas_ok)
def twogone_map(params, rec):
    """Boundary-correspondence solver on the two-gone and on the lens."""
    for a in params["alphas"]:
        lens = PL.Lens.from_alpha(a)
        M0 = params["oracle_M"]
        cm = PL.twogone_map(a, M0, domain=lens)
        ref = PL.lens_series(lens.r, M0 // 4 - 1).coeffs
        err = float(np.abs(cm.series.coeffs - ref).max())
        rec.claim("lens oracle reproduced", err, 0.0, 1e-4, "le", alpha=a, M=M0, iterations=cm.iterations)
        M = params["M"]
        tg = PL.twogone_map(a, M)
        fit = PL.coeff_asymptotics_check(tg.series, a, params["n_lo"], params["n_hi"])
        extra = dict(alpha=a, M=M, iterations=tg.iterations, n_lo=params["n_lo"], n_hi=params["n_hi"])
        rec.claim("two-gone coefficient slope", fit.slope, -(1 + a), 0.1, "abs", **extra)
        rec.claim("odd symmetry", max(tg.even_residual, tg.imag_residual), 0.0, 1e-12, "abs", **extra)
        rec.info("boundary correspondence residual", tg.boundary_residual(PL.TwoGone(a).log_radius), **extra)
    one = PL.twogone_map(1.0, 256)
    c = one.series.coeffs.copy()
    c[1] -= 1
    rec.claim("identity at alpha one", float(np.abs(c).max()), 0.0, 1e-10, "abs", alpha=1.0, M=256,
              iterations=one.iterations)


@experiment("coefficient-integral", "planar",
            "|c_m| <~ int_0^2 (1+ay)^{-m} y^{alpha-1} dy <~ m^{-alpha}",
            claims=("quadrature matches incomplete beta", "scaled integral bounded", "large-m limit"),
            columns=("alpha", "m", "scaled"),
            alphas=[1 / 3, 1 / 2, 2 / 3], ms=[8, 16, 32, 64, 128, 256, 512, 1024, 2048], a=1.0,
            validate=_alphas_ok)
def coefficient_integral(params, rec):
    """Coefficient bound integral across m."""
    for al in params["alphas"]:
        scaled = []
        for m in params["ms"]:
            q = PL.coeff_bound_integral(al, m, params["a"])
            ex = PL.coeff_bound_integral_exact(al, m, params["a"])
            scaled.append(q * m**al)
            rec.claim("quadrature matches incomplete beta", q, ex, 1e-10, "rel", alpha=al, m=m,
                      scaled=q * m**al)
        rec.claim("scaled integral bounded", _spread(scaled), 5.0, 0.0, "le", alpha=al)
        limit = math.gamma(al) * params["a"] ** (-al)
        rec.claim("large-m limit", scaled[-1], limit, 1e-2, "rel", alpha=al, m=params["ms"][-1])


@experiment("paraproduct", "planar",
            "||T_phi g|| <= sum_m m|c_m|/(d+m-1) ||g|| <= C_alpha d^{-alpha} ||g||",
            claims=("scaled tail bound bounded", "monomial spot check", "monomial integration"),
            columns=("alpha", "series", "d", "scaled"),
            alphas=[1 / 3, 1 / 2, 2 / 3], ds=[2, 4, 8, 16, 32, 64, 128, 256, 512, 1024, 2048],
            spot_ds=[2, 4, 8, 16, 64], length=131072, validate=_alphas_ok)
def paraproduct(params, rec):
    """Analytic paraproduct bound chain."""
    N = params["length"]
    if N < 4 * max(params["ds"]):
        raise ValueError("series length must be at least 4 d_max")
    for a in params["alphas"]:
        lens = PL.Lens.from_alpha(a)
        series = {"power-law": PL.power_law_series(a, N),
                  "lens": PL.lens_series(lens.r, N, M=16 * N)}
        for name, s in series.items():
            scaled = []
            for d in params["ds"]:
                v = d**a * PL.paraproduct_tail_bound(s, d).value
                scaled.append(v)
            rec.claim("scaled tail bound bounded", _spread(scaled), 5.0, 0.0, "le", alpha=a, series=name,
                      scaled=max(scaled))
        short = series["lens"].truncate(4096)
        for d in params["spot_ds"]:
            sup, bound = PL.monomial_spot_check(short, d)
            rec.claim("monomial spot check", sup, bound, 0.01, "rel", alpha=a, series="lens", d=d)
    ident = PL.PowerSeries(np.array([0.0, 1.0]))
    worst = 0.0
    for m in range(0, 12):
        g = np.zeros(m + 1)
        g[m] = 1
        out = PL.paraproduct_apply(PL.PowerSeries(g), ident).coeffs
        want = np.zeros(m + 2)
        want[m + 1] = 1 / (m + 1)
        worst = max(worst, float(np.abs(out[:m + 2] - want).max()), float(np.abs(out[m + 2:]).max(initial=0)))
    rec.claim("monomial integration", worst, 0.0, 1e-15, "abs", alpha=1.0, series="identity")


@experiment("green-segment", "planar",
            "Green's function of C minus [-1+1/d^2, 1-1/d^2]: G_d(1) ~ 1/d, d G_d(1) -> sqrt 2",
            claims=("d times G at one tends to sqrt 2", "value at c = 0.99", "capacity expansion",
                    "boundary value", "mean value property"),
            columns=("d", "c", "dG"), ds=[4, 8, 16, 32, 64, 128, 256, 512])
def green_segment(params, rec):
    """Segment Green's function near the endpoint."""
    for d in params["ds"]:
        c = 1 - 1 / d**2
        g = float(PL.green_segment(c)(1.0))
        passed_kind = "rel" if d == params["ds"][-1] else "info"
        if passed_kind == "rel":
            rec.claim("d times G at one tends to sqrt 2", d * g, math.sqrt(2), 0.01, "rel", d=d, c=c, dG=d * g)
        else:
            rec.info("d times G at one tends to sqrt 2", d * g, d=d, c=c, dG=d * g)
    G = PL.green_segment(0.99)
    rec.claim("value at c = 0.99", float(G(1.0)), 0.142015, 1e-6, "abs", d=10, c=0.99)
    z = 1e7
    rec.claim("capacity expansion", float(G(z)) - math.log(z), math.log(2 / 0.99), 1e-10, "abs", c=0.99)
    rec.claim("boundary value", float(G(0.99 * (1 + 1e-14))), 0.0, 1e-6, "abs", c=0.99)
    mv = max(PL.mean_value_discrepancy(G, z0, 0.05) for z0 in (1.2, 0.5 + 0.3j, -1.1 + 0.2j))
    rec.claim("mean value property", mv, 0.0, 1e-8, "abs", c=0.99)


@experiment("green-lens", "planar",
            "G_{beta,r}(1) ~ d^{-beta pi/(2pi - 2 arcsin(2 sqrt(p-1)/p))}; beta = 2 - (2/pi) arcsin(2 sqrt(p-1)/p)",
            claims=("exponent fit", "d times G bounded", "boundary value", "mean value property"),
            columns=("p", "beta", "r_squared"),
            ps=[1.5, 3.0, 4.0, 8.0], betas=[1.25, 1.5, 1.75], ds=[4, 8, 16, 32, 64, 128, 256, 512])
def green_lens(params, rec):
    """Green's function of the exterior of a scaled lens."""
    for p in params["ps"]:
        for beta in params["betas"] + [PL.beta_from_p(p)]:
            sweep = PL.green_lens_sweep(p, beta, params["ds"])
            fit = fit_exponent(sweep)
            rec.claim("exponent fit", fit.slope, PL.green_exponent(p, beta), 0.02, "rel",
                      p=p, beta=beta, r_squared=fit.r_squared)
        beta = PL.beta_from_p(p)
        sweep = PL.green_lens_sweep(p, beta, params["ds"])
        rec.claim("d times G bounded", _spread(d * g for d, g in sweep), 5.0, 0.0, "le", p=p, beta=beta)
        r = PL.r_from_alpha(PL.alpha_from_p(p))
        s = 1 - 8.0 ** (-beta)
        G = PL.green_lens_exterior(r, s)
        lens = PL.Lens(r, s)
        th = np.linspace(-np.pi, np.pi, 257)[:-1] + 1e-3
        bd = lens.boundary(th) * (1 + 1e-15)
        rec.claim("boundary value", float(np.abs(G(bd)).max()), 0.0, 1e-10, "abs", p=p, beta=beta)
        mv = max(PL.mean_value_discrepancy(G, z0, 0.05) for z0 in (1.3, 0.2 + 1.5j, -2.0 - 0.4j))
        rec.claim("mean value property", mv, 0.0, 1e-8, "abs", p=p, beta=beta)


@experiment("curve-check", "planar",
            "e^{-2t} + 2e^{-t}(a/pi) sin(pi t/a) < 1 for small t; margin ~ (2c + 1/3) t^3",
            claims=("margin positive", "cubic coefficient", "arc on two-gone boundary", "arc inside lens"),
            columns=("alpha", "t_max"), alphas=[1 / 3, 1 / 2, 2 / 3], validate=_alphas_ok)
def curve_check(params, rec):
    """Arc Gamma(a/2) of the two-gone boundary against the lens circle."""
    for a in params["alphas"]:
        cc = PL.addendum2_curve_check(a)
        rec.claim("margin positive", cc.worst_margin, 0.0, 0.0, "gt", alpha=a, t_max=cc.t_max)
        rec.claim("cubic coefficient", cc.cubic_fit, cc.cubic_predicted, 0.05, "rel", alpha=a)
        rec.claim("arc on two-gone boundary", PL.curve_on_twogone_boundary(a), 0.0, 1e-12, "abs", alpha=a)
        inside, slack = PL.curve_inside_lens(a)
        rec.claim("arc inside lens", inside, True, 0.0, "true", alpha=a)


# ------------------------------------------------------------------ clifford

@experiment("clifford-identities", "clifford",
            "QP = -PQ; R(theta) Q_A = prod (Q_j cos + P_j sin); ||T_f||_{S_p} = ||f||_p; "
            "d/dtheta A_f = +-R(theta)(sum P_j d_j T_f)",
            claims=("anticommutation", "rotation product formula", "rotation group law", "rotation isometry",
                    "sign conjugation", "Schatten equals Lebesgue", "Hadamard diagonalization",
                    "commutative subalgebra", "derivative identity", "derivative sign",
                    "finite difference cross-check"),
            columns=("n", "theta", "p"), n_max=5, functions=3, thetas=[0.0, 0.3, 1.1])
def clifford_identities(params, rec):
    """Exact matrix identities of the noncommutative construction."""
    rng = _rng(params)
    for n in range(1, params["n_max"] + 1):
        worst = 0.0
        for j in range(n):
            Qj, Pj = C.site_op(n, j, "Q"), C.site_op(n, j, "P")
            worst = max(worst, float(np.abs(Qj @ Pj + Pj @ Qj).max()),
                        float(np.abs(Qj @ Qj - np.eye(1 << n)).max()), float(np.abs(Pj @ Pj - np.eye(1 << n)).max()))
        rec.claim("anticommutation", worst, 0.0, 1e-10, "abs", n=n)
        for th in params["thetas"]:
            err = max(float(np.abs(C.rotate(C.q_word(n, A), th) - C.rotated_word(n, A, th)).max())
                      for A in range(1 << n))
            rec.claim("rotation product formula", err, 0.0, 1e-10, "abs", n=n, theta=th)
        X = rng.standard_normal((1 << n, 1 << n)) + 1j * rng.standard_normal((1 << n, 1 << n))
        rec.claim("rotation group law", float(np.abs(C.rotate(C.rotate(X, 0.4), 0.9) - C.rotate(X, 1.3)).max()),
                  0.0, 1e-12, "abs", n=n)
        for p in (1.0, 3.0, math.inf):
            rec.claim("rotation isometry", abs(C.schatten_norm(C.rotate(X, 0.7), p) - C.schatten_norm(X, p)),
                      0.0, 1e-10, "abs", n=n, p=p)
        Hn = C.hadamard(n)
        for _ in range(params["functions"]):
            f = CubeFunction.random(n, rng)
            g = CubeFunction.random(n, rng)
            T = C.lift(f)
            rec.claim("Hadamard diagonalization", float(np.abs(Hn @ T @ Hn - np.diag(f.scalar)).max()),
                      0.0, 1e-10, "abs", n=n)
            Tg = C.lift(g)
            rec.claim("commutative subalgebra", float(np.abs(T @ Tg - Tg @ T).max()), 0.0, 1e-10, "abs", n=n)
            for p in (1.0, 1.5, 2.0, 3.0, math.inf):
                rec.claim("Schatten equals Lebesgue", abs(C.schatten_norm(T, p) - lp_norm(f, p)), 0.0, 1e-10,
                          "abs", n=n, p=p)
            rec.claim("sign conjugation", max(C.sign_conjugation_check(f, k) for k in range(n)), 0.0, 1e-10,
                      "abs", n=n)
            for th in params["thetas"]:
                dc = C.derivative_identity_check(f, th)
                rec.claim("derivative identity", dc.discrepancy, 0.0, 1e-10, "abs", n=n, theta=th)
                rec.claim("derivative sign", dc.sign, 1.0, 0.0, "abs", n=n, theta=th)
                rec.claim("finite difference cross-check", dc.fd_discrepancy, 0.0, 1e-6, "abs", n=n, theta=th)


@experiment("fejer-bernstein", "clifford",
            "||d/dtheta A_f(theta)||_{S_p} <= 2d ||A_f(theta)||_{S_p}",
            claims=("matrix Bernstein ratio",), columns=("n", "d", "p"),
            n=4, ds=[1, 2, 3, 4], ps=[1.0, 2.0, math.inf], functions=5, grid=16)
def fejer_bernstein(params, rec):
    """Bernstein inequality for the rotated matrix trigonometric polynomial."""
    rng = _rng(params)
    th = np.linspace(0, 2 * np.pi, params["grid"], endpoint=False)
    n = params["n"]
    for d in params["ds"]:
        fs = [CubeFunction.random(n, rng, band=(0, d)) for _ in range(params["functions"])]
        for p in params["ps"]:
            w = max(C.fejer_bernstein_check(f, d, p, th) for f in fs)
            rec.claim("matrix Bernstein ratio", w, 1.0, 0.0, "le", n=n, d=d, p=p)


@experiment("nc-khintchine", "clifford",
            "E||sum eps_j P_j d_j T_f||_{S_p} ~ 2||(sum (d_j T_f)^* d_j T_f)^{1/2}||_{S_p}, 2 <= p <= inf",
            claims=("sign invariance", "sides ratio"), columns=("n", "p"),
            n=4, ps=[2.0, 4.0, math.inf], functions=10)
def nc_khintchine(params, rec):
    """Both sides of the square-function comparison."""
    rng = _rng(params)
    n = params["n"]
    for p in params["ps"]:
        ratios = []
        inv = 0.0
        for _ in range(params["functions"]):
            f = CubeFunction.random(n, rng)
            avg, sq, ratio = C.nc_khintchine_sides(f, p)
            ratios.append(ratio)
            inv = max(inv, abs(avg - C.schatten_norm(C.nc_gradient_sum(f), p)))
        rec.claim("sign invariance", inv, 0.0, 1e-10, "abs", n=n, p=p)
        rec.info("sides ratio", min(ratios), n=n, p=p)
        rec.info("sides ratio", max(ratios), n=n, p=p)


@experiment("ncbm-table", "clifford",
            "|| |grad f| ||_p <= C_p d ||f||_p for p >= 2",
            claims=("observed constant", "p = 2 constant", "square function lift"),
            columns=("n", "d", "p", "trials"),
            n=5, ds=[1, 2, 3, 4], ps=[2.0, 4.0, 8.0], trials=40)
def ncbm_table(params, rec):
    """Observed Bernstein-Markov constants with the matrix square function."""
    n = params["n"]
    for d in params["ds"]:
        for p in params["ps"]:
            row = C.ncbm_check(n, d, p, params["trials"], seed=params["seed"] + 1000 * d)
            extra = dict(n=n, d=d, p=p, trials=params["trials"])
            rec.info("observed constant", row.max_constant, **extra)
            rec.claim("square function lift", row.max_lift_discrepancy, 0.0, 1e-10, "abs", **extra)
            if p == 2:
                rec.claim("p = 2 constant", row.max_constant, 1 / math.sqrt(d), 1e-12, "le", **extra)


@experiment("diag-projection", "clifford",
            "Diag is a contraction on S_p; the Q-word projection fixes T_f",
            claims=("diagonal contraction", "projection fixes lifts", "projection idempotent"),
            columns=("n", "p"), n_max=4, trials=5)
def diag_projection(params, rec):
    """Diagonal truncation and the projection onto Q-words."""
    rng = _rng(params)
    for n in range(1, params["n_max"] + 1):
        for p in (1.0, 2.0, 3.0, math.inf):
            ok = all(C.diag_contraction_check(rng.standard_normal((1 << n, 1 << n))
                                              + 1j * rng.standard_normal((1 << n, 1 << n)), p)
                     for _ in range(params["trials"]))
            rec.claim("diagonal contraction", ok, True, 0.0, "true", n=n, p=p)
        f = CubeFunction.random(n, rng)
        T = C.lift(f)
        rec.claim("projection fixes lifts", float(np.abs(C.project_q(T) - T).max()), 0.0, 1e-12, "abs", n=n)
        X = rng.standard_normal((1 << n, 1 << n)) + 1j * rng.standard_normal((1 << n, 1 << n))
        PX = C.project_q(X)
        rec.claim("projection idempotent", float(np.abs(C.project_q(PX) - PX).max()), 0.0, 1e-12, "abs", n=n)


# ------------------------------------------------------------------ extremal

@experiment("extremal-oracles", "extremal",
            "p = 2: min over T_d of ||Delta f||/||f|| = d+1, max over P_d of || |grad f| ||/||f|| = sqrt d",
            claims=("tail minimum", "gradient maximum"), columns=("n", "d", "restarts", "iterations"),
            ns=[6, 10], ds=[1, 2, 3, 4, 5, 6], restarts=4, iters=500)
def extremal_oracles(params, rec):
    """Multi-start search against closed-form p = 2 constants."""
    for n in params["ns"]:
        for d in params["ds"]:
            if d >= n:
                continue
            for claim, num, band, direction in (("tail minimum", "laplacian", (d + 1, n), "minimize"),
                                                 ("gradient maximum", "gradient", (0, d), "maximize")):
                pr = E.RatioProblem(num, 2, band, n, direction)
                est = E.optimize_ratio(pr, seeds=params["restarts"], iters=params["iters"], seed=params["seed"])
                rec.claim(claim, est.value, E.exact_p2_constant(pr), 1e-3, "rel", n=n, d=d,
                          restarts=est.restarts, iterations=est.iterations)


@experiment("flp-interpolation", "extremal",
            "||Delta^beta f|| <= 4 ||Delta f||^beta ||f||^{1-beta}",
            claims=("interpolation inequality",), columns=("n", "beta", "p", "functions", "ratio"),
            ns=[4, 6, 8], betas=[0.25, 0.5, 0.75], ps=[1.5, 2.0, 4.0, 8.0], functions=20)
def flp_interpolation(params, rec):
    """Fractional Laplacian interpolation over random functions."""
    rng = _rng(params)
    for n in params["ns"]:
        fs = [CubeFunction.random(n, rng, band=(1, n)) for _ in range(params["functions"])]
        for beta in params["betas"]:
            for p in params["ps"]:
                worst = max(E.flp_interpolation_check(f, beta, p)[1] for f in fs)
                rec.claim("interpolation inequality", worst, 1.0, 1e-12, "le", n=n, beta=beta, p=p,
                          functions=len(fs), ratio=worst)


def _consistency(params, rec, theorem, numerator, direction, tail):
    for p in params["ps"]:
        alpha = PL.alpha_from_p(p)
        rows, fit = E.consistency_table(theorem, numerator, params["n"], params["ds"], p, direction,
                                        tail=tail, alpha=alpha, seed=params["seed"],
                                        seeds=params["restarts"], iters=params["iters"])
        for r in rows:
            rec.info("optimized ratio", r.value, p=p, d=r.d, predicted_exponent=r.predicted_exponent,
                     fitted_C=r.fitted_C)
        rec.info("fitted exponent", fit.slope, p=p, predicted_exponent=rows[0].predicted_exponent,
                 fitted_C=fit.constant)


@experiment("consistency-rxf", "extremal",
            "|| |grad f| ||_p <= C d^{1 - (1/pi) arcsin(2 sqrt(p-1)/p)} ||f||_p on P_d (p >= 2)",
            claims=("optimized ratio", "fitted exponent"),
            columns=("p", "d", "predicted_exponent", "fitted_C"),
            n=8, ds=[1, 2, 3, 4, 5], ps=[3.0, 4.0], restarts=3, iters=300)
def consistency_rxf(params, rec):
    """Gradient ratios on P_d next to the predicted power of d (sharpness not asserted)."""
    _consistency(params, rec, "RXf", "gradient", "maximize", False)


@experiment("consistency-beta", "extremal",
            "||Delta f||_p <= C d^{2 - (2/pi) arcsin(2 sqrt(p-1)/p)} ||f||_p on P_d",
            claims=("optimized ratio", "fitted exponent"),
            columns=("p", "d", "predicted_exponent", "fitted_C"),
            n=8, ds=[1, 2, 3, 4, 5], ps=[3.0, 4.0], restarts=3, iters=300)
def consistency_beta(params, rec):
    """Laplacian ratios on P_d next to the predicted power of d (sharpness not asserted)."""
    _consistency(params, rec, "beta", "laplacian", "maximize", False)


@experiment("consistency-kxal", "extremal",
            "||Delta f||_p >= c d^alpha ||f||_p on T_d",
            claims=("optimized ratio", "fitted exponent"),
            columns=("p", "d", "predicted_exponent", "fitted_C"),
            n=8, ds=[1, 2, 3, 4, 5], ps=[3.0, 4.0], restarts=3, iters=300)
def consistency_kxal(params, rec):
    """Laplacian ratios on tail spaces next to d^alpha (sharpness not asserted)."""
    _consistency(params, rec, "KXal", "laplacian", "minimize", True)


@experiment("riesz-comparison", "extremal",
            "||Delta^{1/2} f||_p versus || |grad f| ||_p",
            claims=("ratio range",), columns=("n", "p", "side"),
            ns=[4, 6, 8], ps=[1.5, 2.0, 4.0, 8.0], functions=20)
def riesz_comparison(params, rec):
    """Two-sided comparison of the square-root Laplacian and the gradient."""
    rng = _rng(params)
    for n in params["ns"]:
        fs = [CubeFunction.random(n, rng, band=(1, n)) for _ in range(params["functions"])]
        for p in params["ps"]:
            rs = [E.riesz_comparison(f, p) for f in fs]
            rec.info("ratio range", max(r[0] for r in rs), n=n, p=p, side="sqrt-laplacian over gradient")
            rec.info("ratio range", max(r[1] for r in rs), n=n, p=p, side="gradient over sqrt-laplacian")
