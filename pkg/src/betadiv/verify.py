"""Verification suites: every identity or limit between two independently
computable quantities becomes a named check with a measured discrepancy and
a tolerance.

Probes are falsifiers. A passing probe is evidence, never proof.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import mpmath
import numpy as np
from scipy import special

from .betapower import Params, density_f, g_prime_over_g, laplace_phi, laplace_phi_prime, mellin_moment
from .classify import classify
from .levy import (
    _exp_m1_plus_lin,
    gamma_drift_c,
    gamma_limit_exponent,
    gamma_spectral_m,
    is_integer,
    killing_rate,
    psi_exact,
    psi_quadrature,
    psi_rescaled,
    rho,
)
from .sim import SimConfig, ks_two_sample, make_rng, sample_direct
from .specfun import QuadratureConfig, alternating_fd_probe, integrate_semiinf

__all__ = [
    "Case",
    "VerificationReport",
    "VerifyConfig",
    "verify_psi",
    "verify_symmetry",
    "verify_malmsten",
    "verify_limits",
    "stieltjes_sign_scan",
    "thorin_mass_probe",
    "monotonicity_probes",
    "cm_probe",
    "hcm_probe",
    "kernel_probe",
    "run_suite",
    "SUITES",
    "PSI_GRID",
    "SYMMETRY_PAIRS",
    "HCM_MEMBERS",
    "HCM_WITNESSES",
    "STIELTJES_WITNESSES",
    "PROBE_TRIPLES",
    "KERNEL_B",
]

EULER_GAMMA = 0.57721566490153286061


@dataclass(frozen=True)
class Case:
    label: str
    discrepancy: float
    tolerance: float
    detail: dict = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return bool(self.discrepancy <= self.tolerance)

    def to_dict(self) -> dict:
        out = {"label": self.label, "discrepancy": _finite_or_none(self.discrepancy),
               "tolerance": _finite_or_none(self.tolerance), "passed": self.passed}
        if self.detail:
            out["detail"] = {k: _jsonable(v) for k, v in self.detail.items()}
        return out


def _finite_or_none(v):
    v = float(v)
    return v if math.isfinite(v) else None


def _jsonable(v):
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return _finite_or_none(v)
    return v


@dataclass
class VerificationReport:
    suite: str
    cases: list[Case] = field(default_factory=list)
    params_used: list[Params] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        # an empty suite checks nothing and must not count as a pass
        return bool(self.cases) and all(c.passed for c in self.cases)

    def add(self, label: str, discrepancy: float, tolerance: float, p: Optional[Params] = None,
            **detail) -> Case:
        case = Case(label, float(discrepancy), float(tolerance), detail)
        self.cases.append(case)
        if p is not None and p not in self.params_used:
            self.params_used.append(p)
        return case

    def failures(self) -> list[Case]:
        return [c for c in self.cases if not c.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "cases": [c.to_dict() for c in self.cases],
            "params": [p.as_dict() for p in self.params_used],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


@dataclass(frozen=True)
class VerifyConfig:
    """Sample sizes and seeds of the Monte-Carlo limit checks."""

    n_samples: int = 100_000
    seed: int = 20240601


def _grid_params(triples: Iterable[Sequence[float]]) -> list[Params]:
    return [t if isinstance(t, Params) else Params(*t) for t in triples]


def _label(p: Params) -> str:
    return f"(a={p.a:g}, b={p.b:g}, s={p.s:g})"


# 30 triples with b ^ s <= 1
PSI_GRID = tuple(
    (a, b, s)
    for a, b, s in [
        (1, 1, 1), (0.7, 2, 0.4), (1, 0.5, 0.5), (0.3, 1.5, 0.5), (2, 3, 0.7),
        (0.5, 0.5, 2), (1, 0.5, 3), (0.2, 0.3, 0.4), (3, 0.8, 5), (0.5, 3, 0.7),
        (1, 2, 0.5), (1, 2.5, 0.5), (0.1, 0.9, 1.7), (4, 0.6, 0.6), (0.3, 5, 0.2),
        (1.5, 1, 2.5), (0.6, 0.25, 1.25), (2.5, 4, 1), (0.05, 0.5, 0.5), (1, 10, 0.3),
        (0.8, 0.95, 0.95), (2, 0.1, 8), (0.4, 1, 0.4), (1, 1.5, 1), (3, 7, 0.9),
        (0.25, 0.75, 1.5), (1, 0.3, 10), (5, 2, 0.5), (0.9, 0.6, 3.3), (0.15, 2.2, 0.85),
    ]
)
PSI_U = (0.25, 1.0, 4.0)


def verify_psi(triples: Iterable = PSI_GRID, us: Sequence[float] = PSI_U,
               tol: float = 1e-8) -> VerificationReport:
    """psi_exact against psi_quadrature (relative), and the killing rate
    against 1 - int rho."""
    rep = VerificationReport("psi")
    for p in _grid_params(triples):
        if min(p.b, p.s) > 1:
            raise ValueError(f"{p} is outside b ^ s <= 1")
        for u in us:
            ex = psi_exact(p, u)
            qu = psi_quadrature(p, u)
            disc = abs(ex - qu) / abs(ex) if ex != 0 else abs(qu)
            rep.add(f"psi {_label(p)} u={u:g}", disc, tol, p, exact=ex, quadrature=qu)
        kr = killing_rate(p)
        mass = integrate_semiinf(lambda x: rho(p, x), QuadratureConfig(1e-15, 1e-13, 12))
        rep.add(f"killing rate {_label(p)}", abs(kr - (1.0 - mass)), tol, p,
                gamma_ratio=kr, one_minus_integral=1.0 - mass)
    return rep


SYMMETRY_PAIRS = (
    (1, 0.5, 2), (0.3, 0.7, 1.3), (1, 2, 3), (1, 2.5, 3), (0.5, 1, 4),
    (2, 0.4, 0.9), (0.7, 1.5, 2.5), (1, 3, 0.5), (0.2, 0.25, 5), (1.5, 1.2, 3.7),
)
SYMMETRY_X = (0.0, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 25.0)


def verify_symmetry(triples: Iterable = SYMMETRY_PAIRS, xs: Sequence[float] = SYMMETRY_X,
                    tol: float = 1e-10) -> VerificationReport:
    """|rho_{a,b,s} - rho_{a,s,b}| <= tol (1 + |rho|), both sides evaluated
    as written, without the conditioning swap."""
    rep = VerificationReport("symmetry")
    x = np.asarray(xs, dtype=float)
    for p in _grid_params(triples):
        lhs = rho(p, x, reorder=False)
        rhs = rho(p.swapped(), x, reorder=False)
        disc = np.max(np.abs(lhs - rhs) / (1.0 + np.abs(lhs)))
        rep.add(f"rho symmetry {_label(p)}", disc, tol, p)
    return rep


MALMSTEN_GAMMA = ((1, 1), (1, 0.5), (2, 0.5), (0.5, 2), (3, 0.3))
MALMSTEN_BETA = ((1, 1), (2, 1), (0.5, 2.5), (3, 0.5))
MALMSTEN_LAMBDA = (0.5, 1.0, 2.0, 5.0)
DIGAMMA_A = (0.5, 1.0, 2.0, 3.7)


def _gamma_side_integral(a: float, s: float, lam: float) -> float:
    """int_0^inf (1 - e^{-lam x} - lam x) m_{a,s}(x) / x dx (negative)."""
    return -integrate_semiinf(lambda x: _exp_m1_plus_lin(lam * x) * gamma_spectral_m(a, s, x) / x)


def _beta_side_integral(a: float, b: float, lam: float) -> float:
    """int_0^inf (1 - e^{-lam x})(e^{-a x} - e^{-(a+b) x}) / (x (1 - e^{-x})) dx."""

    def f(x):
        return (-np.expm1(-lam * x) * np.exp(-a * x) * -np.expm1(-b * x)
                / (x * -np.expm1(-x)))

    return integrate_semiinf(f)


def verify_malmsten(gamma_grid=MALMSTEN_GAMMA, beta_grid=MALMSTEN_BETA,
                    lambdas: Sequence[float] = MALMSTEN_LAMBDA, tol: float = 1e-6,
                    digamma_a: Sequence[float] = DIGAMMA_A) -> VerificationReport:
    """Exponential-integral forms of ln Gamma(a + s lam) - ln Gamma(a) and of
    ln E[beta^lam], plus the drift c_{a,1} against the digamma function."""
    rep = VerificationReport("malmsten")
    for a, s in gamma_grid:
        c = gamma_drift_c(a, s)
        for lam in lambdas:
            lhs = math.lgamma(a + s * lam) - math.lgamma(a)
            rhs = c * lam - _gamma_side_integral(a, s, lam)
            rep.add(f"gamma power a={a:g} s={s:g} lam={lam:g}", abs(lhs - rhs), tol, lhs=lhs, rhs=rhs)
    for a, b in beta_grid:
        p = Params(a, b, 1.0)
        for lam in lambdas:
            lhs = math.log(mellin_moment(p, lam))
            rhs = -_beta_side_integral(a, b, lam)
            rep.add(f"beta log a={a:g} b={b:g} lam={lam:g}", abs(lhs - rhs), tol, lhs=lhs, rhs=rhs)
    for a in digamma_a:
        c = gamma_drift_c(a, 1.0)
        rep.add(f"drift c(a={a:g}, s=1) vs digamma", abs(c - special.digamma(a)), 1e-8, value=c)
    c11 = gamma_drift_c(1.0, 1.0)
    rep.add("drift c(1, 1) vs -Euler gamma", abs(c11 + EULER_GAMMA), 1e-8, value=c11)
    return rep


def _trend_cases(rep: VerificationReport, name: str, grid, errors, endpoint_tol: float):
    errors = [abs(e) for e in errors]
    increases = sum(1 for e0, e1 in zip(errors, errors[1:]) if not e1 < e0)
    rep.add(f"{name}: error decreasing", increases, 0, grid=list(grid), errors=errors)
    rep.add(f"{name}: endpoint error", errors[-1], endpoint_tol, grid=list(grid), errors=errors)


def verify_limits(config: VerifyConfig = VerifyConfig(), b_grid=(10.0, 100.0, 1000.0),
                  endpoint_tol: float = 0.02) -> VerificationReport:
    """Small-s log limit, large-b Gamma limit, and the two large-b limits of
    the rescaled exponent."""
    rep = VerificationReport("limits")
    n, seed = config.n_samples, config.seed

    # s^-1 (beta^-s - 1) -> -log beta as s -> 0
    s = 1e-3
    p = Params(1.0, 1.0, s)
    x = (sample_direct(p, SimConfig(n, seed)).values - 1.0) / s
    y = np.log(sample_direct(Params(1.0, 1.0, 1.0), SimConfig(n, seed + 1)).values)
    ks = ks_two_sample(x, y)
    rep.add("log limit s=1e-3 (a=1, b=1): KS", ks.statistic, ks.critical_001, p)

    # b^-s beta^-s -> gamma_a^-s as b -> inf
    a, s, b = 2.0, 0.5, 1000.0
    p = Params(a, b, s)
    x = b ** (-s) * sample_direct(p, SimConfig(n, seed + 2)).values
    y = make_rng(seed + 3, 0).standard_gamma(a, n) ** (-s)
    ks = ks_two_sample(x, y)
    rep.add("gamma limit b=1e3 (a=2, s=0.5): KS", ks.statistic, ks.critical_001, p)

    # s = 1: rescaled exponent -> lam (a + lam)
    a, lam = 1.0, 1.0
    target = lam * (a + lam)
    errs = [psi_rescaled(Params(a, b, 1.0), lam, "quadrature") / target - 1.0 for b in b_grid]
    _trend_cases(rep, "exponent limit s=1 (a=1, lam=1)", b_grid, errs, endpoint_tol)

    # s < 1: rescaled exponent -> integral form of the limit exponent
    a, s, lam = 1.0, 0.5, 1.0
    target = gamma_limit_exponent(a, s, lam)
    errs = [psi_rescaled(Params(a, b, s), lam, "quadrature") / target - 1.0 for b in b_grid]
    _trend_cases(rep, "exponent limit s=0.5 (a=1, lam=1)", b_grid, errs, endpoint_tol)

    # drift identity b^s (1 - int rho) = b^s Gamma-ratio at finite b
    p = Params(1.0, 1000.0, 0.5)
    mass = integrate_semiinf(lambda x: rho(p, x), QuadratureConfig(1e-15, 1e-13, 12))
    lhs = p.b ** p.s * (1.0 - mass)
    rhs = p.b ** p.s * killing_rate(p)
    rep.add("drift identity (a=1, b=1e3, s=0.5)", abs(lhs - rhs), 1e-6, p, quadrature=lhs, gamma_ratio=rhs)
    return rep


HCM_MEMBERS = (
    (1, 2, 2), (2, 3, 1.5), (1, 0.5, 0.5), (0.1, 0.5, 0.6), (1, 1, 0.3),
    (0.5, 4, 1), (3, 0.2, 0.75), (0.3, 1.7, 5), (0.2, 0.4, 0.5), (1, 5, 1.01),
)
STIELTJES_WITNESSES = ((0.1, 2, 0.3), (1, 2, 0.5), (0.1, 0.2, 0.6), (0.5, 1.5, 0.7))


def _upper_half_plane(n_r: int = 50, n_theta: int = 50):
    r = np.geomspace(1e-3, 1e3, n_r)
    theta = np.linspace(0.0, np.pi, n_theta + 2)[1:-1]
    rr, tt = np.meshgrid(r, theta)
    return rr * np.exp(1j * tt) - 1.0


def stieltjes_sign_scan(p: Params, z_grid: Optional[np.ndarray] = None, expect_member: Optional[bool] = None,
                        member_tol: float = 1e-9, witness_level: float = 1e-6,
                        report: Optional[VerificationReport] = None) -> VerificationReport:
    """Sign of Im G'(z) on z = r e^{i theta} - 1 in the upper half-plane.

    Members must have Im G' <= ``member_tol`` everywhere; for non-members a
    point with Im G' > ``witness_level`` must be found.
    """
    rep = report if report is not None else VerificationReport("stieltjes")
    z = _upper_half_plane() if z_grid is None else np.asarray(z_grid)
    if expect_member is None:
        expect_member = classify(p).hcm_class.member
    im = (-np.asarray(g_prime_over_g(p, z))).imag
    k = int(np.nanargmax(im))
    peak = float(im.flat[k])
    where = complex(z.flat[k])
    if expect_member:
        rep.add(f"Im G' <= 0 {_label(p)}", peak, member_tol, p, max_im=peak, at=[where.real, where.imag])
    else:
        # ratio below 1 means a positive value above the witness level was found
        disc = witness_level / peak if peak > 0 else math.inf
        rep.add(f"positive Im G' found {_label(p)}", disc, 1.0, p, max_im=peak, at=[where.real, where.imag])
    return rep


def thorin_mass_probe(p: Params, lambdas: Sequence[float] = (1e2, 1e3, 1e4), first_tol: float = 0.05,
                      second_tol: float = 0.10, report: Optional[VerificationReport] = None) -> VerificationReport:
    """Large-lam behaviour of -Phi'/Phi for X = beta^{-s} - 1.

    -lam Phi'/Phi -> b, and -lam (lam Phi'/Phi + b) -> b (1 - (2a+b+s+bs)) / (2s).
    """
    rep = report if report is not None else VerificationReport("thorin")
    # Phi(lam) decays like lam^-b, so only a relative tolerance is meaningful
    cfg = QuadratureConfig(abs_tol=1e-300, rel_tol=1e-13, max_subdivisions=14)
    t = 2 * p.a + p.b + p.s + p.b * p.s
    second_target = p.b * (1.0 - t) / (2.0 * p.s)
    first, second = [], []
    for lam in lambdas:
        ratio = lam * laplace_phi_prime(p, lam, cfg) / laplace_phi(p, lam, cfg)
        first.append(-ratio)
        second.append(-lam * (ratio + p.b))
    first_err = [abs(v - p.b) / p.b for v in first]
    second_err = [abs(v - second_target) / abs(second_target) if second_target else abs(v) for v in second]
    lab = _label(p)
    increases = sum(1 for e0, e1 in zip(first_err, first_err[1:]) if not e1 < e0)
    rep.add(f"first order {lab}: error decreasing", increases, 0, p, values=first, target=p.b)
    rep.add(f"first order {lab}: relative error at lam={lambdas[-1]:g}", first_err[-1], first_tol, p)
    rep.add(f"second order {lab}: relative error at lam={lambdas[-1]:g}", second_err[-1], second_tol, p,
            values=second, target=second_target)
    return rep


# probes -------------------------------------------------------------------

_MP_DPS = 50
# normalized Hankel determinants are computed at 50 digits; values above
# -1e-30 are rounding noise (finite sums of exponentials give exact zeros)
_HANKEL_NOISE = 1e-30


def _mp_density(p: Params):
    a, b, s = (mpmath.mpf(v) for v in (p.a, p.b, p.s))
    c = mpmath.gamma(a + b) / (s * mpmath.gamma(a) * mpmath.gamma(b))

    def f(x):
        return c * (x + 1) ** ((1 - a - b) / s - 1) * mpmath.expm1(mpmath.log1p(x) / s) ** (b - 1)

    return f


def _differences(vals, order):
    return [mpmath.fsum((-1) ** j * mpmath.binomial(n, j) * vals[j] for j in range(n + 1))
            for n in range(order + 1)]


def _normalized_hankels(m) -> list:
    """det[m_{i+j+shift}] / prod of diagonal, for the sizes the available
    orders allow. Non-negative for any Hausdorff moment sequence."""
    out = []
    top = len(m) - 1
    for shift in (0, 1):
        for size in range(2, (top - shift) // 2 + 2):
            if 2 * (size - 1) + shift > top:
                continue
            mat = mpmath.matrix(size, size)
            for i in range(size):
                for j in range(size):
                    mat[i, j] = m[i + j + shift]
            diag = mpmath.fprod(m[2 * i + shift] for i in range(size))
            if diag > 0:
                out.append(mpmath.det(mat) / diag)
    return out


def _moment_probe(f, x0s, steps, order):
    """Smallest normalized alternating difference and Hankel determinant of
    f over the grid (computed at ``_MP_DPS`` digits)."""
    worst_diff, worst_hankel, where = mpmath.inf, mpmath.inf, None
    with mpmath.workdps(_MP_DPS):
        for x0 in x0s:
            for h in steps:
                x0m, hm = mpmath.mpf(x0), mpmath.mpf(h)
                vals = [f(x0m + j * hm) for j in range(order + 1)]
                m = _differences(vals, order)
                d = min(mi / m[0] for mi in m)
                if d < worst_diff:
                    worst_diff = d
                if min(m) > 0:
                    hk = _normalized_hankels(m)
                    if hk and min(hk) < worst_hankel:
                        worst_hankel, where = min(hk), (float(x0), float(h))
    return float(worst_diff), float(worst_hankel), where


def cm_probe(p: Params, xs: Optional[Sequence[float]] = None, order: int = 6) -> dict:
    """Alternating differences of density_f up to ``order`` in double precision."""
    xs = np.geomspace(1e-3, 50.0, 40) if xs is None else xs
    f = lambda x: density_f(p, x)
    bad = []
    for x0 in xs:
        signs = alternating_fd_probe(f, float(x0), max_order=order)
        if min(signs) < 0:
            bad.append((float(x0), signs.index(-1)))
    return {"violations": len(bad), "first": bad[0] if bad else None, "order": order,
            "step": "max(1e-3, 1e-2 x0)"}


def hcm_probe(p: Params, us: Sequence[float] = (0.5, 1.0, 2.0), order: int = 4,
              w_offsets: Optional[Sequence[float]] = None, steps: Optional[Sequence[float]] = None) -> dict:
    """Complete monotonicity in w = v + 1/v of h(w) = f(uv) f(u/v).

    Alternating differences up to ``order`` and the Hankel determinants they
    form, which are non-negative for any CM function.
    """
    w_offsets = np.geomspace(1e-3, 30.0, 15) if w_offsets is None else w_offsets
    steps = np.geomspace(1e-3, 5.0, 8) if steps is None else steps
    f = _mp_density(p)
    worst_diff, worst_hankel, where = mpmath.inf, mpmath.inf, None
    for u in us:
        um = mpmath.mpf(u)

        def h(w):
            v = (w + mpmath.sqrt(w * w - 4)) / 2
            return f(um * v) * f(um / v)

        d, hk, loc = _moment_probe(h, [2.0 + o for o in w_offsets], steps, order)
        worst_diff = min(worst_diff, d)
        if hk < worst_hankel:
            worst_hankel, where = hk, (float(u),) + loc
    violation = worst_diff < -_HANKEL_NOISE or worst_hankel < -_HANKEL_NOISE
    return {"violation": bool(violation), "min_difference": float(worst_diff),
            "min_hankel": float(worst_hankel), "where_u_w_h": where, "order": order}


def kernel_probe(a: float, b: float, order: int = 6, xs: Optional[Sequence[float]] = None,
                 steps: Optional[Sequence[float]] = None) -> dict:
    """Complete monotonicity of (e^{-ax} - e^{-(a+b)x}) / (1 - e^{-x})."""
    xs = np.geomspace(0.01, 10.0, 20) if xs is None else xs
    steps = np.geomspace(0.05, 5.0, 12) if steps is None else steps
    am, bm = mpmath.mpf(a), mpmath.mpf(b)

    def k(x):
        return (mpmath.exp(-am * x) - mpmath.exp(-(am + bm) * x)) / -mpmath.expm1(-x)

    d, hk, where = _moment_probe(k, xs, steps, order)
    violation = d < -_HANKEL_NOISE or hk < -_HANKEL_NOISE
    return {"violation": bool(violation), "min_difference": d, "min_hankel": hk,
            "where_x_h": where, "order": order}


# non-members on which the HCM probe is required to find a violation
HCM_WITNESSES = ((0.1, 0.2, 0.6), (0.2, 0.5, 0.2))
PROBE_TRIPLES = ((1, 0.5, 2), (1, 2, 0.5), (1, 0.5, 0.5), (2, 3, 1.5), (0.3, 1, 0.7)) + HCM_WITNESSES
KERNEL_B = (1.0, 1.5, 2.0, 2.5, 3.0)


def monotonicity_probes(p: Params, require_hcm_witness: Optional[bool] = None,
                        report: Optional[VerificationReport] = None) -> VerificationReport:
    """Probe outcomes compared with the classifier.

    * CM of the density: violation found iff b > 1.
    * HCM: a member must show no violation; listed witnesses must show one.
    * kernel (a, b): violation found iff b is not an integer.
    """
    rep = report if report is not None else VerificationReport("probes")
    cr = classify(p)
    lab = _label(p)

    cm = cm_probe(p)
    found = cm["violations"] > 0
    rep.add(f"CM probe agrees with classifier {lab}", float(found == cr.m_class.member), 0, p,
            member=cr.m_class.member, **cm)

    if require_hcm_witness is None:
        require_hcm_witness = tuple(v for v in (p.a, p.b, p.s)) in {tuple(map(float, w)) for w in HCM_WITNESSES}
    hc = hcm_probe(p)
    if cr.hcm_class.member:
        mismatch = hc["violation"]
    elif require_hcm_witness:
        mismatch = not hc["violation"]
    else:
        mismatch = False
    rep.add(f"HCM probe agrees with classifier {lab}", float(mismatch), 0, p,
            member=cr.hcm_class.member, witness_required=require_hcm_witness, **hc)

    kp = kernel_probe(p.a, p.b)
    rep.add(f"kernel probe a={p.a:g} b={p.b:g}", float(kp["violation"] == is_integer(p.b)), 0, p,
            integer_b=is_integer(p.b), **kp)
    return rep


# suites -------------------------------------------------------------------

def _suite_stieltjes() -> VerificationReport:
    rep = VerificationReport("stieltjes")
    for t in HCM_MEMBERS:
        stieltjes_sign_scan(Params(*t), expect_member=True, report=rep)
    for t in STIELTJES_WITNESSES:
        stieltjes_sign_scan(Params(*t), expect_member=False, report=rep)
    return rep


def _suite_thorin() -> VerificationReport:
    rep = VerificationReport("thorin")
    for t in ((1, 1, 1), (1, 2, 1), (0.5, 0.5, 0.5), (2, 3, 0.7)):
        thorin_mass_probe(Params(*t), report=rep)
    return rep


def _suite_probes() -> VerificationReport:
    rep = VerificationReport("probes")
    for t in PROBE_TRIPLES:
        monotonicity_probes(Params(*t), report=rep)
    for b in KERNEL_B:
        kp = kernel_probe(1.0, b)
        rep.add(f"kernel probe a=1 b={b:g}", float(kp["violation"] == is_integer(b)), 0,
                integer_b=is_integer(b), **kp)
    return rep


SUITES: dict[str, Callable[[], VerificationReport]] = {
    "psi": verify_psi,
    "symmetry": verify_symmetry,
    "malmsten": verify_malmsten,
    "limits": verify_limits,
    "stieltjes": _suite_stieltjes,
    "thorin": _suite_thorin,
    "probes": _suite_probes,
}


def run_suite(name: str) -> list[VerificationReport]:
    """Run one suite by name, or every suite for ``"all"``."""
    if name == "all":
        return [fn() for fn in SUITES.values()]
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return [SUITES[name]()]
