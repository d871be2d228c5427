"""Numerical kernels: log-Gamma, Gamma ratios, the Gauss hypergeometric
function on [0, 1), Jacobi polynomials, double-exponential quadrature and
finite-difference monotonicity probes.

Everything here is pure; configuration objects are frozen dataclasses.
Functions taking ``z`` or ``x`` arrays broadcast over them, parameters are
scalars.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "SeriesPolicy",
    "QuadratureConfig",
    "DomainError",
    "ConvergenceError",
    "DegenerateParameterError",
    "QuadratureError",
    "log_gamma",
    "log_gamma_ratio",
    "gamma_ratio",
    "hyp2f1",
    "hyp2f1_dz",
    "jacobi_poly",
    "integrate_semiinf",
    "integrate_interval",
    "alternating_fd_probe",
    "DEFAULT_SERIES",
    "DEFAULT_QUADRATURE",
]


class DomainError(ValueError):
    """Argument outside the domain of the function."""


class ConvergenceError(ArithmeticError):
    """A series did not converge within the allowed number of terms."""


class DegenerateParameterError(ArithmeticError):
    """The 1 - z transformation is singular and no fallback was allowed."""


class QuadratureError(ArithmeticError):
    """Requested quadrature tolerance was not met.

    Attributes
    ----------
    estimate : float
        Best estimate of the integral.
    error : float
        Estimated absolute error of ``estimate``.
    """

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(message)
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class SeriesPolicy:
    """Controls summation of hypergeometric series.

    ``rel_term_tol`` is the relative size below which a term counts as
    negligible (three in a row stop the sum), ``max_terms`` bounds the number
    of terms and ``z_switch`` is the argument from which the 1 - z
    transformation replaces the raw series.
    """

    rel_term_tol: float = 1e-16
    max_terms: int = 1_000_000
    z_switch: float = 0.9
    allow_perturbation: bool = True

    def __post_init__(self):
        if not 0.0 < self.rel_term_tol < 1.0:
            raise ValueError("rel_term_tol must lie in (0, 1)")
        if self.max_terms < 100:
            raise ValueError("max_terms must be at least 100")
        if not 0.5 <= self.z_switch < 1.0:
            raise ValueError("z_switch must lie in [0.5, 1)")


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances for :func:`integrate_semiinf` and :func:`integrate_interval`.

    ``max_subdivisions`` is the number of step-halving levels allowed.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_subdivisions: int = 12

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.max_subdivisions < 10:
            raise ValueError("max_subdivisions must be at least 10")


DEFAULT_SERIES = SeriesPolicy()
DEFAULT_QUADRATURE = QuadratureConfig()


# ---------------------------------------------------------------------------
# Gamma function
# ---------------------------------------------------------------------------

def _check_positive(name: str, x: float) -> float:
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"{name} must be a finite positive number, got {x!r}")
    return x


def log_gamma(x: float) -> float:
    """Natural logarithm of Gamma(x) for x > 0."""
    x = _check_positive("x", x)
    return math.lgamma(x)


# Stirling correction coefficients B_{2k} / (2k (2k-1)), k = 1..6
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
)


def _stirling_tail(x: float) -> float:
    inv = 1.0 / x
    inv2 = inv * inv
    acc = 0.0
    for c in reversed(_STIRLING):
        acc = acc * inv2 + c
    return acc * inv


def log_gamma_ratio(p: float, q: float) -> float:
    """ln Gamma(p) - ln Gamma(q), accurate when p and q are large and close.

    For arguments above 15 the leading Stirling terms are differenced
    analytically so that the result carries relative, not absolute, error.
    """
    p = _check_positive("p", p)
    q = _check_positive("q", q)
    if p == q:
        return 0.0
    if min(p, q) < 15.0:
        return math.lgamma(p) - math.lgamma(q)
    d = p - q
    lead = (p - 0.5) * math.log1p(d / q) + d * math.log(q) - d
    return lead + _stirling_tail(p) - _stirling_tail(q)


def gamma_ratio(p: float, q: float) -> float:
    """Gamma(p) / Gamma(q) for p, q > 0."""
    p = _check_positive("p", p)
    q = _check_positive("q", q)
    if max(p, q) < 15.0 and min(p, q) > 1e-300:
        return math.gamma(p) / math.gamma(q)
    lr = log_gamma_ratio(p, q)
    # overflow saturates to inf, as the ratio of floats would
    return math.inf if lr > 709.78 else math.exp(lr)


def _is_nonpos_int(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def _signed_lgamma(x: float) -> tuple[float, float]:
    """(ln|Gamma(x)|, sign Gamma(x)) for real x off the poles."""
    if x > 0:
        return math.lgamma(x), 1.0
    sign = -1.0 if math.floor(-x) % 2 == 0 else 1.0
    return math.lgamma(x), sign


def _gamma_fraction(num: Sequence[float], den: Sequence[float]) -> float:
    """prod Gamma(num) / prod Gamma(den); a pole in ``den`` gives 0."""
    if any(_is_nonpos_int(v) for v in den):
        return 0.0
    log_abs = 0.0
    sign = 1.0
    for v in num:
        if _is_nonpos_int(v):
            raise DegenerateParameterError(f"Gamma pole at {v} in numerator")
        lg, sg = _signed_lgamma(v)
        log_abs += lg
        sign *= sg
    for v in den:
        lg, sg = _signed_lgamma(v)
        log_abs -= lg
        sign *= sg
    return sign * math.exp(log_abs)


# ---------------------------------------------------------------------------
# Gauss hypergeometric function
# ---------------------------------------------------------------------------

_RESCALE = 1e200
_LOG_RESCALE = math.log(_RESCALE)
# |c - a - b - m| below this (m integer) counts as a logarithmic case
_DEGENERATE_BAND = 1e-5
# parameter offset used by the Richardson-extrapolated perturbation
_PERTURB_STEP = 1e-3


def _series(a: float, b: float, c: float, z: np.ndarray, log_mult: np.ndarray,
            policy: SeriesPolicy) -> np.ndarray:
    """exp(log_mult) * sum_n (a)_n (b)_n / ((c)_n n!) z^n, with Kahan
    summation and overflow-safe rescaling."""
    z = np.asarray(z, dtype=float)
    if z.size == 0:
        return np.zeros_like(z)
    term = np.ones_like(z)
    total = np.ones_like(z)
    comp = np.zeros_like(z)
    log_scale = np.zeros_like(z)
    quiet = np.zeros(z.shape, dtype=np.int64)
    tol = policy.rel_term_tol
    for n in range(policy.max_terms):
        term = term * ((a + n) * (b + n) / ((c + n) * (n + 1.0))) * z
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        big = (np.abs(total) > _RESCALE) | (np.abs(term) > _RESCALE)
        if big.any():
            term = np.where(big, term / _RESCALE, term)
            total = np.where(big, total / _RESCALE, total)
            comp = np.where(big, comp / _RESCALE, comp)
            log_scale = log_scale + np.where(big, _LOG_RESCALE, 0.0)
        small = np.abs(term) <= tol * np.abs(total)
        quiet = np.where(small, quiet + 1, 0)
        if np.all(quiet >= 3):
            break
    else:
        raise ConvergenceError(
            f"2F1({a}, {b}; {c}; z) series did not converge in "
            f"{policy.max_terms} terms (max z = {float(np.max(z))})")
    with np.errstate(over="ignore", under="ignore"):
        return total * np.exp(log_scale + log_mult)


def _near_integer(v: float, band: float) -> bool:
    return abs(v - round(v)) <= band


def _transformed(a: float, b: float, c: float, zc: np.ndarray, log_mult: np.ndarray,
                 policy: SeriesPolicy, log_zc: np.ndarray) -> np.ndarray:
    """1 - z linear transformation, valid when c - a - b is not an integer."""
    s = c - a - b
    coef_a = _gamma_fraction([c, s], [c - a, c - b])
    coef_b = _gamma_fraction([c, -s], [a, b])
    out = np.zeros_like(zc)
    if coef_a != 0.0:
        out = out + coef_a * _series(a, b, 1.0 - s, zc, log_mult, policy)
    if coef_b != 0.0:
        log_pow = s * log_zc
        out = out + coef_b * _series(c - a, c - b, 1.0 + s, zc, log_mult + log_pow, policy)
    return out


def _near_one(a: float, b: float, c: float, zc: np.ndarray, log_mult: np.ndarray,
              policy: SeriesPolicy, log_zc: np.ndarray) -> np.ndarray:
    if not _near_integer(c - a - b, _DEGENERATE_BAND):
        return _transformed(a, b, c, zc, log_mult, policy, log_zc)
    if not policy.allow_perturbation:
        raise DegenerateParameterError(
            f"c - a - b = {c - a - b} is (nearly) an integer and the series "
            "does not terminate")
    # F is analytic in b; symmetric averages at b +- k*h are even in h, so
    # two Richardson steps remove the h^2 and h^4 error terms.
    h = _PERTURB_STEP

    def avg(step: float) -> np.ndarray:
        return 0.5 * (_transformed(a, b + step, c, zc, log_mult, policy, log_zc)
                      + _transformed(a, b - step, c, zc, log_mult, policy, log_zc))

    a1, a2, a4 = avg(h), avg(2 * h), avg(4 * h)
    r1 = (4.0 * a1 - a2) / 3.0
    r2 = (4.0 * a2 - a4) / 3.0
    return (16.0 * r1 - r2) / 15.0


def _hyp2f1_scaled(a: float, b: float, c: float, z, zc=None, log_mult=0.0,
                   policy: SeriesPolicy = DEFAULT_SERIES, log_zc=None):
    """exp(log_mult) * 2F1(a, b; c; z) for z in [0, 1).

    ``zc`` may carry 1 - z to full relative precision (e.g. exp(-x) when
    z = 1 - exp(-x)); ``log_mult`` lets callers fold in a large or tiny
    prefactor without overflow. ``log_zc`` = log(1 - z) is needed only when
    ``zc`` underflows to zero.
    """
    if _is_nonpos_int(c):
        raise DomainError(f"c = {c} is a non-positive integer")
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if zc is None:
        zc = 1.0 - z
    zc = np.broadcast_to(np.asarray(zc, dtype=float), z.shape)
    log_mult = np.broadcast_to(np.asarray(log_mult, dtype=float), z.shape)
    if log_zc is None:
        with np.errstate(divide="ignore", invalid="ignore"):
            log_zc = np.log(zc)
    log_zc = np.broadcast_to(np.asarray(log_zc, dtype=float), z.shape)
    # z may round to 1.0 while an exact complement is still positive
    if (not np.all(np.isfinite(z)) or np.any(z < 0.0) or np.any(zc < 0.0)
            or np.any(~np.isfinite(log_zc))):
        raise DomainError("z must lie in [0, 1)")
    terminating = _is_nonpos_int(a) or _is_nonpos_int(b)
    out = np.empty_like(z)
    low = (z < policy.z_switch) | terminating
    if low.any():
        out[low] = _series(a, b, c, z[low], log_mult[low], policy)
    high = ~low
    if high.any():
        out[high] = _near_one(a, b, c, zc[high], log_mult[high], policy, log_zc[high])
    return float(out[0]) if scalar else out


def hyp2f1(alpha: float, beta: float, gamma: float, z, policy: SeriesPolicy = DEFAULT_SERIES):
    """Gauss hypergeometric function 2F1(alpha, beta; gamma; z) for 0 <= z < 1.

    Below ``policy.z_switch`` the defining series is summed directly. Above
    it the 1 - z transformation is used; when gamma - alpha - beta is an
    integer and the series does not terminate, the value is obtained by
    Richardson extrapolation of symmetric parameter perturbations.

    Parameters
    ----------
    alpha, beta, gamma : float
        Parameters; ``gamma`` must not be a non-positive integer.
    z : float or array_like
        Argument(s) in [0, 1).

    Returns
    -------
    float or ndarray
    """
    return _hyp2f1_scaled(float(alpha), float(beta), float(gamma), z, policy=policy)


def hyp2f1_dz(alpha: float, beta: float, gamma: float, z, policy: SeriesPolicy = DEFAULT_SERIES):
    """d/dz 2F1(alpha, beta; gamma; z) = (alpha beta / gamma) 2F1(alpha+1, beta+1; gamma+1; z)."""
    alpha, beta, gamma = float(alpha), float(beta), float(gamma)
    k = alpha * beta / gamma
    if k == 0.0:
        if _is_nonpos_int(gamma):
            raise DomainError(f"c = {gamma} is a non-positive integer")
        return 0.0 if np.ndim(z) == 0 else np.zeros(np.shape(z))
    return k * hyp2f1(alpha + 1.0, beta + 1.0, gamma + 1.0, z, policy)


# ---------------------------------------------------------------------------
# Jacobi polynomials
# ---------------------------------------------------------------------------

def jacobi_poly(n: int, alpha: float, beta: float, y):
    """Jacobi polynomial P_n^(alpha, beta)(y) by the three-term recurrence."""
    if n < 0 or int(n) != n:
        raise DomainError("degree must be a non-negative integer")
    y = np.asarray(y, dtype=float)
    if not np.all(np.isfinite(y)):
        raise DomainError("y must be finite")
    p_prev = np.ones_like(y)
    if n == 0:
        return p_prev if y.ndim else float(p_prev)
    ab = alpha + beta
    p = 0.5 * (alpha - beta) + (1.0 + 0.5 * ab) * y
    for k in range(2, int(n) + 1):
        c0 = 2.0 * k + ab
        a1 = 2.0 * k * (k + ab) * (c0 - 2.0)
        a2 = (c0 - 1.0) * (alpha * alpha - beta * beta)
        a3 = (c0 - 2.0) * (c0 - 1.0) * c0
        a4 = 2.0 * (k + alpha - 1.0) * (k + beta - 1.0) * c0
        p, p_prev = ((a2 + a3 * y) * p - a4 * p_prev) / a1, p
    return p if y.ndim else float(p)


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

# exp-sinh nodes x = exp(pi/2 sinh t) cover roughly [1e-300, 1e300]
_T_MAX_SEMIINF = math.asinh(math.log(1e300) * 2.0 / math.pi)
# tanh-sinh endpoint gaps reach ~1e-300 of the half-width
_T_MAX_INTERVAL = math.asinh(math.log(1e300) / math.pi)


def _as_vector_fn(f: Callable, vectorized: bool) -> Callable[[np.ndarray], np.ndarray]:
    if vectorized:
        return lambda x: np.asarray(f(x), dtype=float) * np.ones_like(x)
    return lambda x: np.array([float(f(v)) for v in x], dtype=float)


def _de_levels(nodes_weights: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]],
               f: Callable[[np.ndarray], np.ndarray], t_max: float,
               config: QuadratureConfig) -> float:
    h = 0.5
    k = np.arange(-math.floor(t_max / h), math.floor(t_max / h) + 1)
    x, w = nodes_weights(k * h)
    acc = _weighted_sum(f, x, w)
    estimate = h * acc
    err = math.inf
    for level in range(1, config.max_subdivisions + 1):
        h *= 0.5
        n = math.floor(t_max / h)
        k = np.arange(-n, n + 1)
        k = k[k % 2 != 0]
        x, w = nodes_weights(k * h)
        acc += _weighted_sum(f, x, w)
        new = h * acc
        err = abs(new - estimate)
        estimate = new
        if level >= 3 and err <= max(config.abs_tol, config.rel_tol * abs(estimate)):
            return estimate
    raise QuadratureError(
        f"quadrature tolerance not met after {config.max_subdivisions} levels "
        f"(estimate {estimate!r}, error {err!r})", estimate, err)


def _weighted_sum(f, x: np.ndarray, w: np.ndarray) -> float:
    keep = w > 0.0
    x, w = x[keep], w[keep]
    if x.size == 0:
        return 0.0
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        vals = f(x)
        prod = w * vals
    prod = np.where((vals == 0.0), 0.0, prod)
    bad = ~np.isfinite(prod)
    if bad.any():
        # overflow far out in the tails is harmless when the integrand has
        # already decayed there; anywhere else it is an error
        order = np.argsort(x)
        xs, ps, bs = x[order], prod[order], bad[order]
        good_abs = np.abs(np.where(bs, 0.0, ps))
        core = np.nonzero(good_abs > 1e-25 * good_abs.max())[0] if good_abs.max() > 0 else []
        idx = np.nonzero(bs)[0]
        if len(core) == 0 or np.any((idx > core[0]) & (idx < core[-1])):
            raise DomainError(f"integrand not finite at x = {xs[idx][:5]}")
        prod = np.where(bad, 0.0, prod)
    return math.fsum(prod)


def integrate_semiinf(f: Callable, config: QuadratureConfig = DEFAULT_QUADRATURE,
                      vectorized: bool = True) -> float:
    """Integral of ``f`` over (0, inf) by exp-sinh double-exponential quadrature.

    The substitution x = exp(pi/2 sinh t) compresses both an integrable
    singularity at 0 and an exponential tail, so integrands like
    x**(c-1) * exp(-x) converge at the double-exponential rate.

    Parameters
    ----------
    f : callable
        Integrand. With ``vectorized=True`` it receives a 1-D array.
    config : QuadratureConfig
        Tolerances and refinement depth.

    Raises
    ------
    QuadratureError
        If successive levels never agree within tolerance.
    """
    g = _as_vector_fn(f, vectorized)

    def nodes(t):
        u = 0.5 * math.pi * np.sinh(t)
        with np.errstate(over="ignore", under="ignore"):
            x = np.exp(u)
            w = 0.5 * math.pi * np.cosh(t) * x
        ok = np.isfinite(w) & (x > 0.0) & np.isfinite(x)
        return x[ok], w[ok]

    return _de_levels(nodes, g, _T_MAX_SEMIINF, config)


def integrate_interval(f: Callable, lo: float, hi: float,
                       config: QuadratureConfig = DEFAULT_QUADRATURE,
                       vectorized: bool = True) -> float:
    """Integral of ``f`` over [lo, hi] by tanh-sinh quadrature."""
    lo, hi = float(lo), float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError("finite bounds required; use integrate_semiinf for (0, inf)")
    if hi == lo:
        return 0.0
    if hi < lo:
        return -integrate_interval(f, hi, lo, config, vectorized)
    g = _as_vector_fn(f, vectorized)
    mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)

    def nodes(t):
        u = 0.5 * math.pi * np.sinh(t)
        # distance to the nearer endpoint, kept exact near the ends
        gap = 1.0 / (np.exp(np.abs(u)) * np.cosh(u))
        x = np.where(t < 0, lo + half * gap, hi - half * gap)
        w = half * 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2
        ok = (x > lo) & (x < hi) & (w > 0)
        return x[ok], w[ok]

    return _de_levels(nodes, g, _T_MAX_INTERVAL, config)


# ---------------------------------------------------------------------------
# Complete-monotonicity probe
# ---------------------------------------------------------------------------

def alternating_fd_probe(f: Callable[[float], float], x0: float, h: float | None = None,
                         max_order: int = 6) -> list[int]:
    """Signs of (-Delta_h)^n f(x0) for n = 0..max_order.

    A completely monotone function gives non-negative values at every order.
    A value indistinguishable from rounding noise is reported as 0.
    The default step is max(1e-3, 1e-2 * x0).
    """
    if max_order < 0 or max_order > 8:
        raise ValueError("max_order must lie in 0..8")
    if h is None:
        h = max(1e-3, 1e-2 * abs(x0))
    vals = [float(f(x0 + k * h)) for k in range(max_order + 1)]
    signs = []
    for n in range(max_order + 1):
        diff = 0.0
        scale = 0.0
        for k in range(n + 1):
            c = math.comb(n, k) * (-1) ** k
            diff += c * vals[k]
            scale += abs(c * vals[k])
        noise = 64.0 * np.finfo(float).eps * scale
        signs.append(0 if abs(diff) <= noise else (1 if diff > 0 else -1))
    return signs
