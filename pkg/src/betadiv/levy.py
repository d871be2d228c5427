"""Levy-side objects: the spectral density rho and its derivative, the jump
measure nu of the compound Poisson process whose perpetuity is
beta_{a,b}^{-s}, Laplace exponents, the killing rate and the Gamma-side
spectral function of -s log(gamma_a).
"""

from __future__ import annotations

import contextlib
import contextvars
import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .betapower import Params
from .specfun import (
    DEFAULT_QUADRATURE,
    DEFAULT_SERIES,
    DomainError,
    QuadratureConfig,
    SeriesPolicy,
    _gamma_fraction,
    _hyp2f1_scaled,
    gamma_ratio,
    integrate_semiinf,
)

__all__ = [
    "NotInELPError",
    "distorted_rho",
    "TailKind",
    "TailConstant",
    "HyperExpMixture",
    "JumpMeasure",
    "elp_condition",
    "is_integer",
    "rho",
    "rho_prime",
    "tail_constant",
    "jump_measure",
    "hyperexp_nu_integer_b",
    "hyperexp_nu_integer_s",
    "psi_exact",
    "psi_quadrature",
    "psi_rescaled",
    "killing_rate",
    "count_sign_changes",
    "sign_change_brackets",
    "gamma_spectral_m",
    "gamma_drift_c",
    "gamma_limit_exponent",
    "gamma_limit_exponent_closed",
]

# psi_quadrature subtracts the integral from 1, so it needs more digits than
# the library default
PSI_QUADRATURE = QuadratureConfig(abs_tol=1e-15, rel_tol=1e-13, max_subdivisions=12)


# relative distortion applied to rho; only ever set by the harness
# sensitivity check through :func:`distorted_rho`
_RHO_DISTORTION = contextvars.ContextVar("rho_distortion", default=0.0)


@contextlib.contextmanager
def distorted_rho(eps: float):
    """Multiply every rho evaluation by (1 + eps) inside the block (testing only)."""
    token = _RHO_DISTORTION.set(float(eps))
    try:
        yield
    finally:
        _RHO_DISTORTION.reset(token)


class NotInELPError(ValueError):
    """nu is not a Levy measure: b ^ s <= 1 <= 2a + b + s + bs fails."""


def is_integer(v: float) -> bool:
    """Binary-float tolerant test for v in N."""
    r = round(v)
    return r >= 1 and abs(v - r) <= 1e-12 * max(1.0, abs(v))


def elp_condition(p: Params) -> bool:
    """b ^ s <= 1 <= 2a + b + s + bs, with closed inequalities."""
    return min(p.b, p.s) <= 1.0 and 2 * p.a + p.b + p.s + p.b * p.s >= 1.0


def _nonneg_x(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0):
        raise DomainError("x must be finite and non-negative")
    return arr


def _kernel_params(p: Params) -> Params:
    # For integer b < s the 1-s series does not terminate while the 1-b one
    # does, and its value at z = 1 is non-zero; the swapped triple gives the
    # same function without cancellation at large x.
    if is_integer(p.b) and p.s > p.b:
        return p.swapped()
    return p


def _kernel(p: Params, flat: np.ndarray, shift: float, policy: SeriesPolicy):
    """exp(-(a+b+shift) x) 2F1(1+b+shift, 1-s+shift; 2+shift; 1-exp(-x))."""
    z = -np.expm1(-flat)
    with np.errstate(under="ignore"):
        zc = np.exp(-flat)
    return np.asarray(_hyp2f1_scaled(1.0 + p.b + shift, 1.0 - p.s + shift, 2.0 + shift, z, zc,
                                     -(p.a + p.b + shift) * flat, policy, log_zc=-flat))


def rho(p: Params, x, policy: SeriesPolicy = DEFAULT_SERIES, reorder: bool = True):
    """rho(x) = b s exp(-(a+b) x) 2F1(1+b, 1-s; 2; 1 - exp(-x)) for x >= 0.

    1 - z is passed to the hypergeometric kernel as exp(-x) exactly, so the
    1 - z transformation keeps full precision for large x. With
    ``reorder=False`` the formula is evaluated as written even when the
    (b, s)-swapped form would be better conditioned.
    """
    arr = _nonneg_x(x)
    flat = np.atleast_1d(arr).ravel()
    q = _kernel_params(p) if reorder else p
    out = (p.b * p.s) * _kernel(q, flat, 0.0, policy).reshape(np.shape(arr))
    eps = _RHO_DISTORTION.get()
    if eps:
        out = out * (1.0 + eps)
    return float(out) if np.ndim(x) == 0 else out


def rho_prime(p: Params, x, policy: SeriesPolicy = DEFAULT_SERIES, reorder: bool = True):
    """Analytic derivative of :func:`rho` (product rule and the contiguous
    derivative of 2F1)."""
    arr = _nonneg_x(x)
    flat = np.atleast_1d(arr).ravel()
    q = _kernel_params(p) if reorder else p
    out = -(q.a + q.b) * _kernel(q, flat, 0.0, policy)
    k = 0.5 * (1.0 + q.b) * (1.0 - q.s)
    if k != 0.0:
        out = out + k * _kernel(q, flat, 1.0, policy)
    out = (p.b * p.s) * out.reshape(np.shape(arr))
    return float(out) if np.ndim(x) == 0 else out


class TailKind(str, enum.Enum):
    CONSTANT = "constant"
    LINEAR = "linear-in-x"
    ZERO = "zero"


@dataclass(frozen=True)
class TailConstant:
    """Large-x behaviour of 2F1(1+b, 1-s; 2; 1-exp(-x)) with s >= b."""

    kind: TailKind
    value: float


def tail_constant(p: Params) -> TailConstant:
    """Limit of 2F1(1+b, 1-s; 2; 1 - e^{-x}) as x -> inf, after ordering the
    pair so that s is the larger of (b, s).

    * s > b: Gamma(s-b) / (Gamma(1+s) Gamma(1-b)), zero when b is an integer.
    * s = b = n integer: (-1)^(n-1) / n (the polynomial's value at z = 1).
    * s = b not an integer: grows like x / (Gamma(1+b) Gamma(1-b)); the
      returned value is that slope.
    """
    lo, hi = sorted((p.b, p.s))
    if abs(hi - lo) > 1e-12 * max(1.0, hi):
        val = _gamma_fraction([hi - lo], [1.0 + hi, 1.0 - lo])
        return TailConstant(TailKind.ZERO if val == 0.0 else TailKind.CONSTANT, val)
    if is_integer(lo):
        n = round(lo)
        return TailConstant(TailKind.CONSTANT, (-1.0) ** (n - 1) / n)
    return TailConstant(TailKind.LINEAR, _gamma_fraction([], [1.0 + lo, 1.0 - lo]))


@dataclass(frozen=True)
class HyperExpMixture:
    """Density sum_k w_k exp(-r_k x) on (0, inf); weights may be negative."""

    terms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        rates = [r for _, r in self.terms]
        if any(not r > 0 for r in rates):
            raise ValueError("rates must be positive")
        if len(set(rates)) != len(rates):
            raise ValueError("rates must be distinct")

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.terms])

    @property
    def rates(self) -> np.ndarray:
        return np.array([r for _, r in self.terms])

    def density(self, x):
        arr = np.asarray(x, dtype=float)
        out = sum(w * np.exp(-r * arr) for w, r in self.terms)
        return float(out) if np.ndim(x) == 0 else out

    def total_mass(self) -> float:
        return math.fsum(w / r for w, r in self.terms)

    def component_masses(self) -> np.ndarray:
        return self.weights / self.rates

    def has_positive_weights(self) -> bool:
        return all(w >= 0 for w, _ in self.terms)


def _c_coeff(k: int, n: int, s: float) -> float:
    return math.prod(1.0 - s / (q - k) for q in range(n) if q != k)


def _check_n(n) -> int:
    if int(n) != n or n < 1:
        raise DomainError("n must be a positive integer")
    return int(n)


def hyperexp_nu_integer_b(a: float, n: int, s: float, allow_negative: bool = False) -> HyperExpMixture:
    """Closed form of nu_{a,n,s}: sum_k (1+(a+k)/s) c_{k,n,s} exp(-(1+(a+k)/s) x),
    c_{k,n,s} = prod_{p != k} (1 - s/(p-k)).

    The density is non-negative iff s <= 1; larger s is refused unless
    ``allow_negative`` is set, in which case a warning is issued.
    """
    n = _check_n(n)
    if not (a > 0 and s > 0):
        raise DomainError("a and s must be positive")
    if s > 1.0 and n > 1:
        if not allow_negative:
            raise DomainError("nu_{a,n,s} is a signed density for s > 1")
        warnings.warn(f"s = {s} > 1: the mixture takes negative values", RuntimeWarning, stacklevel=2)
    terms = []
    for k in range(n):
        rate = 1.0 + (a + k) / s
        terms.append((rate * _c_coeff(k, n, s), rate))
    return HyperExpMixture(tuple(terms))


def hyperexp_nu_integer_s(a: float, b: float, n: int, allow_negative: bool = False) -> HyperExpMixture:
    """Closed form of nu_{a,b,n}: sum_k b n^-2 (a+b+k) c_{k,n,b} exp(-(a+b+k) x / n)."""
    n = _check_n(n)
    if not (a > 0 and b > 0):
        raise DomainError("a and b must be positive")
    if b > 1.0 and n > 1:
        if not allow_negative:
            raise DomainError("nu_{a,b,n} is a signed density for b > 1")
        warnings.warn(f"b = {b} > 1: the mixture takes negative values", RuntimeWarning, stacklevel=2)
    terms = []
    for k in range(n):
        terms.append((b * (a + b + k) * _c_coeff(k, n, b) / n**2, (a + b + k) / n))
    return HyperExpMixture(tuple(terms))


@dataclass(frozen=True)
class JumpMeasure:
    """Levy measure nu(dx) = -s^-2 rho'(x/s) dx of the compound Poisson part.

    ``total_rate`` is nu(0, inf) = rho(0)/s = b. ``survival(x)`` is the exact
    tail mass nu(x, inf) = rho(x/s)/s.
    """

    params: Params
    total_rate: float
    closed_form: Optional[HyperExpMixture] = None
    policy: SeriesPolicy = field(default=DEFAULT_SERIES, repr=False, compare=False)

    def density(self, x):
        p = self.params
        arr = np.asarray(x, dtype=float)
        if self.closed_form is not None:
            return self.closed_form.density(x)
        out = -rho_prime(p, arr / p.s, self.policy) / p.s**2
        return float(out) if np.ndim(x) == 0 else out

    def series_density(self, x):
        """Density from rho' even when a closed form exists."""
        p = self.params
        arr = np.asarray(x, dtype=float)
        out = -rho_prime(p, arr / p.s, self.policy) / p.s**2
        return float(out) if np.ndim(x) == 0 else out

    def survival(self, x):
        p = self.params
        arr = np.asarray(x, dtype=float)
        out = rho(p, arr / p.s, self.policy) / p.s
        return float(out) if np.ndim(x) == 0 else out

    def cdf(self, x):
        """Distribution function of a single normalized jump."""
        out = 1.0 - np.asarray(self.survival(x)) / self.total_rate
        return float(out) if np.ndim(x) == 0 else out


def jump_measure(p: Params, policy: SeriesPolicy = DEFAULT_SERIES) -> JumpMeasure:
    """Build nu_{a,b,s}; raises :class:`NotInELPError` outside the region where
    rho' <= 0."""
    if not elp_condition(p):
        raise NotInELPError(
            f"b ^ s <= 1 <= 2a + b + s + bs fails for (a, b, s) = ({p.a}, {p.b}, {p.s}): "
            f"b ^ s = {min(p.b, p.s)}, 2a + b + s + bs = {2 * p.a + p.b + p.s + p.b * p.s}")
    closed = None
    if p.s == 1.0:
        closed = HyperExpMixture(((p.b * (p.a + p.b), p.a + p.b),))
    elif is_integer(p.b):
        closed = hyperexp_nu_integer_b(p.a, round(p.b), p.s)
    elif is_integer(p.s):
        closed = hyperexp_nu_integer_s(p.a, p.b, round(p.s))
    return JumpMeasure(p, p.b, closed, policy)


def psi_exact(p: Params, u: float) -> float:
    """Psi(u) = u Gamma(a+s+u) Gamma(a+b+u) / (Gamma(a+b+s+u) Gamma(a+u))."""
    if not u >= 0:
        raise DomainError("u must be non-negative")
    if u == 0:
        return 0.0
    a, b, s = p.a, p.b, p.s
    # ratios grouped by the shift s so neither overflows for large b
    return u * gamma_ratio(a + s + u, a + u) * gamma_ratio(a + b + u, a + b + s + u)


def psi_quadrature(p: Params, u: float, config: QuadratureConfig = PSI_QUADRATURE) -> float:
    """Psi(u) = u - u int_0^inf exp(-u x) rho(x) dx."""
    if not u >= 0:
        raise DomainError("u must be non-negative")
    if u == 0:
        return 0.0
    integral = integrate_semiinf(lambda x: np.exp(-u * x) * rho(p, x), config)
    return u - u * integral


def psi_rescaled(p: Params, lam: float, method: str = "exact",
                 config: QuadratureConfig = PSI_QUADRATURE) -> float:
    """Laplace exponent of the SNLP b^s t - N_{b^s t}:

    b^s lam (1 - s^-1 int exp(-lam x) rho(x/s) dx) = b^s Psi(s lam) / s.
    ``method`` is ``"exact"`` (Gamma ratios) or ``"quadrature"``.
    """
    if method == "exact":
        return p.b**p.s * psi_exact(p, p.s * lam) / p.s
    if method == "quadrature":
        if lam == 0:
            return 0.0
        integral = integrate_semiinf(lambda x: np.exp(-lam * x) * rho(p, x / p.s), config) / p.s
        return p.b**p.s * lam * (1.0 - integral)
    raise ValueError(f"unknown method {method!r}")


def killing_rate(p: Params) -> float:
    """Gamma(a+b) Gamma(a+s) / (Gamma(a) Gamma(a+b+s)) = 1 - int rho."""
    return gamma_ratio(p.a + p.s, p.a) * gamma_ratio(p.a + p.b, p.a + p.b + p.s)


def _geometric_grid(x_lo: float, x_hi: float, n: int) -> np.ndarray:
    if not x_lo < x_hi:
        raise ValueError("x_lo must be below x_hi")
    lo = x_lo if x_lo > 0 else min(1e-6, 1e-6 * x_hi)
    return np.geomspace(lo, x_hi, n)


def _eval(f: Callable, x: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(x), dtype=float)
        if vals.shape == x.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([float(f(v)) for v in x])


def sign_change_brackets(f: Callable, x_lo: float, x_hi: float, grid_points: int = 2000,
                         floor: float = 1e-12) -> list[tuple[float, float]]:
    """Brackets around the strict sign changes of f on a geometric grid.

    Values with |f| < ``floor`` are treated as plateaus and skipped; each
    bracket is halved once by bisection.
    """
    if grid_points < 1000:
        raise ValueError("grid_points must be at least 1000")
    x = _geometric_grid(x_lo, x_hi, grid_points)
    v = _eval(f, x)
    keep = np.abs(v) >= floor
    xs, vs = x[keep], v[keep]
    out = []
    for i in range(1, len(xs)):
        if np.sign(vs[i]) != np.sign(vs[i - 1]):
            lo, hi = xs[i - 1], xs[i]
            mid = 0.5 * (lo + hi)
            fm = float(_eval(f, np.array([mid]))[0])
            if np.sign(fm) == np.sign(vs[i - 1]):
                lo = mid
            elif fm != 0.0:
                hi = mid
            out.append((float(lo), float(hi)))
    return out


def count_sign_changes(f: Callable, x_lo: float, x_hi: float, grid_points: int = 2000,
                       floor: float = 1e-12) -> int:
    """Number of strict sign alternations of f on (x_lo, x_hi)."""
    return len(sign_change_brackets(f, x_lo, x_hi, grid_points, floor))


def gamma_spectral_m(a: float, s: float, x):
    """m_{a,s}(x) = exp(-a x / s) / (1 - exp(-x / s)), ~ s/x at 0."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 0) or np.any(~np.isfinite(arr)):
        raise DomainError("x must be finite and positive")
    out = np.exp(-a * arr / s) / -np.expm1(-arr / s)
    return float(out) if np.ndim(x) == 0 else out


def _digamma_integrand(a: float, x: np.ndarray) -> np.ndarray:
    """exp(-x)/x - exp(-a x)/(1 - exp(-x)), with a Taylor branch near 0."""
    direct_x = np.maximum(x, 1e-3)
    with np.errstate(over="ignore"):
        direct = np.exp(-direct_x) / direct_x - np.exp(-a * direct_x) / -np.expm1(-direct_x)
    c0 = (2 * a - 3) / 2
    c1 = -(6 * a**2 - 6 * a - 5) / 12
    c2 = (2 * a**3 - 3 * a**2 + a - 2) / 12
    c3 = -(30 * a**4 - 60 * a**3 + 30 * a**2 - 31) / 720
    series = c0 + x * (c1 + x * (c2 + x * c3))
    return np.where(x < 1e-3, series, direct)


def gamma_drift_c(a: float, s: float, config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """c_{a,s} = s int_0^inf (e^{-x}/x - e^{-a x}/(1 - e^{-x})) dx.

    The two pieces diverge separately at 0 and are combined before
    integration.
    """
    if not (a > 0 and s > 0):
        raise DomainError("a and s must be positive")
    return s * integrate_semiinf(lambda x: _digamma_integrand(a, x), config)


def _exp_m1_plus_lin(t: np.ndarray) -> np.ndarray:
    """exp(-t) - 1 + t for t >= 0 without cancellation."""
    with np.errstate(over="ignore"):
        direct = np.expm1(-t) + t
    series = t * t * (0.5 - t * (1 / 6 - t * (1 / 24 - t * (1 / 120 - t * (1 / 720 - t / 5040)))))
    return np.where(t < 1e-2, series, direct)


def gamma_limit_exponent(a: float, s: float, lam: float,
                         config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Limit as b -> inf of the rescaled exponent for s < 1, in integral form:

    lam Gamma(a+s)/Gamma(a) + int_0^inf (e^{-lam y} - 1 + lam y)
        e^{-(1+a/s) y} (s + e^{-y/s} + a (1 - e^{-y/s}))
        / (s Gamma(1-s) (1 - e^{-y/s})^{2+s}) dy
    """
    if not 0 < s < 1:
        raise DomainError("the limit exponent is defined for 0 < s < 1")
    norm = s * math.gamma(1.0 - s)

    def integrand(y):
        e = np.exp(-y / s)
        one_minus = -np.expm1(-y / s)
        with np.errstate(over="ignore", under="ignore"):
            log_k = -(1.0 + a / s) * y - (2.0 + s) * np.log(one_minus)
            k = np.exp(log_k) * (s + e + a * one_minus) / norm
        return _exp_m1_plus_lin(lam * y) * k

    return lam * gamma_ratio(a + s, a) + integrate_semiinf(integrand, config)


def gamma_limit_exponent_closed(a: float, s: float, lam: float) -> float:
    """lam Gamma(a + s + s lam) / Gamma(a + s lam), the same exponent via the
    moment ratio of gamma_a^{-s}."""
    return lam * gamma_ratio(a + s + s * lam, a + s * lam)
