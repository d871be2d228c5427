"""Closed-form objects attached to the law of beta_{a,b}^{-s}.

Densities are evaluated in log space so that arguments up to 1e12 are safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import (
    DEFAULT_QUADRATURE,
    DomainError,
    QuadratureConfig,
    gamma_ratio,
    integrate_semiinf,
)

__all__ = [
    "Params",
    "BranchCutError",
    "density_f",
    "log_density_f",
    "log_density_slope",
    "g_eval",
    "g_prime_over_g",
    "mellin_moment",
    "laplace_phi",
    "laplace_phi_prime",
    "gb2_density",
]


@dataclass(frozen=True)
class Params:
    """Parameter triple (a, b, s) of beta_{a,b}^{-s}."""

    a: float
    b: float
    s: float

    def __post_init__(self):
        for name in ("a", "b", "s"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float, np.floating, np.integer)) and math.isfinite(v) and v > 0):
                raise DomainError(f"{name} must be a finite positive number, got {v!r}")
            object.__setattr__(self, name, float(v))

    def swapped(self) -> "Params":
        """The triple with b and s exchanged."""
        return Params(self.a, self.s, self.b)

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "s": self.s}


class BranchCutError(DomainError):
    """Point on the cut (-inf, -1] of (z + 1)^(1/s)."""


def _positive_x(x) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0):
        raise DomainError("x must be finite and strictly positive")
    return arr


def _out(arr: np.ndarray, like):
    return float(arr) if np.ndim(like) == 0 else arr


def _log_expm1(y: np.ndarray) -> np.ndarray:
    """log(exp(y) - 1) for y > 0 without overflow."""
    y = np.asarray(y, dtype=float)
    with np.errstate(over="ignore"):
        small = np.log(np.expm1(np.minimum(y, 1.0)))
    large = y + np.log1p(-np.exp(-np.maximum(y, 1.0)))
    return np.where(y < 1.0, small, large)


def _log_norm(p: Params) -> float:
    return math.lgamma(p.a + p.b) - math.lgamma(p.a) - math.lgamma(p.b)


def log_density_f(p: Params, x):
    """Logarithm of :func:`density_f`."""
    arr = _positive_x(x)
    l1 = np.log1p(arr)
    val = (_log_norm(p) - math.log(p.s)
           + ((1.0 - p.a - p.b) / p.s - 1.0) * l1
           + (p.b - 1.0) * _log_expm1(l1 / p.s))
    return _out(val, x)


def density_f(p: Params, x):
    """Density of beta_{a,b}^{-s} - 1 on (0, inf).

    f(x) = Gamma(a+b) / (s Gamma(a) Gamma(b)) (x+1)^((1-a-b)/s - 1)
           ((x+1)^(1/s) - 1)^(b-1)
    """
    return _out(np.exp(log_density_f(p, x)), x)


def log_density_slope(p: Params, x):
    """Derivative of ln f at x > 0; behaves like (b - 1)/x near 0."""
    arr = _positive_x(x)
    l1 = np.log1p(arr)
    with np.errstate(over="ignore"):
        inner = (p.b - 1.0) / np.expm1(l1 / p.s) - p.a - p.s
    return _out(inner / (p.s * (1.0 + arr)), x)


def g_eval(p: Params, x):
    """g(x) = (s Gamma(a) Gamma(b) / Gamma(a+b)) (x/s)^(1-b) f(x), with g(0+) = 1."""
    arr = _positive_x(x)
    l1 = np.log1p(arr)
    logg = ((1.0 - p.b) * np.log(arr / p.s)
            + ((1.0 - p.a - p.b) / p.s - 1.0) * l1
            + (p.b - 1.0) * _log_expm1(l1 / p.s))
    return _out(np.exp(logg), x)


def _neg_gprime_series(p: Params, z):
    """Taylor polynomial of (ln g)' = -G' at 0 through z^3."""
    a, b, s = p.a, p.b, p.s
    c0 = -(2 * a + b * s + b + s - 1) / (2 * s)
    c1 = (12 * a * s + 5 * b * s**2 + 6 * b * s + b + 7 * s**2 - 6 * s - 1) / (12 * s**2)
    c2 = -(8 * a * s + 3 * b * s**2 + 4 * b * s + b + 5 * s**2 - 4 * s - 1) / (8 * s**2)
    c3 = (720 * a * s**3 + 251 * b * s**4 + 360 * b * s**3 + 110 * b * s**2 - b
          + 469 * s**4 - 360 * s**3 - 110 * s**2 + 1) / (720 * s**4)
    return c0 + z * (c1 + z * (c2 + z * c3))


# below this |z| the removable singularity at 0 is evaluated by its Taylor
# polynomial; the cubic remainder and the rounding of the direct formula are
# both ~1e-12 here
_SERIES_RADIUS = 1e-3


def g_prime_over_g(p: Params, z):
    """g'/g = -G' at a complex point z outside (-inf, -1].

    G'(z) = (a+s)/(s(z+1)) + (b-1)(1/z - 1/(s(z+1)((z+1)^(1/s) - 1)))
    with the principal branch of (z+1)^(1/s).
    """
    zz = np.asarray(z, dtype=complex)
    if np.any(~np.isfinite(zz)):
        raise DomainError("z must be finite")
    if np.any((zz.imag == 0.0) & (zz.real <= -1.0)):
        raise BranchCutError("z lies on the branch cut (-inf, -1]")
    near = np.abs(zz) < _SERIES_RADIUS
    safe = np.where(near, 1.0, zz)
    w = 1.0 + safe
    q = np.expm1(np.log(w) / p.s)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        gp = (p.a + p.s) / (p.s * w) + (p.b - 1.0) * (1.0 / safe - 1.0 / (p.s * w * q))
    out = np.where(near, _neg_gprime_series(p, zz), -gp)
    return complex(out) if np.ndim(z) == 0 else out


def mellin_moment(p: Params, lam: float) -> float:
    """E[beta_{a,b}^lam] = Gamma(a+lam) Gamma(a+b) / (Gamma(a) Gamma(a+b+lam)), lam > -a."""
    if not lam > -p.a:
        raise DomainError(f"moment of order {lam} requires lam > -a = {-p.a}")
    return gamma_ratio(p.a + lam, p.a) * gamma_ratio(p.a + p.b, p.a + p.b + lam)


def laplace_phi(p: Params, lam: float, config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Phi(lam) = E[exp(-lam (beta^{-s} - 1))] by quadrature."""
    if not lam >= 0:
        raise DomainError("lam must be non-negative")
    if lam == 0:
        return 1.0
    return integrate_semiinf(lambda x: np.exp(-lam * x + log_density_f(p, x)), config)


def laplace_phi_prime(p: Params, lam: float, config: QuadratureConfig = DEFAULT_QUADRATURE) -> float:
    """Phi'(lam) = -E[X exp(-lam X)], X = beta^{-s} - 1, by quadrature."""
    if not lam > 0:
        raise DomainError("lam must be positive")
    return -integrate_semiinf(lambda x: np.exp(-lam * x + np.log(x) + log_density_f(p, x)), config)


def gb2_density(p: Params, x):
    """Density of (beta^{-1} - 1)^s = (gamma_b / gamma_a)^s:

    Gamma(a+b) / (s Gamma(a) Gamma(b)) (x^(1/s) + 1)^(-(a+b)) x^(b/s - 1).
    """
    arr = _positive_x(x)
    lx = np.log(arr)
    val = (_log_norm(p) - math.log(p.s)
           - (p.a + p.b) * np.logaddexp(lx / p.s, 0.0)
           + (p.b / p.s - 1.0) * lx)
    return _out(np.exp(val), x)
