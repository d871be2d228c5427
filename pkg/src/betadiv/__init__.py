"""Infinite divisibility numerics for negative powers of Beta variables."""

from .betapower import Params, density_f, g_eval, gb2_density, laplace_phi, mellin_moment
from .classify import ClassificationReport, Status, Verdict, classify
from .levy import jump_measure, killing_rate, psi_exact, psi_quadrature, rho, rho_prime
from .sim import SimConfig, sample_direct, simulate_gp_perpetuity, simulate_perpetuity
from .verify import run_suite

__version__ = "0.1.0"

__all__ = [
    "Params",
    "density_f",
    "g_eval",
    "gb2_density",
    "laplace_phi",
    "mellin_moment",
    "ClassificationReport",
    "Status",
    "Verdict",
    "classify",
    "jump_measure",
    "killing_rate",
    "psi_exact",
    "psi_quadrature",
    "rho",
    "rho_prime",
    "SimConfig",
    "sample_direct",
    "simulate_gp_perpetuity",
    "simulate_perpetuity",
    "run_suite",
]
