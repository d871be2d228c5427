"""Acceptance criteria 1-14, each at its stated tolerance and budget."""

import math
import time

import numpy as np
import pytest

from betadiv.betapower import Params
from betadiv.classify import classify
from betadiv.cli import region_grid
from betadiv.levy import (
    count_sign_changes,
    hyperexp_nu_integer_b,
    jump_measure,
    rho,
    rho_prime,
)
from betadiv.sim import (
    SimConfig,
    direct_mean,
    ks_two_sample,
    sample_direct,
    simulate_gp_perpetuity,
    simulate_perpetuity,
)
from betadiv.verify import (
    HCM_MEMBERS,
    monotonicity_probes,
    stieltjes_sign_scan,
    thorin_mass_probe,
    verify_limits,
    verify_malmsten,
    verify_psi,
    verify_symmetry,
)

from conftest import ACCEPTANCE_RESULTS

N_MC = 100_000
# seeds fixed before the runs were inspected
SEED_SIM, SEED_DIRECT = 1, 2


def record(n, ok, detail):
    ACCEPTANCE_RESULTS[n] = (bool(ok), detail)
    assert ok, f"criterion {n}: {detail}"


def _worst(rep):
    worst = max(rep.cases, key=lambda c: c.discrepancy / c.tolerance if c.tolerance else c.discrepancy)
    return f"{len(rep.failures())} of {len(rep.cases)} cases failed, worst {worst.label}: {worst.discrepancy:.3g} (tol {worst.tolerance:.3g})"


def test_criterion_01_exponent_identity():
    t0 = time.perf_counter()
    rep = verify_psi()
    elapsed = time.perf_counter() - t0
    n_psi = sum(1 for c in rep.cases if c.label.startswith("psi "))
    ok = rep.passed and n_psi == 90 and elapsed < 10.0
    record(1, ok, f"{_worst(rep)}; {elapsed:.1f} s")


def test_criterion_02_boundary_data():
    rng = np.random.default_rng(2)
    triples = np.exp(rng.uniform(np.log(0.05), np.log(10.0), size=(30, 3)))
    t0 = time.perf_counter()
    worst, exact = 0.0, True
    for a, b, s in triples:
        p = Params(a, b, s)
        exact &= rho(p, 0.0) == b * s
        worst = max(worst, abs(rho_prime(p, 0.0) + (b * s / 2) * (2 * a + b + b * s + s - 1)))
    elapsed = time.perf_counter() - t0
    record(2, exact and worst <= 1e-10 and elapsed < 1.0,
           f"rho(0) exact: {exact}; max |rho'(0) error| {worst:.2e}; {elapsed:.2f} s")


def test_criterion_03_symmetry():
    rep = verify_symmetry()
    record(3, rep.passed and len(rep.cases) == 10, _worst(rep))


def test_criterion_04_closed_forms():
    x = np.geomspace(1e-4, 30.0, 200)
    errs = []
    for a, b in [(1, 2), (0.3, 0.7), (2.5, 4)]:
        p = Params(a, b, 1.0)
        errs.append(np.max(np.abs(rho(p, x) - b * np.exp(-(a + b) * x))))
        nu = jump_measure(p).series_density(x)
        errs.append(np.max(np.abs(nu - b * (a + b) * np.exp(-(a + b) * x))))
    mass_err = 0.0
    for a, s in [(1, 0.5), (2, 3), (0.3, 1.7)]:
        p = Params(a, 1.0, s)
        r = 1 + a / s
        jm = jump_measure(p)
        errs.append(np.max(np.abs(jm.series_density(x) - r * np.exp(-r * x))))
        mass_err = max(mass_err, abs(jm.survival(0.0) - 1.0))
    worst = max(max(errs), mass_err)
    record(4, worst <= 1e-12, f"max pointwise error {worst:.2e}")


def test_criterion_05_hyperexponential():
    a, n, s = 1, 2, 0.5
    mix = hyperexp_nu_integer_b(a, n, s)
    x = np.geomspace(1e-4, 30.0, 200)
    at0 = mix.density(0.0)
    err = np.max(np.abs(mix.density(x) + rho_prime(Params(a, n, s), x / s) / s**2))
    with pytest.warns(RuntimeWarning):
        signed = hyperexp_nu_integer_b(1, 2, 1.5, allow_negative=True)
    neg = float(np.min(signed.density(np.geomspace(1e-3, 30.0, 500))))
    ok = abs(at0 - 9.0) <= 1e-12 and err <= 1e-8 and neg < 0
    record(5, ok, f"density(0) = {at0!r}; max mismatch {err:.2e}; min value for s=1.5: {neg:.3g}")


def test_criterion_06_perpetuity_law():
    t0 = time.perf_counter()
    lines, ok = [], True
    for t in [(1, 2, 1), (1, 1, 0.5), (0.5, 3, 0.7)]:
        p = Params(*t)
        x = simulate_perpetuity(p, SimConfig(N_MC, SEED_SIM))
        y = sample_direct(p, SimConfig(N_MC, SEED_DIRECT))
        ks = ks_two_sample(x, y)
        ok &= ks.statistic < 0.00728
        msg = f"{t}: KS {ks.statistic:.5f}"
        if p.s < p.a:
            z = abs(x.mean - direct_mean(p)) / x.standard_error
            ok &= z <= 3.0
            msg += f", mean off by {z:.2f} SE"
        lines.append(msg)
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 120.0
    record(6, ok, "; ".join(lines) + f"; {elapsed:.1f} s")


def test_criterion_07_gp_identity():
    x = simulate_gp_perpetuity(1, 2, SimConfig(N_MC, SEED_SIM))
    y = sample_direct(Params(1, 2, 1), SimConfig(N_MC, SEED_DIRECT))
    ks = ks_two_sample(x, y)
    record(7, ks.statistic < 0.00728, f"KS {ks.statistic:.5f} (critical {ks.critical_001:.5f})")


def test_criterion_08_rho_sign_change_counts():
    t0 = time.perf_counter()
    got = {}
    for t in [(1, 2, 3), (1, 2.5, 3), (1, 0.5, 2)]:
        p = Params(*t)
        got[t] = count_sign_changes(lambda x: rho(p, x), 0.0, 40.0)
    elapsed = time.perf_counter() - t0
    ok = got == {(1, 2, 3): 1, (1, 2.5, 3): 2, (1, 0.5, 2): 0} and elapsed < 5.0
    record(8, ok, f"{got}; {elapsed:.2f} s")


def _implications_hold(r):
    v = {k: x.member for k, x in r.verdicts().items()}
    return all(not v[lo] or v[hi] for lo, hi in [("hcm", "ggc"), ("m", "id"), ("elp", "sd"), ("sd", "id"), ("ggc", "sd")])


def test_criterion_09_regions():
    res, span = 64, 1.0
    cell = span / res
    violations, worst_gap, curved_cols = 0, 0.0, 0
    lower_left_full = True
    for a in (0.3, 0.6):
        rows = region_grid(a, span, span, res)
        for s, b, *_ in rows:
            violations += not _implications_hold(classify(Params(a, b, s)))
        cols = {}
        for s, b, m, hcm, elp, sd, ggc in rows:
            cols.setdefault(s, []).append((b, elp, sd))
        for s, col in cols.items():
            # solved form of 2a + b + s + bs = 1
            b_star = (1 - 2 * a - s) / (1 + s)
            first_sd = min(b for b, _, sd in col if sd == "M")
            first_elp = min(b for b, elp, _ in col if elp == "M")
            if b_star > 0:
                curved_cols += a == 0.3
                worst_gap = max(worst_gap, abs(first_sd - b_star), abs(first_elp - b_star))
            elif a == 0.6:
                lower_left_full &= first_sd == col[0][0] and first_elp == col[0][0]
    ok = violations == 0 and worst_gap <= cell and curved_cols > 0 and lower_left_full
    record(9, ok, f"lattice violations {violations}; boundary gap {worst_gap:.4f} <= cell {cell:.4f} "
                  f"over {curved_cols} columns; a=0.6 without curved edge: {lower_left_full}")


def test_criterion_10_thorin_mass():
    msgs, ok = [], True
    for t in [(1, 1, 1), (1, 2, 1)]:
        rep = thorin_mass_probe(Params(*t))
        ok &= rep.passed
        msgs.append(f"{t}: {len(rep.failures())} of {len(rep.cases)} failed")
    record(10, ok, "; ".join(msgs))


def test_criterion_11_malmsten():
    rep = verify_malmsten()
    c11 = [c for c in rep.cases if "Euler" in c.label][0]
    ok = rep.passed and abs(c11.detail["value"] + 0.5772156649) <= 1e-8
    record(11, ok, f"{_worst(rep)}; c11 = {c11.detail['value']!r}")


def test_criterion_12_limits():
    rep = verify_limits()
    endpoint = [c for c in rep.cases if c.label.startswith("exponent limit s=1") and "endpoint" in c.label][0]
    ok = rep.passed and endpoint.discrepancy < 0.02
    record(12, ok, f"{_worst(rep)}; endpoint error at b=1e3, s=1: {endpoint.discrepancy:.4f}")


def test_criterion_13_stieltjes():
    peaks = []
    for t in HCM_MEMBERS:
        rep = stieltjes_sign_scan(Params(*t), expect_member=True)
        peaks.append(rep.cases[0].detail["max_im"])
    witness = stieltjes_sign_scan(Params(0.1, 2, 0.3), expect_member=False).cases[0].detail["max_im"]
    ok = len(HCM_MEMBERS) == 10 and max(peaks) <= 1e-9 and witness > 0
    record(13, ok, f"max Im G' over members {max(peaks):.2e}; witness (0.1, 2, 0.3) peak {witness:.3g}")


def test_criterion_14_probe_consistency():
    from betadiv.verify import KERNEL_B, PROBE_TRIPLES, _suite_probes

    rep = _suite_probes()
    assert set(KERNEL_B) == {1.0, 1.5, 2.0, 2.5, 3.0} and len(PROBE_TRIPLES) >= 5
    record(14, rep.passed, _worst(rep))
