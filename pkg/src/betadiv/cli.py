"""betadiv command line.

Exit codes: 0 success, 1 verification or region failure, 2 usage error.
Floats are written with 17 significant digits. BETADIV_THREADS caps the
number of simulation worker threads.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import levy
from .betapower import Params, density_f, g_eval, gb2_density
from .classify import Status, classify
from .levy import NotInELPError, jump_measure, rho
from .sim import (
    MaxEventsExceeded,
    SimConfig,
    direct_mean,
    ks_two_sample,
    sample_direct,
    simulate_gp_perpetuity,
    simulate_perpetuity,
)
from .specfun import DomainError
from .verify import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

VERDICT_CODE = {Status.MEMBER: "M", Status.NON_MEMBER: "N", Status.UNKNOWN: "U"}


class UsageError(Exception):
    pass


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _positive(text: str) -> float:
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be a finite positive number, got {text}")
    return v


def _params(args) -> Params:
    return Params(args.a, args.b, args.s)


@contextlib.contextmanager
def _output(path: Optional[str]):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _add_abs(p: argparse.ArgumentParser, s_default: Optional[float] = None):
    p.add_argument("--a", type=_positive, required=True)
    p.add_argument("--b", type=_positive, required=True)
    if s_default is None:
        p.add_argument("--s", type=_positive, required=True)
    else:
        p.add_argument("--s", type=_positive, default=s_default)


# classify ------------------------------------------------------------------

def run_classify(args) -> int:
    report = classify(_params(args))
    if args.json:
        print(report.to_json(indent=2))
        return EXIT_OK
    p = report.params
    print(f"a={_fmt(p.a)} b={_fmt(p.b)} s={_fmt(p.s)}")
    names = {"m": "mixture of exponentials", "hcm": "HCM", "elp": "ELP-", "sd": "self-decomposable",
             "id": "infinitely divisible", "ggc": "GGC"}
    for key, verdict in report.verdicts().items():
        print(f"  {names[key]:<24} {verdict.status.value:<10} {verdict.reason}")
    print(f"  C1 = {_fmt(report.c1)}")
    print(f"  C2 = {_fmt(report.c2)}")
    return EXIT_OK


# density -------------------------------------------------------------------

def _density_values(kind: str, p: Params, x: np.ndarray) -> np.ndarray:
    if kind == "f":
        return np.asarray(density_f(p, x))
    if kind == "g":
        return np.asarray(g_eval(p, x))
    if kind == "gb2":
        return np.asarray(gb2_density(p, x))
    if kind == "rho":
        return np.asarray(rho(p, x))
    if kind == "nu":
        return np.asarray(jump_measure(p).density(x))
    raise UsageError(f"unknown kind {kind!r}")


def run_density(args) -> int:
    if not args.x_min < args.x_max:
        raise UsageError("--x-min must be below --x-max")
    if args.points < 2:
        raise UsageError("--points must be at least 2")
    p = _params(args)
    # densities may be singular at 0 when b < 1; the grid never goes below 1e-12
    lo = max(args.x_min, 1e-12)
    x = np.geomspace(lo, args.x_max, args.points)
    values = _density_values(args.kind, p, x)
    with _output(args.out) as fh:
        fh.write("x,value\n")
        for xi, vi in zip(x, values):
            fh.write(f"{_fmt(xi)},{_fmt(vi)}\n")
    return EXIT_OK


# levy ----------------------------------------------------------------------

def run_levy(args) -> int:
    p = _params(args)
    cr = classify(p)
    tc = levy.tail_constant(p)
    out = {
        "params": p.as_dict(),
        "rho_0": levy.rho(p, 0.0),
        "rho_prime_0": levy.rho_prime(p, 0.0),
        "killing_rate": levy.killing_rate(p),
        "tail_constant": {"kind": tc.kind.value, "value": tc.value},
        "rho_sign_changes": levy.count_sign_changes(lambda x: levy.rho(p, x), 0.0, args.x_max, 2000),
        "psi": {_fmt(u): levy.psi_exact(p, u) for u in args.u},
        "elp": cr.elp_class.status.value,
    }
    if cr.elp_class.member:
        jm = jump_measure(p)
        out["jump_measure"] = {
            "total_rate": jm.total_rate,
            "closed_form": None if jm.closed_form is None
            else [{"weight": w, "rate": r} for w, r in jm.closed_form.terms],
        }
    print(json.dumps(out, indent=2))
    return EXIT_OK


# simulate ------------------------------------------------------------------

def run_simulate(args) -> int:
    cfg = SimConfig(args.n, args.seed, args.stop_level, args.max_events)
    if args.mode == "gp":
        if not args.b > 1:
            print(f"gp mode requires b > 1, got b = {args.b}", file=sys.stderr)
            return EXIT_FAIL
        batch = simulate_gp_perpetuity(args.a, args.b, cfg)
        ref_params = Params(args.a, args.b, 1.0)
    else:
        p = _params(args)
        ref_params = p
        if args.mode == "perpetuity":
            batch = simulate_perpetuity(p, cfg)
        else:
            batch = sample_direct(p, cfg)
    summary = {
        "generator": batch.generator_label,
        "n": len(batch),
        "seed": args.seed,
        "mean": batch.mean,
        "standard_error": batch.standard_error,
        # null when the moment is infinite (a <= s)
        "exact_mean": _finite_or_none(direct_mean(ref_params)),
        "truncation_bias_bound": batch.truncation_bias_bound,
    }
    if args.mode in ("perpetuity", "gp"):
        ref = sample_direct(ref_params, SimConfig(args.n, (args.seed + 1) % 2**64))
        ks = ks_two_sample(batch, ref)
        summary["ks_vs_direct"] = {"statistic": ks.statistic, "critical_001": ks.critical_001,
                                   "passed": ks.passed}
    if args.out is not None:
        with _output(args.out) as fh:
            fh.write(f"# generator={batch.generator_label}\n")
            fh.write(f"# seed={args.seed}\n")
            fh.write(f"# truncation_bias_bound={_fmt(batch.truncation_bias_bound)}\n")
            fh.write("value\n")
            fh.writelines(f"{_fmt(v)}\n" for v in batch.values)
    stream = sys.stderr if args.out == "-" else sys.stdout
    print(json.dumps(summary, indent=2, default=_json_default), file=stream)
    return EXIT_OK


def _finite_or_none(v: float) -> Optional[float]:
    return v if math.isfinite(v) else None


def _json_default(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    raise TypeError(type(v))


# verify --------------------------------------------------------------------

def run_verify(args) -> int:
    ctx = levy.distorted_rho(args.inject_rho_error) if args.inject_rho_error else contextlib.nullcontext()
    with ctx:
        reports = run_suite(args.suite)
    ok = all(r.passed for r in reports)
    doc = {"passed": ok, "reports": [r.to_dict() for r in reports]}
    with _output(args.out) as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    for r in reports:
        status = "pass" if r.passed else "FAIL"
        print(f"{r.suite}: {status} ({len(r.cases) - len(r.failures())}/{len(r.cases)} cases)",
              file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


# regions -------------------------------------------------------------------

def region_grid(a: float, b_max: float, s_max: float, resolution: int):
    """Cell-centre (s, b) grid with verdict codes, rows ordered by b then s."""
    rows = []
    for j in range(resolution):
        b = (j + 0.5) * b_max / resolution
        for i in range(resolution):
            s = (i + 0.5) * s_max / resolution
            r = classify(Params(a, b, s))
            rows.append((s, b) + tuple(VERDICT_CODE[v.status] for v in
                                       (r.m_class, r.hcm_class, r.elp_class, r.sd_class, r.ggc_class)))
    return rows


def run_regions(args) -> int:
    if args.resolution < 16:
        raise UsageError("--resolution must be at least 16")
    rows = region_grid(args.a, args.b_max, args.s_max, args.resolution)
    with _output(args.out) as fh:
        fh.write("s,b,m,hcm,elp,sd,ggc\n")
        for s, b, *codes in rows:
            fh.write(f"{_fmt(s)},{_fmt(b)},{','.join(codes)}\n")
    return EXIT_OK


# parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="betadiv",
        description="Infinite divisibility numerics for negative powers of Beta variables.",
        epilog="Exit codes: 0 success, 1 verification/region failure, 2 usage error. "
               "BETADIV_THREADS caps simulation threads.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="class membership verdicts")
    _add_abs(p)
    p.add_argument("--json", action="store_true", help="emit JSON")
    p.set_defaults(func=run_classify)

    p = sub.add_parser("density", help="tabulate a density on a geometric grid")
    p.add_argument("--kind", choices=("f", "g", "gb2", "rho", "nu"), required=True)
    _add_abs(p)
    p.add_argument("--x-min", type=_positive, default=1e-3)
    p.add_argument("--x-max", type=_positive, default=10.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--out", help="CSV path (default standard output)")
    p.set_defaults(func=run_density)

    p = sub.add_parser("levy", help="Levy-side summary as JSON")
    _add_abs(p)
    p.add_argument("--u", type=float, nargs="*", default=[0.5, 1.0, 2.0], help="points for Psi")
    p.add_argument("--x-max", type=_positive, default=20.0, help="range of the rho sign scan")
    p.set_defaults(func=run_levy)

    p = sub.add_parser("simulate", help="Monte-Carlo samples and summary")
    _add_abs(p, s_default=1.0)
    p.add_argument("--mode", choices=("perpetuity", "direct", "gp"), default="perpetuity")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stop-level", type=float, default=30.0)
    p.add_argument("--max-events", type=int, default=1_000_000)
    p.add_argument("--out", help="sample CSV path ('-' for standard output)")
    p.set_defaults(func=run_simulate)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    p.add_argument("--out", help="JSON path (default standard output)")
    # harness sensitivity check: distorts rho by a relative amount
    p.add_argument("--inject-rho-error", type=float, default=0.0, help=argparse.SUPPRESS)
    p.set_defaults(func=run_verify)

    p = sub.add_parser("regions", help="verdict grid over (s, b) at fixed a")
    p.add_argument("--a", type=_positive, required=True)
    p.add_argument("--b-max", type=_positive, default=4.0)
    p.add_argument("--s-max", type=_positive, default=4.0)
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--out", help="CSV path (default standard output)")
    p.set_defaults(func=run_regions)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NotInELPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except MaxEventsExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
