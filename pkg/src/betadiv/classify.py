"""Membership verdicts for beta_{a,b}^{-s} in the classes

M    mixtures of exponentials
HCM  hyperbolically completely monotone
ELP  exponential functionals of spectrally negative Levy processes
SD   self-decomposable
ID   infinitely divisible
GGC  generalized Gamma convolutions

All region boundaries are closed or open exactly as the defining
inequalities are written; no tolerance is applied except for b in N.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass

from .betapower import Params
from .levy import is_integer

__all__ = [
    "Status",
    "Verdict",
    "ClassificationReport",
    "classify",
    "c1_c2",
    "logbeta_sd_check",
    "LatticeError",
    "GGC_CONJECTURE_NOTE",
]

GGC_CONJECTURE_NOTE = ("open region: membership is conjectured when b v s >= 1 "
                       "but not established")


class Status(str, enum.Enum):
    MEMBER = "Member"
    NON_MEMBER = "NonMember"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Verdict:
    status: Status
    reason: str

    @property
    def member(self) -> bool:
        return self.status is Status.MEMBER


class LatticeError(AssertionError):
    """Internal inconsistency between verdicts (should never be raised)."""


@dataclass(frozen=True)
class ClassificationReport:
    params: Params
    m_class: Verdict
    hcm_class: Verdict
    elp_class: Verdict
    sd_class: Verdict
    id_class: Verdict
    ggc_class: Verdict
    c1: float
    c2: float

    def verdicts(self) -> dict[str, Verdict]:
        return {
            "m": self.m_class,
            "hcm": self.hcm_class,
            "elp": self.elp_class,
            "sd": self.sd_class,
            "id": self.id_class,
            "ggc": self.ggc_class,
        }

    def to_dict(self) -> dict:
        out = {"params": self.params.as_dict()}
        for key, v in self.verdicts().items():
            out[key] = {"status": v.status.value, "reason": v.reason}
        out["c1"] = self.c1
        out["c2"] = self.c2
        return out

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def c1_c2(p: Params) -> tuple[float, float]:
    """First two Taylor coefficients of (ln g)' at 0.

    C1 = ((1 - 2a)/s - 1)/2 - (b/2)(1/s + 1)
    C2 = 1 + a/s + ((b - 1)/12)(1/s + 1)(1/s + 5)
    """
    a, b, s = p.a, p.b, p.s
    c1 = 0.5 * ((1.0 - 2.0 * a) / s - 1.0) - 0.5 * b * (1.0 / s + 1.0)
    c2 = 1.0 + a / s + (b - 1.0) / 12.0 * (1.0 / s + 1.0) * (1.0 / s + 5.0)
    return c1, c2


def logbeta_sd_check(p: Params) -> bool:
    """-log(beta_{a,b}) is self-decomposable iff 2a + b >= 1 (s is ignored)."""
    return 2.0 * p.a + p.b >= 1.0


def _m_verdict(p: Params) -> Verdict:
    if p.b <= 1.0:
        return Verdict(Status.MEMBER, "density is a mixture of exponentials iff b <= 1")
    return Verdict(Status.NON_MEMBER, "b > 1: ln f is not convex near 0")


def _hcm_verdict(p: Params) -> Verdict:
    a, b, s = p.a, p.b, p.s
    if min(b, s) > 1.0:
        return Verdict(Status.MEMBER, "HCM condition b ^ s > 1")
    if b == 1.0 or s == 1.0:
        return Verdict(Status.MEMBER, "HCM condition b = 1 or s = 1")
    if b < 1.0 and 0.5 <= s < 1.0 and a + b + s >= 1.0:
        return Verdict(Status.MEMBER, "HCM condition b < 1, s in [1/2, 1), a + b + s >= 1")
    return Verdict(Status.NON_MEMBER, "none of the three HCM conditions holds")


def _elp_verdict(p: Params) -> Verdict:
    a, b, s = p.a, p.b, p.s
    t = 2.0 * a + b + s + b * s
    if min(b, s) <= 1.0 <= t:
        return Verdict(Status.MEMBER, f"b ^ s = {min(b, s):g} <= 1 <= 2a+b+s+bs = {t:g}")
    if min(b, s) > 1.0:
        return Verdict(Status.NON_MEMBER, "b ^ s > 1: the spectral density changes sign")
    return Verdict(Status.NON_MEMBER, f"2a+b+s+bs = {t:g} < 1")


def _sd_verdict(p: Params) -> Verdict:
    t = 2.0 * p.a + p.b + p.s + p.b * p.s
    if t >= 1.0:
        return Verdict(Status.MEMBER, f"2a+b+s+bs = {t:g} >= 1")
    return Verdict(Status.NON_MEMBER, f"2a+b+s+bs = {t:g} < 1")


def _ggc_verdict(p: Params, hcm: Verdict, c2: float) -> Verdict:
    if hcm.member:
        return Verdict(Status.MEMBER, "HCM is contained in GGC")
    if is_integer(p.b):
        return Verdict(Status.MEMBER, "b is a positive integer")
    if c2 < 0.0:
        return Verdict(Status.NON_MEMBER, f"C2 = {c2:g} < 0: g is not log-convex at 0")
    return Verdict(Status.UNKNOWN, GGC_CONJECTURE_NOTE)


def _check_lattice(r: ClassificationReport) -> None:
    implications = [
        ("hcm", "ggc"), ("m", "id"), ("elp", "sd"), ("sd", "id"), ("ggc", "sd"),
    ]
    v = r.verdicts()
    for lo, hi in implications:
        if v[lo].member and not v[hi].member:
            raise LatticeError(f"{lo} Member but {hi} not, params {r.params}")
    if not v["id"].member:
        raise LatticeError("id must always be Member")
    for key, verdict in v.items():
        if verdict.status is Status.UNKNOWN and key != "ggc":
            raise LatticeError(f"Unknown verdict for {key}")


def classify(p: Params) -> ClassificationReport:
    """Tri-state verdicts for every class, with the C1, C2 coefficients."""
    c1, c2 = c1_c2(p)
    hcm = _hcm_verdict(p)
    report = ClassificationReport(
        params=p,
        m_class=_m_verdict(p),
        hcm_class=hcm,
        elp_class=_elp_verdict(p),
        sd_class=_sd_verdict(p),
        id_class=Verdict(Status.MEMBER, "infinitely divisible for all a, b, s > 0"),
        ggc_class=_ggc_verdict(p, hcm, c2),
        c1=c1,
        c2=c2,
    )
    _check_lattice(report)
    return report
