"""Closed-form gain certification for the certainty-equivalence controller.

With P the c = 1 Riccati solution, a pair (a, gamma) is certified when

    P > 1,
    P > 2 gamma - 1                                              (curvature)
    (P + 2g^2 - 1)(P - 1 - 2 sqrt(g^2 - P))^2
        >= (P - 1)((P + 1)^2 - 4 g^2)                            (strong negativity)

Certified pairs keep max_i l_i <= 0 and min_i l_i <= -P/(P-1) xhat^2 for all
time, hence l2-gain at most gamma.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ce_controller import CeController, MergedState, merged_step
from .core import DomainError, Model
from .riccati import solve_riccati

SCAN_STEPS = 256
_RADICAND_TOL = 1e-12


class NotFound(RuntimeError):
    """No certified gamma below twice the analytic upper bound."""


class BoundViolation(RuntimeError):
    """gamma_star fell outside the analytic bracket."""

    def __init__(self, message, gamma):
        super().__init__(message)
        self.gamma = gamma


def lower_bound(a: float) -> float:
    r = math.sqrt(a * a + 1.0)
    return (abs(a) + r) * r


def upper_bound(a: float) -> float:
    return 2.1 * a * a + 2.0


def _radical(P: float, gamma: float) -> float:
    r = gamma * gamma - P
    if r < -_RADICAND_TOL * max(1.0, gamma * gamma):
        raise DomainError(f"gamma^2 - P = {r!r} < 0")
    return math.sqrt(max(r, 0.0))


def curvature_condition(P: float, gamma: float) -> bool:
    return P > 2.0 * gamma - 1.0


def strong_negativity(P: float, gamma: float) -> bool:
    s = _radical(P, gamma)
    g2 = gamma * gamma
    return (P + 2.0 * g2 - 1.0) * (P - 1.0 - 2.0 * s) ** 2 >= (P - 1.0) * ((P + 1.0) ** 2 - 4.0 * g2)


@dataclass(frozen=True)
class CertificationReport:
    a: float
    gamma: float
    P: float
    p_feasible: bool
    curvature_ok: bool
    negativity_ok: bool

    @property
    def certified(self) -> bool:
        return self.p_feasible and self.curvature_ok and self.negativity_ok

    def as_dict(self) -> dict:
        return {
            "a": self.a,
            "gamma": self.gamma,
            "P": self.P,
            "p_feasible": self.p_feasible,
            "curvature_ok": self.curvature_ok,
            "negativity_ok": self.negativity_ok,
            "certified": self.certified,
        }


def certify(a: float, gamma: float) -> CertificationReport:
    solved = solve_riccati(Model(a, 1.0, 1.0), gamma)
    if not solved.feasible:
        return CertificationReport(a, gamma, math.nan, False, False, False)
    P = solved.P
    return CertificationReport(
        a, gamma, P, P > 1.0, curvature_condition(P, gamma), strong_negativity(P, gamma)
    )


def _certified(a, gamma):
    return certify(a, gamma).certified


def gamma_star(a: float, tol: float = 1e-6) -> float:
    """Least certified gamma for pole a, to within ``tol``.

    Scans upward from the lower bound in (upper - lower)/256 steps to the first
    uncertified -> certified transition, then bisects it. Certification is not
    assumed monotone beyond that crossing.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo_b, hi_b = lower_bound(a), upper_bound(a)
    step = (hi_b - lo_b) / SCAN_STEPS
    if _certified(a, lo_b):
        # walk down until the certificate fails
        hi = lo_b
        lo = lo_b - step
        while lo > 0 and _certified(a, lo):
            hi, lo = lo, lo - step
        lo = max(lo, 0.0)
    else:
        lo = lo_b
        k = 1
        while True:
            g = lo_b + k * step
            if g > 2.0 * hi_b:
                raise NotFound(f"no certified gamma below {2.0 * hi_b} for a={a}")
            if _certified(a, g):
                hi = g
                break
            lo = g
            k += 1
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if _certified(a, mid):
            hi = mid
        else:
            lo = mid
    if not lo_b - tol <= hi <= hi_b + tol:
        raise BoundViolation(f"gamma_star={hi!r} outside [{lo_b!r}, {hi_b!r}] for a={a}", hi)
    return hi


@dataclass(frozen=True)
class IntervalPair:
    """Sets of the shifted measurement z = y + P xhat/(2 gamma^2) where each
    upper-bounded cost exceeds the threshold -P/(P-1) xhat(t+1)^2.

    Endpoints are per unit xhat; use :meth:`scaled` for a concrete xhat.
    """

    i1_lo: float
    i1_hi: float
    im1_lo: float
    im1_hi: float

    def disjoint(self, tol: float = 1e-9) -> bool:
        return self.i1_hi <= self.im1_lo + tol

    def scaled(self, x_hat: float) -> "IntervalPair":
        # negative xhat mirrors both intervals through the origin
        i1 = sorted((self.i1_lo * x_hat, self.i1_hi * x_hat))
        im1 = sorted((self.im1_lo * x_hat, self.im1_hi * x_hat))
        return IntervalPair(i1[0], i1[1], im1[0], im1[1])


def interval_pair(P: float, gamma: float) -> IntervalPair:
    g2 = gamma * gamma
    if not P > 1.0:
        raise DomainError(f"P={P!r} must exceed 1")
    curv = (P + 1.0) ** 2 - 4.0 * g2
    if not curv > 0:
        raise DomainError("curvature condition fails: (P+1)^2 <= 4 gamma^2")
    s = _radical(P, gamma)
    h = P / (2.0 * g2)
    r = 2.0 * s / (P - 1.0)
    k = h * (P + 2.0 * g2 - 1.0) / curv
    return IntervalPair(h / (1.0 + r), h / (1.0 - r), k * (P - 1.0 - 2.0 * s), k * (P - 1.0 + 2.0 * s))


@dataclass(frozen=True)
class SweepRow:
    a: float
    gamma_star: float
    lower_bound: float
    upper_bound: float
    P: float
    p_feasible: bool
    curvature_ok: bool
    negativity_ok: bool
    error: str = ""

    @property
    def in_bounds(self) -> bool:
        return self.lower_bound <= self.gamma_star <= self.upper_bound


SWEEP_HEADER = ("a", "gamma_star", "lower_bound", "upper_bound", "P", "p_feasible", "curvature_ok", "negativity_ok")


def sweep_row(a: float, tol: float = 1e-6) -> SweepRow:
    lo, hi = lower_bound(a), upper_bound(a)
    try:
        g = gamma_star(a, tol)
    except (NotFound, BoundViolation) as exc:
        g = getattr(exc, "gamma", math.nan)
        rep = certify(a, g) if math.isfinite(g) else None
        if rep is None:
            return SweepRow(a, math.nan, lo, hi, math.nan, False, False, False, str(exc))
        return SweepRow(a, g, lo, hi, rep.P, rep.p_feasible, rep.curvature_ok, rep.negativity_ok, str(exc))
    rep = certify(a, g)
    return SweepRow(a, g, lo, hi, rep.P, rep.p_feasible, rep.curvature_ok, rep.negativity_ok)


def sweep_grid(a_values, tol: float = 1e-6) -> list[SweepRow]:
    return [sweep_row(float(a), tol) for a in a_values]


def sweep(a_min: float, a_max: float, steps: int, tol: float = 1e-6) -> list[SweepRow]:
    if steps < 2:
        raise ValueError("steps must be >= 2")
    return sweep_grid(np.linspace(a_min, a_max, steps), tol)


@dataclass(frozen=True)
class QuadRow:
    y: float
    l1_next: float
    lm1_next: float
    threshold: float


QUADFUNS_HEADER = ("y", "l1_next", "lm1_next", "threshold")


def figure_quadfuns(a: float, gamma: float, x_hat: float, l1: float, lm1: float, y_grid) -> list[QuadRow]:
    """Next-step costs of both models and the propagation threshold over ``y_grid``."""
    ctrl = CeController.from_gain(a, gamma)
    state = MergedState(x_hat, l1, lm1)
    ratio = ctrl.P / (ctrl.P - 1.0)
    rows = []
    for y in y_grid:
        nxt = merged_step(ctrl, state, float(y))
        rows.append(QuadRow(float(y), nxt.l1, nxt.lm1, -ratio * nxt.x_hat**2))
    return rows


def default_quadfuns(a: float = 1.0, gamma: float = 4.0, x_hat: float = 1.0, y_grid=None) -> list[QuadRow]:
    """Costs at l1 = 0, l_-1 = -P/(P-1) xhat^2, the worst state the certificate allows."""
    P = CeController.from_gain(a, gamma).P
    if y_grid is None:
        y_grid = np.linspace(0.3, 0.9, 121)
    return figure_quadfuns(a, gamma, x_hat, 0.0, -P / (P - 1.0) * x_hat**2, y_grid)
