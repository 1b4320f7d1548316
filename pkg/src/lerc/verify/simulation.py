"""Seeded disturbance plans and closed-loop simulation under the dead-beat controller."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..ce_controller import CeController, closed_loop_step
from ..core import ContractError, Model, SimulationTrace, alpha_direct

PLAN_KINDS = ("zero", "impulse", "white", "sine", "adversarial")
PRNG_NAME = "numpy.random.PCG64"
SINE_PERIOD = 16


@dataclass(frozen=True)
class DisturbancePlan:
    """Recipe for one disturbance signal.

    white: amplitude * N(0, 1) from PCG64 seeded with ``seed``.
    impulse: amplitude at t = 0. sine: amplitude * sin(2 pi t / 16).
    adversarial: chosen by coordinate ascent against the closed loop.
    """

    kind: str = "zero"
    seed: int = 0
    amplitude: float = 1.0
    horizon: int = 0
    restarts: int = 20

    def __post_init__(self):
        if self.kind not in PLAN_KINDS:
            raise ContractError(f"unknown plan kind {self.kind!r}")
        if not math.isfinite(self.amplitude):
            raise ContractError("amplitude must be finite")
        if self.horizon < 0:
            raise ContractError("horizon must be >= 0")

    def realize(self, length: int) -> np.ndarray:
        if self.kind == "white":
            rng = np.random.Generator(np.random.PCG64(self.seed))
            return self.amplitude * rng.standard_normal(length)
        out = np.zeros(length)
        if self.kind == "impulse" and length:
            out[0] = self.amplitude
        elif self.kind == "sine":
            out = self.amplitude * np.sin(2.0 * np.pi * np.arange(length) / SINE_PERIOD)
        return out


def run_closed_loop(ctrl: CeController, b_true: float, x0: float, w, v) -> dict:
    """Simulate with explicit signals; len(v) == len(w) + 1."""
    T = len(w) - 1
    x = np.empty(T + 2)
    y = np.empty(T + 2)
    u = np.empty(T + 1)
    xhat = np.empty((2, T + 2))
    l = np.empty((2, T + 2))
    info = ctrl.observers()
    x[0] = x0
    for t in range(T + 1):
        xhat[:, t] = info.x_hats
        l[:, t] = info.costs
        y[t] = x[t] + v[t]
        u[t], info = closed_loop_step(ctrl, info, y[t])
        x[t + 1] = ctrl.a * x[t] + b_true * u[t] + w[t]
    y[T + 1] = x[T + 1] + v[T + 1]
    xhat[:, T + 1] = info.x_hats
    l[:, T + 1] = info.costs
    return {"x": x, "y": y, "u": u, "xhat": xhat, "l": l}


def simulate_closed_loop(a: float, b_true: float, gamma: float, x0: float,
                         plan_w: DisturbancePlan, plan_v: DisturbancePlan, T: int) -> SimulationTrace:
    if b_true not in (1, -1):
        raise ContractError("b_true must be +1 or -1")
    ctrl = CeController.from_gain(a, gamma)
    w = plan_w.realize(T + 1)
    v = plan_v.realize(T + 2)
    meta = {"prng": PRNG_NAME, "a": a, "b_true": b_true, "gamma": gamma, "P": ctrl.P,
            "plan_w": plan_w.kind, "plan_v": plan_v.kind, "seed_w": plan_w.seed, "seed_v": plan_v.seed}
    if "adversarial" in (plan_w.kind, plan_v.kind):
        from .adversary import coordinate_ascent

        free_w = plan_w.kind == "adversarial"
        free_v = plan_v.kind == "adversarial"
        seed = plan_w.seed if free_w else plan_v.seed
        restarts = plan_w.restarts if free_w else plan_v.restarts
        res = coordinate_ascent(ctrl, (b_true,), T, restarts, seed, x0=x0, w=w, v=v,
                                free_x0=False, free_w=free_w, free_v=free_v)
        w, v = res.worst_plan.w, res.worst_plan.v
        meta["adversarial_ratio"] = res.best_ratio
    sig = run_closed_loop(ctrl, float(b_true), float(x0), w, v)
    trace = SimulationTrace(Model(a, float(b_true), 1.0), gamma, T, sig["x"], sig["u"], sig["y"], w, v,
                            sig["xhat"], sig["l"], None, meta)
    alpha = [alpha_direct(trace, ctrl.P, t) for t in range(T + 1)]
    return SimulationTrace(trace.model, gamma, T, trace.x, trace.u, trace.y, trace.w, trace.v,
                           trace.xhat, trace.l, alpha, meta)


TRACE_HEADER = ("t", "x", "u", "y", "w", "v", "xhat_1", "xhat_m1", "l_1", "l_m1", "alpha")


def trace_rows(trace: SimulationTrace):
    """Rows for the trace CSV; u, w and alpha are blank at t = T+1."""
    T = trace.horizon
    for t in range(T + 2):
        last = t == T + 1
        yield (t, trace.x[t], None if last else trace.u[t], trace.y[t], None if last else trace.w[t],
               trace.v[t], trace.xhat[0, t], trace.xhat[1, t], trace.l[0, t], trace.l[1, t],
               None if last or trace.alpha is None else trace.alpha[t])
