"""Certainty-equivalence dead-beat control for the unknown-input-sign pair.

Models are (a, +1, 1) and (a, -1, 1) with a known. Both share P, a_hat and
g_hat because the Riccati solution does not involve b.
The controller acts as if the model with the larger worst-case cost were true
and zeroes that model's observer in one step.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import GainInfeasible, Model, ModelSet
from .observer import (
    InformationState,
    ObserverState,
    alpha_closed_form,
    bank_step,
    past_cost_update,
)
from .riccati import SolvedModel, require_feasible, solve_riccati


@dataclass(frozen=True)
class CeController:
    a: float
    gamma: float
    P: float
    X: float
    a_hat: float
    g_hat: float

    @classmethod
    def from_gain(cls, a: float, gamma: float) -> "CeController":
        s = require_feasible(solve_riccati(Model(a, 1.0, 1.0), gamma))
        if not s.P > 1.0:
            raise GainInfeasible(f"P={s.P!r} must exceed 1 at a={a}, gamma={gamma}")
        return cls(float(a), float(gamma), s.P, s.X, s.a_hat, s.g_hat)

    @property
    def models(self) -> ModelSet:
        return ModelSet.sign_family(self.a)

    def solved(self, b: float) -> SolvedModel:
        return SolvedModel(Model(self.a, b, 1.0), self.gamma, self.P, self.X, self.a_hat, self.g_hat)

    def observers(self) -> InformationState:
        """Fresh bank ordered (b = +1, b = -1)."""
        return InformationState((ObserverState(self.solved(1.0)), ObserverState(self.solved(-1.0))))


def control(ctrl: CeController, x_hat_1: float, x_hat_m1: float, l1_next: float, lm1_next: float, y: float) -> float:
    """Dead-beat input for the model whose cost l_i(t+1) is larger; ties go to b = +1."""
    if l1_next >= lm1_next:
        return -(ctrl.a_hat * x_hat_1 + ctrl.g_hat * y)
    return ctrl.a_hat * x_hat_m1 + ctrl.g_hat * y


def policy(ctrl: CeController, info: InformationState, y: float) -> float:
    """Observer-based policy: evaluate both l_i(t+1) from y(t), then select."""
    o1, om1 = info.bank
    return control(ctrl, o1.x_hat, om1.x_hat, alpha_closed_form(o1, y), alpha_closed_form(om1, y), y)


def closed_loop_step(ctrl: CeController, info: InformationState, y: float) -> tuple[float, InformationState]:
    u = policy(ctrl, info, y)
    return u, bank_step(info, u, y)


@dataclass(frozen=True)
class MergedState:
    """Single-observer form: x_hat is the sum of both observers, one of which is 0."""

    x_hat: float = 0.0
    l1: float = 0.0
    lm1: float = 0.0
    t: int = 0

    def split(self) -> tuple[float, float]:
        """(xhat_1, xhat_m1): the observer with the weakly larger cost sits at 0."""
        return (0.0, self.x_hat) if self.l1 >= self.lm1 else (self.x_hat, 0.0)


def merged_step(ctrl: CeController, s: MergedState, y: float) -> MergedState:
    x1, xm1 = s.split()
    solved = ctrl.solved(1.0)
    l1 = past_cost_update(solved, x1, s.l1, y)
    lm1 = past_cost_update(solved, xm1, s.lm1, y)
    return MergedState(ctrl.a_hat * s.x_hat + 2.0 * ctrl.g_hat * y, l1, lm1, s.t + 1)


def equivalence_check(ctrl: CeController, y_seq) -> float:
    """Max deviation between the two-observer bank and the merged recursion."""
    info = ctrl.observers()
    merged = MergedState()
    worst = 0.0
    for y in y_seq:
        y = float(y)
        _, info = closed_loop_step(ctrl, info, y)
        merged = merged_step(ctrl, merged, y)
        (x1, l1), (xm1, lm1) = ((o.x_hat, o.l) for o in info.bank)
        worst = max(worst, abs(merged.x_hat - (x1 + xm1)), abs(merged.l1 - l1), abs(merged.lm1 - lm1))
    return worst
