"""Bank of H-infinity observers paired with recursively computed past costs.

Each model M runs

    xhat(t+1) = a_hat xhat(t) + b u(t) + g_hat y(t),          xhat(0) = 0
    l(t+1)    = l(t) - P xhat^2 - gamma^2 y^2
                + (P xhat + gamma^2 c y)^2 / X,                l(0) = 0

and the closed loop has gain at most gamma under M iff l(t+1) <= 0 for all t.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

from .core import ContractError, GainInfeasible, Model, ModelSet
from .riccati import SolvedModel, require_feasible, solve_riccati

TOL_NEG = 1e-9


def past_cost_update(solved: SolvedModel, x_hat: float, l: float, y: float) -> float:
    """One step of the past-cost recursion, without the P >= 1 guard."""
    P, g2, c = solved.P, solved.gamma**2, solved.model.c
    return l - P * x_hat * x_hat - g2 * y * y + (P * x_hat + g2 * c * y) ** 2 / solved.X


@dataclass(frozen=True)
class ObserverState:
    solved: SolvedModel
    x_hat: float = 0.0
    l: float = 0.0
    t: int = 0

    @classmethod
    def initial(cls, solved: SolvedModel) -> "ObserverState":
        return cls(require_feasible(solved))


def observer_step(state: ObserverState, u: float, y: float) -> ObserverState:
    s = state.solved
    # u added last so that a dead-beat u cancels the prediction exactly
    x_next = (s.a_hat * state.x_hat + s.g_hat * y) + s.model.b * u
    l_next = past_cost_update(s, state.x_hat, state.l, y)
    return ObserverState(s, x_next, l_next, state.t + 1)


def alpha_closed_form(state: ObserverState, y: float) -> float:
    """Worst-case cost l(t+1) implied by measuring y(t), without stepping."""
    if state.solved.P < 1.0:
        raise GainInfeasible(f"P={state.solved.P!r} < 1: cost is unbounded in y")
    return past_cost_update(state.solved, state.x_hat, state.l, y)


@dataclass(frozen=True)
class InformationState:
    bank: tuple[ObserverState, ...]
    t: int = 0

    def __post_init__(self):
        bank = tuple(self.bank)
        if not bank:
            raise ContractError("empty observer bank")
        if any(s.t != self.t for s in bank):
            raise ContractError("observer times disagree with bank time")
        if len({s.solved.gamma for s in bank}) != 1:
            raise ContractError("observers built for different gamma")
        object.__setattr__(self, "bank", bank)

    @classmethod
    def create(cls, models: ModelSet | Iterable[Model], gamma: float) -> "InformationState":
        return cls(tuple(ObserverState.initial(solve_riccati(m, gamma)) for m in models))

    @property
    def x_hats(self) -> tuple[float, ...]:
        return tuple(s.x_hat for s in self.bank)

    @property
    def costs(self) -> tuple[float, ...]:
        return tuple(s.l for s in self.bank)

    def with_costs(self, costs) -> "InformationState":
        # synthetic states for tests and what-if analysis
        return InformationState(tuple(replace(s, l=float(c)) for s, c in zip(self.bank, costs)), self.t)


def bank_step(info: InformationState, u: float, y: float) -> InformationState:
    return InformationState(tuple(observer_step(s, u, y) for s in info.bank), info.t + 1)


def finite_gain_ok(info: InformationState, tol: float = TOL_NEG) -> bool:
    return all(s.l <= tol for s in info.bank)
