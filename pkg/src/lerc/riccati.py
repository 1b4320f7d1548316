"""Stationary scalar H-infinity Riccati solution and the observer gains it induces."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import DomainError, Model

RESIDUAL_TOL = 1e-10
_X_GUARD = 1e-14


class InfeasibleError(ValueError):
    """Raised when a feasible Riccati solution is required but none exists."""


@dataclass(frozen=True)
class Infeasible:
    """No positive stationary solution exists for (model, gamma)."""

    model: Model
    gamma: float
    reason: str

    feasible = False


@dataclass(frozen=True)
class SolvedModel:
    model: Model
    gamma: float
    P: float
    X: float
    a_hat: float
    g_hat: float

    feasible = True

    @property
    def feasible_gain(self) -> bool:
        # P < 1 means gamma is not an upper bound on the gain
        return self.P >= 1.0

    @classmethod
    def from_p(cls, model: Model, gamma: float, P: float) -> "SolvedModel":
        """Derive X, a_hat and g_hat from a given P (no Riccati check)."""
        X = P + gamma**2 * model.c**2 - 1.0
        return cls(model, gamma, P, X, model.a * P / X, gamma**2 * model.a * model.c / X)


def riccati_map(P: float, model: Model, gamma: float) -> float:
    """Right-hand side of the fixed-point form P = (a^2/X + 1/gamma^2)^-1."""
    X = P + gamma**2 * model.c**2 - 1.0
    if abs(X) < _X_GUARD:
        raise DomainError("P + gamma^2 c^2 - 1 vanishes")
    denom = model.a**2 / X + gamma**-2
    if abs(denom) < _X_GUARD:
        raise DomainError("a^2/X + gamma^-2 vanishes")
    return 1.0 / denom


def riccati_residual(P: float, model: Model, gamma: float) -> float:
    return P - riccati_map(P, model, gamma)


def larger_root(model: Model, gamma: float) -> float | None:
    """Larger root of P^2 + B P + C = 0, the polynomial form of the fixed point.

    Returns None when the roots are complex. Uses the cancellation-free
    branch of the quadratic formula.
    """
    g2 = gamma**2
    B = model.a**2 * g2 - g2 + g2 * model.c**2 - 1.0
    C = -g2 * (g2 * model.c**2 - 1.0)
    disc = B * B - 4.0 * C
    if disc < 0:
        return None
    sq = math.sqrt(disc)
    if B <= 0:
        return (-B + sq) / 2.0
    if sq + B == 0:
        return 0.0
    return -2.0 * C / (B + sq)


def closed_form_p(a: float, gamma: float) -> float:
    """The c = 1 closed form 1/2 (1 - g^2 a^2) + sqrt(g^2 (g^2 - 1) + (g^2 a^2 - 1)^2 / 4)."""
    g2 = gamma**2
    return 0.5 * (1.0 - g2 * a * a) + math.sqrt(g2 * (g2 - 1.0) + (g2 * a * a - 1.0) ** 2 / 4.0)


def solve_riccati(model: Model, gamma: float) -> SolvedModel | Infeasible:
    if not gamma > 0:
        raise DomainError(f"gamma must be positive, got {gamma!r}")
    P = larger_root(model, gamma)
    if P is None:
        return Infeasible(model, gamma, "complex roots")
    if P <= 0:
        return Infeasible(model, gamma, f"largest root {P!r} is not positive")
    # X = 0 is a spurious root introduced by clearing the denominator
    if P + gamma**2 * model.c**2 - 1.0 <= _X_GUARD * max(1.0, P):
        return Infeasible(model, gamma, "P + gamma^2 c^2 - 1 <= 0")
    P = riccati_map(P, model, gamma)
    residual = riccati_residual(P, model, gamma)
    if not abs(residual) < RESIDUAL_TOL * max(1.0, P):
        raise ArithmeticError(f"Riccati residual {residual!r} too large at P={P!r}")
    return SolvedModel.from_p(model, gamma, P)


def require_feasible(result: SolvedModel | Infeasible) -> SolvedModel:
    if not result.feasible:
        raise InfeasibleError(f"no Riccati solution for {result.model} at gamma={result.gamma}: {result.reason}")
    return result
