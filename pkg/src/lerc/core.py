"""Domain types for scalar uncertain linear systems and finite-gain accounting.

The plant is

    x(t+1) = a x(t) + b u(t) + w(t),    x(0) = x0
    y(t)   = c x(t) + v(t)

and a closed loop has l2-gain at most gamma from (w, v) to x when

    alpha(T) = sum_{tau<=T+1} x^2 - gamma^2 sum_{tau<=T} w^2
               - gamma^2 sum_{tau<=T+1} v^2 - P x0^2  <=  0

for every T >= 0.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np


class ContractError(ValueError):
    """Raised when an operation is called outside its documented domain."""


class DomainError(ValueError):
    """Raised when a formula is evaluated where it is not defined."""


class GainInfeasible(ValueError):
    """Raised when P < 1, so gamma cannot bound the l2-gain."""


@dataclass(frozen=True)
class Model:
    a: float
    b: float
    c: float = 1.0

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ContractError(f"model field {name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    def as_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "c": self.c}


@dataclass(frozen=True)
class ModelSet:
    models: tuple[Model, ...]

    def __post_init__(self):
        models = tuple(self.models)
        if not models:
            raise ContractError("a model set needs at least one model")
        if len(set(models)) != len(models):
            raise ContractError("duplicate models in model set")
        object.__setattr__(self, "models", models)

    def __len__(self):
        return len(self.models)

    def __iter__(self):
        return iter(self.models)

    def __getitem__(self, i):
        return self.models[i]

    @classmethod
    def sign_family(cls, a: float) -> "ModelSet":
        """The unknown-input-sign pair {(a, +1, 1), (a, -1, 1)}."""
        return cls((Model(a, 1.0, 1.0), Model(a, -1.0, 1.0)))

    def to_json(self) -> str:
        return json.dumps({"models": [m.as_dict() for m in self.models]})

    @classmethod
    def from_json(cls, text: str) -> "ModelSet":
        data = json.loads(text)
        try:
            entries = data["models"]
            return cls(tuple(Model(e["a"], e["b"], e["c"]) for e in entries))
        except (KeyError, TypeError) as exc:
            raise ContractError(f"malformed model set JSON: {exc}") from exc


@dataclass(frozen=True)
class GainSpec:
    gamma: float

    def __post_init__(self):
        gamma = float(self.gamma)
        if not gamma > 0 or not math.isfinite(gamma):
            raise ContractError(f"gamma must be positive and finite, got {gamma!r}")
        object.__setattr__(self, "gamma", gamma)


def _frozen(values, length: int, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.shape != (length,):
        raise ContractError(f"{name} must have length {length}, got shape {arr.shape}")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SimulationTrace:
    """Time-indexed record of one closed-loop run.

    Lengths for horizon T: x, y, v have T+2 entries (one more measurement
    than control), u and w have T+1, and alpha has T+1. ``xhat`` and ``l``
    hold one row per model of the observer bank, T+2 columns each.
    """

    model: Model
    gamma: float
    horizon: int
    x: np.ndarray
    u: np.ndarray
    y: np.ndarray
    w: np.ndarray
    v: np.ndarray
    xhat: np.ndarray = None
    l: np.ndarray = None
    alpha: np.ndarray = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        T = int(self.horizon)
        if T < 0:
            raise ContractError("horizon must be >= 0")
        object.__setattr__(self, "horizon", T)
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "x", _frozen(self.x, T + 2, "x"))
        object.__setattr__(self, "u", _frozen(self.u, T + 1, "u"))
        object.__setattr__(self, "y", _frozen(self.y, T + 2, "y"))
        object.__setattr__(self, "w", _frozen(self.w, T + 1, "w"))
        object.__setattr__(self, "v", _frozen(self.v, T + 2, "v"))
        for name in ("xhat", "l"):
            value = getattr(self, name)
            arr = np.zeros((0, T + 2)) if value is None else np.array(value, dtype=float)
            if arr.ndim != 2 or arr.shape[1] != T + 2:
                raise ContractError(f"{name} must have shape (n_models, {T + 2})")
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)
        if self.alpha is not None:
            object.__setattr__(self, "alpha", _frozen(self.alpha, T + 1, "alpha"))

    @property
    def x0(self) -> float:
        return float(self.x[0])


def alpha_direct(trace: SimulationTrace, P: float, T: int) -> float:
    """Accumulated finite-gain cost alpha(T) of ``trace``, signed and unclamped."""
    if not 0 <= T <= trace.horizon:
        raise ContractError(f"T={T} outside [0, {trace.horizon}]")
    g2 = trace.gamma**2
    x = trace.x[: T + 2]
    w = trace.w[: T + 1]
    v = trace.v[: T + 2]
    return float(np.dot(x, x) - g2 * np.dot(w, w) - g2 * np.dot(v, v) - P * x[0] ** 2)


def check_dynamics(trace: SimulationTrace) -> None:
    """Recompute x and y from (x0, u, w, v) and require an exact match."""
    m = trace.model
    x = trace.x[0]
    for t in range(trace.horizon + 1):
        if trace.y[t] != m.c * trace.x[t] + trace.v[t]:
            raise ContractError(f"measurement equation violated at t={t}")
        x = m.a * x + m.b * trace.u[t] + trace.w[t]
        if x != trace.x[t + 1]:
            raise ContractError(f"state equation violated at t={t}")
    T1 = trace.horizon + 1
    if trace.y[T1] != m.c * trace.x[T1] + trace.v[T1]:
        raise ContractError(f"measurement equation violated at t={T1}")
