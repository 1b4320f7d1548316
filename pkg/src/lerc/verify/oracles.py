"""First-principles oracles for the observer recursions.

None of these use the observer or merged recursions internally; they solve
the underlying maximization problems directly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..core import Model
from ..observer import ObserverState, observer_step
from ..riccati import require_feasible, solve_riccati

GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class Unbounded(ArithmeticError):
    """The constrained quadratic is not concave, so its supremum is +inf."""


class Singular(ArithmeticError):
    """Degenerate stationarity system."""


@dataclass(frozen=True)
class OracleResult:
    recursion_value: float
    oracle_value: float
    abs_gap: float
    argmax_witness: tuple[float, ...]


def _affine_states(model: Model, u_seq: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """x(tau) = S[tau] @ (x0, w(0..t)) + s[tau] for tau = 0..t+1."""
    n = len(u_seq) + 1
    S = np.zeros((n + 1, n))
    s = np.zeros(n + 1)
    S[0, 0] = 1.0
    for tau in range(n - 1):
        S[tau + 1] = model.a * S[tau]
        S[tau + 1, tau + 1] += 1.0
        s[tau + 1] = model.a * s[tau] + model.b * u_seq[tau]
    return S, s


def constrained_sup(model: Model, gamma: float, P: float, u_seq, y_seq, x_next: float):
    """Maximize sum x^2 - gamma^2 sum (w^2 + v^2) - P x0^2 over (x0, w) with
    v = y - c x and x(t+1) = x_next. Returns (value, maximizer)."""
    u = np.asarray(u_seq, dtype=float)
    y = np.asarray(y_seq, dtype=float)
    if u.shape != y.shape or u.ndim != 1 or len(u) == 0:
        raise ValueError("u_seq and y_seq must be equal-length nonempty sequences")
    t = len(u) - 1
    n = t + 2
    g2 = gamma * gamma
    S, s = _affine_states(model, u)
    Sx, sx = S[: t + 1], s[: t + 1]
    # J(z) = z'Hz + 2 q'z + k
    Wsel = np.eye(n)[1:]
    e0 = np.eye(n)[0]
    c = model.c
    H = (1.0 - g2 * c * c) * Sx.T @ Sx - g2 * Wsel.T @ Wsel - P * np.outer(e0, e0)
    q = (1.0 - g2 * c * c) * Sx.T @ sx + g2 * c * Sx.T @ y
    k = (1.0 - g2 * c * c) * sx @ sx + 2.0 * g2 * c * sx @ y - g2 * y @ y
    e = S[t + 1]
    rhs_c = x_next - s[t + 1]

    N = scipy.linalg.null_space(e[None, :])
    if N.size:
        curv = np.linalg.eigvalsh(N.T @ H @ N)
        if curv.max() >= 0:
            raise Unbounded(f"constrained Hessian has eigenvalue {curv.max()!r} >= 0")
    K = np.zeros((n + 1, n + 1))
    K[:n, :n] = 2.0 * H
    K[:n, n] = e
    K[n, :n] = e
    rhs = np.concatenate([-2.0 * q, [rhs_c]])
    if np.linalg.cond(K) > 1e14:
        raise Singular("stationarity system is numerically singular")
    sol = np.linalg.solve(K, rhs)
    z = sol[:n]
    return float(z @ H @ z + 2.0 * q @ z + k), z


def past_cost_oracle(model: Model, gamma: float, u_seq, y_seq, x_next: float) -> OracleResult:
    solved = require_feasible(solve_riccati(model, gamma))
    value, z = constrained_sup(model, gamma, solved.P, u_seq, y_seq, x_next)
    state = ObserverState(solved)
    for u, y in zip(u_seq, y_seq):
        state = observer_step(state, float(u), float(y))
    recursion = -solved.P * (x_next - state.x_hat) ** 2 + state.l
    return OracleResult(recursion, value, abs(recursion - value), tuple(float(v) for v in z))


def final_layer_sup(model: Model, gamma: float, P: float, x_hat: float, l: float, y: float) -> float:
    """sup over (x, v) with c x + v = y of x^2 - gamma^2 v^2 - P (x - x_hat)^2 + l.

    Solved as a 2-variable equality-constrained quadratic via its KKT system.
    """
    g2 = gamma * gamma
    H = np.diag([1.0 - P, -g2])
    q = np.array([P * x_hat, 0.0])
    k = l - P * x_hat * x_hat
    d = np.array([1.0, -model.c])  # null direction of (c, 1)
    if d @ H @ d >= 0:
        raise Unbounded("final layer is not concave on the constraint line")
    K = np.array([[2 * H[0, 0], 0.0, model.c], [0.0, 2 * H[1, 1], 1.0], [model.c, 1.0, 0.0]])
    sol = np.linalg.solve(K, np.array([-2 * q[0], -2 * q[1], y]))
    z = sol[:2]
    return float(z @ H @ z + 2 * q @ z + k)


def golden_max(f, lo: float, hi: float, tol: float = 1e-10) -> tuple[float, float]:
    """Golden-section search for the maximum of a unimodal ``f`` on [lo, hi]."""
    c = hi - GOLDEN * (hi - lo)
    d = lo + GOLDEN * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - GOLDEN * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + GOLDEN * (hi - lo)
            fd = f(d)
    x = 0.5 * (lo + hi)
    return x, f(x)


def worst_y_bruteforce(P: float, gamma: float, x_hat: float, l1: float, lm1: float):
    """Maximize each model's next-step cost over y(t) by golden-section search.

    The model with the weakly larger cost has its observer at 0, the other at
    ``x_hat``. Returns ((y1*, ym1*), (max l1(t+1), max l_-1(t+1))).
    """
    g2 = gamma * gamma
    X = P + g2 - 1.0

    def branch(l, xh):
        return lambda y: l - P * xh * xh - g2 * y * y + (P * xh + g2 * y) ** 2 / X

    x1, xm1 = (0.0, x_hat) if l1 >= lm1 else (x_hat, 0.0)
    start = 10.0 * (abs(x_hat) + 1.0)
    y1, m1 = _widening_max(branch(l1, x1), start)
    ym1, mm1 = _widening_max(branch(lm1, xm1), start)
    return (y1, ym1), (m1, mm1)


def _widening_max(f, bound: float, grow: float = 4.0, limit: float = 1e12):
    # the maximizer scales like 1/(P - 1), so widen until it is interior
    while True:
        y, m = golden_max(f, -bound, bound)
        if abs(y) < 0.9 * bound or bound > limit:
            return y, m
        bound *= grow


@dataclass(frozen=True)
class LemmaReport:
    trials: int
    max_gap: float
    failures: list

    def as_dict(self) -> dict:
        return {"trials": self.trials, "max_gap": self.max_gap, "failures": self.failures}


ORACLE_A_VALUES = (0.0, 0.5, 1.0, 2.0)


def lemma_report(trials: int = 100, horizon: int = 6, seed: int = 0, gamma: float = 4.0,
                 a_values=ORACLE_A_VALUES, tol: float = 1e-8) -> LemmaReport:
    """Compare recursion and oracle on ``trials`` random histories per model.

    Horizons cycle through 1..horizon; u, y and x(t+1) are standard normal.
    """
    rng = np.random.default_rng(seed)
    failures = []
    max_gap = 0.0
    count = 0
    for a in a_values:
        for b in (1.0, -1.0):
            model = Model(a, b, 1.0)
            for i in range(trials):
                h = 1 + i % horizon
                u = rng.standard_normal(h)
                y = rng.standard_normal(h)
                x_next = float(rng.standard_normal())
                res = past_cost_oracle(model, gamma, u, y, x_next)
                count += 1
                max_gap = max(max_gap, res.abs_gap)
                if not res.abs_gap < tol:
                    failures.append({"a": a, "b": b, "trial": i, "horizon": h, "gap": res.abs_gap})
    return LemmaReport(count, max_gap, failures)
