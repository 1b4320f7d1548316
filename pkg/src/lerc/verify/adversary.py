"""Worst-case disturbance search against the dead-beat closed loop.

Coordinate ascent over (x0, w(0..T), v(0..T+1)) maximizing the empirical gain
ratio sum x^2 / (gamma^2 sum w^2 + gamma^2 sum v^2 + P x0^2). A certified
gamma keeps this ratio <= 1. The search is a falsifier, not a certifier.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..ce_controller import CeController

STEP_FACTORS = np.array([0.01, 0.05, 0.2, 0.5, 1.0, 2.0])


def simulate_batch(ctrl: CeController, b: np.ndarray, x0: np.ndarray, w: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorized closed loop: K trajectories at once, returns x of shape (K, T+2)."""
    K, n_w = w.shape
    P, X, g2 = ctrl.P, ctrl.X, ctrl.gamma**2
    ah, gh, a = ctrl.a_hat, ctrl.g_hat, ctrl.a
    x = np.empty((K, n_w + 1))
    x[:, 0] = x0
    xh1 = np.zeros(K)
    xhm = np.zeros(K)
    l1 = np.zeros(K)
    lm = np.zeros(K)
    for t in range(n_w):
        y = x[:, t] + v[:, t]
        gy = g2 * y
        l1n = l1 - P * xh1 * xh1 - g2 * y * y + (P * xh1 + gy) ** 2 / X
        lmn = lm - P * xhm * xhm - g2 * y * y + (P * xhm + gy) ** 2 / X
        p1 = ah * xh1 + gh * y
        pm = ah * xhm + gh * y
        u = np.where(l1n >= lmn, -p1, pm)
        xh1 = p1 + u
        xhm = pm - u
        l1, lm = l1n, lmn
        x[:, t + 1] = a * x[:, t] + b * u + w[:, t]
    return x


def gain_ratio_batch(ctrl: CeController, b, x0, w, v) -> np.ndarray:
    x = simulate_batch(ctrl, b, x0, w, v)
    g2 = ctrl.gamma**2
    num = np.einsum("ij,ij->i", x, x)
    den = g2 * np.einsum("ij,ij->i", w, w) + g2 * np.einsum("ij,ij->i", v, v) + ctrl.P * x0 * x0
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(den > 0, num / den, np.where(num > 0, np.inf, 0.0))
    return r


def gain_ratio(ctrl: CeController, b: float, x0: float, w, v) -> float:
    w = np.asarray(w, dtype=float)[None, :]
    v = np.asarray(v, dtype=float)[None, :]
    return float(gain_ratio_batch(ctrl, np.array([float(b)]), np.array([float(x0)]), w, v)[0])


@dataclass(frozen=True)
class WorstPlan:
    b: float
    x0: float
    w: np.ndarray
    v: np.ndarray
    ratio: float


@dataclass(frozen=True)
class AdversarialResult:
    best_ratio: float
    worst_plan: WorstPlan
    history: tuple[float, ...]


def _split(z, T):
    return z[:, 0], z[:, 1 : T + 2], z[:, T + 2 :]


def coordinate_ascent(ctrl: CeController, b_values, T: int, restarts: int, seed: int, *,
                      x0: float = 0.0, w=None, v=None, free_x0: bool = True, free_w: bool = True,
                      free_v: bool = True, sweeps: int = 2) -> AdversarialResult:
    """Cyclic coordinate ascent, one chain per (restart, b), all chains batched.

    Each coordinate move tries +-{0.01, 0.05, 0.2, 0.5, 1, 2} times the chain's
    RMS amplitude plus zeroing the coordinate, and keeps the best strict
    improvement, so every chain's ratio is non-decreasing.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    n = 2 * T + 4
    free = np.zeros(n, dtype=bool)
    free[0] = free_x0
    free[1 : T + 2] = free_w
    free[T + 2 :] = free_v
    fixed = np.concatenate([[x0], np.zeros(T + 1) if w is None else w, np.zeros(T + 2) if v is None else v])

    rng = np.random.Generator(np.random.PCG64(seed))
    b_arr = np.repeat(np.asarray(b_values, dtype=float)[None, :], restarts, axis=0).ravel()
    C = len(b_arr)
    z = np.where(free, rng.standard_normal((C, n)), fixed)

    def evaluate(zz, bb):
        x0_, w_, v_ = _split(zz, T)
        return gain_ratio_batch(ctrl, bb, x0_, w_, v_)

    f = evaluate(z, b_arr)
    history = [float(f.max())]
    deltas = np.concatenate([STEP_FACTORS, -STEP_FACTORS])
    K = len(deltas) + 1
    b_rep = np.repeat(b_arr, K)
    for _ in range(sweeps):
        for j in np.flatnonzero(free):
            scale = np.sqrt(np.mean(z[:, free] ** 2, axis=1))
            scale[scale == 0] = 1.0
            cand = np.repeat(z, K, axis=0)
            steps = np.concatenate([np.outer(scale, deltas), -z[:, j : j + 1]], axis=1)
            cand[:, j] += steps.ravel()
            fc = evaluate(cand, b_rep).reshape(C, K)
            best = np.argmax(fc, axis=1)
            gain = fc[np.arange(C), best]
            better = gain > f
            z[better, j] = cand.reshape(C, K, n)[better, best[better], j]
            f = np.where(better, gain, f)
        history.append(float(f.max()))

    i = int(np.argmax(f))
    zx = z[i].copy()
    if free.all():
        x0_, w_, v_ = zx[0], zx[1 : T + 2], zx[T + 2 :]
        g2 = ctrl.gamma**2
        den = g2 * w_ @ w_ + g2 * v_ @ v_ + ctrl.P * x0_ * x0_
        if den > 0:
            zx /= np.sqrt(den)
    plan = WorstPlan(float(b_arr[i]), float(zx[0]), zx[1 : T + 2], zx[T + 2 :], float(f[i]))
    return AdversarialResult(float(f[i]), plan, tuple(history))


def adversarial_gain(a: float, gamma: float, T: int, restarts: int, seed: int, sweeps: int = 2) -> AdversarialResult:
    """Largest empirical gain ratio found over both input signs."""
    if T > 200:
        raise ValueError("horizon above 200 is outside the supported range")
    ctrl = CeController.from_gain(a, gamma)
    return coordinate_ascent(ctrl, (1.0, -1.0), T, restarts, seed, sweeps=sweeps)
