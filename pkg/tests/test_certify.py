import math

import numpy as np
import pytest

from lerc.ce_controller import CeController
from lerc.certify import (
    DomainError,
    certify,
    curvature_condition,
    default_quadfuns,
    figure_quadfuns,
    gamma_star,
    interval_pair,
    lower_bound,
    strong_negativity,
    sweep,
    sweep_grid,
    upper_bound,
)
from lerc.verify.oracles import worst_y_bruteforce

from frozen import LM1_QUAD_14, P_14, P_134, RATIO_14, SN_14, SN_134, THRESH_14


def sn_sides(P, gamma):
    s = math.sqrt(gamma**2 - P)
    return (P + 2 * gamma**2 - 1) * (P - 1 - 2 * s) ** 2, (P - 1) * ((P + 1) ** 2 - 4 * gamma**2)


def test_curvature_examples():
    assert curvature_condition(P_14, 4.0)
    assert not curvature_condition(7.0, 4.0)
    assert curvature_condition(2.25, 1.5)


def test_strong_negativity_examples():
    lhs, rhs = sn_sides(P_14, 4.0)
    assert (lhs, rhs) == pytest.approx(SN_14, rel=1e-12)
    assert strong_negativity(P_14, 4.0)
    lhs, rhs = sn_sides(P_134, 3.4)
    assert (lhs, rhs) == pytest.approx(SN_134, rel=1e-12)
    assert not strong_negativity(P_134, 3.4)
    assert strong_negativity(2.25, 1.5)
    assert sn_sides(2.25, 1.5)[0] == pytest.approx(5.75 * 1.5625)


def test_strong_negativity_domain():
    with pytest.raises(DomainError):
        strong_negativity(5.0, 2.0)
    assert strong_negativity(4.0 + 1e-13, 2.0) == strong_negativity(4.0, 2.0)


def test_certify_reports():
    r = certify(1.0, 4.0)
    assert r.certified and r.P == pytest.approx(P_14, abs=1e-13)
    r = certify(1.0, 3.4)
    assert not r.certified and r.p_feasible and r.curvature_ok and not r.negativity_ok
    r = certify(1.0, 1.0)
    assert not r.p_feasible and not r.certified and math.isnan(r.P)


def test_report_invariant():
    for a in np.linspace(-3, 3, 13):
        for g in np.linspace(0.5, 25, 40):
            r = certify(a, g)
            if r.certified:
                assert r.p_feasible and r.curvature_ok and r.negativity_ok


def test_gamma_star_examples():
    assert gamma_star(0.0) == pytest.approx(1.0, abs=1e-6)
    g1 = gamma_star(1.0)
    assert 3.4 < g1 <= 4.0
    assert g1 >= (1 + math.sqrt(2)) * math.sqrt(2)


@pytest.mark.parametrize("a", [-4.0, -1.0, -0.3, 0.0, 0.5, 1.0, 2.5, 6.0])
def test_gamma_star_local_minimality(a):
    tol = 1e-6
    g = gamma_star(a, tol)
    assert certify(a, g + 10 * tol).certified
    assert not certify(a, g - 10 * tol).certified


@pytest.mark.parametrize("a", [0.25, 1.0, 3.0])
def test_gamma_star_even(a):
    assert gamma_star(a) == pytest.approx(gamma_star(-a), abs=1e-6)


def test_gamma_star_agrees_with_dense_scan():
    # independent route: first certified point of a fine uniform grid
    for a in (0.5, 2.0):
        grid = np.linspace(lower_bound(a), upper_bound(a), 20001)
        first = next(g for g in grid if certify(a, g).certified)
        step = grid[1] - grid[0]
        assert first - step - 1e-6 <= gamma_star(a) <= first + 1e-6


def test_interval_examples():
    ip = interval_pair(2.25, 1.5)
    assert (ip.i1_lo, ip.i1_hi) == pytest.approx((0.5, 0.5))
    assert (ip.im1_lo, ip.im1_hi) == pytest.approx((2.3, 2.3))
    assert interval_pair(P_14, 4.0).disjoint()
    ip = interval_pair(P_134, 3.4)
    assert ip.i1_hi > ip.im1_lo and not ip.disjoint()


def test_interval_domain():
    with pytest.raises(DomainError):
        interval_pair(0.5, 1.0)
    with pytest.raises(DomainError):
        interval_pair(7.0, 4.0)


def bounded_costs(P, gamma, x_hat, z):
    """Upper-bounded next costs and threshold as functions of z = y + P xhat/(2 g^2)."""
    g2 = gamma * gamma
    X = P + g2 - 1
    gh_over_a = g2 / X  # only ghat^2 enters via the threshold, eliminated below
    y = z - P * x_hat / (2 * g2)
    l1 = -g2 * y * y + (g2 * y) ** 2 / X
    lm1 = -P / (P - 1) * x_hat**2 - P * x_hat**2 - g2 * y * y + (P * x_hat + g2 * y) ** 2 / X
    # threshold -P/(P-1) xhat(t+1)^2 with xhat(t+1) = 2 ghat z and
    # ghat^2 = (g2/X)^2 a^2 = (g2/X)^2 X (1/P - 1/g2)
    ghat2 = gh_over_a**2 * X * (1 / P - 1 / g2)
    thr = -P / (P - 1) * 4 * ghat2 * z * z
    return l1, lm1, thr


@pytest.mark.parametrize("a,gamma", [(1.0, 4.0), (1.0, 3.4), (0.5, 2.2), (2.0, 10.0), (2.0, 9.0)])
def test_interval_endpoints_by_sampling(a, gamma):
    P = certify(a, gamma).P
    ip = interval_pair(P, gamma)
    top = 1.5 * max(ip.i1_hi, ip.im1_hi) + 1.0
    z = np.linspace(-1, top, 200001)
    l1, lm1, thr = bounded_costs(P, gamma, 1.0, z)
    in1 = z[l1 >= thr]
    inm = z[lm1 >= thr]
    dz = z[1] - z[0]
    assert in1.min() == pytest.approx(ip.i1_lo, abs=2 * dz)
    assert in1.max() == pytest.approx(ip.i1_hi, abs=2 * dz)
    assert inm.min() == pytest.approx(ip.im1_lo, abs=2 * dz)
    assert inm.max() == pytest.approx(ip.im1_hi, abs=2 * dz)


def test_interval_negative_xhat_reflects():
    P = certify(1.0, 4.0).P
    ip = interval_pair(P, 4.0).scaled(-2.0)
    z = np.linspace(-8, 1, 90001)
    l1, lm1, thr = bounded_costs(P, 4.0, -2.0, z)
    assert z[l1 >= thr].max() == pytest.approx(ip.i1_hi, abs=1e-3)
    assert z[lm1 >= thr].min() == pytest.approx(ip.im1_lo, abs=1e-3)
    assert ip.i1_lo <= ip.i1_hi and ip.im1_lo <= ip.im1_hi


def test_interval_inequality_agreement_grid():
    disagreements = 0
    checked = 0
    for a in np.linspace(-4, 4, 30):
        for g in np.linspace(1.05, 45, 30):
            r = certify(a, g)
            if not (r.p_feasible and r.curvature_ok):
                continue
            checked += 1
            disagreements += strong_negativity(r.P, g) != interval_pair(r.P, g).disjoint()
    assert checked > 100 and disagreements == 0


def test_rec_cond_maximum_against_search():
    rng = np.random.default_rng(5)
    for _ in range(50):
        gamma = rng.uniform(1.2, 10)
        P = rng.uniform(1.2, gamma**2)
        x_hat = rng.uniform(-3, 3)
        lm1 = -rng.uniform(0, 5)
        _, (_, mm1) = worst_y_bruteforce(P, gamma, x_hat, 0.0, lm1)
        assert mm1 == pytest.approx(lm1 + P / (P - 1) * x_hat**2, abs=1e-8)


def test_worst_y_examples():
    P = P_14
    _, (m1, mm1) = worst_y_bruteforce(P, 4.0, 0.0, 0.0, -0.7)
    assert mm1 == pytest.approx(-0.7, abs=1e-12)
    _, (m1, mm1) = worst_y_bruteforce(P, 4.0, 1.0, 0.0, -1.2)
    assert mm1 == pytest.approx(-1.2 + RATIO_14, abs=1e-10)
    assert m1 == pytest.approx(0.0, abs=1e-12)


def test_quadfuns_rows():
    rows = figure_quadfuns(1.0, 4.0, 0.0, 0.0, 0.0, [0.0])
    assert (rows[0].l1_next, rows[0].lm1_next, rows[0].threshold) == (0.0, 0.0, 0.0)
    row = default_quadfuns(1.0, 4.0, 1.0, [0.0])[0]
    assert row.l1_next == 0.0
    assert row.lm1_next == pytest.approx(LM1_QUAD_14, abs=1e-12)
    assert row.threshold == pytest.approx(THRESH_14, abs=1e-14)


def test_quadfuns_figure_claims():
    # certified: no y puts both costs above the threshold; uncertified: some y does
    for gamma, overlap in ((4.0, False), (3.4, True)):
        rows = default_quadfuns(1.0, gamma, 1.0, np.linspace(-2, 3, 20001))
        both = [r for r in rows if r.l1_next > r.threshold and r.lm1_next > r.threshold]
        assert bool(both) == overlap


def test_sweep_rows():
    (row,) = sweep_grid([0.0])
    assert row.gamma_star == pytest.approx(1.0, abs=1e-6)
    assert (row.lower_bound, row.upper_bound) == (1.0, 2.0)
    r1, r2 = sweep_grid([-1.0, 1.0])
    assert r1.gamma_star == pytest.approx(r2.gamma_star, abs=1e-6)
    rows = sweep(-6, 6, 25)
    assert len(rows) == 25 and all(r.in_bounds and not r.error for r in rows)
    assert all(r.p_feasible and r.curvature_ok and r.negativity_ok for r in rows)
    with pytest.raises(ValueError):
        sweep(0, 1, 1)


def test_controller_matches_certify_p():
    assert CeController.from_gain(1.0, 4.0).P == certify(1.0, 4.0).P
