import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lerc.core import DomainError, Model
from lerc.riccati import (
    Infeasible,
    InfeasibleError,
    SolvedModel,
    closed_form_p,
    require_feasible,
    riccati_map,
    riccati_residual,
    solve_riccati,
)

from frozen import A_HAT_14, G_HAT_14, P_14, X_14


def fixed_point(model, gamma, n=2000):
    # independent route: iterate the fixed-point form from P = gamma^2
    P = gamma**2
    for _ in range(n):
        P = riccati_map(P, model, gamma)
    return P


def test_a_zero_gives_gamma_squared():
    s = solve_riccati(Model(0.0, 1.0, 1.0), 2.0)
    assert s.P == pytest.approx(4.0, abs=1e-14)
    assert s.a_hat == 0.0 and s.g_hat == 0.0


def test_frozen_values(solved_14):
    s = solved_14
    assert s.P == pytest.approx(P_14, abs=1e-13)
    assert s.X == pytest.approx(X_14, abs=1e-13)
    assert s.a_hat == pytest.approx(A_HAT_14, abs=1e-15)
    assert s.g_hat == pytest.approx(G_HAT_14, abs=1e-15)
    assert s.feasible_gain


def test_unit_gain_is_infeasible():
    res = solve_riccati(Model(1.0, 1.0, 1.0), 1.0)
    assert isinstance(res, Infeasible) and not res.feasible
    with pytest.raises(InfeasibleError):
        require_feasible(res)


def test_small_p_flags_gain_infeasible():
    s = solve_riccati(Model(1.0, 1.0, 1.0), 1.2)
    assert s.feasible and 0 < s.P < 1 and not s.feasible_gain


def test_residual_examples():
    assert riccati_residual(4.0, Model(0, 1, 1), 2.0) == 0.0
    assert abs(riccati_residual(9.71191, Model(1, 1, 1), 4.0)) < 1e-5
    assert riccati_residual(1.0, Model(1, 1, 1), 4.0) == pytest.approx(-7.0, abs=1e-14)


def test_residual_division_guard():
    # X = P + gamma^2 - 1 = 0
    with pytest.raises(DomainError):
        riccati_residual(-3.0, Model(1, 1, 1), 2.0)


def test_matches_fixed_point_iteration():
    for a in (-2.0, -0.5, 0.3, 1.0, 3.0):
        for gamma in (1.5, 4.0, 20.0):
            m = Model(a, 1.0, 1.0)
            s = solve_riccati(m, gamma)
            assert s.P == pytest.approx(fixed_point(m, gamma), rel=1e-13)


def test_general_c():
    m = Model(0.8, 2.0, 0.5)
    s = solve_riccati(m, 3.0)
    assert abs(riccati_residual(s.P, m, 3.0)) < 1e-10
    assert s.P == pytest.approx(fixed_point(m, 3.0), rel=1e-12)
    assert s.g_hat == pytest.approx(9.0 * 0.8 * 0.5 / s.X)


def test_from_p_derivations():
    s = SolvedModel.from_p(Model(1, 1, 1), 4.0, 0.5)
    assert s.X == pytest.approx(15.5)
    assert not s.feasible_gain


@settings(max_examples=200, deadline=None)
@given(st.floats(-6, 6), st.floats(1.0001, 100))
def test_closed_form_agrees(a, gamma):
    s = solve_riccati(Model(a, 1.0, 1.0), gamma)
    assert abs(s.P - closed_form_p(a, gamma)) <= 1e-12 * max(1.0, s.P)


@settings(max_examples=200, deadline=None)
@given(st.floats(-6, 6), st.floats(0.05, 100))
def test_even_in_a(a, gamma):
    r1 = solve_riccati(Model(a, 1.0, 1.0), gamma)
    r2 = solve_riccati(Model(-a, 1.0, 1.0), gamma)
    assert r1.feasible == r2.feasible
    if r1.feasible:
        assert r1.P == r2.P and r1.X == r2.X


@settings(max_examples=300, deadline=None)
@given(st.floats(-6, 6), st.floats(0.05, 100), st.sampled_from([0.5, 1.0, 2.0]))
def test_success_invariants(a, gamma, c):
    m = Model(a, 1.0, c)
    s = solve_riccati(m, gamma)
    if s.feasible:
        assert abs(riccati_residual(s.P, m, gamma)) < 1e-10 * max(1.0, s.P)
        assert 0 < s.P <= gamma**2 * (1 + 1e-12)
        assert s.X > 0


def test_residual_below_1e10_on_moderate_grid():
    for a in np.linspace(-6, 6, 13):
        for gamma in np.geomspace(1.01, 100, 25):
            m = Model(a, 1.0, 1.0)
            s = solve_riccati(m, gamma)
            assert abs(riccati_residual(s.P, m, gamma)) < 1e-10
