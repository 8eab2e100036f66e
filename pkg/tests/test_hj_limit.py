"""Variational limit solver: minimizer geometry, shock, critical line, characteristics."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spinflow import (
    PlanePoint,
    characteristic,
    critical_launch_point,
    critical_line,
    crossing_scan,
    exact_fields,
    lax_action,
    self_consistent_magnetization,
    shock_jump,
    spontaneous_magnetization,
    symmetry_breaking_limit,
)

LOG2 = math.log(2.0)


def variational_objective(y: float, x: float, t: float) -> float:
    return (x - y) ** 2 / (2.0 * t) - LOG2 - math.log(math.cosh(y))


def test_spontaneous_magnetization_fixed_point():
    m = spontaneous_magnetization(2.0)
    assert m == pytest.approx(0.9575040240772688, rel=1e-12)
    assert math.tanh(2.0 * m) == pytest.approx(m, abs=1e-13)
    assert m > 0.0


def test_spontaneous_magnetization_needs_supercritical_coupling():
    for t in (0.2, 1.0):
        with pytest.raises(ValueError):
            spontaneous_magnetization(t)


def test_action_on_shock_frozen_value():
    sol = lax_action(PlanePoint(0.0, 2.0), branch="plus")
    assert sol.phi == pytest.approx(-1.0196710679868692, rel=1e-12)
    assert sol.on_shock
    assert sol.u == pytest.approx(-0.9575040240772688, rel=1e-12)
    minus = lax_action(PlanePoint(0.0, 2.0), branch="minus")
    assert minus.phi == sol.phi
    assert minus.u == -sol.u


def test_minimizer_beats_a_dense_grid():
    for x, t in ((0.4, 0.7), (-0.3, 2.5), (1.1, 1.0), (0.05, 3.0)):
        sol = lax_action(PlanePoint(x, t))
        ys = np.linspace(x - 6.0, x + 6.0, 20001)
        grid_min = min(variational_objective(y, x, t) for y in ys)
        assert variational_objective(sol.y_star, x, t) <= grid_min + 1e-12
        assert sol.phi == pytest.approx(variational_objective(sol.y_star, x, t), abs=1e-14)


@given(
    x=st.floats(-3.0, 3.0),
    t=st.floats(0.05, 4.0),
)
@settings(max_examples=80, deadline=None)
def test_first_order_conditions_off_shock(x, t):
    if x == 0.0 and t > 1.0:
        x = 0.25
    sol = lax_action(PlanePoint(x, t))
    assert sol.u == pytest.approx((x - sol.y_star) / t, abs=1e-11)
    assert sol.u == pytest.approx(-math.tanh(sol.y_star), abs=1e-11)
    assert abs(sol.u) < 1.0
    assert not sol.on_shock
    assert sol.branch == "unique"


def test_velocity_agrees_with_self_consistency_route():
    for x, t in ((0.4, 0.7), (-0.6, 2.2), (0.15, 1.4), (-1.2, 0.3)):
        sol = lax_action(PlanePoint(x, t))
        root = self_consistent_magnetization(PlanePoint(x, t))
        assert sol.u == pytest.approx(root, abs=1e-12)
        # the fixed-point equation itself
        assert root + math.tanh(x - root * t) == pytest.approx(0.0, abs=1e-12)


def test_entropy_solution_slope_closed_form():
    # implicit differentiation of u = -tanh(x - u t) gives
    # d_x u = -(1 - u^2) / (1 - t (1 - u^2)); the denominator vanishes
    # exactly on the caustic, which is what makes the critical line exist
    step = 1e-6
    for x, t in ((0.5, 0.8), (-0.4, 2.0), (0.9, 1.5)):
        u_plus = lax_action(PlanePoint(x + step, t)).u
        u_minus = lax_action(PlanePoint(x - step, t)).u
        slope = (u_plus - u_minus) / (2.0 * step)
        u = lax_action(PlanePoint(x, t)).u
        expected = -(1.0 - u * u) / (1.0 - t * (1.0 - u * u))
        assert slope == pytest.approx(expected, abs=1e-6)
        assert slope < 0.0


def test_minimizer_position_is_monotone_in_x():
    for t in (0.6, 2.0):
        xs = [x for x in np.linspace(-2.0, 2.0, 41) if not (x == 0.0 and t > 1.0)]
        y_values = [lax_action(PlanePoint(x, t)).y_star for x in xs]
        assert all(b >= a for a, b in zip(y_values, y_values[1:]))


def test_characteristics_transport_the_boundary_slope():
    x0 = 0.5
    # the straight line stays valid until it hits the shock at s = x0/tanh(x0)
    s_exit = x0 / math.tanh(x0)
    line = characteristic(x0, 0.9 * s_exit, n_points=7)
    assert line.points.shape == (7, 2)
    for x, s in line.points:
        if s == 0.0:
            assert x == x0
            continue
        sol = lax_action(PlanePoint(x, s))
        assert sol.y_star == pytest.approx(x0, abs=1e-10)
        assert sol.u == pytest.approx(-math.tanh(x0), abs=1e-11)


def test_mirror_characteristics_collide_on_the_median():
    a = 1.0
    s_meet = a / math.tanh(a)
    for launch in (a, -a):
        line = characteristic(launch, s_meet, n_points=11)
        x_final, s_final = line.points[-1]
        assert s_final == pytest.approx(s_meet, rel=1e-15)
        assert x_final == pytest.approx(0.0, abs=1e-14)


def test_critical_line_closed_form_and_envelope():
    for t in (1.3, 2.0, 3.5):
        s = math.sqrt((t - 1.0) / t)
        closed = math.atanh(s) - t * s
        assert critical_line(t) == pytest.approx(closed, rel=1e-13)
        # envelope property: x_c is the minimum of x0 - t tanh(x0) over x0 >= 0
        grid = np.linspace(0.0, 6.0, 300001)
        grid_min = np.min(grid - t * np.tanh(grid))
        assert critical_line(t) == pytest.approx(grid_min, abs=1e-9)
        # the marginal launch point is the argmin: t (1 - tanh^2) = 1 there
        x0c = critical_launch_point(t)
        assert t * (1.0 - math.tanh(x0c) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_critical_line_needs_supercritical_coupling():
    for t in (0.5, 1.0):
        with pytest.raises(ValueError):
            critical_line(t)


def test_crossing_census_stays_above_the_critical_line():
    scan = crossing_scan(np.linspace(0.0, 3.0, 40), 4.0)
    assert scan.n_crossings > 0
    assert scan.n_below_critical_line == 0
    assert scan.n_above_critical_line == scan.n_crossings
    assert scan.n_supercritical_pairs == 0
    # events carry (x0_a, x0_b, t_cross, x_cross) with t in range
    assert scan.events.shape == (scan.n_crossings, 4)
    assert np.all(scan.events[:, 2] > 0.0)
    assert np.all(scan.events[:, 2] <= 4.0)


def test_crossing_scan_rejects_negative_launch_points():
    with pytest.raises(ValueError):
        crossing_scan([-0.5, 0.5], 3.0)


def test_shock_jump_is_odd_and_matches_magnetization():
    for t in (1.5, 2.0, 3.0):
        u_minus, u_plus = shock_jump(t)
        m = spontaneous_magnetization(t)
        assert u_minus == m
        assert u_plus == -m
        assert u_minus + u_plus == 0.0
    with pytest.raises(ValueError):
        shock_jump(0.8)


def test_tilted_line_limits_recover_the_shock_values():
    for t in (1.5, 2.0):
        m = spontaneous_magnetization(t)
        assert symmetry_breaking_limit(t, "plus") == pytest.approx(-m, abs=1e-7)
        assert symmetry_breaking_limit(t, "minus") == pytest.approx(m, abs=1e-7)


def test_on_shock_branch_handling():
    with pytest.raises(ValueError):
        lax_action(PlanePoint(0.0, 2.0))
    off = lax_action(PlanePoint(0.4, 2.0), branch="minus")
    assert not off.on_shock
    assert off.branch == "unique"


def test_finite_size_velocity_converges_to_the_limit():
    p = PlanePoint(0.2, 2.0)
    target = lax_action(p).u
    err_40 = abs(exact_fields(p, 40).u - target)
    err_160 = abs(exact_fields(p, 160).u - target)
    # at worst square-root decay: quadrupling the size leaves at most 0.6x
    assert err_160 <= 0.6 * err_40
