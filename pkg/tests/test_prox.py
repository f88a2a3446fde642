"""Scalar prox solvers and the quartic-kernel proximal steps.

Frozen roots come from a 200-step bisection oracle run outside the package;
frozen prox values from brute-force grid search (step 1e-5, then first-order
refinement).  Each frozen constant is re-verified here through a residual or
optimality condition that does not depend on the implementation under test.
"""

import math

import numpy as np
import pytest

from cocain.prox import (
    bpg_step_l1_quartic,
    bpg_step_sql2_quartic,
    prox_log1abs,
    prox_log1abs_vec,
    soft_threshold,
    solve_monotone_cubic,
)

# bisection on t^3 + t - 1 over [0, 1]
ROOT_T3_T_M1 = 0.6823278038280194
# bisection on 4 t^3 + 3 t + 1 over [-1, 0]
ROOT_4T3_3T_1 = -0.29803581899166076
# grid argmin of log(1+|x|) + (x-3)^2 for x in [-1, 5]; closed form
# (2 + sqrt(14)) / 2 agrees to 1e-9
PROX_Y3_TAU05 = 2.8708286933869704


# ---------------------------------------------------------------------------
# monotone cubic


def test_cubic_degenerate_linear_case():
    assert solve_monotone_cubic(0.0, 1.0, -1.0) == 1.0


def test_cubic_frozen_roots():
    assert solve_monotone_cubic(1.0, 1.0, -1.0) == pytest.approx(
        ROOT_T3_T_M1, abs=1e-12
    )
    assert solve_monotone_cubic(4.0, 3.0, 1.0) == pytest.approx(
        ROOT_4T3_3T_1, abs=1e-12
    )
    # odd symmetry partner of the first root
    assert solve_monotone_cubic(1.0, 1.0, 1.0) == pytest.approx(
        -ROOT_T3_T_M1, abs=1e-12
    )


def test_cubic_residuals_random():
    rng = np.random.default_rng(101)
    for _ in range(1000):
        s = rng.uniform(0.0, 10.0)
        lin = rng.uniform(1e-3, 5.0)
        const = rng.uniform(-5.0, 5.0)
        t = solve_monotone_cubic(s, lin, const)
        residual = abs(s * t**3 + lin * t + const)
        assert residual < 1e-12 * max(1.0, abs(const))


def test_cubic_step_family_in_unit_interval():
    # with lin = 1, const = -1 the root is the step-scaling factor and must
    # stay in (0, 1] for any s >= 0
    rng = np.random.default_rng(7)
    for s in np.concatenate(([0.0], rng.uniform(0.0, 100.0, 200))):
        t = solve_monotone_cubic(float(s), 1.0, -1.0)
        assert 0.0 < t <= 1.0


def test_cubic_contract_violations():
    with pytest.raises(ValueError):
        solve_monotone_cubic(-1.0, 1.0, 0.0)
    with pytest.raises(ValueError):
        solve_monotone_cubic(1.0, 0.0, 0.0)


# ---------------------------------------------------------------------------
# soft threshold


def test_soft_threshold_spot():
    np.testing.assert_array_equal(
        soft_threshold(np.array([3.0, -1.0]), 1.0), np.array([2.0, 0.0])
    )
    np.testing.assert_array_equal(
        soft_threshold(np.array([0.5, -2.5]), 1.5), np.array([0.0, -1.0])
    )


def test_soft_threshold_zero_is_identity():
    y = np.array([1.5, -0.3, 0.0, 7.0])
    np.testing.assert_array_equal(soft_threshold(y, 0.0), y)


def test_soft_threshold_composition_law():
    rng = np.random.default_rng(31)
    y = rng.uniform(-5.0, 5.0, 50)
    a, b = 0.7, 1.1
    np.testing.assert_allclose(
        soft_threshold(soft_threshold(y, a), b),
        soft_threshold(y, a + b),
        atol=1e-15,
    )


def test_soft_threshold_monotone_in_theta():
    rng = np.random.default_rng(33)
    y = rng.uniform(-5.0, 5.0, 100)
    thetas = np.sort(rng.uniform(0.0, 3.0, 10))
    prev = np.abs(soft_threshold(y, float(thetas[0])))
    for theta in thetas[1:]:
        cur = np.abs(soft_threshold(y, float(theta)))
        assert np.all(cur <= prev + 1e-15)
        prev = cur


# ---------------------------------------------------------------------------
# prox of log(1 + |x - center|)


def _log1abs_objective(x, y, tau, center):
    return np.log1p(np.abs(x - center)) + (x - y) ** 2 / (2.0 * tau)


def test_prox_log1abs_fixed_point():
    for y, tau in [(0.0, 1.0), (2.0, 0.3), (-1.5, 4.0)]:
        assert prox_log1abs(y, tau, center=y) == y


def test_prox_log1abs_frozen_value():
    got = prox_log1abs(3.0, 0.5)
    assert got == pytest.approx(PROX_Y3_TAU05, abs=1e-9)
    # first-order optimality at the returned interior point
    assert 1.0 / (1.0 + got) + (got - 3.0) / 0.5 == pytest.approx(0.0, abs=1e-9)


def test_prox_log1abs_negative_discriminant_collapses_to_center():
    # (|y|-1)^2 - 4 (tau - |y|) = -6.56 < 0
    assert prox_log1abs(0.2, 2.0) == 0.0
    assert prox_log1abs(1.2, 2.0, center=1.0) == 1.0


def test_prox_log1abs_grid_equivalence():
    rng = np.random.default_rng(47)
    for _ in range(200):
        y = rng.uniform(-5.0, 5.0)
        tau = rng.uniform(1e-3, 3.0)
        center = rng.uniform(-2.0, 2.0)
        got = prox_log1abs(y, tau, center)
        span = abs(y - center) + 2.0
        grid = np.arange(center - span, center + span, 1e-5)
        best = float(np.min(_log1abs_objective(grid, y, tau, center)))
        assert _log1abs_objective(got, y, tau, center) <= best + 1e-6


def test_prox_log1abs_tau_contract():
    with pytest.raises(ValueError):
        prox_log1abs(1.0, 0.0)


def test_prox_log1abs_vec_matches_scalar():
    rng = np.random.default_rng(53)
    y = rng.uniform(-5.0, 5.0, 64)
    centers = rng.uniform(-2.0, 2.0, 64)
    tau = 0.8
    vec = prox_log1abs_vec(y, tau, center=centers)
    scalar = np.array([
        prox_log1abs(float(yi), tau, float(ci)) for yi, ci in zip(y, centers)
    ])
    np.testing.assert_array_equal(vec, scalar)


def test_prox_log1abs_vec_scalar_center():
    y = np.array([3.0, -3.0])
    out = prox_log1abs_vec(y, 0.5)
    assert out[0] == pytest.approx(PROX_Y3_TAU05, abs=1e-9)
    assert out[1] == pytest.approx(-PROX_Y3_TAU05, abs=1e-9)


# ---------------------------------------------------------------------------
# quartic-kernel proximal steps


def _l1_optimality_residual(x, grad_h_y, grad_g_y, tau, lam):
    """Residual of 0 in lam * d||.||_1(x) + grad g(y) + (grad h(x) - grad h(y))/tau."""
    interior = grad_g_y + ((np.dot(x, x) + 1.0) * x - grad_h_y) / tau
    on = np.abs(x) > 0.0
    res = np.where(
        on,
        np.abs(interior + lam * np.sign(x)),
        np.maximum(np.abs(interior) - lam, 0.0),
    )
    return float(np.max(res))


def _sql2_optimality_residual(x, grad_h_y, grad_g_y, tau, lam):
    """Residual of 2 lam x + grad g(y) + (grad h(x) - grad h(y))/tau = 0."""
    r = 2.0 * lam * x + grad_g_y + ((np.dot(x, x) + 1.0) * x - grad_h_y) / tau
    return float(np.max(np.abs(r)))


def test_l1_step_fully_thresholded():
    out = bpg_step_l1_quartic(np.array([0.1, -0.2]), np.zeros(2), 1.0, 5.0)
    np.testing.assert_array_equal(out, np.zeros(2))


def test_l1_step_frozen_example():
    out = bpg_step_l1_quartic(np.array([2.0, 0.0]), np.zeros(2), 1.0, 1.0)
    assert out[1] == 0.0
    assert out[0] == pytest.approx(ROOT_T3_T_M1, abs=1e-12)
    assert _l1_optimality_residual(
        out, np.array([2.0, 0.0]), np.zeros(2), 1.0, 1.0
    ) < 1e-8


def test_l1_step_zero_lam_preserves_direction():
    rng = np.random.default_rng(61)
    for _ in range(20):
        gh = rng.uniform(-2.0, 2.0, 4)
        gg = rng.uniform(-2.0, 2.0, 4)
        tau = rng.uniform(0.05, 2.0)
        v = gh - tau * gg
        out = bpg_step_l1_quartic(gh, gg, tau, 0.0)
        cross = np.linalg.norm(
            out * np.linalg.norm(v) - v * np.linalg.norm(out)
        )
        assert cross < 1e-10 * max(1.0, float(np.linalg.norm(v)) ** 2)


def test_l1_step_optimality_random():
    rng = np.random.default_rng(67)
    for _ in range(500):
        gh = rng.uniform(-3.0, 3.0, 5)
        gg = rng.uniform(-3.0, 3.0, 5)
        tau = rng.uniform(0.01, 2.0)
        lam = rng.uniform(0.0, 1.0)
        out = bpg_step_l1_quartic(gh, gg, tau, lam)
        assert _l1_optimality_residual(out, gh, gg, tau, lam) < 1e-8


def test_sql2_step_zero_vector_argument():
    gh = np.array([0.5, -0.5])
    out = bpg_step_sql2_quartic(gh, gh / 2.0, 2.0, 1.0)
    np.testing.assert_array_equal(out, np.zeros(2))


def test_sql2_step_frozen_example():
    # lam = 0, v = tau*gg - gh = (-1, 0): root of t^3 + t + 1 = 0 scales v
    out = bpg_step_sql2_quartic(np.array([1.0, 0.0]), np.zeros(2), 1.0, 0.0)
    assert out[1] == 0.0
    assert out[0] == pytest.approx(ROOT_T3_T_M1, abs=1e-12)


def test_sql2_step_points_along_descent_direction():
    rng = np.random.default_rng(71)
    for _ in range(20):
        gh = rng.uniform(-2.0, 2.0, 3)
        gg = rng.uniform(-2.0, 2.0, 3)
        tau = rng.uniform(0.05, 2.0)
        v = gh - tau * gg
        if np.linalg.norm(v) < 1e-9:
            continue
        out = bpg_step_sql2_quartic(gh, gg, tau, 0.3)
        assert float(np.dot(out, v)) > 0.0


def test_sql2_step_optimality_random():
    rng = np.random.default_rng(73)
    for _ in range(500):
        gh = rng.uniform(-3.0, 3.0, 5)
        gg = rng.uniform(-3.0, 3.0, 5)
        tau = rng.uniform(0.01, 2.0)
        lam = rng.uniform(0.0, 1.0)
        out = bpg_step_sql2_quartic(gh, gg, tau, lam)
        assert _sql2_optimality_residual(out, gh, gg, tau, lam) < 1e-8
