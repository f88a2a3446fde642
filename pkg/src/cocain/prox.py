"""Closed-form proximal maps and Bregman proximal steps.

Every step here is exact: subproblems reduce either to a soft threshold, to a
one-dimensional candidate comparison, or to the unique root of a strictly
increasing cubic, which is found by safeguarded Newton inside a sign-change
bracket.  No iterative optimization is run inside a prox call.
"""

import numpy as np

from .tol import CUBIC_RESIDUAL_TOL

# Two candidate objectives tying within this gap are resolved toward the
# candidate closer to the prox center.
TIE_TOL = 1e-12


def solve_monotone_cubic(cubic_coeff, linear_coeff, constant):
    """Unique real root of s*t^3 + b*t + c with s >= 0 and b > 0.

    The polynomial is strictly increasing, so the root exists, is unique, and
    has the opposite sign of `constant`.  Newton iterations are safeguarded by
    a bisection bracket; the result satisfies
    |s*t^3 + b*t + c| < 1e-12 * max(1, |c|).
    """
    s, b, c = float(cubic_coeff), float(linear_coeff), float(constant)
    if s < 0.0:
        raise ValueError(f"cubic coefficient must be >= 0, got {s}")
    if b <= 0.0:
        raise ValueError(f"linear coefficient must be > 0, got {b}")
    if c == 0.0:
        return 0.0
    if s == 0.0:
        return -c / b

    # At the root, s*t^3 and b*t share a sign and sum to -c, so |t| is
    # bounded by both |c|/b and (|c|/s)^(1/3); the smaller bound brackets.
    hi = min(abs(c) / b, (abs(c) / s) ** (1.0 / 3.0))
    lo, hi = (0.0, hi) if c < 0.0 else (-hi, 0.0)

    scale = max(1.0, abs(c))
    t = 0.5 * (lo + hi)
    for _ in range(200):
        p = s * t * t * t + b * t + c
        if abs(p) < CUBIC_RESIDUAL_TOL * scale:
            return t
        if p > 0.0:
            hi = t
        else:
            lo = t
        step = t - p / (3.0 * s * t * t + b)
        t = step if lo < step < hi else 0.5 * (lo + hi)
    raise ArithmeticError(
        f"cubic solve stalled: s={s!r}, b={b!r}, c={c!r}, t={t!r}"
    )


def soft_threshold(y, theta):
    """Componentwise shrinkage sgn(y) * max(|y| - theta, 0)."""
    if theta < 0.0:
        raise ValueError(f"threshold must be >= 0, got {theta}")
    y = np.asarray(y, dtype=float)
    return np.sign(y) * np.maximum(np.abs(y) - theta, 0.0)


def prox_log1abs_vec(y, tau, center=0.0):
    """Componentwise prox of tau * log(1 + |x - center|) at y.

    After translating by `center`, the one-sided stationarity condition is a
    quadratic whose discriminant is (|z|-1)^2 - 4(tau-|z|): a negative
    discriminant means the only candidate is the kink at 0, otherwise the two
    clamped quadratic roots and 0 compete.  Objective ties within 1e-12 go to
    the candidate with smaller |x - center|.
    """
    if tau <= 0.0:
        raise ValueError(f"tau must be > 0, got {tau}")
    z = np.asarray(y, dtype=float) - center
    az = np.abs(z)
    disc = (az - 1.0) ** 2 - 4.0 * (tau - az)
    root = np.sqrt(np.maximum(disc, 0.0))
    c_lo = np.maximum(0.5 * (az - 1.0 - root), 0.0)
    c_hi = np.maximum(0.5 * (az - 1.0 + root), 0.0)
    cands = np.stack([np.zeros_like(az), c_lo, c_hi])  # ascending magnitude
    obj = np.log1p(cands) + (cands - az) ** 2 / (2.0 * tau)
    eligible = obj <= np.min(obj, axis=0) + TIE_TOL
    picked = np.where(eligible, cands, np.inf).min(axis=0)
    picked = np.where(disc < 0.0, 0.0, picked)
    return center + np.sign(z) * picked


def prox_log1abs(y, tau, center=0.0):
    """Scalar prox of tau * log(1 + |x - center|) at y."""
    out = prox_log1abs_vec(np.array([float(y)]), tau, center=float(center))
    return float(out[0])


def bpg_step_l1_quartic(grad_h_y, grad_g_y, tau, lam):
    """Bregman proximal step for f = lam * ||x||_1 under the quartic kernel.

    The minimizer is a positive rescaling t* * v of the shrunk point
    v = soft_threshold(grad_h_y - tau * grad_g_y, lam * tau), where t* is the
    root of t^3 ||v||^2 + t - 1 = 0.  v = 0 collapses the step to 0.
    """
    if tau <= 0.0:
        raise ValueError(f"tau must be > 0, got {tau}")
    if lam < 0.0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    v = soft_threshold(grad_h_y - tau * grad_g_y, lam * tau)
    t = solve_monotone_cubic(float(np.dot(v, v)), 1.0, -1.0)
    return t * v


def bpg_step_sql2_quartic(grad_h_y, grad_g_y, tau, lam):
    """Bregman proximal step for f = lam * ||x||^2 under the quartic kernel.

    With w = tau * grad_g_y - grad_h_y the minimizer is t* * w where t* is
    the (negative) root of t^3 ||w||^2 + (2 lam tau + 1) t + 1 = 0.
    """
    if tau <= 0.0:
        raise ValueError(f"tau must be > 0, got {tau}")
    if lam < 0.0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    w = tau * grad_g_y - grad_h_y
    t = solve_monotone_cubic(float(np.dot(w, w)), 2.0 * lam * tau + 1.0, 1.0)
    return t * w
