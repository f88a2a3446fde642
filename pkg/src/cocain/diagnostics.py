"""Descent certificates recomputed from solver traces.

Everything here treats a finished run as evidence to be audited, not
trusted: the checks recompute inequalities from logged scalars (and stored
iterates where available) instead of reading the solver's own accept/reject
decisions.  The central object is the Lyapunov function

    Phi^k = tau_{k-1} * (Psi(x^k) - v) + delta * D_h(x^{k-1}, x^k),

with v a lower bound on inf Psi: a valid run decreases Phi^k by at least
epsilon * D_h(x^{k-1}, x^k) each iteration, which telescopes into the
prefix bound min_{1<=k<=n} D_h(x^{k-1}, x^k) <= Phi^1 / (epsilon * n).

Checks that need per-trial information (the backtracking conditions, the
closed-form inertia bound, the subgradient witnesses) require a trace
recorded with store_iterates=True.

Trace layout expected throughout: record 0 is the initial state, records
1..N-1 are iterations, record N describes the final iterate; records[i].k
== i.  Traces from this package's solvers always have this shape.
"""

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .tol import CONDITION_SLACK, LYAPUNOV_SLACK, geq, leq, violation


@dataclass(frozen=True)
class LyapunovParams:
    """Constants entering the Lyapunov function and its descent margin.

    v_lower must be a valid lower bound on inf Psi or the telescoped prefix
    bound is meaningless.  tau_frozen is the constant step size of a frozen
    tail phase; delta1 = delta / tau_frozen rescales the distance term for
    the per-unit-step form of the Lyapunov function used by the
    sufficient-decrease and subgradient checks.
    """

    delta: float
    epsilon: float
    v_lower: float
    tau_frozen: Optional[float] = None

    def __post_init__(self):
        if not 0.0 < self.epsilon < self.delta < 1.0:
            raise ValueError(
                f"need 1 > delta > epsilon > 0, got delta={self.delta}, "
                f"epsilon={self.epsilon}"
            )
        if self.tau_frozen is not None and self.tau_frozen <= 0.0:
            raise ValueError("tau_frozen must be > 0 when set")

    @property
    def delta1(self):
        if self.tau_frozen is None:
            raise ValueError("delta1 needs tau_frozen")
        return self.delta / self.tau_frozen

    @classmethod
    def from_run(cls, result, problem):
        """Read delta/epsilon from the run's config, v from the problem,
        and freeze tau at its final value."""
        return cls(
            delta=result.config.delta,
            epsilon=result.config.epsilon,
            v_lower=problem.psi_lower_bound,
            tau_frozen=result.records[-1].tau,
        )


@dataclass
class CheckReport:
    """Outcome of one certificate check.

    worst_violation is the largest normalized positive excess over all
    checked inequalities (0.0 when every one holds), worst_index the record
    index where it occurred (-1 if none).  details carries check-specific
    numbers.
    """

    name: str
    passed: bool
    n_checked: int
    worst_violation: float
    worst_index: int
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return bool(self.passed)


def _check_layout(records):
    if not records:
        raise ValueError("empty trace")
    for i, rec in enumerate(records):
        if rec.k != i:
            raise ValueError(
                f"trace records must be contiguous from k=0; record {i} "
                f"has k={rec.k}"
            )


def _require_iterates(records, name):
    if any(rec.x is None for rec in records):
        raise ValueError(
            f"{name} needs stored iterates; rerun with store_iterates=True"
        )


def lyapunov_phi(records, params):
    """Phi^k for k = 1..N as an array (index 0 holds Phi^1).

    Phi^k combines record k's objective and distance with record k-1's step
    size, so the value is well defined for every record after the first.
    """
    _check_layout(records)
    v = params.v_lower
    return np.array([
        records[k - 1].tau * (records[k].psi - v)
        + params.delta * records[k].dh_prev_curr
        for k in range(1, len(records))
    ])


def check_lyapunov_descent(records, params):
    """Verify Phi^{k+1} <= Phi^k - epsilon * D_h(x^{k-1}, x^k) per step.

    The inequality is allowed a relative slack of LYAPUNOV_SLACK on the
    larger side's magnitude.  details carries the Phi array.
    """
    phi = lyapunov_phi(records, params)
    worst = 0.0
    worst_k = -1
    n = 0
    for k in range(1, len(phi)):
        lhs = phi[k] + params.epsilon * records[k].dh_prev_curr
        rhs = phi[k - 1]
        n += 1
        v = violation(lhs, rhs)
        if v > worst:
            worst, worst_k = v, k
    return CheckReport(
        name="lyapunov_descent",
        passed=worst <= LYAPUNOV_SLACK,
        n_checked=n,
        worst_violation=worst,
        worst_index=worst_k,
        details={"phi": phi},
    )


def check_prefix_bound(records, params, tol=1e-12):
    """Verify min_{1<=k<=n} D_h(x^{k-1}, x^k) <= Phi^1/(epsilon*n) + tol
    for every prefix length n."""
    phi = lyapunov_phi(records, params)
    phi1 = float(phi[0])
    worst = 0.0
    worst_n = -1
    running_min = math.inf
    n_checked = 0
    for n in range(1, len(records) - 1):
        running_min = min(running_min, records[n].dh_prev_curr)
        bound = phi1 / (params.epsilon * n)
        n_checked += 1
        excess = running_min - bound
        if excess > worst:
            worst, worst_n = excess, n
    return CheckReport(
        name="prefix_bound",
        passed=worst <= tol,
        n_checked=n_checked,
        worst_violation=max(0.0, worst),
        worst_index=worst_n,
        details={"phi1": phi1, "min_gap": running_min},
    )


def check_acceptance_conditions(records, problem, params, cross_tol=1e-10):
    """Recompute the three per-iteration inequalities from stored iterates.

    For each iteration k this checks, with the recorded constants and
    distances re-derived from the stored x^{k-1}, x^k, y^k, x^{k+1}:

      inertia    (1 + L_lower * tau_{k-1}) D_h(x^k, y^k)
                     <= (delta - epsilon) D_h(x^{k-1}, x^k)
      minorant   g(x^k) >= g(y^k) + <grad g(y^k), x^k - y^k>
                     - L_lower * D_h(x^k, y^k)
      majorant   g(x^{k+1}) <= g(y^k) + <grad g(y^k), x^{k+1} - y^k>
                     + L_bar * D_h(x^{k+1}, y^k)

    and cross-validates the logged distances, step norms, and extrapolated
    points against the stored arrays at relative tolerance cross_tol.  The
    conditions are the contract of the double-backtracking solvers; traces
    from other methods may legitimately fail them.
    """
    _check_layout(records)
    _require_iterates(records, "check_acceptance_conditions")
    kernel = problem.kernel
    margin = params.delta - params.epsilon
    worst = {"inertia": 0.0, "minorant": 0.0, "majorant": 0.0}
    worst_k = {"inertia": -1, "minorant": -1, "majorant": -1}
    cross_worst = 0.0
    cross_k = -1
    n = 0
    for k in range(1, len(records) - 1):
        rec = records[k]
        x_prev = records[k - 1].x
        x_curr, y = rec.x, rec.y
        x_next = records[k + 1].x
        dh_prev_curr = kernel.bregman(x_prev, x_curr)
        dh_curr_y = kernel.bregman(x_curr, y)
        n += 1

        lhs = (1.0 + rec.L_lower * records[k - 1].tau) * dh_curr_y
        v = violation(lhs, margin * dh_prev_curr)
        if v > worst["inertia"]:
            worst["inertia"], worst_k["inertia"] = v, k

        g_y = problem.g_value(y)
        grad_g_y = problem.g_grad(y)
        lower_rhs = (
            g_y
            + float(np.dot(grad_g_y, x_curr - y))
            - rec.L_lower * dh_curr_y
        )
        v = violation(lower_rhs, problem.g_value(x_curr))
        if v > worst["minorant"]:
            worst["minorant"], worst_k["minorant"] = v, k

        upper_rhs = (
            g_y
            + float(np.dot(grad_g_y, x_next - y))
            + rec.L_bar * kernel.bregman(x_next, y)
        )
        v = violation(problem.g_value(x_next), upper_rhs)
        if v > worst["majorant"]:
            worst["majorant"], worst_k["majorant"] = v, k

        y_expected = x_curr + rec.gamma * (x_curr - x_prev)
        for logged, fresh in (
            (rec.dh_prev_curr, dh_prev_curr),
            (rec.dh_curr_y, dh_curr_y),
            (rec.step_norm, float(np.linalg.norm(x_curr - x_prev))),
            (0.0, float(np.max(np.abs(y - y_expected))) if y is not None else 0.0),
        ):
            dev = abs(logged - fresh) / max(1.0, abs(logged), abs(fresh))
            if dev > cross_worst:
                cross_worst, cross_k = dev, k

    worst_all = max(worst.values())
    passed = worst_all <= CONDITION_SLACK and cross_worst <= cross_tol
    keys = [key for key in worst if worst[key] == worst_all]
    return CheckReport(
        name="acceptance_conditions",
        passed=passed,
        n_checked=n,
        worst_violation=worst_all,
        worst_index=worst_k[keys[0]] if n else -1,
        details={
            "inertia": worst["inertia"],
            "minorant": worst["minorant"],
            "majorant": worst["majorant"],
            "per_condition_index": dict(worst_k),
            "cross_validation": cross_worst,
            "cross_validation_index": cross_k,
        },
    )


def check_function_descent(records, problem):
    """Verify the per-iteration objective inequality

        Psi(x^k) >= Psi(x^{k+1}) + (1/tau_k) D_h(x^k, x^{k+1})
                    + (alpha/2) ||x^{k+1} - x^k||^2
                    - (1/tau_k + L_lower_k) D_h(x^k, y^k)

    which the accepted constants imply for weakly convex f.  Works from
    logged scalars only.
    """
    _check_layout(records)
    alpha = problem.alpha
    worst = 0.0
    worst_k = -1
    n = 0
    for k in range(1, len(records) - 1):
        rec = records[k]
        nxt = records[k + 1]
        inv_tau = 1.0 / rec.tau
        rhs = (
            nxt.psi
            + inv_tau * nxt.dh_prev_curr
            + 0.5 * alpha * nxt.step_norm ** 2
            - (inv_tau + rec.L_lower) * rec.dh_curr_y
        )
        n += 1
        v = violation(rhs, rec.psi)
        if v > worst:
            worst, worst_k = v, k
    return CheckReport(
        name="function_descent",
        passed=worst <= LYAPUNOV_SLACK,
        n_checked=n,
        worst_violation=worst,
        worst_index=worst_k,
    )


def frozen_phase_start(records, min_run=25):
    """First iteration index at which L_bar has reached its final value,
    or None when that final run is shorter than min_run iterations.

    L_bar never decreases, so this is the start of the constant tail.
    """
    _check_layout(records)
    if len(records) < 3:
        return None
    last = len(records) - 2
    L_final = records[last].L_bar
    k0 = last
    while k0 > 1 and records[k0 - 1].L_bar == L_final:
        k0 -= 1
    if last - k0 + 1 < min_run:
        return None
    return k0


def _check_frozen_tau(records, params, start):
    tau_f = params.tau_frozen
    if tau_f is None:
        raise ValueError("params.tau_frozen is required for this check")
    for k in range(start - 1, len(records) - 1):
        if abs(records[k].tau - tau_f) > 1e-12 * max(1.0, tau_f):
            raise ValueError(
                f"tau is not frozen at {tau_f} from record {start - 1} on "
                f"(record {k} has tau={records[k].tau})"
            )


def check_sufficient_decrease(records, params, sigma=1.0, start=1,
                              min_step=1e-6):
    """Sufficient decrease of the regularized objective on a frozen tail.

    With u_k = Psi(x^k) + delta1 * D_h(x^{k-1}, x^k) and constant step size
    tau_frozen, descent of the Lyapunov function divided by tau_frozen gives

        u_{k+1} <= u_k - rho1 * ||x^k - x^{k-1}||^2,
        rho1 = epsilon * sigma / (2 * tau_frozen),

    the first ingredient of the abstract convergence template.  Monotonicity
    of u is checked on every step; the empirical rho1 (the smallest observed
    decrease ratio) is measured only on steps with norm >= min_step, since
    below that the difference u_k - u_{k+1} drowns in float rounding.
    """
    _check_layout(records)
    _check_frozen_tau(records, params, start)
    delta1 = params.delta1
    rho1_target = params.epsilon * sigma / (2.0 * params.tau_frozen)

    u = [
        records[k].psi + delta1 * records[k].dh_prev_curr
        for k in range(start, len(records))
    ]
    worst = 0.0
    worst_k = -1
    rho1_emp = math.inf
    n_measured = 0
    for i in range(len(u) - 1):
        k = start + i
        v = violation(u[i + 1], u[i])
        if v > worst:
            worst, worst_k = v, k
        step = records[k].step_norm
        if step >= min_step:
            rho1_emp = min(rho1_emp, (u[i] - u[i + 1]) / step ** 2)
            n_measured += 1
    rho1_ok = n_measured == 0 or rho1_emp >= rho1_target * (1.0 - 1e-6)
    return CheckReport(
        name="sufficient_decrease",
        passed=worst <= LYAPUNOV_SLACK and rho1_ok,
        n_checked=len(u) - 1,
        worst_violation=worst,
        worst_index=worst_k,
        details={
            "rho1_target": rho1_target,
            "rho1_empirical": None if n_measured == 0 else rho1_emp,
            "n_measured": n_measured,
        },
    )


def subgradient_witness(records, problem, params, k):
    """Witness pair certifying a subgradient of the regularized objective.

    By optimality of the proximal step, the vector

        w1 = grad g(x^{k+1}) - grad g(y^k)
             + (1/tau_k)(grad h(y^k) - grad h(x^{k+1}))
             + delta1 * Hess h(x^{k+1}) (x^{k+1} - x^k)

    lies in the partial subdifferential of Psi_{delta1}(u, w) = Psi(u) +
    delta1 * D_h(w, u) with respect to u at (x^{k+1}, x^k), and

        w2 = delta1 * (grad h(x^k) - grad h(x^{k+1}))

    is its partial gradient with respect to w.  Returns (w1, w2).
    """
    _check_layout(records)
    _require_iterates(records, "subgradient_witness")
    if not 1 <= k <= len(records) - 2:
        raise ValueError(f"k={k} is not an iteration record")
    kernel = problem.kernel
    delta1 = params.delta1
    rec = records[k]
    x_curr, y = rec.x, rec.y
    x_next = records[k + 1].x
    w1 = (
        problem.g_grad(x_next)
        - problem.g_grad(y)
        + (kernel.grad(y) - kernel.grad(x_next)) / rec.tau
        + delta1 * kernel.hess_vec(x_next, x_next - x_curr)
    )
    w2 = delta1 * (kernel.grad(x_curr) - kernel.grad(x_next))
    return w1, w2


def check_subgradient_bound(records, problem, params, start=1,
                            min_step=1e-6):
    """Relative error bound on the subgradient witnesses of a frozen tail.

    Measures ||(w1, w2)|| / ||x^{k+1} - x^k|| over the tail and reports the
    largest ratio as the empirical rho2, the second ingredient of the
    abstract convergence template.  Steps below min_step are skipped.
    Passes when every computed witness is finite.
    """
    _check_layout(records)
    _require_iterates(records, "check_subgradient_bound")
    _check_frozen_tau(records, params, start)
    rho2 = 0.0
    rho2_k = -1
    n = 0
    all_finite = True
    for k in range(start, len(records) - 1):
        step = records[k + 1].step_norm
        if step < min_step:
            continue
        w1, w2 = subgradient_witness(records, problem, params, k)
        norm = math.hypot(float(np.linalg.norm(w1)), float(np.linalg.norm(w2)))
        if not math.isfinite(norm):
            all_finite = False
        n += 1
        if norm / step > rho2:
            rho2, rho2_k = norm / step, k
    return CheckReport(
        name="subgradient_bound",
        passed=all_finite,
        n_checked=n,
        worst_violation=0.0 if all_finite else math.inf,
        worst_index=rho2_k,
        details={"rho2_empirical": None if n == 0 else rho2},
    )


def check_objective_settling(records, window=50, rel_tol=1e-6):
    """Continuity proxy: the objective is Cauchy over the trailing window.

    The abstract convergence template's third ingredient asks for objective
    continuity along convergent subsequences, which a finite trace cannot
    exhibit directly; a settled tail is the observable stand-in.
    """
    _check_layout(records)
    tail = [rec.psi for rec in records[max(1, len(records) - window):]]
    spread = max(tail) - min(tail)
    scale = max(1.0, abs(tail[-1]))
    return CheckReport(
        name="objective_settling",
        passed=spread <= rel_tol * scale,
        n_checked=len(tail),
        worst_violation=max(0.0, spread / scale - rel_tol),
        worst_index=len(records) - 1,
        details={"spread": spread, "window": len(tail)},
    )


def check_cfi_bound(records, problem, tol=1e-10):
    """Verify the distance estimate behind the closed-form inertia rule:

        D_h(x^k, y^k) <= gamma_k^2 ||Delta_k||^2 ((3/2)||x^k||^2 + 7/4) + tol

    with Delta_k = x^k - x^{k-1}, from stored iterates.
    """
    _check_layout(records)
    _require_iterates(records, "check_cfi_bound")
    kernel = problem.kernel
    worst = 0.0
    worst_k = -1
    n = 0
    for k in range(1, len(records) - 1):
        rec = records[k]
        delta_vec = rec.x - records[k - 1].x
        nd2 = float(np.dot(delta_vec, delta_vec))
        xk2 = float(np.dot(rec.x, rec.x))
        lhs = kernel.bregman(rec.x, rec.y)
        rhs = rec.gamma ** 2 * nd2 * (1.5 * xk2 + 1.75) + tol
        n += 1
        excess = lhs - rhs
        if excess > worst:
            worst, worst_k = excess, k
    return CheckReport(
        name="cfi_bound",
        passed=worst <= 0.0,
        n_checked=n,
        worst_violation=max(0.0, worst),
        worst_index=worst_k,
    )


def summarize(result, problem, params=None):
    """Compact audit of a run: identity, final stats, and certificate
    outcomes (Lyapunov checks only when params are given; condition checks
    only when iterates were stored)."""
    records = result.records
    out = {
        "solver": result.solver,
        "problem": result.problem,
        "termination": result.termination,
        "iterations": result.iterations,
        "final_psi": result.final_psi,
        "final_step_norm": records[-1].step_norm,
        "lower_trials": sum(rec.lower_trials for rec in records),
        "upper_trials": sum(rec.upper_trials for rec in records),
        "wall_time_s": sum(rec.wall_time_ns for rec in records) * 1e-9,
    }
    if params is not None:
        descent = check_lyapunov_descent(records, params)
        prefix = check_prefix_bound(records, params)
        out["lyapunov_descent"] = descent.passed
        out["lyapunov_worst_violation"] = descent.worst_violation
        out["prefix_bound"] = prefix.passed
        if records[0].x is not None:
            conditions = check_acceptance_conditions(records, problem, params)
            out["acceptance_conditions"] = conditions.passed
            out["conditions_worst_violation"] = conditions.worst_violation
    return out
