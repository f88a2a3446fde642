"""Inertial Bregman proximal gradient solvers with double backtracking.

The main method alternates two adaptive searches per iteration.  First the
lower (minorant) constant, the extrapolation factor, and the base point are
fixed together: the trial constant determines how much inertia the descent
certificate can tolerate, and the minorant inequality at the extrapolated
point decides whether the trial stands.  Then the upper (majorant) constant
and the step size are fixed by the usual descent-lemma backtracking, and the
Bregman proximal step produces the next iterate.  Every accepted quantity is
logged to a trace from which the Lyapunov certificates in `diagnostics` can
be recomputed without trusting the solver.

Solvers:
  cocain_bpg                  adaptive inertia, double backtracking
  cocain_bpg_cfi              closed-form inertia for the quartic kernel
  cocain_bpg_no_backtracking  global constants, no function evaluations
  bpg_wb                      no inertia, majorant backtracking only
  bpg_fixed                   no inertia, fixed step 1/L
  ipiano                      fixed inertia, Euclidean kernel
"""

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .kernels import EuclideanKernel, QuarticKernel
from .tol import geq, leq, require_finite

TERM_MAX_ITERS = "max_iters"
TERM_STEP_TOL = "step_tol"
TERM_BACKTRACK_FAILURE = "backtrack_failure"


class SolverError(RuntimeError):
    """Raised when a run cannot continue (non-finite objective, bad setup)."""


@dataclass(frozen=True)
class SolverConfig:
    """Tuning knobs shared by all solvers.

    delta/epsilon control how much of the iterate-to-iterate gap the inertia
    may consume (1 > delta > epsilon > 0; epsilon defaults to 0.01*delta).
    nu_lower/nu_upper are the backtracking ladder ratios, L_bar_init the
    initial majorant constant (tau starts at 1/L_bar_init), gamma_cap an
    upper bound on the extrapolation factor in [0, 1].

    L_lower_policy seeds the minorant ladder each iteration:
      "previous"           max(L_lower_value, previous accepted / nu_lower),
                           so the constant can relax one rung per iteration
      "constant"           always L_lower_value
      "fraction_of_upper"  L_lower_value * previous majorant

    freeze_after, when set, pins the majorant to max(current, problem.smad_L)
    and the step size alongside it from that iteration on; the second phase
    Lyapunov function is defined relative to such a frozen step size.
    store_iterates keeps copies of every iterate and base point on the trace
    (needed by the certificates that re-derive distances independently).
    """

    delta: float = 0.99
    epsilon: Optional[float] = None
    nu_lower: float = 2.0
    nu_upper: float = 2.0
    L_bar_init: float = 1.0
    gamma_cap: float = 1.0
    max_backtracks: int = 60
    max_iters: int = 1000
    stop_tol: float = 1e-9
    L_lower_policy: str = "previous"
    L_lower_value: float = 1e-10
    store_iterates: bool = False
    freeze_after: Optional[int] = None

    def __post_init__(self):
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", 0.01 * self.delta)
        if not 0.0 < self.epsilon < self.delta < 1.0:
            raise ValueError(
                f"need 1 > delta > epsilon > 0, got delta={self.delta}, "
                f"epsilon={self.epsilon}"
            )
        if self.nu_lower <= 1.0 or self.nu_upper <= 1.0:
            raise ValueError("ladder ratios nu_lower/nu_upper must exceed 1")
        if self.L_bar_init <= 0.0:
            raise ValueError(f"L_bar_init must be > 0, got {self.L_bar_init}")
        if not 0.0 <= self.gamma_cap <= 1.0:
            raise ValueError(f"gamma_cap must lie in [0, 1], got {self.gamma_cap}")
        if self.max_backtracks < 1 or self.max_iters < 1:
            raise ValueError("max_backtracks and max_iters must be positive")
        if self.stop_tol < 0.0:
            raise ValueError(f"stop_tol must be >= 0, got {self.stop_tol}")
        if self.L_lower_policy not in ("previous", "constant", "fraction_of_upper"):
            raise ValueError(f"unknown L_lower_policy {self.L_lower_policy!r}")
        if self.L_lower_value <= 0.0:
            raise ValueError("L_lower_value must be > 0")
        if self.freeze_after is not None and self.freeze_after < 1:
            raise ValueError("freeze_after must be >= 1 when set")


@dataclass(frozen=True)
class TraceRecord:
    """One row of a solver trace.

    Record k (1-based) describes the state entering general step k plus the
    parameters accepted during it: psi is Psi(x^k), dh_prev_curr is
    D_h(x^{k-1}, x^k), dh_curr_y is D_h(x^k, y^k), step_norm is
    ||x^k - x^{k-1}||, and tau/gamma/L_bar/L_lower are the accepted values
    that produce x^{k+1}.  Record 0 is the initial state and the final record
    describes the last iterate with zeroed inertia fields.  x and y hold
    iterate copies when the run stores them, else None.
    """

    k: int
    psi: float
    tau: float
    gamma: float
    L_bar: float
    L_lower: float
    dh_prev_curr: float
    dh_curr_y: float
    step_norm: float
    lower_trials: int
    upper_trials: int
    wall_time_ns: int
    x: Optional[np.ndarray] = None
    y: Optional[np.ndarray] = None


@dataclass
class SolverResult:
    """Final iterate plus the full per-iteration trace."""

    solver: str
    problem: str
    x: np.ndarray
    termination: str
    iterations: int
    records: list
    config: SolverConfig

    @property
    def final_psi(self):
        return self.records[-1].psi


@dataclass
class IterateState:
    """Inputs of one general step: the two current iterates and the
    previously accepted parameters."""

    k: int
    x_prev: np.ndarray
    x_curr: np.ndarray
    g_curr: float
    dh_prev_curr: float
    tau_prev: float
    L_bar_prev: float
    L_lower_prev: Optional[float]


def _validate_setup(problem, config, x0, need_quartic=False):
    x0 = np.array(x0, dtype=float).reshape(-1)
    if x0.shape != (problem.dim,):
        raise ValueError(f"x0 has shape {x0.shape}, problem dim is {problem.dim}")
    require_finite(x0, "x0")
    if need_quartic and not isinstance(problem.kernel, QuarticKernel):
        raise ValueError("closed-form inertia requires the quartic kernel")
    # The Lyapunov analysis needs the initial majorant to clear the
    # weak-convexity barrier of f.
    barrier = -problem.alpha / ((1.0 - config.delta) * problem.kernel.sigma)
    if config.L_bar_init <= barrier:
        raise ValueError(
            f"L_bar_init={config.L_bar_init} must exceed "
            f"-alpha/((1-delta)*sigma)={barrier} for this problem"
        )
    return x0


def _maybe_copy(x, store):
    return np.copy(x) if store else None


def _seed_L_lower(state, config):
    if config.L_lower_policy == "constant":
        return config.L_lower_value
    if config.L_lower_policy == "fraction_of_upper":
        return config.L_lower_value * state.L_bar_prev
    if state.L_lower_prev is None:
        return config.L_lower_value
    return max(config.L_lower_value, state.L_lower_prev / config.nu_lower)


def find_gamma(state, L_lower_candidate, config, problem):
    """Largest extrapolation factor compatible with the inertia condition.

    For the Euclidean kernel D_h(x^k, y) = gamma^2 * D_h(x^{k-1}, x^k), so
    gamma = min(gamma_cap, sqrt((delta-eps)/(1 + L_lower*tau_prev))) holds
    with equality-or-better and is returned directly.  Other kernels start
    from the same candidate and halve until the condition verifies; gamma = 0
    always verifies since the base point then collapses onto x^k.
    """
    scale = 1.0 + L_lower_candidate * state.tau_prev
    if scale <= 0.0:
        return config.gamma_cap
    gamma = min(config.gamma_cap, math.sqrt((config.delta - config.epsilon) / scale))
    kernel = problem.kernel
    if isinstance(kernel, EuclideanKernel):
        return gamma
    bound = (config.delta - config.epsilon) * state.dh_prev_curr
    for _ in range(config.max_backtracks):
        y = state.x_curr + gamma * (state.x_curr - state.x_prev)
        if leq(scale * kernel.bregman(state.x_curr, y), bound):
            return gamma
        gamma *= 0.5
    return 0.0


def find_gamma_cfi(state, L_lower_candidate, config, problem):
    """Closed-form inertia for the quartic kernel.

    Uses the bound D_h(x^k, y) <= gamma^2 ||Delta||^2 ((3/2)||x^k||^2 + 7/4)
    with Delta = x^k - x^{k-1} to solve the inertia condition for gamma
    directly instead of searching.  Delta = 0 returns 0.
    """
    delta_vec = state.x_curr - state.x_prev
    nd2 = float(np.dot(delta_vec, delta_vec))
    if nd2 == 0.0:
        return 0.0
    num = (config.delta - config.epsilon) * state.dh_prev_curr
    if num <= 0.0:
        return 0.0
    xk2 = float(np.dot(state.x_curr, state.x_curr))
    denom = (1.0 + L_lower_candidate * state.tau_prev) * nd2 * (1.5 * xk2 + 1.75)
    if denom <= 0.0:
        return config.gamma_cap
    return min(config.gamma_cap, math.sqrt(num / denom))


def lower_backtrack(state, config, problem, gamma_rule=find_gamma):
    """Fix (L_lower, gamma, y) for one step.

    Walks the ladder seed, seed*nu, seed*nu^2, ... and accepts the first
    constant whose extrapolated point satisfies the minorant inequality
    g(x^k) >= g(y) + <grad g(y), x^k - y> - L_lower * D_h(x^k, y), with gamma
    re-derived for each trial.  Returns (ok, L_lower, gamma, y, g_y,
    grad_g_y, trials).
    """
    kernel = problem.kernel
    L_lo = _seed_L_lower(state, config)
    for trial in range(1, config.max_backtracks + 1):
        gamma = gamma_rule(state, L_lo, config, problem)
        y = state.x_curr + gamma * (state.x_curr - state.x_prev)
        g_y = problem.g_value(y)
        grad_g_y = problem.g_grad(y)
        rhs = (
            g_y
            + float(np.dot(grad_g_y, state.x_curr - y))
            - L_lo * kernel.bregman(state.x_curr, y)
        )
        if geq(state.g_curr, rhs):
            return True, L_lo, gamma, y, g_y, grad_g_y, trial
        L_lo *= config.nu_lower
    return False, L_lo, 0.0, state.x_curr, state.g_curr, None, config.max_backtracks


def upper_backtrack(state, y, g_y, grad_g_y, config, problem):
    """Fix (L_bar, tau, x_next) for one step.

    Starts the ladder at the previous majorant (so L_bar never decreases),
    sets tau = min(tau_prev, 1/L_bar), solves the proximal subproblem, and
    accepts once the majorant inequality
    g(x_next) <= g(y) + <grad g(y), x_next - y> + L_bar * D_h(x_next, y)
    holds.  Returns (ok, L_bar, tau, x_next, g_next, trials).
    """
    kernel = problem.kernel
    grad_h_y = kernel.grad(y)
    L_bar = state.L_bar_prev
    for trial in range(1, config.max_backtracks + 1):
        tau = min(state.tau_prev, 1.0 / L_bar)
        x_next = problem.f_prox_step(grad_h_y, grad_g_y, tau)
        g_next = problem.g_value(x_next)
        rhs = (
            g_y
            + float(np.dot(grad_g_y, x_next - y))
            + L_bar * kernel.bregman(x_next, y)
        )
        if leq(g_next, rhs):
            return True, L_bar, tau, x_next, g_next, trial
        L_bar *= config.nu_upper
    return False, L_bar, min(state.tau_prev, 1.0 / L_bar), None, None, config.max_backtracks


def _frozen_upper_step(state, y, grad_g_y, config, problem):
    """Second-phase step: majorant pinned at the global constant, no search."""
    L_bar = max(state.L_bar_prev, problem.smad_L)
    tau = min(state.tau_prev, 1.0 / L_bar)
    x_next = problem.f_prox_step(problem.kernel.grad(y), grad_g_y, tau)
    return L_bar, tau, x_next, problem.g_value(x_next)


def _initial_record(psi, tau, L_bar, x0, store):
    return TraceRecord(
        k=0, psi=psi, tau=tau, gamma=0.0, L_bar=L_bar, L_lower=0.0,
        dh_prev_curr=0.0, dh_curr_y=0.0, step_norm=0.0,
        lower_trials=0, upper_trials=0, wall_time_ns=0,
        x=_maybe_copy(x0, store), y=None,
    )


def _final_record(k, psi, tau, L_bar, kernel, x_prev, x_curr, store):
    return TraceRecord(
        k=k, psi=psi, tau=tau, gamma=0.0, L_bar=L_bar, L_lower=0.0,
        dh_prev_curr=kernel.bregman(x_prev, x_curr), dh_curr_y=0.0,
        step_norm=float(np.linalg.norm(x_curr - x_prev)),
        lower_trials=0, upper_trials=0, wall_time_ns=0,
        x=_maybe_copy(x_curr, store), y=None,
    )


def _cocain_loop(problem, config, x0, callback, gamma_rule, name):
    x0 = _validate_setup(problem, config, x0,
                         need_quartic=(gamma_rule is find_gamma_cfi))
    kernel = problem.kernel
    store = config.store_iterates

    x_prev = x0.copy()
    x_curr = x0.copy()
    g_curr = problem.g_value(x_curr)
    psi_curr = problem.f_value(x_curr) + g_curr
    require_finite(psi_curr, "objective at x0")

    tau_prev = 1.0 / config.L_bar_init
    L_bar_prev = config.L_bar_init
    L_lower_prev = None

    records = [_initial_record(psi_curr, tau_prev, L_bar_prev, x0, store)]
    termination = TERM_MAX_ITERS
    iterations = 0

    for k in range(1, config.max_iters + 1):
        tick = time.perf_counter_ns()
        dh_prev_curr = kernel.bregman(x_prev, x_curr)
        state = IterateState(
            k=k, x_prev=x_prev, x_curr=x_curr, g_curr=g_curr,
            dh_prev_curr=dh_prev_curr, tau_prev=tau_prev,
            L_bar_prev=L_bar_prev, L_lower_prev=L_lower_prev,
        )

        if config.gamma_cap == 0.0:
            # No inertia: the base point is x^k itself and the minorant
            # inequality holds as an identity, so the lower search is moot.
            gamma, L_lower, lower_trials = 0.0, 0.0, 0
            y, g_y = x_curr, g_curr
            grad_g_y = problem.g_grad(x_curr)
        else:
            ok, L_lower, gamma, y, g_y, grad_g_y, lower_trials = lower_backtrack(
                state, config, problem, gamma_rule
            )
            if not ok:
                termination = TERM_BACKTRACK_FAILURE
                break

        frozen = config.freeze_after is not None and k >= config.freeze_after
        if frozen:
            L_bar, tau, x_next, g_next = _frozen_upper_step(
                state, y, grad_g_y, config, problem
            )
            upper_trials = 0
        else:
            ok, L_bar, tau, x_next, g_next, upper_trials = upper_backtrack(
                state, y, g_y, grad_g_y, config, problem
            )
            if not ok:
                termination = TERM_BACKTRACK_FAILURE
                break

        psi_next = problem.f_value(x_next) + g_next
        if not np.isfinite(psi_next):
            raise SolverError(
                f"{name}: objective became non-finite at iteration {k}"
            )

        record = TraceRecord(
            k=k, psi=psi_curr, tau=tau, gamma=gamma, L_bar=L_bar,
            L_lower=L_lower, dh_prev_curr=dh_prev_curr,
            dh_curr_y=kernel.bregman(x_curr, y),
            step_norm=float(np.linalg.norm(x_curr - x_prev)),
            lower_trials=lower_trials, upper_trials=upper_trials,
            wall_time_ns=time.perf_counter_ns() - tick,
            x=_maybe_copy(x_curr, store), y=_maybe_copy(y, store),
        )
        records.append(record)
        iterations = k
        if callback is not None:
            callback(record)

        step_inf = float(np.max(np.abs(x_next - x_curr)))
        x_prev, x_curr = x_curr, x_next
        g_curr, psi_curr = g_next, psi_next
        tau_prev, L_bar_prev, L_lower_prev = tau, L_bar, L_lower

        if step_inf < config.stop_tol:
            termination = TERM_STEP_TOL
            break

    records.append(_final_record(
        records[-1].k + 1, psi_curr, tau_prev, L_bar_prev, kernel,
        x_prev, x_curr, store,
    ))
    return SolverResult(
        solver=name, problem=problem.name, x=x_curr, termination=termination,
        iterations=iterations, records=records, config=config,
    )


def cocain_bpg(problem, config, x0, callback=None):
    """Inertial Bregman proximal gradient with double backtracking.

    Per iteration the minorant constant, extrapolation, and base point are
    fixed first (lower_backtrack), then the majorant constant and step size
    (upper_backtrack).  The accepted parameters guarantee per-iteration
    descent of the Lyapunov function
    tau_{k-1} (Psi(x^k) - v) + delta * D_h(x^{k-1}, x^k), which
    `diagnostics.check_lyapunov_descent` re-verifies from the trace.
    """
    return _cocain_loop(problem, config, x0, callback, find_gamma, "cocain")


def cocain_bpg_cfi(problem, config, x0, callback=None):
    """Variant with closed-form inertia (quartic kernel only).

    Identical to cocain_bpg except that the extrapolation factor for each
    trial minorant constant comes from `find_gamma_cfi` instead of a search.
    """
    return _cocain_loop(problem, config, x0, callback, find_gamma_cfi, "cfi")


def bpg_wb(problem, config, x0, callback=None):
    """Bregman proximal gradient with majorant backtracking, no inertia.

    Exactly cocain_bpg with gamma_cap = 0: the base point is always x^k and
    the minorant never enters, so traces coincide bitwise with a gamma_cap=0
    run of the main solver.
    """
    result = _cocain_loop(
        problem, replace(config, gamma_cap=0.0), x0, callback, find_gamma,
        "bpg_wb",
    )
    return result


def cocain_bpg_no_backtracking(problem, config, x0, callback=None):
    """Inertial variant with global constants and no function evaluations.

    Uses L = max(-alpha/((1-delta)*sigma), smad_L) for both constants and the
    fixed step tau = 1/L; the inertia condition then reads
    (delta - eps) * D_h(x^{k-1}, x^k) >= 2 * D_h(x^k, y^k), solved in closed
    form for the Euclidean kernel and by halving otherwise.  Lyapunov descent
    is still certified per iteration.
    """
    x0 = _validate_setup(problem, config, x0)
    kernel = problem.kernel
    store = config.store_iterates
    L = max(
        -problem.alpha / ((1.0 - config.delta) * kernel.sigma),
        problem.smad_L,
    )
    if L <= 0.0:
        raise ValueError("no-backtracking variant needs a positive constant")
    tau = 1.0 / L
    gamma_flat = min(config.gamma_cap,
                     math.sqrt((config.delta - config.epsilon) / 2.0))
    euclidean = isinstance(kernel, EuclideanKernel)

    x_prev = x0.copy()
    x_curr = x0.copy()
    g_curr = problem.g_value(x_curr)
    psi_curr = problem.f_value(x_curr) + g_curr
    require_finite(psi_curr, "objective at x0")

    records = [_initial_record(psi_curr, tau, L, x0, store)]
    termination = TERM_MAX_ITERS
    iterations = 0

    for k in range(1, config.max_iters + 1):
        tick = time.perf_counter_ns()
        dh_prev_curr = kernel.bregman(x_prev, x_curr)
        gamma = gamma_flat
        if not euclidean:
            bound = (config.delta - config.epsilon) * dh_prev_curr
            for _ in range(config.max_backtracks):
                y = x_curr + gamma * (x_curr - x_prev)
                if leq(2.0 * kernel.bregman(x_curr, y), bound):
                    break
                gamma *= 0.5
            else:
                gamma = 0.0
        y = x_curr + gamma * (x_curr - x_prev)
        grad_g_y = problem.g_grad(y)
        x_next = problem.f_prox_step(kernel.grad(y), grad_g_y, tau)
        g_next = problem.g_value(x_next)
        psi_next = problem.f_value(x_next) + g_next
        if not np.isfinite(psi_next):
            raise SolverError(
                f"cocain_nobt: objective became non-finite at iteration {k}"
            )

        record = TraceRecord(
            k=k, psi=psi_curr, tau=tau, gamma=gamma, L_bar=L, L_lower=L,
            dh_prev_curr=dh_prev_curr, dh_curr_y=kernel.bregman(x_curr, y),
            step_norm=float(np.linalg.norm(x_curr - x_prev)),
            lower_trials=0, upper_trials=0,
            wall_time_ns=time.perf_counter_ns() - tick,
            x=_maybe_copy(x_curr, store), y=_maybe_copy(y, store),
        )
        records.append(record)
        iterations = k
        if callback is not None:
            callback(record)

        step_inf = float(np.max(np.abs(x_next - x_curr)))
        x_prev, x_curr = x_curr, x_next
        g_curr, psi_curr = g_next, psi_next
        if step_inf < config.stop_tol:
            termination = TERM_STEP_TOL
            break

    records.append(_final_record(
        records[-1].k + 1, psi_curr, tau, L, kernel, x_prev, x_curr, store,
    ))
    return SolverResult(
        solver="cocain_nobt", problem=problem.name, x=x_curr,
        termination=termination, iterations=iterations, records=records,
        config=config,
    )


def bpg_fixed(problem, L, x0, config=None, callback=None):
    """Plain Bregman proximal gradient with constant step 1/L.

    Psi is non-increasing along the iterates provided L >= problem.smad_L;
    smaller L voids that guarantee.  No backtracking, no inertia.
    """
    config = config if config is not None else SolverConfig()
    if L <= 0.0:
        raise ValueError(f"L must be > 0, got {L}")
    x0 = np.array(x0, dtype=float).reshape(-1)
    if x0.shape != (problem.dim,):
        raise ValueError(f"x0 has shape {x0.shape}, problem dim is {problem.dim}")
    require_finite(x0, "x0")
    kernel = problem.kernel
    store = config.store_iterates
    tau = 1.0 / L

    x_prev = x0.copy()
    x_curr = x0.copy()
    g_curr = problem.g_value(x_curr)
    psi_curr = problem.f_value(x_curr) + g_curr
    require_finite(psi_curr, "objective at x0")

    records = [_initial_record(psi_curr, tau, L, x0, store)]
    termination = TERM_MAX_ITERS
    iterations = 0

    for k in range(1, config.max_iters + 1):
        tick = time.perf_counter_ns()
        grad_g = problem.g_grad(x_curr)
        x_next = problem.f_prox_step(kernel.grad(x_curr), grad_g, tau)
        g_next = problem.g_value(x_next)
        psi_next = problem.f_value(x_next) + g_next
        if not np.isfinite(psi_next):
            raise SolverError(
                f"bpg_fixed: objective became non-finite at iteration {k}"
            )

        record = TraceRecord(
            k=k, psi=psi_curr, tau=tau, gamma=0.0, L_bar=L, L_lower=0.0,
            dh_prev_curr=kernel.bregman(x_prev, x_curr), dh_curr_y=0.0,
            step_norm=float(np.linalg.norm(x_curr - x_prev)),
            lower_trials=0, upper_trials=0,
            wall_time_ns=time.perf_counter_ns() - tick,
            x=_maybe_copy(x_curr, store), y=_maybe_copy(x_curr, store),
        )
        records.append(record)
        iterations = k
        if callback is not None:
            callback(record)

        step_inf = float(np.max(np.abs(x_next - x_curr)))
        x_prev, x_curr = x_curr, x_next
        g_curr, psi_curr = g_next, psi_next
        if step_inf < config.stop_tol:
            termination = TERM_STEP_TOL
            break

    records.append(_final_record(
        records[-1].k + 1, psi_curr, tau, L, kernel, x_prev, x_curr, store,
    ))
    return SolverResult(
        solver="bpg_fixed", problem=problem.name, x=x_curr,
        termination=termination, iterations=iterations, records=records,
        config=config,
    )


def ipiano(problem, beta, config, x0, callback=None):
    """Inertial proximal algorithm with fixed extrapolation (Euclidean only).

    The gradient is evaluated at x^k while the proximal step is centered at
    the extrapolated point y^k = x^k + beta (x^k - x^{k-1}); for f = 0 this
    is the classical heavy-ball update.  Only the majorant constant adapts,
    against the descent inequality between x^k and x^{k+1}.  beta = 0
    reproduces bpg_wb bitwise.
    """
    if not 0.0 <= beta < 1.0:
        raise ValueError(f"beta must lie in [0, 1), got {beta}")
    if not isinstance(problem.kernel, EuclideanKernel):
        raise ValueError("ipiano is defined for the Euclidean kernel only")
    x0 = _validate_setup(problem, config, x0)
    kernel = problem.kernel
    store = config.store_iterates

    x_prev = x0.copy()
    x_curr = x0.copy()
    g_curr = problem.g_value(x_curr)
    psi_curr = problem.f_value(x_curr) + g_curr
    require_finite(psi_curr, "objective at x0")

    tau_prev = 1.0 / config.L_bar_init
    L_bar_prev = config.L_bar_init

    records = [_initial_record(psi_curr, tau_prev, L_bar_prev, x0, store)]
    termination = TERM_MAX_ITERS
    iterations = 0

    for k in range(1, config.max_iters + 1):
        tick = time.perf_counter_ns()
        dh_prev_curr = kernel.bregman(x_prev, x_curr)
        y = x_curr + beta * (x_curr - x_prev)
        grad_g_x = problem.g_grad(x_curr)
        grad_h_y = kernel.grad(y)

        ok = False
        L_bar = L_bar_prev
        for trial in range(1, config.max_backtracks + 1):
            tau = min(tau_prev, 1.0 / L_bar)
            x_next = problem.f_prox_step(grad_h_y, grad_g_x, tau)
            g_next = problem.g_value(x_next)
            rhs = (
                g_curr
                + float(np.dot(grad_g_x, x_next - x_curr))
                + L_bar * kernel.bregman(x_next, x_curr)
            )
            if leq(g_next, rhs):
                ok = True
                break
            L_bar *= config.nu_upper
        if not ok:
            termination = TERM_BACKTRACK_FAILURE
            break

        psi_next = problem.f_value(x_next) + g_next
        if not np.isfinite(psi_next):
            raise SolverError(
                f"ipiano: objective became non-finite at iteration {k}"
            )

        record = TraceRecord(
            k=k, psi=psi_curr, tau=tau, gamma=beta, L_bar=L_bar, L_lower=0.0,
            dh_prev_curr=dh_prev_curr, dh_curr_y=kernel.bregman(x_curr, y),
            step_norm=float(np.linalg.norm(x_curr - x_prev)),
            lower_trials=0, upper_trials=trial,
            wall_time_ns=time.perf_counter_ns() - tick,
            x=_maybe_copy(x_curr, store), y=_maybe_copy(y, store),
        )
        records.append(record)
        iterations = k
        if callback is not None:
            callback(record)

        step_inf = float(np.max(np.abs(x_next - x_curr)))
        x_prev, x_curr = x_curr, x_next
        g_curr, psi_curr = g_next, psi_next
        tau_prev, L_bar_prev = tau, L_bar

        if step_inf < config.stop_tol:
            termination = TERM_STEP_TOL
            break

    records.append(_final_record(
        records[-1].k + 1, psi_curr, tau_prev, L_bar_prev, kernel,
        x_prev, x_curr, store,
    ))
    return SolverResult(
        solver="ipiano", problem=problem.name, x=x_curr,
        termination=termination, iterations=iterations, records=records,
        config=config,
    )
