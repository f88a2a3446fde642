"""Builders and comparison helpers shared across test modules."""

import numpy as np

from cocain.kernels import EuclideanKernel
from cocain.problems import CompositeProblem

# Fields compared for bit-identity between traces; wall_time_ns is the one
# legitimately nondeterministic column.
TRACE_FIELDS = (
    "k", "psi", "tau", "gamma", "L_bar", "L_lower", "dh_prev_curr",
    "dh_curr_y", "step_norm", "lower_trials", "upper_trials",
)


def quadratic_problem(diag, name="quadratic"):
    """f = 0, g(x) = 0.5 * x^T diag(d) x on the Euclidean kernel.

    The tightest smooth-adaptability constant is max(d), and every
    backtracking inequality is exact for quadratics, which makes escalation
    counts and accepted constants predictable.
    """
    d = np.atleast_1d(np.asarray(diag, dtype=float))
    return CompositeProblem(
        name=name,
        dim=d.size,
        kernel=EuclideanKernel(),
        f_value=lambda x: 0.0,
        f_prox_step=lambda gh, gg, tau: gh - tau * gg,
        g_value=lambda x: 0.5 * float(np.dot(x, d * x)),
        g_grad=lambda x: d * x,
        smad_L=float(np.max(d)),
        sampling_box=(-5.0, 5.0),
    )


def assert_traces_identical(a, b):
    """Bit-identity of two traces on everything except wall time."""
    assert len(a) == len(b), f"trace lengths differ: {len(a)} vs {len(b)}"
    for ra, rb in zip(a, b):
        for name in TRACE_FIELDS:
            va, vb = getattr(ra, name), getattr(rb, name)
            assert va == vb, f"record {ra.k}: {name} {va!r} != {vb!r}"
        for name in ("x", "y"):
            va, vb = getattr(ra, name), getattr(rb, name)
            assert (va is None) == (vb is None), f"record {ra.k}: {name} storage"
            if va is not None:
                assert np.array_equal(va, vb), f"record {ra.k}: {name} differs"


def replace_record(records, k, **fields):
    """Copy of `records` with record k's fields overridden (for negative
    controls that corrupt an otherwise valid trace)."""
    out = list(records)
    out[k] = type(out[k])(**{**out[k].__dict__, **fields})
    return out
