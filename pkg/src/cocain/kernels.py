"""Bregman reference kernels and distance helpers.

A kernel is a strongly convex function h whose Bregman distance

    D_h(x, y) = h(x) - h(y) - <grad h(y), x - y>

replaces the squared Euclidean distance in the proximal steps.  Two kernels
are provided: the Euclidean energy (h = 0.5 ||x||^2, the classical setting)
and the quartic-plus-quadratic kernel (h = 0.25 ||x||^4 + 0.5 ||x||^2) that
majorizes quartic objectives such as phase retrieval.
"""

import numpy as np


def _check_pair(x, y):
    if x.shape != y.shape:
        raise ValueError(f"point shapes differ: {x.shape} vs {y.shape}")


class Kernel:
    """Base class for reference functions h.

    Subclasses provide value/grad and the two second-order facilities the
    certificates need: `hess_quadratic_form` (the scalar form used by the
    closed-form inertia bounds) and `hess_vec` (the true Hessian-vector
    product used by the stationarity witnesses).

    `sigma` is the strong convexity modulus of h.
    """

    sigma = 1.0
    name = "kernel"

    def value(self, x):
        raise NotImplementedError

    def grad(self, x):
        raise NotImplementedError

    def hess_quadratic_form(self, x, a):
        raise NotImplementedError

    def hess_vec(self, x, v):
        raise NotImplementedError

    def bregman(self, x, y):
        """D_h(x, y), nonnegative for convex h."""
        _check_pair(x, y)
        return self.value(x) - self.value(y) - float(np.dot(self.grad(y), x - y))

    def __repr__(self):
        return f"{type(self).__name__}()"


class EuclideanKernel(Kernel):
    """h(x) = 0.5 ||x||^2; D_h is half the squared Euclidean distance."""

    sigma = 1.0
    name = "euclidean"

    def value(self, x):
        return 0.5 * float(np.dot(x, x))

    def grad(self, x):
        return np.copy(x)

    def hess_quadratic_form(self, x, a):
        return float(np.dot(a, a))

    def hess_vec(self, x, v):
        return np.copy(v)

    def bregman(self, x, y):
        # Exact closed form; the generic three-term formula would cancel.
        _check_pair(x, y)
        d = x - y
        return 0.5 * float(np.dot(d, d))


class QuarticKernel(Kernel):
    """h(x) = 0.25 ||x||^4 + 0.5 ||x||^2, strongly convex with sigma = 1.

    grad h(x) = (||x||^2 + 1) x.  `hess_quadratic_form` returns the
    second-order expansion coefficient of h(x + a),

        <a,x>^2 + 0.5 ||x||^2 ||a||^2 + 0.5 ||a||^2,

    which is the quantity the closed-form inertia analysis bounds by
    (3/2) ||x||^2 ||a||^2 + (1/2) ||a||^2.  The full Hessian-vector product
    (twice the symmetric part) is `hess_vec`.
    """

    sigma = 1.0
    name = "quartic"

    def value(self, x):
        n2 = float(np.dot(x, x))
        return 0.25 * n2 * n2 + 0.5 * n2

    def grad(self, x):
        return (float(np.dot(x, x)) + 1.0) * x

    def hess_quadratic_form(self, x, a):
        ax = float(np.dot(a, x))
        return ax * ax + 0.5 * float(np.dot(x, x)) * float(np.dot(a, a)) + 0.5 * float(np.dot(a, a))

    def hess_vec(self, x, v):
        return (float(np.dot(x, x)) + 1.0) * v + 2.0 * float(np.dot(x, v)) * x


def bregman_distance(kernel, x, y):
    """D_h(x, y) for the given kernel."""
    return kernel.bregman(x, y)


def three_points_gap(kernel, x, y, z):
    """Residual of the three-points identity; zero up to rounding.

    D_h(x, z) - D_h(x, y) - D_h(y, z) = <grad h(y) - grad h(z), x - y>
    holds for every triple, so the returned gap measures only floating-point
    cancellation.
    """
    _check_pair(x, y)
    _check_pair(y, z)
    lhs = kernel.bregman(x, z) - kernel.bregman(x, y) - kernel.bregman(y, z)
    rhs = float(np.dot(kernel.grad(y) - kernel.grad(z), x - y))
    return lhs - rhs


def symmetry_coefficient_estimate(kernel, pairs, n_samples=None):
    """Empirical symmetry coefficient inf D_h(x,y)/D_h(y,x) over sampled pairs.

    `pairs` is an iterable of (x, y) point pairs; at most `n_samples` are
    consumed when given.  Degenerate pairs (x == y, where both distances
    vanish) are skipped.  The estimate upper-bounds the true coefficient and
    equals 1.0 exactly for the Euclidean kernel.
    """
    best = None
    used = 0
    for x, y in pairs:
        if n_samples is not None and used >= n_samples:
            break
        used += 1
        d_yx = kernel.bregman(y, x)
        if d_yx <= 0.0:
            continue
        ratio = kernel.bregman(x, y) / d_yx
        best = ratio if best is None else min(best, ratio)
    if best is None:
        raise ValueError("no non-degenerate pair supplied")
    return best
