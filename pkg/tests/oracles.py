"""Reference implementations that share no code with the package."""

from __future__ import annotations

import itertools
import math

from scipy import integrate, stats


def step_matrix_by_thresholds(entries):
    """Row i, column j is [pi(i+1) > j] - [pi(i) > j]."""
    n = len(entries)
    return tuple(
        tuple(int(entries[i + 1] > j) - int(entries[i] > j) for j in range(1, n)) for i in range(n - 1)
    )


def leibniz_det(m):
    size = len(m)
    total = 0
    for perm in itertools.permutations(range(size)):
        inversions = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = -1 if inversions % 2 else 1
        for i, j in enumerate(perm):
            term *= m[i][j]
            if term == 0:
                break
        total += term
    return total


def compose_by_dict(pi, tau):
    """i -> tau(pi(i)) through explicit dictionaries."""
    p = {i + 1: x for i, x in enumerate(pi)}
    t = {i + 1: x for i, x in enumerate(tau)}
    return tuple(t[p[i]] for i in sorted(p))


def matmul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]))) for i in range(len(a))
    )


def _y_interval(pattern, x):
    """Values of the second step y that give the three-point walk 0, x, x+y the given pattern."""
    lo, hi = -math.inf, math.inf
    a, b, c = pattern
    # need sign(y) == sign(c - b) and sign(x + y) == sign(c - a); the sign of x is checked by the caller
    if c > b:
        lo = max(lo, 0.0)
    else:
        hi = min(hi, 0.0)
    if c > a:
        lo = max(lo, -x)
    else:
        hi = min(hi, -x)
    return lo, hi


def three_point_probability(pattern, law):
    """P(pattern of 0, X1, X1+X2) for i.i.d. steps from a frozen scipy law, by one-dimensional quadrature."""
    a, b, _ = pattern
    x_lo, x_hi = law.support()
    if b > a:
        x_lo = max(x_lo, 0.0)
    else:
        x_hi = min(x_hi, 0.0)

    def inner(x):
        lo, hi = _y_interval(pattern, x)
        return max(0.0, law.cdf(hi) - law.cdf(lo)) * law.pdf(x)

    value, _ = integrate.quad(inner, x_lo, x_hi, limit=200)
    return value


GAUSSIAN = stats.norm(0, 1)
UNIFORM = stats.uniform(-1, 2)
