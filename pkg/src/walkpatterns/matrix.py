"""The step matrix L(pi) and matrix-level equivalence search.

Row i of L(pi) writes the edge from pi(i) to pi(i+1) as a signed sum of the
levels it crosses, so L(pi) maps positive level heights to the steps of a
walk with pattern pi. The map satisfies ``L(tau pi) = L(pi) L(tau)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    MAX_EXHAUSTIVE_N,
    DimensionMismatch,
    InternalError,
    LengthMismatch,
    SingularMatrix,
    check_size,
)
from .perm import Permutation, inverse

Matrix = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class StepMatrix:
    rows: Matrix

    @property
    def dim(self) -> int:
        return len(self.rows)

    def dump(self) -> str:
        """Row-major text form, one row per line, e.g. ``0 -1 0 0``."""
        return "\n".join(" ".join(str(x) for x in row) for row in self.rows)

    def __str__(self) -> str:
        return self.dump()


def _rows(m: StepMatrix | Sequence[Sequence[int]]) -> Matrix:
    if isinstance(m, StepMatrix):
        return m.rows
    return tuple(tuple(int(x) for x in row) for row in m)


def step_matrix(pi: Permutation) -> StepMatrix:
    n = len(pi)
    if n < 2:
        raise ValueError("step matrices need n >= 2")
    e = pi.entries
    rows = []
    for i in range(n - 1):
        a, b = e[i], e[i + 1]
        sign = 1 if b > a else -1
        lo, hi = min(a, b), max(a, b)
        rows.append(tuple(sign if lo <= j < hi else 0 for j in range(1, n)))
    return StepMatrix(tuple(rows))


def identity_matrix(dim: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(dim)) for i in range(dim))


def permutation_matrix(rho: Permutation) -> Matrix:
    """``P[i][j] = 1`` iff ``rho(i) = j``."""
    n = len(rho)
    return tuple(tuple(int(rho.entries[i] == j + 1) for j in range(n)) for i in range(n))


def matrix_multiply(a, b) -> Matrix:
    a, b = _rows(a), _rows(b)
    inner = len(b)
    if any(len(row) != inner for row in a):
        raise DimensionMismatch(f"cannot multiply {len(a)}x? by {inner}x? matrices")
    cols = tuple(zip(*b)) if b else ()
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def determinant(m) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    a = [list(row) for row in _rows(m)]
    size = len(a)
    if any(len(row) != size for row in a):
        raise DimensionMismatch("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            pivot = next((r for r in range(k + 1, size) if a[r][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                # exact: Bareiss guarantees divisibility
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1] if size else 1


def determinant_sign(m: StepMatrix) -> int:
    """det(L(pi)), which is always +1 or -1."""
    det = determinant(m)
    if det == 0:
        raise SingularMatrix("step matrix is singular")
    if det not in (1, -1):
        raise InternalError(f"step matrix has determinant {det}")
    return det


def matrix_equivalence_witness(
    pi: Permutation, tau: Permutation, limit: int = MAX_EXHAUSTIVE_N
) -> Optional[tuple[Permutation, Permutation]]:
    """Find ``(rho, sigma)`` with ``P_{rho^-1} L(pi) P_sigma = L(tau)``, or None.

    Only sigma is enumerated. Rows of L(tau) are pairwise distinct, so rho is
    forced by matching the rows of ``L(pi) P_sigma`` against them.
    """
    if len(pi) != len(tau):
        raise LengthMismatch(f"lengths {len(pi)} and {len(tau)} differ")
    n = len(pi)
    check_size(n, limit)
    lp, lt = step_matrix(pi).rows, step_matrix(tau).rows
    target = {row: idx for idx, row in enumerate(lt)}
    d = n - 1
    for sigma in itertools.permutations(range(d)):
        rho = []
        for row in lp:
            moved = [0] * d
            for k, x in enumerate(row):
                moved[sigma[k]] = x
            idx = target.get(tuple(moved))
            if idx is None:
                break
            rho.append(idx + 1)
        else:
            if len(set(rho)) != d:
                continue
            rho_p = Permutation._trusted(tuple(rho))
            sigma_p = Permutation._trusted(tuple(s + 1 for s in sigma))
            lhs = matrix_multiply(
                matrix_multiply(permutation_matrix(inverse(rho_p)), lp),
                permutation_matrix(sigma_p),
            )
            if lhs != lt:
                raise InternalError(f"row matching produced a bad witness for {pi}, {tau}")
            return rho_p, sigma_p
    return None
