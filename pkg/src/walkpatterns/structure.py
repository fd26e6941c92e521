"""Irreducible and cohesive intervals, and signed permutations acting on blocks of levels."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from .diagram import ActionResult, _act, _compatible, _raw_edges, _valid_raw
from .errors import (
    MAX_BLOCKS,
    MAX_EXHAUSTIVE_N,
    InternalError,
    LengthMismatch,
    NoValidDecomposition,
    check_size,
)
from .perm import Permutation, SignedPermutation, inflate, signed_reverse_complement


@dataclass(frozen=True)
class IntervalPartition:
    """Borders ``x_0 < x_1 < ... < x_k``; block i is ``[x_i, x_{i+1}]``."""

    borders: tuple[int, ...]

    def __post_init__(self):
        b = self.borders
        if not b or any(x >= y for x, y in zip(b, b[1:])):
            raise ValueError(f"borders must be strictly increasing, got {b}")

    @property
    def blocks(self) -> list[tuple[int, int]]:
        return list(zip(self.borders, self.borders[1:]))

    def __len__(self) -> int:
        return len(self.borders) - 1

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.borders)


def lower_to_levels(mu: SignedPermutation, borders: Sequence[int], n: int) -> tuple[int, ...]:
    """The level permutation in S_{n-1} induced by letting ``mu`` act on blocks.

    Block i (levels ``borders[i]`` .. ``borders[i+1]-1``) is moved to slot
    ``|mu(i)|`` and its levels are reversed when ``mu(i)`` is barred. Levels
    outside ``[borders[0], borders[-1]]`` stay put.
    """
    k = len(borders) - 1
    if len(mu) != k:
        raise LengthMismatch(f"signed permutation of length {len(mu)} for {k} blocks")
    widths = [b - a for a, b in zip(borders, borders[1:])]
    slot_width = [0] * (k + 1)
    for i, x in enumerate(mu.entries):
        slot_width[abs(x)] = widths[i]
    slot_start = list(itertools.accumulate(slot_width[1:], initial=borders[0]))
    sigma = list(range(1, n))
    for i, x in enumerate(mu.entries):
        base = slot_start[abs(x) - 1]
        w = widths[i]
        for t in range(w):
            sigma[borders[i] - 1 + t] = base + (t if x > 0 else w - 1 - t)
    return tuple(sigma)


@dataclass(frozen=True)
class BlockAction:
    mu: SignedPermutation
    base: IntervalPartition

    def __post_init__(self):
        if len(self.mu) != len(self.base):
            raise LengthMismatch(f"{len(self.mu)} entries for {len(self.base)} blocks")

    def levels(self, n: int) -> Permutation:
        return Permutation._trusted(lower_to_levels(self.mu, self.base.borders, n))


def valid_level_actions(pi: Permutation, limit: int = MAX_EXHAUSTIVE_N) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Every ``(sigma, sigma.pi)`` with sigma in S_{n-1} acting validly on pi."""
    n = len(pi)
    check_size(n, limit)
    edges = _raw_edges(pi.entries)
    out = []
    for sigma in itertools.permutations(range(1, n)):
        _, path = _act(n, edges, sigma)
        if path is not None:
            out.append((sigma, path))
    return out


def _is_linked(sigmas: Sequence[Sequence[int]], s: int, t: int) -> bool:
    for sigma in sigmas:
        seg = sigma[s - 1 : t - 1]
        step = seg[1] - seg[0] if len(seg) > 1 else 1
        if step not in (1, -1):
            return False
        if any(b - a != step for a, b in zip(seg, seg[1:])):
            return False
    return True


def irreducible_partition_bruteforce(pi: Permutation, limit: int = MAX_EXHAUSTIVE_N) -> IntervalPartition:
    """Irreducible partition straight from the definition.

    An interval is linked when every valid sigma maps its levels onto
    consecutive levels, in the same or the reversed order; the irreducible
    intervals are the maximal linked ones.
    """
    n = len(pi)
    check_size(n, limit)
    if n == 1:
        return IntervalPartition((1,))
    sigmas = [sigma for sigma, _ in valid_level_actions(pi, limit)]
    linked = [(s, t) for s in range(1, n) for t in range(s + 1, n + 1) if _is_linked(sigmas, s, t)]
    maximal = sorted(
        (s, t) for s, t in linked if not any(u <= s and t <= v and (u, v) != (s, t) for u, v in linked)
    )
    borders = [1]
    for s, t in maximal:
        if s != borders[-1]:
            raise InternalError(f"irreducible intervals of {pi} do not tile: {maximal}")
        borders.append(t)
    if borders[-1] != n:
        raise InternalError(f"irreducible intervals of {pi} do not tile: {maximal}")
    return IntervalPartition(tuple(borders))


def irreducible_partition_fast(pi: Permutation) -> IntervalPartition:
    """Borders are 1, n and the endpoints of every valid interval of width at least two."""
    n = len(pi)
    if n == 1:
        return IntervalPartition((1,))
    e = pi.entries
    borders = {1, n}
    for i, j in _valid_raw(e, _raw_edges(e)):
        if j - i >= 2:
            borders.update((i, j))
    return IntervalPartition(tuple(sorted(borders)))


def apply_block_action(
    pi: Permutation, mu: SignedPermutation, partition: Optional[IntervalPartition] = None
) -> ActionResult:
    """Let ``mu`` act on the blocks of ``partition`` (the irreducible partition by default)."""
    if partition is None:
        partition = irreducible_partition_fast(pi)
    n = len(pi)
    sigma = lower_to_levels(mu, partition.borders, n)
    outcome, path = _act(n, _raw_edges(pi.entries), sigma)
    return ActionResult(outcome, None if path is None else Permutation._trusted(path))


def valid_block_actions(
    pi: Permutation, partition: Optional[IntervalPartition] = None, limit: int = MAX_BLOCKS
) -> list[SignedPermutation]:
    """All signed permutations of the blocks that act validly on pi."""
    if partition is None:
        partition = irreducible_partition_fast(pi)
    k = len(partition)
    check_size(k, limit, "k")
    n = len(pi)
    if n == 1:
        return []
    edges = _raw_edges(pi.entries)
    out = []
    for mu in SignedPermutation.all(k):
        _, path = _act(n, edges, lower_to_levels(mu, partition.borders, n))
        if path is not None:
            out.append(mu)
    return out


def _edge_trichotomy(pi: Permutation, a: int, b: int) -> bool:
    return all(_compatible(lo, hi, a, b) for lo, hi, _ in _raw_edges(pi.entries))


def _maps_to_interval(sigma: Sequence[int], a: int, b: int) -> bool:
    seg = sigma[a - 1 : b - 1]
    return max(seg) - min(seg) + 1 == b - a


def is_cohesive(
    pi: Permutation,
    interval: tuple[int, int],
    valid_actions: Optional[Sequence[SignedPermutation]] = None,
    limit: int = MAX_BLOCKS,
) -> bool:
    a, b = interval
    part = irreducible_partition_fast(pi)
    if a >= b or a not in part.borders or b not in part.borders:
        return False
    if not _edge_trichotomy(pi, a, b):
        return False
    if valid_actions is None:
        valid_actions = valid_block_actions(pi, part, limit)
    n = len(pi)
    return all(_maps_to_interval(lower_to_levels(mu, part.borders, n), a, b) for mu in valid_actions)


def cohesive_intervals(pi: Permutation, limit: int = MAX_BLOCKS) -> list[tuple[int, int]]:
    """Every cohesive interval, as a pair of irreducible borders."""
    part = irreducible_partition_fast(pi)
    actions = valid_block_actions(pi, part, limit)
    return [
        (a, b)
        for a, b in itertools.combinations(part.borders, 2)
        if is_cohesive(pi, (a, b), actions, limit)
    ]


def _acts_validly(pi: Permutation, mu: SignedPermutation, borders: Sequence[int]) -> bool:
    n = len(pi)
    _, path = _act(n, _raw_edges(pi.entries), lower_to_levels(mu, borders, n))
    return path is not None


def decompose_block_action(
    pi: Permutation, partition: IntervalPartition, mu: SignedPermutation, i: int, j: int
) -> tuple[SignedPermutation, SignedPermutation]:
    """Split ``mu`` as ``alpha[1^i, beta, 1^(l-j)]`` around the cohesive interval ``[a_i, a_j]``.

    ``partition`` is a cohesive partition ``a_0 < ... < a_l`` and ``mu`` acts
    validly on its blocks. Of the two candidate splits (the collapsed entry of
    alpha barred or not), the first whose beta acts validly on the blocks of
    ``[a_i, a_j]`` is returned.
    """
    a = partition.borders
    l = len(partition)
    if len(mu) != l:
        raise LengthMismatch(f"signed permutation of length {len(mu)} for {l} blocks")
    if not (0 <= i < j <= l) or j == i + 1 or (i, j) == (0, l):
        raise NoValidDecomposition(f"[a_{i}, a_{j}] is not a proper sub-interval of the partition")
    if not _acts_validly(pi, mu, a):
        raise NoValidDecomposition(f"{mu} does not act validly on {pi}")
    m = j - i
    inner = mu.entries[i:j]
    c = min(abs(x) for x in inner)
    if max(abs(x) for x in inner) - c + 1 != m:
        raise NoValidDecomposition(f"{mu} splits the blocks of [a_{i}, a_{j}]")

    def collapse(x: int) -> int:
        v = abs(x)
        v = v if v < c else v - (m - 1)
        return v if x > 0 else -v

    before = [collapse(x) for x in mu.entries[:i]]
    after = [collapse(x) for x in mu.entries[j:]]
    gamma = SignedPermutation._trusted(tuple(x - c + 1 if x > 0 else x + c - 1 for x in inner))
    ones = SignedPermutation.identity(1)
    inner_borders = a[i : j + 1]
    for sign, beta in ((1, gamma), (-1, signed_reverse_complement(gamma))):
        alpha = SignedPermutation._trusted(tuple(before + [sign * c] + after))
        blocks = [ones] * i + [beta] + [ones] * (l - j)
        if inflate(alpha, blocks) != mu:
            raise InternalError(f"inflation round trip failed for {mu}")
        if _acts_validly(pi, beta, inner_borders):
            return alpha, beta
    raise NoValidDecomposition(f"neither split of {mu} around [a_{i}, a_{j}] gives a valid beta")
