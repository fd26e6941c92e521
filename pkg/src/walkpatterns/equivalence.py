"""Equivalence classes of patterns, by closure under valid flips and by direct search."""

from __future__ import annotations

import itertools
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .diagram import _act, _raw_edges, _valid_raw, flip_interval, flip_sigma
from .errors import MAX_EXHAUSTIVE_N, InternalError, LengthMismatch, check_size
from .perm import Permutation


@dataclass(frozen=True)
class EquivalenceClass:
    members: tuple[Permutation, ...]  # sorted, so members[0] is the representative

    @classmethod
    def of(cls, members: Iterable[Permutation]) -> EquivalenceClass:
        ms = tuple(sorted(set(members)))
        if not ms:
            raise ValueError("an equivalence class cannot be empty")
        return cls(ms)

    @property
    def representative(self) -> Permutation:
        return self.members[0]

    @property
    def n(self) -> int:
        return len(self.members[0])

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, pi: object) -> bool:
        return pi in set(self.members)

    def line(self) -> str:
        """``representative<TAB>size<TAB>member<TAB>member...``"""
        return "\t".join([str(self.representative), str(len(self))] + [str(m) for m in self.members])


@dataclass(frozen=True)
class FlipWitness:
    """A chain of valid flips; ``steps[i]`` is (permutation before the flip, flipped interval)."""

    start: Permutation
    steps: tuple[tuple[Permutation, tuple[int, int]], ...] = field(default=())

    def __len__(self) -> int:
        return len(self.steps)

    def replay(self) -> Permutation:
        cur = self.start
        for before, interval in self.steps:
            if before != cur:
                raise InternalError(f"witness step starts at {before}, expected {cur}")
            cur = flip_interval(cur, interval)
        return cur


def _neighbours(e: tuple[int, ...]) -> Iterable[tuple[tuple[int, int], tuple[int, ...]]]:
    n = len(e)
    edges = _raw_edges(e)
    for i, j in _valid_raw(e, edges):
        if j - i < 2:
            continue  # a width-one flip fixes every level
        _, path = _act(n, edges, flip_sigma(n, i, j))
        if path is None:
            raise InternalError(f"valid flip [{i},{j}] of {e} is not proper")
        yield (i, j), path


def _closure(e: tuple[int, ...]) -> set[tuple[int, ...]]:
    seen = {e}
    queue = deque([e])
    while queue:
        cur = queue.popleft()
        for _, nxt in _neighbours(cur):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def class_of(pi: Permutation) -> EquivalenceClass:
    if len(pi) == 1:
        return EquivalenceClass((pi,))
    return EquivalenceClass.of(Permutation._trusted(x) for x in _closure(pi.entries))


def equivalence_oracle(
    pi: Permutation, tau: Permutation, limit: int = MAX_EXHAUSTIVE_N
) -> Optional[Permutation]:
    """A level permutation sigma with ``E_{sigma.pi} = E_tau``, found by exhaustive search."""
    if len(pi) != len(tau):
        raise LengthMismatch(f"lengths {len(pi)} and {len(tau)} differ")
    n = len(pi)
    check_size(n, limit)
    if n == 1:
        return None if pi != tau else Permutation.identity(1)
    edges = _raw_edges(pi.entries)
    target = frozenset(_raw_edges(tau.entries))
    for sigma in itertools.permutations(range(1, n)):
        images = set()
        for lo, hi, s in edges:
            moved = sigma[lo - 1 : hi - 1]
            mn, mx = min(moved), max(moved)
            if mx - mn + 1 != hi - lo:
                break
            images.add((mn, mx + 1, s))
        else:
            if images == target:
                return Permutation._trusted(sigma)
    return None


def oracle_class(pi: Permutation, limit: int = MAX_EXHAUSTIVE_N) -> frozenset[Permutation]:
    """Every tau reachable as a proper image ``sigma.pi``."""
    n = len(pi)
    check_size(n, limit)
    if n == 1:
        return frozenset({pi})
    edges = _raw_edges(pi.entries)
    out = set()
    for sigma in itertools.permutations(range(1, n)):
        _, path = _act(n, edges, sigma)
        if path is not None:
            out.add(Permutation._trusted(path))
    return frozenset(out)


def enumerate_classes(n: int, limit: int = MAX_EXHAUSTIVE_N, workers: int = 1) -> list[EquivalenceClass]:
    """Partition S_n into classes, sorted by representative.

    With several workers, seeds are sharded round-robin and each worker closes
    its seeds independently; closures are merged afterwards, so the result does
    not depend on the worker count.
    """
    if n < 1:
        raise ValueError("n must be positive")
    check_size(n, limit)
    if n == 1:
        return [EquivalenceClass((Permutation.identity(1),))]
    closures: list[frozenset[tuple[int, ...]]]
    if workers <= 1:
        closures = []
        seen: set[tuple[int, ...]] = set()
        for e in itertools.permutations(range(1, n + 1)):
            if e not in seen:
                cl = frozenset(_closure(e))
                seen |= cl
                closures.append(cl)
    else:
        seeds = list(itertools.permutations(range(1, n + 1)))
        shards = [seeds[w::workers] for w in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_reduce_shard, shards))
        merged: dict[tuple[int, ...], frozenset[tuple[int, ...]]] = {}
        for part in parts:
            for cl in part:
                merged.setdefault(min(cl), cl)
        closures = list(merged.values())
    classes = [EquivalenceClass.of(Permutation._trusted(x) for x in cl) for cl in closures]
    return sorted(classes, key=lambda c: c.representative)


def _reduce_shard(seeds: list[tuple[int, ...]]) -> list[frozenset[tuple[int, ...]]]:
    seen: set[tuple[int, ...]] = set()
    out = []
    for e in seeds:
        if e not in seen:
            cl = frozenset(_closure(e))
            seen |= cl
            out.append(cl)
    return out


def flip_witness(pi: Permutation, tau: Permutation) -> Optional[FlipWitness]:
    """A shortest chain of valid flips from pi to tau, or None if they are not equivalent."""
    if len(pi) != len(tau):
        raise LengthMismatch(f"lengths {len(pi)} and {len(tau)} differ")
    start, goal = pi.entries, tau.entries
    if start == goal:
        return FlipWitness(pi)
    parent: dict[tuple[int, ...], tuple[tuple[int, ...], tuple[int, int]]] = {}
    seen = {start}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        for interval, nxt in _neighbours(cur):
            if nxt in seen:
                continue
            seen.add(nxt)
            parent[nxt] = (cur, interval)
            if nxt == goal:
                steps = []
                node = nxt
                while node != start:
                    prev, iv = parent[node]
                    steps.append((Permutation._trusted(prev), iv))
                    node = prev
                return FlipWitness(pi, tuple(reversed(steps)))
            queue.append(nxt)
    return None
