"""Edge diagrams, the action of level permutations, valid flips and cylindrical blocks.

The edge diagram of pi has one vertical edge per step, from height pi(i) to
pi(i+1). Heights are vertices 1..n; the unit gaps between them are levels
1..n-1, level j being [j, j+1]. A permutation sigma of the levels moves every
edge; the result may stop being made of intervals (not well-defined), may be
intervals that do not form a path (not proper), or may be the edge diagram of
another permutation (proper).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import InternalError, InvalidFlip, LengthMismatch, NotABlock
from .perm import Permutation

RawEdge = tuple[int, int, int]


class Edge(NamedTuple):
    """A directed interval ``[low, high]`` covering levels low..high-1."""

    low: int
    high: int
    sign: int  # +1 for an up-step, -1 for a down-step

    @property
    def up(self) -> bool:
        return self.sign > 0

    @property
    def levels(self) -> range:
        return range(self.low, self.high)

    def __str__(self) -> str:
        return f"{self.low}-{self.high} {'up' if self.sign > 0 else 'down'}"


@dataclass(frozen=True, eq=False)
class EdgeDiagram:
    n: int
    edges: tuple[Edge, ...]  # e_1, ..., e_{n-1} in path order
    endpoints: tuple[int, int]  # {pi(1), pi(n)} sorted

    @property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EdgeDiagram):
            return NotImplemented
        return self.n == other.n and self.edge_set == other.edge_set

    def __hash__(self) -> int:
        return hash((self.n, self.edge_set))

    def dump(self) -> str:
        return "\n".join(str(e) for e in self.edges)

    def level_counts(self) -> list[int]:
        """Number of edges covering each level 1..n-1."""
        counts = [0] * (self.n - 1)
        for e in self.edges:
            for j in e.levels:
                counts[j - 1] += 1
        return counts


class Outcome(enum.Enum):
    NOT_WELL_DEFINED = "not well-defined"
    NOT_PROPER = "well-defined, not proper"
    PROPER = "proper"


@dataclass(frozen=True)
class ActionResult:
    outcome: Outcome
    perm: Optional[Permutation] = None

    @property
    def proper(self) -> bool:
        return self.outcome is Outcome.PROPER


def _raw_edges(e: Sequence[int]) -> list[RawEdge]:
    return [(a, b, 1) if b > a else (b, a, -1) for a, b in zip(e, e[1:])]


def edge_diagram(pi: Permutation) -> EdgeDiagram:
    e = pi.entries
    if len(e) < 2:
        raise ValueError("edge diagrams need n >= 2")
    edges = tuple(Edge(*raw) for raw in _raw_edges(e))
    p, q = sorted((e[0], e[-1]))
    return EdgeDiagram(len(e), edges, (p, q))


def _read_path(n: int, images: Sequence[RawEdge]) -> Optional[tuple[int, ...]]:
    """The permutation whose edge diagram is ``images``, if they form a directed path."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n + 1)]
    for lo, hi, s in images:
        adj[lo].append((hi, s))
        adj[hi].append((lo, s))
    ends = []
    for v in range(1, n + 1):
        d = len(adj[v])
        if d == 1:
            ends.append(v)
        elif d != 2:
            return None
    if len(ends) != 2:
        return None
    for start in ends:
        out = [start]
        prev, cur = 0, start
        while len(out) < n:
            nxt = next(((w, s) for w, s in adj[cur] if w != prev), None)
            if nxt is None:
                break
            w, s = nxt
            if (w > cur) != (s > 0):
                break
            out.append(w)
            prev, cur = cur, w
        if len(out) == n and len(set(out)) == n:
            return tuple(out)
    return None


def _act(n: int, edges: Sequence[RawEdge], sigma: Sequence[int]) -> tuple[Outcome, Optional[tuple[int, ...]]]:
    """Apply the level permutation ``sigma`` (sigma[j-1] is the image of level j)."""
    images = []
    for lo, hi, s in edges:
        moved = sigma[lo - 1 : hi - 1]
        mn, mx = min(moved), max(moved)
        if mx - mn + 1 != hi - lo:
            return Outcome.NOT_WELL_DEFINED, None
        images.append((mn, mx + 1, s))
    path = _read_path(n, images)
    if path is None:
        return Outcome.NOT_PROPER, None
    return Outcome.PROPER, path


def image_edges(diagram: EdgeDiagram, sigma: Permutation) -> Optional[frozenset[Edge]]:
    """The set of moved edges, or None when some image is not an interval."""
    _check_sigma(diagram.n, sigma)
    sig = sigma.entries
    out = set()
    for e in diagram.edges:
        moved = sig[e.low - 1 : e.high - 1]
        mn, mx = min(moved), max(moved)
        if mx - mn + 1 != e.high - e.low:
            return None
        out.add(Edge(mn, mx + 1, e.sign))
    return frozenset(out)


def _check_sigma(n: int, sigma: Permutation) -> None:
    if len(sigma) != n - 1:
        raise LengthMismatch(f"level permutation of length {len(sigma)} for n={n}")


def apply_level_action(diagram: EdgeDiagram, sigma: Permutation) -> ActionResult:
    _check_sigma(diagram.n, sigma)
    outcome, path = _act(diagram.n, diagram.edges, sigma.entries)
    if path is None:
        return ActionResult(outcome)
    return ActionResult(outcome, Permutation._trusted(path))


def has_cycle(edges: Iterable[Edge | RawEdge]) -> bool:
    """True iff the edges contain a directed cycle.

    An up-edge [a, b] leads from a to b, a down-edge [a, b] from b to a.
    """
    succ: dict[int, list[int]] = {}
    for lo, hi, s in edges:
        src, dst = (lo, hi) if s > 0 else (hi, lo)
        succ.setdefault(src, []).append(dst)
        succ.setdefault(dst, [])
    state = dict.fromkeys(succ, 0)  # 0 unseen, 1 on stack, 2 done
    for root in succ:
        if state[root]:
            continue
        stack = [(root, iter(succ[root]))]
        state[root] = 1
        while stack:
            v, it = stack[-1]
            w = next(it, None)
            if w is None:
                state[v] = 2
                stack.pop()
            elif state[w] == 1:
                return True
            elif state[w] == 0:
                state[w] = 1
                stack.append((w, iter(succ[w])))
    return False


def _compatible(lo: int, hi: int, i: int, j: int) -> bool:
    """``[lo, hi]`` and ``[i, j]`` are nested or share no level."""
    return (i <= lo and hi <= j) or (lo <= i and j <= hi) or hi <= i or j <= lo


def _valid_raw(e: Sequence[int], edges: Sequence[RawEdge]) -> list[tuple[int, int]]:
    n = len(e)
    p, q = sorted((e[0], e[-1]))
    return [
        (i, j)
        for i in range(1, n)
        for j in range(i + 1, n + 1)
        if _compatible(p, q, i, j) and all(_compatible(lo, hi, i, j) for lo, hi, _ in edges)
    ]


def valid_intervals(pi: Permutation) -> list[tuple[int, int]]:
    """Intervals ``[i, j]`` whose flip is valid for pi.

    An interval qualifies when every edge and the endpoint interval ``[p, q]``
    is nested with it or disjoint from it. Width-one intervals always qualify;
    their flip is the identity.
    """
    if len(pi) < 2:
        return []
    e = pi.entries
    return _valid_raw(e, _raw_edges(e))


def flip_sigma(n: int, i: int, j: int) -> tuple[int, ...]:
    """Level permutation reversing levels i..j-1 and fixing the rest."""
    return tuple(i + j - 1 - t if i <= t < j else t for t in range(1, n))


def flip_interval(pi: Permutation, interval: tuple[int, int]) -> Permutation:
    i, j = interval
    n = len(pi)
    e = pi.entries
    edges = _raw_edges(e)
    p, q = sorted((e[0], e[-1]))
    if not (1 <= i < j <= n) or not _compatible(p, q, i, j) or not all(
        _compatible(lo, hi, i, j) for lo, hi, _ in edges
    ):
        raise InvalidFlip(f"[{i},{j}] is not a valid interval of {pi}")
    outcome, path = _act(n, edges, flip_sigma(n, i, j))
    if path is None:
        raise InternalError(f"valid flip of [{i},{j}] on {pi} gave a {outcome.value} diagram")
    return Permutation._trusted(path)


@dataclass(frozen=True)
class CylindricalBlock:
    """Cyclically consecutive positions holding the consecutive values low..high."""

    n: int
    start: int  # 1-based position of the first entry, reading left to right around the cylinder
    size: int
    low: int
    high: int

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple((self.start - 1 + t) % self.n + 1 for t in range(self.size))

    @property
    def wraps(self) -> bool:
        return self.start + self.size - 1 > self.n

    @property
    def values(self) -> tuple[int, int]:
        return (self.low, self.high)

    def __str__(self) -> str:
        pos = self.positions
        return f"values [{self.low},{self.high}] at positions {pos[0]}..{pos[-1]}" + (
            " (wraps)" if self.wraps else ""
        )


def _block_at(e: Sequence[int], start: int, size: int) -> Optional[CylindricalBlock]:
    n = len(e)
    vals = [e[(start - 1 + t) % n] for t in range(size)]
    lo, hi = min(vals), max(vals)
    if hi - lo + 1 != size:
        return None
    if {vals[0], vals[-1]} != {lo, hi}:
        return None
    return CylindricalBlock(n, start, size, lo, hi)


def bordered_cylindrical_blocks(pi: Permutation) -> list[CylindricalBlock]:
    """All bordered cylindrical blocks with at least two entries.

    Windows of length n are included once per starting position, since their
    outer positions differ.
    """
    e = pi.entries
    n = len(e)
    out = []
    for size in range(2, n + 1):
        for start in range(1, n + 1):
            block = _block_at(e, start, size)
            if block is not None:
                out.append(block)
    return out


def flip_block(pi: Permutation, block: CylindricalBlock) -> Permutation:
    """Flip a bordered cylindrical block on the grid of pi.

    The block contents are rotated by 180 degrees. For a block wrapping from
    positions start..n round to 1..l, the rotated contents are laid out so that
    the entries coming from the left part land on the right edge and vice versa,
    and the entries outside the block shift by the difference in part widths.
    """
    e = pi.entries
    n = len(e)
    if (
        block.n != n
        or not 1 <= block.start <= n
        or not 2 <= block.size <= n
        or _block_at(e, block.start, block.size) != block
    ):
        raise NotABlock(f"{block} is not a bordered cylindrical block of {pi}")
    contents = [e[p - 1] for p in block.positions]
    rotated = [block.low + block.high - x for x in reversed(contents)]
    if not block.wraps:
        out = list(e)
        out[block.start - 1 : block.start - 1 + block.size] = rotated
        return Permutation._trusted(tuple(out))
    right = n - block.start + 1  # entries at positions start..n
    left = block.size - right  # entries at positions 1..left
    middle = list(e[left : block.start - 1])
    return Permutation._trusted(tuple(rotated[left:] + middle + rotated[:left]))
