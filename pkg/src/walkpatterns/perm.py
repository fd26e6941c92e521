"""Permutations, signed permutations and the ordinal-pattern map.

All public indexing is 1-based, matching one-line notation: ``Permutation((3, 1, 2, 4))``
sends 1 to 3, 2 to 1 and so on.
"""

from __future__ import annotations

import itertools
from functools import total_ordering
from typing import Iterable, Iterator, Sequence

from .errors import LengthMismatch, RepeatedValue

_OVERBAR = "̅"


def _split_tokens(text: str) -> list[str]:
    text = text.strip()
    if not text:
        raise ValueError("empty pattern")
    if "," in text:
        return [tok.strip() for tok in text.split(",")]
    if " " in text:
        return text.split()
    # digit string, optionally with trailing apostrophes marking barred entries
    tokens: list[str] = []
    for ch in text:
        if ch == "'":
            if not tokens:
                raise ValueError(f"malformed pattern {text!r}")
            tokens[-1] += "'"
        else:
            tokens.append(ch)
    return tokens


@total_ordering
class Permutation:
    """An element of S_n in one-line notation.

    Instances are immutable and hashable; ordering is lexicographic on the
    one-line notation, so ``min`` of a class is its canonical representative.
    """

    __slots__ = ("_e",)

    def __init__(self, entries: Iterable[int]):
        e = tuple(int(x) for x in entries)
        if not e:
            raise ValueError("a permutation needs at least one entry")
        if sorted(e) != list(range(1, len(e) + 1)):
            raise ValueError(f"{e} is not a permutation of 1..{len(e)}")
        self._e = e

    @classmethod
    def _trusted(cls, entries: tuple[int, ...]) -> Permutation:
        obj = object.__new__(cls)
        obj._e = entries
        return obj

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls._trusted(tuple(range(1, n + 1)))

    @classmethod
    def all(cls, n: int) -> Iterator[Permutation]:
        """Every element of S_n, in lexicographic order."""
        for e in itertools.permutations(range(1, n + 1)):
            yield cls._trusted(e)

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """Parse ``"3124"``, ``"3,1,2,4"`` or ``"3 1 2 4"``."""
        try:
            return cls(int(tok) for tok in _split_tokens(text))
        except ValueError as exc:
            raise ValueError(f"malformed permutation {text!r}: {exc}") from None

    @property
    def entries(self) -> tuple[int, ...]:
        return self._e

    @property
    def n(self) -> int:
        return len(self._e)

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self._e):
            raise IndexError(i)
        return self._e[i - 1]

    def __len__(self) -> int:
        return len(self._e)

    def __iter__(self) -> Iterator[int]:
        return iter(self._e)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Permutation):
            return self._e == other._e
        return NotImplemented

    def __lt__(self, other: Permutation) -> bool:
        return self._e < other._e

    def __hash__(self) -> int:
        return hash(self._e)

    def __str__(self) -> str:
        return format_entries(self._e)

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r})"

    def __reduce__(self):
        return (Permutation, (self._e,))

    def is_identity(self) -> bool:
        return self._e == tuple(range(1, len(self._e) + 1))


def format_entries(entries: Sequence[int]) -> str:
    """Digit string when every entry is a single digit, comma-separated otherwise."""
    if len(entries) <= 9:
        return "".join(str(x) for x in entries)
    return ",".join(str(x) for x in entries)


def pattern_of_walk(values: Sequence[float]) -> Permutation:
    """Relative order of ``values``: entry i is the rank of values[i] (1 = smallest)."""
    vals = list(values)
    if not vals:
        raise ValueError("need at least one value")
    order = sorted(range(len(vals)), key=vals.__getitem__)
    ranks = [0] * len(vals)
    for rank, idx in enumerate(order, start=1):
        ranks[idx] = rank
    for a, b in zip(order, order[1:]):
        if vals[a] == vals[b]:
            raise RepeatedValue(f"positions {a + 1} and {b + 1} hold the same value {vals[a]!r}")
    return Permutation._trusted(tuple(ranks))


def pattern_of_steps(steps: Sequence[float]) -> Permutation:
    """Pattern of the walk 0, X_1, X_1+X_2, ... built from ``steps``."""
    walk = [0.0]
    for x in steps:
        walk.append(walk[-1] + x)
    return pattern_of_walk(walk)


def reverse_complement(pi: Permutation) -> Permutation:
    n = len(pi)
    e = pi.entries
    return Permutation._trusted(tuple(n + 1 - e[n - 1 - i] for i in range(n)))


def compose(pi: Permutation, tau: Permutation) -> Permutation:
    """The product ``tau pi``, i.e. ``i -> tau(pi(i))``."""
    if len(pi) != len(tau):
        raise LengthMismatch(f"cannot compose lengths {len(pi)} and {len(tau)}")
    t = tau.entries
    return Permutation._trusted(tuple(t[x - 1] for x in pi.entries))


def inverse(pi: Permutation) -> Permutation:
    inv = [0] * len(pi)
    for i, x in enumerate(pi.entries, start=1):
        inv[x - 1] = i
    return Permutation._trusted(tuple(inv))


@total_ordering
class SignedPermutation:
    """An element of B_k; a negative entry stands for a barred one."""

    __slots__ = ("_e",)

    def __init__(self, entries: Iterable[int]):
        e = tuple(int(x) for x in entries)
        if not e:
            raise ValueError("a signed permutation needs at least one entry")
        if 0 in e or sorted(abs(x) for x in e) != list(range(1, len(e) + 1)):
            raise ValueError(f"{e} is not a signed permutation of length {len(e)}")
        self._e = e

    @classmethod
    def _trusted(cls, entries: tuple[int, ...]) -> SignedPermutation:
        obj = object.__new__(cls)
        obj._e = entries
        return obj

    @classmethod
    def identity(cls, k: int) -> SignedPermutation:
        return cls._trusted(tuple(range(1, k + 1)))

    @classmethod
    def all(cls, k: int) -> Iterator[SignedPermutation]:
        """All 2^k k! elements of B_k."""
        for perm in itertools.permutations(range(1, k + 1)):
            for signs in itertools.product((1, -1), repeat=k):
                yield cls._trusted(tuple(s * x for s, x in zip(signs, perm)))

    @classmethod
    def parse(cls, text: str) -> SignedPermutation:
        """Parse ``"3',1,2'"``, ``"-3,1,-2"`` or ``"3'12'"``."""
        out = []
        try:
            for tok in _split_tokens(text):
                if tok.endswith("'"):
                    out.append(-int(tok[:-1]))
                else:
                    out.append(int(tok))
            return cls(out)
        except ValueError as exc:
            raise ValueError(f"malformed signed permutation {text!r}: {exc}") from None

    @property
    def entries(self) -> tuple[int, ...]:
        return self._e

    def __call__(self, i: int) -> int:
        if not 1 <= i <= len(self._e):
            raise IndexError(i)
        return self._e[i - 1]

    def __len__(self) -> int:
        return len(self._e)

    def __iter__(self) -> Iterator[int]:
        return iter(self._e)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, SignedPermutation):
            return self._e == other._e
        return NotImplemented

    def __lt__(self, other: SignedPermutation) -> bool:
        return self._e < other._e

    def __hash__(self) -> int:
        return hash(self._e)

    def __reduce__(self):
        return (SignedPermutation, (self._e,))

    def machine_str(self) -> str:
        return ",".join(f"{-x}'" if x < 0 else str(x) for x in self._e)

    def __str__(self) -> str:
        sep = "" if len(self._e) <= 9 else " "
        return sep.join(
            "".join(ch + _OVERBAR for ch in str(-x)) if x < 0 else str(x) for x in self._e
        )

    def __repr__(self) -> str:
        return f"SignedPermutation({self.machine_str()!r})"

    def unsigned(self) -> Permutation:
        return Permutation._trusted(tuple(abs(x) for x in self._e))

    def is_identity(self) -> bool:
        return self._e == tuple(range(1, len(self._e) + 1))


def signed_reverse_complement(mu: SignedPermutation) -> SignedPermutation:
    """``mu^RC(i) = bar(mu(k - i + 1))``: reverse the entries and toggle every bar."""
    return SignedPermutation._trusted(tuple(-x for x in reversed(mu.entries)))


def inflate(mu: SignedPermutation, blocks: Sequence[SignedPermutation]) -> SignedPermutation:
    """The inflation ``mu[blocks[0], ..., blocks[k-1]]``.

    Entry i of ``mu`` becomes a block patterned ``blocks[i]`` (or its
    reverse-complement when ``mu(i)`` is barred); the value ranges of the
    blocks are stacked in the order given by ``|mu|``.
    """
    k = len(mu)
    if len(blocks) != k:
        raise LengthMismatch(f"inflating a length-{k} signed permutation by {len(blocks)} blocks")
    sizes_by_slot = [0] * (k + 1)
    for x, block in zip(mu.entries, blocks):
        sizes_by_slot[abs(x)] = len(block)
    offsets = list(itertools.accumulate(sizes_by_slot))  # offsets[s-1] = size of slots below s
    out: list[int] = []
    for x, block in zip(mu.entries, blocks):
        body = block if x > 0 else signed_reverse_complement(block)
        base = offsets[abs(x) - 1]
        out.extend(base + y if y > 0 else -(base - y) for y in body.entries)
    return SignedPermutation._trusted(tuple(out))
