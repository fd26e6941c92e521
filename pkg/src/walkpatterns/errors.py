"""Exception types and exhaustive-search budgets."""

from __future__ import annotations

# Largest n for searches over all of S_{n-1} (equivalence oracle, brute-force
# irreducible partition, matrix witnesses, class enumeration).
MAX_EXHAUSTIVE_N = 8

# Largest number of blocks k for enumerations over B_k (2^k * k! candidates).
MAX_BLOCKS = 8


class WalkPatternsError(Exception):
    """Base class for all errors raised by this package."""


class RepeatedValue(WalkPatternsError, ValueError):
    """The walk visits the same value twice, so its pattern is undefined."""


class LengthMismatch(WalkPatternsError, ValueError):
    pass


class DimensionMismatch(WalkPatternsError, ValueError):
    pass


class SingularMatrix(WalkPatternsError, ArithmeticError):
    pass


class SizeTooLarge(WalkPatternsError, ValueError):
    """Raised instead of silently truncating an exhaustive search."""


class InvalidFlip(WalkPatternsError, ValueError):
    pass


class NotABlock(WalkPatternsError, ValueError):
    pass


class NoValidDecomposition(WalkPatternsError, ValueError):
    pass


class InternalError(WalkPatternsError, RuntimeError):
    """A result contradicted a proven structural fact; indicates a bug."""


def check_size(n: int, limit: int = MAX_EXHAUSTIVE_N, what: str = "n") -> None:
    if n > limit:
        raise SizeTooLarge(f"{what}={n} exceeds the exhaustive budget {limit}")
