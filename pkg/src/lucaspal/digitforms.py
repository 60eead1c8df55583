"""Repdigits, two-block concatenations and palindromic concatenations in base 10."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import groupby


def repdigit(d: int, length: int) -> int:
    """``d`` repeated ``length`` times."""
    if not 0 <= d <= 9 or length < 1:
        raise ValueError(f"invalid repdigit ({d}, {length})")
    return d * (10**length - 1) // 9


@dataclass(frozen=True)
class PalindromeSpec:
    """Digit pattern ``d1^ell d2^m d1^ell``.

    ``relaxed`` admits ``d1 == d2``; it exists only for the two-repdigit
    literature cross-check and is never produced by :func:`match_palindrome`.
    """

    d1: int
    d2: int
    ell: int
    m: int
    relaxed: bool = False

    def __post_init__(self) -> None:
        if not 1 <= self.d1 <= 9:
            raise ValueError(f"d1 must be a nonzero digit, got {self.d1}")
        if not 0 <= self.d2 <= 9:
            raise ValueError(f"d2 must be a digit, got {self.d2}")
        if self.ell < 1 or self.m < 1:
            raise ValueError("block lengths must be positive")
        if self.d1 == self.d2 and not self.relaxed:
            raise ValueError("d1 and d2 must differ")

    @property
    def n_digits(self) -> int:
        return 2 * self.ell + self.m

    def digit_string(self) -> str:
        return str(self.d1) * self.ell + str(self.d2) * self.m + str(self.d1) * self.ell

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.d1, self.d2, self.ell, self.m)


@dataclass(frozen=True)
class TwoBlockSpec:
    """Digit pattern ``d1^a d2^b``; ``d1 == d2`` is allowed."""

    d1: int
    a: int
    d2: int
    b: int

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.d1, self.a, self.d2, self.b)


def palindrome_value(spec: PalindromeSpec) -> int:
    """Closed form ``(d1 10^(2l+m) - (d1-d2) 10^(l+m) + (d1-d2) 10^l - d1) / 9``."""
    d1, d2, ell, m = spec.as_tuple()
    diff = d1 - d2
    numerator = d1 * 10 ** (2 * ell + m) - diff * 10 ** (ell + m) + diff * 10**ell - d1
    value, rem = divmod(numerator, 9)
    assert rem == 0
    return value


def two_block_value(d1: int, a: int, d2: int, b: int) -> int:
    if not 1 <= d1 <= 9:
        raise ValueError("leading digit must be nonzero")
    return repdigit(d1, a) * 10**b + repdigit(d2, b)


def _runs(v: int) -> list[tuple[int, int]]:
    return [(int(d), len(list(g))) for d, g in groupby(str(v))]


def match_palindrome(v: int) -> PalindromeSpec | None:
    """The PalindromeSpec with ``d1 != d2`` whose value is ``v``, or None."""
    if v < 1:
        raise ValueError("expected a positive integer")
    runs = _runs(v)
    if len(runs) != 3:
        return None
    (d1, ell), (d2, m), (d3, ell3) = runs
    if d1 != d3 or ell != ell3:
        return None
    return PalindromeSpec(d1, d2, ell, m)


def match_two_block(v: int) -> TwoBlockSpec | None:
    """Split ``v`` into at most two repdigit blocks, each of length >= 1.

    A single repdigit of two or more digits is reported as a one-digit block
    followed by the rest.
    """
    if v < 1:
        raise ValueError("expected a positive integer")
    runs = _runs(v)
    if len(runs) == 1:
        d, length = runs[0]
        if length < 2:
            return None
        return TwoBlockSpec(d, 1, d, length - 1)
    if len(runs) == 2:
        (d1, a), (d2, b) = runs
        return TwoBlockSpec(d1, a, d2, b)
    return None
