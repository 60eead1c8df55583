"""Low-range exhaustive search over Lucas numbers.

Each ``L_n`` is matched against the digit pattern directly, which covers every
pair of block lengths at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Union

from .digitforms import PalindromeSpec, TwoBlockSpec, match_palindrome, match_two_block
from .recurrences import lucas_upto

Mode = Literal["palindromic", "two_block"]


@dataclass(frozen=True)
class Hit:
    n: int
    value: int
    spec: Union[PalindromeSpec, TwoBlockSpec]


@dataclass(frozen=True)
class SearchReport:
    n_max: int
    mode: Mode
    hits: tuple[Hit, ...] = field(default_factory=tuple)

    @property
    def values(self) -> list[int]:
        return [h.value for h in self.hits]

    def to_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "mode": self.mode,
            "hits": [
                {"n": h.n, "value": str(h.value), "spec": list(h.spec.as_tuple())}
                for h in self.hits
            ],
        }


def _search(n_max: int, mode: Mode) -> SearchReport:
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    matcher = match_palindrome if mode == "palindromic" else match_two_block
    hits = []
    for n, value in enumerate(lucas_upto(n_max)):
        spec = matcher(value)
        if spec is not None:
            hits.append(Hit(n, value, spec))
    return SearchReport(n_max, mode, tuple(hits))


def search_palindromic(n_max: int = 1000) -> SearchReport:
    """All ``n <= n_max`` with ``L_n = d1^l d2^m d1^l``, ``d1 != d2``."""
    return _search(n_max, "palindromic")


def search_two_block(n_max: int = 1000) -> SearchReport:
    """All ``n <= n_max`` with ``L_n`` a concatenation of two repdigits."""
    return _search(n_max, "two_block")


def search(n_max: int, mode: str) -> SearchReport:
    mode = mode.replace("-", "_")
    if mode == "palindromic":
        return search_palindromic(n_max)
    if mode == "two_block":
        return search_two_block(n_max)
    raise ValueError(f"unknown search mode {mode!r}")
