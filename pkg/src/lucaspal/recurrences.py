"""Exact Lucas and Fibonacci numbers and Binet-formula cross-checks."""

from __future__ import annotations

import threading
from dataclasses import dataclass

from mpmath import mp, mpf

from .realfield import DEFAULT_DIGITS, PrecReal, alpha, guard_margin


@dataclass(frozen=True)
class LucasTerm:
    n: int
    value: int


class _Prefix:
    """Memoized prefix of a second-order recurrence; readers never see a partial extension."""

    def __init__(self, first: int, second: int) -> None:
        self._terms = [first, second]
        self._lock = threading.Lock()

    def __call__(self, n: int) -> int:
        if n < 0:
            raise ValueError(f"index must be non-negative, got {n}")
        terms = self._terms
        if n < len(terms):
            return terms[n]
        with self._lock:
            terms = list(self._terms)
            while len(terms) <= n:
                terms.append(terms[-1] + terms[-2])
            self._terms = terms
        return terms[n]

    def upto(self, n: int) -> list[int]:
        self(n)
        return self._terms[: n + 1]


_lucas = _Prefix(2, 1)
_fibonacci = _Prefix(0, 1)


def lucas(n: int) -> int:
    return _lucas(n)


def fibonacci(n: int) -> int:
    return _fibonacci(n)


def lucas_upto(n: int) -> list[int]:
    """``[L_0, ..., L_n]``."""
    return _lucas.upto(n)


def lucas_term(n: int) -> LucasTerm:
    return LucasTerm(n, lucas(n))


def _qsqrt5_sign(a: int, b: int) -> int:
    """Exact sign of a + b*sqrt(5)."""
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    # opposite signs: compare a^2 with 5 b^2
    diff = a * a - 5 * b * b
    if diff == 0:
        return 0
    return (1 if diff > 0 else -1) * (1 if a > 0 else -1)


def _alpha_power_coords(k: int) -> tuple[int, int]:
    """(a, b) with 2*alpha**k = a + b*sqrt(5)."""
    if k >= 0:
        return lucas(k), fibonacci(k)
    j = -k
    return (-1) ** j * lucas(j), (-1) ** (j + 1) * fibonacci(j)


def check_growth_bounds(n_max: int, digits: int = DEFAULT_DIGITS) -> bool:
    """True iff ``alpha**(n-1) <= L_n <= 2 alpha**n`` for every ``0 <= n <= n_max``.

    Each side is decided from a high-precision enclosure when the gap clears the
    guard margin; touching cases (L_0 = 2 alpha**0, L_1 = alpha**0) are settled
    exactly in Q(sqrt 5).
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    a = alpha(digits)
    with mp.workdps(digits):
        margin = guard_margin(digits)
        power = 1 / a.value  # alpha**(n-1) at n = 0
        for n, L in enumerate(lucas_upto(n_max)):
            lower_gap = L - power
            upper_gap = 2 * power * a.value - L
            scale = max(mpf(1), abs(power) * a.value)
            for gap, k, factor in ((lower_gap, n - 1, 1), (upper_gap, n, 2)):
                if abs(gap) > margin * scale:
                    if gap < 0:
                        return False
                    continue
                # |gap| tiny: decide sign of factor*alpha**k vs L exactly
                x, y = _alpha_power_coords(k)
                if factor == 1:
                    sign = _qsqrt5_sign(2 * L - x, -y)
                else:
                    sign = _qsqrt5_sign(2 * x - 2 * L, 2 * y)
                if sign < 0:
                    return False
            power *= a.value
    return True


def binet_residual(n: int, digits: int = DEFAULT_DIGITS) -> PrecReal:
    """``|L_n - alpha**n|``, which equals ``|beta|**n``."""
    if n < 0:
        raise ValueError("index must be non-negative")
    a = alpha(digits)
    with mp.workdps(digits):
        return PrecReal(abs(lucas(n) - a.value**n), digits)
