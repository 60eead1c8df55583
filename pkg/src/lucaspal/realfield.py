"""Arbitrary-precision reals, distance to the nearest integer and continued fractions.

Every real carries a decimal precision tag. Discrete decisions drawn from
reals (a partial quotient, the sign of a difference) are only accepted when
they hold with a margin of ``10**(-digits // 2)``; otherwise
:class:`PrecisionError` is raised so the caller can retry at higher precision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Union

from mpmath import mp, mpf

DEFAULT_DIGITS = 1000
MIN_DIGITS = 50

Number = Union[int, float, str, Fraction, mpf]


class PrecisionError(ArithmeticError):
    """A decision could not be certified at the working precision."""


class ConvergentRangeError(LookupError):
    """No certified convergent satisfies the request."""


def _to_mpf(x: Number) -> mpf:
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    return mpf(x)


@dataclass(frozen=True)
class PrecReal:
    """A high-precision real tagged with its working precision in decimal digits."""

    value: mpf
    digits: int = DEFAULT_DIGITS

    def __post_init__(self) -> None:
        if self.digits < MIN_DIGITS:
            raise ValueError(f"precision must be at least {MIN_DIGITS} digits, got {self.digits}")
        if not isinstance(self.value, mpf):
            with mp.workdps(self.digits):
                object.__setattr__(self, "value", _to_mpf(self.value))

    @classmethod
    def of(cls, x: Number | "PrecReal", digits: int = DEFAULT_DIGITS) -> "PrecReal":
        if isinstance(x, PrecReal):
            return x
        with mp.workdps(digits):
            return cls(_to_mpf(x), digits)

    def _coerce(self, other) -> "PrecReal":
        if isinstance(other, PrecReal):
            return other
        return PrecReal.of(other, self.digits)

    def _binary(self, other, op) -> "PrecReal":
        other = self._coerce(other)
        digits = min(self.digits, other.digits)
        with mp.workdps(digits):
            return PrecReal(op(self.value, other.value), digits)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __rsub__(self, other):
        return self._binary(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda a, b: a / b)

    def __rtruediv__(self, other):
        return self._binary(other, lambda a, b: b / a)

    def __pow__(self, exponent):
        return self._binary(exponent, lambda a, b: a**b)

    def __neg__(self):
        return PrecReal(-self.value, self.digits)

    def __abs__(self):
        return PrecReal(abs(self.value), self.digits)

    def _cmp_value(self, other) -> mpf:
        return other.value if isinstance(other, PrecReal) else _to_mpf(other)

    def __lt__(self, other):
        with mp.workdps(self.digits):
            return self.value < self._cmp_value(other)

    def __le__(self, other):
        with mp.workdps(self.digits):
            return self.value <= self._cmp_value(other)

    def __gt__(self, other):
        with mp.workdps(self.digits):
            return self.value > self._cmp_value(other)

    def __ge__(self, other):
        with mp.workdps(self.digits):
            return self.value >= self._cmp_value(other)

    def __float__(self) -> float:
        return float(self.value)

    def to_fraction(self) -> Fraction:
        """The exact binary rational stored in ``value``."""
        man, exp = self.value.man_exp if self.value else (0, 0)
        return Fraction(int(man)) * Fraction(2) ** int(exp)

    @property
    def margin(self) -> mpf:
        return guard_margin(self.digits)

    def str(self, n: int = 15) -> str:
        with mp.workdps(self.digits):
            return mp.nstr(self.value, n, strip_zeros=False)

    def __repr__(self) -> str:
        return f"PrecReal({self.str(20)}, digits={self.digits})"


def guard_margin(digits: int) -> mpf:
    with mp.workdps(digits):
        return mpf(10) ** (-(digits // 2))


def certified_sign(x: PrecReal, scale: Number = 1) -> int:
    """Sign of ``x``, refusing values within the guard margin (times ``scale``) of zero."""
    with mp.workdps(x.digits):
        if abs(x.value) <= guard_margin(x.digits) * max(mpf(1), abs(_to_mpf(scale))):
            raise PrecisionError(f"sign of {x.str(5)} is not certified at {x.digits} digits")
        return 1 if x.value > 0 else -1


# constants ----------------------------------------------------------------


@lru_cache(maxsize=None)
def alpha(digits: int = DEFAULT_DIGITS) -> PrecReal:
    """The golden ratio (1 + sqrt 5) / 2."""
    with mp.workdps(digits):
        return PrecReal((1 + mp.sqrt(5)) / 2, digits)


@lru_cache(maxsize=None)
def log_alpha(digits: int = DEFAULT_DIGITS) -> PrecReal:
    with mp.workdps(digits):
        return PrecReal(mp.log(alpha(digits).value), digits)


def ln(x: PrecReal | Number, digits: int | None = None) -> PrecReal:
    if not isinstance(x, PrecReal):
        x = PrecReal.of(x, digits or DEFAULT_DIGITS)
    with mp.workdps(x.digits):
        if x.value <= 0:
            raise ValueError("logarithm of a non-positive number")
        return PrecReal(mp.log(x.value), x.digits)


def exp(x: PrecReal) -> PrecReal:
    with mp.workdps(x.digits):
        return PrecReal(mp.exp(x.value), x.digits)


def ceil_int(x: PrecReal) -> int:
    """Smallest integer >= x, certified against the guard margin."""
    with mp.workdps(x.digits):
        c = int(mp.ceil(x.value))
        if abs(x.value - c) <= guard_margin(x.digits) * max(mpf(1), abs(x.value)) and x.value != c:
            raise PrecisionError(f"{x.str(10)} is too close to the integer {c}")
        return c


# nearest integer -------------------------------------------------------------


def nearest_int_dist(x: PrecReal, guard: bool = False) -> PrecReal:
    """Distance ``min |x - n|`` over integers n; result lies in [0, 1/2].

    With ``guard`` the call refuses inputs whose nearest integer is ambiguous,
    that is, within the guard margin of a half-integer.
    """
    with mp.workdps(x.digits):
        v = x.value
        if not mp.isfinite(v):
            raise ValueError("distance to nearest integer of a non-finite value")
        d = abs(v - mp.nint(v))
        if guard and abs(d - mpf(1) / 2) <= guard_margin(x.digits) * max(mpf(1), abs(v)):
            raise PrecisionError(f"{x.str(10)} is too close to a half-integer")
        return PrecReal(d, x.digits)


# continued fractions -------------------------------------------------------


@dataclass(frozen=True)
class Convergent:
    index: int
    p: int
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError("convergent denominator must be positive")

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)


def _rational_cf(x: Fraction, limit: int | None = None) -> list[int]:
    p, q = x.numerator, x.denominator
    out: list[int] = []
    while q and (limit is None or len(out) < limit):
        a, r = divmod(p, q)
        out.append(int(a))
        p, q = q, r
    return out


def expand_cf(x: PrecReal | Fraction | int, n_terms: int | None = None) -> list[int]:
    """Partial quotients ``[a0; a1, ...]`` of ``x``.

    Fractions and ints are expanded exactly. A :class:`PrecReal` is treated as
    the enclosure ``x +- |x| * 10**(-digits/2)``: a quotient is certified only
    when both endpoints of the enclosure share it. Without ``n_terms`` all
    certified quotients are returned.
    """
    if isinstance(x, (int, Fraction)):
        return _rational_cf(Fraction(x), n_terms)

    if x <= 0:
        raise ValueError("continued fraction expansion expects a positive real")
    centre = x.to_fraction()
    radius = max(abs(centre), Fraction(1)) / Fraction(10) ** (x.digits // 2)
    limit = None if n_terms is None else n_terms + 1
    lo = _rational_cf(centre - radius, limit)
    hi = _rational_cf(centre + radius, limit)
    common = 0
    for a, b in zip(lo, hi):
        if a != b:
            break
        common += 1
    # an endpoint's own expansion may end inside the shared prefix; drop one for safety
    certified = lo[: max(common - 1, 0)]
    if n_terms is None:
        return certified
    if len(certified) < n_terms:
        raise PrecisionError(
            f"only {len(certified)} partial quotients are certified at {x.digits} digits, "
            f"{n_terms} requested"
        )
    return certified[:n_terms]


def convergents(cf: Sequence[int]) -> list[Convergent]:
    out = []
    p_prev, q_prev = 1, 0
    p, q = cf[0], 1
    out.append(Convergent(0, p, q))
    for i, a in enumerate(cf[1:], start=1):
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        out.append(Convergent(i, p, q))
    return out


def convergent_at(cf: Sequence[int], i: int) -> Convergent:
    if not 0 <= i < len(cf):
        raise IndexError(f"convergent {i} is outside the {len(cf)} certified quotients")
    return convergents(cf[: i + 1])[i]


def first_convergent_above(cf: Sequence[int], bound: int) -> Convergent:
    """Smallest-index convergent whose denominator exceeds ``bound``."""
    for c in convergents(cf):
        if c.q > bound:
            return c
    raise ConvergentRangeError(
        f"no convergent with q > {bound} among {len(cf)} certified quotients"
    )


__all__ = [
    "DEFAULT_DIGITS",
    "MIN_DIGITS",
    "Convergent",
    "ConvergentRangeError",
    "PrecReal",
    "PrecisionError",
    "alpha",
    "ceil_int",
    "certified_sign",
    "convergent_at",
    "convergents",
    "exp",
    "expand_cf",
    "first_convergent_above",
    "guard_margin",
    "ln",
    "log_alpha",
    "nearest_int_dist",
]
