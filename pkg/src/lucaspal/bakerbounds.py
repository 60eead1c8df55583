"""Logarithmic heights, Matveev's lower bound and the chain of absolute bounds.

The chain mirrors a hand proof: at each step the value computed here must not
exceed the rounded figure carried forward (its *cover*), and it is the cover
that feeds the next step. A computed value above its cover raises
:class:`ChainError`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from mpmath import mp

from .realfield import PrecReal, ceil_int, ln, log_alpha
from .recurrences import lucas

CHAIN_DIGITS = 100
N_FLOOR = 1000


class ChainError(ArithmeticError):
    """A computed bound exceeds the cover it is supposed to justify."""


# height expressions ---------------------------------------------------------


@dataclass(frozen=True)
class Rat:
    value: Fraction

    def __init__(self, value) -> None:
        object.__setattr__(self, "value", Fraction(value))


@dataclass(frozen=True)
class Alpha:
    """The golden ratio, of height (log alpha) / 2."""


@dataclass(frozen=True)
class Sum:
    left: "HeightExpr"
    right: "HeightExpr"
    subtract: bool = False


@dataclass(frozen=True)
class Prod:
    left: "HeightExpr"
    right: "HeightExpr"
    divide: bool = False


@dataclass(frozen=True)
class Power:
    base: "HeightExpr"
    exponent: Union[int, str]


HeightExpr = Union[Rat, Alpha, Sum, Prod, Power]

TEN = Rat(10)
# worst case over a nonzero digit d1 or a digit difference d1 - d2
DIGIT = Rat(9)


@dataclass(frozen=True)
class HeightBound:
    """``constant + sum(coeff * symbol)``, an upper bound linear in symbolic exponents."""

    constant: PrecReal
    coefficients: tuple[tuple[str, PrecReal], ...] = ()

    @property
    def coeffs(self) -> dict[str, PrecReal]:
        return dict(self.coefficients)

    def coefficient(self, name: str) -> PrecReal:
        return self.coeffs.get(name, self.constant * 0)

    def __add__(self, other: "HeightBound") -> "HeightBound":
        merged = self.coeffs
        for name, c in other.coefficients:
            merged[name] = merged[name] + c if name in merged else c
        return HeightBound(self.constant + other.constant, tuple(sorted(merged.items())))

    def scaled(self, k) -> "HeightBound":
        return HeightBound(
            self.constant * k, tuple((name, c * k) for name, c in self.coefficients)
        )

    def evaluate(self, **values) -> PrecReal:
        total = self.constant
        for name, c in self.coefficients:
            total = total + c * values[name]
        return total


def height_exact(x: Fraction | int, digits: int = CHAIN_DIGITS) -> PrecReal:
    """``h(p/q) = log max(|p|, q)`` for a rational in lowest terms."""
    x = Fraction(x)
    return ln(max(abs(x.numerator), x.denominator), digits)


def height_bound(e: HeightExpr, digits: int = CHAIN_DIGITS) -> HeightBound:
    """Upper bound on the height of ``e`` by the sum, product and power rules."""
    if isinstance(e, Rat):
        return HeightBound(height_exact(e.value, digits))
    if isinstance(e, Alpha):
        return HeightBound(log_alpha(digits) / 2)
    if isinstance(e, Sum):
        h = height_bound(e.left, digits) + height_bound(e.right, digits)
        return h + HeightBound(ln(2, digits))
    if isinstance(e, Prod):
        return height_bound(e.left, digits) + height_bound(e.right, digits)
    if isinstance(e, Power):
        base = height_bound(e.base, digits)
        if isinstance(e.exponent, int):
            return base.scaled(abs(e.exponent))
        if base.coefficients:
            raise ValueError("symbolic power of a symbolic base is not supported")
        zero = base.constant * 0
        return HeightBound(zero, ((e.exponent, base.constant),))
    raise TypeError(f"not a height expression: {e!r}")


def lemma2_gamma1() -> HeightExpr:
    """``9 / (d1 10^l - (d1 - d2))``."""
    inner = Sum(Prod(DIGIT, Power(TEN, "ell")), DIGIT, subtract=True)
    return Prod(Rat(9), inner, divide=True)


def lemma3_gamma1() -> HeightExpr:
    """``(d1 10^(l+m) - (d1 - d2) 10^m + (d1 - d2)) / 9``."""
    lead = Prod(DIGIT, Prod(Power(TEN, "ell"), Power(TEN, "m")))
    middle = Prod(DIGIT, Power(TEN, "m"))
    numerator = Sum(Sum(lead, middle, subtract=True), DIGIT)
    return Prod(numerator, Rat(9), divide=True)


# Matveev --------------------------------------------------------------------


@dataclass(frozen=True)
class MatveevInstance:
    """Data for ``log|Gamma| > -C (1 + log B) A_1 ... A_t``.

    ``B=None`` keeps B symbolic; the bound chain always takes ``B = n``.
    """

    t: int
    D: int
    A: tuple[PrecReal, ...]
    B: PrecReal | None = None
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.t < 1 or self.D < 1:
            raise ValueError("t and D must be positive")
        if len(self.A) != self.t:
            raise ValueError(f"expected {self.t} values A_i, got {len(self.A)}")
        if any(a < Fraction(16, 100) for a in self.A):
            raise ValueError("every A_i must be at least 0.16")
        if self.B is not None and self.B < 1:
            raise ValueError("B must be at least 1")


def matveev_constant(inst: MatveevInstance, digits: int = CHAIN_DIGITS) -> PrecReal:
    """``1.4 * 30^(t+3) * t^4.5 * D^2 * (1 + log D) * A_1 ... A_t``, without ``(1 + log B)``."""
    with mp.workdps(digits):
        c = mp.mpf("1.4") * mp.mpf(30) ** (inst.t + 3) * mp.mpf(inst.t) ** mp.mpf("4.5")
        c *= inst.D**2 * (1 + mp.log(inst.D))
        for a in inst.A:
            c *= PrecReal.of(a, digits).value
        return PrecReal(c, digits)


def matveev_lower_bound(inst: MatveevInstance, digits: int = CHAIN_DIGITS) -> PrecReal:
    """The negative lower bound for ``log|Gamma|``; needs a numeric B."""
    if inst.B is None:
        raise ValueError("B is symbolic")
    return -matveev_constant(inst, digits) * (1 + ln(inst.B))


def absorb_one_plus_log(coeff, n_floor: int, digits: int = CHAIN_DIGITS) -> PrecReal:
    """``coeff * (1 + 1/log n_floor)``, valid as ``coeff*(1 + log n) <= result*log n`` for n >= n_floor."""
    lam = ln(n_floor, digits)
    if lam <= 1:
        raise ValueError("n_floor must exceed e")
    return PrecReal.of(coeff, digits) * (1 + 1 / lam)


def guzman_luca(s: int, T, digits: int = CHAIN_DIGITS) -> PrecReal:
    """``2^s T (log T)^s``: any z with ``z / (log z)^s < T`` lies below it."""
    if s < 1:
        raise ValueError("s must be at least 1")
    T = PrecReal.of(T, digits)
    threshold = (4 * s * s) ** s
    if not T > threshold:
        raise ValueError(f"T must exceed (4 s^2)^s = {threshold}")
    return T * 2**s * ln(T) ** s


# bound chain ------------------------------------------------------------------

# Rounded figures carried from one step of the argument to the next.
COVERS: dict[str, str] = {
    "A1 (lemma 1)": "4.4",
    "A2": "0.5",
    "A3": "4.62",
    "matveev 1": "9.9e12",
    "ell / log n": "5e12",
    "h(gamma1) (lemma 2) / log n": "1.2e13",
    "|log gamma1| (lemma 2) / log n": "1.16e13",
    "matveev 2": "6.2e25",
    "m / (log n)^2": "3e25",
    "(ell+m) / (log n)^2": "3.1e25",
    "h(gamma1) (lemma 3) / (log n)^2": "1.41e26",
    "|log gamma1| (lemma 3) / (log n)^2": "7.2e25",
    "matveev 3": "7.24e38",
    "n / (log n)^3": "1.52e39",
    "n_abs": "9e45",
    "ell_abs": "5.3e14",
    "m_abs": "3.4e29",
}


@dataclass(frozen=True)
class ChainStep:
    name: str
    computed: PrecReal
    cover: PrecReal

    @property
    def ratio(self) -> float:
        return float(self.computed / self.cover)

    def to_dict(self) -> dict:
        return {"name": self.name, "computed": self.computed.str(12), "cover": self.cover.str(6)}


@dataclass(frozen=True)
class BoundChainResult:
    """Covers of ``l < c_l log n``, ``m < c_m (log n)^2``, ``n < c_n (log n)^3`` and absolute bounds."""

    ell_log_bound: PrecReal
    m_log_bound: PrecReal
    n_poly_bound: PrecReal
    n_abs: int
    ell_abs: int
    m_abs: int
    matveev: tuple[MatveevInstance, ...] = ()
    steps: tuple[ChainStep, ...] = field(default_factory=tuple)

    def step(self, name: str) -> ChainStep:
        for s in self.steps:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "ell_log_bound": self.ell_log_bound.str(6),
            "m_log_bound": self.m_log_bound.str(6),
            "n_poly_bound": self.n_poly_bound.str(6),
            "n_abs": self.n_abs,
            "ell_abs": self.ell_abs,
            "m_abs": self.m_abs,
            "steps": [s.to_dict() for s in self.steps],
        }


class _Chain:
    def __init__(self, digits: int) -> None:
        self.digits = digits
        self.steps: list[ChainStep] = []

    def cover(self, name: str) -> PrecReal:
        return PrecReal.of(COVERS[name], self.digits)

    def check(self, name: str, computed: PrecReal) -> PrecReal:
        cover = self.cover(name)
        self.steps.append(ChainStep(name, computed, cover))
        if computed > cover:
            raise ChainError(f"{name}: computed {computed.str(8)} exceeds cover {cover.str(8)}")
        return cover


def _max(*xs: PrecReal) -> PrecReal:
    return max(xs, key=lambda x: x.value)


def derive_bound_chain(n_floor: int = N_FLOOR, digits: int = CHAIN_DIGITS) -> BoundChainResult:
    """Three Matveev applications, absorption at ``n_floor``, then Guzman-Luca with s = 3."""
    ch = _Chain(digits)
    P = lambda x: PrecReal.of(x, digits)  # noqa: E731
    D = 2
    lam = ln(n_floor, digits)
    la = log_alpha(digits)
    log10 = ln(10, digits)
    floor_16 = P("0.16")

    # gamma_2 = alpha and gamma_3 = 10 are shared by all three forms
    h_alpha = height_bound(Alpha(), digits).constant
    A2 = ch.check("A2", _max(D * h_alpha, la, floor_16))
    h_ten = height_bound(TEN, digits).constant
    A3 = ch.check("A3", _max(D * h_ten, log10, floor_16))

    # lemma 1: gamma_1 = 9/d1
    h1 = _max(*(height_exact(Fraction(9, d1), digits) for d1 in range(1, 10)))
    A1 = ch.check("A1 (lemma 1)", _max(D * h1, ln(9, digits), floor_16))
    inst1 = MatveevInstance(3, D, (A1, A2, A3), notes=("gamma = (9/d1, alpha, 10)", "b = (1, n, -2l-m)"))
    C1 = ch.check("matveev 1", matveev_constant(inst1, digits))
    # l log 10 - log 28 < C1 (1 + log n)
    c_ell = absorb_one_plus_log(C1 / log10, n_floor, digits) + ln(28, digits) / log10 / lam
    c_ell = ch.check("ell / log n", c_ell)

    # lemma 2: gamma_1 = 9/(d1 10^l - (d1 - d2)), l < c_ell log n
    hb = height_bound(lemma2_gamma1(), digits)
    h1 = hb.constant / lam + hb.coefficient("ell") * c_ell
    h1 = ch.check("h(gamma1) (lemma 2) / log n", h1)
    logabs = (2 * ln(9, digits) + P(1) / 9) / lam + c_ell * log10
    logabs = ch.check("|log gamma1| (lemma 2) / log n", logabs)
    A1 = _max(D * h1, logabs)
    inst2 = MatveevInstance(3, D, (A1, A2, A3), notes=("A1 carries a factor log n",))
    C2 = ch.check("matveev 2", absorb_one_plus_log(matveev_constant(inst2, digits), n_floor, digits))
    # m log 10 - log 19 < C2 (log n)^2
    c_m = ch.check("m / (log n)^2", C2 / log10 + ln(19, digits) / log10 / lam**2)

    # lemma 3: gamma_1 = (d1 10^(l+m) - (d1-d2) 10^m + (d1-d2))/9
    c_lm = ch.check("(ell+m) / (log n)^2", c_ell / lam + c_m)
    hb = height_bound(lemma3_gamma1(), digits)
    h1 = hb.constant / lam**2 + hb.coefficient("ell") * c_ell / lam + hb.coefficient("m") * c_m
    h1 = ch.check("h(gamma1) (lemma 3) / (log n)^2", h1)
    logabs = (2 * ln(9, digits) + P(1) / 9) / lam**2 + c_lm * log10
    logabs = ch.check("|log gamma1| (lemma 3) / (log n)^2", logabs)
    A1 = _max(D * h1, logabs)
    inst3 = MatveevInstance(3, D, (A1, A2, A3), notes=("A1 carries a factor (log n)^2", "b = (1, -n, -l)"))
    C3 = ch.check("matveev 3", absorb_one_plus_log(matveev_constant(inst3, digits), n_floor, digits))
    # n log alpha - log(10/9) < C3 (log n)^3
    c_n = ch.check("n / (log n)^3", C3 / la + ln(P(10) / 9) / la / lam**3)

    n_abs_real = guzman_luca(3, c_n, digits)
    ch.check("n_abs", n_abs_real)
    n_abs = ceil_int(n_abs_real)
    log_n_abs = ln(n_abs, digits)
    ell_abs_real = c_ell * log_n_abs
    ch.check("ell_abs", ell_abs_real)
    m_abs_real = c_m * log_n_abs**2
    ch.check("m_abs", m_abs_real)

    return BoundChainResult(
        ell_log_bound=c_ell,
        m_log_bound=c_m,
        n_poly_bound=c_n,
        n_abs=n_abs,
        ell_abs=ceil_int(ell_abs_real),
        m_abs=ceil_int(m_abs_real),
        matveev=(inst1, inst2, inst3),
        steps=tuple(ch.steps),
    )


def _sample_indices(lo: int, hi: int) -> list[int]:
    picks = set(range(lo, min(hi, lo + 200) + 1))
    k = lo
    while k < hi:
        picks.add(k)
        k = k * 3 // 2 + 1
    picks.add(hi)
    return sorted(picks)


def check_exponent_inequality(n_floor: int, digits: int = CHAIN_DIGITS) -> bool:
    """Check ``2l + m < n`` for sampled n in ``(1000, n_floor]``.

    For each n the largest possible digit count of ``L_n`` is bounded by
    ``log10(2 alpha^n) + 1`` (exact count for n <= 5000), and the chain
    ``digits * log 10 < n log alpha + 3 < n`` is evaluated.
    """
    if n_floor <= N_FLOOR:
        raise ValueError(f"n_floor must exceed {N_FLOOR}")
    la = log_alpha(digits)
    log10 = ln(10, digits)
    log2 = ln(2, digits)
    for n in _sample_indices(N_FLOOR + 1, n_floor):
        if n <= 5000:
            n_digits = len(str(lucas(n)))
        else:
            n_digits = int(((n * la + log2) / log10).value) + 1
        lhs = n_digits * log10
        mid = n * la + 3
        # (2l+m-1) log 10 < n log alpha + log 2 with log 2 + log 10 < 3
        if not (log2 + log10 < 3 and lhs <= n * la + log2 + log10 and lhs < mid and mid < n):
            return False
        if not n_digits < n:
            return False
    return True
