"""Dujella-Petho reduction and the three reduction stages.

Each stage bounds one exponent of ``L_n = d1^l d2^m d1^l`` through an
inequality ``0 < |x tau - n + mu| < A B^(-k)`` with ``tau = log 10 / log alpha``
and ``mu = log r / log alpha`` for an explicit rational r. When r is a power of
ten, mu is an integer multiple of tau, the inhomogeneous lemma gives nothing,
and the bound comes from the best-approximation property of convergents.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Optional

from mpmath import mp, mpf

from .realfield import (
    DEFAULT_DIGITS,
    Convergent,
    PrecisionError,
    PrecReal,
    ceil_int,
    convergents,
    expand_cf,
    first_convergent_above,
    guard_margin,
    ln,
    log_alpha,
    alpha,
)

log = logging.getLogger(__name__)

DEFAULT_M = 10**46


class ReductionError(ArithmeticError):
    """No convergent in the certified range gives a positive epsilon."""


def small_linear_form_guard(x) -> PrecReal:
    """From ``|e^L - 1| < x`` with ``0 < x < 1/2`` conclude ``|L| < 2x``."""
    x = PrecReal.of(x, 60)
    if not (x > 0 and x < Fraction(1, 2)):
        raise ValueError(f"guard needs 0 < x < 1/2, got {x.str(6)}")
    return 2 * x


# tau and its expansion ------------------------------------------------------------


@dataclass(frozen=True)
class TauExpansion:
    tau: PrecReal
    quotients: tuple[int, ...]
    convergents: tuple[Convergent, ...]

    @property
    def digits(self) -> int:
        return self.tau.digits


def expansion_of(tau: PrecReal) -> TauExpansion:
    cf = expand_cf(tau)
    return TauExpansion(tau, tuple(cf), tuple(convergents(cf)))


@lru_cache(maxsize=8)
def tau_expansion(digits: int = DEFAULT_DIGITS) -> TauExpansion:
    """Expansion of ``log 10 / log alpha`` at the given precision."""
    tau = ln(10, digits) / log_alpha(digits)
    return expansion_of(tau)


# the lemma ------------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionInstance:
    tau: PrecReal
    mu: PrecReal
    A: PrecReal
    B: PrecReal
    M: int

    def __post_init__(self) -> None:
        if not self.A > 0:
            raise ValueError("A must be positive")
        if not self.B > 1:
            raise ValueError("B must exceed 1")
        if self.M <= 1:
            raise ValueError("M must exceed 1")
        if self.tau.value == 0:
            raise ValueError("tau must be nonzero")


@dataclass(frozen=True)
class ReductionResult:
    """Outcome of one reduction: ``k < k_bound`` for every solution.

    ``epsilon`` is None on the homogeneous route, where ``conv`` is the last
    convergent with denominator at most the range bound.
    """

    conv: Convergent
    epsilon: Optional[PrecReal]
    k_bound: PrecReal
    route: str = "inhomogeneous"

    @property
    def bound(self) -> int:
        """Integer b with every admissible k < b."""
        return ceil_int(self.k_bound)


def _dist(v: mpf) -> mpf:
    return abs(v - mp.nint(v))


def _scan(mu: mpf, A: mpf, log_B: mpf, M: int, exp: TauExpansion, start: int, tq: list[mpf]):
    """Walk convergents from ``start`` until ``||mu q|| - M ||tau q||`` is certifiably positive.

    Works on raw mpf inside the caller's precision context. ``tq[i]`` holds
    ``M * ||tau q_i||`` for the convergent ``start + i``.
    """
    margin = guard_margin(exp.digits)
    for offset, conv in enumerate(exp.convergents[start:]):
        if offset >= len(tq):
            tq.append(M * _dist(exp.tau.value * conv.q))
        eps = _dist(mu * conv.q) - tq[offset]
        if abs(eps) <= margin:
            raise PrecisionError(
                f"sign of epsilon at convergent {conv.index} is not certified at {exp.digits} digits"
            )
        if eps > 0:
            return conv, eps, mp.log(A * conv.q / eps) / log_B
    raise ReductionError(
        f"no positive epsilon among convergents {start}..{len(exp.convergents) - 1}"
    )


def dp_reduce(inst: ReductionInstance, expansion: TauExpansion | None = None) -> ReductionResult:
    """First convergent with ``q > 6M`` and positive epsilon, and the resulting bound on k.

    No integers ``m <= M``, n and ``k >= k_bound`` satisfy
    ``0 < |m tau - n + mu| < A B^(-k)``.
    """
    exp = expansion or expansion_of(inst.tau)
    start = first_convergent_above(exp.quotients, 6 * inst.M).index
    digits = min(inst.tau.digits, inst.mu.digits, exp.digits)
    with mp.workdps(digits):
        conv, eps, kb = _scan(
            inst.mu.value, inst.A.value, mp.log(inst.B.value), inst.M, exp, start, []
        )
    return ReductionResult(conv, PrecReal(eps, digits), PrecReal(kb, digits))


def homogeneous_reduce(
    A: PrecReal, B: PrecReal, X: int, expansion: TauExpansion
) -> ReductionResult:
    """Bound k in ``0 < |x tau - n| < A B^(-k)`` for ``1 <= x <= X``.

    With K the last index with ``q_K <= X``, every such x satisfies
    ``|x tau - n| >= |q_K tau - p_K|``, hence ``k < log(A / |q_K tau - p_K|) / log B``.
    """
    convs = expansion.convergents
    K = max(c.index for c in convs if c.q <= X)
    if K + 1 >= len(convs):
        raise PrecisionError(f"convergent after q <= {X} is not certified")
    conv = convs[K]
    with mp.workdps(expansion.digits):
        gap = abs(conv.q * expansion.tau.value - conv.p)
        if gap <= guard_margin(expansion.digits):
            raise PrecisionError("homogeneous gap is not certified")
        kb = mp.log(A.value / gap) / mp.log(B.value)
    return ReductionResult(conv, None, PrecReal(kb, expansion.digits), route="homogeneous")


# stages ---------------------------------------------------------------------------


def power_of_ten(r: Fraction) -> int | None:
    """j with ``r == 10**j`` (j >= 0), else None."""
    if r.denominator != 1 or r.numerator < 1:
        return None
    v, j = r.numerator, 0
    while v % 10 == 0:
        v //= 10
        j += 1
    return j if v == 1 else None


def stage1_rational(d1: int) -> Fraction:
    return Fraction(d1, 9)


def stage2_rational(d1: int, d2: int, ell: int) -> Fraction:
    return Fraction(d1 * 10**ell - (d1 - d2), 9)


def stage3_rational(d1: int, d2: int, ell: int, m: int) -> Fraction:
    return Fraction(d1 * 10 ** (ell + m) - (d1 - d2) * 10**m + (d1 - d2), 9)


@dataclass(frozen=True)
class StageSpec:
    """Coefficients of one stage: ``|form| < A B^(-k)``, ``A = 2 c / log alpha``."""

    name: str
    variable: str
    gamma_const: Fraction
    base: str  # "10" or "alpha"

    def A(self, digits: int) -> PrecReal:
        return 2 * PrecReal.of(self.gamma_const, digits) / log_alpha(digits)

    def B(self, digits: int) -> PrecReal:
        return PrecReal.of(10, digits) if self.base == "10" else alpha(digits)

    def guard_point(self, digits: int = 60) -> PrecReal:
        """``|Gamma|`` bound at the smallest exponent the reduction has to handle.

        Exponents l, m < 2 are already below any stage bound; n > 1000 is the
        working assumption of the high range.
        """
        k_min = 2 if self.base == "10" else 1001
        return PrecReal.of(self.gamma_const, digits) / self.B(digits) ** k_min


STAGES = {
    "ell": StageSpec("stage 1", "ell", Fraction(28), "10"),
    "m": StageSpec("stage 2", "m", Fraction(19), "10"),
    "n": StageSpec("stage 3", "n", Fraction(10, 9), "alpha"),
}


def _combos(variable: str, ell_max: int = 0, m_max: int = 0) -> Iterator[tuple]:
    for d1 in range(1, 10):
        if variable == "ell":
            yield (d1,)
            continue
        for d2 in range(10):
            if d1 == d2:
                continue
            for ell in range(1, ell_max):
                if variable == "m":
                    yield (d1, d2, ell)
                else:
                    for m in range(1, m_max):
                        yield (d1, d2, ell, m)


def _rational(combo: tuple) -> Fraction:
    return {1: stage1_rational, 3: stage2_rational, 4: stage3_rational}[len(combo)](*combo)


def combo_count(variable: str, ell_max: int = 52, m_max: int = 54) -> int:
    return sum(1 for _ in _combos(variable, ell_max, m_max))


@dataclass(frozen=True)
class StageRow:
    combo: tuple
    result: ReductionResult

    def to_dict(self) -> dict:
        r = self.result
        return {
            "combo": list(self.combo),
            "index": r.conv.index,
            "route": r.route,
            "epsilon": None if r.epsilon is None else r.epsilon.str(12),
            "k_bound": r.k_bound.str(12),
        }


@dataclass
class _Partial:
    combos: int = 0
    worst: Optional[StageRow] = None  # largest k_bound
    eps_min: Optional[StageRow] = None
    eps_max: Optional[StageRow] = None
    indices: set = field(default_factory=set)
    homogeneous: list = field(default_factory=list)
    rows: list = field(default_factory=list)

    def add(self, row: StageRow, keep: bool) -> None:
        self.combos += 1
        self.indices.add(row.result.conv.index)
        if row.result.epsilon is None:
            self.homogeneous.append(row.combo)
        if keep:
            self.rows.append(row)
        self._extremes(row)

    def _extremes(self, row: StageRow) -> None:
        r = row.result
        if self.worst is None or _key(r.k_bound, row) > _key(self.worst.result.k_bound, self.worst):
            self.worst = row
        if r.epsilon is None:
            return
        if self.eps_min is None or _key(r.epsilon, row) < _key(self.eps_min.result.epsilon, self.eps_min):
            self.eps_min = row
        if self.eps_max is None or _key(r.epsilon, row) > _key(self.eps_max.result.epsilon, self.eps_max):
            self.eps_max = row

    def merge(self, other: "_Partial") -> None:
        self.combos += other.combos
        self.indices |= other.indices
        self.homogeneous += other.homogeneous
        self.rows += other.rows
        for row in (other.worst, other.eps_min, other.eps_max):
            if row is not None:
                self._extremes(row)


def _key(x: PrecReal, row: StageRow):
    # ties broken by combo so merging order never matters
    return (x.value, row.combo)


@dataclass(frozen=True)
class StageAggregate:
    name: str
    variable: str
    M: int
    digits: int
    combos: int
    bound: int
    max_k_bound: PrecReal
    worst_combo: tuple
    min_epsilon: PrecReal
    min_epsilon_combo: tuple
    max_epsilon: PrecReal
    max_epsilon_combo: tuple
    indices: tuple[int, ...]
    homogeneous: tuple[tuple, ...]
    ranges: dict
    rows: tuple[StageRow, ...] = ()

    @property
    def all_epsilon_positive(self) -> bool:
        return self.min_epsilon > 0

    def to_dict(self, detail: bool = False) -> dict:
        d = {
            "name": self.name,
            "variable": self.variable,
            "M": self.M,
            "combos": self.combos,
            "ranges": dict(self.ranges),
            "bound": self.bound,
            "max_k_bound": self.max_k_bound.str(12),
            "worst_combo": list(self.worst_combo),
            "min_epsilon": self.min_epsilon.str(12),
            "min_epsilon_combo": list(self.min_epsilon_combo),
            "max_epsilon": self.max_epsilon.str(12),
            "max_epsilon_combo": list(self.max_epsilon_combo),
            "convergent_indices": list(self.indices),
            "homogeneous_combos": [list(c) for c in self.homogeneous],
        }
        if detail:
            d["rows"] = [r.to_dict() for r in self.rows]
        return d


def reduce_combo(
    variable: str, combo: tuple, M: int, expansion: TauExpansion, _cache: dict | None = None
) -> ReductionResult:
    """Reduce one digit/length combination of a stage.

    ``_cache`` lets a sequence of calls with the same stage, M and expansion
    share the per-stage constants.
    """
    cache = _cache if _cache is not None else {}
    digits = expansion.digits
    if not cache:
        spec = STAGES[variable]
        A, B = spec.A(digits), spec.B(digits)
        with mp.workdps(digits):
            cache.update(
                A=A,
                B=B,
                log_B=mp.log(B.value),
                log_alpha=log_alpha(digits).value,
                start=first_convergent_above(expansion.quotients, 6 * M).index,
                tq=[],
                logs={},
            )
    r = _rational(combo)
    j = power_of_ten(r)
    if j is not None:
        # mu = j tau: the form is (x + j) tau - n with x <= M
        return homogeneous_reduce(cache["A"], cache["B"], M + j, expansion)
    with mp.workdps(digits):
        logs = cache["logs"]
        if r.denominator not in logs:
            logs[r.denominator] = mp.log(r.denominator)
        mu = (mp.log(r.numerator) - logs[r.denominator]) / cache["log_alpha"]
        conv, eps, kb = _scan(mu, cache["A"].value, cache["log_B"], M, expansion, cache["start"], cache["tq"])
    return ReductionResult(conv, PrecReal(eps, digits), PrecReal(kb, digits))


def _run_chunk(args) -> _Partial:
    variable, combos, M, digits, keep = args
    exp = tau_expansion(digits)
    part = _Partial()
    cache: dict = {}
    for combo in combos:
        part.add(StageRow(combo, reduce_combo(variable, combo, M, exp, cache)), keep)
    return part


def run_stage(
    variable: str,
    M: int = DEFAULT_M,
    ell_max: int = 52,
    m_max: int = 54,
    digits: int = DEFAULT_DIGITS,
    workers: int = 1,
    keep_rows: bool = False,
    combos: Iterable[tuple] | None = None,
) -> StageAggregate:
    spec = STAGES[variable]
    small_linear_form_guard(spec.guard_point())
    todo = list(combos) if combos is not None else list(_combos(variable, ell_max, m_max))
    if workers > 1 and len(todo) > workers:
        size = -(-len(todo) // (workers * 4))
        chunks = [todo[i : i + size] for i in range(0, len(todo), size)]
        total = _Partial()
        with ProcessPoolExecutor(workers) as pool:
            for part in pool.map(_run_chunk, [(variable, c, M, digits, keep_rows) for c in chunks]):
                total.merge(part)
    else:
        total = _run_chunk((variable, todo, M, digits, keep_rows))
    if total.combos == 0:
        raise ValueError("stage has no combinations")
    log.info("%s: %d combos, bound %s < %d", spec.name, total.combos, variable, total.worst.result.bound)
    eps_min = total.eps_min
    eps_max = total.eps_max
    ranges = {"d1": [1, 9]}
    if variable != "ell":
        ranges.update({"d2": [0, 9], "ell": [1, ell_max - 1]})
    if variable == "n":
        ranges["m"] = [1, m_max - 1]
    return StageAggregate(
        name=spec.name,
        variable=variable,
        M=M,
        digits=digits,
        combos=total.combos,
        bound=total.worst.result.bound,
        max_k_bound=total.worst.result.k_bound,
        worst_combo=total.worst.combo,
        min_epsilon=eps_min.result.epsilon,
        min_epsilon_combo=eps_min.combo,
        max_epsilon=eps_max.result.epsilon,
        max_epsilon_combo=eps_max.combo,
        indices=tuple(sorted(total.indices)),
        homogeneous=tuple(sorted(total.homogeneous)),
        ranges=ranges,
        rows=tuple(sorted(total.rows, key=lambda r: r.combo)),
    )


def stage1_ell(M: int = DEFAULT_M, digits: int = DEFAULT_DIGITS, **kw) -> StageAggregate:
    """Bound l from ``|(2l+m) tau - n + log(d1/9)/log alpha| < (56/log alpha) 10^(-l)``."""
    return run_stage("ell", M, digits=digits, **kw)


def stage2_m(ell_max: int = 52, M: int = DEFAULT_M, digits: int = DEFAULT_DIGITS, **kw) -> StageAggregate:
    """Bound m for every ``d1 != d2`` and ``1 <= l < ell_max``."""
    return run_stage("m", M, ell_max=ell_max, digits=digits, **kw)


def stage3_n(
    ell_max: int = 52, m_max: int = 54, M: int = DEFAULT_M, digits: int = DEFAULT_DIGITS, **kw
) -> StageAggregate:
    """Bound n for every ``d1 != d2``, ``1 <= l < ell_max``, ``1 <= m < m_max``; B = alpha."""
    return run_stage("n", M, ell_max=ell_max, m_max=m_max, digits=digits, **kw)
