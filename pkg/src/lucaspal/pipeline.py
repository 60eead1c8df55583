"""End-to-end run: low-range search, bound chain, three reductions, verdict.

The certificate is a key-sorted JSON document. Reals appear as decimal
strings, so ``parse(render(cert)) == cert`` holds exactly.
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

from . import __version__
from .bakerbounds import N_FLOOR, BoundChainResult, ChainError, derive_bound_chain
from .exhaustive import SearchReport, search_palindromic, search_two_block
from .realfield import PrecisionError
from .reduction import DEFAULT_M, ReductionError, StageAggregate, stage1_ell, stage2_m, stage3_n

log = logging.getLogger(__name__)

SCHEMA_VERSION = 1
STAGE_NAMES = ("stage 1", "stage 2", "stage 3")
VERDICTS = ("no solutions", "hits found", "incomplete")


@dataclass(frozen=True)
class Config:
    precision: int = 1000
    n_max: int = 1000
    M: int = DEFAULT_M
    workers: int = 1
    detail: bool = False
    skip: frozenset = frozenset()
    max_doublings: int = 2

    def __post_init__(self) -> None:
        if self.precision < 200:
            raise ValueError("precision must be at least 200 digits")
        if self.n_max < 2:
            raise ValueError("n_max must be at least 2")
        unknown = set(self.skip) - set(STAGE_NAMES) - {"bound chain"}
        if unknown:
            raise ValueError(f"unknown stages to skip: {sorted(unknown)}")


@dataclass
class BoundCertificate:
    tool_version: str
    precision: int
    n_max: int
    M: int
    search: dict
    crosscheck: dict
    bound_chain: Optional[dict]
    stages: dict
    verdict: str
    failures: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def stage(self, name: str) -> Optional[dict]:
        return self.stages.get(name)

    @property
    def final_n_bound(self) -> Optional[int]:
        s3 = self.stages.get("stage 3")
        return None if s3 is None else s3["bound"]


def render(cert: BoundCertificate) -> str:
    return json.dumps(asdict(cert), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse(text: str) -> BoundCertificate:
    data = json.loads(text)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported certificate schema {data.get('schema_version')!r}")
    return BoundCertificate(**data)


def _with_retry(run: Callable[[int], StageAggregate], digits: int, doublings: int) -> StageAggregate:
    for attempt in range(doublings + 1):
        try:
            return run(digits)
        except PrecisionError as exc:
            if attempt == doublings:
                raise
            log.warning("%s; retrying at %d digits", exc, 2 * digits)
            digits *= 2
    raise AssertionError("unreachable")


def decide_verdict(
    search: SearchReport,
    chain: Optional[BoundChainResult],
    stages: dict,
    M: int,
    failures: list,
) -> str:
    """Verdict from the pieces; anything missing or unproven gives ``incomplete``."""
    if search.hits:
        return "hits found"
    if failures:
        return "incomplete"
    if search.n_max < N_FLOOR:
        failures.append(f"search: low range covers n <= {search.n_max}, needs n <= {N_FLOOR}")
    if chain is None:
        failures.append("bound chain: missing")
    elif not M > chain.n_abs:
        failures.append(f"bound chain: M = {M} does not exceed n_abs = {chain.n_abs}")
    for name in STAGE_NAMES:
        agg = stages.get(name)
        if agg is None:
            failures.append(f"{name}: missing")
        elif not agg.all_epsilon_positive:
            failures.append(f"{name}: epsilon not positive for every combination")
    s3 = stages.get("stage 3")
    if s3 is not None and not s3.bound < N_FLOOR:
        failures.append(f"stage 3: n < {s3.bound} leaves the gap above {N_FLOOR} open")
    return "incomplete" if failures else "no solutions"


def run_full(config: Config = Config()) -> BoundCertificate:
    """Run every stage in order and assemble the certificate."""
    failures: list[str] = []
    search = search_palindromic(config.n_max)
    crosscheck = search_two_block(config.n_max)

    chain = None
    if "bound chain" in config.skip:
        failures.append("bound chain: skipped")
    else:
        try:
            chain = derive_bound_chain()
        except (ChainError, PrecisionError) as exc:
            failures.append(f"bound chain: {exc}")

    stages: dict[str, StageAggregate] = {}
    kw = dict(workers=config.workers, keep_rows=config.detail)
    runners = {
        "stage 1": lambda d: stage1_ell(config.M, digits=d, **kw),
        "stage 2": lambda d: stage2_m(stages["stage 1"].bound, config.M, digits=d, **kw),
        "stage 3": lambda d: stage3_n(
            stages["stage 1"].bound, stages["stage 2"].bound, config.M, digits=d, **kw
        ),
    }
    for name in STAGE_NAMES:
        if name in config.skip:
            failures.append(f"{name}: skipped")
            break
        try:
            stages[name] = _with_retry(runners[name], config.precision, config.max_doublings)
        except (PrecisionError, ReductionError, LookupError) as exc:
            failures.append(f"{name}: {exc}")
            break

    verdict = decide_verdict(search, chain, stages, config.M, failures)
    return BoundCertificate(
        tool_version=__version__,
        precision=config.precision,
        n_max=config.n_max,
        M=config.M,
        search=search.to_dict(),
        crosscheck=crosscheck.to_dict(),
        bound_chain=None if chain is None else chain.to_dict(),
        stages={
            name: dict(agg.to_dict(config.detail), digits=agg.digits) for name, agg in stages.items()
        },
        verdict=verdict,
        failures=failures,
    )


_VAR = {"ell": "ℓ", "m": "m", "n": "n"}


def explain(cert: BoundCertificate) -> str:
    """Human-readable account of a certificate; byte-stable for a fixed certificate."""
    out = [
        f"Lucas palindromic concatenations: certificate schema {cert.schema_version}, "
        f"tool {cert.tool_version}",
        f"working precision: {cert.precision} digits",
        f"verdict: {cert.verdict}",
        "",
        f"[low range] exhaustive search, n ≤ {cert.n_max}",
    ]
    hits = cert.search["hits"]
    if hits:
        for h in hits:
            out.append(f"  hit: L_{h['n']} = {h['value']} with (d1, d2, ℓ, m) = {tuple(h['spec'])}")
    else:
        out.append(f"  no palindromic hits for n ≤ {cert.n_max}")
    values = ", ".join(h["value"] for h in cert.crosscheck["hits"])
    out.append(f"  two-repdigit cross-check: {values or 'none'}")

    out.append("")
    out.append("[linear forms] Matveev lower bounds and Guzmán-Luca")
    chain = cert.bound_chain
    if chain is None:
        out.append("  not available")
    else:
        for s in chain["steps"]:
            out.append(f"  {s['name']}: {s['computed']} ≤ {s['cover']}")
        out.append(f"  ℓ < {chain['ell_log_bound']} log n")
        out.append(f"  m < {chain['m_log_bound']} (log n)^2")
        out.append(f"  n < {chain['n_poly_bound']} (log n)^3")
        out.append(f"  absolute: n < {chain['n_abs']}, ℓ < {chain['ell_abs']}, m < {chain['m_abs']}")

    out.append("")
    out.append(f"[reduction] Dujella-Pethő, M = {cert.M}")
    for name in STAGE_NAMES:
        s = cert.stages.get(name)
        if s is None:
            out.append(f"  {name}: not run")
            continue
        var = _VAR[s["variable"]]
        out.append(f"  {name}: {var} < {s['bound']}")
        out.append(
            f"    {s['combos']} combinations at {s['digits']} digits; "
            f"largest k-bound {s['max_k_bound']} at {tuple(s['worst_combo'])}"
        )
        out.append(
            f"    ε min {s['min_epsilon']} at {tuple(s['min_epsilon_combo'])}, "
            f"ε max {s['max_epsilon']} at {tuple(s['max_epsilon_combo'])}"
        )
        out.append(f"    convergent indices {s['convergent_indices']}")
        if s["homogeneous_combos"]:
            combos = ", ".join(str(tuple(c)) for c in s["homogeneous_combos"])
            out.append(f"    homogeneous route (μ a multiple of τ): {combos}")

    out.append("")
    if cert.verdict == "no solutions":
        out.append(
            f"conclusion: n < {cert.final_n_bound} contradicts n > {N_FLOOR}; "
            "no Lucas number is a palindromic concatenation of two distinct repdigits"
        )
    else:
        out.append(f"conclusion: {cert.verdict}")
        for f in cert.failures:
            out.append(f"  failing stage: {f}")
    return "\n".join(out) + "\n"
