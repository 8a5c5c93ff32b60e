"""Monte Carlo estimates of exit-law masses and the verdict cross-check.

Paths are counted per shard and the shard counters are merged in index
order, so a campaign's aggregates depend on its seed and shard size only.
"""

import asyncio
import math
from collections.abc import Awaitable, Callable, Iterable
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import reduce

from scipy import stats

from .classifier import ExitQuery, Verdict, VerdictValue, decide
from .config import DEFAULTS
from .model import LevyModel
from .pool import ShardResult, run_pool
from .sampler import Exit, PlanHints, SimPlan, plan, simulate_exit
from .scheduler import Shard, create_campaign_plan
from .streams import row_seed


class HorizonBelowWindow(ValueError):
    """The censoring horizon ends before the query window starts."""


class SchemeMismatch(ValueError):
    """A Zero verdict paired with a scheme that cannot certify a.s.-zero events."""


class CampaignError(RuntimeError):
    """A shard failed inside a worker."""


@dataclass(frozen=True)
class ExitCounts:
    """Per-shard counters; merging is associative and commutative (up to float summation order)."""

    n_paths: int = 0
    hits_up: int = 0
    hits_down: int = 0
    n_censored: int = 0
    n_outside: int = 0
    exit_time_sum: float = 0.0

    def merge(self, other: "ExitCounts") -> "ExitCounts":
        return ExitCounts(
            n_paths=self.n_paths + other.n_paths,
            hits_up=self.hits_up + other.hits_up,
            hits_down=self.hits_down + other.hits_down,
            n_censored=self.n_censored + other.n_censored,
            n_outside=self.n_outside + other.n_outside,
            exit_time_sum=self.exit_time_sum + other.exit_time_sum,
        )

    @property
    def n_exited(self) -> int:
        return self.n_paths - self.n_censored


def count_exits(
    model: LevyModel,
    query: ExitQuery,
    sim_plan: SimPlan,
    key: int,
    paths: Iterable[int],
) -> ExitCounts:
    """Simulate the given path indices and count exits inside [m, M)."""
    n = up = down = censored = outside = 0
    time_sum = 0.0
    for path in paths:
        record = simulate_exit(model, query.a, query.b, sim_plan, key, path)
        n += 1
        if record.outcome is Exit.CENSORED:
            censored += 1
            continue
        time_sum += record.time
        if not query.m <= record.time < query.M:
            outside += 1
        elif record.outcome is Exit.UP:
            up += 1
        else:
            down += 1
    return ExitCounts(n, up, down, censored, outside, time_sum)


def wilson_interval(successes: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials == 0:
        return (0.0, 1.0)
    z = float(stats.norm.ppf(0.5 + confidence / 2.0))
    p_hat = successes / trials

    denominator = 1 + z**2 / trials
    center = (p_hat + z**2 / (2 * trials)) / denominator
    margin = (z / denominator) * math.sqrt(p_hat * (1 - p_hat) / trials + z**2 / (4 * trials**2))

    # Clamp so rounding never pushes p_hat outside its own interval
    lower = min(max(0.0, center - margin), p_hat)
    upper = max(min(1.0, center + margin), p_hat)
    return (lower, upper)


@dataclass(frozen=True)
class ExitEstimate:
    query: ExitQuery
    n_paths: int
    hits_up: int
    hits_down: int
    p_up_hat: float
    p_down_hat: float
    ci_up: tuple[float, float]
    ci_down: tuple[float, float]
    n_censored: int
    n_outside: int
    horizon: float
    confidence: float
    mean_exit_time: float | None

    @classmethod
    def from_counts(cls, query: ExitQuery, counts: ExitCounts, horizon: float, alpha: float) -> "ExitEstimate":
        n = counts.n_paths
        confidence = 1.0 - alpha
        return cls(
            query=query,
            n_paths=n,
            hits_up=counts.hits_up,
            hits_down=counts.hits_down,
            p_up_hat=counts.hits_up / n if n else 0.0,
            p_down_hat=counts.hits_down / n if n else 0.0,
            ci_up=wilson_interval(counts.hits_up, n, confidence),
            ci_down=wilson_interval(counts.hits_down, n, confidence),
            n_censored=counts.n_censored,
            n_outside=counts.n_outside,
            horizon=horizon,
            confidence=confidence,
            mean_exit_time=counts.exit_time_sum / counts.n_exited if counts.n_exited else None,
        )


# --- campaigns --------------------------------------------------------------


@dataclass(frozen=True)
class ShardRunner:
    """Everything a worker process needs to count one row's shards."""

    model: LevyModel
    query: ExitQuery
    plan: SimPlan
    key: int

    def __call__(self, shard: Shard) -> ExitCounts:
        return count_exits(self.model, self.query, self.plan, self.key, range(shard.start, shard.stop))


@dataclass(frozen=True)
class CampaignRunner:
    rows: tuple[ShardRunner, ...]

    def __call__(self, shard: Shard) -> ExitCounts:
        return self.rows[shard.row](shard)


async def run_campaign(
    runners: list[ShardRunner],
    sizes: list[int],
    workers: int = 1,
    shard_size: int = DEFAULTS.shard_size,
    on_shard_complete: Callable[[ShardResult[ExitCounts]], Awaitable[None]] | None = None,
) -> list[ExitCounts]:
    """Count every row of a campaign; returns merged counters per row."""
    campaign = create_campaign_plan(sizes, shard_size)
    status = await run_pool(campaign, CampaignRunner(tuple(runners)), max(1, workers), on_shard_complete)
    if status.failed:
        first = status.results[min(status.failed)]
        raise CampaignError(f"shard {first.shard.index} (row {first.shard.row}) failed: {first.error}")
    # No shard failed, so position i holds shard i
    values = status.ordered_values()
    return [
        reduce(ExitCounts.merge, (values[i] for i in campaign.row_shards[row]), ExitCounts())
        for row in range(len(runners))
    ]


def _check_horizon(query: ExitQuery, sim_plan: SimPlan) -> None:
    if sim_plan.horizon <= query.m:
        raise HorizonBelowWindow(f"horizon {sim_plan.horizon} does not reach the window {query.window}")


def estimate(
    model: LevyModel,
    query: ExitQuery,
    n: int,
    sim_plan: SimPlan,
    seed: int,
    alpha: float = DEFAULTS.alpha,
    workers: int = 1,
    shard_size: int = DEFAULTS.shard_size,
    row: int = 0,
) -> ExitEstimate:
    """Estimate lambda+[m, M) and lambda-[m, M) from n simulated paths."""
    _check_horizon(query, sim_plan)
    runner = ShardRunner(model, query, sim_plan, row_seed(seed, row))
    (counts,) = asyncio.run(run_campaign([runner], [n], workers, shard_size))
    return ExitEstimate.from_counts(query, counts, sim_plan.horizon, alpha)


# --- cross-check ------------------------------------------------------------


class MonteCarloOutcome(str, Enum):
    HIT_OBSERVED = "hit-observed"
    NO_HIT = "no-hit"


class CheckStatus(str, Enum):
    CONSISTENT = "consistent"
    CONTRADICTION = "contradiction"
    INCONCLUSIVE = "inconclusive"


def positivity(estimate: ExitEstimate) -> MonteCarloOutcome:
    """HitObserved iff both boundaries were hit inside the window at least once."""
    if estimate.hits_up >= 1 and estimate.hits_down >= 1:
        return MonteCarloOutcome.HIT_OBSERVED
    return MonteCarloOutcome.NO_HIT


def judge(verdict: Verdict, outcome: MonteCarloOutcome, exact: bool) -> CheckStatus:
    """Compare a verdict with Monte Carlo evidence.

    Only an exact-scheme hit can contradict a Zero verdict; a missing hit
    never contradicts a Positive one.
    """
    hit = outcome is MonteCarloOutcome.HIT_OBSERVED
    if verdict.value is VerdictValue.ZERO:
        if not hit:
            return CheckStatus.CONSISTENT
        return CheckStatus.CONTRADICTION if exact else CheckStatus.INCONCLUSIVE
    if verdict.value is VerdictValue.POSITIVE and hit:
        return CheckStatus.CONSISTENT
    return CheckStatus.INCONCLUSIVE


@dataclass(frozen=True)
class CheckRow:
    """One (model, query) entry of a verification campaign."""

    model_id: str
    model: LevyModel
    query: ExitQuery
    paths: int = DEFAULTS.paths
    hints: PlanHints = PlanHints()
    alpha: float | None = None


@dataclass(frozen=True)
class PreparedRow:
    row: CheckRow
    verdict: Verdict
    plan: SimPlan


def prepare_rows(rows: list[CheckRow]) -> list[PreparedRow]:
    """Decide every row and fix its simulation plan before any path is drawn."""
    prepared = []
    for row in rows:
        q = row.query
        horizon = row.hints.horizon if row.hints.horizon is not None else DEFAULTS.horizon_for(q.m, q.M)
        hints = replace(row.hints, a=q.a, b=q.b, horizon=horizon)
        sim_plan = plan(row.model, hints)
        _check_horizon(q, sim_plan)
        verdict = decide(row.model, q)
        if verdict.value is VerdictValue.ZERO and not sim_plan.exact:
            raise SchemeMismatch(
                f"{row.model_id} {q.window}: Zero verdict needs the exact scheme, plan uses {sim_plan.scheme.value}"
            )
        prepared.append(PreparedRow(row, verdict, sim_plan))
    return prepared


@dataclass(frozen=True)
class CheckResult:
    model_id: str
    model: LevyModel
    query: ExitQuery
    verdict: Verdict
    plan: SimPlan
    row_seed: int
    estimate: ExitEstimate
    outcome: MonteCarloOutcome
    status: CheckStatus
    alpha: float


@dataclass
class CrossCheckReport:
    seed: int
    alpha: float
    shard_size: int
    results: list[CheckResult] = field(default_factory=list)

    @property
    def contradictions(self) -> list[CheckResult]:
        return [r for r in self.results if r.status is CheckStatus.CONTRADICTION]

    @property
    def ok(self) -> bool:
        return not self.contradictions

    def tally(self) -> dict[CheckStatus, int]:
        return {s: sum(r.status is s for r in self.results) for s in CheckStatus}


def build_report(
    prepared: list[PreparedRow],
    counts: list[ExitCounts],
    seed: int,
    alpha: float,
    shard_size: int,
) -> CrossCheckReport:
    """Judge every row; rows without an alpha of their own use the campaign alpha."""
    report = CrossCheckReport(seed=seed, alpha=alpha, shard_size=shard_size)
    for index, (item, row_counts) in enumerate(zip(prepared, counts)):
        row_alpha = item.row.alpha if item.row.alpha is not None else alpha
        estimate_ = ExitEstimate.from_counts(item.row.query, row_counts, item.plan.horizon, row_alpha)
        outcome = positivity(estimate_)
        report.results.append(
            CheckResult(
                model_id=item.row.model_id,
                model=item.row.model,
                query=item.row.query,
                verdict=item.verdict,
                plan=item.plan,
                row_seed=row_seed(seed, index),
                estimate=estimate_,
                outcome=outcome,
                status=judge(item.verdict, outcome, item.plan.exact),
                alpha=row_alpha,
            )
        )
    return report


def campaign_runners(prepared: list[PreparedRow], seed: int) -> list[ShardRunner]:
    return [ShardRunner(p.row.model, p.row.query, p.plan, row_seed(seed, i)) for i, p in enumerate(prepared)]


def cross_check(
    catalog: list[CheckRow] | list[tuple[LevyModel, ExitQuery]],
    n: int = DEFAULTS.paths,
    alpha: float = DEFAULTS.alpha,
    seed: int = DEFAULTS.seed,
    workers: int = 1,
    shard_size: int = DEFAULTS.shard_size,
) -> CrossCheckReport:
    """Decide and simulate every entry, then compare verdicts with the evidence.

    Bare (model, query) pairs run with n paths and automatic plans.
    """
    rows = [
        item if isinstance(item, CheckRow) else CheckRow(f"row-{i}", item[0], item[1], paths=n)
        for i, item in enumerate(catalog)
    ]
    prepared = prepare_rows(rows)
    runners = campaign_runners(prepared, seed)
    counts = asyncio.run(run_campaign(runners, [p.row.paths for p in prepared], workers, shard_size))
    return build_report(prepared, counts, seed, alpha, shard_size)
