"""Campaign orchestration and console display."""

from collections.abc import Callable
from dataclasses import fields

from rich.console import Console
from rich.markup import escape
from rich.table import Table

from .catalog import Witness
from .classifier import Classification, PredicateResult
from .config import DEFAULTS, Defaults
from .estimator import (
    CheckRow,
    CheckStatus,
    CrossCheckReport,
    ExitCounts,
    ExitEstimate,
    build_report,
    campaign_runners,
    prepare_rows,
    run_campaign,
)
from .parser import Scenario
from .pool import ShardResult
from .sampler import PlanHints, Scheme

console = Console()

STATUS_STYLE = {
    CheckStatus.CONSISTENT: "[green]consistent[/green]",
    CheckStatus.CONTRADICTION: "[bold red]CONTRADICTION[/bold red]",
    CheckStatus.INCONCLUSIVE: "[yellow]inconclusive[/yellow]",
}


def scenario_rows(
    scenarios: list[Scenario],
    paths: int | None = None,
    scheme: Scheme | None = None,
    horizon: float | None = None,
    dt: float | None = None,
    alpha: float | None = None,
) -> list[CheckRow]:
    """Expand scenarios into cross-check rows; explicit arguments override each campaign."""
    rows = []
    for scenario in scenarios:
        c = scenario.campaign
        hints = PlanHints(
            scheme=scheme or c.scheme,
            horizon=horizon if horizon is not None else c.horizon,
            dt=dt or c.dt,
            delta=c.delta,
            gaussian_substitution=c.gaussian_substitution,
            max_jump_rate=DEFAULTS.max_jump_rate,
        )
        for query in scenario.queries:
            rows.append(CheckRow(scenario.name, scenario.model, query, paths or c.paths, hints, alpha or c.alpha))
    return rows


async def execute_verify(
    rows: list[CheckRow],
    seed: int,
    alpha: float = DEFAULTS.alpha,
    workers: int = DEFAULTS.workers,
    shard_size: int = DEFAULTS.shard_size,
    on_progress: Callable[[str], None] | None = None,
) -> CrossCheckReport:
    """Decide every row, simulate all of them, and judge verdicts against the evidence."""

    def log(msg: str):
        if on_progress:
            on_progress(msg)
        console.print(msg)

    prepared = prepare_rows(rows)
    total = sum(p.row.paths for p in prepared)
    log(f"[bold]Rows:[/bold] {len(prepared)}  [bold]paths:[/bold] {total:,}  [bold]seed:[/bold] {seed}")

    remaining = [p.row.paths for p in prepared]

    async def progress_callback(result: ShardResult[ExitCounts]):
        shard = result.shard
        if not result.success:
            log(f"[red]✗ shard {shard.index} (row {shard.row}) failed:[/red] {escape(result.error)}")
            return
        remaining[shard.row] -= shard.size
        if remaining[shard.row] == 0:
            p = prepared[shard.row]
            log(f"[dim]✓ {p.row.model_id} {p.row.query.window} ({p.plan.scheme.value}, {p.row.paths:,} paths)[/dim]")

    log(f"[bold]Starting campaign with {workers} workers...[/bold]")
    counts = await run_campaign(
        campaign_runners(prepared, seed),
        [p.row.paths for p in prepared],
        workers=workers,
        shard_size=shard_size,
        on_shard_complete=progress_callback,
    )
    report = build_report(prepared, counts, seed, alpha, shard_size)

    log("")
    for r in report.results:
        q = r.query
        log(
            f"{r.model_id:<28} a={q.a:g} b={q.b:g} {q.window:<12} "
            f"{r.verdict.value.value:<8} {r.verdict.reason.value:<26} "
            f"up={r.estimate.hits_up} down={r.estimate.hits_down} {STATUS_STYLE[r.status]}"
        )
    tally = report.tally()
    log("")
    log(
        f"[bold]Cross-check complete:[/bold] {tally[CheckStatus.CONSISTENT]} consistent, "
        f"{tally[CheckStatus.INCONCLUSIVE]} inconclusive, {tally[CheckStatus.CONTRADICTION]} contradictions"
    )
    return report


def _mark(result: PredicateResult) -> str:
    return "[green]✓[/green]" if result.holds else "[red]✗[/red]"


def display_classification(name: str, classification: Classification) -> None:
    """Print every predicate of one model with the disjunct that decided it."""
    console.print()
    console.print(f"[bold blue]Model:[/bold blue] {name}")
    console.print(f"[bold]Monotonicity:[/bold] {classification.monotonicity.value}")

    table = Table()
    table.add_column("Predicate", style="cyan")
    table.add_column("Holds")
    table.add_column("Reason")
    for label in Classification.VECTOR:
        result = getattr(classification, label)
        table.add_row(label, _mark(result), result.disjunct.value)
    console.print(table)
    console.print(classification.summary(), highlight=False)


def display_catalog(witnesses: tuple[Witness, ...]) -> None:
    table = Table(title="Witness models")
    table.add_column("Name", style="cyan")
    for label in Classification.VECTOR:
        table.add_column(label)
    table.add_column("Model")

    for w in witnesses:
        c = w.classification
        table.add_row(w.name, *(_mark(getattr(c, label)) for label in Classification.VECTOR), w.note)

    console.print(table)
    console.print()


def display_estimate(name: str, estimate: ExitEstimate) -> None:
    q = estimate.query
    table = Table(title=f"{name}: a={q.a:g} b={q.b:g} window {q.window}")
    table.add_column("Boundary", style="cyan")
    table.add_column("Hits")
    table.add_column("Estimate")
    table.add_column(f"{estimate.confidence:.0%} Wilson interval")
    table.add_row("up", str(estimate.hits_up), f"{estimate.p_up_hat:.6f}", "[{:.6f}, {:.6f}]".format(*estimate.ci_up))
    table.add_row(
        "down", str(estimate.hits_down), f"{estimate.p_down_hat:.6f}", "[{:.6f}, {:.6f}]".format(*estimate.ci_down)
    )
    console.print(table)

    mean = f"{estimate.mean_exit_time:.6f}" if estimate.mean_exit_time is not None else "-"
    console.print(
        f"  paths={estimate.n_paths:,} censored={estimate.n_censored:,} "
        f"outside window={estimate.n_outside:,} horizon={estimate.horizon:g} mean exit time={mean}"
    )
    console.print()


def display_defaults(defaults: Defaults) -> None:
    table = Table(title="Defaults")
    table.add_column("Setting", style="cyan")
    table.add_column("Value")
    for f in fields(defaults):
        table.add_row(f.name, str(getattr(defaults, f.name)))
    console.print(table)
