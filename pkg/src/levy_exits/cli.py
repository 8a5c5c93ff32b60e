"""Command-line front door for levy-exits.

Exit codes: 0 success, 1 contradiction between a verdict and the simulation,
2 usage or configuration error, 130 interrupted.
"""

import argparse
import asyncio
import math
import sys
from dataclasses import replace
from pathlib import Path

from rich.console import Console
from rich.markup import escape

from .catalog import BUILTIN_SCENARIOS, WITNESSES
from .classifier import ExitQuery, classify, decide
from .config import DEFAULT_CONFIG_DIR, Defaults
from .estimator import CheckRow, estimate
from .executor import (
    display_catalog,
    display_classification,
    display_defaults,
    display_estimate,
    execute_verify,
    scenario_rows,
)
from .parser import Scenario, load_model, load_scenarios
from .report import save_report
from .sampler import Scheme, plan, simulate_exit
from .streams import row_seed

console = Console()
err_console = Console(stderr=True)

EXIT_OK = 0
EXIT_CONTRADICTION = 1
EXIT_USAGE = 2


def _campaign_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, help="Campaign seed (default: config, then 42)")
    parser.add_argument("--paths", type=int, help="Paths per query (overrides the scenario)")
    parser.add_argument("--horizon", type=float, help="Censoring horizon (default: M, else 16*max(m,1))")
    parser.add_argument("--scheme", choices=[s.value for s in Scheme], help="Preferred simulation scheme")
    parser.add_argument("--dt", type=float, help="Grid step for schemes with a Gaussian part")
    parser.add_argument("--workers", type=int, help="Worker processes (default: config, then 4)")
    parser.add_argument("--alpha", type=float, help="Wilson intervals at level 1-alpha (overrides the scenario)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levy-exits",
        description="Classify Levy triplets for proper two-sided exits and check verdicts by Monte Carlo",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="Print every exit predicate of a model")
    p.add_argument("model_file", type=Path)

    p = sub.add_parser("decide", help="Decide positivity of both exit laws on a window")
    p.add_argument("model_file", type=Path)
    p.add_argument("--a", type=float, required=True, help="Upper boundary distance")
    p.add_argument("--b", type=float, required=True, help="Lower boundary distance")
    p.add_argument("--m", type=float, default=0.0, help="Window start (default: 0)")
    p.add_argument("--M", type=float, default=math.inf, help="Window end (default: inf)")

    p = sub.add_parser("estimate", help="Estimate exit-law masses for every query of a scenario file")
    p.add_argument("scenario_file", type=Path)
    _campaign_flags(p)
    p.add_argument("--trace", type=Path, help="Dump the path of index 0 of every query as time<TAB>value")

    p = sub.add_parser("verify", help="Cross-check verdicts against simulation")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("scenario_file", type=Path, nargs="?")
    source.add_argument("--builtin", action="store_true", help="Run the built-in verification catalog")
    _campaign_flags(p)
    p.add_argument("--out", type=Path, default=Path("reports"), help="Report directory (default: ./reports)")
    p.add_argument(
        "--format",
        choices=["table", "structured"],
        action="append",
        help="Report format; repeat for both (default: both)",
    )

    sub.add_parser("catalog", help="List the built-in witness models")

    p = sub.add_parser("config", help="Show the effective defaults")
    p.add_argument("--save", action="store_true", help="Write them to the config file")
    p.add_argument("--dir", type=Path, default=DEFAULT_CONFIG_DIR, help="Config directory (default: ~/.levy-exits)")
    return parser


def _seed(args, defaults: Defaults, scenarios: list[Scenario]) -> int:
    if args.seed is not None:
        return args.seed
    seeded = [s for s in scenarios if s.campaign.seed is not None]
    if not seeded:
        return defaults.seed
    seed = seeded[0].campaign.seed
    for s in seeded[1:]:
        if s.campaign.seed != seed:
            err_console.print(
                f"[yellow]Warning:[/yellow] ignoring seed {s.campaign.seed} of scenario {escape(s.name)}; "
                f"using seed {seed}",
                highlight=False,
            )
    return seed


def _rows(args, scenarios: list[Scenario]) -> list[CheckRow]:
    if args.alpha is not None and not 0.0 < args.alpha < 1.0:
        raise ValueError(f"--alpha must lie in (0, 1), got {args.alpha}")
    scheme = Scheme(args.scheme) if args.scheme else None
    return scenario_rows(
        scenarios, paths=args.paths, scheme=scheme, horizon=args.horizon, dt=args.dt, alpha=args.alpha
    )


def cmd_classify(args, defaults: Defaults) -> int:
    model = load_model(args.model_file)
    display_classification(args.model_file.name, classify(model))
    return EXIT_OK


def cmd_decide(args, defaults: Defaults) -> int:
    model = load_model(args.model_file)
    query = ExitQuery(args.a, args.b, args.m, args.M)
    verdict = decide(model, query)
    console.print(f"a={query.a:g} b={query.b:g} window {query.window}: [bold]{verdict}[/bold]")
    return EXIT_OK


def cmd_estimate(args, defaults: Defaults) -> int:
    scenarios = load_scenarios(args.scenario_file)
    seed = _seed(args, defaults, scenarios)
    rows = _rows(args, scenarios)
    workers = args.workers or defaults.workers

    trace_file = args.trace.open("w") if args.trace else None
    try:
        for index, row in enumerate(rows):
            q = row.query
            horizon = row.hints.horizon if row.hints.horizon is not None else defaults.horizon_for(q.m, q.M)
            sim_plan = plan(row.model, replace(row.hints, a=q.a, b=q.b, horizon=horizon))
            result = estimate(
                row.model,
                q,
                row.paths,
                sim_plan,
                seed,
                alpha=row.alpha if row.alpha is not None else defaults.alpha,
                workers=workers,
                shard_size=defaults.shard_size,
                row=index,
            )
            display_estimate(row.model_id, result)

            if trace_file:
                trace_file.write(f"# {row.model_id} a={q.a!r} b={q.b!r} window {q.window} path 0\n")
                simulate_exit(
                    row.model,
                    q.a,
                    q.b,
                    sim_plan,
                    row_seed(seed, index),
                    0,
                    trace=lambda t, x: trace_file.write(f"{t!r}\t{x!r}\n"),
                )
    finally:
        if trace_file:
            trace_file.close()
    return EXIT_OK


def cmd_verify(args, defaults: Defaults) -> int:
    scenarios = list(BUILTIN_SCENARIOS) if args.builtin else load_scenarios(args.scenario_file)
    seed = _seed(args, defaults, scenarios)
    rows = _rows(args, scenarios)

    report = asyncio.run(
        execute_verify(
            rows,
            seed=seed,
            alpha=defaults.alpha,
            workers=args.workers or defaults.workers,
            shard_size=defaults.shard_size,
        )
    )
    formats = tuple(args.format or ("table", "structured"))
    for path in save_report(report, args.out, formats):
        console.print(f"[green]Report saved to:[/green] {path}")

    if not report.ok:
        err_console.print(f"[bold red]{len(report.contradictions)} contradiction(s)[/bold red]")
        return EXIT_CONTRADICTION
    return EXIT_OK


def cmd_catalog(args, defaults: Defaults) -> int:
    display_catalog(WITNESSES)
    console.print("[bold]Built-in verification scenarios:[/bold]")
    for s in BUILTIN_SCENARIOS:
        note = f" [dim]{s.description}[/dim]" if s.description else ""
        console.print(f"  {s.name}: {len(s.queries)} queries{note}")
    return EXIT_OK


def cmd_config(args, defaults: Defaults) -> int:
    display_defaults(defaults)
    if args.save:
        path = defaults.save(args.dir)
        console.print(f"[green]Config saved to:[/green] {path}")
    return EXIT_OK


COMMANDS = {
    "classify": cmd_classify,
    "decide": cmd_decide,
    "estimate": cmd_estimate,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
    "config": cmd_config,
}


def run_cli_with_args(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    defaults = Defaults.load()
    try:
        return COMMANDS[args.command](args, defaults)
    except (ValueError, OSError) as e:
        err_console.print(f"[red]Error:[/red] {escape(str(e))}", highlight=False)
        return EXIT_USAGE


def main():
    """Main entry point."""
    try:
        sys.exit(run_cli_with_args())
    except KeyboardInterrupt:
        console.print("\n[yellow]Interrupted.[/yellow]")
        sys.exit(130)
    except Exception as e:
        import traceback

        console.print(f"[red]Error:[/red] {e}")
        console.print("[dim]" + traceback.format_exc() + "[/dim]")
        sys.exit(1)


if __name__ == "__main__":
    main()
