"""Cross-check report serialization.

Both formats carry one flat record per (model, query) row with everything
needed to re-run it bit-identically: the model, the query, the plan, the
campaign seed and the derived row seed. No timestamps, so reruns with the
same seed produce byte-identical files.
"""

import json
import math
from pathlib import Path

from .config import SCHEMA_VERSION
from .estimator import CheckResult, CrossCheckReport
from .parser import dump_model

TABLE_FILENAME = "cross-check.tsv"
STRUCTURED_FILENAME = "cross-check.json"

COLUMNS = (
    "model_id",
    "a",
    "b",
    "m",
    "M",
    "verdict",
    "rule",
    "scheme",
    "horizon",
    "dt",
    "delta",
    "gaussian_substitution",
    "paths",
    "alpha",
    "seed",
    "row_seed",
    "hits_up",
    "hits_down",
    "n_censored",
    "n_outside",
    "p_up_hat",
    "ci_up_lo",
    "ci_up_hi",
    "p_down_hat",
    "ci_down_lo",
    "ci_down_hi",
    "mean_exit_time",
    "outcome",
    "status",
)


def _number(value):
    """JSON-safe number: infinities become strings."""
    if isinstance(value, float) and math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def row_record(result: CheckResult, seed: int) -> dict:
    """Flat record of one row, keyed by COLUMNS."""
    q, plan, est = result.query, result.plan, result.estimate
    return {
        "model_id": result.model_id,
        "a": q.a,
        "b": q.b,
        "m": q.m,
        "M": q.M,
        "verdict": result.verdict.value.value,
        "rule": result.verdict.reason.value,
        "scheme": plan.scheme.value,
        "horizon": plan.horizon,
        "dt": plan.dt,
        "delta": plan.delta,
        "gaussian_substitution": plan.gaussian_substitution,
        "paths": est.n_paths,
        "alpha": result.alpha,
        "seed": seed,
        "row_seed": result.row_seed,
        "hits_up": est.hits_up,
        "hits_down": est.hits_down,
        "n_censored": est.n_censored,
        "n_outside": est.n_outside,
        "p_up_hat": est.p_up_hat,
        "ci_up_lo": est.ci_up[0],
        "ci_up_hi": est.ci_up[1],
        "p_down_hat": est.p_down_hat,
        "ci_down_lo": est.ci_down[0],
        "ci_down_hi": est.ci_down[1],
        "mean_exit_time": est.mean_exit_time,
        "outcome": result.outcome.value,
        "status": result.status.value,
    }


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_table(report: CrossCheckReport) -> str:
    """Tab-separated table, one line per row, floats in round-trip repr."""
    lines = ["\t".join(COLUMNS)]
    for result in report.results:
        record = row_record(result, report.seed)
        lines.append("\t".join(_cell(record[c]) for c in COLUMNS))
    return "\n".join(lines) + "\n"


def render_structured(report: CrossCheckReport) -> str:
    rows = []
    for result in report.results:
        record = {k: _number(v) for k, v in row_record(result, report.seed).items()}
        record["model"] = dump_model(result.model)
        rows.append(record)
    data = {
        "schema": SCHEMA_VERSION,
        "campaign": {"seed": report.seed, "default_alpha": report.alpha, "shard_size": report.shard_size},
        "summary": {status.value: count for status, count in report.tally().items()},
        "rows": rows,
    }
    return json.dumps(data, indent=2, allow_nan=False) + "\n"


def save_report(
    report: CrossCheckReport, out_dir: Path, formats: tuple[str, ...] = ("table", "structured")
) -> list[Path]:
    """Write the requested report formats into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    if "table" in formats:
        path = out_dir / TABLE_FILENAME
        path.write_text(render_table(report))
        written.append(path)
    if "structured" in formats:
        path = out_dir / STRUCTURED_FILENAME
        path.write_text(render_structured(report))
        written.append(path)
    return written
