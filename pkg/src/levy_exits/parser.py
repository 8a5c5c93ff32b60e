"""Parse and write model and scenario documents.

Documents are YAML with a versioned header. A model document::

    schema: levy-exits/1
    model:
      sigma2: 0.0
      measure:
        atoms:
          - {x: -2.0, rate: 1.0}
      drift: {gamma0: 1.0}

One example per measure family::

    measure: {zero: {}}
    measure:
      atoms: [{x: -1.0, rate: 1.0}, {x: 1.0, rate: 1.0}]
    measure:
      compound_poisson:
        rate: 2.0
        jumps: {uniform: {lo: 0.5, hi: 1.5}}
    measure:
      compound_poisson:
        rate: 1.0
        jumps: {exponential: {scale: 0.5, side: pos, offset: 0.0}}
    measure:
      compound_poisson:
        rate: 3.0
        jumps:
          mixture:
            - {weight: 1.0, jumps: {exponential: {scale: 1.0, side: neg}}}
            - {weight: 2.0, jumps: {uniform: {lo: 1.0, hi: 2.0}}}
    measure:
      power_law:
        pos: {c: 1.0, alpha: 1.5, theta: 0.0, cutoff: 0.0}
        neg: {c: 1.0, alpha: 1.5, theta: 0.0, cutoff: 0.0}
    measure:
      sum:
        - {atoms: [{x: -2.0, rate: 1.0}]}
        - {power_law: {pos: {c: 1.0, alpha: 0.5, theta: 1.0}}}

The drift is ``{gamma0: v}`` for finite-variation measures and
``{center: v}`` (truncation 1{|x| <= 1}) otherwise.

A scenario document carries a list under ``scenarios``, each with a unique
``name``, a ``model``, a list of ``queries`` ({a, b, m, M}) and optional
``campaign`` parameters (paths, horizon, scheme, seed, alpha, dt, delta,
gaussian_substitution).
"""

import math
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .classifier import ExitQuery
from .config import DEFAULTS, SCHEMA_VERSION
from .measures import (
    Atoms,
    CompoundPoisson,
    Exponential,
    MeasureSpec,
    Mixture,
    PowerLaw,
    PowerTail,
    Side,
    SumMeasure,
    Uniform,
    ZeroMeasure,
)
from .model import CenterB, Gamma0, LevyModel
from .sampler import Scheme


class SchemaError(ValueError):
    """A document failed to parse or validate; carries line and field path."""

    def __init__(self, message: str, line: int | None = None, path: str = ""):
        self.message = message
        self.line = line
        self.path = path
        where = " ".join(p for p in (f"line {line}" if line else "", path) if p)
        super().__init__(f"{where}: {message}" if where else message)


# --- YAML loading with line numbers -----------------------------------------


class _Node(dict):
    """Mapping that remembers where it and each of its keys came from."""

    line: int | None = None
    key_lines: dict


class _Loader(yaml.SafeLoader):
    pass


def _construct_mapping(loader: _Loader, node: yaml.MappingNode) -> _Node:
    mapping = _Node(yaml.SafeLoader.construct_mapping(loader, node, deep=True))
    mapping.line = node.start_mark.line + 1
    mapping.key_lines = {k.value: v.start_mark.line + 1 for k, v in node.value}
    return mapping


_Loader.add_constructor(yaml.resolver.BaseResolver.DEFAULT_MAPPING_TAG, _construct_mapping)


def _load_yaml(text: str):
    try:
        return yaml.load(text, Loader=_Loader)
    except yaml.MarkedYAMLError as e:
        line = e.problem_mark.line + 1 if e.problem_mark else None
        raise SchemaError(e.problem or str(e), line) from e
    except yaml.YAMLError as e:
        raise SchemaError(str(e)) from e


@dataclass
class _Cursor:
    """Current position while walking a document."""

    path: str
    line: int | None

    def at(self, doc, key) -> "_Cursor":
        path = f"{self.path}.{key}" if self.path else str(key)
        line = getattr(doc, "key_lines", {}).get(key, self.line)
        return _Cursor(path, line)

    def item(self, items: list, index: int) -> "_Cursor":
        line = getattr(items[index], "line", None) or self.line
        return _Cursor(f"{self.path}[{index}]", line)

    def error(self, message: str) -> SchemaError:
        return SchemaError(message, self.line, self.path)


def _mapping(value, cur: _Cursor) -> dict:
    if value is None:
        return _Node()
    if not isinstance(value, dict):
        raise cur.error(f"expected a mapping, got {type(value).__name__}")
    return value


def _sequence(value, cur: _Cursor) -> list:
    if not isinstance(value, list):
        raise cur.error(f"expected a list, got {type(value).__name__}")
    return value


def _number(doc: dict, key: str, cur: _Cursor, default: float | None = None) -> float:
    here = cur.at(doc, key)
    if key not in doc:
        if default is None:
            raise here.error("missing field")
        return default
    value = doc[key]
    if isinstance(value, str) and value.strip().lower() in ("inf", "+inf", "infinity"):
        return math.inf
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise here.error(f"expected a number, got {value!r}")
    return float(value)


def _integer(doc: dict, key: str, cur: _Cursor, default: int | None = None) -> int | None:
    here = cur.at(doc, key)
    if key not in doc:
        return default
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise here.error(f"expected an integer, got {value!r}")
    return value


def _only_key(doc: dict, choices: tuple[str, ...], cur: _Cursor) -> str:
    keys = [k for k in doc if k in choices]
    unknown = [k for k in doc if k not in choices]
    if unknown:
        raise cur.at(doc, unknown[0]).error(f"unknown key; expected one of {', '.join(choices)}")
    if len(keys) != 1:
        raise cur.error(f"expected exactly one of {', '.join(choices)}")
    return keys[0]


def _checked(build, cur: _Cursor):
    """Run a constructor, turning domain validation errors into SchemaErrors at cur."""
    try:
        return build()
    except SchemaError:
        raise
    except ValueError as e:
        raise cur.error(str(e)) from e


# --- measures ---------------------------------------------------------------


def _parse_jumps(value, cur: _Cursor):
    doc = _mapping(value, cur)
    kind = _only_key(doc, ("uniform", "exponential", "mixture"), cur)
    here = cur.at(doc, kind)
    body = doc[kind]

    if kind == "uniform":
        body = _mapping(body, here)
        return _checked(lambda: Uniform(_number(body, "lo", here), _number(body, "hi", here)), here)
    if kind == "exponential":
        body = _mapping(body, here)
        side = body.get("side", "pos")
        if side not in ("pos", "neg"):
            raise here.at(body, "side").error(f"side must be pos or neg, got {side!r}")
        return _checked(
            lambda: Exponential(_number(body, "scale", here), Side(side), _number(body, "offset", here, 0.0)),
            here,
        )

    parts = []
    items = _sequence(body, here)
    for i, item in enumerate(items):
        item_cur = here.item(items, i)
        item = _mapping(item, item_cur)
        parts.append((_number(item, "weight", item_cur), _parse_jumps(item.get("jumps"), item_cur.at(item, "jumps"))))
    return _checked(lambda: Mixture(tuple(parts)), here)


def _parse_tail(value, cur: _Cursor) -> PowerTail:
    doc = _mapping(value, cur)
    return _checked(
        lambda: PowerTail(
            c=_number(doc, "c", cur),
            alpha=_number(doc, "alpha", cur),
            theta=_number(doc, "theta", cur, 0.0),
            cutoff=_number(doc, "cutoff", cur, 0.0),
        ),
        cur,
    )


def parse_measure(value, cur: _Cursor | None = None) -> MeasureSpec:
    cur = cur or _Cursor("measure", getattr(value, "line", None))
    doc = _mapping(value, cur)
    kind = _only_key(doc, ("zero", "atoms", "compound_poisson", "power_law", "sum"), cur)
    here = cur.at(doc, kind)
    body = doc[kind]

    if kind == "zero":
        return ZeroMeasure()
    if kind == "atoms":
        items = _sequence(body, here)
        pairs = []
        for i, item in enumerate(items):
            item_cur = here.item(items, i)
            item = _mapping(item, item_cur)
            pairs.append((_number(item, "x", item_cur), _number(item, "rate", item_cur)))
        return _checked(lambda: Atoms(tuple(pairs)), here)
    if kind == "compound_poisson":
        body = _mapping(body, here)
        rate = _number(body, "rate", here)
        jumps = _parse_jumps(body.get("jumps"), here.at(body, "jumps"))
        return _checked(lambda: CompoundPoisson(rate, jumps), here)
    if kind == "power_law":
        body = _mapping(body, here)
        for key in body:
            if key not in ("pos", "neg"):
                raise here.at(body, key).error("unknown side; expected pos or neg")
        pos = _parse_tail(body["pos"], here.at(body, "pos")) if "pos" in body else PowerTail()
        neg = _parse_tail(body["neg"], here.at(body, "neg")) if "neg" in body else PowerTail()
        return PowerLaw(pos, neg)

    items = _sequence(body, here)
    parts = tuple(parse_measure(item, here.item(items, i)) for i, item in enumerate(items))
    return _checked(lambda: SumMeasure(parts), here)


def parse_model(value, cur: _Cursor | None = None) -> LevyModel:
    cur = cur or _Cursor("model", getattr(value, "line", None))
    doc = _mapping(value, cur)
    sigma2 = _number(doc, "sigma2", cur, 0.0)
    measure = parse_measure(doc.get("measure", {"zero": {}}), cur.at(doc, "measure"))

    drift_cur = cur.at(doc, "drift")
    drift_doc = _mapping(doc.get("drift", {"gamma0": 0.0}), drift_cur)
    kind = _only_key(drift_doc, ("gamma0", "center"), drift_cur)
    value = _number(drift_doc, kind, drift_cur)
    drift = Gamma0(value) if kind == "gamma0" else CenterB(value)
    return _checked(lambda: LevyModel(sigma2, measure, drift), drift_cur)


def parse_query(value, cur: _Cursor) -> ExitQuery:
    doc = _mapping(value, cur)
    return _checked(
        lambda: ExitQuery(
            a=_number(doc, "a", cur),
            b=_number(doc, "b", cur),
            m=_number(doc, "m", cur, 0.0),
            M=_number(doc, "M", cur, math.inf),
        ),
        cur,
    )


# --- scenarios --------------------------------------------------------------


@dataclass(frozen=True)
class Campaign:
    """Monte Carlo parameters of a scenario; None means the configured default."""

    paths: int = DEFAULTS.paths
    horizon: float | None = None
    scheme: Scheme | None = None
    seed: int | None = None
    alpha: float | None = None
    dt: float | None = None
    delta: float | None = None
    gaussian_substitution: bool = True


@dataclass(frozen=True)
class Scenario:
    name: str
    model: LevyModel
    queries: tuple[ExitQuery, ...]
    campaign: Campaign = field(default_factory=Campaign)
    description: str = ""


def parse_campaign(value, cur: _Cursor) -> Campaign:
    doc = _mapping(value, cur)
    scheme = doc.get("scheme")
    if scheme is not None and scheme not in {s.value for s in Scheme}:
        raise cur.at(doc, "scheme").error(f"unknown scheme {scheme!r}")
    paths = _integer(doc, "paths", cur, DEFAULTS.paths)
    if paths <= 0:
        raise cur.at(doc, "paths").error(f"paths must be positive, got {paths}")
    substitute = doc.get("gaussian_substitution", True)
    if not isinstance(substitute, bool):
        raise cur.at(doc, "gaussian_substitution").error("expected true or false")
    optional = {k: _number(doc, k, cur) if k in doc else None for k in ("horizon", "alpha", "dt", "delta")}
    if optional["alpha"] is not None and not 0.0 < optional["alpha"] < 1.0:
        raise cur.at(doc, "alpha").error(f"alpha must lie in (0, 1), got {optional['alpha']}")
    return Campaign(
        paths=paths,
        scheme=Scheme(scheme) if scheme is not None else None,
        seed=_integer(doc, "seed", cur),
        gaussian_substitution=substitute,
        **optional,
    )


def parse_scenario(value, cur: _Cursor) -> Scenario:
    doc = _mapping(value, cur)
    name = doc.get("name")
    if not isinstance(name, str) or not name:
        raise cur.at(doc, "name").error("scenario needs a non-empty name")
    model = parse_model(doc.get("model"), cur.at(doc, "model"))
    q_cur = cur.at(doc, "queries")
    items = _sequence(doc.get("queries", []), q_cur)
    queries = tuple(parse_query(item, q_cur.item(items, i)) for i, item in enumerate(items))
    campaign = parse_campaign(doc.get("campaign"), cur.at(doc, "campaign"))
    return Scenario(name, model, queries, campaign, str(doc.get("description", "")))


def _check_header(doc, source: str) -> None:
    cur = _Cursor("", getattr(doc, "line", None))
    if not isinstance(doc, dict):
        raise SchemaError(f"{source}: expected a mapping at the top level")
    schema = doc.get("schema")
    if schema != SCHEMA_VERSION:
        raise cur.at(doc, "schema").error(f"unsupported schema {schema!r}; expected {SCHEMA_VERSION}")


def loads_model(text: str) -> LevyModel:
    doc = _load_yaml(text)
    _check_header(doc, "model document")
    if "model" not in doc:
        raise SchemaError("missing top-level model", doc.line, "model")
    return parse_model(doc["model"], _Cursor("model", doc.key_lines["model"]))


def loads_scenarios(text: str) -> list[Scenario]:
    doc = _load_yaml(text)
    _check_header(doc, "scenario document")
    cur = _Cursor("scenarios", doc.key_lines.get("scenarios", doc.line))
    items = _sequence(doc.get("scenarios"), cur)
    scenarios = []
    seen: set[str] = set()
    for i, item in enumerate(items):
        item_cur = cur.item(items, i)
        scenario = parse_scenario(item, item_cur)
        if scenario.name in seen:
            raise item_cur.at(item, "name").error(f"duplicate scenario name {scenario.name!r}")
        seen.add(scenario.name)
        scenarios.append(scenario)
    return scenarios


def load_model(path: Path) -> LevyModel:
    """Parse a model document; a scenario document yields its first model."""
    text = Path(path).read_text()
    doc = _load_yaml(text)
    if isinstance(doc, dict) and "scenarios" in doc and "model" not in doc:
        scenarios = loads_scenarios(text)
        if not scenarios:
            raise SchemaError("scenario document has no scenarios", path="scenarios")
        return scenarios[0].model
    return loads_model(text)


def load_scenarios(path: Path) -> list[Scenario]:
    return loads_scenarios(Path(path).read_text())


# --- writing ----------------------------------------------------------------


def _dump_jumps(jumps) -> dict:
    if isinstance(jumps, Uniform):
        return {"uniform": {"lo": jumps.lo, "hi": jumps.hi}}
    if isinstance(jumps, Exponential):
        return {"exponential": {"scale": jumps.scale, "side": jumps.side.value, "offset": jumps.offset}}
    return {"mixture": [{"weight": w, "jumps": _dump_jumps(d)} for w, d in jumps.parts]}


def _dump_tail(tail: PowerTail) -> dict:
    return {"c": tail.c, "alpha": tail.alpha, "theta": tail.theta, "cutoff": tail.cutoff}


def dump_measure(measure: MeasureSpec) -> dict:
    if isinstance(measure, ZeroMeasure):
        return {"zero": {}}
    if isinstance(measure, Atoms):
        return {"atoms": [{"x": x, "rate": r} for x, r in measure.atoms]}
    if isinstance(measure, CompoundPoisson):
        return {"compound_poisson": {"rate": measure.rate, "jumps": _dump_jumps(measure.jumps)}}
    if isinstance(measure, PowerLaw):
        return {"power_law": {"pos": _dump_tail(measure.pos), "neg": _dump_tail(measure.neg)}}
    return {"sum": [dump_measure(p) for p in measure.parts]}


def dump_model(model: LevyModel) -> dict:
    drift_key = "gamma0" if isinstance(model.drift, Gamma0) else "center"
    return {
        "sigma2": model.sigma2,
        "measure": dump_measure(model.measure),
        "drift": {drift_key: model.drift.value},
    }


def dump_query(query: ExitQuery) -> dict:
    return {"a": query.a, "b": query.b, "m": query.m, "M": query.M}


def dump_campaign(campaign: Campaign) -> dict:
    doc = {"paths": campaign.paths, "gaussian_substitution": campaign.gaussian_substitution}
    for key in ("horizon", "seed", "alpha", "dt", "delta"):
        if getattr(campaign, key) is not None:
            doc[key] = getattr(campaign, key)
    if campaign.scheme is not None:
        doc["scheme"] = campaign.scheme.value
    return doc


def dump_scenario(scenario: Scenario) -> dict:
    doc = {
        "name": scenario.name,
        "model": dump_model(scenario.model),
        "queries": [dump_query(q) for q in scenario.queries],
        "campaign": dump_campaign(scenario.campaign),
    }
    if scenario.description:
        doc["description"] = scenario.description
    return doc


def dumps_model(model: LevyModel) -> str:
    return yaml.safe_dump({"schema": SCHEMA_VERSION, "model": dump_model(model)}, sort_keys=False)


def dumps_scenarios(scenarios: list[Scenario]) -> str:
    doc = {"schema": SCHEMA_VERSION, "scenarios": [dump_scenario(s) for s in scenarios]}
    return yaml.safe_dump(doc, sort_keys=False)
