"""First exits of Levy paths from the annulus (-b, a).

Three schemes:

- exact: sigma2 = 0 and finite activity. Event-driven; between jumps the
  path is linear, so drift crossings are solved in closed form.
- grid: a Gaussian part on a uniform grid, with the jump instants of the
  finite-activity part merged into the grid. Exits are checked at grid
  points and jump instants only.
- truncated: infinite activity. Jumps below delta are dropped or replaced
  by a Brownian term of matching variance, then one of the two schemes
  above runs on the surrogate.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from . import measures
from .config import DEFAULTS
from .jumps import JumpLaw
from .model import CenterB, Gamma0, LevyModel
from .streams import path_stream

DELTA_FLOOR = 1e-12
NEGLECTED_FRACTION = 1e-3
FIRST_CHUNK = 256
MAX_CHUNK = 65536

TraceFn = Callable[[float, float], None]


class NotInfiniteActivity(ValueError):
    """Truncation requested for a model that already has finite activity."""


class PlanError(ValueError):
    """Simulation plan is incompatible with the model it is applied to."""


class Scheme(str, Enum):
    EXACT = "exact"
    GRID = "grid"
    TRUNCATED = "truncated"


class Exit(str, Enum):
    UP = "up"
    DOWN = "down"
    CENSORED = "censored"


@dataclass(frozen=True)
class SimPlan:
    scheme: Scheme
    horizon: float
    dt: float | None = None
    delta: float | None = None
    gaussian_substitution: bool = False

    def __post_init__(self):
        if not (math.isfinite(self.horizon) and self.horizon > 0.0):
            raise PlanError(f"horizon must be finite and > 0, got {self.horizon}")
        if self.dt is not None and not self.dt > 0.0:
            raise PlanError(f"dt must be > 0, got {self.dt}")
        if self.scheme is Scheme.TRUNCATED:
            if self.delta is None or not self.delta > 0.0:
                raise PlanError("truncated scheme needs delta > 0")
        elif self.delta is not None:
            raise PlanError(f"delta only applies to the truncated scheme, not {self.scheme.value}")
        if self.scheme is Scheme.EXACT and self.dt is not None:
            raise PlanError("exact scheme has no grid step")
        if self.scheme is Scheme.GRID and self.dt is None:
            raise PlanError("grid scheme needs dt")

    @property
    def exact(self) -> bool:
        return self.scheme is Scheme.EXACT


@dataclass(frozen=True)
class PlanHints:
    """Requested plan parameters; anything left as None is chosen automatically."""

    scheme: Scheme | None = None
    a: float = 1.0
    b: float = 1.0
    horizon: float | None = None
    dt: float | None = None
    delta: float | None = None
    gaussian_substitution: bool = True
    max_jump_rate: float = DEFAULTS.max_jump_rate


@dataclass(frozen=True)
class ExitRecord:
    """First exit, or the position at the horizon for a censored path."""

    outcome: Exit
    time: float
    value: float
    scheme: Scheme


def _supports(model: LevyModel, scheme: Scheme) -> bool:
    if scheme is Scheme.TRUNCATED:
        return not model.finite_activity
    if not model.finite_activity:
        return False
    return (model.sigma2 == 0.0) == (scheme is Scheme.EXACT)


def choose_delta(
    model: LevyModel,
    a: float,
    b: float,
    horizon: float,
    gaussian_substitution: bool = True,
    max_jump_rate: float = DEFAULTS.max_jump_rate,
) -> float:
    """Largest power of two (<= 1) whose neglected small-jump deviation is below 1e-3 * min(a, b).

    With Gaussian substitution the small jumps are not lost, so delta is
    raised again until the retained jump rate is at most max_jump_rate.
    """
    target = NEGLECTED_FRACTION * min(a, b)
    delta = 1.0
    while delta > DELTA_FLOOR:
        neglected = math.sqrt(measures.truncated_second_moment(model.measure, delta) * horizon)
        if neglected < target:
            break
        delta /= 2.0
    if gaussian_substitution:
        while delta < 1.0 and measures.large_jump_law(model.measure, delta).rate > max_jump_rate:
            delta *= 2.0
    return delta


def plan(model: LevyModel, hints: PlanHints = PlanHints()) -> SimPlan:
    """Pick a scheme for the model, honouring compatible hints.

    A truncated plan whose retained jump rate exceeds hints.max_jump_rate is
    refused with PlanError. With Gaussian substitution that only happens when
    even delta=1 keeps too many jumps; without it the deviation rule alone can
    push delta low enough to need millions of jumps per unit time.
    """
    if not model.finite_activity:
        auto = Scheme.TRUNCATED
    elif model.sigma2 == 0.0:
        auto = Scheme.EXACT
    else:
        auto = Scheme.GRID
    scheme = hints.scheme if hints.scheme is not None and _supports(model, hints.scheme) else auto
    horizon = hints.horizon if hints.horizon is not None else DEFAULTS.horizon_for(0.0, math.inf)

    if scheme is Scheme.EXACT:
        return SimPlan(scheme, horizon)
    if scheme is Scheme.GRID:
        return SimPlan(scheme, horizon, dt=hints.dt or DEFAULTS.dt)

    substitute = hints.gaussian_substitution
    delta = hints.delta or choose_delta(model, hints.a, hints.b, horizon, substitute, hints.max_jump_rate)
    rate = measures.large_jump_law(model.measure, delta).rate
    if rate > hints.max_jump_rate:
        hint = "" if substitute else "; enable gaussian_substitution or raise max_jump_rate"
        raise PlanError(
            f"truncation at delta={delta:g} keeps {rate:.4g} jumps per unit time, "
            f"above the cap {hints.max_jump_rate:g}{hint}"
        )
    gaussian = model.sigma2 > 0.0 or substitute
    return SimPlan(
        scheme,
        horizon,
        dt=(hints.dt or DEFAULTS.dt) if gaussian else None,
        delta=delta,
        gaussian_substitution=substitute,
    )


@lru_cache(maxsize=128)
def substitute_model(model: LevyModel, delta: float, gaussian_substitution: bool = True) -> LevyModel:
    """Finite-activity surrogate keeping jumps with |x| >= delta."""
    if model.finite_activity:
        raise NotInfiniteActivity("model already has finite activity; simulate it directly")
    if not delta > 0.0:
        raise PlanError(f"delta must be > 0, got {delta}")

    sigma2 = model.sigma2
    if gaussian_substitution:
        sigma2 += measures.truncated_second_moment(model.measure, delta)

    if isinstance(model.drift, CenterB):
        # Retained jumps in [delta, 1] were compensated under the center convention
        drift = Gamma0(model.drift.value - measures.first_moment_between(model.measure, delta, 1.0))
    else:
        drift = model.drift
    return LevyModel(sigma2, model.measure.restricted(delta), drift)


def _resolve(model: LevyModel, plan: SimPlan) -> LevyModel:
    if plan.scheme is Scheme.TRUNCATED:
        return substitute_model(model, plan.delta, plan.gaussian_substitution)
    if not _supports(model, plan.scheme):
        raise PlanError(f"{plan.scheme.value} scheme does not apply to this model")
    return model


def simulate_exit(
    model: LevyModel,
    a: float,
    b: float,
    plan: SimPlan,
    seed: int,
    path: int = 0,
    trace: TraceFn | None = None,
) -> ExitRecord:
    """Simulate one path until it leaves (-b, a) or reaches the horizon.

    ``seed`` keys the stream family and ``path`` selects the stream, so the
    record is a pure function of the arguments.
    """
    if not (a > 0.0 and b > 0.0):
        raise ValueError(f"annulus needs a > 0 and b > 0, got a={a}, b={b}")
    surrogate = _resolve(model, plan)
    law = measures.large_jump_law(surrogate.measure, 0.0)
    rng = path_stream(seed, path)

    if surrogate.sigma2 == 0.0:
        return _event_exit(surrogate.gamma0, law, a, b, plan, rng, trace)
    if plan.dt is None:
        raise PlanError("a Gaussian part is simulated but the plan has no dt")
    return _grid_exit(surrogate, law, a, b, plan, rng, trace)


def _event_exit(
    gamma: float,
    law: JumpLaw,
    a: float,
    b: float,
    plan: SimPlan,
    rng: np.random.Generator,
    trace: TraceFn | None,
) -> ExitRecord:
    horizon = plan.horizon
    t, x = 0.0, 0.0
    if trace:
        trace(t, x)

    while True:
        wait = rng.exponential(1.0 / law.rate) if law.rate > 0.0 else math.inf
        if gamma > 0.0:
            cross = (a - x) / gamma
        elif gamma < 0.0:
            cross = (x + b) / -gamma
        else:
            cross = math.inf

        # The drift reaches the boundary no later than the next jump
        if cross <= wait:
            if t + cross > horizon:
                return _censored(x + gamma * (horizon - t), horizon, plan, trace)
            outcome, value = (Exit.UP, a) if gamma > 0.0 else (Exit.DOWN, -b)
            time = t + cross
            if trace:
                trace(time, value)
            return ExitRecord(outcome, time, value, plan.scheme)

        if t + wait > horizon:
            return _censored(x + gamma * (horizon - t), horizon, plan, trace)
        t += wait
        x += gamma * wait + law.sample_one(rng)
        if trace:
            trace(t, x)
        if x >= a:
            return ExitRecord(Exit.UP, t, x, plan.scheme)
        if x <= -b:
            return ExitRecord(Exit.DOWN, t, x, plan.scheme)


def _censored(value: float, horizon: float, plan: SimPlan, trace: TraceFn | None) -> ExitRecord:
    if trace:
        trace(horizon, value)
    return ExitRecord(Exit.CENSORED, horizon, value, plan.scheme)


def _grid_exit(
    model: LevyModel,
    law: JumpLaw,
    a: float,
    b: float,
    plan: SimPlan,
    rng: np.random.Generator,
    trace: TraceFn | None,
) -> ExitRecord:
    gamma, vol = model.gamma0, math.sqrt(model.sigma2)
    dt, horizon = plan.dt, plan.horizon
    total_steps = max(1, math.ceil(horizon / dt - 1e-9))

    t, x = 0.0, 0.0
    done = 0
    chunk = FIRST_CHUNK
    if trace:
        trace(t, x)

    while done < total_steps:
        n = min(chunk, total_steps - done)
        grid = np.minimum(np.arange(done + 1, done + n + 1) * dt, horizon)
        t_end = float(grid[-1])

        n_jumps = int(rng.poisson(law.rate * (t_end - t))) if law.rate > 0.0 else 0
        jump_times = np.sort(rng.uniform(t, t_end, n_jumps))
        sizes = law.sample(rng, n_jumps)

        times = np.concatenate([grid, jump_times])
        jumps = np.concatenate([np.zeros(n), sizes])
        order = np.argsort(times, kind="stable")
        times, jumps = times[order], jumps[order]
        steps = np.diff(times, prepend=t)
        moves = gamma * steps + vol * np.sqrt(steps) * rng.standard_normal(times.size) + jumps
        values = x + np.cumsum(moves)

        hit = (values >= a) | (values <= -b)
        last = int(np.argmax(hit)) if hit.any() else times.size - 1
        if trace:
            for s, v in zip(times[: last + 1], values[: last + 1]):
                trace(float(s), float(v))
        if hit.any():
            value = float(values[last])
            outcome = Exit.UP if value >= a else Exit.DOWN
            return ExitRecord(outcome, float(times[last]), value, plan.scheme)

        t, x = t_end, float(values[-1])
        done += n
        chunk = min(2 * chunk, MAX_CHUNK)

    return ExitRecord(Exit.CENSORED, horizon, x, plan.scheme)
