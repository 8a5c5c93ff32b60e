"""Built-in witness models and verification scenarios.

The witnesses separate every pair of condition sets (proper, before, after,
full): for each unordered pair one witness satisfies exactly one of them.
The verification scenarios exercise every branch of ``decide`` on models
whose exit laws are known in closed form.
"""

import math
from dataclasses import dataclass

from .classifier import Classification, ExitQuery, classify
from .measures import Atoms, CompoundPoisson, Exponential, PowerLaw, PowerTail, Side, ZeroMeasure
from .model import CenterB, Gamma0, LevyModel
from .parser import Campaign, Scenario
from .sampler import Scheme

INF = math.inf

# Drift +1 against a single downward jump of size 2, rate 1.
M_A = LevyModel(0.0, Atoms.of((-2.0, 1.0)), Gamma0(1.0))

ONE_SIDED_UP_DRIFT_DOWN = LevyModel(0.0, Atoms.of((1.0, 1.0)), Gamma0(-1.0))
SYMMETRIC_JUMPS = LevyModel(0.0, Atoms.of((-1.0, 1.0), (1.0, 1.0)), Gamma0(0.0))
EXPONENTIAL_UP_DRIFT_DOWN = LevyModel(0.0, CompoundPoisson(1.0, Exponential(1.0, Side.POS)), Gamma0(-1.0))
BROWNIAN = LevyModel(sigma2=1.0)
SYMMETRIC_STABLE = LevyModel(
    0.0,
    PowerLaw(pos=PowerTail(1.0, 1.5), neg=PowerTail(1.0, 1.5)),
    CenterB(0.0),
)


@dataclass(frozen=True)
class Witness:
    name: str
    model: LevyModel
    note: str

    @property
    def classification(self) -> Classification:
        return classify(self.model)


WITNESSES: tuple[Witness, ...] = (
    Witness(
        "proper-not-before",
        ONE_SIDED_UP_DRIFT_DOWN,
        "upward jumps against a downward drift: proper, but no early two-sided exits",
    ),
    Witness(
        "before-not-after",
        LevyModel(0.0, Atoms.of((-2.0, 1.0), (2.0, 1.0)), Gamma0(1.0)),
        "two-sided jumps bounded away from 0 with drift: exits only early",
    ),
    Witness(
        "after-not-before",
        EXPONENTIAL_UP_DRIFT_DOWN,
        "small upward jumps against a downward drift: exits only late",
    ),
    Witness("every-window", SYMMETRIC_JUMPS, "symmetric jumps, no drift: every window"),
    Witness(
        "subordinator-confinable",
        LevyModel(0.0, Atoms.of((1.0, 1.0)), Gamma0(0.0)),
        "pure upward jumps: monotone yet confinable",
    ),
    Witness("pure-drift", LevyModel(0.0, ZeroMeasure(), Gamma0(1.0)), "deterministic motion"),
)


# Older labels still accepted by witness()
WITNESS_ALIASES = {
    "prop1-not-prop2": "proper-not-before",
    "corollary": "every-window",
}


def witness(name: str) -> Witness:
    name = WITNESS_ALIASES.get(name, name)
    for w in WITNESSES:
        if w.name == name:
            return w
    raise KeyError(name)


def _exact(paths: int = 100_000) -> Campaign:
    return Campaign(paths=paths, scheme=Scheme.EXACT)


BUILTIN_SCENARIOS: tuple[Scenario, ...] = (
    Scenario(
        "ma-reference",
        M_A,
        (
            ExitQuery(1.0, 1.0, 0.0, INF),
            ExitQuery(1.0, 1.0, 0.0, 0.9),
            ExitQuery(1.0, 1.0, 0.0, 1.1),
            ExitQuery(1.0, 1.0, 1.0, INF),
            ExitQuery(1.0, 1.0, 0.5, INF),
            ExitQuery(1.0, 1.0, 0.5, 1.5),
            ExitQuery(1.0, 1.0, 0.5, 0.9),
            ExitQuery(1.0, 2.0, 1.0, INF),
        ),
        _exact(),
        "risk reserve: premium income at rate 1, claims of size 2",
    ),
    Scenario(
        "symmetric-jumps",
        SYMMETRIC_JUMPS,
        (ExitQuery(0.5, 0.5, 1.0, 2.0), ExitQuery(0.5, 0.5, 0.0, 1.0)),
        _exact(),
        "two-sided barrier on a driftless symmetric jump process",
    ),
    Scenario(
        "upward-jumps-downward-drift",
        ONE_SIDED_UP_DRIFT_DOWN,
        (ExitQuery(1.0, 1.0, 0.0, 1.5), ExitQuery(0.5, 0.5, 1.0, INF), ExitQuery(0.5, 0.5, 0.25, INF)),
        _exact(),
        "dual risk process: expenses at rate 1, unit gains",
    ),
    Scenario(
        "gapped-two-sided-jumps",
        witness("before-not-after").model,
        (ExitQuery(1.0, 1.0, 0.5, INF), ExitQuery(1.0, 1.0, 1.0, INF)),
        _exact(),
        "upward drift with jumps of size 2 either way",
    ),
    Scenario(
        "exponential-upward-jumps",
        EXPONENTIAL_UP_DRIFT_DOWN,
        (ExitQuery(1.0, 1.0, 1.0, INF), ExitQuery(1.0, 1.0, 0.0, 0.5)),
        _exact(),
        "dual risk process with exponential gains",
    ),
    Scenario(
        "subordinator",
        witness("subordinator-confinable").model,
        (ExitQuery(1.0, 1.0, 0.0, INF),),
        _exact(),
    ),
    Scenario("zero-process", LevyModel(), (ExitQuery(1.0, 1.0, 0.0, INF),), _exact(10_000)),
    Scenario(
        "brownian",
        BROWNIAN,
        (ExitQuery(1.0, 1.0, 0.0, INF),),
        Campaign(paths=1_000, scheme=Scheme.GRID, dt=1e-3),
        "two-sided barrier on standard Brownian motion",
    ),
    Scenario(
        "symmetric-stable",
        SYMMETRIC_STABLE,
        (ExitQuery(1.0, 1.0, 0.0, INF),),
        Campaign(paths=1_000, scheme=Scheme.TRUNCATED, dt=1e-3),
        "infinite-variation jumps on both sides",
    ),
)
