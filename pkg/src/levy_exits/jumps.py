"""Jump-size samplers for the finite-activity part of a Levy measure.

Every component draws from a normalized restriction of one family to
{|x| >= delta}. Components are immutable and take the generator explicitly,
so one instance can be shared by any number of workers.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .integrals import power_moment


def _sign(positive: bool) -> float:
    return 1.0 if positive else -1.0


@dataclass(frozen=True)
class PointJumps:
    """Finitely many jump sizes with given probabilities."""

    locations: tuple[float, ...]
    probabilities: tuple[float, ...]
    _cumulative: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        cumulative = np.cumsum(np.asarray(self.probabilities, dtype=float))
        cumulative /= cumulative[-1]
        cumulative.flags.writeable = False
        object.__setattr__(self, "_cumulative", cumulative)

    def side_fraction(self, positive: bool) -> float:
        total = sum(self.probabilities)
        return sum(p for x, p in zip(self.locations, self.probabilities) if (x > 0) == positive) / total

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if len(self.locations) == 1:
            return np.full(n, self.locations[0])
        idx = np.searchsorted(self._cumulative, rng.random(n), side="right")
        return np.asarray(self.locations)[idx]

    def sample_one(self, rng: np.random.Generator) -> float:
        if len(self.locations) == 1:
            return self.locations[0]
        idx = int(np.searchsorted(self._cumulative, rng.random(), side="right"))
        return self.locations[idx]


@dataclass(frozen=True)
class UniformJumps:
    """Uniform jump sizes on [lo, hi], an interval on one half-line."""

    lo: float
    hi: float

    def side_fraction(self, positive: bool) -> float:
        return 1.0 if (self.hi > 0) == positive else 0.0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, n)

    def sample_one(self, rng: np.random.Generator) -> float:
        return float(rng.uniform(self.lo, self.hi))


@dataclass(frozen=True)
class ExponentialJumps:
    """Jump magnitudes start + Exp(scale), with a fixed sign."""

    start: float
    scale: float
    positive: bool

    def side_fraction(self, positive: bool) -> float:
        return 1.0 if positive == self.positive else 0.0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return _sign(self.positive) * (self.start + rng.exponential(self.scale, n))

    def sample_one(self, rng: np.random.Generator) -> float:
        return _sign(self.positive) * (self.start + float(rng.exponential(self.scale)))


@dataclass(frozen=True)
class TemperedPowerJumps:
    """Magnitudes with density proportional to x^(-1-alpha) e^(-theta x) on [delta, inf).

    Sampled by composition: a truncated power-law body on [delta, knee] with
    knee = max(delta, 1/theta), accepted with probability e^(-theta (x - delta)),
    and a tail knee + Exp(1/theta) accepted with probability (knee/x)^(1+alpha).
    Both acceptance rates are bounded away from zero.
    """

    alpha: float
    theta: float
    delta: float
    positive: bool
    _knee: float = field(init=False, repr=False, compare=False)
    _p_body: float = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        knee = max(self.delta, 1.0 / self.theta) if self.theta > 0 else math.inf
        body = power_moment(1.0, -1.0 - self.alpha, self.theta, self.delta, knee)
        tail = power_moment(1.0, -1.0 - self.alpha, self.theta, knee, math.inf) if self.theta > 0 else 0.0
        object.__setattr__(self, "_knee", knee)
        object.__setattr__(self, "_p_body", body / (body + tail))

    def side_fraction(self, positive: bool) -> float:
        return 1.0 if positive == self.positive else 0.0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        in_body = rng.random(n) < self._p_body
        out = np.empty(n)
        k = int(in_body.sum())
        out[in_body] = self._body(rng, k)
        out[~in_body] = self._tail(rng, n - k)
        return _sign(self.positive) * out

    def sample_one(self, rng: np.random.Generator) -> float:
        return float(self.sample(rng, 1)[0])

    def _body(self, rng: np.random.Generator, k: int) -> np.ndarray:
        result = np.empty(k)
        filled = 0
        while filled < k:
            need = k - filled
            u = rng.random(need)
            x = self._truncated_power(u)
            if self.theta > 0:
                x = x[rng.random(need) < np.exp(-self.theta * (x - self.delta))]
            result[filled : filled + x.size] = x
            filled += x.size
        return result

    def _tail(self, rng: np.random.Generator, k: int) -> np.ndarray:
        result = np.empty(k)
        filled = 0
        knee = self._knee
        while filled < k:
            need = k - filled
            x = knee + rng.exponential(1.0 / self.theta, need)
            x = x[rng.random(need) < (knee / x) ** (1.0 + self.alpha)]
            result[filled : filled + x.size] = x
            filled += x.size
        return result

    def _truncated_power(self, u: np.ndarray) -> np.ndarray:
        """Inverse transform of x^(-1-alpha) restricted to [delta, knee]."""
        delta, knee, alpha = self.delta, self._knee, self.alpha
        if alpha == 0.0:
            return delta * (knee / delta) ** u
        top = delta**-alpha
        bottom = 0.0 if math.isinf(knee) else knee**-alpha
        return (top - u * (top - bottom)) ** (-1.0 / alpha)


JumpComponent = PointJumps | UniformJumps | ExponentialJumps | TemperedPowerJumps


@dataclass(frozen=True)
class JumpLaw:
    """Total rate of {|x| >= delta} and a sampler of the normalized restriction."""

    rate: float
    rates: tuple[float, ...] = ()
    components: tuple[JumpComponent, ...] = ()
    _cumulative: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.rates:
            cumulative = np.cumsum(np.asarray(self.rates, dtype=float))
            cumulative /= cumulative[-1]
            cumulative[-1] = 1.0
        else:
            cumulative = np.zeros(0)
        cumulative.flags.writeable = False
        object.__setattr__(self, "_cumulative", cumulative)

    def side_rate(self, positive: bool) -> float:
        """Rate of jumps |x| >= delta landing on the given half-line."""
        return sum(r * c.side_fraction(positive) for r, c in zip(self.rates, self.components))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if n == 0 or not self.components:
            return np.zeros(n)
        if len(self.components) == 1:
            return self.components[0].sample(rng, n)
        which = np.searchsorted(self._cumulative, rng.random(n), side="right")
        out = np.empty(n)
        for k, component in enumerate(self.components):
            mask = which == k
            count = int(mask.sum())
            if count:
                out[mask] = component.sample(rng, count)
        return out

    def sample_one(self, rng: np.random.Generator) -> float:
        if len(self.components) == 1:
            return self.components[0].sample_one(rng)
        k = int(np.searchsorted(self._cumulative, rng.random(), side="right"))
        return self.components[k].sample_one(rng)
