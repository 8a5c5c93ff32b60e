"""Parametric Levy measures with exact metadata.

A MeasureSpec is one of a closed set of families. Each family answers the
measure-theoretic questions the classifier needs (which half-lines are
charged, whether the small-jump variation is finite, where the support
starts) from its parameters alone, and hands the sampler an exact law for
its jumps above a truncation level.
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from functools import lru_cache

from scipy import special

from .integrals import power_moment
from .jumps import ExponentialJumps, JumpLaw, PointJumps, TemperedPowerJumps, UniformJumps


class MeasureError(ValueError):
    """Parameters do not define an admissible Levy measure."""


class InfiniteRate(ValueError):
    """The jump rate above the requested level is infinite."""


class Side(str, Enum):
    NEG = "neg"
    POS = "pos"

    @property
    def positive(self) -> bool:
        return self is Side.POS

    @property
    def sign(self) -> float:
        return 1.0 if self is Side.POS else -1.0

    @property
    def opposite(self) -> "Side":
        return Side.NEG if self is Side.POS else Side.POS


@dataclass(frozen=True)
class SideMass:
    """Mass of one open half-line, in rate units; may be +inf."""

    side: Side
    mass: float

    def __post_init__(self):
        if not self.mass >= 0.0:
            raise MeasureError(f"half-line mass must be >= 0, got {self.mass}")


@dataclass(frozen=True)
class SupportGap:
    """Distance from 0 to the support of the measure restricted to one side."""

    side: Side
    distance: float

    @property
    def zero_in_support(self) -> bool:
        return self.distance == 0.0


def _finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise MeasureError(f"{name} must be finite, got {value}")
    return value


# --- jump-size distributions of compound Poisson parts ---------------------


@dataclass(frozen=True)
class Uniform:
    """Uniform jump sizes on [lo, hi]; 0 may be an endpoint but not interior."""

    lo: float
    hi: float

    def __post_init__(self):
        _finite("uniform.lo", self.lo)
        _finite("uniform.hi", self.hi)
        if not self.lo < self.hi:
            raise MeasureError(f"uniform needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.lo < 0.0 < self.hi:
            raise MeasureError(f"uniform support [{self.lo}, {self.hi}] straddles 0")

    @property
    def side(self) -> Side:
        return Side.POS if self.lo >= 0.0 else Side.NEG

    def _magnitudes(self) -> tuple[float, float]:
        return min(abs(self.lo), abs(self.hi)), max(abs(self.lo), abs(self.hi))

    def _overlap(self, lo: float, hi: float) -> tuple[float, float]:
        r_lo, r_hi = self._magnitudes()
        return max(r_lo, lo), min(r_hi, hi)

    def prob(self, side: Side) -> float:
        return 1.0 if side is self.side else 0.0

    def gap(self, side: Side) -> float | None:
        return self._magnitudes()[0] if side is self.side else None

    def moment2_below(self, delta: float) -> float:
        u, v = self._overlap(0.0, delta)
        if v <= u:
            return 0.0
        return (v**3 - u**3) / (3.0 * (self.hi - self.lo))

    def moment1_between(self, lo: float, hi: float) -> float:
        u, v = self._overlap(lo, hi)
        if v <= u:
            return 0.0
        return self.side.sign * (v**2 - u**2) / (2.0 * (self.hi - self.lo))

    def restricted(self, delta: float) -> list[tuple[float, "JumpDistribution"]]:
        u, v = self._overlap(delta, math.inf)
        if v <= u:
            return []
        part = Uniform(u, v) if self.side is Side.POS else Uniform(-v, -u)
        return [((v - u) / (self.hi - self.lo), part)]

    def mirrored(self) -> "Uniform":
        return Uniform(-self.hi, -self.lo)

    def scaled(self, k: float) -> "Uniform":
        return Uniform(k * self.lo, k * self.hi)

    def component(self) -> UniformJumps:
        return UniformJumps(self.lo, self.hi)


@dataclass(frozen=True)
class Exponential:
    """Jump magnitudes offset + Exp(scale) on one side; offset 0 reaches the origin."""

    scale: float
    side: Side = Side.POS
    offset: float = 0.0

    def __post_init__(self):
        if not _finite("exponential.scale", self.scale) > 0.0:
            raise MeasureError(f"exponential.scale must be > 0, got {self.scale}")
        if not _finite("exponential.offset", self.offset) >= 0.0:
            raise MeasureError(f"exponential.offset must be >= 0, got {self.offset}")

    def _tail(self, r: float) -> float:
        """P(|X| >= r)."""
        return math.exp(-max(r - self.offset, 0.0) / self.scale)

    def prob(self, side: Side) -> float:
        return 1.0 if side is self.side else 0.0

    def gap(self, side: Side) -> float | None:
        return self.offset if side is self.side else None

    def _moment(self, order: int, lo: float, hi: float) -> float:
        """E[|X|^order; lo <= |X| <= hi] for order 1 or 2."""
        lo, hi = max(lo, self.offset), hi
        if hi <= lo:
            return 0.0
        # |X| = offset + E, expand the power in E
        s, o = self.scale, self.offset
        z_lo, z_hi = (lo - o) / s, (hi - o) / s
        raw = [
            _gamma_piece(1, z_lo, z_hi),
            s * _gamma_piece(2, z_lo, z_hi),
            2.0 * s * s * _gamma_piece(3, z_lo, z_hi),
        ]
        if order == 1:
            return o * raw[0] + raw[1]
        return o * o * raw[0] + 2.0 * o * raw[1] + raw[2]

    def moment2_below(self, delta: float) -> float:
        return self._moment(2, 0.0, delta)

    def moment1_between(self, lo: float, hi: float) -> float:
        return self.side.sign * self._moment(1, lo, hi)

    def restricted(self, delta: float) -> list[tuple[float, "JumpDistribution"]]:
        if delta <= self.offset:
            return [(1.0, self)]
        return [(self._tail(delta), replace(self, offset=delta))]

    def mirrored(self) -> "Exponential":
        return replace(self, side=self.side.opposite)

    def scaled(self, k: float) -> "Exponential":
        return replace(self, scale=k * self.scale, offset=k * self.offset)

    def component(self) -> ExponentialJumps:
        return ExponentialJumps(self.offset, self.scale, self.side.positive)


def _gamma_piece(shape: int, z_lo: float, z_hi: float) -> float:
    """Regularized lower incomplete gamma P(shape, z_hi) - P(shape, z_lo)."""
    if z_lo > shape:
        return float(special.gammaincc(shape, z_lo) - special.gammaincc(shape, z_hi))
    return float(special.gammainc(shape, z_hi) - special.gammainc(shape, z_lo))


@dataclass(frozen=True)
class Mixture:
    """Weighted mixture of uniform and exponential jump distributions."""

    parts: tuple[tuple[float, "Uniform | Exponential"], ...]

    def __post_init__(self):
        if not self.parts:
            raise MeasureError("mixture needs at least one part")
        for weight, _ in self.parts:
            if not _finite("mixture.weight", weight) > 0.0:
                raise MeasureError(f"mixture weights must be > 0, got {weight}")

    def _weighted(self):
        total = sum(w for w, _ in self.parts)
        return [(w / total, d) for w, d in self.parts]

    def prob(self, side: Side) -> float:
        return sum(w * d.prob(side) for w, d in self._weighted())

    def gap(self, side: Side) -> float | None:
        gaps = [g for _, d in self.parts if (g := d.gap(side)) is not None]
        return min(gaps) if gaps else None

    def moment2_below(self, delta: float) -> float:
        return sum(w * d.moment2_below(delta) for w, d in self._weighted())

    def moment1_between(self, lo: float, hi: float) -> float:
        return sum(w * d.moment1_between(lo, hi) for w, d in self._weighted())

    def restricted(self, delta: float) -> list[tuple[float, "JumpDistribution"]]:
        return [(w * p, part) for w, d in self._weighted() for p, part in d.restricted(delta)]

    def mirrored(self) -> "Mixture":
        return Mixture(tuple((w, d.mirrored()) for w, d in self.parts))

    def scaled(self, k: float) -> "Mixture":
        return Mixture(tuple((w, d.scaled(k)) for w, d in self.parts))


JumpDistribution = Uniform | Exponential | Mixture


# --- measure families -------------------------------------------------------


@dataclass(frozen=True)
class ZeroMeasure:
    """No jumps."""

    def side_mass(self, side: Side) -> float:
        return 0.0

    def variation_finite(self) -> bool:
        return True

    def finite_activity(self) -> bool:
        return True

    def gap(self, side: Side) -> float | None:
        return None

    def second_moment_below(self, delta: float) -> float:
        return 0.0

    def first_moment_between(self, lo: float, hi: float) -> float:
        return 0.0

    def jump_parts(self, delta: float) -> list:
        return []

    def restricted(self, delta: float) -> "MeasureSpec":
        return self

    def mirrored(self) -> "ZeroMeasure":
        return self

    def scaled(self, k: float) -> "ZeroMeasure":
        return self

    def time_scaled(self, c: float) -> "ZeroMeasure":
        return self


@dataclass(frozen=True)
class Atoms:
    """Point masses: (location, rate) pairs, location != 0, rate > 0."""

    atoms: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.atoms:
            raise MeasureError("atoms needs at least one (location, rate) pair")
        for x, rate in self.atoms:
            if _finite("atom location", x) == 0.0:
                raise MeasureError("atom location must be != 0")
            if not _finite("atom rate", rate) > 0.0:
                raise MeasureError(f"atom rate must be > 0, got {rate}")

    @classmethod
    def of(cls, *pairs: tuple[float, float]) -> "Atoms":
        return cls(tuple((float(x), float(r)) for x, r in pairs))

    def _on(self, side: Side):
        return [(x, r) for x, r in self.atoms if (x > 0) == side.positive]

    def side_mass(self, side: Side) -> float:
        return sum(r for _, r in self._on(side))

    def variation_finite(self) -> bool:
        return True

    def finite_activity(self) -> bool:
        return True

    def gap(self, side: Side) -> float | None:
        on_side = self._on(side)
        return min(abs(x) for x, _ in on_side) if on_side else None

    def second_moment_below(self, delta: float) -> float:
        return sum(r * x * x for x, r in self.atoms if abs(x) < delta)

    def first_moment_between(self, lo: float, hi: float) -> float:
        return sum(r * x for x, r in self.atoms if lo <= abs(x) <= hi)

    def jump_parts(self, delta: float) -> list:
        kept = [(x, r) for x, r in self.atoms if abs(x) >= delta]
        if not kept:
            return []
        rate = sum(r for _, r in kept)
        return [(rate, PointJumps(tuple(x for x, _ in kept), tuple(r / rate for _, r in kept)))]

    def restricted(self, delta: float) -> "MeasureSpec":
        kept = tuple((x, r) for x, r in self.atoms if abs(x) >= delta)
        return Atoms(kept) if kept else ZeroMeasure()

    def mirrored(self) -> "Atoms":
        return Atoms(tuple((-x, r) for x, r in self.atoms))

    def scaled(self, k: float) -> "Atoms":
        return Atoms(tuple((k * x, r) for x, r in self.atoms))

    def time_scaled(self, c: float) -> "Atoms":
        return Atoms(tuple((x, c * r) for x, r in self.atoms))


@dataclass(frozen=True)
class CompoundPoisson:
    """Total rate times a jump-size probability distribution."""

    rate: float
    jumps: JumpDistribution

    def __post_init__(self):
        if not _finite("compound_poisson.rate", self.rate) > 0.0:
            raise MeasureError(f"compound_poisson.rate must be > 0, got {self.rate}")

    def side_mass(self, side: Side) -> float:
        return self.rate * self.jumps.prob(side)

    def variation_finite(self) -> bool:
        return True

    def finite_activity(self) -> bool:
        return True

    def gap(self, side: Side) -> float | None:
        return self.jumps.gap(side)

    def second_moment_below(self, delta: float) -> float:
        return self.rate * self.jumps.moment2_below(delta)

    def first_moment_between(self, lo: float, hi: float) -> float:
        return self.rate * self.jumps.moment1_between(lo, hi)

    def jump_parts(self, delta: float) -> list:
        return [(self.rate * p, d.component()) for p, d in self.jumps.restricted(delta) if p > 0.0]

    def restricted(self, delta: float) -> "MeasureSpec":
        pieces = [(p, d) for p, d in self.jumps.restricted(delta) if p > 0.0]
        if not pieces:
            return ZeroMeasure()
        total = sum(p for p, _ in pieces)
        jumps = pieces[0][1] if len(pieces) == 1 else Mixture(tuple(pieces))
        return CompoundPoisson(self.rate * total, jumps)

    def mirrored(self) -> "CompoundPoisson":
        return CompoundPoisson(self.rate, self.jumps.mirrored())

    def scaled(self, k: float) -> "CompoundPoisson":
        return CompoundPoisson(self.rate, self.jumps.scaled(k))

    def time_scaled(self, c: float) -> "CompoundPoisson":
        return CompoundPoisson(c * self.rate, self.jumps)


@dataclass(frozen=True)
class PowerTail:
    """One side of a power law: density c |x|^(-1-alpha) e^(-theta |x|) for |x| >= cutoff."""

    c: float = 0.0
    alpha: float = 0.0
    theta: float = 0.0
    cutoff: float = 0.0

    def __post_init__(self):
        if not _finite("c", self.c) >= 0.0:
            raise MeasureError(f"power law c must be >= 0, got {self.c}")
        if not 0.0 <= _finite("alpha", self.alpha) < 2.0:
            raise MeasureError(f"power law alpha must lie in [0, 2), got {self.alpha}")
        if not _finite("theta", self.theta) >= 0.0:
            raise MeasureError(f"power law theta must be >= 0, got {self.theta}")
        if not _finite("cutoff", self.cutoff) >= 0.0:
            raise MeasureError(f"power law cutoff must be >= 0, got {self.cutoff}")
        if self.active and self.alpha == 0.0 and self.theta == 0.0:
            raise MeasureError("power law with alpha = 0 needs theta > 0 for a finite tail")

    @property
    def active(self) -> bool:
        return self.c > 0.0

    def rate_above(self, delta: float) -> float:
        return power_moment(self.c, -1.0 - self.alpha, self.theta, max(delta, self.cutoff), math.inf)


@dataclass(frozen=True)
class PowerLaw:
    """Tempered power-law densities on each half-line."""

    pos: PowerTail = PowerTail()
    neg: PowerTail = PowerTail()

    def _tail(self, side: Side) -> PowerTail:
        return self.pos if side is Side.POS else self.neg

    def _sides(self):
        return [(side, self._tail(side)) for side in (Side.NEG, Side.POS) if self._tail(side).active]

    def side_mass(self, side: Side) -> float:
        tail = self._tail(side)
        if not tail.active:
            return 0.0
        return tail.rate_above(0.0)

    def variation_finite(self) -> bool:
        return all(t.cutoff > 0.0 or t.alpha < 1.0 for _, t in self._sides())

    def finite_activity(self) -> bool:
        return all(t.cutoff > 0.0 for _, t in self._sides())

    def gap(self, side: Side) -> float | None:
        tail = self._tail(side)
        return tail.cutoff if tail.active else None

    def second_moment_below(self, delta: float) -> float:
        return sum(power_moment(t.c, 1.0 - t.alpha, t.theta, t.cutoff, delta) for _, t in self._sides())

    def first_moment_between(self, lo: float, hi: float) -> float:
        return sum(
            side.sign * power_moment(t.c, -t.alpha, t.theta, max(lo, t.cutoff), hi) for side, t in self._sides()
        )

    def jump_parts(self, delta: float) -> list:
        parts = []
        for side, tail in self._sides():
            level = max(delta, tail.cutoff)
            if level == 0.0:
                raise InfiniteRate(f"{side.value} power law has infinite activity; use delta > 0")
            rate = tail.rate_above(level)
            if rate > 0.0:
                parts.append((rate, TemperedPowerJumps(tail.alpha, tail.theta, level, side.positive)))
        return parts

    def restricted(self, delta: float) -> "MeasureSpec":
        def cut(t: PowerTail) -> PowerTail:
            return replace(t, cutoff=max(t.cutoff, delta)) if t.active else t

        return PowerLaw(cut(self.pos), cut(self.neg))

    def mirrored(self) -> "PowerLaw":
        return PowerLaw(pos=self.neg, neg=self.pos)

    def scaled(self, k: float) -> "PowerLaw":
        def scale(t: PowerTail) -> PowerTail:
            return PowerTail(t.c * k**t.alpha, t.alpha, t.theta / k, t.cutoff * k)

        return PowerLaw(scale(self.pos), scale(self.neg))

    def time_scaled(self, c: float) -> "PowerLaw":
        return PowerLaw(replace(self.pos, c=c * self.pos.c), replace(self.neg, c=c * self.neg.c))


@dataclass(frozen=True)
class SumMeasure:
    """Finite sum of measures from the other families."""

    parts: tuple["MeasureSpec", ...]

    def __post_init__(self):
        if not self.parts:
            raise MeasureError("sum needs at least one part")

    def side_mass(self, side: Side) -> float:
        return sum(p.side_mass(side) for p in self.parts)

    def variation_finite(self) -> bool:
        return all(p.variation_finite() for p in self.parts)

    def finite_activity(self) -> bool:
        return all(p.finite_activity() for p in self.parts)

    def gap(self, side: Side) -> float | None:
        gaps = [g for p in self.parts if (g := p.gap(side)) is not None]
        return min(gaps) if gaps else None

    def second_moment_below(self, delta: float) -> float:
        return sum(p.second_moment_below(delta) for p in self.parts)

    def first_moment_between(self, lo: float, hi: float) -> float:
        return sum(p.first_moment_between(lo, hi) for p in self.parts)

    def jump_parts(self, delta: float) -> list:
        return [part for p in self.parts for part in p.jump_parts(delta)]

    def restricted(self, delta: float) -> "MeasureSpec":
        return SumMeasure(tuple(p.restricted(delta) for p in self.parts))

    def mirrored(self) -> "SumMeasure":
        return SumMeasure(tuple(p.mirrored() for p in self.parts))

    def scaled(self, k: float) -> "SumMeasure":
        return SumMeasure(tuple(p.scaled(k) for p in self.parts))

    def time_scaled(self, c: float) -> "SumMeasure":
        return SumMeasure(tuple(p.time_scaled(c) for p in self.parts))


MeasureSpec = ZeroMeasure | Atoms | CompoundPoisson | PowerLaw | SumMeasure


# --- operations -------------------------------------------------------------


def side_mass(measure: MeasureSpec, side: Side) -> SideMass:
    return SideMass(side, measure.side_mass(side))


def charges(measure: MeasureSpec, side: Side) -> bool:
    """True iff the measure gives positive mass to the open half-line."""
    return measure.side_mass(side) > 0.0


def is_zero(measure: MeasureSpec) -> bool:
    return not charges(measure, Side.NEG) and not charges(measure, Side.POS)


def small_jump_variation_finite(measure: MeasureSpec) -> bool:
    """True iff the integral of 1 ^ |x| against the measure is finite."""
    return measure.variation_finite()


def finite_activity(measure: MeasureSpec) -> bool:
    return measure.finite_activity()


def support_gap(measure: MeasureSpec, side: Side) -> SupportGap | None:
    """Distance from 0 to the support on one side; None if that side carries no mass."""
    if not charges(measure, side):
        return None
    return SupportGap(side, measure.gap(side))


def negative_support_sup(measure: MeasureSpec) -> SupportGap | None:
    """W = -sup supp of the measure on the negative half-line, or None when absent."""
    return support_gap(measure, Side.NEG)


def zero_in_support(measure: MeasureSpec, side: Side) -> bool:
    gap = support_gap(measure, side)
    return gap is not None and gap.zero_in_support


def truncated_second_moment(measure: MeasureSpec, delta: float) -> float:
    """Integral of x^2 over {|x| < delta}."""
    if not delta > 0.0:
        raise MeasureError(f"delta must be > 0, got {delta}")
    return measure.second_moment_below(delta)


def first_moment_between(measure: MeasureSpec, lo: float, hi: float) -> float:
    """Integral of x over {lo <= |x| <= hi}."""
    return measure.first_moment_between(lo, hi)


@lru_cache(maxsize=256)
def large_jump_law(measure: MeasureSpec, delta: float) -> JumpLaw:
    """Rate of {|x| >= delta} and an exact sampler of the normalized restriction."""
    if delta < 0.0:
        raise MeasureError(f"delta must be >= 0, got {delta}")
    parts = measure.jump_parts(delta)
    rates = tuple(r for r, _ in parts)
    return JumpLaw(sum(rates), rates, tuple(c for _, c in parts))
