"""Levy triplets: diffusion coefficient, Levy measure and a drift datum."""

import math
from dataclasses import dataclass

from . import measures
from .measures import MeasureSpec, Side, ZeroMeasure


class ModelError(ValueError):
    """Triplet data violates the drift convention or the diffusion bounds."""


@dataclass(frozen=True)
class Gamma0:
    """Drift under the zero-truncation convention (finite variation only)."""

    value: float


@dataclass(frozen=True)
class CenterB:
    """Center for the truncation function 1{|x| <= 1} (infinite variation)."""

    value: float


Drift = Gamma0 | CenterB


@dataclass(frozen=True)
class LevyModel:
    sigma2: float = 0.0
    measure: MeasureSpec = ZeroMeasure()
    drift: Drift = Gamma0(0.0)

    def __post_init__(self):
        if not math.isfinite(self.sigma2) or self.sigma2 < 0.0:
            raise ModelError(f"sigma2 must be finite and >= 0, got {self.sigma2}")
        if not math.isfinite(self.drift.value):
            raise ModelError(f"drift must be finite, got {self.drift.value}")
        finite = measures.small_jump_variation_finite(self.measure)
        if finite and not isinstance(self.drift, Gamma0):
            raise ModelError("finite-variation measure needs a gamma0 drift, not a center")
        if not finite and not isinstance(self.drift, CenterB):
            raise ModelError("infinite-variation measure needs a center, gamma0 is undefined")

    @property
    def gamma0(self) -> float:
        if not isinstance(self.drift, Gamma0):
            raise ModelError("gamma0 is undefined for an infinite-variation model")
        return self.drift.value

    @property
    def variation_finite(self) -> bool:
        return isinstance(self.drift, Gamma0)

    @property
    def finite_activity(self) -> bool:
        return measures.finite_activity(self.measure)

    @property
    def is_zero_process(self) -> bool:
        return self.sigma2 == 0.0 and measures.is_zero(self.measure) and self.drift.value == 0.0

    def charges(self, side: Side) -> bool:
        return measures.charges(self.measure, side)

    def mirrored(self) -> "LevyModel":
        """The model of -X."""
        return LevyModel(self.sigma2, self.measure.mirrored(), type(self.drift)(-self.drift.value))

    def scaled(self, k: float) -> "LevyModel":
        """The model of k X for k > 0."""
        if not k > 0.0:
            raise ModelError(f"spatial scale must be > 0, got {k}")
        if isinstance(self.drift, Gamma0):
            drift = Gamma0(k * self.drift.value)
        else:
            # Jumps crossing |x| = 1 under the map move in or out of the
            # truncation window; their first moment shifts the center
            b = self.drift.value
            if k < 1.0:
                b += measures.first_moment_between(self.measure, math.nextafter(1.0, math.inf), 1.0 / k)
            elif k > 1.0:
                b -= measures.first_moment_between(self.measure, math.nextafter(1.0 / k, math.inf), 1.0)
            drift = CenterB(k * b)
        return LevyModel(k * k * self.sigma2, self.measure.scaled(k), drift)

    def time_scaled(self, c: float) -> "LevyModel":
        """The model of t -> X(c t) for c > 0."""
        if not c > 0.0:
            raise ModelError(f"time scale must be > 0, got {c}")
        return LevyModel(c * self.sigma2, self.measure.time_scaled(c), type(self.drift)(c * self.drift.value))
