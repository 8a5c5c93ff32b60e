import math

import numpy as np
import pytest
from hypothesis import given, settings

from levy_exits import measures
from levy_exits.integrals import power_moment
from levy_exits.measures import (
    Atoms,
    CompoundPoisson,
    Exponential,
    InfiniteRate,
    MeasureError,
    Mixture,
    PowerLaw,
    PowerTail,
    Side,
    SumMeasure,
    Uniform,
    ZeroMeasure,
)

from .strategies import measures as measure_strategy

NEG_ATOM = Atoms.of((-2.0, 1.0))
POS_TEMPERED = PowerLaw(pos=PowerTail(c=1.0, alpha=0.5, theta=1.0))
STABLE_UP = PowerLaw(pos=PowerTail(c=1.0, alpha=1.5))
NEG_EXPONENTIAL = CompoundPoisson(1.0, Exponential(1.0, Side.NEG))
POS_EXPONENTIAL = CompoundPoisson(1.0, Exponential(1.0, Side.POS))


class TestFamilies:
    def test_atom_needs_nonzero_location(self):
        with pytest.raises(MeasureError):
            Atoms.of((0.0, 1.0))

    def test_negative_rate_rejected(self):
        with pytest.raises(MeasureError):
            Atoms.of((-2.0, -1.0))
        with pytest.raises(MeasureError):
            CompoundPoisson(-1.0, Uniform(0.0, 1.0))

    def test_uniform_may_not_straddle_zero(self):
        with pytest.raises(MeasureError):
            Uniform(-1.0, 1.0)
        assert Uniform(-1.0, 0.0).side is Side.NEG

    def test_power_tail_bounds(self):
        with pytest.raises(MeasureError):
            PowerTail(c=1.0, alpha=2.0)
        with pytest.raises(MeasureError):
            PowerTail(c=1.0, alpha=0.0, theta=0.0)
        PowerTail(c=1.0, alpha=0.0, theta=1.0)

    def test_empty_sum_rejected(self):
        with pytest.raises(MeasureError):
            SumMeasure(())


class TestCharges:
    def test_single_negative_atom(self):
        assert not measures.charges(NEG_ATOM, Side.POS)
        assert measures.charges(NEG_ATOM, Side.NEG)

    def test_one_sided_power_law(self):
        assert not measures.charges(POS_TEMPERED, Side.NEG)
        assert measures.charges(POS_TEMPERED, Side.POS)

    def test_infinite_mass_is_representable(self):
        mass = measures.side_mass(STABLE_UP, Side.POS)
        assert mass.mass == math.inf
        assert measures.side_mass(STABLE_UP, Side.NEG).mass == 0.0

    def test_mixture_side_mass(self):
        mixed = CompoundPoisson(3.0, Mixture(((1.0, Exponential(1.0, Side.NEG)), (2.0, Uniform(1.0, 2.0)))))
        assert measures.side_mass(mixed, Side.NEG).mass == pytest.approx(1.0)
        assert measures.side_mass(mixed, Side.POS).mass == pytest.approx(2.0)

    def test_zero_measure(self):
        assert measures.is_zero(ZeroMeasure())
        assert not measures.is_zero(NEG_ATOM)


class TestVariation:
    def test_power_law_alpha_decides(self):
        assert not measures.small_jump_variation_finite(STABLE_UP)
        assert measures.small_jump_variation_finite(POS_TEMPERED)

    def test_cutoff_restores_finite_variation(self):
        assert measures.small_jump_variation_finite(PowerLaw(pos=PowerTail(c=1.0, alpha=1.5, cutoff=0.5)))

    def test_finite_measures(self):
        assert measures.small_jump_variation_finite(NEG_ATOM)
        assert measures.finite_activity(NEG_ATOM)
        assert not measures.finite_activity(POS_TEMPERED)

    def test_sum_is_conjunction(self):
        assert not measures.small_jump_variation_finite(SumMeasure((NEG_ATOM, STABLE_UP)))
        assert measures.small_jump_variation_finite(SumMeasure((NEG_ATOM, POS_TEMPERED)))


class TestSupport:
    def test_negative_atom_gap(self):
        gap = measures.negative_support_sup(NEG_ATOM)
        assert gap.distance == 2.0
        assert not gap.zero_in_support

    def test_exponential_reaches_zero(self):
        gap = measures.negative_support_sup(NEG_EXPONENTIAL)
        assert gap.distance == 0.0
        assert gap.zero_in_support

    def test_absent_without_negative_mass(self):
        assert measures.negative_support_sup(Atoms.of((1.0, 1.0))) is None

    def test_zero_in_support(self):
        assert not measures.zero_in_support(NEG_ATOM, Side.NEG)
        assert measures.zero_in_support(POS_EXPONENTIAL, Side.POS)
        assert not measures.zero_in_support(ZeroMeasure(), Side.NEG)

    def test_offset_exponential_and_sum(self):
        offset = CompoundPoisson(1.0, Exponential(1.0, Side.NEG, offset=0.5))
        assert measures.negative_support_sup(offset).distance == 0.5
        assert measures.negative_support_sup(SumMeasure((offset, NEG_ATOM))).distance == 0.5


class TestTruncatedSecondMoment:
    def test_atoms_above_delta(self):
        assert measures.truncated_second_moment(NEG_ATOM, 1.0) == 0.0
        assert measures.truncated_second_moment(NEG_ATOM, 3.0) == 4.0

    def test_power_law_closed_form(self):
        untempered = PowerLaw(pos=PowerTail(c=1.0, alpha=0.5))
        assert measures.truncated_second_moment(untempered, 1.0) == pytest.approx(2.0 / 3.0)

    def test_zero_measure(self):
        assert measures.truncated_second_moment(ZeroMeasure(), 0.1) == 0.0

    def test_delta_must_be_positive(self):
        with pytest.raises(MeasureError):
            measures.truncated_second_moment(NEG_ATOM, 0.0)

    def test_uniform(self):
        cp = CompoundPoisson(2.0, Uniform(0.0, 1.0))
        # 2 * integral of x^2 over [0, 0.5]
        assert measures.truncated_second_moment(cp, 0.5) == pytest.approx(2.0 * 0.125 / 3.0)

    def test_exponential_matches_direct_integral(self):
        jumps = Exponential(0.5, Side.POS, offset=0.2)
        cp = CompoundPoisson(1.0, jumps)
        # density 2 e^(-2 (x - 0.2)) on [0.2, inf)
        expected = 2.0 * math.exp(0.4) * power_moment(1.0, 2.0, 2.0, 0.2, 0.7)
        assert measures.truncated_second_moment(cp, 0.7) == pytest.approx(expected, rel=1e-10)


class TestFirstMoment:
    def test_closed_interval(self):
        atoms = Atoms.of((-2.0, 1.0), (1.0, 3.0))
        assert measures.first_moment_between(atoms, 1.0, 2.0) == pytest.approx(1.0)
        assert measures.first_moment_between(atoms, 1.5, 2.0) == pytest.approx(-2.0)

    def test_power_law(self):
        # integral of x * x^-2.5 over [0.5, 1]
        value = measures.first_moment_between(STABLE_UP, 0.5, 1.0)
        assert value == pytest.approx(2.0 * math.sqrt(2.0) - 2.0)
        assert measures.first_moment_between(STABLE_UP.mirrored(), 0.5, 1.0) == pytest.approx(-value)


class TestLargeJumpLaw:
    def test_atom_rates(self):
        law = measures.large_jump_law(Atoms.of((-2.0, 1.0), (1.0, 3.0)), 0.0)
        assert law.rate == 4.0
        assert law.side_rate(True) == pytest.approx(3.0)
        assert law.side_rate(False) == pytest.approx(1.0)

    def test_atom_sampling_frequencies(self):
        law = measures.large_jump_law(Atoms.of((-2.0, 1.0), (1.0, 3.0)), 0.0)
        draws = law.sample(np.random.default_rng(2024), 100_000)
        assert set(np.unique(draws)) == {-2.0, 1.0}
        assert 0.74 <= np.mean(draws == 1.0) <= 0.76

    def test_zero_measure(self):
        law = measures.large_jump_law(ZeroMeasure(), 0.0)
        assert law.rate == 0.0
        assert law.sample(np.random.default_rng(0), 3).tolist() == [0.0, 0.0, 0.0]

    def test_tempered_rate(self):
        law = measures.large_jump_law(POS_TEMPERED, 1.0)
        assert law.rate == pytest.approx(power_moment(1.0, -1.5, 1.0, 1.0, math.inf))

    def test_infinite_activity_at_zero(self):
        with pytest.raises(InfiniteRate):
            measures.large_jump_law(STABLE_UP, 0.0)

    def test_tempered_sampler_moments(self):
        law = measures.large_jump_law(POS_TEMPERED, 0.1)
        draws = law.sample(np.random.default_rng(11), 100_000)
        assert draws.min() >= 0.1
        mean = power_moment(1.0, -0.5, 1.0, 0.1, math.inf) / power_moment(1.0, -1.5, 1.0, 0.1, math.inf)
        assert np.mean(draws) == pytest.approx(mean, abs=0.01)

    def test_stable_sampler_tail(self):
        # untempered alpha = 1.5 above 1: P(X > 4) = 4^-1.5
        law = measures.large_jump_law(STABLE_UP.mirrored(), 1.0)
        draws = law.sample(np.random.default_rng(5), 100_000)
        assert draws.max() <= -1.0
        assert np.mean(draws < -4.0) == pytest.approx(0.125, abs=0.005)

    def test_exponential_offset_sampler(self):
        law = measures.large_jump_law(NEG_EXPONENTIAL, 0.5)
        assert law.rate == pytest.approx(math.exp(-0.5))
        draws = law.sample(np.random.default_rng(3), 50_000)
        assert draws.max() <= -0.5
        assert np.mean(draws) == pytest.approx(-1.5, abs=0.02)

    def test_restriction_keeps_the_law(self):
        cp = CompoundPoisson(2.0, Mixture(((1.0, Uniform(0.0, 1.0)), (1.0, Exponential(1.0, Side.NEG)))))
        restricted = cp.restricted(0.5)
        assert measures.large_jump_law(restricted, 0.0).rate == pytest.approx(
            measures.large_jump_law(cp, 0.5).rate
        )
        assert measures.large_jump_law(cp, 0.5).rate == pytest.approx(0.5 + math.exp(-0.5))


@settings(max_examples=200, deadline=None)
@given(measure_strategy)
def test_rate_and_moment_are_monotone_in_delta(measure):
    deltas = [0.001, 0.01, 0.1, 0.5, 1.0]
    rates = [measures.large_jump_law(measure, d).rate for d in deltas]
    moments = [measures.truncated_second_moment(measure, d) for d in deltas]
    for small, large in zip(rates, rates[1:]):
        assert large <= small * (1 + 1e-9)
    for small, large in zip(moments, moments[1:]):
        assert small <= large * (1 + 1e-9) + 1e-15


@settings(max_examples=200, deadline=None)
@given(measure_strategy)
def test_mirror_swaps_sides(measure):
    mirrored = measure.mirrored()
    for side in Side:
        assert measures.charges(mirrored, side) == measures.charges(measure, side.opposite)
        assert measures.zero_in_support(mirrored, side) == measures.zero_in_support(measure, side.opposite)
    assert measures.small_jump_variation_finite(mirrored) == measures.small_jump_variation_finite(measure)
    original = measures.support_gap(measure, Side.POS)
    flipped = measures.negative_support_sup(mirrored)
    assert (original is None) == (flipped is None)
    if original is not None:
        assert flipped.distance == original.distance


@settings(max_examples=200, deadline=None)
@given(measure_strategy)
def test_charges_matches_large_jump_rates(measure):
    # Every strategy measure has mass above 1e-3 on each side it charges
    for side in Side:
        rated = any(measures.large_jump_law(measure, d).side_rate(side.positive) > 0.0 for d in (1.0, 1e-3))
        assert rated == measures.charges(measure, side)
