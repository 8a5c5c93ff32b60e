import math

import pytest

from levy_exits.catalog import M_A, SYMMETRIC_STABLE
from levy_exits.measures import Atoms, CompoundPoisson, Exponential, PowerLaw, PowerTail, Side, ZeroMeasure
from levy_exits.model import CenterB, Gamma0, LevyModel, ModelError

ONE_SIDED_STABLE = LevyModel(0.0, PowerLaw(pos=PowerTail(c=1.0, alpha=1.5)), CenterB(0.0))


class TestValidation:
    def test_negative_sigma2(self):
        with pytest.raises(ModelError):
            LevyModel(sigma2=-1.0)

    def test_infinite_sigma2(self):
        with pytest.raises(ModelError):
            LevyModel(sigma2=math.inf)

    def test_gamma0_needs_finite_variation(self):
        with pytest.raises(ModelError, match="center"):
            LevyModel(0.0, PowerLaw(pos=PowerTail(c=1.0, alpha=1.5)), Gamma0(0.0))

    def test_center_needs_infinite_variation(self):
        with pytest.raises(ModelError):
            LevyModel(0.0, Atoms.of((-2.0, 1.0)), CenterB(1.0))

    def test_gamma0_undefined_for_center(self):
        with pytest.raises(ModelError):
            _ = SYMMETRIC_STABLE.gamma0


def test_default_is_zero_process():
    model = LevyModel()
    assert model.is_zero_process
    assert model.measure == ZeroMeasure()
    assert model.gamma0 == 0.0
    assert not LevyModel(sigma2=1.0).is_zero_process


def test_properties():
    assert M_A.gamma0 == 1.0
    assert M_A.variation_finite
    assert M_A.finite_activity
    assert M_A.charges(Side.NEG)
    assert not M_A.charges(Side.POS)
    assert not SYMMETRIC_STABLE.variation_finite
    assert not SYMMETRIC_STABLE.finite_activity


def test_mirror():
    mirrored = M_A.mirrored()
    assert mirrored.measure == Atoms.of((2.0, 1.0))
    assert mirrored.drift == Gamma0(-1.0)
    assert mirrored.mirrored() == M_A


class TestScaling:
    def test_finite_variation(self):
        model = LevyModel(1.0, CompoundPoisson(1.0, Exponential(1.0, Side.POS)), Gamma0(-1.0))
        scaled = model.scaled(2.0)
        assert scaled.sigma2 == 4.0
        assert scaled.drift == Gamma0(-2.0)
        assert scaled.measure.jumps == Exponential(2.0, Side.POS)

    def test_power_law_image(self):
        scaled = ONE_SIDED_STABLE.scaled(2.0).measure.pos
        assert scaled.c == pytest.approx(2.0**1.5)
        assert scaled.alpha == 1.5

    def test_center_shift_when_expanding(self):
        # Jumps with |x| in (1/2, 1] leave the truncation window
        shift = 2.0 * math.sqrt(2.0) - 2.0
        assert ONE_SIDED_STABLE.scaled(2.0).drift.value == pytest.approx(-2.0 * shift)

    def test_center_shift_when_shrinking(self):
        # Jumps with |x| in (1, 2] enter the truncation window
        shift = 2.0 - math.sqrt(2.0)
        assert ONE_SIDED_STABLE.scaled(0.5).drift.value == pytest.approx(0.5 * shift)

    def test_symmetric_center_is_unchanged(self):
        assert SYMMETRIC_STABLE.scaled(4.0).drift.value == pytest.approx(0.0, abs=1e-12)

    def test_side_beyond_the_window_contributes_nothing(self):
        # The positive side starts at 2 and meets (1, 2] in a null set
        model = LevyModel(
            0.0, PowerLaw(pos=PowerTail(c=1.0, alpha=1.5, cutoff=2.0), neg=PowerTail(c=1.0, alpha=1.5)), CenterB(0.0)
        )
        assert model.scaled(0.5).drift.value == pytest.approx(0.5 * -(2.0 - math.sqrt(2.0)))

    def test_rejects_non_positive(self):
        with pytest.raises(ModelError):
            M_A.scaled(0.0)


def test_time_scaling():
    model = LevyModel(1.0, Atoms.of((-2.0, 1.0)), Gamma0(1.0)).time_scaled(3.0)
    assert model.sigma2 == 3.0
    assert model.measure == Atoms.of((-2.0, 3.0))
    assert model.drift == Gamma0(3.0)
    with pytest.raises(ModelError):
        M_A.time_scaled(-1.0)
