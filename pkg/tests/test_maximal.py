"""Discrete maximal operator and the norm-equivalence chain."""

import numpy as np
import pytest

from lorentzlp.field import AnalyticProfile, Grid, SampledField, sample
from lorentzlp.maximal import (MaximalConfig, equivalence_chain,
                               maximal_function,
                               pointwise_interpolation_check)
from tests.conftest import smooth_noise, white_noise


def test_radii_are_dyadic(grid2):
    cfg = MaximalConfig(grid2)
    radii = cfg.radii()
    assert radii[0] == pytest.approx(grid2.h)
    ratios = [b / a for a, b in zip(radii, radii[1:])]
    np.testing.assert_allclose(ratios, 2.0)
    assert radii[-1] == pytest.approx(grid2.h * (grid2.N // 2))


def test_maximal_dominates_pointwise(grid2):
    f = white_noise(grid2, 0)
    mf = maximal_function(f)
    assert np.all(mf.values >= np.abs(f.values) - 1e-14)


def test_maximal_of_constant_is_constant(grid2):
    f = SampledField(grid2, np.full(grid2.shape, 2.5))
    mf = maximal_function(f)
    np.testing.assert_allclose(mf.values, 2.5, atol=1e-12)


def test_maximal_rejects_vector(grid3):
    v = SampledField(grid3, np.zeros((3,) + grid3.shape))
    with pytest.raises(ValueError):
        maximal_function(v)


def test_maximal_spreads_indicator():
    """Averaging over large balls makes M(1_B) positive well outside B."""
    g = Grid(2, 64, 16.0)
    f = sample(AnalyticProfile("ball_indicator", {"radius": 1.0}), g)
    mf = maximal_function(f)
    assert np.max(mf.values) == pytest.approx(1.0)
    # every center within the largest averaging radius (L/2) of B sees it
    frac = np.count_nonzero(mf.values > 0) / mf.values.size
    assert frac > 0.5
    # values away from B are strictly smaller than 1
    outside = mf.values[g.radius() > 3.0]
    assert np.max(outside) < 0.5


def test_equivalence_chain_orderings(grid2):
    f = smooth_noise(grid2, 3)
    rep = equivalence_chain(f, 2.0, 2.0)
    assert rep.plain <= rep.star * (1 + 1e-12)
    assert rep.plain <= rep.maximal * (1 + 1e-12)
    assert rep.ratio_star_over_plain <= 2.0 + 1e-12  # p/(p-1) at p=2


def test_equivalence_chain_guards(grid2):
    f = smooth_noise(grid2, 4)
    with pytest.raises(ValueError):
        equivalence_chain(f, 1.0, 2.0)
    with pytest.raises(ValueError):
        equivalence_chain(f, 2.0, 0.5)


def test_pointwise_interpolation_constant_bounded(grid2):
    f = smooth_noise(grid2, 5)
    c = pointwise_interpolation_check(f, 0.5, 1.0)
    assert 0.0 < c < 20.0


def test_pointwise_interpolation_order_guard(grid2):
    with pytest.raises(ValueError):
        pointwise_interpolation_check(smooth_noise(grid2, 6), 1.0, 0.5)
