"""Rearrangements, layer profiles and exact Lorentz norms."""

import numpy as np
import pytest

from lorentzlp.field import Grid, SampledField
from lorentzlp.rearrange import (LayerProfile, decreasing_rearrangement,
                                 distribution_function, double_star,
                                 layer_profile_from_pairs, lorentz_norm,
                                 time_lorentz_norm)
from tests.conftest import white_noise


def two_step_profile():
    # f* = 3 on [0,1), 1 on [1,3)
    return LayerProfile(np.array([3.0, 1.0]), np.array([1.0, 3.0]))


def test_layer_profile_validation():
    with pytest.raises(ValueError):
        LayerProfile(np.array([1.0, 2.0]), np.array([1.0, 2.0]))  # increasing
    with pytest.raises(ValueError):
        LayerProfile(np.array([2.0, 1.0]), np.array([2.0, 1.0]))  # measures


def test_distribution_function_counts(grid2):
    f = white_noise(grid2, 0)
    alpha = 0.7
    expect = grid2.cell_measure * np.count_nonzero(np.abs(f.values) > alpha)
    assert distribution_function(f, alpha) == expect


def test_rearrangement_is_equimeasurable(grid2):
    f = white_noise(grid2, 1)
    prof = decreasing_rearrangement(f)
    for alpha in (0.1, 0.5, 1.0, 2.0):
        measure = float(np.sum(prof.step_widths()[prof.levels > alpha]))
        assert measure == pytest.approx(distribution_function(f, alpha),
                                        abs=1e-12)


def test_evaluate_steps():
    prof = two_step_profile()
    assert prof.evaluate(0.5) == 3.0
    assert prof.evaluate(2.0) == 1.0
    assert prof.evaluate(5.0) == 0.0


def test_double_star_exact():
    prof = two_step_profile()
    # integral over [0,2] = 3*1 + 1*1 = 4
    assert double_star(prof, 2.0) == pytest.approx(2.0)
    # beyond the support the average decays like 1/t
    assert double_star(prof, 10.0) == pytest.approx(5.0 / 10.0)


def test_plain_norm_closed_form():
    prof = two_step_profile()
    p, q = 2.0, 1.0
    # sum_k v_k (p/q)(t_k^{q/p} - t_{k-1}^{q/p}) with q=1, p=2
    expect = 3.0 * 2.0 * 1.0 + 1.0 * 2.0 * (np.sqrt(3.0) - 1.0)
    assert lorentz_norm(prof, p, q) == pytest.approx(expect, abs=1e-14)


def test_weak_norm_is_sup():
    prof = two_step_profile()
    expect = max(1.0 ** 0.5 * 3.0, 3.0 ** 0.5 * 1.0)
    assert lorentz_norm(prof, 2.0, np.inf) == pytest.approx(expect, abs=1e-15)


def test_linf_q_is_trivial():
    prof = two_step_profile()
    assert lorentz_norm(prof, np.inf, 2.0) == 0.0
    assert lorentz_norm(prof, np.inf, np.inf) == 3.0


def test_star_norm_integer_q_vs_quadrature():
    """The binomial closed form at integer q agrees with Gauss-Legendre
    quadrature at a nearby non-integer q in the limit."""
    prof = two_step_profile()
    at2 = lorentz_norm(prof, 1.5, 2.0, variant="star")
    near = lorentz_norm(prof, 1.5, 2.0 + 1e-9, variant="star")
    assert at2 == pytest.approx(near, rel=1e-6)


def test_star_norm_singleton_oracle():
    """One step of height v on [0,m]: f** = v then v*m/t, and the weak
    star norm is v * max(m^{1/p}, sup_{t>m} t^{1/p} m/t) = v m^{1/p}
    for p > 1 (decreasing tail)."""
    v, m, p = 2.0, 4.0, 2.0
    prof = LayerProfile(np.array([v]), np.array([m]))
    assert lorentz_norm(prof, p, np.inf, variant="star") == pytest.approx(
        v * m ** (1.0 / p), abs=1e-14)


def test_sandwich_on_two_steps():
    prof = two_step_profile()
    for p, q in ((2.0, 1.0), (2.0, 2.0), (3.0, np.inf), (1.5, 4.0)):
        plain = lorentz_norm(prof, p, q)
        star = lorentz_norm(prof, p, q, variant="star")
        assert plain <= star * (1 + 1e-12)
        assert star <= p / (p - 1.0) * plain * (1 + 1e-12)


def test_profile_table_round_trip():
    prof = two_step_profile()
    back = LayerProfile.from_table(prof.to_table())
    np.testing.assert_allclose(back.levels, prof.levels)
    np.testing.assert_allclose(back.cum_measures, prof.cum_measures)


def test_pairs_merge_equal_values():
    prof = layer_profile_from_pairs([(1.0, 2.0), (0.5, 2.0), (2.0, 1.0)])
    np.testing.assert_allclose(prof.levels, [2.0, 1.0])
    np.testing.assert_allclose(prof.cum_measures, [1.5, 3.5])


def test_time_lorentz_norm_is_lebesgue_at_p_eq_q():
    series = [(0.5, 1.0), (1.0, 3.0), (0.25, 2.0)]
    p = 3.0
    expect = (0.5 * 1.0 ** p + 1.0 * 3.0 ** p + 0.25 * 2.0 ** p) ** (1 / p)
    assert time_lorentz_norm(series, p, p) == pytest.approx(expect, abs=1e-13)


def test_empty_profile_norms_vanish():
    g = Grid(1, 64, 16.0)
    prof = decreasing_rearrangement(SampledField(g, np.zeros(64)))
    assert prof.is_empty
    assert lorentz_norm(prof, 2.0, 2.0) == 0.0
