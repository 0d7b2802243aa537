"""Besov-, Triebel-Lizorkin- and Sobolev-type norms built on Lorentz norms."""

import numpy as np
import pytest

from lorentzlp.field import AnalyticProfile, Grid, sample
from lorentzlp.spaces import (SpaceParams, besov_lorentz_norm,
                              embedding_chain, sobolev_lorentz_norm,
                              triebel_lorentz_norm)
from tests.conftest import smooth_noise

INF = float("inf")


def shell_field(grid, j, seed=0):
    lam = 2.0 ** j
    prof = AnalyticProfile("band_limited_random",
                           {"shell_lo": lam, "shell_hi": 1.5 * lam,
                            "seed": seed, "n_modes": 32})
    return sample(prof, grid)


def test_space_params_validation():
    with pytest.raises(ValueError):
        SpaceParams(s=1.0, p=-1.0, q=2.0, r=2.0)
    with pytest.raises(ValueError):
        SpaceParams(s=1.0, p=2.0, q=0.0, r=2.0)


def test_single_shell_besov_scales_like_2js():
    """For a field in one dyadic shell the Besov norm is about
    2^{js} times its Lorentz norm, uniformly over s."""
    g = Grid(2, 128, 2.0 * np.pi)
    u = shell_field(g, 3)
    base = besov_lorentz_norm(u, SpaceParams(s=0.0, p=2.0, q=2.0, r=INF))
    for s in (0.5, 1.0):
        val = besov_lorentz_norm(u, SpaceParams(s=s, p=2.0, q=2.0, r=INF))
        # energy concentrates in shells j=3 +/- 1
        assert 2.0 ** (2 * s) * base / 3 < val < 3 * 2.0 ** (4 * s) * base


def test_besov_zero_smoothness_l2_comparable(grid2):
    u = smooth_noise(grid2, 1)
    b = besov_lorentz_norm(u, SpaceParams(s=0.0, p=2.0, q=2.0, r=2.0))
    t = triebel_lorentz_norm(u, SpaceParams(s=0.0, p=2.0, q=2.0, r=2.0))
    l2 = np.sqrt(np.sum(u.values ** 2) * grid2.cell_measure)
    for val in (b, t):
        assert 0.3 * l2 < val < 3.0 * l2


def test_besov_below_triebel(grid2):
    u = smooth_noise(grid2, 2)
    params = SpaceParams(s=0.5, p=2.0, q=INF, r=INF)
    assert besov_lorentz_norm(u, params) <= \
        triebel_lorentz_norm(u, params) * (1 + 1e-12)


def test_sobolev_norm_is_lorentz_of_fractional_derivative(grid2):
    from lorentzlp.rearrange import decreasing_rearrangement, lorentz_norm
    from lorentzlp.spectral import fractional_laplacian
    u = smooth_noise(grid2, 3)
    s, p, q = 0.75, 2.5, 2.0
    direct = lorentz_norm(
        decreasing_rearrangement(fractional_laplacian(u, s)), p, q)
    assert sobolev_lorentz_norm(u, s, p, q) == pytest.approx(direct,
                                                             rel=1e-12)


def test_embedding_chain_report(grid2):
    u = smooth_noise(grid2, 4)
    rep = embedding_chain(u, 0.5, 2.0)
    assert rep.besov <= rep.triebel * (1 + 1e-12)
    assert rep.empirical_constant > 0.0


def test_vector_field_supported(grid3):
    from lorentzlp.nse import leray_project
    from tests.conftest import divergence_free_field
    v = divergence_free_field(grid3, 0)
    val = besov_lorentz_norm(v.field,
                             SpaceParams(s=0.5, p=2.0, q=INF, r=INF))
    assert np.isfinite(val) and val > 0.0
