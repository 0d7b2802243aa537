"""Shared fixtures and field generators for the test suite."""

import numpy as np
import pytest

from lorentzlp.field import Grid, SampledField
from lorentzlp.nse import VelocityField, leray_project


def white_noise(grid, seed):
    """Plain white-noise scalar field; exercises exact set-level identities."""
    rng = np.random.default_rng(seed)
    return SampledField(grid, rng.standard_normal(grid.shape))


def smooth_noise(grid, seed, band=None):
    """Band-limited random scalar field with modes 0 < |m| <= band."""
    rng = np.random.default_rng(seed)
    band = band if band is not None else grid.N // 4
    m = np.fft.fftfreq(grid.N, d=1.0 / grid.N)
    ms = np.meshgrid(*([m] * grid.n), indexing="ij")
    mag = np.sqrt(sum(x ** 2 for x in ms))
    mask = (mag > 0) & (mag <= band)
    fh = np.fft.fftn(rng.standard_normal(grid.shape)) * mask
    return SampledField(grid, np.fft.ifftn(fh).real)


def divergence_free_field(grid, seed, band=6):
    """Leray projection of componentwise band-limited noise (n = 3)."""
    rng = np.random.default_rng(seed)
    m = np.fft.fftfreq(grid.N, d=1.0 / grid.N)
    ms = np.meshgrid(*([m] * 3), indexing="ij")
    mag = np.sqrt(sum(x ** 2 for x in ms))
    mask = (mag > 0) & (mag <= band)
    vals = np.zeros((3,) + grid.shape)
    for i in range(3):
        fh = np.fft.fftn(rng.standard_normal(grid.shape)) * mask
        vals[i] = np.fft.ifftn(fh).real
    return leray_project(SampledField(grid, vals))


@pytest.fixture(scope="session")
def grid1():
    return Grid(1, 64, 16.0)


@pytest.fixture(scope="session")
def grid2():
    return Grid(2, 64, 16.0)


@pytest.fixture(scope="session")
def grid3():
    return Grid(3, 32, 2.0 * np.pi)
