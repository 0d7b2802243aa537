"""Discrete Hardy-Littlewood maximal operator and the checks built on it.

The sup over all radii is restricted to the geometric sequence h*2^m; ball
membership is a strict center test, so the smallest radius covers only the
cell itself and Mf >= |f| holds pointwise exactly.  Averages over the larger
balls are computed by periodic convolution with the normalized ball mask.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import Grid, SampledField
from .rearrange import decreasing_rearrangement, lorentz_norm
from .spectral import fractional_laplacian

__all__ = [
    "MaximalConfig",
    "maximal_function",
    "equivalence_chain",
    "pointwise_interpolation_check",
]


@dataclass(frozen=True)
class MaximalConfig:
    """Radii h*2^m for m = 0 .. log2(N/2), strict center-test balls."""

    grid: Grid

    def radii(self):
        g = self.grid
        m_max = int(math.log2(g.N // 2))
        return [g.h * 2.0 ** m for m in range(m_max + 1)]


def _ball_mask(grid: Grid, radius: float) -> np.ndarray:
    """Periodic cell-offset mask: centers with |y| < radius."""
    d = np.abs(np.fft.fftfreq(grid.N, d=1.0 / grid.N)) * grid.h
    ds = np.meshgrid(*([d] * grid.n), indexing="ij")
    dist2 = sum(x ** 2 for x in ds)
    return dist2 < radius ** 2 - 1e-12 * radius ** 2


def maximal_function(f: SampledField,
                     cfg: MaximalConfig = None) -> SampledField:
    """Pointwise sup of ball averages over the configured radii."""
    if not f.is_scalar:
        raise ValueError("maximal operator acts on scalar fields")
    grid = f.grid
    cfg = cfg or MaximalConfig(grid)
    mag = f.magnitude()
    out = mag.copy()  # radius h ball = the cell itself
    fhat = np.fft.fftn(mag)
    for r in cfg.radii()[1:]:
        mask = _ball_mask(grid, r)
        count = int(np.count_nonzero(mask))
        kernel_hat = np.fft.fftn(mask.astype(float) / count)
        avg = np.fft.ifftn(fhat * kernel_hat).real
        np.maximum(out, avg, out=out)
    return SampledField(grid, out)


@dataclass
class ChainReport:
    plain: float
    star: float
    maximal: float
    ratio_star_over_plain: float
    ratio_maximal_over_plain: float


def equivalence_chain(f: SampledField, p: float, q: float) -> ChainReport:
    """Norm-equivalence legs between the plain norm, the star norm and the
    norm of Mf, with the two provable orderings asserted."""
    if not p > 1:
        raise ValueError("equivalence chain requires p > 1")
    if not np.isinf(q) and q < 1:
        raise ValueError("equivalence chain requires q >= 1")
    prof = decreasing_rearrangement(f)
    plain = lorentz_norm(prof, p, q)
    star = lorentz_norm(prof, p, q, variant="star")
    mf = maximal_function(f)
    mnorm = lorentz_norm(decreasing_rearrangement(mf), p, q)
    if plain > star * (1 + 1e-12):
        raise AssertionError("plain norm exceeded the star norm")
    if plain > mnorm * (1 + 1e-12):
        raise AssertionError("norm of f exceeded the norm of Mf")
    return ChainReport(
        plain=plain, star=star, maximal=mnorm,
        ratio_star_over_plain=star / plain if plain else 0.0,
        ratio_maximal_over_plain=mnorm / plain if plain else 0.0,
    )


def pointwise_interpolation_check(u: SampledField, sigma: float,
                                  s: float) -> float:
    """Max over cells of |L^sigma u| / ((Mu)^{1-sigma/s} (M L^s u)^{sigma/s}).

    Cells where the denominator vanishes are skipped; the returned maximum
    is the empirical constant of the pointwise derivative interpolation.
    """
    if not 0 < sigma < s:
        raise ValueError("orders must satisfy 0 < sigma < s")
    lam_sigma = np.abs(fractional_laplacian(u, sigma).values)
    mu = maximal_function(u).values
    mls = maximal_function(fractional_laplacian(u, s)).values
    theta = sigma / s
    denom = mu ** (1.0 - theta) * mls ** theta
    tiny = 1e-13 * (np.max(denom) if denom.size else 0.0)
    ok = denom > tiny
    if not np.any(ok):
        return 0.0
    return float(np.max(lam_sigma[ok] / denom[ok]))
