"""Besov-Lorentz, Triebel-Lizorkin-Lorentz and Sobolev-Lorentz norms.

All three are built on the homogeneous Littlewood-Paley blocks; the j-range
is clamped to shells resolvable on the lattice and each result can report
the clamp so truncation of the ell^r sum over Z stays visible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import SampledField
from .rearrange import decreasing_rearrangement, lorentz_norm
from .spectral import decompose, fractional_laplacian

__all__ = [
    "SpaceParams",
    "besov_lorentz_norm",
    "triebel_lorentz_norm",
    "sobolev_lorentz_norm",
    "embedding_chain",
]


@dataclass(frozen=True)
class SpaceParams:
    """Smoothness s, Lorentz indices (p, q), block-summation index r."""

    s: float
    p: float
    q: float
    r: float = np.inf

    def __post_init__(self):
        if self.p <= 0 or self.q <= 0 or self.r <= 0:
            raise ValueError("indices must be positive")


def _scalar_blocks(u):
    dec = decompose(u, mode="homogeneous")
    return dec.blocks


def besov_lorentz_norm(u: SampledField, params: SpaceParams) -> float:
    """ell^r over j of 2^{js} * Lorentz norm of each homogeneous block.

    Vector fields take the max over components.
    """
    if not u.is_scalar:
        return max(besov_lorentz_norm(u.component(i), params)
                   for i in range(u.components))
    terms = []
    for j, block in _scalar_blocks(u).items():
        bn = lorentz_norm(decreasing_rearrangement(block), params.p, params.q)
        terms.append(2.0 ** (j * params.s) * bn)
    if not terms:
        return 0.0
    if np.isinf(params.r):
        return float(max(terms))
    return float(np.sum(np.asarray(terms) ** params.r) ** (1.0 / params.r))


def triebel_lorentz_norm(u: SampledField, params: SpaceParams) -> float:
    """One Lorentz norm of the pointwise ell^r (or sup) across blocks."""
    if not u.is_scalar:
        return max(triebel_lorentz_norm(u.component(i), params)
                   for i in range(u.components))
    blocks = _scalar_blocks(u)
    if not blocks:
        return 0.0
    stacked = None
    for j, block in blocks.items():
        w = 2.0 ** (j * params.s) * np.abs(block.values)
        if stacked is None:
            stacked = (w if np.isinf(params.r) else w ** params.r)
        elif np.isinf(params.r):
            np.maximum(stacked, w, out=stacked)
        else:
            stacked += w ** params.r
    if not np.isinf(params.r):
        stacked = stacked ** (1.0 / params.r)
    inner = SampledField(u.grid, stacked)
    return lorentz_norm(decreasing_rearrangement(inner), params.p, params.q)


def sobolev_lorentz_norm(u: SampledField, s: float, p: float,
                         p1: float) -> float:
    """Lorentz (p, p1) norm of the fractional derivative of order s."""
    if not p > 1:
        raise ValueError("Sobolev-Lorentz norm requires p > 1")
    if not u.is_scalar:
        return max(sobolev_lorentz_norm(u.component(i), s, p, p1)
                   for i in range(u.components))
    ls = fractional_laplacian(u, s)
    return lorentz_norm(decreasing_rearrangement(ls), p, p1)


@dataclass
class EmbeddingReport:
    besov: float
    triebel: float
    sobolev: float
    empirical_constant: float


def embedding_chain(u: SampledField, s: float, p: float) -> EmbeddingReport:
    """Besov <= Triebel-Lizorkin (asserted exactly) and the measured
    constant of the Triebel-Lizorkin <= Sobolev leg, all at (p, inf)."""
    if not p > 1:
        raise ValueError("embedding chain requires p > 1")
    params = SpaceParams(s=s, p=p, q=np.inf, r=np.inf)
    b = besov_lorentz_norm(u, params)
    f = triebel_lorentz_norm(u, params)
    h = sobolev_lorentz_norm(u, s, p, np.inf)
    if b > f * (1 + 1e-12):
        raise AssertionError("Besov norm exceeded the Triebel-Lizorkin norm")
    c = f / h if h > 0 else 0.0
    return EmbeddingReport(besov=b, triebel=f, sobolev=h, empirical_constant=c)
