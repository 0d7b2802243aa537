"""Fourier multipliers, dyadic partition of unity and Littlewood-Paley blocks.

The low-pass profile is built from the classical exp(-1/t) glue: it equals 1
on |xi| <= 1, vanishes for |xi| >= 4/3 and is radially monotone; the shell
profile is phi(xi) = lowpass(xi/2) - lowpass(xi), supported in 1 <= |xi| <= 8/3.
On the periodic lattice the homogeneous decomposition quotients by constants
only (the zero mode), the discrete analogue of working modulo polynomials.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .field import Grid, SampledField
from .rearrange import decreasing_rearrangement, lorentz_norm

__all__ = [
    "lowpass_profile",
    "shell_profile",
    "resolvable_shells",
    "fractional_laplacian",
    "derivative",
    "convolve",
    "dealias",
    "DyadicDecomposition",
    "decompose",
    "low_pass",
    "parseval_l2",
    "bernstein_check",
]


def _smooth_step(t):
    """C^inf transition, 0 for t <= 0 and 1 for t >= 1."""
    t = np.asarray(t, dtype=float)
    a = np.where(t > 0, np.exp(-1.0 / np.maximum(t, 1e-300)), 0.0)
    b = np.where(t < 1, np.exp(-1.0 / np.maximum(1.0 - t, 1e-300)), 0.0)
    return a / (a + b)


def lowpass_profile(xi):
    """Radial low-pass: 1 on |xi| <= 1, 0 on |xi| >= 4/3, smooth between."""
    r = np.abs(np.asarray(xi, dtype=float))
    return 1.0 - _smooth_step((r - 1.0) * 3.0)


def shell_profile(xi):
    """Shell cutoff phi(xi) = lowpass(xi/2) - lowpass(xi), support [1, 8/3]."""
    r = np.abs(np.asarray(xi, dtype=float))
    return lowpass_profile(r / 2.0) - lowpass_profile(r)


def resolvable_shells(grid: Grid):
    """Integers j whose shell 2^j * [1, 8/3] meets the nonzero lattice."""
    kmin = 2.0 * np.pi / grid.L
    kmax = float(np.max(grid.k_magnitude()))
    j_lo = math.floor(math.log2(3.0 * kmin / 8.0))
    j_hi = math.ceil(math.log2(kmax))
    return list(range(j_lo, j_hi + 1))


def fractional_laplacian(u: SampledField, s: float) -> SampledField:
    """Apply the |xi|^s multiplier with the zero mode set to 0."""
    if not u.is_scalar:
        raise ValueError("fractional Laplacian acts on scalar fields")
    if s < -u.grid.n + 0.1:
        raise ValueError(f"order {s} too negative for dimension {u.grid.n}")
    kmag = u.grid.k_magnitude()
    mult = np.zeros_like(kmag)
    nz = kmag > 0
    mult[nz] = kmag[nz] ** s
    out = np.fft.ifftn(np.fft.fftn(u.values) * mult).real
    return SampledField(u.grid, out)


def derivative(u: SampledField, axis: int, order: int = 1) -> SampledField:
    """Spectral partial derivative along one axis."""
    ks = u.grid.k_meshgrid()
    mult = (1j * ks[axis]) ** order
    out = np.fft.ifftn(np.fft.fftn(u.values) * mult).real
    return SampledField(u.grid, out)


def convolve(f: SampledField, g: SampledField) -> SampledField:
    """Periodic convolution with measure weight h^n."""
    if f.grid != g.grid:
        raise ValueError("convolution requires fields on the same grid")
    if not (f.is_scalar and g.is_scalar):
        raise ValueError("convolution is defined for scalar fields")
    out = np.fft.ifftn(np.fft.fftn(f.values) * np.fft.fftn(g.values)).real
    return SampledField(f.grid, f.grid.cell_measure * out)


def dealias(u: SampledField) -> SampledField:
    """Zero all modes with any axis index >= N/3 (2/3 rule)."""
    grid = u.grid
    cut = grid.N // 3
    m = np.fft.fftfreq(grid.N, d=1.0 / grid.N)
    keep1d = np.abs(m) <= cut
    mask = keep1d
    for _ in range(grid.n - 1):
        mask = np.multiply.outer(mask, keep1d)
    def apply(vals):
        return np.fft.ifftn(np.fft.fftn(vals) * mask).real
    if u.is_scalar:
        return SampledField(grid, apply(u.values))
    return SampledField(grid, np.stack([apply(c) for c in u.values]))


def _multiplier_field(u, mult):
    return SampledField(u.grid, np.fft.ifftn(np.fft.fftn(u.values) * mult).real)


@dataclass
class DyadicDecomposition:
    """Littlewood-Paley blocks of a scalar field.

    mode="homogeneous": blocks j over all resolvable shells, the zero mode
    held separately in `mean`.  mode="nonhomogeneous": block -1 is the
    low-pass term, blocks j >= 0 are shells.
    """

    field: SampledField
    mode: str
    blocks: dict = dc_field(default_factory=dict)
    mean: float = 0.0

    def reconstruction(self) -> SampledField:
        total = np.zeros(self.field.grid.shape)
        for b in self.blocks.values():
            total = total + b.values
        if self.mode == "homogeneous":
            total = total + self.mean
        return SampledField(self.field.grid, total)

    def residual_l2(self) -> float:
        diff = self.field.values - self.reconstruction().values
        ref = math.sqrt(np.sum(self.field.values ** 2)) or 1.0
        return float(math.sqrt(np.sum(diff ** 2)) / ref)

    def block_energies(self) -> dict:
        h_n = self.field.grid.cell_measure
        return {j: float(h_n * np.sum(b.values ** 2))
                for j, b in sorted(self.blocks.items())}

    def energies_table(self) -> str:
        return "\n".join(f"{j}\t{e:.17g}"
                         for j, e in self.block_energies().items())


def decompose(u: SampledField, mode: str = "homogeneous") -> DyadicDecomposition:
    """Split a scalar field into dyadic frequency blocks."""
    if not u.is_scalar:
        raise ValueError("decompose acts on scalar fields; pass components")
    if mode not in ("homogeneous", "nonhomogeneous"):
        raise ValueError(f"unknown mode {mode!r}")
    grid = u.grid
    kmag = grid.k_magnitude()
    uhat = np.fft.fftn(u.values)
    dec = DyadicDecomposition(u, mode)
    dec.mean = float(uhat.flat[0].real / grid.N ** grid.n)
    js = resolvable_shells(grid)
    if mode == "homogeneous":
        for j in js:
            mult = shell_profile(kmag / 2.0 ** j)
            if not np.any(mult > 1e-300):
                continue
            dec.blocks[j] = SampledField(grid, np.fft.ifftn(uhat * mult).real)
    else:
        dec.blocks[-1] = SampledField(
            grid, np.fft.ifftn(uhat * lowpass_profile(kmag)).real)
        for j in [j for j in js if j >= 0]:
            mult = shell_profile(kmag / 2.0 ** j)
            if not np.any(mult > 1e-300):
                continue
            dec.blocks[j] = SampledField(grid, np.fft.ifftn(uhat * mult).real)
    return dec


def low_pass(u: SampledField, j: int, mode: str = "homogeneous") -> SampledField:
    """S_j u: all blocks below j.

    The telescoping identity collapses both conventions to the single
    multiplier lowpass(xi / 2^j); in the homogeneous convention the zero
    mode is removed.
    """
    grid = u.grid
    kmag = grid.k_magnitude()
    mult = lowpass_profile(kmag / 2.0 ** j)
    if mode == "homogeneous":
        mult = mult.copy()
        mult.flat[0] = 0.0
    return _multiplier_field(u, mult)


def parseval_l2(u: SampledField) -> float:
    """l^2 sum over nonzero Fourier coefficients, normalized to match
    the spatial L^2 norm of u minus its mean."""
    grid = u.grid
    uhat = np.fft.fftn(u.values)
    uhat.flat[0] = 0.0
    total = np.sum(np.abs(uhat) ** 2) / grid.N ** grid.n * grid.cell_measure
    return float(math.sqrt(total))


# ---------------------------------------------------------------------------
# Bernstein inequality measurement

SHELL_R1 = 0.75
SHELL_R2 = 8.0 / 3.0


def _spectrum_support_violations(u, lam, kind):
    """Lattice modes outside the premised ball/shell (unit ball B, shell
    C = [3/4, 8/3], both scaled by lam)."""
    grid = u.grid
    kmag = grid.k_magnitude()
    uhat = np.fft.fftn(u.values)
    tol = 1e-9 * np.max(np.abs(uhat))
    active = np.abs(uhat) > tol
    if kind == "shell_two_sided":
        bad = active & ((kmag < lam * SHELL_R1 - 1e-12) |
                        (kmag > lam * SHELL_R2 + 1e-12)) & (kmag > 0)
    else:
        bad = active & (kmag > lam + 1e-12)
    idx = np.argwhere(bad)
    return [tuple(i) for i in idx[:16]]


def _deriv_sup_norm(u, k, p, q):
    """sup over |alpha| = k of the L^{p,q} norm of d^alpha u."""
    grid = u.grid
    best = 0.0
    for alpha in itertools.combinations_with_replacement(range(grid.n), k):
        ks = grid.k_meshgrid()
        mult = np.ones(grid.shape, dtype=complex)
        for ax in alpha:
            mult = mult * (1j * ks[ax])
        d = _multiplier_field(u, mult)
        if np.isinf(p) and np.isinf(q):
            val = float(np.max(np.abs(d.values)))
        else:
            val = lorentz_norm(decreasing_rearrangement(d), p, q)
        best = max(best, val)
    return best


def bernstein_check(u: SampledField, k: int, lam: float, kind: str,
                    p: float = 2.0, q: float = 2.0,
                    l_index: float = None) -> dict:
    """Measure the constants of one band-limited derivative inequality.

    kinds (norm pairing -> lam power):
      ball_sup:        sup|d^a u|_Linf  vs lam^{k + n/p}       * |u|_{p,inf}
      ball_smoothing:  |d^a u|_{q,1}    vs lam^{k + n(1/p-1/q)} * |u|_{p,inf}
      same_exponent:   |d^a u|_{q,l}    vs lam^k                * |u|_{q,l}
      shell_two_sided: same_exponent pairing plus the reverse bound.
    """
    if kind not in ("ball_sup", "ball_smoothing", "same_exponent",
                    "shell_two_sided"):
        raise ValueError(f"unknown Bernstein kind {kind!r}")
    bad = _spectrum_support_violations(u, lam, kind)
    if bad:
        raise ValueError(
            f"spectrum violates the {kind} support premise at modes {bad}")
    n = u.grid.n
    prof = decreasing_rearrangement(u)
    result = {"kind": kind, "k": k, "lam": lam}
    if kind == "ball_sup":
        if not p > 1:
            raise ValueError("ball_sup requires p > 1")
        num = _deriv_sup_norm(u, k, np.inf, np.inf)
        den = lam ** (k + n / p) * lorentz_norm(prof, p, np.inf)
        result["ratio"] = num / den if den else float("inf")
        result["deriv_norm"] = num
    elif kind == "ball_smoothing":
        if not (1 < p < q):
            raise ValueError("ball_smoothing requires 1 < p < q")
        num = _deriv_sup_norm(u, k, q, 1.0)
        den = lam ** (k + n * (1.0 / p - 1.0 / q)) * lorentz_norm(prof, p, np.inf)
        result["ratio"] = num / den if den else float("inf")
        result["deriv_norm"] = num
    else:
        l_index = q if l_index is None else l_index
        num = _deriv_sup_norm(u, k, q, l_index)
        base = lorentz_norm(prof, q, l_index)
        den = lam ** k * base
        result["ratio"] = num / den if den else float("inf")
        result["deriv_norm"] = num
        if kind == "shell_two_sided":
            # reverse leg: lam^k |u| <= C sup |d^a u|
            result["reverse_ratio"] = den / num if num else float("inf")
    return result
