"""Energy-flux diagnostics for static 3-D velocity fields and snapshot
trajectories.

The flux functional, its dyadic bound and the block interpolation step use
the nonhomogeneous Littlewood-Paley convention (low-pass block at k = -1,
shells for k >= 0).  Quadratic products are dealiased by the 2/3 rule
before and after multiplication so the spectral quadrature is exact.
"""

from __future__ import annotations

import math
import os
import struct
from dataclasses import dataclass

import numpy as np

from .field import Grid, SampledField, lp_norm
from .inequalities import RELATIONS, solve_exponents
from .rearrange import decreasing_rearrangement, lorentz_norm, time_lorentz_norm
from .spectral import dealias, decompose, fractional_laplacian, lowpass_profile

__all__ = [
    "VelocityField",
    "leray_project",
    "divergence",
    "flux",
    "dyadic_flux_bound",
    "block_interpolation_check",
    "criterion_norms",
    "write_snapshot",
    "read_snapshot",
    "read_trajectory",
]


@dataclass(frozen=True)
class VelocityField:
    """Divergence-free three-component field with zero mean per component."""

    field: SampledField
    div_tolerance: float

    def __post_init__(self):
        if self.field.grid.n != 3 or self.field.components != 3:
            raise ValueError("velocity fields are three-component, n = 3")
        if self.div_tolerance > 1e-10:
            raise ValueError(
                f"divergence {self.div_tolerance} exceeds 1e-10; "
                "apply the projection first")

    @property
    def grid(self) -> Grid:
        return self.field.grid


def divergence(w: SampledField) -> SampledField:
    """Spectral divergence of a vector field."""
    ks = w.grid.k_meshgrid()
    total = np.zeros(w.grid.shape, dtype=complex)
    for i in range(w.grid.n):
        total += 1j * ks[i] * np.fft.fftn(w.values[i])
    return SampledField(w.grid, np.fft.ifftn(total).real)


def leray_project(w: SampledField) -> VelocityField:
    """Project onto divergence-free fields: v^(k) = (I - kk^T/|k|^2) w^(k).

    The zero mode is removed, so each output component has zero mean.
    """
    grid = w.grid
    if grid.n != 3 or w.components != 3:
        raise ValueError("projection expects a three-component field, n = 3")
    ks = grid.k_meshgrid()
    k2 = sum(k ** 2 for k in ks)
    k2safe = np.where(k2 > 0, k2, 1.0)
    what = [np.fft.fftn(w.values[i]) for i in range(3)]
    kdotw = sum(ks[i] * what[i] for i in range(3))
    out = np.empty((3,) + grid.shape)
    for i in range(3):
        vhat = what[i] - ks[i] * kdotw / k2safe
        vhat.flat[0] = 0.0
        out[i] = np.fft.ifftn(vhat).real
    v = SampledField(grid, out)
    # relative residual: spectral divergence against the largest gradient scale
    kmax = float(np.max(grid.k_magnitude()))
    scale = kmax * (float(np.max(np.abs(out))) or 1.0)
    tol = float(np.max(np.abs(divergence(v).values))) / scale
    return VelocityField(v, tol)


def _low_pass_vector(v: SampledField, Q: int) -> np.ndarray:
    mult = lowpass_profile(v.grid.k_magnitude() / 2.0 ** Q)
    return np.stack([np.fft.ifftn(np.fft.fftn(v.values[i]) * mult).real
                     for i in range(3)])


def flux(v: VelocityField, Q: int) -> float:
    """Energy flux past frequency 2^Q:
    Pi_Q = integral of Tr(S_Q(v (x) v) . grad S_Q v) dx,
    with the nonhomogeneous low-pass S_Q and dealiased products."""
    grid = v.grid
    w = dealias(v.field)
    sqv = _low_pass_vector(SampledField(grid, w.values), Q)
    ks = grid.k_meshgrid()
    mult = lowpass_profile(grid.k_magnitude() / 2.0 ** Q)
    total = 0.0
    for i in range(3):
        for j in range(3):
            # S_Q applied to the dealiased product v_i v_j
            prod = dealias(SampledField(grid, w.values[i] * w.values[j]))
            tij = np.fft.ifftn(np.fft.fftn(prod.values) * mult).real
            dj_i = np.fft.ifftn(1j * ks[i] * np.fft.fftn(sqv[j])).real
            total += np.sum(tij * dj_i)
    return float(total * grid.cell_measure)


def dyadic_flux_bound(v: VelocityField, Q: int) -> float:
    """sum_k 2^k |block_k v|_{L^3}^3 2^{-2|k-Q|/3} over nonhomogeneous
    blocks k >= -1."""
    grid = v.grid
    decs = [decompose(v.field.component(i), mode="nonhomogeneous")
            for i in range(3)]
    ks = sorted(set().union(*[d.blocks for d in decs]))
    total = 0.0
    for k in ks:
        stack = np.stack([d.blocks[k].values if k in d.blocks
                          else np.zeros(grid.shape) for d in decs])
        l3 = lp_norm(SampledField(grid, stack), 3.0)
        total += 2.0 ** k * l3 ** 3 * 2.0 ** (-2.0 * abs(k - Q) / 3.0)
    return float(total)


def block_interpolation_check(v: VelocityField, q: float) -> dict:
    """Per-block ratio of |block_k v|_{L^3} against
    |block_k v|_{L^2}^a |v|_{q,inf}^b with a = (2q-6)/(3(q-2)),
    b = q/(3(q-2)); at q = 4 the exponents are exactly (1/3, 2/3)."""
    if q <= 3:
        raise ValueError("interpolation exponents degenerate for q <= 3")
    a = (2.0 * q - 6.0) / (3.0 * (q - 2.0))
    b = q / (3.0 * (q - 2.0))
    grid = v.grid
    weak = lorentz_norm(decreasing_rearrangement(v.field), q, float("inf"))
    decs = [decompose(v.field.component(i), mode="nonhomogeneous")
            for i in range(3)]
    ks = sorted(set().union(*[d.blocks for d in decs]))
    ratios = {}
    for k in ks:
        stack = np.stack([d.blocks[k].values if k in d.blocks
                          else np.zeros(grid.shape) for d in decs])
        blk = SampledField(grid, stack)
        l3 = lp_norm(blk, 3.0)
        l2 = lp_norm(blk, 2.0)
        denom = l2 ** a * weak ** b
        if denom > 1e-300 * max(l3, 1.0) and l2 > 0:
            ratios[k] = l3 / denom
    return {"q": q, "exponents": (a, b), "ratios": ratios,
            "max_ratio": max(ratios.values()) if ratios else 0.0}


# ---------------------------------------------------------------------------
# Theorem-style criterion norms on snapshot trajectories

_CRITERIA = {
    # criterion -> (spatial target, time norm kind, relation name, ranges)
    1: ("id", "fixed", None, {}),
    2: ("id", "weak", "flux_crit_2", {"q": (4.0, math.inf)}),
    3: ("id", "strong", "flux_crit_3", {"q": (3.0, 4.0)}),
    4: ("grad", "strong", "flux_crit_4", {"q": (1.5, 1.8)}),
    5: ("lam", "strong", "flux_crit_5", {"q": (1.0, math.inf)}),
}


def _check_criterion(criterion: int, p: float, q: float, s: float):
    if criterion not in _CRITERIA:
        raise ValueError(f"criterion must be 1..5, got {criterion}")
    target, tkind, rel_name, ranges = _CRITERIA[criterion]
    if criterion == 1:
        if (p, q) != (4.0, 4.0):
            raise ValueError("criterion 1 fixes p = q = 4")
        return target, tkind
    lo, hi = ranges["q"]
    if not lo < q < hi:
        raise ValueError(
            f"criterion {criterion} requires {lo} < q < {hi}, got q = {q}")
    rel = RELATIONS[rel_name]
    known = {"p": p, "q": q}
    if criterion == 5:
        known["s"] = s
        if not s > 1:
            raise ValueError("criterion 5 requires s > 1")
        if not 1.0 / s < p < 3.0:
            raise ValueError("criterion 5 requires 1/s < p < 3")
    res = rel.residual({"inv_p": 1.0 / p, "inv_q": 1.0 / q, "s": s or 0.0})
    if abs(res) > 1e-9:
        raise ValueError(
            f"criterion {criterion}: indices violate {rel_name}, "
            f"residual {res:.3e}")
    return target, tkind


def criterion_norms(trajectory, criterion: int, p: float = 4.0,
                    q: float = 4.0, s: float = None,
                    t_end: float = None) -> dict:
    """Composite time-space norm of a snapshot trajectory for one of the
    five energy-equality criteria.

    trajectory: nonempty list of (time, VelocityField), times increasing.
    Each snapshot's spatial norm (weak Lorentz norm of v, grad v or
    Lambda^s v per the criterion) becomes one value of a step function in
    time whose duration runs to the next snapshot (or t_end for the last).
    """
    if not trajectory:
        raise ValueError("empty trajectory")
    target, tkind = _check_criterion(criterion, p, q, s)
    times = [t for t, _ in trajectory]
    if any(b <= a for a, b in zip(times, times[1:])):
        raise ValueError("snapshot times must be strictly increasing")
    if t_end is None:
        t_end = times[-1] + (times[-1] - times[-2] if len(times) > 1 else 1.0)
    durations = [b - a for a, b in zip(times, times[1:])] + [t_end - times[-1]]
    spatial = []
    for (_, v), dt in zip(trajectory, durations):
        if target == "id":
            f = v.field
        elif target == "grad":
            ks = v.grid.k_meshgrid()
            comps = []
            for i in range(3):
                fhat = np.fft.fftn(v.field.values[i])
                for j in range(3):
                    comps.append(np.fft.ifftn(1j * ks[j] * fhat).real)
            f = SampledField(v.grid, np.sqrt(sum(c ** 2 for c in comps)))
        else:  # lam
            comps = [fractional_laplacian(v.field.component(i), s).values
                     for i in range(3)]
            f = SampledField(v.grid, np.stack(comps))
        spatial.append((dt, lorentz_norm(decreasing_rearrangement(f),
                                         q, float("inf"))))
    if tkind == "weak":
        value = time_lorentz_norm(spatial, p, float("inf"))
    else:  # fixed (p=4) and strong cases: Lebesgue L^p in time
        value = time_lorentz_norm(spatial, p, p)
    return {
        "criterion": criterion,
        "p": p, "q": q, "s": s,
        "snapshots": len(trajectory),
        "spatial_norms": [v for _, v in spatial],
        "value": value,
        "finite": bool(np.isfinite(value)),
    }


# ---------------------------------------------------------------------------
# Snapshot files: header {n=3 (int32), N (int32), L (f64), time (f64)},
# then the three components in order, each N^3 float64, little-endian.

_HEADER = struct.Struct("<iidd")


def write_snapshot(path: str, v: VelocityField, time: float) -> None:
    grid = v.grid
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(grid.n, grid.N, grid.L, time))
        for i in range(3):
            fh.write(np.ascontiguousarray(
                v.field.values[i], dtype="<f8").tobytes())


def read_snapshot(path: str):
    with open(path, "rb") as fh:
        n, N, L, time = _HEADER.unpack(fh.read(_HEADER.size))
        if n != 3:
            raise ValueError(f"{path}: snapshot dimension must be 3, got {n}")
        grid = Grid(n, N, L)
        count = N ** 3
        comps = []
        for _ in range(3):
            buf = fh.read(8 * count)
            if len(buf) != 8 * count:
                raise ValueError(f"{path}: truncated component data")
            comps.append(np.frombuffer(buf, dtype="<f8").reshape(grid.shape))
    field = SampledField(grid, np.stack(comps))
    kmax = float(np.max(grid.k_magnitude()))
    scale = kmax * (float(np.max(np.abs(field.values))) or 1.0)
    tol = float(np.max(np.abs(divergence(field).values))) / scale
    return time, VelocityField(field, tol)


def read_trajectory(directory: str):
    """All snapshot files in a directory, sorted by recorded time."""
    paths = sorted(
        os.path.join(directory, name)
        for name in os.listdir(directory)
        if not name.startswith("."))
    if not paths:
        raise ValueError(f"no snapshot files in {directory}")
    snaps = [read_snapshot(p) for p in paths]
    snaps.sort(key=lambda ts: ts[0])
    return snaps
