"""Distribution functions, decreasing rearrangements and Lorentz norms.

Everything here is exact step-function arithmetic: the rearrangement of a
sampled field is a finite step function (level, cumulative measure) and all
norm integrals are evaluated in closed form over its steps, so the only
discretization error in a Lorentz norm is the sampling of the field itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import SampledField

__all__ = [
    "LayerProfile",
    "distribution_function",
    "decreasing_rearrangement",
    "layer_profile_from_pairs",
    "double_star",
    "lorentz_norm",
    "time_lorentz_norm",
]


@dataclass(frozen=True)
class LayerProfile:
    """Step-function representation of a decreasing rearrangement.

    levels: strictly decreasing positive values v_1 > ... > v_m
    cum_measures: strictly increasing t_1 < ... < t_m with
        t_k = |{ |f| >= v_k }|;  f*(t) = v_k on [t_{k-1}, t_k), t_0 = 0.
    """

    levels: np.ndarray
    cum_measures: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.levels, dtype=float)
        t = np.asarray(self.cum_measures, dtype=float)
        object.__setattr__(self, "levels", v)
        object.__setattr__(self, "cum_measures", t)
        if v.shape != t.shape or v.ndim != 1:
            raise ValueError("levels and cum_measures must be 1-D and aligned")
        if v.size:
            if np.any(v <= 0):
                raise ValueError("levels must be positive")
            if np.any(np.diff(v) >= 0):
                raise ValueError("levels must be strictly decreasing")
            if t[0] <= 0 or np.any(np.diff(t) <= 0):
                raise ValueError("cumulative measures must be strictly increasing")

    @property
    def is_empty(self) -> bool:
        return self.levels.size == 0

    @property
    def total_measure(self) -> float:
        return 0.0 if self.is_empty else float(self.cum_measures[-1])

    def step_widths(self) -> np.ndarray:
        return np.diff(self.cum_measures, prepend=0.0)

    def evaluate(self, t: float) -> float:
        """f*(t): value of the rearrangement at measure t >= 0."""
        if self.is_empty or t >= self.total_measure:
            return 0.0
        k = int(np.searchsorted(self.cum_measures, t, side="right"))
        return float(self.levels[k])

    def to_table(self) -> str:
        """Two-column text table (level, cumulative measure)."""
        lines = [f"{v:.17g}\t{t:.17g}"
                 for v, t in zip(self.levels, self.cum_measures)]
        return "\n".join(lines)

    @staticmethod
    def from_table(text: str) -> "LayerProfile":
        rows = [ln.split("\t") for ln in text.splitlines() if ln.strip()]
        v = [float(r[0]) for r in rows]
        t = [float(r[1]) for r in rows]
        return LayerProfile(np.array(v), np.array(t))


def distribution_function(f: SampledField, alpha: float) -> float:
    """Measure of the superlevel set { |f| > alpha }."""
    if alpha < 0:
        raise ValueError("threshold must be nonnegative")
    return float(f.grid.cell_measure * np.count_nonzero(f.magnitude() > alpha))


def decreasing_rearrangement(f: SampledField) -> LayerProfile:
    """Exact step profile from sorting |f| and merging equal levels."""
    mag = f.magnitude().ravel()
    mag = mag[mag > 0]
    if mag.size == 0:
        return LayerProfile(np.array([]), np.array([]))
    levels, counts = np.unique(mag, return_counts=True)
    levels = levels[::-1]
    counts = counts[::-1]
    cum = np.cumsum(counts) * f.grid.cell_measure
    return LayerProfile(levels, cum)


def layer_profile_from_pairs(pairs) -> LayerProfile:
    """Profile from (measure_weight, value) pairs, e.g. a time series."""
    vals = {}
    for w, v in pairs:
        if w <= 0:
            raise ValueError("measure weights must be positive")
        if v < 0:
            raise ValueError("values must be nonnegative")
        if v > 0:
            vals[v] = vals.get(v, 0.0) + w
    if not vals:
        return LayerProfile(np.array([]), np.array([]))
    levels = np.array(sorted(vals, reverse=True))
    cum = np.cumsum([vals[v] for v in levels])
    return LayerProfile(levels, np.asarray(cum))


def _partial_sums(profile: LayerProfile) -> np.ndarray:
    """S_k = integral of f* over [0, t_k] for each step k."""
    widths = profile.step_widths()
    return np.cumsum(profile.levels * widths)


def double_star(profile: LayerProfile, t: float) -> float:
    """f**(t) = (1/t) * integral of f* over [0, t], exact per piece."""
    if t <= 0:
        raise ValueError("t must be positive")
    if profile.is_empty:
        return 0.0
    cums = profile.cum_measures
    S = _partial_sums(profile)
    if t >= cums[-1]:
        return float(S[-1] / t)
    k = int(np.searchsorted(cums, t, side="right"))
    prev_t = cums[k - 1] if k else 0.0
    prev_S = S[k - 1] if k else 0.0
    return float((prev_S + profile.levels[k] * (t - prev_t)) / t)


def _plain_norm(profile: LayerProfile, p: float, q: float) -> float:
    v = profile.levels
    t = profile.cum_measures
    if np.isinf(q):
        if np.isinf(p):
            return float(v[0])
        # sup over each step attained at the right endpoint (t^{1/p} increases)
        return float(np.max(t ** (1.0 / p) * v))
    # ||f||^q = sum_k v_k^q (p/q) (t_k^{q/p} - t_{k-1}^{q/p})
    tq = t ** (q / p)
    inc = np.diff(tq, prepend=0.0)
    return float((np.sum(v ** q * inc) * p / q) ** (1.0 / q))


def _star_piece_integral(a, b, vk, ck, p, q):
    """Integral of (t^{1/p} (vk + ck/t))^q dt/t over [a, b]."""
    if ck == 0.0:
        e = q / p
        return vk ** q * (b ** e - a ** e) / e
    if float(q).is_integer() and q <= 64:
        qi = int(q)
        total = 0.0
        for j in range(qi + 1):
            coef = math.comb(qi, j) * vk ** (qi - j) * ck ** j
            e = q / p - j
            if abs(e) < 1e-14:
                total += coef * math.log(b / a)
            else:
                total += coef * (b ** e - a ** e) / e
        return total
    # non-integer q: Gauss-Legendre on the piece (smooth integrand)
    nodes, weights = np.polynomial.legendre.leggauss(48)
    x = 0.5 * (b - a) * nodes + 0.5 * (b + a)
    w = 0.5 * (b - a) * weights
    vals = (x ** (1.0 / p) * (vk + ck / x)) ** q / x
    return float(np.sum(w * vals))


def _star_norm(profile: LayerProfile, p: float, q: float) -> float:
    if not p > 1:
        raise ValueError("star variant requires p > 1")
    if not np.isinf(q) and q < 1:
        raise ValueError("star variant requires q >= 1 when q < inf")
    v = profile.levels
    t = profile.cum_measures
    S = _partial_sums(profile)
    t_prev = np.concatenate(([0.0], t[:-1]))
    S_prev = np.concatenate(([0.0], S[:-1]))
    # on [t_{k-1}, t_k]: f**(t) = v_k + c_k / t
    c = S_prev - v * t_prev
    if np.isinf(q):
        if np.isinf(p):
            return float(v[0])
        # t^{1/p} f**(t) has no interior maximum on a step for p > 1
        cand = t ** (1.0 / p) * (v + c / t)
        return float(np.max(cand))
    total = 0.0
    for k in range(v.size):
        a = t_prev[k]
        b = t[k]
        if a == 0.0:
            # f** = v_1 on the first step
            e = q / p
            total += v[0] ** q * b ** e / e
        else:
            total += _star_piece_integral(a, b, v[k], c[k], p, q)
    # hyperbolic tail: f**(t) = S_m / t for t > t_m, converges since p > 1
    if not np.isinf(p):
        e = q / p - q
        total += S[-1] ** q * (-(t[-1] ** e) / e)
    return float(total ** (1.0 / q))


def lorentz_norm(profile: LayerProfile, p: float, q: float,
                 variant: str = "plain") -> float:
    """Lorentz L^{p,q} norm of a step profile.

    variant="plain" uses the rearrangement f*; variant="star" uses the
    running average f** (equivalent norm, triangle inequality for p > 1).
    For p = inf with q < inf the space is trivial and the norm is 0.
    """
    if p <= 0 or q <= 0:
        raise ValueError("indices must be positive")
    if profile.is_empty:
        return 0.0
    if np.isinf(p) and not np.isinf(q):
        return 0.0  # L^{inf,q} = {0} for q < inf
    if variant == "plain":
        return _plain_norm(profile, p, q)
    if variant == "star":
        return _star_norm(profile, p, q)
    raise ValueError(f"unknown variant {variant!r}")


def time_lorentz_norm(series, p: float, q: float) -> float:
    """Lorentz norm in the time direction over (duration, value) snapshots."""
    profile = layer_profile_from_pairs(series)
    return lorentz_norm(profile, p, q)
