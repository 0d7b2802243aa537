"""Sampled fields on periodic boxes and analytic test-function families.

The whole-space setting is modeled by a periodic box of side L centered at
the origin; test profiles are chosen so that they are supported (or
numerically negligible) inside the box.  Cell centers sit at
x_i = -L/2 + i*h with h = L/N, so the origin is a grid point and the
frequency lattice is (2*pi/L) * Z^n.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

__all__ = [
    "Grid",
    "SampledField",
    "AnalyticProfile",
    "UNIT_BALL_VOLUME",
    "sample",
    "dilate",
    "lp_norm",
    "profile_to_json",
    "profile_from_json",
]

# Volume of the unit ball in R^n for n = 1, 2, 3.
UNIT_BALL_VOLUME = {1: 2.0, 2: math.pi, 3: 4.0 * math.pi / 3.0}

_FAMILIES = (
    "gaussian",
    "bump",
    "ball_indicator",
    "power_law",
    "pure_mode",
    "band_limited_random",
)


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on the box [-L/2, L/2)^n."""

    n: int
    N: int
    L: float

    def __post_init__(self):
        if self.n not in (1, 2, 3):
            raise ValueError(f"dimension must be 1, 2 or 3, got {self.n}")
        if self.N < 8 or (self.N & (self.N - 1)) != 0:
            raise ValueError(f"N must be a power of two >= 8, got {self.N}")
        if not self.L > 0:
            raise ValueError(f"box side must be positive, got {self.L}")

    @property
    def h(self) -> float:
        return self.L / self.N

    @property
    def cell_measure(self) -> float:
        return self.h ** self.n

    @property
    def shape(self) -> tuple:
        return (self.N,) * self.n

    def axes(self) -> list:
        """Cell-center coordinates along one axis, origin included."""
        i = np.arange(self.N)
        x = -0.5 * self.L + i * self.h
        return [x] * self.n

    def meshgrid(self) -> list:
        return list(np.meshgrid(*self.axes(), indexing="ij"))

    def radius(self) -> np.ndarray:
        """Distance from the origin at each cell center."""
        xs = self.meshgrid()
        return np.sqrt(sum(x ** 2 for x in xs))

    def k_axes(self) -> list:
        """Angular wavenumbers (2*pi/L)*m along each axis, FFT order."""
        k = 2.0 * np.pi * np.fft.fftfreq(self.N, d=self.h)
        return [k] * self.n

    def k_meshgrid(self) -> list:
        return list(np.meshgrid(*self.k_axes(), indexing="ij"))

    def k_magnitude(self) -> np.ndarray:
        ks = self.k_meshgrid()
        return np.sqrt(sum(k ** 2 for k in ks))

    def mode_magnitude(self) -> np.ndarray:
        """Integer-mode magnitude |m| on the FFT lattice."""
        m = np.fft.fftfreq(self.N, d=1.0 / self.N)
        ms = np.meshgrid(*([m] * self.n), indexing="ij")
        return np.sqrt(sum(mm ** 2 for mm in ms))


@dataclass(frozen=True)
class SampledField:
    """Real samples of a scalar or vector function, one per grid cell.

    Scalar fields store values with shape grid.shape; vector fields with
    shape (components,) + grid.shape.
    """

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", v)
        if v.shape == self.grid.shape:
            pass
        elif v.shape == (self.grid.n,) + self.grid.shape:
            pass
        else:
            raise ValueError(
                f"value shape {v.shape} incompatible with grid shape {self.grid.shape}"
            )
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")

    @property
    def components(self) -> int:
        if self.values.shape == self.grid.shape:
            return 1
        return self.values.shape[0]

    @property
    def is_scalar(self) -> bool:
        return self.components == 1

    def magnitude(self) -> np.ndarray:
        """Pointwise absolute value (scalar) or Euclidean magnitude (vector)."""
        if self.is_scalar:
            return np.abs(self.values)
        return np.sqrt(np.sum(self.values ** 2, axis=0))

    def component(self, i: int) -> "SampledField":
        if self.is_scalar:
            if i != 0:
                raise IndexError("scalar field has a single component")
            return self
        return SampledField(self.grid, self.values[i])

    def scaled(self, c: float) -> "SampledField":
        return SampledField(self.grid, c * self.values)


@dataclass(frozen=True)
class AnalyticProfile:
    """Closed-form test profile; sampling evaluates it at cell centers.

    Families and their params:
      gaussian:            width (amp * exp(-|x|^2/width^2))
      bump:                radius (smooth, compactly supported in |x|<radius)
      ball_indicator:      radius
      power_law:           alpha, truncation (amp * |x|^-alpha on |x|<=truncation,
                           capped at the first-cell value)
      pure_mode:           wavevector (tuple of reals; amp * cos(k.x))
      band_limited_random: shell_lo, shell_hi, seed, n_modes, scale, envelope
                           (sum of seeded lattice modes with shell_lo <=
                           |xi| <= shell_hi; dilations rescale the shell;
                           an optional gaussian envelope of the given width
                           localizes the field so that box norms behave
                           like whole-space norms under dilation)
    """

    family: str
    params: dict = field(default_factory=dict)
    amplitude: float = 1.0

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown profile family {self.family!r}")


def _gaussian_width(profile):
    return float(profile.params.get("width", 1.0))


def dilate(profile: AnalyticProfile, lam: float) -> AnalyticProfile:
    """Profile of u_lam(x) = u(lam*x), exact at the analytic level."""
    if not lam > 0:
        raise ValueError("dilation factor must be positive")
    if lam == 1.0:
        return profile
    fam, p = profile.family, dict(profile.params)
    if fam == "gaussian":
        p["width"] = _gaussian_width(profile) / lam
    elif fam in ("bump", "ball_indicator"):
        p["radius"] = float(p.get("radius", 1.0)) / lam
    elif fam == "power_law":
        # |lam*x|^-a = lam^-a |x|^-a, support shrinks to truncation/lam
        alpha = float(p["alpha"])
        p["truncation"] = float(p["truncation"]) / lam
        return AnalyticProfile(fam, p, profile.amplitude * lam ** (-alpha))
    elif fam == "pure_mode":
        p["wavevector"] = tuple(lam * k for k in p["wavevector"])
    elif fam == "band_limited_random":
        p["shell_lo"] = float(p["shell_lo"]) * lam
        p["shell_hi"] = float(p["shell_hi"]) * lam
        p["scale"] = float(p.get("scale", 1.0)) * lam
        if "envelope" in p:
            p["envelope"] = float(p["envelope"]) / lam
    return AnalyticProfile(fam, p, profile.amplitude)


def _band_limited_modes(profile, grid):
    """Base lattice modes of a band_limited_random profile on this grid.

    Modes are drawn on the even sublattice of the *base* (scale=1) shell so
    that dyadic dilations map lattice modes to lattice modes; the dilated
    shell reuses the base coefficients at rescaled wavevectors.
    """
    scale = float(profile.params.get("scale", 1.0))
    lo = float(profile.params["shell_lo"]) / scale
    hi = float(profile.params["shell_hi"]) / scale
    unit = 2.0 * np.pi / grid.L
    max_mode = grid.N // 2 - 1
    rng_range = int(hi / unit) + 1
    if rng_range > max_mode:
        rng_range = max_mode
    modes = []
    axis = range(-rng_range, rng_range + 1)
    if grid.n == 1:
        candidates = [(m,) for m in axis]
    elif grid.n == 2:
        candidates = [(a, b) for a in axis for b in axis]
    else:
        candidates = [(a, b, c) for a in axis for b in axis for c in axis]
    for m in candidates:
        if any(mi % 2 for mi in m):
            continue
        mag = unit * math.sqrt(sum(mi ** 2 for mi in m))
        if lo <= mag <= hi and mag > 0:
            modes.append(m)
    modes.sort()
    return modes, scale


def _sample_band_limited(profile, grid):
    modes, scale = _band_limited_modes(profile, grid)
    if not modes:
        raise ValueError("no lattice modes inside the requested shell")
    seed = int(profile.params.get("seed", 0))
    n_modes = int(profile.params.get("n_modes", min(len(modes), 64)))
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(modes), size=min(n_modes, len(modes)), replace=False)
    amps = rng.standard_normal(len(idx))
    phases = rng.uniform(0.0, 2.0 * np.pi, len(idx))
    xs = grid.meshgrid()
    out = np.zeros(grid.shape)
    unit = 2.0 * np.pi / grid.L
    nyq = unit * (grid.N // 2)
    for a, ph, i in zip(amps, phases, idx):
        m = modes[i]
        kvec = [unit * mi * scale for mi in m]
        if any(abs(kv) >= nyq for kv in kvec):
            raise ValueError(
                f"dilated mode {m} at scale {scale} exceeds the grid Nyquist"
            )
        for kv in kvec:
            _require_on_lattice(kv, unit)
        phase_field = sum(kv * x for kv, x in zip(kvec, xs))
        out += a * np.cos(phase_field + ph)
    env = profile.params.get("envelope")
    if env is not None:
        out = out * np.exp(-(grid.radius() / float(env)) ** 2)
    return out


def _require_on_lattice(kv, unit):
    m = kv / unit
    if abs(m - round(m)) > 1e-9:
        raise ValueError(f"wavevector component {kv} is off the grid lattice")


def sample(profile: AnalyticProfile, grid: Grid) -> SampledField:
    """Evaluate a profile at cell centers (ball membership by center test)."""
    fam, p, amp = profile.family, profile.params, profile.amplitude
    if fam == "gaussian":
        r = grid.radius()
        w = _gaussian_width(profile)
        vals = np.exp(-(r / w) ** 2)
    elif fam == "bump":
        R = float(p.get("radius", 1.0))
        if R > grid.L / 2:
            raise ValueError("bump radius exceeds half the box side")
        r = grid.radius()
        vals = np.zeros(grid.shape)
        inside = r < R
        t = (r[inside] / R) ** 2
        vals[inside] = np.exp(1.0 - 1.0 / (1.0 - t))
    elif fam == "ball_indicator":
        R = float(p.get("radius", 1.0))
        if R > grid.L / 2:
            raise ValueError("ball radius exceeds half the box side")
        vals = (grid.radius() < R).astype(float)
    elif fam == "power_law":
        alpha = float(p["alpha"])
        R = p.get("truncation")
        if R is None:
            if alpha >= grid.n:
                raise ValueError(
                    f"|x|^-{alpha} is not integrable in dimension {grid.n} "
                    "without truncation"
                )
            R = grid.L / 2
        R = float(R)
        if R > grid.L / 2:
            raise ValueError("truncation radius exceeds half the box side")
        r = grid.radius()
        cap = grid.h ** (-alpha)  # value on the first cell off the origin
        with np.errstate(divide="ignore"):
            vals = np.where(r > 0, np.minimum(r ** (-alpha), cap), cap)
        vals = np.where(r <= R, vals, 0.0)
    elif fam == "pure_mode":
        kvec = tuple(float(k) for k in p["wavevector"])
        if len(kvec) != grid.n:
            raise ValueError("wavevector dimension does not match the grid")
        # wavevector given in integer-mode units; physical k = (2*pi/L)*m
        unit = 2.0 * np.pi / grid.L
        for kv in kvec:
            if abs(kv - round(kv)) > 1e-9:
                raise ValueError(f"mode component {kv} is off the grid lattice")
            if abs(kv) >= grid.N // 2:
                raise ValueError(f"mode component {kv} is at or above Nyquist")
        xs = grid.meshgrid()
        phase = sum(unit * kv * x for kv, x in zip(kvec, xs))
        vals = np.cos(phase)
    elif fam == "band_limited_random":
        vals = _sample_band_limited(profile, grid)
    else:  # pragma: no cover
        raise ValueError(fam)
    return SampledField(grid, amp * vals)


def lp_norm(f: SampledField, p: float) -> float:
    """Discrete L^p norm with measure weight h^n.

    Vector fields are reduced to their pointwise Euclidean magnitude first.
    """
    if p < 1:
        raise ValueError(f"p must be >= 1, got {p}")
    mag = f.magnitude()
    if np.isinf(p):
        return float(mag.max())
    return float((f.grid.cell_measure * np.sum(mag ** p)) ** (1.0 / p))


# ---------------------------------------------------------------------------
# Continuum oracles (exact whole-space expressions for select profiles)

def continuum_distribution(profile: AnalyticProfile, n: int, alpha: float) -> float:
    """Closed-form distribution function f_*(alpha) on R^n, where available."""
    omega = UNIT_BALL_VOLUME[n]
    amp = abs(profile.amplitude)
    if alpha >= amp and profile.family in ("ball_indicator",):
        return 0.0
    if profile.family == "ball_indicator":
        return omega * float(profile.params.get("radius", 1.0)) ** n
    if profile.family == "gaussian":
        if alpha >= amp:
            return 0.0
        w = _gaussian_width(profile)
        return omega * (w * math.sqrt(math.log(amp / alpha))) ** n
    if profile.family == "power_law":
        a = float(profile.params["alpha"])
        # untruncated oracle: {|x|^-a > alpha/amp} is a ball
        return omega * (amp / alpha) ** (n / a)
    raise NotImplementedError(f"no distribution oracle for {profile.family}")


def continuum_rearrangement(profile: AnalyticProfile, n: int, t: float) -> float:
    """Closed-form decreasing rearrangement f*(t) on R^n, where available."""
    omega = UNIT_BALL_VOLUME[n]
    amp = abs(profile.amplitude)
    if profile.family == "ball_indicator":
        R = float(profile.params.get("radius", 1.0))
        return amp if t < omega * R ** n else 0.0
    if profile.family == "gaussian":
        w = _gaussian_width(profile)
        return amp * math.exp(-((t / (omega * w ** n)) ** (2.0 / n)))
    if profile.family == "power_law":
        a = float(profile.params["alpha"])
        return amp * (t / omega) ** (-a / n)
    raise NotImplementedError(f"no rearrangement oracle for {profile.family}")


def continuum_lp_norm(profile: AnalyticProfile, n: int, p: float) -> float:
    """Closed-form whole-space L^p norm, where available."""
    amp = abs(profile.amplitude)
    if profile.family == "gaussian":
        w = _gaussian_width(profile)
        if np.isinf(p):
            return amp
        return amp * (w ** n * (math.pi / p) ** (n / 2.0)) ** (1.0 / p)
    if profile.family == "ball_indicator":
        R = float(profile.params.get("radius", 1.0))
        m = UNIT_BALL_VOLUME[n] * R ** n
        if np.isinf(p):
            return amp
        return amp * m ** (1.0 / p)
    raise NotImplementedError(f"no L^p oracle for {profile.family}")


# ---------------------------------------------------------------------------
# JSON round trip

def profile_to_json(profile: AnalyticProfile, grid: Grid = None) -> str:
    doc = {"family": profile.family, "params": dict(profile.params),
           "amplitude": profile.amplitude}
    if grid is not None:
        doc["grid"] = {"n": grid.n, "N": grid.N, "L": grid.L}
    return json.dumps(doc, sort_keys=True)


def profile_from_json(text: str):
    doc = json.loads(text)
    profile = AnalyticProfile(doc["family"], dict(doc.get("params", {})),
                              float(doc.get("amplitude", 1.0)))
    grid = None
    if "grid" in doc:
        g = doc["grid"]
        grid = Grid(int(g["n"]), int(g["N"]), float(g["L"]))
    return profile, grid
