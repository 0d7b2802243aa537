"""Inequality registry and verification engine.

Each registered inequality is a data record: an exponent relation, an
admissibility predicate, an LHS functional and a list of (RHS functional,
power) factors, plus an optional explicit constant.  "There exists C" is
operationalized as: the max LHS/RHS ratio over a published sweep of profiles
and dilations is finite and stable under dilation.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from importlib import resources

import numpy as np

from .field import AnalyticProfile, SampledField, dilate, lp_norm, sample
from .rearrange import decreasing_rearrangement, lorentz_norm
from .spaces import (SpaceParams, besov_lorentz_norm, sobolev_lorentz_norm,
                     triebel_lorentz_norm)
from .spectral import (decompose, derivative, fractional_laplacian, low_pass,
                       convolve)

__all__ = [
    "ExponentRelation",
    "GN_RELATION",
    "RELATIONS",
    "solve_exponents",
    "InequalityCase",
    "load_registry",
    "admissible",
    "ratio",
    "VerificationReport",
    "sweep",
    "balance_j0",
    "two_term_split",
    "counterexample_probe",
]

_INF = float("inf")

# Variables p, q, r enter every relation through their reciprocals; inf
# maps to 0 so endpoint exponents need no special-casing.
_INVERTED = ("p", "q", "r", "p1", "q1", "q2", "m", "M")


@dataclass(frozen=True)
class ExponentRelation:
    """Multilinear residual over {1/p, 1/q, 1/r, theta, alpha, s, sigma, n}.

    terms maps a monomial (tuple of variable names, reciprocal variables
    spelled inv_p etc.) to its coefficient; the relation holds when the
    residual vanishes.  No variable repeats inside a monomial, so the
    residual is affine in each variable separately and single-unknown
    solving is a two-point linear solve.
    """

    name: str
    terms: dict

    def variables(self):
        out = set()
        for mono in self.terms:
            out.update(mono)
        return out

    def residual(self, internal: dict) -> float:
        total = 0.0
        for mono, coeff in self.terms.items():
            prod = coeff
            for v in mono:
                prod *= internal[v]
            total += prod
        return total


def _to_internal(params: dict) -> dict:
    out = {}
    for k, v in params.items():
        if k in _INVERTED:
            out["inv_" + k] = 0.0 if np.isinf(v) else 1.0 / v
        else:
            out[k] = float(v)
    return out


def _from_internal(name: str, value: float):
    if name.startswith("inv_"):
        return _INF if abs(value) < 1e-14 else 1.0 / value
    return value


def _external_name(internal_name: str) -> str:
    return internal_name[4:] if internal_name.startswith("inv_") else internal_name


# n/p - sigma = theta*n/q + (1-theta)*(n/r - s)
GN_RELATION = ExponentRelation("gn", {
    ("n", "inv_p"): 1.0,
    ("sigma",): -1.0,
    ("theta", "n", "inv_q"): -1.0,
    ("n", "inv_r"): -1.0,
    ("s",): 1.0,
    ("theta", "n", "inv_r"): 1.0,
    ("theta", "s"): -1.0,
})

# 0 = theta*n/p + (1-theta)*(n/r - s)
_SUP_RELATION = ExponentRelation("uniform_endpoint", {
    ("theta", "n", "inv_p"): 1.0,
    ("n", "inv_r"): 1.0,
    ("s",): -1.0,
    ("theta", "n", "inv_r"): -1.0,
    ("theta", "s"): 1.0,
})

# 1/p = alpha/q + (1-alpha)/r
_INTERP_RELATION = ExponentRelation("interpolation_characteristic", {
    ("inv_p",): 1.0,
    ("alpha", "inv_q"): -1.0,
    ("inv_r",): -1.0,
    ("alpha", "inv_r"): 1.0,
})

# n/p = n/r - s (Sobolev-type trade of smoothness for integrability)
_SOBOLEV_RELATION = ExponentRelation("sobolev_trade", {
    ("n", "inv_p"): 1.0,
    ("n", "inv_r"): -1.0,
    ("s",): 1.0,
})

# time-space criteria for the energy-flux theorem
_CRIT_RELATIONS = {
    # 2/p + 2/q = 1
    "flux_crit_2": ExponentRelation("flux_crit_2", {
        ("inv_p",): 2.0, ("inv_q",): 2.0, (): -1.0}),
    # 1/p + 3/q = 1
    "flux_crit_3": ExponentRelation("flux_crit_3", {
        ("inv_p",): 1.0, ("inv_q",): 3.0, (): -1.0}),
    # 1/p + 3/q = 2
    "flux_crit_4": ExponentRelation("flux_crit_4", {
        ("inv_p",): 1.0, ("inv_q",): 3.0, (): -2.0}),
    # 1/p + 6/(5q) = 2s/5 + 3/5
    "flux_crit_5": ExponentRelation("flux_crit_5", {
        ("inv_p",): 1.0, ("inv_q",): 1.2, ("s",): -0.4, (): -0.6}),
}

RELATIONS = {
    "gn": GN_RELATION,
    "uniform_endpoint": _SUP_RELATION,
    "interpolation_characteristic": _INTERP_RELATION,
    "sobolev_trade": _SOBOLEV_RELATION,
    **_CRIT_RELATIONS,
}


def solve_exponents(relation: ExponentRelation, known: dict) -> dict:
    """Solve the relation for its single missing variable.

    known maps external names (p, q, r, theta, alpha, s, sigma, n) to
    values; p/q/r may be inf.  Exactly one relation variable must be
    absent; the unique solution is returned as a completed copy of known.
    """
    internal = _to_internal(known)
    needed = relation.variables()
    missing = sorted(needed - set(internal))
    if len(missing) != 1:
        if not missing:
            raise ValueError("no unknown left: assignment is over-determined")
        raise ValueError(f"under-determined: missing {missing}")
    unk = missing[0]
    trial = dict(internal)
    trial[unk] = 0.0
    f0 = relation.residual(trial)
    trial[unk] = 1.0
    f1 = relation.residual(trial)
    slope = f1 - f0
    if abs(slope) < 1e-14:
        raise ValueError(
            f"no solution: relation {relation.name} has zero coefficient "
            f"on {_external_name(unk)} at this assignment")
    x = -f0 / slope
    trial[unk] = x
    if abs(relation.residual(trial)) > 1e-12:
        raise ValueError("relation residual exceeded 1e-12 after solving")
    out = dict(known)
    out[_external_name(unk)] = _from_internal(unk, x)
    return out


# ---------------------------------------------------------------------------
# Registry


@dataclass(frozen=True)
class InequalityCase:
    """One registered inequality: LHS functional, weighted RHS factors,
    admissibility constraints and an optional explicit constant."""

    id: str
    kind: str                 # interpolation | product | embedding | equality
    inputs: int
    lhs: dict
    rhs: tuple
    constraints: tuple = ()
    constant: str = None
    note: str = ""

    def __post_init__(self):
        for spec in (self.lhs, *[f["spec"] for f in self.rhs]):
            if spec.get("norm") not in ("lorentz", "lorentz_star", "lp",
                                        "linf", "besov", "triebel", "sobolev"):
                raise ValueError(f"{self.id}: unknown norm in {spec}")


def _as_case(rec: dict) -> InequalityCase:
    return InequalityCase(
        id=rec["id"],
        kind=rec.get("kind", "interpolation"),
        inputs=rec.get("inputs", 1),
        lhs=rec["lhs"],
        rhs=tuple({"spec": r["spec"], "power": r.get("power", 1)}
                  for r in rec["rhs"]),
        constraints=tuple(rec.get("constraints", ())),
        constant=rec.get("constant"),
        note=rec.get("note", ""),
    )


def load_registry() -> dict:
    """Cases from the packaged data file, keyed by id."""
    text = resources.files("lorentzlp").joinpath("data/cases.json").read_text()
    return {rec["id"]: _as_case(rec) for rec in json.loads(text)}


# ---------------------------------------------------------------------------
# Parameter expressions and admissibility

def _evalx(expr, params: dict) -> float:
    """Evaluate a literal or a restricted arithmetic expression over params."""
    if isinstance(expr, (int, float)):
        return float(expr)
    if expr == "inf":
        return _INF
    env = {k: float(v) for k, v in params.items()}
    env["inf"] = _INF
    return float(eval(expr, {"__builtins__": {}}, env))  # noqa: S307


def admissible(case: InequalityCase, params: dict):
    """Check every constraint clause; returns (ok, list of failed reasons)."""
    reasons = []
    for c in case.constraints:
        if "range" in c:
            val = _evalx(c["range"], params)
            lo, hi = c.get("lo"), c.get("hi")
            if lo is not None:
                lo_v = _evalx(lo, params)
                if val < lo_v or (c.get("lo_open") and val <= lo_v):
                    reasons.append(f"{c['range']} = {val} violates lower "
                                   f"bound {lo}" +
                                   (" (open)" if c.get("lo_open") else ""))
            if hi is not None:
                hi_v = _evalx(hi, params)
                if val > hi_v or (c.get("hi_open") and val >= hi_v):
                    reasons.append(f"{c['range']} = {val} violates upper "
                                   f"bound {hi}" +
                                   (" (open)" if c.get("hi_open") else ""))
        elif "theta_window" in c:
            th = params["theta"]
            hi = 1.0 - params["sigma"] / params["s"]
            if not (0.0 < th < hi):
                reasons.append(
                    f"theta = {th} outside the open window (0, {hi})")
        elif "exclusion_line" in c:
            gap = (params["s"] - params["n"] / params["r"]
                   - params["sigma"] + params["n"] / params["p"])
            if abs(gap) < 1e-9:
                reasons.append(
                    "exponents lie on the exclusion line "
                    "s - n/r = sigma - n/p")
        elif "on_exclusion_line" in c:
            gap = (params["s"] - params["n"] / params["r"]
                   - params["sigma"] + params["n"] / params["p"])
            if abs(gap) > 1e-9:
                reasons.append(
                    "probe parameters are off the exclusion line "
                    "s - n/r = sigma - n/p")
        elif "relation" in c:
            rel = RELATIONS[c["relation"]]
            res = rel.residual(_to_internal(params))
            if abs(res) > 1e-9:
                reasons.append(
                    f"relation {rel.name} residual {res:.3e} exceeds 1e-9")
        elif "lin" in c:
            # sum of coeff/var + const = 0 over reciprocal variables
            total = c["lin"].get("const", 0.0)
            for v, coeff in c["lin"]["terms"].items():
                pv = _evalx(v, params)
                total += coeff * (0.0 if np.isinf(pv) else 1.0 / pv)
            if abs(total) > 1e-9:
                reasons.append(f"index balance {c['lin']} off by {total:.3e}")
        else:
            raise ValueError(f"unknown constraint clause {c}")
    return (not reasons), reasons


# ---------------------------------------------------------------------------
# Functional evaluation

def _apply_target(u: SampledField, target: str, params: dict,
                  second: SampledField = None) -> SampledField:
    if target == "id" or target == "f":
        return u
    if target == "g":
        if second is None:
            raise ValueError("two-input functional without a second field")
        return second
    if target == "product":
        if second is None:
            raise ValueError("product functional needs two fields")
        return SampledField(u.grid, u.values * second.values)
    if target == "convolution":
        if second is None:
            raise ValueError("convolution functional needs two fields")
        return convolve(u, second)
    if target.startswith("lam:"):
        order = _evalx(target[4:], params)
        if order == 0.0:
            return u
        return fractional_laplacian(u, order)
    if target.startswith("abs_pow:"):
        lam = _evalx(target[8:], params)
        return SampledField(u.grid, np.abs(u.values) ** lam)
    if target == "grad_mag":
        comps = [derivative(u, ax).values for ax in range(u.grid.n)]
        return SampledField(u.grid, np.sqrt(sum(c ** 2 for c in comps)))
    raise ValueError(f"unknown functional target {target!r}")


def _functional(u: SampledField, spec: dict, params: dict,
                second: SampledField = None) -> float:
    tgt = _apply_target(u, spec.get("target", "id"), params, second)
    norm = spec["norm"]
    if norm == "lp":
        return lp_norm(tgt, _evalx(spec["p"], params))
    if norm == "linf":
        return float(np.max(np.abs(tgt.values)))
    if norm in ("lorentz", "lorentz_star"):
        variant = "plain" if norm == "lorentz" else "star"
        return lorentz_norm(decreasing_rearrangement(tgt),
                            _evalx(spec["p"], params),
                            _evalx(spec["q"], params), variant=variant)
    sp = SpaceParams(s=_evalx(spec.get("s", 0.0), params),
                     p=_evalx(spec["p"], params),
                     q=_evalx(spec.get("q", "inf"), params),
                     r=_evalx(spec.get("r", "inf"), params))
    if norm == "besov":
        return besov_lorentz_norm(tgt, sp)
    if norm == "triebel":
        return triebel_lorentz_norm(tgt, sp)
    # sobolev: Lorentz norm of Lambda^s
    return sobolev_lorentz_norm(tgt, sp.s, sp.p, sp.q)


def ratio(case: InequalityCase, u: SampledField, params: dict,
          second: SampledField = None, check: bool = True) -> float:
    """LHS / (C * prod RHS_i^{power_i}); +inf when the RHS degenerates."""
    params = dict(params)
    params.setdefault("n", u.grid.n)
    params.setdefault("omega", u.grid.L ** u.grid.n)
    if not np.any(u.values):
        raise ValueError("ratio of the zero field is undefined")
    if check:
        ok, reasons = admissible(case, params)
        if not ok:
            raise ValueError(f"{case.id}: inadmissible parameters: {reasons}")
    if case.kind == "interpolation":
        total = sum(_evalx(f["power"], params) for f in case.rhs)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"{case.id}: interpolation powers sum to {total}")
    lhs = _functional(u, case.lhs, params, second)
    rhs = 1.0
    for f in case.rhs:
        val = _functional(u, f["spec"], params, second)
        power = _evalx(f["power"], params)
        if val == 0.0 and power != 0.0:
            return _INF if lhs > 0 else 0.0
        rhs *= val ** power
    if case.constant:
        rhs *= _evalx(case.constant, params)
    if rhs == 0.0:
        return _INF if lhs > 0 else 0.0
    return lhs / rhs


# ---------------------------------------------------------------------------
# Sweeps


@dataclass
class VerificationReport:
    case_id: str
    ratios: dict          # (profile label, lambda) -> ratio
    max_ratio: float
    drift: float          # max over profiles of |ratio(u_lam)/ratio(u) - 1|
    verdict: str          # bounded | diverging | inadmissible
    excluded: list = dc_field(default_factory=list)
    params: dict = dc_field(default_factory=dict)

    def to_record(self) -> dict:
        keys = sorted(self.ratios)
        return {
            "case": self.case_id,
            "params": {k: (str(v) if np.isinf(v) else v)
                       for k, v in sorted(self.params.items())},
            "ratios": [{"profile": k[0], "lam": k[1], "ratio": self.ratios[k]}
                       for k in keys],
            "maxRatio": self.max_ratio,
            "drift": self.drift,
            "verdict": self.verdict,
            "excluded": self.excluded,
        }


def sweep(case: InequalityCase, profiles, dilations, grid, params: dict,
          drift_tol: float = None) -> VerificationReport:
    """Ratios over (profile, lambda); the max is the empirical constant.

    profiles: list of (label, AnalyticProfile) pairs or bare profiles.
    """
    named = [(p.family, p) if isinstance(p, AnalyticProfile) else p
             for p in profiles]
    if len(named) < 3 or len(dilations) < 3:
        raise ValueError("sweep requires at least 3 profiles and 3 dilations")
    if drift_tol is None:
        drift_tol = 0.10 if grid.n == 3 else 0.05
    full = dict(params)
    full.setdefault("n", grid.n)
    full.setdefault("omega", grid.L ** grid.n)
    ok, reasons = admissible(case, full)
    if not ok:
        return VerificationReport(case.id, {}, 0.0, 0.0, "inadmissible",
                                  excluded=reasons, params=full)
    ratios = {}
    drift = 0.0
    diverging = False
    excluded = []
    for label, prof in named:
        per_lam = {}
        for lam in dilations:
            try:
                f = sample(dilate(prof, lam), grid)
                per_lam[lam] = ratio(case, f, full, check=False)
            except ValueError as exc:
                excluded.append(f"{label}@{lam}: {exc}")
                continue
            ratios[(label, lam)] = per_lam[lam]
        if not per_lam:
            continue
        base = per_lam.get(1.0, per_lam[sorted(per_lam)[0]])
        for val in per_lam.values():
            if np.isinf(val):
                diverging = True
            elif base > 0:
                drift = max(drift, abs(val / base - 1.0))
    if not ratios:
        verdict = "inadmissible"
    elif diverging:
        verdict = "diverging"
    else:
        verdict = "bounded" if drift <= drift_tol else "diverging"
    max_ratio = max(ratios.values()) if ratios else 0.0
    return VerificationReport(case.id, ratios, float(max_ratio), float(drift),
                              verdict, excluded=excluded, params=full)


# ---------------------------------------------------------------------------
# Frequency balancing and the critical two-term split

def balance_j0(a: float, b: float, A: float, B: float):
    """Integer j0 minimizing 2^{j a} A + 2^{-j b} B up to rounding.

    Rounding is to nearest with ties toward the low-frequency side.
    Returns (j0, bound value at j0).
    """
    if a <= 0 or b <= 0 or A <= 0 or B <= 0:
        raise ValueError("balance_j0 requires positive a, b, A, B")
    # continuous minimizer of 2^{ja} A + 2^{-jb} B; the sum is convex in
    # j, so the integer minimum sits at one of the two bracketing integers
    x = math.log2(b * B / (a * A)) / (a + b)

    def value(j):
        return 2.0 ** (j * a) * A + 2.0 ** (-j * b) * B

    lo, hi = math.floor(x), math.ceil(x)
    j0 = lo if value(lo) <= value(hi) else hi
    return j0, value(j0)


def two_term_split(u: SampledField, p: float, q: float, r: float,
                   l: float = None):
    """Low-pass plus high-shell bound for the critical smoothness s = n/r.

    Splits u at the balanced cutoff j0 and asserts
    |u|_{q,l} <= q/(q-1) * (|S_{j0} u| + sum_{j >= j0} |block_j u|)
    in the (q, l) Lorentz norm.  Returns (low, high, j0).
    """
    if not (1 < p < q and r > 1):
        raise ValueError("requires 1 < p < q and r > 1")
    n = u.grid.n
    s = n / r
    l = q if l is None else l
    vals = u.values - u.values.mean()
    u0 = SampledField(u.grid, vals)
    # balancing exponents: 1/q = (1-alpha)/p + alpha/(q+r)
    alpha = (1.0 / p - 1.0 / q) / (1.0 / p - 1.0 / (q + r))
    if not 0 < alpha < 1:
        raise ValueError("no balancing exponent in (0, 1) for these indices")
    a = n * (1.0 / p - 1.0 / q)
    b = n * alpha / (q + r)
    A = lorentz_norm(decreasing_rearrangement(u0), p, _INF)
    besov = besov_lorentz_norm(u0, SpaceParams(s=s, p=r, q=_INF, r=_INF))
    if A == 0 or besov == 0:
        raise ValueError("zero field")
    B = A ** (1.0 - alpha) * besov ** alpha
    j0, _ = balance_j0(a, b, A, B)
    dec = decompose(u0, mode="homogeneous")
    low_field = low_pass(u0, j0, mode="homogeneous")
    low = lorentz_norm(decreasing_rearrangement(low_field), q, l)
    high = sum(lorentz_norm(decreasing_rearrangement(blk), q, l)
               for j, blk in dec.blocks.items() if j >= j0)
    total = lorentz_norm(decreasing_rearrangement(u0), q, l)
    bound = q / (q - 1.0) * (low + high)
    if total > bound * (1 + 1e-10):
        raise AssertionError(
            f"two-term split bound violated: {total} > {bound}")
    return low, high, j0


# ---------------------------------------------------------------------------
# Excluded-case counterexample probe

def counterexample_probe(s: float, r: float, n: int, truncations, grid,
                         sigma: float = 0.0, theta: float = 0.5) -> dict:
    """Ratio growth for the power profile |x|^{s - n/r} on the exponent
    line where the interpolation inequality fails.

    The exponent p is forced onto the line sigma - n/p = s - n/r (then
    q is determined by the balance relation) and the LHS/RHS ratio is
    evaluated at each truncation radius R; monotone growth in R is the
    divergence signature.
    """
    if not (0 < s - sigma < n / r):
        raise ValueError("probe needs subcritical orders 0 < s - sigma < n/r")
    inv_p = (sigma - s) / n + 1.0 / r
    if inv_p <= 0:
        raise ValueError("no finite p on the exclusion line here")
    p = 1.0 / inv_p
    gap = s - n / r - sigma + n / p
    if abs(gap) > 1e-9:
        raise ValueError("parameters are off the exclusion line")
    inv_q = inv_p - sigma / n
    q = 1.0 / inv_q
    params = {"n": n, "s": s, "sigma": sigma, "r": r, "p": p, "q": q,
              "theta": theta}
    case = load_registry()["GNL-1.7"]
    rs = sorted(truncations)
    ratios = []
    for R in rs:
        prof = AnalyticProfile("power_law",
                               {"alpha": n / r - s, "truncation": float(R)})
        f = sample(prof, grid)
        ratios.append(ratio(case, f, params, check=False))
    monotone = all(b > a for a, b in zip(ratios, ratios[1:]))
    report = {
        "params": params,
        "truncations": rs,
        "ratios": ratios,
        "monotone_growth": monotone if len(rs) > 1 else None,
        "growth_factor": (ratios[-1] / ratios[0]
                          if len(rs) > 1 and ratios[0] > 0 else None),
    }
    return report
