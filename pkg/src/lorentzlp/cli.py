"""Command-line front end: norms, registered verifications, flux sweeps
and report merging, with deterministic JSON-lines output.

The first line of every report file is a header carrying the timestamp;
every following line is a deterministic record, so two runs with the same
configuration produce byte-identical report bodies.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from .field import (AnalyticProfile, Grid, lp_norm, profile_from_json, sample)
from .inequalities import (admissible, counterexample_probe, load_registry,
                           ratio, sweep)
from .nse import (VelocityField, criterion_norms, dyadic_flux_bound, flux,
                  leray_project, read_trajectory)
from .field import SampledField
from .rearrange import decreasing_rearrangement, lorentz_norm
from .spaces import (SpaceParams, besov_lorentz_norm, sobolev_lorentz_norm,
                     triebel_lorentz_norm)

__all__ = ["main"]

_EXIT_BAD_CONFIG = 2
_EXIT_INADMISSIBLE = 3

# Default parameter assignments making each registered case runnable
# out of the box; flags override via --params.
_CASE_PRESETS = {
    "GNL-1.7": {"n": 2, "sigma": 0.0, "s": 1.0, "r": 2.0, "q": 2.0,
                "theta": 0.5, "p": 4.0},
    "GN-Besov-1.13": {"n": 2, "sigma": 0.0, "s": 1.0, "r": 2.0, "q": 2.0,
                      "theta": 0.5, "p": 4.0},
    "Ozawa-1.15": {"p": 2.0, "q": 4.0, "r": 2.0, "l": 4.0},
    "Ozawa-1.16": {"p": 2.0, "q": 4.0, "r": 2.0, "l": 4.0},
    "Ozawa-1.17": {"p": 2.0, "q": 4.0, "r": 2.0, "l": 4.0},
    "Lemma3.1-critical": {"p": 2.0, "q": 4.0, "r": 2.0, "l": 4.0},
    "Lemma3.1-supercritical": {"p": 2.0, "r": 2.0, "s": 2.0, "theta": 0.5},
    "Interp-Char": {"q": 2.0, "p": 3.0, "r": 6.0, "alpha": 0.5, "p1": 3.0},
    "Q-Monotonicity": {"p": 2.0, "q1": 1.0, "q2": 2.0},
    "Inclusion-Bounded": {"m": 2.0, "M": 4.0, "r": 2.0, "q": 2.0},
    "Sobolev-Ineq": {"p": 1.5},
    "Sobolev-Lorentz-3.1": {"s": 0.5, "r": 2.0, "p": 4.0, "p1": 2.0},
    "Power-Identity": {"lam": 2.0, "p": 2.0, "q": 1.5},
    "CE-excluded-line": {},
}


def _parse_grid(text: str) -> Grid:
    try:
        n, N, L = text.split(",")
        return Grid(int(n), int(N), float(L))
    except Exception as exc:
        raise SystemExit(f"error: bad --grid {text!r}: {exc}")


def _parse_params(text: str) -> dict:
    out = {}
    if not text:
        return out
    for item in text.split(","):
        key, _, val = item.partition("=")
        if not _:
            raise SystemExit(f"error: bad --params item {item!r}")
        out[key.strip()] = float("inf") if val == "inf" else float(val)
    return out


def _parse_profile(text: str) -> AnalyticProfile:
    """Either inline JSON or 'family:key=val,key=val'."""
    if text.lstrip().startswith("{"):
        profile, _ = profile_from_json(text)
        return profile
    family, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, _, val = item.partition("=")
        if key == "wavevector":
            # semicolon-separated components, e.g. wavevector=5;0;0
            params[key] = tuple(float(x) for x in val.split(";"))
        else:
            try:
                params[key] = float(val)
            except ValueError:
                params[key] = val
    if family == "pure_mode" and "wavevector" not in params:
        raise SystemExit("error: pure_mode profile needs wavevector=...")
    return AnalyticProfile(family, params)


def _default_family(seed: int):
    return [
        ("gaussian", AnalyticProfile("gaussian", {"width": 1.2})),
        ("bump", AnalyticProfile("bump", {"radius": 2.0})),
        ("band", AnalyticProfile("band_limited_random",
                                 {"shell_lo": 2.0, "shell_hi": 8.0,
                                  "seed": seed, "envelope": 2.0})),
    ]


class _Report:
    """JSON-lines sink: one timestamped header, deterministic body."""

    def __init__(self, path=None):
        self.path = path
        self.lines = []

    def header(self, command: str, config: dict):
        stamp = time.strftime("%Y-%m-%dT%H:%M:%S")
        self.lines.append(json.dumps(
            {"header": command, "timestamp": stamp, "config": config},
            sort_keys=True))

    def record(self, rec: dict):
        self.lines.append(json.dumps(rec, sort_keys=True, default=str))

    def flush(self):
        text = "\n".join(self.lines) + "\n"
        if self.path:
            with open(self.path, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)


def _cmd_norm(args) -> int:
    grid = _parse_grid(args.grid)
    profile = _parse_profile(args.profile)
    params = _parse_params(args.params)
    t0 = time.perf_counter()
    try:
        f = sample(profile, grid)
        if args.norm == "lp":
            value = lp_norm(f, params["p"])
        elif args.norm == "lorentz":
            value = lorentz_norm(decreasing_rearrangement(f),
                                 params["p"], params["q"],
                                 variant=params.get("variant", "plain")
                                 if isinstance(params.get("variant"), str)
                                 else "plain")
        elif args.norm == "besov":
            value = besov_lorentz_norm(f, SpaceParams(
                s=params.get("s", 0.0), p=params["p"],
                q=params.get("q", float("inf")),
                r=params.get("r", float("inf"))))
        elif args.norm == "triebel":
            value = triebel_lorentz_norm(f, SpaceParams(
                s=params.get("s", 0.0), p=params["p"],
                q=params.get("q", float("inf")),
                r=params.get("r", float("inf"))))
        elif args.norm == "sobolev":
            value = sobolev_lorentz_norm(f, params.get("s", 1.0),
                                         params["p"],
                                         params.get("p1", params["p"]))
        else:
            print(f"error: unknown norm {args.norm!r}", file=sys.stderr)
            return _EXIT_BAD_CONFIG
    except (KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_BAD_CONFIG
    rep = _Report(args.out)
    rep.header("norm", {"grid": args.grid, "profile": args.profile,
                        "norm": args.norm, "params": args.params})
    rep.record({"norm": args.norm,
                "params": {k: (str(v) if np.isinf(v) else v)
                           for k, v in sorted(params.items())},
                "value": value,
                "grid": {"n": grid.n, "N": grid.N, "L": grid.L},
                "runtime": round(time.perf_counter() - t0, 3)})
    rep.flush()
    return 0


def _cmd_verify(args) -> int:
    registry = load_registry()
    case_ids = args.case.split(",")
    unknown = [c for c in case_ids if c not in registry]
    if unknown:
        print(f"error: unknown case ids {unknown}", file=sys.stderr)
        return _EXIT_BAD_CONFIG
    grid = _parse_grid(args.grid)
    dilations = [float(x) for x in args.dilations.split(",")]
    overrides = _parse_params(args.params)
    tol = {}
    for item in filter(None, (args.tol or "").split(",")):
        name, _, val = item.partition("=")
        tol[name] = float(val)
    if args.profile:
        profiles = [(p, _parse_profile(p)) for p in args.profile]
    else:
        profiles = _default_family(args.seed)
    rep = _Report(args.out)
    rep.header("verify", {"grid": args.grid, "cases": args.case,
                          "dilations": args.dilations, "seed": args.seed,
                          "params": args.params})
    all_ok = True
    for cid in case_ids:
        case = registry[cid]
        params = dict(_CASE_PRESETS.get(cid, {}))
        params.update(overrides)
        if cid == "CE-excluded-line":
            truncs = [float(x) for x in args.truncations.split(",")]
            probe_grid = grid if grid.n == 1 else Grid(1, 128, 16.0)
            report = counterexample_probe(
                params.get("s", 0.25), params.get("r", 4.0 / 3.0), 1,
                truncs, probe_grid, sigma=params.get("sigma", 0.0))
            verdict = ("diverging" if report["monotone_growth"]
                       else "bounded")
            rep.record({"case": cid, "params": report["params"],
                        "ratios": [{"profile": "power_law", "lam": R,
                                    "ratio": r}
                                   for R, r in zip(report["truncations"],
                                                   report["ratios"])],
                        "maxRatio": max(report["ratios"]),
                        "drift": report["growth_factor"],
                        "verdict": verdict, "expected": "diverging"})
            if verdict != "diverging":
                all_ok = False
            continue
        full = dict(params)
        full.setdefault("n", grid.n)
        full.setdefault("omega", grid.L ** grid.n)
        ok, reasons = admissible(case, full)
        if not ok:
            rep.record({"case": cid, "verdict": "inadmissible",
                        "excluded": reasons})
            rep.flush()
            for r in reasons:
                print(f"error: {cid}: {r}", file=sys.stderr)
            return _EXIT_INADMISSIBLE
        report = sweep(case, profiles, dilations, grid, params,
                       drift_tol=tol.get("drift"))
        rep.record(report.to_record())
        if report.verdict != "bounded":
            all_ok = False
    rep.flush()
    return 0 if all_ok else 1


def _synthetic_velocity(grid: Grid, seed: int, band: int = 6) -> VelocityField:
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


def _cmd_flux(args) -> int:
    grid = _parse_grid(args.grid)
    if grid.n != 3:
        print("error: flux requires an n=3 grid", file=sys.stderr)
        return _EXIT_BAD_CONFIG
    qs = [int(x) for x in args.Q.split(",")]
    rep = _Report(args.out)
    rep.header("flux", {"grid": args.grid, "Q": args.Q, "seed": args.seed,
                        "trajectory": args.trajectory})
    if args.trajectory:
        try:
            snaps = read_trajectory(args.trajectory)
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return _EXIT_BAD_CONFIG
        fields = [(f"t={t:g}", v) for t, v in snaps]
    else:
        fields = [("synthetic", _synthetic_velocity(grid, args.seed))]
    for label, v in fields:
        for Q in qs:
            rep.record({"snapshot": label, "Q": Q,
                        "flux": flux(v, Q),
                        "bound": dyadic_flux_bound(v, Q)})
    rep.flush()
    return 0


def _cmd_report(args) -> int:
    rows = {}
    bad = []
    if not args.paths:
        print("error: no report files given", file=sys.stderr)
        return _EXIT_BAD_CONFIG
    for path in args.paths:
        try:
            with open(path) as fh:
                lines = fh.read().splitlines()
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return _EXIT_BAD_CONFIG
        for ln in lines:
            if not ln.strip():
                continue
            try:
                rec = json.loads(ln)
            except json.JSONDecodeError:
                bad.append(f"{path}: {ln[:60]}")
                continue
            if "header" in rec or "case" not in rec:
                continue
            cid = rec["case"]
            keep = rows.get(cid)
            # duplicate case ids: keep the row with the larger max ratio
            if keep is None or (rec.get("maxRatio", 0) or 0) > (
                    keep.get("maxRatio", 0) or 0):
                rows[cid] = rec
    rep = _Report(args.out)
    rep.header("report", {"inputs": list(args.paths)})
    for cid in sorted(rows):
        rec = rows[cid]
        rep.record({"case": cid, "maxRatio": rec.get("maxRatio"),
                    "drift": rec.get("drift"),
                    "verdict": rec.get("verdict")})
    if bad:
        rep.record({"malformed": bad})
    rep.flush()
    if bad:
        for b in bad:
            print(f"warning: malformed record {b}", file=sys.stderr)
        return 1
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="lorentzlp",
        description="Norms, inequality verifications and flux diagnostics "
                    "on periodic grids")
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("norm", help="compute one norm of one profile")
    p_norm.add_argument("--grid", default="2,64,16")
    p_norm.add_argument("--profile", required=True)
    p_norm.add_argument("--norm", required=True,
                        choices=["lp", "lorentz", "besov", "triebel",
                                 "sobolev"])
    p_norm.add_argument("--params", default="")
    p_norm.add_argument("--out", default=None)

    p_ver = sub.add_parser("verify", help="run registered inequality sweeps")
    p_ver.add_argument("--grid", default="2,256,24")
    p_ver.add_argument("--case", required=True)
    p_ver.add_argument("--profile", action="append", default=None)
    p_ver.add_argument("--dilations", default="0.5,1,2")
    p_ver.add_argument("--truncations", default="2,4,8")
    p_ver.add_argument("--seed", type=int, default=3)
    p_ver.add_argument("--params", default="")
    p_ver.add_argument("--tol", default="")
    p_ver.add_argument("--out", default=None)

    p_flux = sub.add_parser("flux", help="energy flux and its dyadic bound")
    p_flux.add_argument("--grid", default="3,32,6.283185307179586")
    p_flux.add_argument("--Q", default="0,1,2,3,4,5,6")
    p_flux.add_argument("--seed", type=int, default=0)
    p_flux.add_argument("--trajectory", default=None)
    p_flux.add_argument("--out", default=None)

    p_rep = sub.add_parser("report", help="merge JSON-lines reports")
    p_rep.add_argument("paths", nargs="*")
    p_rep.add_argument("--out", default=None)

    args = parser.parse_args(argv)
    if args.command == "norm":
        return _cmd_norm(args)
    if args.command == "verify":
        return _cmd_verify(args)
    if args.command == "flux":
        return _cmd_flux(args)
    return _cmd_report(args)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
