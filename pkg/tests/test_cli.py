"""Command-line interface: exit codes, report format, determinism."""

import json
import math

import pytest

from lorentzlp.cli import main


def read_report(path):
    lines = open(path).read().splitlines()
    head = json.loads(lines[0])
    body = [json.loads(ln) for ln in lines[1:]]
    return head, body


def test_norm_gaussian_lp(tmp_path):
    out = str(tmp_path / "r.jsonl")
    rc = main(["norm", "--grid", "2,64,16", "--profile",
               "gaussian:width=1.5", "--norm", "lp", "--params", "p=2",
               "--out", out])
    assert rc == 0
    head, body = read_report(out)
    assert head["header"] == "norm"
    # closed form (w^n (pi/p)^{n/2})^{1/p} with w=1.5, n=2, p=2
    expect = (1.5 ** 2 * (math.pi / 2.0)) ** 0.5
    assert body[0]["value"] == pytest.approx(expect, rel=1e-3)


def test_norm_ball_lorentz(tmp_path):
    out = str(tmp_path / "r.jsonl")
    rc = main(["norm", "--grid", "2,64,16", "--profile",
               "ball_indicator:radius=2", "--norm", "lorentz",
               "--params", "p=2,q=1", "--out", out])
    assert rc == 0
    _, body = read_report(out)
    # indicator of measure m: (p/q)^{1/q} m^{1/p} = 2 sqrt(4 pi)
    assert body[0]["value"] == pytest.approx(2.0 * math.sqrt(4 * math.pi),
                                             rel=0.05)


def test_norm_bad_params_exit_2(tmp_path):
    rc = main(["norm", "--grid", "2,64,16", "--profile",
               "gaussian:width=1", "--norm", "lp", "--params", ""])
    assert rc == 2


def test_verify_inadmissible_exit_3(tmp_path):
    out = str(tmp_path / "r.jsonl")
    rc = main(["verify", "--grid", "2,64,16", "--case", "GNL-1.7",
               "--params", "p=6,theta=0.25", "--out", out])
    assert rc == 3
    _, body = read_report(out)
    assert body[0]["verdict"] == "inadmissible"
    assert body[0]["excluded"]


def test_verify_unknown_case_exit_2():
    assert main(["verify", "--case", "No-Such-Case"]) == 2


def test_verify_power_identity_bounded(tmp_path):
    out = str(tmp_path / "r.jsonl")
    rc = main(["verify", "--grid", "2,64,16", "--case", "Power-Identity",
               "--out", out])
    assert rc == 0
    _, body = read_report(out)
    assert body[0]["verdict"] == "bounded"
    assert body[0]["maxRatio"] == pytest.approx(1.0, abs=1e-10)


def test_flux_report(tmp_path):
    out = str(tmp_path / "r.jsonl")
    rc = main(["flux", "--grid", "3,32,6.283185307179586", "--Q", "2,6",
               "--seed", "0", "--out", out])
    assert rc == 0
    _, body = read_report(out)
    assert len(body) == 2
    for rec in body:
        assert abs(rec["flux"]) <= 0.01 * rec["bound"]


def test_flux_rejects_2d_grid():
    assert main(["flux", "--grid", "2,32,6.28"]) == 2


def test_report_merge_keeps_larger_ratio(tmp_path):
    a = tmp_path / "a.jsonl"
    b = tmp_path / "b.jsonl"
    a.write_text(json.dumps({"case": "X", "maxRatio": 1.0,
                             "verdict": "bounded"}) + "\n")
    b.write_text(json.dumps({"case": "X", "maxRatio": 2.0,
                             "verdict": "bounded"}) + "\n")
    out = str(tmp_path / "m.jsonl")
    rc = main(["report", str(a), str(b), "--out", out])
    assert rc == 0
    _, body = read_report(out)
    assert body[0]["maxRatio"] == 2.0


def test_report_malformed_flagged(tmp_path):
    a = tmp_path / "a.jsonl"
    a.write_text("not json at all\n")
    out = str(tmp_path / "m.jsonl")
    rc = main(["report", str(a), "--out", out])
    assert rc == 1
    _, body = read_report(out)
    assert any("malformed" in rec for rec in body)


def test_report_no_inputs_exit_2():
    assert main(["report"]) == 2
