import csv
import io
import json
import math

import numpy as np
import pytest

from seqchsh import cli
from seqchsh.frontier import deterministic_pair

S_STAR_13 = 2 * math.sqrt(10) / 3


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    comments = [ln for ln in text.splitlines() if ln.startswith("#")]
    rows = list(csv.DictReader(io.StringIO("\n".join(lines))))
    return comments, rows


def test_tradeoff_includes_case2_point(capsys):
    code, out, _ = run_cli(capsys, "tradeoff", "--phi-state", "45", "--cases", "1,2,3")
    assert code == 0
    comments, rows = parse_csv(out)
    assert any("angle unit: degrees" in c for c in comments)
    case2 = [r for r in rows if r["lambda"] == "2"]
    assert len(case2) == 1
    assert float(case2[0]["s_ab"]) == pytest.approx(0.0, abs=1e-12)
    assert float(case2[0]["s_ac"]) == pytest.approx(2.8284, abs=1e-4)


def test_tradeoff_case1_row_at_75(capsys):
    code, out, _ = run_cli(capsys, "tradeoff", "--phi-state", "45", "--cases", "1")
    assert code == 0
    _, rows = parse_csv(out)
    row = next(r for r in rows if float(r["setting_deg"]) == 75.0)
    assert float(row["s_ab"]) == pytest.approx(2.4495, abs=1e-4)
    assert float(row["s_ac"]) == pytest.approx(1.9319, abs=1e-4)


def test_tradeoff_product_state_never_violates_ac(capsys):
    code, out, _ = run_cli(capsys, "tradeoff", "--phi-state", "0", "--cases", "1")
    assert code == 0
    _, rows = parse_csv(out)
    assert all(float(r["s_ac"]) <= 2.0 + 1e-12 for r in rows)


def test_csv_roundtrip_precision(capsys):
    code, out, _ = run_cli(capsys, "tradeoff", "--phi-state", "41.48", "--cases", "1,3")
    assert code == 0
    _, rows = parse_csv(out)
    phi_state = math.radians(41.48)
    for row in rows:
        lam = int(row["lambda"])
        setting = math.radians(float(row["setting_deg"]))
        want_ab, want_ac = deterministic_pair(lam, phi_state, setting)
        assert float(row["s_ab"]) == pytest.approx(float(want_ab), rel=1e-12, abs=1e-12)
        assert float(row["s_ac"]) == pytest.approx(float(want_ac), rel=1e-12, abs=1e-12)


def test_sweep_p_optimum_row(capsys):
    code, out, _ = run_cli(
        capsys, "sweep-p", "--phi-state", "45", "--pair", "1,2", "--p-step", "0.0001"
    )
    assert code == 0
    _, rows = parse_csv(out)
    row = next(r for r in rows if abs(float(r["p"]) - 0.8453) < 5e-5)
    assert float(row["s_ab"]) == pytest.approx(2.0706, abs=2e-4)
    assert float(row["s_ac"]) == pytest.approx(2.0706, abs=2e-4)
    assert row["violates_both"] == "true"
    first, last = rows[0], rows[-1]
    assert float(first["p"]) == 0.0
    assert float(first["s_ab"]) == pytest.approx(0.0, abs=1e-6)
    assert float(first["s_ac"]) == pytest.approx(2.8284, abs=1e-4)
    assert float(last["s_ab"]) == pytest.approx(2.4495, abs=1e-4)


def test_frontier_output(tmp_path, capsys):
    out_file = tmp_path / "frontier.csv"
    code, _, _ = run_cli(
        capsys, "frontier", "--phi-state", "45", "--points", "50", "--out", str(out_file)
    )
    assert code == 0
    comments, rows = parse_csv(out_file.read_text())
    assert len(rows) == 50
    segments = [r["segment"] for r in rows]
    order = [seg for i, seg in enumerate(segments) if i == 0 or segments[i - 1] != seg]
    assert order == ["mix23", "det3", "mix13", "det1"]
    assert float(rows[0]["s_ac"]) == pytest.approx(2.8284, abs=1e-4)


def test_region_json_area_fraction(capsys):
    code, out, _ = run_cli(
        capsys, "region", "--phi-state", "45", "--pair", "1,2",
        "--angle-step", "0.5", "--p-step", "0.01", "--format", "json",
    )
    assert code == 0
    doc = json.loads(out)
    area_meta = next(m for m in doc["meta"] if m.startswith("area_fraction"))
    area = float(area_meta.split("=")[1])
    true_cells = sum(1 for r in doc["rows"] if r["violates_both"])
    assert area == pytest.approx(true_cells / len(doc["rows"]), abs=1e-12)
    assert area > 0


def test_region_pe_area_exceeds_me(capsys):
    areas = {}
    for phi in ("34.08", "45"):
        code, out, _ = run_cli(
            capsys, "region", "--phi-state", phi, "--pair", "1,2",
            "--angle-step", "0.5", "--p-step", "0.01", "--format", "json",
        )
        assert code == 0
        doc = json.loads(out)
        meta = next(m for m in doc["meta"] if m.startswith("area_fraction"))
        areas[phi] = float(meta.split("=")[1])
    assert areas["34.08"] > areas["45"]


def test_mc_equal_point_13(capsys):
    code, out, _ = run_cli(
        capsys, "mc", "--phi-state", "45", "--pair", "1,3",
        "--p", "0.3333", "--mean", "1000000", "--seed", "7",
    )
    assert code == 0
    _, rows = parse_csv(out)
    row = rows[0]
    assert abs(float(row["s_ab"]) - S_STAR_13) <= 3 * float(row["s_ab_sigma"]) + 1e-3
    assert abs(float(row["s_ac"]) - S_STAR_13) <= 3 * float(row["s_ac_sigma"]) + 1e-3


def test_mc_repeats_deterministic(tmp_path, capsys):
    args = ["mc", "--phi-state", "45", "--pair", "1,2", "--mean", "10000",
            "--seed", "99", "--repeats", "3"]
    code1, out1, _ = run_cli(capsys, *args)
    code2, out2, _ = run_cli(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    _, rows = parse_csv(out1)
    assert len(rows) == 3
    assert len({r["s_ab"] for r in rows}) == 3


def test_verify_passes(capsys):
    code, out, _ = run_cli(capsys, "verify")
    assert code == 0
    assert "all checks passed" in out
    assert out.count("PASS") >= 6
    assert "FAIL" not in out


def test_usage_errors_exit_code_one(capsys):
    assert run_cli(capsys, "sweep-p", "--pair", "1")[0] == 1
    assert run_cli(capsys, "tradeoff", "--phi-state", "60")[0] == 1
    assert run_cli(capsys, "mc", "--phi-state", "45", "--mean", "10")[0] == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["not-a-command"])
    assert exc.value.code == 1


def test_json_mirrors_csv_fields(capsys):
    code, out, _ = run_cli(
        capsys, "tradeoff", "--phi-state", "45", "--cases", "2", "--format", "json"
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["fields"] == ["lambda", "setting_deg", "s_ab", "s_ac"]
    assert len(doc["rows"]) == 1
    assert doc["rows"][0]["s_ac"] == pytest.approx(2 * math.sqrt(2), abs=1e-12)
