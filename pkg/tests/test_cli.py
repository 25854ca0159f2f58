import json

import pytest

from pappuslab import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def test_usage_error_exit_code(capsys):
    assert cli.main([]) == 2
    assert cli.main(["no-such-command"]) == 2
    capsys.readouterr()


def test_relations_default_pass(capsys):
    code, report = run_json(capsys, "relations", "--trials", "10", "--pairs", "3")
    assert code == 0
    assert report["schema"] == 1
    assert report["pass"]
    assert report["failures"] == []


def test_relations_mutation_detected(capsys):
    code, report = run_json(capsys, "relations", "--trials", "3", "--mutate")
    assert code == 1
    assert not report["pass"]
    assert report["failures"]


def test_relations_zero_trials(capsys):
    code, report = run_json(capsys, "relations", "--trials", "0")
    assert code == 0
    assert report["pass"]
    assert "warning" in report


def test_relations_deterministic(capsys):
    _, r1 = run_json(capsys, "relations", "--trials", "5", "--seed", "7")
    _, r2 = run_json(capsys, "relations", "--trials", "5", "--seed", "7")
    assert r1 == r2


def test_iterate_depth_zero(tmp_path, capsys):
    out = tmp_path / "boxes.svg"
    code, report = run_json(
        capsys, "iterate", "--depth", "0", "--out", str(out)
    )
    assert code == 0
    assert report["boxes"] == 1
    text = out.read_text()
    assert text.startswith("<svg")
    assert text.count("<polygon") == 1
    # the base box spans the unit square of the chart
    assert "-1.00000,-1.00000 1.00000,-1.00000 1.00000,1.00000 -1.00000,1.00000" in text


def test_iterate_depth_eight_count(tmp_path, capsys):
    out = tmp_path / "boxes.svg"
    code, report = run_json(
        capsys, "iterate", "--depth", "8", "--out", str(out)
    )
    assert code == 0
    assert report["boxes"] == 2**9 - 1
    assert out.read_text().count("<polygon") == 2**9 - 1


def test_iterate_outside_region_warning(tmp_path, capsys):
    out = tmp_path / "boxes.svg"
    code, report = run_json(
        capsys, "iterate", "--depth", "2", "--eps", "0.4", "--out", str(out)
    )
    assert code == 0
    assert "warning" in report
    assert "<!--" in out.read_text()


def test_certify_deformed(capsys):
    code, report = run_json(
        capsys, "certify", "--zt", "1/2", "--zb", "1/3", "--eps", "-0.2"
    )
    assert code == 0
    assert report["status"] == "anosov-certified"
    assert report["checks"]["region"]
    assert report["checks"]["nesting"]
    assert report["checks"]["contraction"]
    assert report["checks"]["non_loxodromic_words"] == []
    assert report["checks"]["loxodromy_min_gap"] > 1


def test_certify_boundary_schwartz(capsys):
    code, report = run_json(capsys, "certify", "--eps", "0", "--delta", "0")
    assert code == 0
    assert report["status"] == "boundary-schwartz"
    assert report["checks"]["non_loxodromic_words"]
    assert "witness_normal_form" in report


def test_certify_outside_region(capsys):
    code, report = run_json(capsys, "certify", "--eps", "0.5")
    assert code == 1
    assert report["status"] == "outside-region"


def test_curve_command(capsys):
    code, report = run_json(
        capsys, "curve", "--zt", "1/2", "--zb", "1/3", "--eps", "-0.05"
    )
    assert code == 0
    assert report["pass"]
    assert abs(report["h_residual"]) <= 1e-12
    assert report["obstruction"] <= 1e-10
    assert report["intertwiner_invertible"]


def test_curve_special_box_error(capsys):
    code, report = run_json(
        capsys, "curve", "--zt", "0", "--zb", "0", "--eps", "-0.05"
    )
    assert code == 1
    assert report["error"] == "SpecialBox"


def test_limit_csv(tmp_path, capsys):
    out = tmp_path / "limit.csv"
    code, report = run_json(
        capsys,
        "limit",
        "--zt", "0", "--zb", "0",
        "--eps", "-0.1",
        "--depth", "1",
        "--out", str(out),
    )
    assert code == 0
    assert report["words"] == 4
    lines = out.read_text().strip().splitlines()
    assert lines[0].split(",")[:3] == ["word", "point_x", "point_y"]
    assert len(lines) == 5
    for line in lines[1:]:
        fields = line.split(",")
        assert float(fields[6]) <= 1e-9  # flag residual column


def test_limit_skips_parabolic_at_boundary(tmp_path, capsys):
    out = tmp_path / "limit.csv"
    code, report = run_json(
        capsys,
        "limit",
        "--zt", "0", "--zb", "0",
        "--eps", "0",
        "--depth", "1",
        "--out", str(out),
    )
    assert code == 0
    assert report["skipped_non_loxodromic"]
    assert report["words"] + len(report["skipped_non_loxodromic"]) == 4


def test_variety_grid(capsys):
    code, report = run_json(capsys, "variety", "--grid", "3")
    assert code == 0
    assert report["pass"]
    assert len(report["entries"]) == 9
    specials = [e for e in report["entries"] if e.get("phi_special_box")]
    assert len(specials) == 1  # the grid contains the special moduli


def test_exact_lambda_flags(capsys):
    code, report = run_json(
        capsys, "certify", "--zt", "0", "--zb", "0", "--u", "9/10", "--v", "1"
    )
    assert code == 0
    assert report["status"] == "anosov-certified"
