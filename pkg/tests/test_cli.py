"""Tests for the ``bigphase`` command-line interface."""

import json
import shutil
import subprocess

import pytest

from bigphase.cli import main

SMALL = ["--nmax", "1", "--dmax", "4"]


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def collect_keys(payload, found):
    if isinstance(payload, dict):
        for key, value in payload.items():
            found.add(key)
            collect_keys(value, found)
    elif isinstance(payload, list):
        for value in payload:
            collect_keys(value, found)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def test_verify_passes_and_prints_table_and_report(capsys):
    code, out, err = run_cli(
        capsys, "verify", "--model", "gravity1d_flatk", *SMALL
    )
    assert code == 0
    assert err == ""
    table, report_text = out.split("\n\n{", 1)
    assert table.splitlines()[0].startswith("model gravity1d_flatk (n=1)")
    assert "status" in table and "gate.wdvv" in table
    assert "fail=0" in table.rsplit("summary", 1)[1]
    report = json.loads("{" + report_text)
    assert report["summary"]["exit_code"] == 0
    assert report["summary"]["fail"] == 0
    assert report["model"]["has_real_structure"] is True


def test_verify_report_written_to_file_is_byte_stable(capsys, tmp_path):
    out_a, out_b = tmp_path / "a.json", tmp_path / "b.json"
    for out_file in (out_a, out_b):
        code, stdout, _ = run_cli(
            capsys, "verify", "--model", "a2", *SMALL,
            "--seed", "7", "--out", str(out_file),
        )
        assert code == 0
        assert "{" not in stdout.split("summary")[-1]  # JSON went to the file
    assert out_a.read_bytes() == out_b.read_bytes()


def test_verify_report_has_no_timestamps(capsys, tmp_path):
    out_file = tmp_path / "report.json"
    run_cli(capsys, "verify", "--model", "gravity1d", *SMALL,
            "--out", str(out_file))
    report = json.loads(out_file.read_text())
    keys = set()
    collect_keys(report, keys)
    for key in keys:
        lowered = key.lower()
        assert "time" not in lowered
        assert "date" not in lowered
        assert "stamp" not in lowered


def test_verify_check_selection_supports_aliases(capsys, tmp_path):
    out_file = tmp_path / "subset.json"
    code, _, _ = run_cli(
        capsys, "verify", "--model", "gravity1d", *SMALL,
        "--check", "metric_hat,saito", "--out", str(out_file),
    )
    assert code == 0
    report = json.loads(out_file.read_text())
    assert report["run"]["checks"] == ["metric", "saito"]
    groups = {row["group"] for row in report["checks"]}
    assert groups == {"metric", "saito"}


def test_verify_skipped_rows_appear_for_models_without_real_structure(
    capsys, tmp_path
):
    out_file = tmp_path / "a2.json"
    code, _, _ = run_cli(
        capsys, "verify", "--model", "a2", *SMALL, "--out", str(out_file)
    )
    assert code == 0
    report = json.loads(out_file.read_text())
    skipped = [row for row in report["checks"] if row["status"] == "skip"]
    assert skipped
    assert all(row["residual"] is None for row in skipped)
    assert report["summary"]["skipped"] == len(skipped)


def test_verify_negative_tolerance_exercises_the_failure_exit(capsys, tmp_path):
    out_file = tmp_path / "fail.json"
    code, out, _ = run_cli(
        capsys, "verify", "--model", "gravity1d", *SMALL,
        "--check", "lift", "--tol", "-1", "--out", str(out_file),
    )
    assert code == 1
    report = json.loads(out_file.read_text())
    assert report["summary"]["fail"] > 0
    assert report["summary"]["exit_code"] == 1
    assert "fail" in out


def test_verify_float_mode_runs_clean(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--model", "gravity1d", *SMALL, "--mode", "float"
    )
    assert code == 0
    assert "fail=0" in out


# ---------------------------------------------------------------------------
# lift
# ---------------------------------------------------------------------------

EXPECTED_U_TERMS = [
    {"re": "1/1", "im": "0/1", "mono": [[0, 0, 1, 1]]},
    {"re": "1/1", "im": "0/1", "mono": [[0, 0, 1, 1], [0, 1, 1, 1]]},
    {"re": "1/2", "im": "0/1", "mono": [[0, 0, 1, 2], [0, 2, 1, 1]]},
    {"re": "1/1", "im": "0/1", "mono": [[0, 0, 1, 1], [0, 1, 1, 2]]},
]


def test_lift_u_matches_the_frozen_low_degree_expansion(capsys, tmp_path):
    out_file = tmp_path / "u.json"
    code, _, _ = run_cli(
        capsys, "lift", "--model", "gravity1d", "--nmax", "2", "--dmax", "3",
        "--target", "u", "--out", str(out_file),
    )
    assert code == 0
    dump = json.loads(out_file.read_text())
    assert dump["target"] == "u"
    (u_payload,) = dump["data"]
    assert u_payload["exact"] is False  # the coordinate map is a true series
    assert u_payload["valid_degree"] == 3
    assert u_payload["terms"] == EXPECTED_U_TERMS


def test_lift_factorial_normalization_rescales_by_level_factorials(
    capsys, tmp_path
):
    out_file = tmp_path / "u_factorial.json"
    code, _, _ = run_cli(
        capsys, "lift", "--model", "gravity1d", "--nmax", "2", "--dmax", "3",
        "--target", "u", "--normalization", "factorial", "--out", str(out_file),
    )
    assert code == 0
    (u_payload,) = json.loads(out_file.read_text())["data"]
    expected = [dict(term) for term in EXPECTED_U_TERMS]
    expected[2] = dict(expected[2], re="1/1")  # level-2 factor 2! cancels 1/2
    assert u_payload["terms"] == expected


@pytest.mark.parametrize("target", ["M", "t_frame", "eta_hat"])
def test_lift_structural_targets_produce_data(capsys, tmp_path, target):
    out_file = tmp_path / f"{target}.json"
    code, _, _ = run_cli(
        capsys, "lift", "--model", "a2", *SMALL,
        "--target", target, "--out", str(out_file),
    )
    assert code == 0
    dump = json.loads(out_file.read_text())
    assert dump["data"]
    assert dump["run"]["normalization"] == "plain"


def test_lift_hermitian_targets_require_a_real_structure(capsys):
    code, _, err = run_cli(
        capsys, "lift", "--model", "a2", *SMALL, "--target", "h_hat"
    )
    assert code == 2
    assert err.startswith("error:")
    assert "real_structure" in err


def test_lift_hermitian_target_works_with_a_real_structure(capsys, tmp_path):
    out_file = tmp_path / "h.json"
    code, _, _ = run_cli(
        capsys, "lift", "--model", "gravity1d", *SMALL,
        "--target", "h_hat", "--out", str(out_file),
    )
    assert code == 0
    dump = json.loads(out_file.read_text())
    assert dump["data"][0][0]["valid_degree"] == 4


# ---------------------------------------------------------------------------
# models
# ---------------------------------------------------------------------------


def test_models_listing_shows_the_registry(capsys):
    code, out, _ = run_cli(capsys, "models")
    assert code == 0
    for name in ("gravity1d", "gravity1d_flatk", "a2", "a2_generic_k", "rand2d"):
        assert name in out
    assert "seeded" in out.splitlines()[0]


def test_models_export_then_canonicalize_is_idempotent(capsys, tmp_path):
    first = tmp_path / "a2.json"
    second = tmp_path / "a2_again.json"
    code, _, _ = run_cli(capsys, "models", "--model", "a2", "--out", str(first))
    assert code == 0
    code, _, _ = run_cli(
        capsys, "models", "--model", str(first), "--out", str(second)
    )
    assert code == 0
    assert first.read_bytes() == second.read_bytes()


def test_model_dir_resolution_matches_an_explicit_path(
    capsys, tmp_path, monkeypatch
):
    export = tmp_path / "mymodel.json"
    run_cli(capsys, "models", "--model", "a2_generic_k", "--seed", "3",
            "--out", str(export))
    by_path = tmp_path / "by_path.json"
    code, _, _ = run_cli(
        capsys, "verify", "--model", str(export), *SMALL,
        "--check", "lift", "--out", str(by_path),
    )
    assert code == 0
    monkeypatch.setenv("BIGPHASE_MODEL_DIR", str(tmp_path))
    by_name = tmp_path / "by_name.json"
    code, _, _ = run_cli(
        capsys, "verify", "--model", "mymodel", *SMALL,
        "--check", "lift", "--out", str(by_name),
    )
    assert code == 0
    assert by_path.read_bytes() == by_name.read_bytes()


# ---------------------------------------------------------------------------
# error handling
# ---------------------------------------------------------------------------


def test_unknown_model_exits_with_a_usage_error(capsys):
    code, _, err = run_cli(capsys, "verify", "--model", "no-such-model", *SMALL)
    assert code == 2
    assert err.startswith("error:")


def test_unknown_check_group_exits_with_a_usage_error(capsys):
    code, _, err = run_cli(
        capsys, "verify", "--model", "a2", *SMALL, "--check", "nonsense"
    )
    assert code == 2
    assert "unknown check group" in err


def test_malformed_tolerance_exits_with_a_usage_error(capsys):
    code, _, err = run_cli(
        capsys, "verify", "--model", "a2", *SMALL, "--tol", "abc"
    )
    assert code == 2
    assert "invalid --tol" in err


def test_unwritable_output_path_exits_with_a_usage_error(capsys, tmp_path):
    target = tmp_path / "missing-dir" / "report.json"
    code, _, err = run_cli(
        capsys, "verify", "--model", "a2", *SMALL, "--out", str(target)
    )
    assert code == 2
    assert "cannot write" in err


# ---------------------------------------------------------------------------
# installed entry point
# ---------------------------------------------------------------------------


@pytest.mark.skipif(shutil.which("bigphase") is None,
                    reason="console script not installed")
def test_console_script_is_wired_up():
    proc = subprocess.run(
        ["bigphase", "models"], capture_output=True, text=True, timeout=120
    )
    assert proc.returncode == 0
    assert "gravity1d" in proc.stdout
