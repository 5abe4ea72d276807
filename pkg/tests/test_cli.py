import json
import os
import subprocess
import sys

import pytest

from qwhit import cli


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out else None
    return code, report, captured


def test_serre_check_report_shape(capsys):
    code, report, _ = run_cli(capsys, "serre-check", "--type", "G",
                              "--rank", "2")
    assert code == 0
    assert report["schema"] == "1"
    assert report["outputs"]["identities_checked"] == 4
    assert report["outputs"]["all_zero"] is True


def test_toda_check_commute(capsys):
    code, report, _ = run_cli(capsys, "toda", "--type", "A", "--rank", "2",
                              "--check-commute")
    assert code == 0
    assert report["outputs"]["commutators_zero"] is True
    assert report["outputs"]["closed_form_match"] is True


def test_root_system_and_cayley(capsys):
    code, report, _ = run_cli(capsys, "root-system", "--type", "B",
                              "--rank", "2")
    assert code == 0
    assert report["outputs"]["coxeter_number"] == 4
    assert len(report["outputs"]["positive_roots"]) == 4

    code, report, _ = run_cli(capsys, "cayley", "--type", "A", "--rank", "2",
                              "--pi", "2,1")
    assert code == 0
    assert report["inputs"]["pi"] == "2,1"
    assert report["checks"] == {"cayley_identity": True,
                                "antisymmetric": True}


def test_orbits_partition_all_roots(capsys):
    code, report, _ = run_cli(capsys, "orbits", "--type", "A", "--rank", "3")
    assert code == 0
    assert sum(report["outputs"]["orbit_sizes"]) == 12


def test_qbinom_scan_window(capsys):
    code, report, _ = run_cli(capsys, "qbinom-scan", "--m", "5")
    assert code == 0
    scans = report["outputs"]["scans"]
    assert [s["m"] for s in scans] == [1, 2, 3, 4, 5]
    assert scans[2]["vanishing_c"] == [-2, 0, 2]


def test_casimir_central(capsys):
    code, report, _ = run_cli(capsys, "casimir", "--type", "A", "--rank", "1")
    assert code == 0
    assert report["checks"]["central"] is True
    assert report["outputs"]["term_count"] > 0
    assert set(report["outputs"]["terms"][0]) == {"f", "lambda", "e", "coeff"}


def test_whittaker_invariance(capsys):
    code, report, _ = run_cli(capsys, "whittaker", "--type", "A",
                              "--rank", "2", "--chi", "2,-3")
    assert code == 0
    assert report["checks"]["lower_borel"] is True
    assert report["checks"]["invariant_under_whittaker_action"] is True


def test_cross_section_closed_form(capsys):
    code, report, _ = run_cli(capsys, "cross-section", "--matrix",
                              '[["3","2"],["1","1"]]')
    assert code == 0
    out = report["outputs"]
    assert out["conjugator"] == [["1", "1"], ["0", "1"]]
    assert out["slice_point"] == [["4", "-1"], ["1", "0"]]
    assert out["slice_params"] == ["4"]


def test_cross_section_accepts_redundant_size(capsys):
    code, report, _ = run_cli(capsys, "cross-section", "--n", "2",
                              "--matrix", '[["3","2"],["1","1"]]')
    assert code == 0
    assert report["outputs"]["in_cell"] is True


def test_cross_section_outside_cell_fails(capsys):
    code, report, captured = run_cli(capsys, "cross-section", "--matrix",
                                     '[["1","0"],["0","1"]]')
    assert code == 1
    assert report["outputs"]["in_cell"] is False
    assert "failed checks: in_cell" in captured.err


def test_cross_section_alternative_representative(capsys):
    code, report, _ = run_cli(capsys, "cross-section", "--matrix",
                              '[["1","0"],["5","1"]]', "--s-rep",
                              '[["0","-1/5"],["5","0"]]')
    assert code == 0
    assert report["outputs"]["in_cell"] is True


def test_cross_section_trial_mode(capsys):
    code, report, _ = run_cli(capsys, "cross-section", "--n", "3",
                              "--trials", "5", "--seed", "3")
    assert code == 0
    assert report["outputs"]["successes"] == 5


def test_kostant_single_matrix(capsys):
    code, report, _ = run_cli(capsys, "kostant-section", "--b",
                              '[["3/2","0"],["0","-3/2"]]')
    assert code == 0
    out = report["outputs"]
    assert out["conjugator"] == [["1", "-3/2"], ["0", "1"]]
    assert out["section_point"] == [["0", "9/4"], ["0", "0"]]
    assert out["companion_coordinates"] == ["9/4"]


def test_kostant_trial_mode(capsys):
    code, report, _ = run_cli(capsys, "kostant-section", "--n", "3",
                              "--trials", "5", "--seed", "3")
    assert code == 0
    assert report["checks"]["all_trials_ok"] is True


def test_rmatrix_check(capsys):
    code, report, _ = run_cli(capsys, "rmatrix-check", "--n", "2",
                              "--trials", "5")
    assert code == 0
    assert report["checks"]["mcybe_residual_zero"] is True
    assert report["checks"]["image_kernel_identities"] is True


def test_gstar_point_report(capsys):
    code, report, _ = run_cli(capsys, "gstar", "--x", "2,1/2",
                              "--u-params", "1/2")
    assert code == 0
    assert report["checks"]["q_map_in_cell"] is True
    assert report["checks"]["character_identity"] is True
    assert report["outputs"]["u"] == [["1", "0"], ["1", "1"]]


def test_acceptance_single_criterion(capsys):
    code, report, _ = run_cli(capsys, "acceptance", "--suite", "2")
    assert code == 0
    assert report["outputs"]["name"] == "qbinomial-vanishing"
    assert report["checks"]["passed"] is True


def test_usage_errors_exit_2(capsys):
    code, _, captured = run_cli(capsys, "cross-section", "--matrix", "nope")
    assert code == 2
    assert "not valid JSON" in captured.err

    code, _, _ = run_cli(capsys, "cross-section", "--matrix",
                         '[["1","0"],["0","1"]]', "--n", "3")
    assert code == 2

    code, _, _ = run_cli(capsys, "cross-section")
    assert code == 2

    code, _, _ = run_cli(capsys, "gstar", "--x", "2,1", "--u-params", "1")
    assert code == 2

    with pytest.raises(SystemExit) as exc:
        cli.main(["no-such-command"])
    assert exc.value.code == 2
    capsys.readouterr()

    with pytest.raises(SystemExit) as exc:
        cli.main(["cayley", "--rank", "2"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_reports_are_byte_identical(capsys):
    argv = ["cross-section", "--n", "4", "--trials", "10", "--seed", "11"]
    code1 = cli.main(argv)
    first = capsys.readouterr().out
    code2 = cli.main(argv)
    second = capsys.readouterr().out
    assert code1 == code2 == 0
    assert first == second


def test_out_flag_writes_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code = cli.main(["cayley", "--type", "A", "--rank", "2", "--out",
                     str(path)])
    captured = capsys.readouterr()
    assert code == 0
    assert captured.out == ""
    report = json.loads(path.read_text())
    assert report["command"] == "cayley"


def test_step_budget_env_var_limits_engine():
    env = dict(os.environ, QWHIT_STEP_BUDGET="3")
    proc = subprocess.run(
        [sys.executable, "-m", "qwhit.cli", "casimir", "--type", "A",
         "--rank", "2"],
        capture_output=True, text=True, env=env)
    assert proc.returncode == 1
    assert "step budget" in proc.stderr
