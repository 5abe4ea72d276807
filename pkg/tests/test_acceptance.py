"""Gate file: one test per acceptance criterion, run at the report seed."""

from qwhit import acceptance

SEED = 7


def run(fn):
    report = fn(SEED)
    verdict = "PASS" if report["passed"] else "FAIL"
    print(f"criterion {report['criterion']} ({report['name']}): {verdict}")
    assert report["passed"], report
    return report


def test_criterion_01_cayley_identity():
    report = run(acceptance.criterion_1)
    assert report["entries_checked"] > 0


def test_criterion_02_qbinomial_vanishing():
    report = run(acceptance.criterion_2)
    assert len(report["scans"]) == 6


def test_criterion_03_serre_character_identities():
    report = run(acceptance.criterion_3)
    assert report["identities_checked"] == 2 * 2 + 6 * 6 + 2 * 2 + 2 * 2


def test_criterion_04_character_vanishing():
    report = run(acceptance.criterion_4)
    assert report["root_vectors_checked"] == 3 + 6


def test_criterion_05_centrality():
    report = run(acceptance.criterion_5)
    assert len(report["cases"]) == 3


def test_criterion_06_whittaker_model():
    report = run(acceptance.criterion_6)
    assert all(c["homomorphism"] and c["invariant"] for c in report["cases"])


def test_criterion_07_toda():
    report = run(acceptance.criterion_7)
    assert report["closed_form_A1"] and report["closed_form_A2"]
    assert report["commute_A2"] and report["commute_A3"]
    assert report["quasiclassical_A1"]


def test_criterion_08_yang_baxter():
    report = run(acceptance.criterion_8)
    assert report["A1"] and report["A2"]


def test_criterion_09_group_cross_section():
    report = run(acceptance.criterion_9)
    assert report["oracle_matches"] == 20
    for n in (2, 3, 4, 5):
        assert report[f"n{n}"] == 50


def test_criterion_10_qmap_fibers():
    report = run(acceptance.criterion_10)
    for n in (2, 3):
        assert report[f"cell_hits_n{n}"] == 100
        assert report[f"regular_samples_n{n}"] > 0


def test_criterion_11_kostant_section():
    report = run(acceptance.criterion_11)
    assert report["round_trips_n2"] == 50
    assert report["round_trips_n3"] == 50


def test_criterion_12_classical_rmatrix():
    report = run(acceptance.criterion_12)
    for n in (2, 3, 4):
        assert report[f"residual_zero_n{n}"] == 50
        assert report[f"subspaces_n{n}"]


def test_criterion_13_engine_health():
    report = run(acceptance.criterion_13)
    assert report["confluence_passes"] == report["confluence_total"] == 600
    assert report["scalar_axiom_passes"] == report["scalar_axiom_total"] == 200
