import pytest

from conftest import SMALL_WINDOW
from wsteen.models.reports import CheckRecord
from wsteen.models.service import EngineConfig, PresetEngines
from wsteen.models.suites import SUITES, list_suites, run_suite


@pytest.fixture
def custom_engines(custom_preset):
    config = EngineConfig(max_p=SMALL_WINDOW.max_p, min_q=SMALL_WINDOW.min_q, max_q=SMALL_WINDOW.max_q, samples=10)
    return PresetEngines(custom_preset, config)


def test_registry_shape():
    assert len(SUITES) == 13
    for suite_id, entry in SUITES.items():
        assert entry["name"] and entry["description"]
        assert callable(entry["fn"])
    assert [s["id"] for s in list_suites()] == list(SUITES)


def test_unknown_suite_gives_an_error_record(qcl_engines):
    report = run_suite("no-such-suite", qcl_engines)
    assert not report.all_passed
    assert len(report.records) == 1
    assert report.records[0].error


def test_raising_checks_are_recorded(qcl_engines, monkeypatch):
    def boom():
        raise RuntimeError("bad check")

    def suite(ctx):
        yield "fine", lambda: CheckRecord(name="fine", passed=True)
        yield "boom", boom

    monkeypatch.setitem(SUITES, "boom", {"name": "Boom", "description": "raises", "fn": suite})
    report = run_suite("boom", qcl_engines)
    assert [r.name for r in report.records] == ["fine", "boom"]
    assert report.records[1].error
    assert "Check error: bad check" in report.records[1].detail
    assert not report.all_passed


def test_action_suite_passes(qcl_engines):
    report = run_suite("action", qcl_engines, samples=10)
    assert report.all_passed, [r.detail for r in report.failures()]
    assert report.parameters["samples"] == 10


def test_d_squared_over_the_small_window(qcl_engines):
    report = run_suite("d-squared", qcl_engines)
    assert report.all_passed, [r.detail for r in report.failures()]
    assert report.parameters["window"] == {"max_p": 8, "min_q": -2, "max_q": 4}


def test_c_relations_hold(qcl_engines):
    report = run_suite("lemma-c", qcl_engines, max_index=2)
    assert report.all_passed, [r.detail for r in report.failures()]
    assert len(report.records) == 3 * 4
    assert report.parameters["max_index"] == 2


def test_parameters_record_the_generator_cap(qcl_engines):
    assert run_suite("no-such-suite", qcl_engines).parameters == {}
    report = run_suite("lemma-c", qcl_engines, max_index=9)
    assert report.parameters["gen_cap"] == 6
    assert report.parameters["max_index"] == 6


def test_eta_inverted_needs_a_witt_model(custom_engines):
    report = run_suite("eta-inverted", custom_engines)
    assert not report.all_passed
    assert all(r.error for r in report.records)


@pytest.mark.slow
def test_kernel_sweep_falls_back_without_prediction(custom_engines):
    report = run_suite("kernel-d", custom_engines)
    left = next(r for r in report.records if r.name.startswith("d_left"))
    assert left.passed
    assert "dimensions reported only" in left.detail
    assert all(entry["predicted_dim_h"] is None for entry in left.data["entries"])


def test_d_squared_includes_the_leibniz_rule(qcl_engines):
    report = run_suite("d-squared", qcl_engines, samples=10)
    leibniz = next(r for r in report.records if r.name == "d_left is a derivation")
    assert leibniz.passed, leibniz.detail


@pytest.mark.slow
def test_residues_and_im_d_left_fill_the_kernel(qcl_engines):
    report = run_suite("eta-torsion", qcl_engines)
    names = [r.name for r in report.records]
    assert "no higher eta-torsion: residues and im d_left fill ker d_left" in names
    assert report.all_passed, [r.detail for r in report.failures()]


@pytest.mark.slow
def test_kw_presentation_checks_products(qcl_engines):
    report = run_suite("kw-presentation", qcl_engines, samples=10, max_index=2)
    by_name = {r.name: r for r in report.records}
    assert by_name["residue is multiplicative on free parts modulo im d_left"].passed
    assert by_name["compatible pairs form a commutative ring"].passed
