import pytest

from conftest import SMALL_WINDOW
from wsteen.models.errors import InvalidArgument, PredictorRefused, UnknownBidegree
from wsteen.models.grading import Bidegree
from wsteen.models.homology_engine import HomologyEngine, Window
from wsteen.models.milnor_dual import DualSteenrod
from wsteen.models.shadow_modules import ShadowModules


def test_window_membership():
    window = Window(max_p=4, min_q=-1, max_q=2)
    assert Bidegree(-4, 2) in window
    assert Bidegree(5, 0) not in window
    assert Bidegree(0, -2) not in window
    assert len(window.bidegrees()) == 9 * 4


def test_left_matrix_in_low_degree(qcl_engine):
    matrix = qcl_engine.matrix_of("d_left", Bidegree(3, 1))
    assert matrix.data.tolist() == [[1]]
    assert matrix.col_labels == ["t1"]
    assert matrix.row_labels == ["t0"]


def test_matrices_outside_the_window(qcl_engine):
    with pytest.raises(UnknownBidegree):
        qcl_engine.matrix_of("d_left", Bidegree(40, 0))


def test_unknown_map(qcl_engine):
    with pytest.raises(InvalidArgument):
        qcl_engine.matrix_of("d_middle", Bidegree(0, 0))


@pytest.mark.parametrize("b, dim_h", [(Bidegree(0, 0), 1), (Bidegree(4, 2), 0), (Bidegree(7, 3), 1)])
def test_left_homology_matches_prediction(qcl_engine, b, dim_h):
    report = qcl_engine.homology_dim("d_left", b)
    assert report.dim_h == dim_h
    assert report.predicted_dim_h == dim_h


def test_homology_without_prediction(qcl_engine):
    report = qcl_engine.homology_dim("d_left", Bidegree(3, 1), predict=False)
    assert report.dim_domain == 1
    assert report.dim_ker == 0
    assert report.predicted_dim_h is None
    assert report.match is None


@pytest.mark.parametrize("map_id", ["d_left", "d_right"])
def test_squares_to_zero(qcl_engine, map_id):
    for b in [Bidegree(7, 3), Bidegree(8, 3), Bidegree(6, 2)]:
        assert qcl_engine.squares_to_zero(map_id, b)


def test_right_differential_over_fq3(fq3_shadows):
    engine = HomologyEngine(fq3_shadows, SMALL_WINDOW)
    assert engine.squares_to_zero("d_right", Bidegree(6, 2))
    report = engine.homology_dim("d_right", Bidegree(4, 1))
    assert report.predicted_dim_h == 0


def test_exactness_counts(qcl_engine):
    assert qcl_engine.exactness(Bidegree(4, 2)) == (1, 1)


def test_image_ideal_contains_tau0(qcl_engine):
    assert qcl_engine.image_ideal_rank(Bidegree(1, 0)) == 1


def test_sweep_skips_empty_domains(qcl_engine):
    reports = qcl_engine.sweep("d_left", [Bidegree(0, 0), Bidegree(1, 1)], predict=False)
    assert [r.bidegree for r in reports] == [str(Bidegree(0, 0))]


def test_predictor_refuses_when_rho_cubed_survives(custom_preset):
    shadows = ShadowModules(DualSteenrod(custom_preset))
    engine = HomologyEngine(shadows, SMALL_WINDOW)
    with pytest.raises(PredictorRefused):
        engine.predicted_homology_count(Bidegree(0, 0))
    with pytest.raises(PredictorRefused):
        engine.homology_dim("d_left", Bidegree(0, 0))
    assert engine.homology_dim("d_left", Bidegree(0, 0), predict=False).dim_domain >= 1
