import pytest

from wsteen.models.errors import GeneratorCapExceeded, InvalidArgument
from wsteen.models.eta_local import LocalKey, local_weight, localize, verify_corollary
from wsteen.models.field_data import resolve_preset
from wsteen.models.grading import Bidegree
from wsteen.models.shadow_modules import IndexSet


@pytest.fixture(scope="module")
def local(fq3_engines):
    return fq3_engines.local


def test_squares_of_x_over_fq3(local):
    assert local.x(2) * local.x(2) == local.scale(2, local.x(3))
    assert local.x(2) * local.x(2)


def test_squares_of_x_vanish_over_qcl(qcl_engines):
    L = qcl_engines.local
    assert not L.x(2) * L.x(2)


def test_y_squares_to_zero(local):
    assert not local.y() * local.y()


def test_eta_is_invertible(local):
    assert local.eta(1) * local.eta(-1) == local.one()


def test_generator_range(local):
    with pytest.raises(InvalidArgument):
        local.x(1)
    with pytest.raises(GeneratorCapExceeded):
        local.x(7)


def test_localize_generators(fq3_engines, local):
    kw = fq3_engines.kwhw
    assert localize(local, kw.t(2)) == local.eta(3) * local.x(2)
    assert localize(local, kw.s()) == local.eta(1) * local.y()
    assert localize(local, kw.eta()) == local.eta(1)


def test_localize_kills_torsion(fq3_engines, local):
    kw = fq3_engines.kwhw
    assert not localize(local, kw.c(IndexSet.e(2)))
    assert not localize(local, kw.c1(IndexSet()))


def test_weights_and_bases(local):
    assert local_weight(1, IndexSet.e(2)) == 9
    assert local.bidegree(LocalKey(0, 0, IndexSet.e(2))) == Bidegree(4, 0)
    assert local.basis(4, 3) == [(0, IndexSet.e(2))]
    assert local.basis(5, 3) == [(1, IndexSet())]
    assert local.basis(12, 3) == [(0, IndexSet.of([2, 3]))]


def test_format(local):
    assert str(local.eta(2) * local.y()) == "eta^2*y"
    assert str(local.zero()) == "0"


@pytest.mark.parametrize("field", ["qcl", "fq3"])
def test_corollary_checks_pass(engines_by_field, field):
    model = engines_by_field(resolve_preset(field)).kwhw
    records = verify_corollary(model, jmax=3, samples=20, seed=7)
    assert records
    assert [r.name for r in records if not r.passed] == []


def test_corollary_respects_the_generator_cap(fq3_engines):
    with pytest.raises(GeneratorCapExceeded):
        verify_corollary(fq3_engines.kwhw, jmax=7)


@pytest.mark.parametrize("field, exponent", [("qcl", 1), ("fq1", 1), ("fq3", 2)])
def test_coefficient_exponent_kills_w(engines_by_field, field, exponent):
    model = engines_by_field(resolve_preset(field)).kwhw
    records = {r.name: r for r in verify_corollary(model, jmax=2, samples=5, seed=3)}
    record = records["coefficient exponent"]
    assert record.passed
    assert record.detail.startswith(f"exponent {exponent} ")
    assert model.witt.scale(2 ** exponent, model.witt.one) == model.witt.zero
    assert model.witt.scale(2 ** (exponent - 1), model.witt.one) != model.witt.zero
