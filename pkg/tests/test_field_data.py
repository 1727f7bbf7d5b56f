import pytest

from wsteen.models.errors import PresetError
from wsteen.models.field_data import (
    FQ1,
    FQ3,
    QCL,
    FieldKind,
    exact_sequence_accounting,
    km_basis,
    km_class,
    km_mul,
    km_one,
    kw_eta,
    kw_tower,
    load_custom_preset,
    milnor_k,
    resolve_preset,
    witt_model,
)


def test_resolve_named_presets():
    assert resolve_preset("qcl") is QCL
    assert resolve_preset("fq1") is FQ1
    assert resolve_preset("fq3") is FQ3


def test_resolve_unknown_preset():
    with pytest.raises(PresetError):
        resolve_preset("fq7")


def test_unit_law():
    rho = km_class(FQ3, "rho")
    assert km_mul(km_one(FQ3), rho).terms == rho.terms


def test_rho_squares_to_zero_over_fq3():
    rho = km_class(FQ3, "rho")
    assert not km_mul(rho, rho)


def test_rho_vanishes_over_qcl():
    assert milnor_k(QCL).rho is None


def test_km_bases():
    assert len(km_basis(QCL, 0)) == 1
    assert len(km_basis(FQ3, 1)) == 1
    assert milnor_k(FQ3).basis(1) == ((1,),)
    assert km_basis(FQ1, 2) == []


def test_witt_ring_orders():
    assert witt_model(QCL).size == 2
    assert witt_model(FQ3).size == 4
    assert witt_model(FQ1).size == 4


def test_witt_ring_two_torsion():
    fq1 = witt_model(FQ1)
    fq3 = witt_model(FQ3)
    assert fq1.two == fq1.zero
    assert fq3.two != fq3.zero
    assert fq3.scale(4, fq3.one) == fq3.zero
    assert fq3.exponent == 2
    assert fq1.exponent == 1


@pytest.mark.parametrize("preset", [QCL, FQ1, FQ3])
def test_witt_axioms(preset):
    assert witt_model(preset).check_axioms() == []


def test_fq3_tower_vanishes_in_degree_two():
    tower = kw_tower(FQ3)
    assert tower.group(2) == frozenset({tower.witt.zero})
    assert kw_eta(tower, 1, tower.witt.zero) == tower.witt.zero


def test_tower_is_whole_ring_in_nonpositive_degrees():
    tower = kw_tower(FQ3)
    assert tower.group(0) == frozenset(tower.witt.elements())
    assert tower.group(-3) == frozenset(tower.witt.elements())


def test_exact_sequence_accounting_returns_every_degree():
    table = exact_sequence_accounting(FQ3, range(-2, 3))
    assert sorted(table) == [-2, -1, 0, 1, 2]


def test_custom_preset_file(custom_preset):
    assert custom_preset.kind == FieldKind.CUSTOM
    assert custom_preset.classes == ("rho", "a")
    assert not custom_preset.has_witt_model
    ring = milnor_k(custom_preset)
    assert ring.rho is not None
    assert len(ring.basis(3)) == 2
    assert ring.basis(4) == ((3, 1),)


def test_custom_preset_has_no_witt_model(custom_preset):
    with pytest.raises(PresetError):
        witt_model(custom_preset)


def test_malformed_preset_file(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("rho_nilpotence 2\n", encoding="utf-8")
    with pytest.raises(PresetError):
        load_custom_preset(str(path))


def test_reserved_class_name(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("classes: t2\n", encoding="utf-8")
    with pytest.raises(PresetError):
        load_custom_preset(str(path))
