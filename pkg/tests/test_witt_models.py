import numpy as np
import pytest

from wsteen.models.errors import IncompatiblePair, InvalidArgument, NotInImage, PresetError
from wsteen.models.eta_local import random_pairs, sample_elements
from wsteen.models.grading import Bidegree
from wsteen.models.milnor_dual import DualSteenrod
from wsteen.models.shadow_modules import IndexSet, ShadowModules
from wsteen.models.witt_models import (
    RELATIONS,
    FreeKey,
    KWHWModel,
    RelationVerifier,
    claimed_bidegrees,
    degree_audit,
    independence_check,
    parameter_grid,
    relations_for,
)

EMPTY = IndexSet()


@pytest.fixture(scope="module")
def kw(qcl_engines):
    return qcl_engines.kwhw


@pytest.fixture(scope="module")
def pairs(qcl_engines):
    return qcl_engines.pairs


def test_s_squares_to_zero(kw):
    assert kw.s() * kw.s() == kw.zero()


def test_free_generators_start_at_two(kw):
    with pytest.raises(InvalidArgument):
        kw.t(1)
    assert not kw.t(2).is_torsion


def test_eta_kills_torsion(kw):
    assert kw.eta_times(kw.c1(EMPTY)) == kw.zero()
    assert kw.eta_times(kw.one()) == kw.eta()


def test_torsion_certificate(kw):
    sh = kw.shadows
    preimage = kw.certify_torsion(kw.c1(EMPTY))
    assert preimage.terms == sh.to_kmhw(sh.A.tau_i(1)).terms
    assert not kw.certify_torsion(kw.one()).terms


def test_unit_is_not_eta_torsion(kw):
    with pytest.raises(NotInImage):
        kw.certify_torsion(kw.torsion(kw.A.one()))


def test_residue_of_unit(kw):
    assert kw.residue(kw.one()).terms == kw.shadows.to_kmhw(kw.A.one()).terms


def test_scalar_outside_the_tower(fq3_engines):
    kw = fq3_engines.kwhw
    with pytest.raises(InvalidArgument):
        kw.scalar(2, kw.witt.one)


def test_custom_preset_has_no_witt_model(custom_preset):
    with pytest.raises(PresetError):
        KWHWModel(ShadowModules(DualSteenrod(custom_preset)))


def test_pairs_must_be_compatible(pairs, kw):
    A = pairs.A
    assert pairs.make_pair(A.tau_i(0), kw.c1(EMPTY)).a == A.tau_i(0)
    assert pairs.make_pair(A.zero(), kw.zero()) == pairs.zero()
    with pytest.raises(IncompatiblePair):
        pairs.make_pair(A.tau_i(0), kw.zero())


def test_theorem_generators(pairs):
    A = pairs.A
    t = pairs.theorem_generator("t")
    assert t.a == A.tau()
    assert t.b == pairs.kwhw.zero()
    assert pairs.theorem_generator("c") == pairs.unit()
    assert pairs.theorem_generator("t1").a == A.tau() * A.tau_i(1)
    assert pairs.theorem_generator("t2").b == pairs.kwhw.t(2)


def test_theorem_generator_arguments(pairs):
    with pytest.raises(InvalidArgument):
        pairs.theorem_generator("s", IndexSet.e(2))
    with pytest.raises(InvalidArgument):
        pairs.theorem_generator("q")


def test_relation_registry():
    assert [rel.id for rel in relations_for("lemma-c")] == ["c-c", "c-c1", "c1-c1"]
    assert all(rel.suite for rel in RELATIONS.values())


def test_parameter_grids():
    assert len(parameter_grid(RELATIONS["c-c"], 3)) == 16
    assert parameter_grid(RELATIONS["tj-square"], 3) == [{"j": 2}, {"j": 3}]
    assert parameter_grid(RELATIONS["kmhw-tr-square"], 2) == [{"r": 1}, {"r": 2}]
    assert parameter_grid(RELATIONS["s-square"], 4) == [{}]


def test_tau0_fourth_power_holds(pairs):
    assert RelationVerifier(pairs).verify("tau0-4").status == "holds"


def test_c1_relation_holds(pairs):
    I = IndexSet.e(2)
    check = RelationVerifier(pairs).verify("c1-c1", I=I, J=I)
    assert check.status == "holds"
    assert check.params == {"I": "{2}", "J": "{2}"}


def test_t_relation_needs_the_tau_correction(pairs):
    check = RelationVerifier(pairs).verify("t-t", I=EMPTY, J=EMPTY)
    assert check.status == "fails-as-printed-holds-with-correction"
    assert check.correction == "tau-corrected"
    assert not check.homogeneous
    assert "inhomogeneous" in check.detail


def test_unknown_relation(pairs):
    with pytest.raises(InvalidArgument):
        RelationVerifier(pairs).verify("x-y")


def test_degree_audit_flags_s(pairs):
    rows = {name: (printed, computed) for name, printed, computed in degree_audit(pairs, max_index=2)}
    assert rows["s"] == (Bidegree(5, 0), Bidegree(6, 1))
    assert rows["t2"][0] == rows["t2"][1]


def test_independence_in_low_degrees(pairs):
    report = independence_check(pairs, Bidegree(0, 0), max_index=2)
    assert report.candidates == ["1"]
    assert report.independent
    report = independence_check(pairs, Bidegree(1, 0), max_index=2)
    assert len(report.candidates) == 1
    assert report.rank == 1


def test_claimed_bidegrees_include_tau_multiples(pairs):
    found = claimed_bidegrees(pairs, weight_cap=0, max_index=2)
    assert Bidegree(0, 0) in found
    assert Bidegree(0, -1) in found


def test_free_generators_by_residue_degree(kw):
    assert kw.free_generators(Bidegree(0, 0)) == [kw.one()]
    assert kw.free_generators(Bidegree(6, 1)) == [kw.s()]
    assert kw.free_generators(Bidegree(7, 3)) == [kw.t(2)]
    assert kw.free_generators(Bidegree(1, 0)) == []
    assert kw.key_degree(FreeKey(1, IndexSet.e(2))) == Bidegree(13, 4)


def test_residues_of_free_generators_are_cycles(kw):
    sh = kw.shadows
    for x in (kw.s(), kw.t(2), kw.t(3), kw.s() * kw.t(2)):
        assert kw.residue(x).terms
        assert not sh.d_left(kw.residue(x)).terms


def test_rho_is_a_free_generator_over_fq3(fq3_engines):
    kw = fq3_engines.kwhw
    assert kw.rho() in kw.free_generators(Bidegree(-1, -1))


@pytest.mark.parametrize("left, right", [("t2", "t2"), ("s", "t2"), ("s", "s"), ("one", "s")])
def test_residue_is_multiplicative(kw, left, right):
    named = {"t2": kw.t(2), "s": kw.s(), "one": kw.one()}
    assert kw.residue_is_multiplicative(named[left], named[right])


def test_residue_is_multiplicative_on_samples(kw):
    elements = sample_elements(kw, np.random.default_rng(11), 12, 2, torsion=False)
    for x, y in zip(elements[::2], elements[1::2]):
        assert kw.residue_is_multiplicative(x, y), f"{x} ; {y}"


def test_pairs_satisfy_the_ring_axioms(pairs):
    named = [pairs.rho(), pairs.left_tau(), pairs.theorem_generator("t2"), pairs.right_tau()]
    assert pairs.ring_axiom_failures(*named[:3]) == []
    assert pairs.ring_axiom_failures(*named[1:]) == []


def test_random_pairs_form_a_commutative_ring(pairs):
    triples = random_pairs(pairs, np.random.default_rng(5), 9, 2)
    assert len(triples) == 9
    for x, y, z in zip(triples[::3], triples[1::3], triples[2::3]):
        assert pairs.ring_axiom_failures(x, y, z) == [], f"{x}"


def test_non_commuting_pairs_are_reported(pairs, monkeypatch):
    x, y = pairs.left_tau(), pairs.rho()
    original = type(x).__mul__

    def skewed(a, b):
        out = original(a, b)
        if a is y and b is x:
            return out + pairs.unit()
        return out

    monkeypatch.setattr(type(x), "__mul__", skewed)
    assert "commutativity" in pairs.ring_axiom_failures(x, y, pairs.zero())
