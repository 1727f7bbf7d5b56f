import pytest

from wsteen.models.errors import MalformedIndexSet, NotInSubalgebra
from wsteen.models.expressions import parse_expr
from wsteen.models.gf2 import gf2_rank
from wsteen.models.grading import Bidegree
from wsteen.models.shadow_modules import IndexSet, LiftCheck


def test_index_set_basics():
    I = IndexSet.of([2, 4])
    assert list(I) == [2, 4]
    assert len(I) == 2
    assert 4 in I and 3 not in I
    assert I.max_index == 4
    assert str(I) == "{2,4}"
    assert IndexSet.parse("{2, 4}") == I
    assert IndexSet.parse("{}").is_empty
    assert I.shifted(1) == IndexSet.of([3, 5])
    assert I.without(2) == IndexSet.e(4)


def test_index_set_rejects_small_indices():
    with pytest.raises(MalformedIndexSet):
        IndexSet.of([1])
    with pytest.raises(MalformedIndexSet):
        IndexSet.parse("{0,2}")
    with pytest.raises(MalformedIndexSet):
        IndexSet.parse("{a}")


def test_disjoint_union():
    assert IndexSet.e(2).disjoint_union(IndexSet.e(3)) == IndexSet.of([2, 3])
    with pytest.raises(MalformedIndexSet):
        IndexSet.of([2, 3]).with_index(3)


def test_subsets():
    subsets = IndexSet.subsets([2, 3])
    assert len(subsets) == 4
    assert IndexSet() in subsets and IndexSet.of([2, 3]) in subsets


def test_lift_check_modes():
    with pytest.raises(ValueError):
        LiftCheck("often")
    sampled = LiftCheck("sampled", rate=4)
    assert [sampled.due() for _ in range(5)] == [True, False, False, False, True]
    assert not LiftCheck("never").due()
    assert LiftCheck("always").due()


def test_tau_xi_bar_is_in_the_subalgebra(qcl_shadows):
    A = qcl_shadows.A
    x = A.tau() * A.xi_bar(1)
    expanded = qcl_shadows.hw_expand(x)
    assert expanded.reexpand() == x
    assert qcl_shadows.in_hw(x)


def test_xi1_is_not_in_the_subalgebra(qcl_shadows):
    with pytest.raises(NotInSubalgebra):
        qcl_shadows.hw_expand(qcl_shadows.A.xi(1))
    assert not qcl_shadows.in_hw(qcl_shadows.A.xi(1))


@pytest.mark.parametrize("text", ["t0", "t1*t2", "xb1^2", "xb2 + t0*t1", "tau*t1"])
def test_certificates_reexpand(fq3_shadows, text):
    x = parse_expr(fq3_shadows.A, text)
    assert fq3_shadows.hw_expand(x).reexpand() == x


def test_twisted_tau_xi_bar_is_in_the_subalgebra(fq3_shadows):
    assert fq3_shadows.in_hw(fq3_shadows.xi_bar_tau)


def test_c_elements(qcl_shadows):
    A = qcl_shadows.A
    assert qcl_shadows.c_element(IndexSet()).is_zero()
    assert qcl_shadows.c_element(IndexSet.e(2)) == A.power(A.xi_bar(1), 2)
    assert qcl_shadows.c1_element(IndexSet()) == A.tau_i(0)


def test_reduction_mod_twisted_tau(fq3_shadows, qcl_shadows):
    A = fq3_shadows.A
    assert not fq3_shadows.to_hkm(A.tau() + A.rho() * A.tau_i(0))
    assert not qcl_shadows.to_hkm(qcl_shadows.A.tau())
    assert fq3_shadows.to_hkm(A.tau()).rep == A.rho() * A.tau_i(0)


def test_hkm_basis_is_tau_free(fq3_shadows):
    assert all(m.tpow == 0 for m in fq3_shadows.hkm_basis(Bidegree(3, 0)))


def test_tau_vanishes_mod_tau(qcl_shadows):
    assert not qcl_shadows.to_kmhw(qcl_shadows.A.tau())


def test_left_differential_values(qcl_shadows):
    sh = qcl_shadows
    A = sh.A
    assert sh.d_left(sh.to_kmhw(A.tau_i(1))).terms == sh.to_kmhw(A.tau_i(0)).terms
    assert sh.d_left(sh.to_kmhw(A.xi_bar(2))).terms == sh.to_kmhw(A.power(A.xi_bar(1), 2)).terms


def test_left_differential_squares_to_zero(qcl_shadows):
    sh = qcl_shadows
    for key in sh.kmhw_basis(Bidegree(7, 3)):
        x = sh.kmhw_element([key])
        assert not sh.d_left(sh.d_left(x))


def test_right_differential_squares_to_zero(fq3_shadows):
    sh = fq3_shadows
    for m in sh.hkm_basis(Bidegree(6, 2)):
        x = sh.to_hkm(sh.A.element([m]))
        assert not sh.d_right(sh.d_right(x))


def test_right_basis_matrix_is_invertible(fq3_shadows):
    keys, matrix = fq3_shadows.right_basis_matrix(Bidegree(3, 0))
    assert matrix.shape == (len(keys), len(keys))
    assert gf2_rank(matrix) == len(keys)


def test_hkw_presentation(qcl_shadows):
    assert len(qcl_shadows.hkw_presentation_basis(Bidegree(0, 0))) == 1
    assert qcl_shadows.hkw_presentation_basis(Bidegree(2, 1)) == []
    assert len(qcl_shadows.hkw_presentation_basis(Bidegree(4, 2))) == 1
    assert qcl_shadows.hkw_rank(Bidegree(4, 2)) == 1


def test_key_formatting(qcl_shadows):
    keys = qcl_shadows.hkw_presentation_basis(Bidegree(4, 2))
    assert qcl_shadows.format_hkw_key(keys[0]) == "xb1^2"


def test_left_differential_is_a_derivation(qcl_shadows):
    sh = qcl_shadows
    for key in sh.kmhw_basis(Bidegree(7, 3)):
        for other in sh.kmhw_basis(Bidegree(3, 1)):
            x, y = sh.kmhw_element([key]), sh.kmhw_element([other])
            assert not sh.leibniz_defect(x, y).terms, f"{x} ; {y}"


def test_leibniz_on_tau_monomials(qcl_shadows):
    sh = qcl_shadows
    A = sh.A
    x, y = sh.to_kmhw(A.tau_i(1)), sh.to_kmhw(A.tau_i(2))
    assert not sh.leibniz_defect(x, y).terms
    assert sh.d_left(x * x).terms == (sh.d_left(x) * x + x * sh.d_left(x)).terms


def test_to_hkm_lands_on_tau_free_monomials(fq3_shadows):
    sh = fq3_shadows
    A = sh.A
    reduced = sh.to_hkm(A.tau() * A.tau_i(1))
    assert reduced.rep
    assert all(m.tpow == 0 for m in reduced.rep.terms)
    assert sh.to_hkm(A.tau()).rep == sh.to_hkm(A.rho() * A.tau_i(0)).rep
    assert sh.to_hkm(reduced.rep).rep == reduced.rep


def test_to_hkm_kills_tau_without_rho(qcl_shadows):
    assert not qcl_shadows.to_hkm(qcl_shadows.A.tau())


def test_to_hkm_is_constant_on_classes(fq3_shadows):
    sh = fq3_shadows
    A = sh.A
    relation = A.tau() + A.rho() * A.tau_i(0)
    x = A.tau_i(1) + A.tau() * A.xi_bar(1)
    for y in (A.tau_i(2), A.tau() * A.tau_i(0), A.xi_bar(1)):
        assert not sh.to_hkm(relation * y)
        assert sh.to_hkm(x + relation * y).rep == sh.to_hkm(x).rep
