import numpy as np
import pytest

from wsteen.models.grading import Bidegree
from wsteen.models.oracles import (
    bitset_rank,
    classify_closed_witt_ring,
    classify_finite_witt_ring,
    dense_homology_dim,
    dual_steenrod_monomials_bruteforce,
    milnor_k_mod2,
)


def test_milnor_k_of_f3():
    oracle = milnor_k_mod2(3)
    assert oracle.dims == {0: 1, 1: 1, 2: 0}
    assert oracle.rho_nonzero
    assert oracle.nonsquare == 2


def test_milnor_k_of_f5():
    oracle = milnor_k_mod2(5)
    assert not oracle.rho_nonzero
    assert oracle.dims[1] == 1


def test_oracle_needs_an_odd_prime():
    with pytest.raises(ValueError):
        milnor_k_mod2(9)


def test_witt_ring_orders():
    assert len(classify_finite_witt_ring(3).labels) == 4
    assert len(classify_finite_witt_ring(5).labels) == 4
    assert len(classify_closed_witt_ring().labels) == 2


def test_bitset_rank():
    assert bitset_rank([3, 1, 2]) == 2
    assert bitset_rank([]) == 0


def test_dense_homology():
    assert dense_homology_dim(np.array([[1]]), np.zeros((1, 0))) == 0
    assert dense_homology_dim(np.zeros((0, 2)), np.array([[1], [1]])) == 1


@pytest.mark.parametrize("b", [Bidegree(3, 1), Bidegree(4, 1), Bidegree(2, 0)])
def test_bruteforce_bases_agree_with_the_engine(fq3_algebra, b):
    A = fq3_algebra
    engine = {(m.c, m.tpow, m.E, m.R) for m in A.basis(b)}
    oracle = dual_steenrod_monomials_bruteforce(b.p, b.q, A.gen_cap, len(A.km.classes), A.km.vanishing)
    assert engine == oracle
