import numpy as np
import pytest

from wsteen.models.gf2 import (
    GF2Solver,
    gf2_column_space_basis,
    gf2_matmul,
    gf2_nullspace_basis,
    gf2_rank,
    gf2_row_reduce,
    gf2_solve,
    zeros,
)


def test_rank_is_taken_mod_two():
    assert gf2_rank([[1, 1], [1, 1]]) == 1
    assert gf2_rank([[2, 0], [0, 2]]) == 0
    assert gf2_rank([[1, 1, 0], [0, 1, 1], [1, 0, 1]]) == 2


def test_rank_of_empty_matrix():
    assert gf2_rank(zeros(0, 3)) == 0
    assert gf2_rank(zeros(3, 0)) == 0


def test_row_reduce_pivots():
    result = gf2_row_reduce([[0, 1, 1], [1, 1, 0]])
    assert result.pivots == (0, 1)
    assert result.matrix.tolist() == [[1, 0, 1], [0, 1, 1]]


def test_row_reduce_rejects_vectors():
    with pytest.raises(ValueError):
        gf2_row_reduce([1, 0, 1])


def test_nullspace_is_annihilated():
    m = np.array([[1, 1, 0, 1], [0, 1, 1, 0]], dtype=np.uint8)
    kernel = gf2_nullspace_basis(m)
    assert kernel.shape == (2, 4)
    assert not gf2_matmul(m, kernel.T).any()
    assert gf2_rank(kernel) == 2


def test_nullspace_of_matrix_without_rows():
    assert gf2_nullspace_basis(zeros(0, 3)).tolist() == np.eye(3, dtype=np.uint8).tolist()


def test_column_space_basis():
    m = [[1, 1, 0], [0, 0, 1]]
    basis = gf2_column_space_basis(m)
    assert basis.tolist() == [[1, 0], [0, 1]]
    assert gf2_column_space_basis(zeros(2, 2)).shape == (0, 2)


def test_solve_consistent_and_inconsistent():
    m = [[1, 1], [0, 1]]
    x = gf2_solve(m, [0, 1])
    assert x.tolist() == [1, 1]
    assert gf2_solve([[1, 0], [1, 0]], [1, 0]) is None


def test_solver_agrees_with_direct_solve():
    m = np.array([[1, 0, 1], [0, 1, 1], [1, 1, 0]], dtype=np.uint8)
    solver = GF2Solver(m)
    assert solver.rank == 2
    assert solver.nullity == 1
    x = solver.solve([1, 1, 0])
    assert gf2_matmul(m, x.reshape(-1, 1)).reshape(-1).tolist() == [1, 1, 0]
    assert solver.solve([1, 0, 0]) is None


def test_solver_on_zero_rows():
    solver = GF2Solver(zeros(0, 2))
    assert solver.solve(np.zeros(0, dtype=np.uint8)).tolist() == [0, 0]
