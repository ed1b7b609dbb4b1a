"""Matricization, contraction and sparse storage against naive oracles."""

import numpy as np
import pytest

import oracles as o
from ttsketch import RngStream, SparseTensor, contract, dematricize, matricize
from ttsketch.tensor import (
    check_dense_size, inner, linear_index, norm, sparse_to_dense,
)


def _graded_tensor():
    # x[i,j,k] = 100 i + 10 j + k, shape (2, 3, 2)
    x = np.zeros((2, 3, 2))
    for i, j, k in np.ndindex(2, 3, 2):
        x[i, j, k] = 100 * i + 10 * j + k
    return x


def test_matricize_order_two_identity():
    x = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(matricize(x, (0,)), x)


def test_matricize_constant_tensor():
    x = np.ones((2, 2, 2))
    m = matricize(x, (0, 1))
    assert m.shape == (4, 2)
    assert np.all(m == 1.0)


def test_matricize_graded_tensor_against_oracle():
    x = _graded_tensor()
    m = matricize(x, (0, 1))
    assert np.array_equal(m, o.naive_matricize(x, [0, 1]))
    # the same table, written out: rows ordered (i,j) row-major, columns k
    want = np.array([
        [0.0, 1.0], [10.0, 11.0], [20.0, 21.0],
        [100.0, 101.0], [110.0, 111.0], [120.0, 121.0],
    ])
    assert np.array_equal(m, want)


def test_matricize_rejects_bad_mode_sets():
    x = np.ones((2, 3, 2))
    with pytest.raises(ValueError):
        matricize(x, ())
    with pytest.raises(ValueError):
        matricize(x, (1, 0))
    with pytest.raises(ValueError):
        matricize(x, (0, 3))
    with pytest.raises(ValueError):
        matricize(x, (1, 1))


def test_dematricize_round_trip_bitwise():
    x = RngStream(2).normals((2, 3, 4))
    m = matricize(x, (0, 2))
    back = dematricize(m, (2, 3, 4), (0, 2))
    assert np.array_equal(back, x)


def test_dematricize_all_ones():
    back = dematricize(np.ones((4, 2)), (2, 2, 2), (0, 1))
    assert np.all(back == 1.0)


def test_dematricize_recovers_graded_tensor():
    x = _graded_tensor()
    m = o.naive_matricize(x, [0, 1])
    assert np.array_equal(dematricize(m, (2, 3, 2), (0, 1)), x)


def test_dematricize_shape_mismatch():
    with pytest.raises(ValueError):
        dematricize(np.ones((4, 3)), (2, 2, 2), (0, 1))


def test_matricize_round_trips_random_mode_sets():
    rng = RngStream(11)
    shape = (2, 3, 2, 4)
    x = rng.normals(shape)
    for row_modes in [(0,), (1,), (3,), (0, 1), (0, 3), (1, 2), (0, 1, 2),
                      (1, 2, 3), (0, 1, 2, 3)]:
        m = matricize(x, row_modes)
        assert np.array_equal(m, o.naive_matricize(x, list(row_modes)))
        assert np.array_equal(dematricize(m, shape, row_modes), x)


def test_contract_vector_inner():
    u = np.array([1.0, 2.0])
    v = np.array([3.0, 4.0])
    assert float(contract(u, (0,), v, (0,))) == 11.0


def test_contract_identity_matvec():
    a = np.eye(2)
    v = np.array([5.0, 7.0])
    assert np.array_equal(contract(a, (1,), v, (0,)), v)


def test_contract_against_quintuple_loop():
    rng = RngStream(3)
    x = rng.substream(0).normals((2, 3, 2))
    y = rng.substream(1).normals((3, 2, 2))
    got = contract(x, (1, 2), y, (0, 2))
    want = o.naive_contract(x, [1, 2], y, [0, 2])
    assert got.shape == (2, 2)
    assert np.allclose(got, want, atol=1e-13)


def test_contract_size_mismatch():
    with pytest.raises(ValueError):
        contract(np.ones((2, 3)), (1,), np.ones((4, 2)), (0,))


def test_inner_trivials_and_oracle():
    x = RngStream(4).substream(0).normals((3, 3, 3))
    y = RngStream(4).substream(1).normals((3, 3, 3))
    assert inner(x, np.zeros_like(x)) == 0.0
    e = np.zeros((2, 2))
    e[0, 0] = 1.0
    assert inner(e, e) == 1.0
    assert abs(inner(x, y) - o.naive_inner(x, y)) < 1e-12


def test_norm_values():
    assert norm(np.zeros((2, 2))) == 0.0
    e = np.zeros((3, 3))
    e[1, 1] = 1.0
    assert norm(e) == 1.0
    x = np.arange(1.0, 9.0).reshape(2, 2, 2)
    assert abs(norm(x) - np.sqrt(204.0)) < 1e-13


def test_linear_index_matches_numpy():
    shape = (3, 4, 5)
    for idx in [(0, 0, 0), (2, 3, 4), (1, 2, 3)]:
        assert linear_index(idx, shape) == np.ravel_multi_index(idx, shape)


def test_sparse_empty_and_single():
    empty = SparseTensor((2, 2, 2), np.empty((0, 3), dtype=np.int64), [])
    assert empty.nnz == 0
    assert np.all(sparse_to_dense(empty) == 0.0)
    one = SparseTensor((2, 2, 2), [[1, 1, 1]], [2.5])
    dense = sparse_to_dense(one)
    assert dense[1, 1, 1] == 2.5
    assert np.sum(dense != 0.0) == 1


def test_sparse_matches_placement_oracle():
    rng = RngStream(8)
    idx = rng.substream(0).index_draws(10, (4, 4, 4))
    idx = np.unique(idx, axis=0)
    values = rng.substream(1).normals(idx.shape[0])
    xs = SparseTensor((4, 4, 4), idx, values)
    assert np.array_equal(
        sparse_to_dense(xs), o.naive_sparse_dense((4, 4, 4), idx, values)
    )


def test_sparse_canonical_order_and_validation():
    a = SparseTensor((3, 3), [[2, 1], [0, 0]], [4.0, 5.0])
    b = SparseTensor((3, 3), [[0, 0], [2, 1]], [5.0, 4.0])
    assert np.array_equal(a.idx, b.idx)
    assert np.array_equal(a.values, b.values)
    dropped = SparseTensor((3, 3), [[1, 1], [2, 2]], [0.0, 1.0])
    assert dropped.nnz == 1
    with pytest.raises(ValueError):
        SparseTensor((3, 3), [[1, 1], [1, 1]], [1.0, 2.0])
    with pytest.raises(ValueError):
        SparseTensor((3, 3), [[3, 0]], [1.0])
    with pytest.raises(ValueError):
        SparseTensor((3, 3), [[0, 0]], [np.inf])


def test_dense_size_guard():
    check_dense_size((1024, 1024, 1024))  # exactly 2**30, fine
    huge = SparseTensor((2,) * 50, [[0] * 50], [1.0])
    with pytest.raises(ValueError):
        huge.to_dense()
