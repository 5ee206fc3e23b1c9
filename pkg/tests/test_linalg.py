import itertools

import numpy as np
import pytest

from galoisph import linalg as la
from galoisph.errors import EmptyDownset, GaloisPHError


def brute_kernel_size(a, p):
    n = a.shape[1]
    return sum(1 for x in itertools.product(range(p), repeat=n)
               if not (a @ np.array(x, dtype=np.int64) % p).any())


def test_field_validation():
    assert la.PrimeField(7).inv(3) == 5
    with pytest.raises(GaloisPHError):
        la.PrimeField(6)


def test_rank_examples():
    pi = np.hstack([np.eye(3, dtype=np.int64), np.zeros((3, 1), dtype=np.int64)])
    theta = np.array([[1, 0, 0]])
    assert la.rank(np.eye(3, dtype=np.int64), 2) == 3
    assert la.rank(pi, 2) == 3
    assert la.rank(la.matmul(theta, pi, 2), 2) == 1
    assert la.kernel_basis(pi, 2).dim == 1
    assert la.kernel_basis(np.eye(3, dtype=np.int64), 5).dim == 0
    assert la.kernel_basis(la.zeros(0, 3), 2).dim == 3


def test_rank_against_enumeration():
    rng = np.random.default_rng(0)
    for p in (2, 3, 5):
        for _ in range(40):
            r, c = rng.integers(1, 5, size=2)
            a = rng.integers(0, p, size=(r, c))
            k = la.kernel_basis(a, p)
            assert p ** k.dim == brute_kernel_size(a, p)
            assert la.rank(a, p) + k.dim == c
            assert not la.matmul(a, k.basis, p).any()


def test_subspace_operations():
    e = np.eye(3, dtype=np.int64)
    u = la.span(e[:, [0, 1]], 3)
    v = la.span(e[:, [1, 2]], 3)
    w = la.intersect(u, v)
    assert w == la.span(e[:, [1]], 3)
    assert la.intersect(u, u) == u
    assert la.intersect(u, la.zero_subspace(3, 3)).dim == 0
    assert w.dim == u.dim + v.dim - la.subspace_sum(u, v).dim
    # canonical form: different spanning sets give equal subspaces
    assert la.span(np.array([[1, 1], [1, 2], [0, 0]]), 3) == u


def test_quotient_maps():
    p = 5
    q = la.quotient_map(4, la.zero_subspace(4, p))
    assert np.array_equal(q, np.eye(4, dtype=np.int64))
    assert la.quotient_map(3, la.full_space(3, p)).shape == (0, 3)
    e = np.eye(5, dtype=np.int64)
    w = la.span(e[:, [4]], p)
    q, sec = la.quotient_map(5, w, with_section=True)
    assert q.shape == (4, 5)
    assert not la.matmul(q, w.basis, p).any()
    assert np.array_equal(la.matmul(q, sec, p), np.eye(4, dtype=np.int64))


def test_solve_and_inverse():
    a = np.array([[1, 2], [3, 4]])
    inv = la.inverse(a, 7)
    assert np.array_equal(la.matmul(a % 7, inv, 7), np.eye(2, dtype=np.int64))
    x = la.solve(a, np.array([1, 0]), 7)
    assert np.array_equal(la.matmul(a % 7, x, 7).ravel(), [1, 0])
    assert la.solve(np.array([[1], [1]]), np.array([1, 0]), 2) is None
    assert la.inverse(np.array([[1, 1], [1, 1]]), 2) is None


def test_large_prime_does_not_overflow():
    p = 2**31 - 1
    a = np.full((3, 3), p - 1, dtype=np.int64)
    assert la.matmul(a, a, p)[0, 0] == (3 * (p - 1) ** 2) % p


def test_colimits():
    # span of two copies of k over a common lower point, identity maps
    dims = {"o": 1, "x": 1, "y": 1}
    one = np.ones((1, 1), dtype=np.int64)
    col = la.colimit(dims, [("o", "x", one), ("o", "y", one)], 2)
    assert col.dim == 1
    assert la.colimit({"r": 3}, [], 2).dim == 3
    with pytest.raises(EmptyDownset):
        la.colimit({}, [], 2)
    # without the common point the copies stay apart
    assert la.colimit({"x": 1, "y": 1}, [], 2).dim == 2
