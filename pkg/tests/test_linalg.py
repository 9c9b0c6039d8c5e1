import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tangdeform.errors import DimensionMismatch, DivisionByZero
from tangdeform.linalg import DenseMatrix, in_span, kernel, rref, row_basis, solve, subspace_intersection
from tangdeform.scalar import GF, QQ


def span_set(vectors, p, dim):
    """Every vector of the F_p-span, by enumeration."""
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(vectors)):
        out.add(tuple(sum(c * v[i] for c, v in zip(coeffs, vectors)) % p for i in range(dim)))
    if not vectors:
        out.add((0,) * dim)
    return out


def random_family(rng, p, dim, k):
    return [[rng.randrange(p) for _ in range(dim)] for _ in range(k)]


def test_rref_example():
    M = DenseMatrix(QQ, [[0, 2, 4], [1, 1, 1], [2, 4, 6]])
    ech = rref(M)
    assert ech.rank == 2 and ech.pivot_columns == [0, 1]
    assert ech.reduced.to_rows()[:2] == [[1, 0, -1], [0, 1, 2]]


def test_kernel_and_solve():
    M = DenseMatrix(GF(5), [[1, 2, 3], [0, 1, 4]])
    for v in kernel(M):
        assert not any(M.apply(v))
    x = solve(M, [1, 0])
    assert M.apply(x) == [1, 0]
    assert solve(DenseMatrix(QQ, [[1, 1], [1, 1]]), [0, 1]) is None


def test_inverse():
    rng = random.Random(3)
    for K in (QQ, GF(7)):
        A = DenseMatrix(K, [[K.random_element(rng, 4) for _ in range(4)] for _ in range(4)])
        if A.is_invertible():
            assert A @ A.inverse() == DenseMatrix.identity(4, K)
    with pytest.raises(DivisionByZero):
        DenseMatrix(QQ, [[1, 2], [2, 4]]).inverse()


def test_intersection_examples():
    e = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    assert subspace_intersection([[e[0], e[1]], [e[1], e[2]]], QQ) == [[0, 1, 0]]
    assert subspace_intersection([[e[0]], [e[1]]], QQ) == []
    assert len(subspace_intersection([e, e, e], GF(3))) == 3
    with pytest.raises(DimensionMismatch):
        subspace_intersection([[[1, 0]], [[1, 0, 0]]], QQ)


def test_intersection_brute_force_fp():
    rng = random.Random(11)
    for trial in range(60):
        p = rng.choice([2, 3, 5])
        dim = rng.randint(1, 4 if p == 5 else 5)
        k = rng.randint(2, 3)
        fam = [random_family(rng, p, dim, rng.randint(0, dim)) for _ in range(k)]
        got = subspace_intersection(fam, GF(p), dim)
        expected = set.intersection(*(span_set(B, p, dim) for B in fam))
        assert span_set(got, p, dim) == expected
        # echelonized basis: size is log_p of the set size
        assert p ** len(got) == len(expected)


@settings(max_examples=50)
@given(st.integers(0, 2**32))
def test_intersection_properties_q(seed):
    rng = random.Random(seed)
    dim = rng.randint(1, 6)
    fam = [[[rng.randint(-2, 2) for _ in range(dim)] for _ in range(rng.randint(0, dim))] for _ in range(3)]
    full = subspace_intersection(fam, QQ, dim)
    # contained in every member
    for B in fam:
        for v in full:
            assert in_span(v, B, QQ)
    # order independence
    assert len(subspace_intersection(fam[::-1], QQ, dim)) == len(full)
    # Grassmann for the first pair
    U, V = row_basis(fam[0], QQ, dim), row_basis(fam[1], QQ, dim)
    both = row_basis(U + V, QQ, dim)
    assert len(subspace_intersection(fam[:2], QQ, dim)) == len(U) + len(V) - len(both)
