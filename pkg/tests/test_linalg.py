import random
from fractions import Fraction

import pytest

from nodalvb import linalg


def F(x):
    return Fraction(x)


def test_rref_pivots():
    m = [[F(1), F(2), F(3)], [F(2), F(4), F(6)], [F(0), F(1), F(1)]]
    red, pivots = linalg.rref(m)
    assert pivots == [0, 1]
    assert linalg.rank(m) == 2


def test_nullspace_annihilates():
    rng = random.Random(1)
    for _ in range(30):
        rows = rng.randint(1, 5)
        cols = rng.randint(1, 6)
        m = [[F(rng.randint(-3, 3)) for _ in range(cols)] for _ in range(rows)]
        basis = linalg.nullspace(m, cols)
        assert len(basis) == cols - linalg.rank(m)
        for v in basis:
            assert all(
                sum(m[i][j] * v[j] for j in range(cols)) == 0
                for i in range(rows)
            )


def test_nullspace_of_empty_system():
    assert len(linalg.nullspace([], 3)) == 3


def test_det_and_inverse():
    m = [[F(2), F(1)], [F(5), F(3)]]
    assert linalg.det(m) == 1
    inv = linalg.inverse(m)
    assert linalg.mat_eq(linalg.mat_mul(m, inv), linalg.identity(2))
    assert linalg.det(linalg.identity(4)) == 1
    assert linalg.det([[F(0)]]) == 0
    assert linalg.det([]) == 1
    with pytest.raises(ValueError):
        linalg.det([[F(1), F(2)]])
    with pytest.raises(ValueError):
        linalg.inverse([[F(0)]])


def test_det_matches_permutation_expansion():
    import itertools

    rng = random.Random(3)
    for _ in range(20):
        n = rng.randint(1, 4)
        m = [[F(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
        brute = sum(
            _sign(p) * _prod(m[i][p[i]] for i in range(n))
            for p in itertools.permutations(range(n))
        )
        assert linalg.det(m) == brute


def _sign(perm):
    seen = [False] * len(perm)
    sign = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        length = 0
        j = i
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _prod(xs):
    out = F(1)
    for x in xs:
        out *= x
    return out


def test_span_solver():
    basis = [
        [F(1), F(0), F(1)],
        [F(0), F(1), F(1)],
    ]
    solver = linalg.SpanSolver(basis)
    assert solver.coordinates([F(2), F(3), F(5)]) == [F(2), F(3)]
    assert solver.coordinates([F(1), F(0), F(0)]) is None


def test_span_solver_dependent_basis():
    basis = [
        [F(1), F(1)],
        [F(2), F(2)],
    ]
    solver = linalg.SpanSolver(basis)
    coords = solver.coordinates([F(3), F(3)])
    assert coords is not None
    got = [
        coords[0] * basis[0][i] + coords[1] * basis[1][i] for i in range(2)
    ]
    assert got == [F(3), F(3)]


def test_mat_mul_shapes():
    a = [[F(1), F(2)]]
    b = [[F(3)], [F(4)]]
    assert linalg.mat_mul(a, b) == [[F(11)]]
    with pytest.raises(ValueError):
        linalg.mat_mul(a, a)
