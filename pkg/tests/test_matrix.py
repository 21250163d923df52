import random

import pytest

from conftest import FIELDS, field_id, mat, rand_invertible, rand_matrix
from idemdecomp.errors import NotInvertibleError, PreconditionError, ShapeError
from idemdecomp.fields import QQ, PrimeField
from idemdecomp.matrix import (
    Matrix,
    SimilarityCert,
    block_diag,
    charpoly,
    companion,
    f_matrix,
    h_matrix,
    kernel_dim_powers,
    minpoly,
    poly_at_matrix,
    rank,
    verify_similarity,
)
from idemdecomp.poly import Poly

F2, F5 = PrimeField(2), PrimeField(5)


def test_companion_examples():
    x = Poly.x(QQ)
    assert companion(x - 5) == mat(QQ, [[5]])
    # X^2 - a1 X - a0 has companion [[0, a0], [1, a1]]
    assert companion(x ** 2 - 3 * x - 7) == mat(QQ, [[0, 7], [1, 3]])
    assert companion(x ** 3) == mat(QQ, [[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    # C(1) is the empty matrix; non-monic constants are rejected
    assert companion(Poly.one(QQ)).shape == (0, 0)
    with pytest.raises(PreconditionError):
        companion(Poly(QQ, [2]))


def test_h_f_and_block_diag():
    assert h_matrix(QQ, 2, 3) == mat(QQ, [[0, 0, 1], [0, 0, 0]])
    assert f_matrix(QQ, 1) == mat(QQ, [[1]])
    assert f_matrix(QQ, 3) == Matrix.diag(QQ, [0, 0, 1])
    d = block_diag([mat(QQ, [[1]]), mat(QQ, [[0, 1], [0, 0]])])
    assert d == mat(QQ, [[1, 0, 0], [0, 0, 1], [0, 0, 0]])
    # empty blocks are neutral
    assert block_diag([Matrix.zeros(QQ, 0), d, Matrix.zeros(QQ, 0)]) == d
    with pytest.raises((PreconditionError, ShapeError)):
        h_matrix(QQ, 0, 2)


def test_kernel_dim_powers_examples():
    assert kernel_dim_powers(Matrix.identity(QQ, 3), 1, 3) == [0, 3, 3, 3]
    j3 = companion(Poly.x(QQ) ** 3)
    assert kernel_dim_powers(j3, 0, 3) == [0, 1, 2, 3]
    assert kernel_dim_powers(companion(Poly(QQ, [1, 0, 1])), 0, 2) == [0, 0, 0]


def test_charpoly_minpoly_examples():
    x = Poly.x(QQ)
    p = x ** 3 - 2 * x - 1
    assert charpoly(companion(p)) == p and minpoly(companion(p)) == p
    z = Matrix.zeros(QQ, 2)
    assert charpoly(z) == x ** 2 and minpoly(z) == x
    d = block_diag([companion(x - 1), companion(x - 1)])
    assert charpoly(d) == (x - 1) ** 2 and minpoly(d) == x - 1


def test_verify_similarity_examples():
    a = mat(QQ, [[1, 2], [3, 4]])
    assert verify_similarity(a, a, SimilarityCert.identity(QQ, 2))
    j = mat(QQ, [[0, 1], [0, 0]])
    swap = mat(QQ, [[0, 1], [1, 0]])
    assert verify_similarity(j, j.T, SimilarityCert(swap, swap))
    i2 = Matrix.identity(QQ, 2)
    s = mat(QQ, [[1, 1], [0, 1]])
    assert not verify_similarity(i2, i2.scale(2), SimilarityCert.from_matrix(s))


def test_inverse_and_singular():
    s = mat(QQ, [[2, 1], [1, 1]])
    assert s @ s.inverse() == Matrix.identity(QQ, 2)
    with pytest.raises(NotInvertibleError):
        mat(F2, [[1, 1], [1, 1]]).inverse()


@pytest.mark.parametrize("field", FIELDS, ids=field_id)
def test_charpoly_of_companion_round_trip(field):
    rng = random.Random(11)
    for _ in range(200):
        deg = rng.randint(1, 10)
        p = Poly(field, [field(rng.randint(-5, 5)) for _ in range(deg)] + [1])
        c = companion(p)
        assert charpoly(c) == p
        assert minpoly(c) == p


@pytest.mark.parametrize("field", FIELDS, ids=field_id)
def test_rank_nullity(field):
    rng = random.Random(5)
    for _ in range(200):
        n, m = rng.randint(1, 6), rng.randint(1, 6)
        a = rand_matrix(field, n, rng, m=m)
        assert rank(a) + len(a.nullspace()) == m
        for v in a.nullspace():
            assert all(x == 0 for x in (a @ Matrix.column(field, v)).col(0))


@pytest.mark.parametrize("field", FIELDS, ids=field_id)
def test_jordan_counts_are_monotone(field):
    rng = random.Random(9)
    for _ in range(60):
        n = rng.randint(1, 6)
        a = rand_matrix(field, n, rng)
        lam = field(rng.randint(0, 2))
        dims = kernel_dim_powers(a, lam, n + 1)
        diffs = [dims[k] - dims[k - 1] for k in range(1, len(dims))]
        assert all(x >= y for x, y in zip(diffs, diffs[1:]))
        assert dims == sorted(dims)


@pytest.mark.parametrize("field", FIELDS, ids=field_id)
def test_charpoly_and_minpoly_properties(field):
    rng = random.Random(21)
    for _ in range(60):
        n = rng.randint(1, 6)
        a = rand_matrix(field, n, rng)
        chi, mu = charpoly(a), minpoly(a)
        assert chi.is_monic() and chi.degree == n
        assert poly_at_matrix(chi, a).is_zero()
        assert poly_at_matrix(mu, a).is_zero()
        assert (chi % mu).is_zero()
        s = rand_invertible(field, n, rng)
        assert charpoly(s @ a @ s.inverse()) == chi


def test_charpoly_matches_sympy():
    sympy = pytest.importorskip("sympy")
    X = sympy.Symbol("X")
    rng = random.Random(4)
    for _ in range(30):
        n = rng.randint(1, 6)
        rows = [[rng.randint(-5, 5) for _ in range(n)] for _ in range(n)]
        ref = sympy.Matrix(rows).charpoly(X).all_coeffs()[::-1]
        assert charpoly(mat(QQ, rows)) == Poly(QQ, [int(c) for c in ref])


def test_det_over_f5():
    a = mat(F5, [[1, 2], [3, 4]])
    assert a.det() == F5(-2)
