import random

import pytest

from conftest import FIELDS, field_id, mat, rand_invertible, rand_matrix
from idemdecomp.canonical import (
    companion_merge,
    companion_split,
    cyclicfit,
    fit_block,
    frobenius_form,
    good_cyclic_normalize,
    invariant_factors,
    is_good_cyclic,
    primary_form,
    roth_solve,
)
from idemdecomp.errors import NotCoprimeError, PreconditionError
from idemdecomp.fields import QQ, PrimeField
from idemdecomp.matrix import Matrix, block_diag, charpoly, companion, minpoly, verify_similarity
from idemdecomp.poly import Poly, trace_of_poly

F3, F5, F7 = PrimeField(3), PrimeField(5), PrimeField(7)
x = Poly.x(QQ)


def C(p):
    return companion(p)


def rand_good_cyclic(field, n, rng):
    g = rand_matrix(field, n, rng)
    rows = g.tolist()
    for i in range(n):
        for j in range(i):
            rows[i][j] = field.one if j == i - 1 else field.zero
    return Matrix(field, rows)


# -- invariant factors / Frobenius ------------------------------------------------

def test_invariant_factor_examples():
    assert list(invariant_factors(Matrix.identity(QQ, 2))) == [x - 1, x - 1]
    assert list(invariant_factors(C(x ** 3 - 2))) == [x ** 3 - 2]
    assert list(invariant_factors(block_diag([C(x ** 2), C(x)]))) == [x, x ** 2]


def test_frobenius_examples():
    p = x ** 3 - 2 * x + 5
    form = frobenius_form(C(p))
    assert form.factors == (p,)
    assert form.matrix(QQ) == C(p)
    # nilpotent of Jordan type (2, 1)
    n = mat(QQ, [[0, 1, 0], [0, 0, 0], [0, 0, 0]])
    s = mat(QQ, [[1, 2, 0], [0, 1, 1], [1, 0, 1]])
    form = frobenius_form(s @ n @ s.inverse())
    assert [b.shape for b in form.blocks] == [(1, 1), (2, 2)]
    assert form.factors == (x, x ** 2)


def test_primary_examples():
    assert set(primary_form(C((x - 1) * (x - 2))).blocks) == {(x - 1, 1), (x - 2, 1)}
    assert primary_form(C(x ** 2 + 1)).blocks == ((x ** 2 + 1, 1),)
    assert set(primary_form(C((x ** 2 + 1) * x)).blocks) == {(x ** 2 + 1, 1), (x, 1)}


@pytest.mark.parametrize("field", FIELDS, ids=field_id)
def test_canonical_forms_on_random_matrices(field):
    rng = random.Random(31)
    for _ in range(25):
        n = rng.randint(1, 6)
        a = rand_matrix(field, n, rng)
        if rng.random() < 0.5:
            # force repeated structure
            b = block_diag([rand_matrix(field, 2, rng)] * 2)
            s = rand_invertible(field, 4, rng)
            a = s @ b @ s.inverse()
        frob = frobenius_form(a)
        assert verify_similarity(a, frob.matrix(field), frob.cert)
        facs = list(frob.factors)
        assert all((g % f).is_zero() for f, g in zip(facs, facs[1:]))
        assert invariant_factors(a).product(field) == charpoly(a)
        assert facs[-1] == minpoly(a)
        prim = primary_form(a)
        assert verify_similarity(a, prim.matrix(field), prim.cert)


# -- companion merge / split ------------------------------------------------------

@pytest.mark.parametrize("p, q", [(x, x - 1), (x - 1, x - 2), (x ** 2, x - 1)])
def test_companion_merge_split(p, q):
    merge = companion_merge(p, q)
    assert verify_similarity(block_diag([C(p), C(q)]), C(p * q), merge)
    split = companion_split(p, q)
    assert verify_similarity(C(p * q), block_diag([C(p), C(q)]), split)


def test_companion_merge_rejects_common_factor():
    with pytest.raises(NotCoprimeError):
        companion_merge(x * (x - 1), x - 1)


# -- good cyclic --------------------------------------------------------------------

def test_good_cyclic_normalize_examples():
    c = C(x ** 3 - x + 4)
    t, cert = good_cyclic_normalize(c)
    assert t == Matrix.identity(QQ, 3)
    a, b, d = QQ(2), QQ(-3), QQ(5)
    g = mat(QQ, [[a, b], [1, d]])
    t, cert = good_cyclic_normalize(g)
    out = t @ g @ t.inverse()
    assert out[0, 0] == 0 and out[1, 0] == 1 and out[1, 1] == a + d
    with pytest.raises(PreconditionError):
        good_cyclic_normalize(mat(QQ, [[1, 0], [0, 1]]))


@pytest.mark.parametrize("field", [QQ, F5], ids=field_id)
def test_good_cyclic_normalize_random(field):
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randint(1, 5)
        g = rand_good_cyclic(field, n, rng)
        assert is_good_cyclic(g)
        t, cert = good_cyclic_normalize(g)
        assert all(t[i, i] == 1 for i in range(n))
        assert all(t[i, j] == 0 for i in range(n) for j in range(i))
        assert verify_similarity(g, C(charpoly(g)), cert)


# -- Roth -------------------------------------------------------------------------

def test_roth_examples():
    assert roth_solve(mat(QQ, [[1]]), mat(QQ, [[0]]), mat(QQ, [[5]])) == mat(QQ, [[5]])
    c = mat(QQ, [[3], [-7]])
    assert roth_solve(Matrix.scalar(QQ, 2, 2), mat(QQ, [[1]]), c) == c
    a, b = C(x ** 2 - 2), C(x + 1)
    c = mat(QQ, [[4], [-1]])
    m = roth_solve(a, b, c)
    assert a @ m - m @ b == c


def test_roth_reports_common_factor():
    with pytest.raises(NotCoprimeError) as info:
        roth_solve(C(x ** 2 - 1), C(x - 1), mat(QQ, [[1], [0]]))
    assert info.value.common == x - 1


# -- polynomial fitting -------------------------------------------------------------

def test_cyclicfit_examples():
    zero = mat(QQ, [[0]])
    d, cert = cyclicfit(zero, zero, x ** 2 - 1)
    assert d == mat(QQ, [[1]])
    assert fit_block(zero, zero, d) == mat(QQ, [[0, 1], [1, 0]])
    d, _ = cyclicfit(zero, zero, x ** 2)
    assert d == mat(QQ, [[0]])


def test_cyclicfit_trace_condition():
    zero = mat(QQ, [[0]])
    with pytest.raises(PreconditionError):
        cyclicfit(zero, zero, x ** 2 - x)


def test_cyclicfit_random_f7():
    rng = random.Random(77)
    for _ in range(20):
        a, b = rand_good_cyclic(F7, 3, rng), rand_good_cyclic(F7, 2, rng)
        tail = [F7(rng.randrange(7)) for _ in range(4)]
        # leading coefficient below X^5 fixes the trace
        target = Poly(F7, tail + [-(a.trace() + b.trace()), 1])
        assert trace_of_poly(target) == a.trace() + b.trace()
        d, cert = cyclicfit(a, b, target)
        block = fit_block(a, b, d)
        assert charpoly(block) == target
        assert verify_similarity(block, C(target), cert)
