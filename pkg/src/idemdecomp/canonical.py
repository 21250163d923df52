"""Canonical forms with explicit similarity certificates.

Every routine here returns a :class:`~idemdecomp.matrix.SimilarityCert` and
checks it before returning; a failed check raises
:class:`~idemdecomp.errors.VerificationError` rather than handing back a wrong
answer.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotCoprimeError, PreconditionError, ShapeError, VerificationError
from .factor import factor
from .matrix import (
    Matrix,
    SimilarityCert,
    apply_poly_to_vector,
    block_diag,
    block_matrix,
    cert_block_diag,
    charpoly,
    companion,
    h_matrix,
    krylov,
    matvec,
    permutation_cert,
    vector_minpoly,
)
from .poly import Poly, poly_gcd, poly_lcm, trace_of_poly


@dataclass(frozen=True)
class InvariantFactors:
    """Monic divisibility chain ``d_1 | d_2 | ... | d_k`` (ascending)."""

    factors: tuple

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def product(self, field):
        out = Poly.one(field)
        for f in self.factors:
            out = out * f
        return out


@dataclass(frozen=True)
class FrobeniusForm:
    factors: tuple
    cert: SimilarityCert

    @property
    def blocks(self):
        return [companion(f) for f in self.factors]

    def matrix(self, field):
        return block_diag(self.blocks, field)


@dataclass(frozen=True)
class PrimaryForm:
    """Blocks ``C(f^k)`` for the elementary divisors ``(f, k)``, plus certificate."""

    blocks: tuple
    cert: SimilarityCert

    def polys(self):
        return [f ** k for f, k in self.blocks]

    def matrix(self, field):
        return block_diag([companion(f ** k) for f, k in self.blocks], field)

    def sizes(self):
        return [f.degree * k for f, k in self.blocks]


def _check(cert, a, b, what):
    if not (cert.s @ a == b @ cert.s and cert.is_valid()):
        raise VerificationError(f"{what}: certificate does not verify", {"a": a, "b": b})
    return cert


def _unit_vector(field, n, i):
    v = [field.zero] * n
    v[i] = field.one
    return v


def full_minpoly_vector(a: Matrix):
    """A vector whose local minimal polynomial is the minimal polynomial of ``a``."""
    field = a.field
    n = a.rows
    local = [vector_minpoly(a, _unit_vector(field, n, i)) for i in range(n)]
    mu = Poly.one(field)
    for m in local:
        mu = poly_lcm(mu, m)
    for i, m in enumerate(local):
        if m == mu:
            return _unit_vector(field, n, i), mu
    v = [field.zero] * n
    for f, e in factor(mu):
        fe = f ** e
        i = next(i for i, m in enumerate(local) if fe.divides(m))
        part = apply_poly_to_vector(local[i] // fe, a, _unit_vector(field, n, i))
        v = [x + y for x, y in zip(v, part)]
    return v, mu


def frobenius_form(a: Matrix) -> FrobeniusForm:
    """Rational canonical form by splitting off maximal cyclic subspaces.

    At each stage a vector with the full minimal polynomial spans a cyclic
    subspace ``W``; a linear functional dual to the top Krylov vector cuts
    out an invariant complement, on which the procedure recurses.
    """
    a._need_square("frobenius_form")
    field = a.field
    n = a.rows
    cur = a
    embed = Matrix.identity(field, n)  # columns: current coordinates in the original space
    found = []
    while cur.rows > 0:
        m = cur.rows
        v, mu = full_minpoly_vector(cur)
        d = mu.degree
        chain = krylov(cur, v, d)
        found.append((mu, [matvec(embed, w) for w in chain]))
        if d == m:
            break
        extended = Matrix.from_columns(field, chain + [_unit_vector(field, m, j) for j in range(m)])
        _, pivots = extended.rref()
        basis = Matrix.from_columns(field, [extended.col(j) for j in pivots])
        functional = basis.inverse().row(d - 1)
        duals = [functional]
        for _ in range(d - 1):
            duals.append(matvec(cur.T, duals[-1]))
        comp = Matrix(field, duals).nullspace()
        umat = Matrix.from_columns(field, comp)
        cur = umat.solve(cur @ umat)
        embed = embed @ umat
    found.reverse()
    factors = tuple(mu for mu, _ in found)
    columns = [c for _, cols in found for c in cols]
    cert = SimilarityCert.from_basis(Matrix.from_columns(field, columns, n))
    _check(cert, a, block_diag([companion(f) for f in factors], field), "frobenius_form")
    return FrobeniusForm(factors, cert)


def invariant_factors(a: Matrix) -> InvariantFactors:
    return InvariantFactors(frobenius_form(a).factors)


def _split_cert(d: Poly, parts):
    """Certificate taking ``C(d)`` to ``D(C(q) for q in parts)``; parts pairwise coprime."""
    field = d.field
    c = companion(d)
    n = d.degree
    columns = []
    for q in parts:
        v = apply_poly_to_vector(d // q, c, _unit_vector(field, n, 0))
        columns.extend(krylov(c, v, q.degree))
    return SimilarityCert.from_basis(Matrix.from_columns(field, columns, n))


def _merge_cert(parts):
    """Certificate taking ``D(C(q) for q in parts)`` to ``C(prod parts)``."""
    field = parts[0].field
    blocks = block_diag([companion(q) for q in parts], field)
    n = blocks.rows
    v = [field.zero] * n
    offset = 0
    for q in parts:
        if q.degree > 0:
            v[offset] = field.one
        offset += q.degree
    return SimilarityCert.from_basis(Matrix.from_columns(field, krylov(blocks, v, n), n))


def _require_coprime(parts):
    for i in range(len(parts)):
        if not parts[i].is_monic():
            raise PreconditionError("companion blocks need monic polynomials")
        for j in range(i + 1, len(parts)):
            g = poly_gcd(parts[i], parts[j])
            if g.degree > 0:
                raise NotCoprimeError(f"{parts[i]} and {parts[j]} share the factor {g}", g)


def merge_companions(parts) -> SimilarityCert:
    """``s @ D(C(q_1), ..., C(q_k)) @ s_inv == C(q_1 ... q_k)`` for pairwise coprime ``q_i``."""
    parts = list(parts)
    _require_coprime(parts)
    field = parts[0].field
    prod = Poly.one(field)
    for q in parts:
        prod = prod * q
    cert = _merge_cert(parts)
    src = block_diag([companion(q) for q in parts], field)
    return _check(cert, src, companion(prod), "companion_merge")


def split_companion(parts) -> SimilarityCert:
    """Inverse direction of :func:`merge_companions`."""
    parts = list(parts)
    _require_coprime(parts)
    field = parts[0].field
    prod = Poly.one(field)
    for q in parts:
        prod = prod * q
    cert = _split_cert(prod, parts)
    return _check(cert, companion(prod), block_diag([companion(q) for q in parts], field),
                  "companion_split")


def companion_merge(p: Poly, q: Poly) -> SimilarityCert:
    return merge_companions([p, q])


def companion_split(p: Poly, q: Poly) -> SimilarityCert:
    return split_companion([p, q])


def primary_form(a: Matrix, seed: int = 0) -> PrimaryForm:
    """Primary canonical form: each invariant factor split into prime powers."""
    field = a.field
    frob = frobenius_form(a)
    blocks = []
    splits = []
    for d in frob.factors:
        parts = [(f, k) for f, k in factor(d, seed)]
        blocks.extend(parts)
        splits.append(_split_cert(d, [f ** k for f, k in parts]))
    cert = frob.cert.then(cert_block_diag(splits, field)) if splits else frob.cert
    # canonical block order
    offsets = []
    pos = 0
    for f, k in blocks:
        offsets.append(pos)
        pos += f.degree * k
    order = sorted(range(len(blocks)), key=lambda i: (blocks[i][0].sort_key(), blocks[i][1]))
    perm = [offsets[i] + t for i in order for t in range(blocks[i][0].degree * blocks[i][1])]
    cert = cert.then(permutation_cert(field, perm))
    blocks = tuple(blocks[i] for i in order)
    target = block_diag([companion(f ** k) for f, k in blocks], field)
    _check(cert, a, target, "primary_form")
    return PrimaryForm(blocks, cert)


# ---------------------------------------------------------------------------
# good cyclic matrices

def is_good_cyclic(m: Matrix) -> bool:
    """Unit subdiagonal and zeros strictly below it."""
    if not m.is_square():
        return False
    for i in range(1, m.rows):
        for j in range(i):
            if j == i - 1:
                if m[i, j] != 1:
                    return False
            elif m[i, j] != 0:
                return False
    return True


def good_cyclic_normalize(g: Matrix):
    """Unit upper triangular ``t`` with ``t @ g @ t^-1 == C(charpoly(g))``."""
    if not is_good_cyclic(g):
        raise PreconditionError("matrix is not good cyclic")
    field = g.field
    n = g.rows
    basis = Matrix.from_columns(field, krylov(g, _unit_vector(field, n, 0), n), n)
    cert = SimilarityCert.from_basis(basis)
    # last Krylov vector gives the companion column directly
    target = companion(charpoly(g)) if n else g
    _check(cert, g, target, "good_cyclic_normalize")
    return cert.s, cert


# ---------------------------------------------------------------------------
# Sylvester equation and the polynomial-fitting construction

def roth_solve(a: Matrix, b: Matrix, c: Matrix) -> Matrix:
    """Solve ``a @ m - m @ b == c`` when the characteristic polynomials are coprime."""
    n, p = a.rows, b.rows
    if not a.is_square() or not b.is_square() or c.shape != (n, p):
        raise ShapeError("roth_solve needs square a (n x n), b (p x p) and c (n x p)")
    g = poly_gcd(charpoly(a), charpoly(b))
    if g.degree > 0:
        raise NotCoprimeError(
            f"characteristic polynomials share the factor {g}; X -> aX - Xb is singular", g
        )
    field = a.field
    size = n * p
    system = [[field.zero] * size for _ in range(size)]
    for i in range(n):
        for j in range(p):
            row = system[i * p + j]
            for k in range(n):
                if a[i, k] != 0:
                    row[k * p + j] = row[k * p + j] + a[i, k]
            for k in range(p):
                if b[k, j] != 0:
                    row[i * p + k] = row[i * p + k] - b[k, j]
    rhs = Matrix._raw(field, [[c[i, j]] for i in range(n) for j in range(p)], size, 1)
    x = Matrix._raw(field, system, size, size).solve(rhs)
    m = Matrix._raw(field, [[x[i * p + j, 0] for j in range(p)] for i in range(n)], n, p)
    if a @ m - m @ b != c:
        raise VerificationError("roth_solve residual is nonzero", {"a": a, "b": b, "c": c})
    return m


def _tail_polys(r: Poly):
    """``R_j = X^j - sum_{k<j} b_{k+p-j} X^k`` for ``j = 0..p-1`` where ``r = X^p - sum b_k X^k``."""
    field = r.field
    p = r.degree
    b = [-r.coeff(k) for k in range(p)]
    out = []
    for j in range(p):
        out.append(Poly(field, [-b[k + p - j] for k in range(j)] + [field.one]))
    return out


def fit_block(a: Matrix, b: Matrix, d: Matrix) -> Matrix:
    """The block matrix ``[[a, d], [H, b]]`` with ``H`` the ``p x n`` corner unit."""
    field = a.field
    return block_matrix([[a, d], [h_matrix(field, b.rows, a.rows), b]])


def cyclicfit(a: Matrix, b: Matrix, target: Poly):
    """Choose ``d`` so that ``[[a, d], [H, b]]`` is similar to ``C(target)``.

    ``a`` and ``b`` must be good cyclic and ``tr target == tr a + tr b``.
    Returns ``(d, cert)`` with ``cert`` conjugating the block matrix to the
    companion of ``target``.
    """
    if not (is_good_cyclic(a) and is_good_cyclic(b)) or a.rows < 1 or b.rows < 1:
        raise PreconditionError("cyclicfit needs two non-empty good cyclic matrices")
    n, p = a.rows, b.rows
    field = a.field
    if not target.is_monic() or target.degree != n + p:
        raise PreconditionError(f"target must be monic of degree {n + p}")
    if trace_of_poly(target) != a.trace() + b.trace():
        raise PreconditionError("trace condition violated: tr target != tr a + tr b")
    t_a, _ = good_cyclic_normalize(a)
    t_b, _ = good_cyclic_normalize(b)
    q, r = charpoly(a), charpoly(b)
    tails = _tail_polys(r)
    # expand QR - P in the triangular basis (R_0, ..., R_{p-1}, X R_{p-1}, ..., X^{n-1} R_{p-1})
    rest = q * r - target
    d0 = [[field.zero] * p for _ in range(n)]
    x = Poly.x(field)
    for deg in range(n + p - 2, -1, -1):
        c = rest.coeff(deg)
        if c == 0:
            continue
        if deg >= p - 1:
            k = deg - p + 1
            rest = rest - (x ** k) * tails[p - 1] * c
            d0[k][0] = c
        else:
            rest = rest - tails[deg] * c
            d0[0][p - deg - 1] = c
    if not rest.is_zero():
        raise VerificationError("cyclicfit back-substitution left a remainder")
    d = t_a.inverse() @ Matrix._raw(field, d0, n, p) @ t_b
    block = fit_block(a, b, d)
    _, cert = good_cyclic_normalize(block)
    if charpoly(block) != target:
        raise VerificationError("cyclicfit produced the wrong characteristic polynomial")
    return d, cert
