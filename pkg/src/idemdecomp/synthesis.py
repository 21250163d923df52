"""Writing matrices as linear combinations of idempotents.

The main entry point is :func:`decompose3`, which writes any square matrix as
``c1*P1 + c2*P2 + c3*P3`` with every ``Pi`` idempotent.  Around it sit the
closed-form two-idempotent constructions it relies on (nilpotent matrices,
2x2 matrices, companions of ``(X-a)^i (X-b)^j``) and the reduction steps
that bring a general matrix to a shape those constructions handle.

Every similarity used along the way is an explicit certificate, and each
stage checks its own output; a failed check raises
:class:`~idemdecomp.errors.VerificationError`.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .canonical import (
    cyclicfit,
    frobenius_form,
    good_cyclic_normalize,
    merge_companions,
    primary_form,
    roth_solve,
    split_companion,
)
from .composites import evenout_check, is_lc2_composite, jordan_profile
from .errors import PreconditionError, ShapeError, VerificationError
from .factor import first_irreducible
from .fields import FieldSpec, QQ, field_of
from .matrix import (
    Matrix,
    SimilarityCert,
    block_diag,
    block_matrix,
    cert_block_diag,
    companion,
    h_matrix,
    minpoly,
    permutation_cert,
    verify_similarity,
)
from .poly import Poly, trace_of_poly


# ---------------------------------------------------------------------------
# result types

@dataclass
class Decomposition:
    terms: list  # (coeff, idempotent) pairs
    target: Matrix
    verified: bool = False

    def total(self) -> Matrix:
        out = Matrix.zeros(self.target.field, self.target.rows)
        for c, p in self.terms:
            out = out + p.scale(c)
        return out

    def __len__(self):
        return len(self.terms)


@dataclass(frozen=True)
class RearrangedForm:
    alpha: object
    beta: object
    p: int
    q: int
    p_polys: tuple
    q_polys: tuple
    cert: SimilarityCert

    @property
    def field(self):
        return self.cert.s.field

    def b_matrix(self) -> Matrix:
        return block_diag([companion(f) for f in self.p_polys + self.q_polys], self.field)

    def matrix(self) -> Matrix:
        f = self.field
        return block_diag(
            [Matrix.scalar(f, self.p, self.alpha), Matrix.scalar(f, self.q, self.beta), self.b_matrix()],
            f,
        )

    def check(self):
        """Raise unless the structural invariants hold."""
        from .poly import poly_gcd

        ps, qs = self.p_polys, self.q_polys
        if self.alpha == self.beta:
            raise VerificationError("rearranged form needs alpha != beta")
        if not ps or not qs:
            raise VerificationError("rearranged form needs r >= 1 and s >= 1")
        if any(f.degree < 2 for f in ps[1:]) or any(f.degree < 2 for f in qs[:-1]):
            raise VerificationError("only P_1 and Q_s may have degree one")
        if ps[0].degree == 1 and qs[-1].degree == 1:
            raise VerificationError("P_1 and Q_s both have degree one")
        for f in ps:
            for g in qs:
                if poly_gcd(f, g).degree > 0:
                    raise VerificationError(f"{f} and {g} are not coprime")


@dataclass(frozen=True)
class KeyLemmaResult:
    delta: object
    lambda_used: object
    idem_q: Matrix
    cert: SimilarityCert
    b: Matrix
    target: Poly

    def check(self):
        q = self.idem_q
        if q @ q != q:
            raise VerificationError("key lemma idempotent is not idempotent")
        if q.trace() != self.lambda_used:
            raise VerificationError("key lemma idempotent has the wrong trace")
        if not verify_similarity(self.b - q.scale(self.delta), companion(self.target), self.cert):
            raise VerificationError("key lemma certificate does not verify")


@dataclass(frozen=True)
class TwoIdemPlan:
    """Recipe for writing ``D(alpha*I_r, beta*I_s, C(target))`` as ``c1*P + c2*Q``.

    ``kind`` is ``"nilpotent"`` (``target = X^m`` or ``X^m (X - c)``, coefficients
    ``(c, -c)``) or ``"family"`` (``target = (X-alpha)^a (X-beta)^b`` times an
    optional ``X - alpha - beta``, coefficients ``(alpha, beta)``).
    """

    alpha: object
    beta: object
    r: int
    s: int
    target: Poly
    kind: str
    coeffs: tuple
    shape: tuple  # nilpotent: (m,); family: (a, b)
    extra: bool  # extra linear factor split off the core


# ---------------------------------------------------------------------------
# small helpers

def _field_of_scalars(*xs, field=None) -> FieldSpec:
    if field is not None:
        return field
    for x in xs:
        if not isinstance(x, int) or isinstance(x, bool):
            return field_of(x)
    return QQ


def _upper_jordan(field, k) -> Matrix:
    m = Matrix.zeros(field, k)
    for i in range(k - 1):
        m._a[i][i + 1] = field.one
    return m


def jordan_block_pair(field, k: int):
    """Idempotents ``(E, F)`` with ``E - F`` the upper nilpotent Jordan block of size ``k``."""
    e = Matrix.zeros(field, k)
    f = Matrix.zeros(field, k)
    for i in range(0, k, 2):  # 0-based even index = odd position
        e._a[i][i] = field.one
        f._a[i][i] = field.one
        if i + 1 < k:
            e._a[i][i + 1] = field.one
    for i in range(1, k - 1, 2):
        f._a[i][i + 1] = -field.one
    return e, f


def _check_idempotent(m: Matrix, what):
    if m @ m != m:
        raise VerificationError(f"{what} is not idempotent", {"matrix": m})


def _scalar_pair(lam, c1, c2):
    """``(x, y)`` in ``{0, 1}^2`` with ``x*c1 + y*c2 == lam``."""
    for x, y in ((0, 0), (1, 0), (0, 1), (1, 1)):
        if x * c1 + y * c2 == lam:
            return x, y
    raise VerificationError(f"scalar {lam} is not a 0/1 combination of {c1} and {c2}")


def _is_nilpotent(a: Matrix) -> bool:
    return (a ** a.rows).is_zero() if a.rows else True


# ---------------------------------------------------------------------------
# two-idempotent constructions

def nilpotent_diff(n: Matrix, alpha=1):
    """Idempotents ``(P, Q)`` with ``alpha*P - alpha*Q == n`` for nilpotent ``n``."""
    n._need_square("nilpotent_diff")
    field = n.field
    alpha = field(alpha)
    if alpha == 0:
        raise PreconditionError("alpha must be nonzero")
    if not _is_nilpotent(n):
        raise PreconditionError("nilpotent_diff needs a nilpotent matrix")
    size = n.rows
    if n.is_zero():
        z = Matrix.zeros(field, size)
        return z, z
    scaled = n.scale(1 / alpha)
    form = primary_form(scaled)
    es, fs = [], []
    for f, k in form.blocks:
        if k == 1:
            es.append(Matrix.zeros(field, 1))
            fs.append(Matrix.zeros(field, 1))
        else:
            # C(X^k) is the transposed Jordan block
            e, g = jordan_block_pair(field, k)
            es.append(e.T)
            fs.append(g.T)
    p = form.cert.pull(block_diag(es, field))
    q = form.cert.pull(block_diag(fs, field))
    _check_idempotent(p, "nilpotent_diff P")
    _check_idempotent(q, "nilpotent_diff Q")
    if (p - q).scale(alpha) != n:
        raise VerificationError("nilpotent_diff: alpha*(P - Q) != N")
    return p, q


def unipotent_sum_char2(u: Matrix):
    """Idempotents ``(P, Q)`` with ``P + Q == u`` for unipotent ``u`` in characteristic 2."""
    field = u.field
    if field.characteristic() != 2:
        raise PreconditionError("unipotent_sum_char2 needs characteristic 2")
    ident = Matrix.identity(field, u.rows)
    if not _is_nilpotent(u - ident):
        raise PreconditionError("matrix is not unipotent")
    e, f = nilpotent_diff(u - ident, 1)
    p, q = e, ident - f
    if p + q != u:
        raise VerificationError("unipotent_sum_char2: P + Q != U")
    return p, q


def two_by_two(a: Matrix, alpha, beta):
    """Idempotents ``(P, Q)`` with ``alpha*P + beta*Q == a`` for non-scalar 2x2 ``a``.

    Needs ``alpha + beta == tr a``.  In the companion basis of ``a`` the pair
    ``P = [[0, -d/alpha], [0, 1]]``, ``Q = (C - alpha*P)/beta`` always works.
    """
    if a.shape != (2, 2):
        raise ShapeError("two_by_two needs a 2x2 matrix")
    field = a.field
    alpha, beta = field(alpha), field(beta)
    if alpha == 0 or beta == 0:
        raise PreconditionError("coefficients must be nonzero")
    if a.is_scalar():
        raise PreconditionError("two_by_two needs a non-scalar matrix")
    if alpha + beta != a.trace():
        raise PreconditionError("alpha + beta must equal the trace")
    frob = frobenius_form(a)
    c = frob.matrix(field)
    d = c[0, 1]
    pc = Matrix(field, [[0, d / alpha], [0, 1]])
    qc = (c - pc.scale(alpha)).scale(1 / beta)
    p, q = frob.cert.pull(pc), frob.cert.pull(qc)
    _check_idempotent(p, "two_by_two P")
    _check_idempotent(q, "two_by_two Q")
    if p.scale(alpha) + q.scale(beta) != a:
        raise VerificationError("two_by_two: alpha*P + beta*Q != A")
    return p, q


def _family_candidates(field, a, b):
    """Default ``(Y, Z)`` then a finite perturbation schedule on ``Z``."""
    k = min(a, b)
    j = _upper_jordan(field, k)
    tall = block_matrix([[Matrix.identity(field, k)], [Matrix.zeros(field, 1, k)]])  # [I_k; 0]
    wide = block_matrix([[j, Matrix.unit(field, k, 1, k - 1, 0)]])  # [J_k | e_k]
    if a == b:
        y, z = j, Matrix.identity(field, a)
    elif a == b + 1:
        y, z = wide, tall  # Y Z = J_b
    else:
        y, z = tall, wide  # Z Y = J_a
    yield y, z
    # schedule: add a single unit entry to Z, scanning positions row-major
    for i in range(z.rows):
        for k in range(z.cols):
            yield y, z.replace(i, k, z[i, k] + field.one)


def companion_family(n_alpha: int, n_beta: int, alpha, beta, field: FieldSpec | None = None):
    """Idempotents ``(P, Q)`` and a certificate ``cert`` with
    ``cert.apply(alpha*P + beta*Q) == C((X-alpha)^n_alpha (X-beta)^n_beta)``.

    Needs ``|n_alpha - n_beta| <= 1`` and distinct nonzero ``alpha``, ``beta``.
    """
    field = _field_of_scalars(alpha, beta, field=field)
    alpha, beta = field(alpha), field(beta)
    if alpha == 0 or beta == 0 or alpha == beta:
        raise PreconditionError("companion_family needs distinct nonzero alpha and beta")
    a, b = n_alpha, n_beta
    if a < 0 or b < 0 or abs(a - b) > 1:
        raise PreconditionError(f"invalid shape pair ({a}, {b})")
    target = Poly.linear(field, alpha) ** a * Poly.linear(field, beta) ** b
    n = a + b
    ia, ib = Matrix.identity(field, a), Matrix.identity(field, b)
    if n == 0:
        return ia, ia, SimilarityCert.identity(field, 0)
    if a == 0 or b == 0:
        # a single 1x1 block
        p, q = (ia, Matrix.zeros(field, 1)) if b == 0 else (Matrix.zeros(field, 1), ib)
        return p, q, SimilarityCert.identity(field, 1)
    for y, z in _family_candidates(field, a, b):
        p = block_matrix([[ia, z], [Matrix.zeros(field, b, a), Matrix.zeros(field, b)]])
        q = block_matrix([[Matrix.zeros(field, a), Matrix.zeros(field, a, b)], [y, ib]])
        total = p.scale(alpha) + q.scale(beta)
        if minpoly(total) != target:
            continue
        frob = frobenius_form(total)
        if frob.factors != (target,):
            raise VerificationError("companion_family: unexpected Frobenius form")
        _check_idempotent(p, "companion_family P")
        _check_idempotent(q, "companion_family Q")
        return p, q, frob.cert
    raise VerificationError(f"companion_family: perturbation schedule exhausted for ({a}, {b})")


# ---------------------------------------------------------------------------
# generalized Jordan blocks and the prime-power case

def generalized_jordan(f: Poly, k: int) -> Matrix:
    """``k`` copies of ``C(f)`` chained by ``H`` blocks on the block subdiagonal."""
    field = f.field
    p = f.degree
    c = companion(f)
    grid = [[Matrix.zeros(field, p) for _ in range(k)] for _ in range(k)]
    for i in range(k):
        grid[i][i] = c
        if i:
            grid[i][i - 1] = h_matrix(field, p, p)
    return block_matrix(grid)


def _to_generalized_jordan(a: Matrix, seed=0):
    """Certificate taking ``a`` to ``D(M_k1, ..., M_kN)`` plus the block list."""
    field = a.field
    form = primary_form(a, seed)
    back = []
    for f, k in form.blocks:
        _, c = good_cyclic_normalize(generalized_jordan(f, k))
        back.append(c.inverse())
    cert = form.cert.then(cert_block_diag(back, field))
    return form.blocks, cert


def _minus_identity_split(x: Matrix, seed=0):
    """``(E, F)`` with ``E - F == x`` when ``x`` is nilpotent plus ``-I`` on a complement."""
    field = x.field
    form = primary_form(x, seed)
    es, fs = [], []
    minus_one = Poly.linear(field, -field.one)
    for f, k in form.blocks:
        if f == Poly.x(field):
            if k == 1:
                es.append(Matrix.zeros(field, 1))
                fs.append(Matrix.zeros(field, 1))
            else:
                e, g = jordan_block_pair(field, k)
                es.append(e.T)
                fs.append(g.T)
        elif f == minus_one and k == 1:
            es.append(Matrix.zeros(field, 1))
            fs.append(Matrix.identity(field, 1))
        else:
            raise VerificationError(f"unexpected elementary divisor {f}^{k}")
    return form.cert.pull(block_diag(es, field)), form.cert.pull(block_diag(fs, field))


def decompose_primary_power(a: Matrix, seed: int = 0) -> Decomposition:
    """Three-term decomposition when the minimal polynomial is a power of one irreducible."""
    a._need_square("decompose_primary_power")
    field = a.field
    n = a.rows
    blocks, cert = _to_generalized_jordan(a, seed)
    if len({f for f, _ in blocks}) != 1:
        raise PreconditionError("minimal polynomial is not a power of an irreducible")
    f = blocks[0][0]
    p = f.degree
    ident = Matrix.identity(field, n)
    if p == 1:
        lam = -f.coeffs[0]
        nil = a - ident.scale(lam)
        terms = [(lam, ident)] if lam != 0 else []
        if not nil.is_zero():
            e, g = nilpotent_diff(nil, 1)
            terms += [(field.one, e), (-field.one, g)]
        return _finish(Decomposition(terms, a))
    tr = trace_of_poly(f)
    col = [-c for c in f.coeffs[:p]]  # a_0 .. a_{p-1}
    g = Matrix.zeros(field, p)
    if tr != 0:
        for i in range(p - 1):
            g._a[i][p - 1] = col[i] / tr
        g._a[p - 1][p - 1] = field.one
        b_blocks = [block_diag([g] * k, field) for _, k in blocks]
    else:
        for i in range(p - 1):
            g._a[i][p - 1] = col[i]
        g._a[p - 1][p - 1] = field.one
        b_blocks = []
        for _, k in blocks:
            grid = [[Matrix.zeros(field, p) for _ in range(k)] for _ in range(k)]
            for i in range(k):
                grid[i][i] = g
                if i:
                    grid[i][i - 1] = h_matrix(field, p, p)
            b_blocks.append(block_matrix(grid))
    b = cert.pull(block_diag(b_blocks, field))
    _check_idempotent(b, "primary-power idempotent B")
    if tr != 0:
        rest = a - b.scale(tr)
        if not _is_nilpotent(rest):
            raise VerificationError("A - tr(f) B is not nilpotent")
        e, h = nilpotent_diff(rest, 1)
        terms = [(tr, b), (field.one, e), (-field.one, h)]
    else:
        e, h = _minus_identity_split(a - b, seed)
        terms = [(field.one, b), (field.one, e), (-field.one, h)]
    return _finish(Decomposition(terms, a))


# ---------------------------------------------------------------------------
# rearrangement

def _linear_root(f: Poly):
    return -f.coeffs[0]


def rearrange(a: Matrix, seed: int = 0) -> RearrangedForm:
    """Bring ``a`` to ``D(alpha I_p, beta I_q, C(P_1), .., C(P_r), C(Q_1), .., C(Q_s))``."""
    a._need_square("rearrange")
    field = a.field
    form = primary_form(a, seed)
    blocks = list(form.blocks)
    if len({f for f, _ in blocks}) < 2:
        raise PreconditionError("rearrange needs at least two distinct irreducible divisors")
    offsets, pos = [], 0
    for f, k in blocks:
        offsets.append(pos)
        pos += f.degree * k

    singles = defaultdict(list)  # eigenvalue -> indices of its 1x1 blocks
    higher = []
    for i, (f, k) in enumerate(blocks):
        if f.degree == 1 and k == 1:
            singles[_linear_root(f)].append(i)
        else:
            higher.append(i)
    eig = sorted(singles, key=lambda lam: (-len(singles[lam]), field.key(lam)))
    counts = [len(singles[lam]) for lam in eig] + [0, 0, 0]
    n1, n2, n3 = counts[:3]
    if len(eig) <= 3 and not higher:
        raise PreconditionError("diagonalizable with at most three eigenvalues: use eigenprojectors")

    def root_of(i, lam):
        f, _ = blocks[i]
        return f.degree == 1 and _linear_root(f) == lam

    alpha = beta = None
    scal_a, scal_b = [], []  # block indices kept as scalars
    p_groups, q_groups = [], []  # each group: list of block indices (merged if > 1)

    if n1 == 0:
        first = blocks[higher[0]][0]
        p_groups = [[i] for i in higher if blocks[i][0] == first]
        q_groups = [[i] for i in higher if blocks[i][0] != first]
    else:
        a1 = eig[0]
        mine = [i for i in higher if root_of(i, a1)]
        others = [i for i in higher if not root_of(i, a1)]
        alpha = a1
        if n2 == 0:
            scal_a = singles[a1][:-1]
            p_groups = [[singles[a1][-1]]] + [[i] for i in mine]
            q_groups = [[i] for i in others]
        elif n3 == 0 and mine:
            a2 = eig[1]
            beta = a2
            scal_a = list(singles[a1])
            scal_b = singles[a2][:-1]
            p_groups = [[i] for i in mine]
            q_groups = [[i] for i in others] + [[singles[a2][-1]]]
        elif n3 == 0:
            beta = eig[1]
            scal_a = singles[a1][:-1]
            scal_b = list(singles[eig[1]])
            p_groups = [[singles[a1][-1]]]
            q_groups = [[i] for i in others]
        else:
            a2 = eig[1]
            beta = a2
            scal_a = singles[a1][:-1]
            merged = []
            for level in range(n3):
                merged.append([singles[lam][level] for lam in eig[1:] if len(singles[lam]) > level])
            scal_b = singles[a2][n3:]
            p_groups = [[singles[a1][-1]]] + [[i] for i in mine]
            q_groups = merged + [[i] for i in others]

    # free scalars: zero when allowed, else one
    if alpha is None and beta is None:
        alpha, beta = field.zero, field.one
    elif beta is None:
        beta = field.zero if alpha != 0 else field.one
    elif alpha is None:
        alpha = field.zero if beta != 0 else field.one

    order = []
    for i in scal_a + scal_b:
        order.append(offsets[i])
    group_polys = []
    for g in p_groups + q_groups:
        poly = Poly.one(field)
        for i in g:
            f, k = blocks[i]
            order.extend(range(offsets[i], offsets[i] + f.degree * k))
            poly = poly * f ** k
        group_polys.append(poly)
    perm = permutation_cert(field, order)
    merge_certs = [SimilarityCert.identity(field, len(scal_a) + len(scal_b))]
    for g, poly in zip(p_groups + q_groups, group_polys):
        if len(g) > 1:
            merge_certs.append(merge_companions([blocks[i][0] for i in g]))
        else:
            merge_certs.append(SimilarityCert.identity(field, poly.degree))
    cert = form.cert.then(perm).then(cert_block_diag(merge_certs, field))
    rf = RearrangedForm(alpha, beta, len(scal_a), len(scal_b),
                        tuple(group_polys[:len(p_groups)]), tuple(group_polys[len(p_groups):]), cert)
    rf.check()
    if not verify_similarity(a, rf.matrix(), cert):
        raise VerificationError("rearrange certificate does not verify")
    return rf


# ---------------------------------------------------------------------------
# key lemma

def key_lemma(p_polys, q_polys, target: Poly) -> KeyLemmaResult:
    """Idempotent ``Q`` and scalar ``delta`` with ``B - delta*Q ~ C(target)``.

    ``B = D(C(P_1), .., C(P_r), C(Q_1), .., C(Q_s))`` with the polynomials obeying
    the rearranged-form invariants, and ``tr target != tr B``.
    """
    p_polys, q_polys = list(p_polys), list(q_polys)
    if not p_polys or not q_polys:
        raise PreconditionError("key_lemma needs r >= 1 and s >= 1")
    field = target.field
    polys = p_polys + q_polys
    sizes = [f.degree for f in polys]
    r, s = len(p_polys), len(q_polys)
    big_n = sum(sizes[:r])
    t = sum(sizes)
    if target.degree != t or not target.is_monic():
        raise PreconditionError(f"target must be monic of degree {t}")
    if any(d < 2 for d in sizes[1:r]) or any(d < 2 for d in sizes[r:-1]):
        raise PreconditionError("only P_1 and Q_s may have degree one")
    if sizes[0] == 1 and sizes[-1] == 1:
        raise PreconditionError("P_1 and Q_s cannot both have degree one")
    b1 = block_diag([companion(f) for f in p_polys], field)
    b2 = block_diag([companion(f) for f in q_polys], field)
    b = block_diag([b1, b2], field)
    tr_b = b.trace()
    tr_p = trace_of_poly(target)
    if tr_b == tr_p:
        raise PreconditionError("trace condition violated: tr target == tr B")

    lam = field(r + s - 1)
    extra = None
    if lam == 0:
        lam = field(r + s)
        extra = 0 if sizes[0] > 1 else t - 1
    delta = (tr_b - tr_p) / lam

    offsets, pos = [], 0
    for d in sizes:
        offsets.append(pos)
        pos += d
    q = Matrix.zeros(field, t)
    for k, d in enumerate(sizes):
        o = offsets[k]
        if k < len(sizes) - 1:
            q._a[o + d - 1][o + d - 1] = field.one  # F_d
        if k:
            # -(1/delta) H: row 1 of block k, last column of block k-1
            q._a[o][o - 1] = -1 / delta
    if extra is not None:
        q._a[extra][extra] = q._a[extra][extra] + field.one
    _check_idempotent(q, "key lemma Q(delta)")
    if q.trace() != lam:
        raise VerificationError("key lemma Q(delta) has the wrong trace")

    bp = b - q.scale(delta)
    m_size = t - big_n
    b1p = bp.submatrix(0, big_n, 0, big_n)
    b2p = bp.submatrix(big_n, t, big_n, t)
    if not bp.submatrix(0, big_n, big_n, t).is_zero() or \
            bp.submatrix(big_n, t, 0, big_n) != h_matrix(field, m_size, big_n):
        raise VerificationError("key lemma: B - delta*Q(delta) has the wrong block shape")
    d, fit_cert = cyclicfit(b1p, b2p, target)
    m = roth_solve(b1, b2, -d)
    ident_n, ident_m = Matrix.identity(field, big_n), Matrix.identity(field, m_size)
    zero = Matrix.zeros(field, m_size, big_n)
    tt = block_matrix([[ident_n, m], [zero, ident_m]])
    tt_inv = block_matrix([[ident_n, -m], [zero, ident_m]])
    roth = SimilarityCert(tt, tt_inv)
    if roth.apply(b) != block_matrix([[b1, d], [Matrix.zeros(field, m_size, big_n), b2]]):
        raise VerificationError("key lemma: Roth conjugation failed")
    idem = roth.pull(q)
    cert = roth.then(fit_cert)
    result = KeyLemmaResult(delta, lam, idem, cert, b, target)
    result.check()
    return result


# ---------------------------------------------------------------------------
# target polynomial and the final two-idempotent synthesis

def choose_target_poly(alpha, beta, r: int, s: int, t: int, gamma, field: FieldSpec | None = None):
    """Monic ``target`` of degree ``t`` with ``tr target != gamma`` and a plan that
    writes ``D(alpha*I_r, beta*I_s, C(target))`` as a combination of two idempotents."""
    field = _field_of_scalars(alpha, beta, gamma, field=field)
    alpha, beta, gamma = field(alpha), field(beta), field(gamma)
    if alpha == beta:
        raise PreconditionError("choose_target_poly needs alpha != beta")
    if t < 1:
        raise PreconditionError("t must be at least 1")
    x = Poly.x(field)
    if alpha == 0 or beta == 0:
        c = alpha if beta == 0 else beta
        cands = [(x ** t, (t,), False), (x ** (t - 1) * (x - c), (t - 1,), True)]
        kind, coeffs = "nilpotent", (c, -c)
    else:
        la, lb, lab = x - alpha, x - beta, x - alpha - beta
        h = t // 2
        if t % 2 == 0:
            cands = [(la ** h * lb ** h, (h, h), False),
                     (la ** h * lb ** (h - 1) * lab, (h, h - 1), True)]
        else:
            cands = [(la ** (h + 1) * lb ** h, (h + 1, h), False),
                     (la ** h * lb ** h * lab, (h, h), True)]
        kind, coeffs = "family", (alpha, beta)
    for target, shape, extra in cands:
        if trace_of_poly(target) != gamma:
            return target, TwoIdemPlan(alpha, beta, r, s, target, kind, coeffs, shape, extra)
    raise VerificationError("both candidate polynomials have trace gamma")


def realize_plan(plan: TwoIdemPlan):
    """Idempotents ``(P, Q)`` with ``c1*P + c2*Q == D(alpha*I_r, beta*I_s, C(target))``."""
    field = plan.target.field
    c1, c2 = plan.coeffs
    parts = []  # (poly, P, Q) on C(poly)
    if plan.kind == "nilpotent":
        (m,) = plan.shape
        if m:
            e, f = nilpotent_diff(companion(Poly.x(field) ** m), c1)
            parts.append((Poly.x(field) ** m, e, f))
        if plan.extra:
            parts.append((Poly.linear(field, c1), Matrix.identity(field, 1), Matrix.zeros(field, 1)))
    else:
        ka, kb = plan.shape
        if ka + kb:
            p, q, cert = companion_family(ka, kb, plan.alpha, plan.beta, field)
            core = Poly.linear(field, plan.alpha) ** ka * Poly.linear(field, plan.beta) ** kb
            parts.append((core, cert.apply(p), cert.apply(q)))
        if plan.extra:
            one = Matrix.identity(field, 1)
            parts.append((Poly.linear(field, plan.alpha + plan.beta), one, one))
    if len(parts) == 1:
        pc, qc = parts[0][1], parts[0][2]
    else:
        split = split_companion([poly for poly, _, _ in parts])
        pc = split.pull(block_diag([pp for _, pp, _ in parts], field))
        qc = split.pull(block_diag([qq for _, _, qq in parts], field))
    xa, ya = _scalar_pair(plan.alpha, c1, c2)
    xb, yb = _scalar_pair(plan.beta, c1, c2)
    p = block_diag([Matrix.scalar(field, plan.r, xa), Matrix.scalar(field, plan.s, xb), pc], field)
    q = block_diag([Matrix.scalar(field, plan.r, ya), Matrix.scalar(field, plan.s, yb), qc], field)
    goal = block_diag([Matrix.scalar(field, plan.r, plan.alpha), Matrix.scalar(field, plan.s, plan.beta),
                       companion(plan.target)], field)
    _check_idempotent(p, "plan P")
    _check_idempotent(q, "plan Q")
    if p.scale(c1) + q.scale(c2) != goal:
        raise VerificationError("plan synthesis does not reproduce its target")
    return p, q


# ---------------------------------------------------------------------------
# the three-idempotent decomposition

def verify_decomposition(d: Decomposition) -> bool:
    """True iff every term is a nonzero coefficient times an idempotent and they sum to the target."""
    a = d.target
    if not a.is_square() or len(d.terms) > 3:
        return False
    total = Matrix.zeros(a.field, a.rows)
    for c, p in d.terms:
        if p.shape != a.shape or p.field != a.field:
            return False
        if a.field(c) == 0 or p @ p != p:
            return False
        total = total + p.scale(c)
    return total == a


def _finish(d: Decomposition) -> Decomposition:
    d.terms = [(d.target.field(c), p) for c, p in d.terms if not p.is_zero()]
    if not verify_decomposition(d):
        raise VerificationError("decomposition does not verify", {"decomposition": d})
    d.verified = True
    return d


def _eigen_decomposition(a: Matrix, form) -> Decomposition:
    field = a.field
    values = [_linear_root(f) for f, _ in form.blocks]
    terms = []
    for lam in sorted(set(values), key=field.key):
        if lam == 0:
            continue
        mask = Matrix.diag(field, [1 if v == lam else 0 for v in values])
        terms.append((lam, form.cert.pull(mask)))
    return _finish(Decomposition(terms, a))


def _two_by_two_decomposition(a: Matrix) -> Decomposition:
    field = a.field
    tr = a.trace()
    k = 1
    while True:
        alpha = field(k)
        if alpha != 0 and tr - alpha != 0:
            break
        k += 1
    p, q = two_by_two(a, alpha, tr - alpha)
    return _finish(Decomposition([(alpha, p), (tr - alpha, q)], a))


def decompose3(a: Matrix, seed: int = 0) -> Decomposition:
    """Write ``a`` as a combination of at most three idempotents (verified exactly)."""
    a._need_square("decompose3")
    field = a.field
    n = a.rows
    if a.is_zero():
        return _finish(Decomposition([], a))
    if a.is_scalar():
        return _finish(Decomposition([(a[0, 0], Matrix.identity(field, n))], a))
    form = primary_form(a, seed)
    linear_simple = all(f.degree == 1 and k == 1 for f, k in form.blocks)
    if linear_simple and len({f for f, _ in form.blocks}) <= 3:
        return _eigen_decomposition(a, form)
    if n == 2 and field.cardinality() > 2:
        return _two_by_two_decomposition(a)
    if len({f for f, _ in form.blocks}) == 1:
        return decompose_primary_power(a, seed)

    rf = rearrange(a, seed)
    b = rf.b_matrix()
    t = b.rows
    target, plan = choose_target_poly(rf.alpha, rf.beta, rf.p, rf.q, t, b.trace(), field)
    kl = key_lemma(rf.p_polys, rf.q_polys, target)
    pq = rf.p + rf.q
    q2 = block_diag([Matrix.zeros(field, pq), kl.idem_q], field)
    inner = cert_block_diag([SimilarityCert.identity(field, pq), kl.cert], field)
    p1, p2 = realize_plan(plan)
    c1, c2 = plan.coeffs
    terms = [
        (kl.delta, rf.cert.pull(q2)),
        (c1, rf.cert.pull(inner.pull(p1))),
        (c2, rf.cert.pull(inner.pull(p2))),
    ]
    return _finish(Decomposition(terms, a))


# ---------------------------------------------------------------------------
# term-count bounds and witnesses

def ell(n: int, field: FieldSpec) -> int:
    """Least ``l`` such that every ``n x n`` matrix is a combination of ``l`` idempotents."""
    if n < 1:
        raise PreconditionError("n must be positive")
    if n == 1:
        return 1
    if n == 2:
        return 2 if field.cardinality() > 2 else 3
    # every prime field and Q carry an irreducible cubic
    return 3


def quadruple_conditions(values):
    """Check the three distinctness conditions on four scalars.

    (i) ``a_i != +-a_j`` for distinct ``i, j``; (ii) ``a_i != a_j + a_k`` for all
    ``i, j, k``; (iii) ``a_i + a_j != a_k + a_l`` for distinct ``i, j, k, l``.
    """
    from itertools import permutations, product

    a = list(values)
    if len(a) != 4:
        raise PreconditionError("need exactly four scalars")
    idx = range(4)
    cond1 = all(a[i] != a[j] and a[i] != -a[j] for i in idx for j in idx if i != j)
    cond2 = all(a[i] != a[j] + a[k] for i, j, k in product(idx, repeat=3))
    cond3 = all(a[i] + a[j] != a[k] + a[l] for i, j, k, l in permutations(idx))
    return {"i": cond1, "ii": cond2, "iii": cond3}


def witness_no_lc2(n: int, field: FieldSpec) -> Matrix:
    """A matrix that is not a combination of two idempotents, checked before returning."""
    if n == 1 or (n == 2 and field.cardinality() > 2):
        raise PreconditionError(f"every {n}x{n} matrix over {field.label()} is a combination of two idempotents")
    if n < 1:
        raise PreconditionError("n must be positive")
    if n == 2:
        w = Matrix(field, [[0, 1], [1, 1]])
    elif not field.is_finite() and n >= 4:
        w = Matrix.diag(field, [1, 10, 100, 1000] + [0] * (n - 4))
        conds = quadruple_conditions([field(v) for v in (1, 10, 100, 1000)])
        if not all(conds.values()):
            raise VerificationError("diagonal quadruple fails its distinctness conditions")
        return w
    else:
        cubic = Poly(field, [-2, 0, 0, 1]) if not field.is_finite() else first_irreducible(field, 3)
        w = block_diag([Matrix.zeros(field, n - 3), companion(cubic)], field)
        if not field.is_finite():
            profile = jordan_profile(w)
            if profile.irrational_degree() % 2 == 0 or evenout_check(w, 1, 2, profile):
                raise VerificationError("cubic witness does not fail the parity test")
            return w
    profile = jordan_profile(w)
    for alpha in field.nonzero_elements():
        for beta in field.nonzero_elements():
            if is_lc2_composite(w, alpha, beta, profile)[0]:
                raise VerificationError("witness is a combination of two idempotents")
    return w


__all__ = [
    "Decomposition",
    "KeyLemmaResult",
    "RearrangedForm",
    "TwoIdemPlan",
    "choose_target_poly",
    "companion_family",
    "decompose3",
    "decompose_primary_power",
    "ell",
    "generalized_jordan",
    "jordan_block_pair",
    "key_lemma",
    "nilpotent_diff",
    "quadruple_conditions",
    "realize_plan",
    "rearrange",
    "two_by_two",
    "unipotent_sum_char2",
    "verify_decomposition",
    "witness_no_lc2",
]
