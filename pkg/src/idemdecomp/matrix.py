"""Exact dense matrices and the structured constructors used throughout.

Matrices are immutable by convention: every operation returns a new object.
Entries are field elements (``Fraction`` or ``FpElement``), stored row-major.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import FieldMismatchError, NotInvertibleError, PreconditionError, ShapeError
from .fields import FieldSpec
from .poly import Poly, poly_lcm


class Matrix:
    __slots__ = ("field", "rows", "cols", "_a", "_hash")

    def __init__(self, field: FieldSpec, entries, cols=None):
        a = [[field(x) for x in row] for row in entries]
        if cols is None:
            cols = len(a[0]) if a else 0
        if any(len(r) != cols for r in a):
            raise ShapeError("ragged matrix rows")
        self.field = field
        self.rows = len(a)
        self.cols = cols
        self._a = a
        self._hash = None

    @classmethod
    def _raw(cls, field, a, rows=None, cols=None):
        obj = cls.__new__(cls)
        obj.field = field
        obj.rows = len(a) if rows is None else rows
        obj.cols = (len(a[0]) if a else 0) if cols is None else cols
        obj._a = a
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zeros(cls, field, rows, cols=None):
        cols = rows if cols is None else cols
        return cls._raw(field, [[field.zero] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, field, n):
        a = [[field.zero] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = field.one
        return cls._raw(field, a, n, n)

    @classmethod
    def scalar(cls, field, n, c):
        c = field(c)
        a = [[field.zero] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = c
        return cls._raw(field, a, n, n)

    @classmethod
    def diag(cls, field, values):
        values = [field(v) for v in values]
        n = len(values)
        a = [[field.zero] * n for _ in range(n)]
        for i, v in enumerate(values):
            a[i][i] = v
        return cls._raw(field, a, n, n)

    @classmethod
    def unit(cls, field, rows, cols, i, j):
        m = cls.zeros(field, rows, cols)
        m._a[i][j] = field.one
        return m

    @classmethod
    def column(cls, field, values):
        return cls._raw(field, [[field(v)] for v in values], len(values), 1)

    @classmethod
    def from_columns(cls, field, columns, nrows=None):
        """Stack column vectors (each a list of entries) side by side."""
        if not columns:
            return cls.zeros(field, nrows or 0, 0)
        n = len(columns[0])
        return cls._raw(field, [[c[i] for c in columns] for i in range(n)], n, len(columns))

    # -- access -----------------------------------------------------------
    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._a[i][j]

    def row(self, i):
        return list(self._a[i])

    def col(self, j):
        return [r[j] for r in self._a]

    def columns(self):
        return [self.col(j) for j in range(self.cols)]

    def tolist(self):
        return [list(r) for r in self._a]

    def replace(self, i, j, value) -> Matrix:
        a = self.tolist()
        a[i][j] = self.field(value)
        return Matrix._raw(self.field, a, self.rows, self.cols)

    def submatrix(self, r0, r1, c0, c1) -> Matrix:
        return Matrix._raw(self.field, [row[c0:c1] for row in self._a[r0:r1]], r1 - r0, c1 - c0)

    def is_square(self):
        return self.rows == self.cols

    def _need_square(self, what="operation"):
        if self.rows != self.cols:
            raise ShapeError(f"{what} needs a square matrix, got {self.rows}x{self.cols}")

    # -- arithmetic -------------------------------------------------------
    def _same(self, other):
        if not isinstance(other, Matrix):
            raise TypeError("expected a Matrix")
        if other.field != self.field:
            raise FieldMismatchError("matrices over different fields")
        if other.shape != self.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._same(other)
        return Matrix._raw(
            self.field,
            [[x + y for x, y in zip(r, s)] for r, s in zip(self._a, other._a)],
            self.rows,
            self.cols,
        )

    def __sub__(self, other):
        self._same(other)
        return Matrix._raw(
            self.field,
            [[x - y for x, y in zip(r, s)] for r, s in zip(self._a, other._a)],
            self.rows,
            self.cols,
        )

    def __neg__(self):
        return Matrix._raw(self.field, [[-x for x in r] for r in self._a], self.rows, self.cols)

    def scale(self, c) -> Matrix:
        c = self.field(c)
        return Matrix._raw(self.field, [[c * x for x in r] for r in self._a], self.rows, self.cols)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self.matmul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __matmul__(self, other):
        return self.matmul(other)

    def matmul(self, other: Matrix) -> Matrix:
        if other.field != self.field:
            raise FieldMismatchError("matrices over different fields")
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        zero = self.field.zero
        bt = list(zip(*other._a)) if other.rows else [()] * other.cols
        a = [[sum((x * y for x, y in zip(r, c) if x), zero) for c in bt] for r in self._a]
        return Matrix._raw(self.field, a, self.rows, other.cols)

    def __pow__(self, e: int):
        self._need_square("power")
        if e < 0:
            return self.inverse() ** (-e)
        result = Matrix.identity(self.field, self.rows)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    @property
    def T(self) -> Matrix:
        return Matrix._raw(self.field, [list(c) for c in zip(*self._a)] if self.rows else
                           [[] for _ in range(self.cols)], self.cols, self.rows)

    def trace(self):
        self._need_square("trace")
        t = self.field.zero
        for i in range(self.rows):
            t = t + self._a[i][i]
        return t

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and self._a == other._a

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.rows, self.cols, tuple(map(tuple, self._a))))
        return self._hash

    def key(self):
        """Lexicographic ordering key (row-major)."""
        k = self.field.key
        return tuple(k(x) for r in self._a for x in r)

    # -- predicates -------------------------------------------------------
    def is_zero(self):
        return all(x == 0 for r in self._a for x in r)

    def is_identity(self):
        return self.is_square() and all(
            (x == 1) if i == j else (x == 0) for i, r in enumerate(self._a) for j, x in enumerate(r)
        )

    def is_scalar(self):
        if not self.is_square():
            return False
        if self.rows == 0:
            return True
        c = self._a[0][0]
        return all((x == c) if i == j else (x == 0) for i, r in enumerate(self._a) for j, x in enumerate(r))

    def is_diagonal(self):
        return self.is_square() and all(
            x == 0 for i, r in enumerate(self._a) for j, x in enumerate(r) if i != j
        )

    def is_idempotent(self):
        return self.is_square() and self @ self == self

    def diagonal(self):
        return [self._a[i][i] for i in range(min(self.rows, self.cols))]

    # -- elimination ------------------------------------------------------
    def rref(self):
        """Reduced row echelon form and pivot columns."""
        a = self.tolist()
        pivots = []
        r = 0
        for c in range(self.cols):
            piv = next((i for i in range(r, self.rows) if a[i][c] != 0), None)
            if piv is None:
                continue
            a[r], a[piv] = a[piv], a[r]
            inv = self.field.one / a[r][c]
            a[r] = [x * inv for x in a[r]]
            for i in range(self.rows):
                if i != r and a[i][c] != 0:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return Matrix._raw(self.field, a, self.rows, self.cols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self):
        """Basis of the right kernel as a list of column vectors (lists)."""
        R, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        zero, one = self.field.zero, self.field.one
        basis = []
        for f in free:
            v = [zero] * self.cols
            v[f] = one
            for i, p in enumerate(pivots):
                v[p] = -R._a[i][f]
            basis.append(v)
        return basis

    def inverse(self) -> Matrix:
        self._need_square("inverse")
        n = self.rows
        aug = Matrix._raw(
            self.field,
            [r + [self.field.one if i == j else self.field.zero for j in range(n)] for i, r in enumerate(self.tolist())],
            n,
            2 * n,
        )
        R, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise NotInvertibleError("matrix is singular")
        return R.submatrix(0, n, n, 2 * n)

    def solve(self, rhs: Matrix) -> Matrix:
        """Some ``X`` with ``self @ X == rhs``; raises if inconsistent."""
        if rhs.rows != self.rows:
            raise ShapeError("right-hand side has the wrong number of rows")
        n = self.cols
        aug = Matrix._raw(self.field, [r + s for r, s in zip(self.tolist(), rhs.tolist())],
                          self.rows, n + rhs.cols)
        R, pivots = aug.rref()
        if pivots and pivots[-1] >= n:
            raise NotInvertibleError("inconsistent linear system")
        x = [[self.field.zero] * rhs.cols for _ in range(n)]
        for i, p in enumerate(pivots):
            x[p] = R._a[i][n:]
        return Matrix._raw(self.field, x, n, rhs.cols)

    def det(self):
        self._need_square("determinant")
        a = self.tolist()
        n = self.rows
        d = self.field.one
        for c in range(n):
            piv = next((i for i in range(c, n) if a[i][c] != 0), None)
            if piv is None:
                return self.field.zero
            if piv != c:
                a[c], a[piv] = a[piv], a[c]
                d = -d
            d = d * a[c][c]
            inv = self.field.one / a[c][c]
            for i in range(c + 1, n):
                if a[i][c] != 0:
                    f = a[i][c] * inv
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return d

    def __repr__(self):
        body = "; ".join(" ".join(self.field.format(x) for x in r) for r in self._a)
        return f"Matrix({self.field.label()}, {self.rows}x{self.cols}, [{body}])"

    def __str__(self):
        cells = [[self.field.format(x) for x in r] for r in self._a]
        w = max((len(c) for r in cells for c in r), default=1)
        return "\n".join("[" + " ".join(c.rjust(w) for c in r) + "]" for r in cells)


# ---------------------------------------------------------------------------
# structured constructors

def companion(p: Poly) -> Matrix:
    """Companion matrix: subdiagonal ones, last column ``(a_0..a_{n-1})``.

    For ``p = 1`` (degree 0) the 0x0 matrix is returned.
    """
    if not p.is_monic():
        raise PreconditionError("companion matrix needs a monic polynomial")
    n = p.degree
    field = p.field
    a = [[field.zero] * n for _ in range(n)]
    for i in range(1, n):
        a[i][i - 1] = field.one
    for i in range(n):
        a[i][n - 1] = -p.coeffs[i]
    return Matrix._raw(field, a, n, n)


def h_matrix(field, n: int, p: int) -> Matrix:
    """``n x p`` matrix whose only nonzero entry is a 1 at row 1, column ``p``."""
    if n < 1 or p < 1:
        raise PreconditionError("h_matrix needs positive dimensions")
    return Matrix.unit(field, n, p, 0, p - 1)


def f_matrix(field, k: int) -> Matrix:
    """``D(0, ..., 0, 1)`` of size ``k``."""
    if k < 1:
        raise PreconditionError("f_matrix needs a positive size")
    return Matrix.unit(field, k, k, k - 1, k - 1)


def block_diag(blocks, field=None) -> Matrix:
    blocks = list(blocks)
    if field is None:
        if not blocks:
            raise PreconditionError("block_diag of no blocks needs an explicit field")
        field = blocks[0].field
    n = sum(b.rows for b in blocks)
    m = sum(b.cols for b in blocks)
    a = [[field.zero] * m for _ in range(n)]
    r = c = 0
    for b in blocks:
        if b.field != field:
            raise FieldMismatchError("block_diag of matrices over different fields")
        for i in range(b.rows):
            a[r + i][c:c + b.cols] = b._a[i]
        r += b.rows
        c += b.cols
    return Matrix._raw(field, a, n, m)


def block_matrix(grid) -> Matrix:
    """Assemble a matrix from a 2D list of blocks with compatible shapes."""
    field = grid[0][0].field
    rows = []
    for brow in grid:
        h = brow[0].rows
        if any(b.rows != h for b in brow):
            raise ShapeError("blocks in a block row must have equal heights")
        for i in range(h):
            rows.append([x for b in brow for x in b._a[i]])
    cols = sum(b.cols for b in grid[0])
    return Matrix._raw(field, rows, len(rows), cols)


def poly_at_matrix(p: Poly, a: Matrix) -> Matrix:
    a._need_square("polynomial evaluation")
    result = Matrix.zeros(a.field, a.rows)
    ident = Matrix.identity(a.field, a.rows)
    for c in reversed(p.coeffs):
        result = result @ a + ident.scale(c)
    return result


def apply_poly_to_vector(p: Poly, a: Matrix, v):
    """``p(a) v`` by Horner's rule on vectors."""
    acc = [a.field.zero] * a.rows
    for c in reversed(p.coeffs):
        acc = [sum((x * y for x, y in zip(row, acc) if y), a.field.zero) + c * vi
               for row, vi in zip(a._a, v)]
    return acc


def matvec(a: Matrix, v):
    zero = a.field.zero
    return [sum((x * y for x, y in zip(row, v) if y), zero) for row in a._a]


# ---------------------------------------------------------------------------
# spectral quantities

def rank(a: Matrix) -> int:
    return a.rank()


def kernel_dim_powers(a: Matrix, lam, kmax: int):
    """``[dim Ker (a - lam I)^k for k = 0..kmax]``."""
    a._need_square("kernel_dim_powers")
    n = a.rows
    shifted = a - Matrix.scalar(a.field, n, lam)
    dims = [0]
    power = Matrix.identity(a.field, n)
    for _ in range(kmax):
        power = power @ shifted
        dims.append(n - power.rank())
    return dims


def charpoly(a: Matrix) -> Poly:
    """Characteristic polynomial ``det(X I - a)`` via Hessenberg reduction."""
    a._need_square("charpoly")
    field = a.field
    n = a.rows
    h = a.tolist()
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if h[i][m - 1] != 0), None)
        if piv is None:
            continue
        if piv != m:
            h[piv], h[m] = h[m], h[piv]
            for r in h:
                r[piv], r[m] = r[m], r[piv]
        inv = field.one / h[m][m - 1]
        for i in range(m + 1, n):
            u = h[i][m - 1] * inv
            if u == 0:
                continue
            h[i] = [x - u * y for x, y in zip(h[i], h[m])]
            for r in h:
                r[m] = r[m] + u * r[i]
    x = Poly.x(field)
    polys = [Poly.one(field)]
    for m in range(n):
        p = (x - h[m][m]) * polys[m]
        t = field.one
        for i in range(m - 1, -1, -1):
            t = t * h[i + 1][i]
            if t == 0:
                break
            p = p - polys[i] * (h[i][m] * t)
        polys.append(p)
    return polys[n]


def krylov(a: Matrix, v, count: int):
    vecs = [list(v)]
    for _ in range(count - 1):
        vecs.append(matvec(a, vecs[-1]))
    return vecs


def vector_minpoly(a: Matrix, v) -> Poly:
    """Monic generator of ``{p : p(a) v = 0}``."""
    field = a.field
    n = a.rows
    # incremental echelon form of the Krylov sequence, tracking combinations
    basis = []  # (pivot, reduced vector, combination coefficients)
    cur = list(v)
    k = 0
    while True:
        vec = list(cur)
        comb = [field.zero] * k + [field.one]
        for piv, bv, bc in basis:
            c = vec[piv]
            if c != 0:
                vec = [x - c * y for x, y in zip(vec, bv)]
                comb = [x - c * y for x, y in zip(comb, bc + [field.zero] * (len(comb) - len(bc)))]
        piv = next((i for i in range(n) if vec[i] != 0), None)
        if piv is None:
            return Poly(field, comb)
        inv = field.one / vec[piv]
        basis.append((piv, [x * inv for x in vec], [x * inv for x in comb]))
        cur = matvec(a, cur)
        k += 1


def minpoly(a: Matrix) -> Poly:
    a._need_square("minpoly")
    field = a.field
    result = Poly.one(field)
    for j in range(a.rows):
        e = [field.zero] * a.rows
        e[j] = field.one
        result = poly_lcm(result, vector_minpoly(a, e))
    return result


# ---------------------------------------------------------------------------
# similarity certificates

@dataclass(frozen=True)
class SimilarityCert:
    """Invertible ``s`` (with its inverse) such that ``s @ a @ s_inv == b``."""

    s: Matrix
    s_inv: Matrix

    @classmethod
    def identity(cls, field, n):
        i = Matrix.identity(field, n)
        return cls(i, i)

    @classmethod
    def from_basis(cls, basis: Matrix):
        """Certificate for the change to a new basis given by the columns of ``basis``.

        ``s @ a @ s_inv`` is then the matrix of ``a`` in that basis.
        """
        return cls(basis.inverse(), basis)

    @classmethod
    def from_matrix(cls, s: Matrix):
        return cls(s, s.inverse())

    @property
    def size(self):
        return self.s.rows

    def apply(self, a: Matrix) -> Matrix:
        return self.s @ a @ self.s_inv

    def pull(self, b: Matrix) -> Matrix:
        return self.s_inv @ b @ self.s

    def inverse(self) -> SimilarityCert:
        return SimilarityCert(self.s_inv, self.s)

    def then(self, other: SimilarityCert) -> SimilarityCert:
        """Apply ``self`` first and ``other`` second."""
        return SimilarityCert(other.s @ self.s, self.s_inv @ other.s_inv)

    def is_valid(self) -> bool:
        return (self.s @ self.s_inv).is_identity()

    def verifies(self, a: Matrix, b: Matrix) -> bool:
        return verify_similarity(a, b, self)


def cert_block_diag(certs, field=None) -> SimilarityCert:
    certs = list(certs)
    return SimilarityCert(
        block_diag([c.s for c in certs], field), block_diag([c.s_inv for c in certs], field)
    )


def permutation_cert(field, order) -> SimilarityCert:
    """Certificate whose ``apply`` reorders coordinates: new index ``k`` is old ``order[k]``."""
    n = len(order)
    s = Matrix.zeros(field, n)
    for k, old in enumerate(order):
        s._a[k][old] = field.one
    return SimilarityCert(s, s.T)


def verify_similarity(a: Matrix, b: Matrix, cert: SimilarityCert) -> bool:
    """True iff ``cert.s @ a @ cert.s_inv == b`` and ``s_inv`` really inverts ``s``."""
    if a.shape != b.shape or not a.is_square():
        return False
    if cert.s.shape != a.shape or cert.s_inv.shape != a.shape:
        return False
    if a.field != b.field or cert.s.field != a.field:
        return False
    if not cert.is_valid():
        return False
    return cert.s @ a == b @ cert.s
