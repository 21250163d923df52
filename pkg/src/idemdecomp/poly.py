"""Dense univariate polynomials over a :class:`~idemdecomp.fields.FieldSpec`.

Coefficients are stored lowest degree first with no trailing zeros; the zero
polynomial has an empty coefficient tuple and degree ``-inf``.
"""

from __future__ import annotations

from functools import reduce

from .errors import FieldMismatchError, NotInvertibleError, PreconditionError
from .fields import FieldSpec

NEG_INF = float("-inf")


class Poly:
    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: FieldSpec, coeffs=()):
        cs = [field(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.field = field
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, field, coeffs):
        # coeffs already converted; only strip
        cs = list(coeffs)
        while cs and cs[-1] == 0:
            cs.pop()
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = tuple(cs)
        obj._hash = None
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, field):
        return cls._raw(field, ())

    @classmethod
    def one(cls, field):
        return cls._raw(field, (field.one,))

    @classmethod
    def const(cls, field, c):
        return cls(field, (c,))

    @classmethod
    def x(cls, field):
        return cls._raw(field, (field.zero, field.one))

    @classmethod
    def monomial(cls, field, k, c=1):
        return cls(field, [0] * k + [c])

    @classmethod
    def linear(cls, field, root):
        """The monic polynomial ``X - root``."""
        return cls._raw(field, (-field(root), field.one))

    @classmethod
    def from_roots(cls, field, roots):
        return reduce(lambda acc, r: acc * cls.linear(field, r), roots, cls.one(field))

    @classmethod
    def from_companion_column(cls, field, column):
        """Monic ``X^n - sum a_k X^k`` from the last column ``(a_0..a_{n-1})``."""
        return cls._raw(field, tuple(-field(a) for a in column) + (field.one,))

    # -- basic accessors --------------------------------------------------
    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else self.field.zero

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field.zero

    def monic(self) -> Poly:
        if not self.coeffs:
            raise NotInvertibleError("the zero polynomial has no monic associate")
        inv = self.field.one / self.coeffs[-1]
        return Poly._raw(self.field, [c * inv for c in self.coeffs])

    def __call__(self, x):
        acc = self.field.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def roots(self):
        """Roots in the base field, found from the degree-one irreducible factors."""
        from .factor import factor

        return [-f.coeffs[0] for f, _ in factor(self) if f.degree == 1]

    # -- arithmetic -------------------------------------------------------
    def _check(self, other):
        if isinstance(other, Poly):
            if other.field != self.field:
                raise FieldMismatchError("polynomials over different fields")
            return other
        return Poly.const(self.field, other)

    def __add__(self, other):
        other = self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly._raw(self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.field, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = self.field(other)
            return Poly._raw(self.field, [x * c for x in self.coeffs])
        other = self._check(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly.zero(self.field)
        out = [self.field.zero] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] = out[i + j] + x * y
        return Poly._raw(self.field, out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative polynomial power")
        result, base = Poly.one(self.field), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other):
        return poly_divmod(self, other)

    def __floordiv__(self, other):
        return poly_divmod(self, other)[0]

    def __mod__(self, other):
        return poly_divmod(self, other)[1]

    def divides(self, other: Poly) -> bool:
        return poly_divmod(other, self)[1].is_zero()

    def derivative(self) -> Poly:
        return Poly._raw(self.field, [c * k for k, c in enumerate(self.coeffs)][1:])

    def compose(self, other: Poly) -> Poly:
        """Return ``self(other(X))``."""
        other = self._check(other)
        acc = Poly.zero(self.field)
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def reflect(self, c) -> Poly:
        """Monic normalization of ``self(c - X)``; maps roots λ to c - λ."""
        f = self.field
        g = self.compose(Poly._raw(f, (f(c), -f.one)))
        return g.monic()

    # -- comparison / hashing ---------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int) and not isinstance(other, bool):
            return self == Poly.const(self.field, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.coeffs))
        return self._hash

    def sort_key(self):
        return (len(self.coeffs), tuple(self.field.key(c) for c in self.coeffs))

    def to_list(self):
        return [self.field.format(c) for c in self.coeffs]

    def __repr__(self):
        return f"Poly({self.field.label()}, {self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            cs = self.field.format(c)
            mono = "" if k == 0 else ("X" if k == 1 else f"X^{k}")
            if not mono:
                terms.append(cs)
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms)


def poly_divmod(a: Poly, b: Poly):
    """Euclidean division: ``a = q*b + r`` with ``deg r < deg b``."""
    if not isinstance(b, Poly):
        b = Poly.const(a.field, b)
    if a.field != b.field:
        raise FieldMismatchError("polynomials over different fields")
    if b.is_zero():
        raise NotInvertibleError("polynomial division by zero")
    field = a.field
    r = list(a.coeffs)
    db = len(b.coeffs) - 1
    if len(r) - 1 < db:
        return Poly.zero(field), a
    inv = field.one / b.coeffs[-1]
    q = [field.zero] * (len(r) - db)
    bc = b.coeffs
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] * inv
        q[k] = c
        if c != 0:
            for j in range(db + 1):
                r[k + j] = r[k + j] - c * bc[j]
    return Poly._raw(field, q), Poly._raw(field, r[:db])


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor."""
    if a.field != b.field:
        raise FieldMismatchError("polynomials over different fields")
    if a.is_zero() and b.is_zero():
        raise PreconditionError("gcd of two zero polynomials is undefined")
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """Return ``(g, s, t)`` with ``s*a + t*b = g`` and ``g`` monic."""
    if a.is_zero() and b.is_zero():
        raise PreconditionError("gcd of two zero polynomials is undefined")
    field = a.field
    r0, r1 = a, b
    s0, s1 = Poly.one(field), Poly.zero(field)
    t0, t1 = Poly.zero(field), Poly.one(field)
    while not r1.is_zero():
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    inv = field.one / r0.lc
    return r0 * inv, s0 * inv, t0 * inv


def poly_lcm(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero(a.field)
    return (a * b // poly_gcd(a, b)).monic()


def trace_of_poly(p: Poly):
    """``a_{n-1}`` when ``p = X^n - sum a_k X^k``: minus the subleading coefficient."""
    if not p.is_monic() or p.degree < 1:
        raise PreconditionError("trace_of_poly needs a monic polynomial of degree >= 1")
    return -p.coeffs[-2]
