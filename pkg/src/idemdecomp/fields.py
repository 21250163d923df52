"""Coefficient fields: the rationals and prime fields.

Elements of the rationals are plain :class:`fractions.Fraction` values (always
reduced with a positive denominator).  Elements of a prime field are
:class:`FpElement` instances holding a residue in ``[0, p)``.  Both support
the usual arithmetic operators, so algorithms are written once for either
field.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from functools import lru_cache

from .errors import FieldMismatchError, NotInvertibleError, PreconditionError


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    # deterministic Miller-Rabin for n < 3.3e24
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class FpElement:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    @property
    def field(self) -> PrimeField:
        return PrimeField(self.p)

    def _coerce(self, other):
        if type(other) is FpElement:
            if other.p != self.p:
                raise FieldMismatchError(f"GF({self.p}) vs GF({other.p})")
            return other.v
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FpElement(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.v, self.p)

    def __pos__(self):
        return self

    def inverse(self) -> FpElement:
        if self.v == 0:
            raise NotInvertibleError(f"division by zero in GF({self.p})")
        return FpElement(pow(self.v, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * FpElement(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.inverse() * o

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpElement(pow(self.v, e, self.p), self.p)

    def __eq__(self, other):
        if type(other) is FpElement:
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __bool__(self):
        return self.v != 0

    def __int__(self):
        return self.v

    def __repr__(self):
        return f"{self.v} (mod {self.p})"

    def __str__(self):
        return str(self.v)


class FieldSpec:
    """Common interface of :class:`Rationals` and :class:`PrimeField`."""

    zero = None
    one = None

    def characteristic(self) -> int:
        raise NotImplementedError

    def cardinality(self):
        raise NotImplementedError

    def is_finite(self) -> bool:
        return self.cardinality() != math.inf

    def __call__(self, x):
        raise NotImplementedError

    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        return str(x)

    def key(self, x):
        """Total-order key used for canonical sorting."""
        raise NotImplementedError

    def to_json(self):
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError


class Rationals(FieldSpec):
    """The field of rational numbers, elements are ``Fraction``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance.zero = Fraction(0)
            cls._instance.one = Fraction(1)
        return cls._instance

    def characteristic(self) -> int:
        return 0

    def cardinality(self):
        return math.inf

    def __call__(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        if isinstance(x, FpElement):
            raise FieldMismatchError("cannot coerce a prime-field element into Q")
        raise TypeError(f"cannot convert {x!r} to a rational")

    def parse(self, text: str) -> Fraction:
        text = str(text).strip()
        try:
            if "/" in text:
                num, den = text.split("/")
                num, den = int(num), int(den)
                if den == 0:
                    raise NotInvertibleError(f"zero denominator in {text!r}")
                return Fraction(num, den)
            return Fraction(int(text))
        except ValueError as exc:
            raise PreconditionError(f"not a rational scalar: {text!r}") from exc

    def format(self, x) -> str:
        x = self(x)
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"

    def key(self, x):
        return x

    def random_element(self, rng: random.Random, bound: int = 5):
        return Fraction(rng.randint(-bound, bound))

    def to_json(self):
        return "Q"

    def label(self) -> str:
        return "Q"

    def __repr__(self):
        return "Rationals()"

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __reduce__(self):
        return (Rationals, ())


class _PrimeField(FieldSpec):
    def __init__(self, p: int):
        if not isinstance(p, int) or not is_prime(p):
            raise PreconditionError(f"{p!r} is not a prime")
        self.p = p
        self.zero = FpElement(0, p)
        self.one = FpElement(1, p)

    def characteristic(self) -> int:
        return self.p

    def cardinality(self):
        return self.p

    def __call__(self, x) -> FpElement:
        if type(x) is FpElement:
            if x.p != self.p:
                raise FieldMismatchError(f"GF({x.p}) element given to GF({self.p})")
            return x
        if isinstance(x, int):
            return FpElement(x, self.p)
        if isinstance(x, Fraction):
            return FpElement(x.numerator, self.p) / FpElement(x.denominator, self.p)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot convert {x!r} to GF({self.p})")

    def parse(self, text: str) -> FpElement:
        text = str(text).strip()
        try:
            if "/" in text:
                return self(Fraction(text))
            return FpElement(int(text), self.p)
        except ValueError as exc:
            raise PreconditionError(f"not a GF({self.p}) scalar: {text!r}") from exc

    def key(self, x):
        return x.v

    def elements(self):
        return [FpElement(v, self.p) for v in range(self.p)]

    def nonzero_elements(self):
        return [FpElement(v, self.p) for v in range(1, self.p)]

    def random_element(self, rng: random.Random, bound=None):
        return FpElement(rng.randrange(self.p), self.p)

    def to_json(self):
        return {"Fp": self.p}

    def label(self) -> str:
        return f"Fp:{self.p}"

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, _PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __reduce__(self):
        return (PrimeField, (self.p,))


@lru_cache(maxsize=None)
def PrimeField(p: int) -> _PrimeField:
    """Return the (cached) prime field of order ``p``."""
    return _PrimeField(p)


QQ = Rationals()


def field_of(x) -> FieldSpec:
    if type(x) is FpElement:
        return PrimeField(x.p)
    if isinstance(x, (Fraction, int)):
        return QQ
    raise TypeError(f"{x!r} is not a field element")


def parse_field(text) -> FieldSpec:
    """Parse ``Q``, ``Fp:7``, ``{"Fp": 7}`` (the JSON form) or a FieldSpec."""
    if isinstance(text, FieldSpec):
        return text
    if isinstance(text, dict):
        if set(text) != {"Fp"}:
            raise PreconditionError(f"unknown field descriptor {text!r}")
        p = text["Fp"]
        if not isinstance(p, int):
            raise PreconditionError(f"prime must be an integer, got {p!r}")
        return PrimeField(p)
    if isinstance(text, str):
        t = text.strip()
        if t in ("Q", "QQ"):
            return QQ
        if t.startswith("Fp:"):
            try:
                p = int(t[3:])
            except ValueError as exc:
                raise PreconditionError(f"bad field {text!r}") from exc
            return PrimeField(p)
    raise PreconditionError(f"unknown field {text!r}; expected Q or Fp:<prime>")
