"""Irreducible factorization over prime fields and over the rationals.

Prime fields use squarefree decomposition, distinct-degree factorization and
Cantor-Zassenhaus equal-degree splitting.  The splitting step draws from a
``random.Random`` seeded by the caller; the output is sorted canonically, so
the seed only affects running time, never the result.

Rational polynomials are made primitive over the integers, split into
squarefree parts (Yun), factored modulo a small prime, Hensel-lifted and
recombined by subset search (Zassenhaus).
"""

from __future__ import annotations

import math
import random
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product

from .errors import FactorizationCapError, PreconditionError
from .fields import PrimeField, Rationals, is_prime
from .poly import Poly, poly_gcd, poly_xgcd

DEGREE_CAP = 32


# ---------------------------------------------------------------------------
# prime fields

def _powmod(base: Poly, e: int, mod: Poly) -> Poly:
    result = Poly.one(base.field)
    base = base % mod
    while e:
        if e & 1:
            result = result * base % mod
        base = base * base % mod
        e >>= 1
    return result


def _pth_root(f: Poly) -> Poly:
    p = f.field.characteristic()
    return Poly(f.field, f.coeffs[::p])


def squarefree_fp(f: Poly):
    """Squarefree decomposition of a monic polynomial over GF(p)."""
    p = f.field.characteristic()
    out = []
    one = Poly.one(f.field)
    g = poly_gcd(f, f.derivative()) if f.degree > 0 else f
    w = f // g
    i = 1
    while w != one:
        y = poly_gcd(w, g)
        z = w // y
        if z != one:
            out.append((z, i))
        i += 1
        w = y
        g = g // y
    if g != one:
        for h, m in squarefree_fp(_pth_root(g).monic()):
            out.append((h, m * p))
    return out


def distinct_degree(f: Poly):
    """Split a squarefree monic ``f`` into products of same-degree irreducibles."""
    p = f.field.characteristic()
    x = Poly.x(f.field)
    out = []
    h = x
    d = 0
    while f.degree >= 2 * (d + 1):
        d += 1
        h = _powmod(h, p, f)
        g = poly_gcd(h - x, f)
        if g.degree > 0:
            out.append((g, d))
            f = f // g
            h = h % f
    if f.degree > 0:
        out.append((f, f.degree))
    return out


def equal_degree(f: Poly, d: int, rng: random.Random):
    """Cantor-Zassenhaus splitting of ``f`` (product of degree-``d`` irreducibles)."""
    if f.degree == d:
        return [f]
    field = f.field
    p = field.characteristic()
    n = f.degree
    while True:
        a = Poly(field, [rng.randrange(p) for _ in range(n)])
        if a.degree < 1:
            continue
        if p == 2:
            # absolute trace map to GF(2)
            t = a
            acc = a
            for _ in range(d - 1):
                t = t * t % f
                acc = acc + t
            g = poly_gcd(acc, f)
        else:
            g = poly_gcd(a, f)
            if 0 < g.degree < n:
                break
            e = (p ** d - 1) // 2
            g = poly_gcd(_powmod(a, e, f) - 1, f)
        if 0 < g.degree < n:
            break
    return equal_degree(g, d, rng) + equal_degree(f // g, d, rng)


def _factor_fp(f: Poly, rng: random.Random):
    counts = Counter()
    for part, mult in squarefree_fp(f.monic()):
        for block, d in distinct_degree(part):
            for irr in equal_degree(block, d, rng):
                counts[irr] += mult
    return counts


# ---------------------------------------------------------------------------
# integer polynomial helpers (lists of ints, lowest degree first)

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _zmul(a, b, m=None):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    if m is not None:
        out = [c % m for c in out]
    return _trim(out)


def _zadd(a, b, m=None):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    if m is not None:
        out = [c % m for c in out]
    return _trim(out)


def _zsub(a, b, m=None):
    return _zadd(a, [-c for c in b], m)


def _zdivmod_monic(a, b, m):
    """Division by a monic ``b`` modulo ``m``."""
    r = [c % m for c in a]
    db = len(b) - 1
    if len(r) - 1 < db:
        return [], _trim(r)
    q = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db] % m
        q[k] = c
        if c:
            for j in range(db + 1):
                r[k + j] = (r[k + j] - c * b[j]) % m
    return _trim(q), _trim(r[:db])


def _zexact_div(a, b):
    """``a / b`` over the integers, or ``None`` when it does not divide."""
    r = list(a)
    db = len(b) - 1
    if len(r) - 1 < db:
        return None
    q = [0] * (len(r) - db)
    lb = b[-1]
    for k in range(len(r) - 1 - db, -1, -1):
        num = r[k + db]
        if num % lb:
            return None
        c = num // lb
        q[k] = c
        if c:
            for j in range(db + 1):
                r[k + j] -= c * b[j]
    if any(r[:db]):
        return None
    return q


def _content(a):
    g = 0
    for c in a:
        g = math.gcd(g, c)
    return g


def _primitive(a):
    g = _content(a)
    if g == 0:
        return a
    if a[-1] < 0:
        g = -g
    return [c // g for c in a]


def _symmetric(a, m):
    half = m // 2
    return _trim([c - m if c > half else c for c in (x % m for x in a)])


def _to_fp(a, p):
    return Poly(PrimeField(p), a)


def _from_fp(f: Poly):
    return [c.v for c in f.coeffs]


def _hensel_step(m, f, g, h, s, t):
    M = m * m
    e = _zsub(f, _zmul(g, h), M)
    q, r = _zdivmod_monic(_zmul(s, e), h, M)
    g2 = _zadd(_zadd(g, _zmul(t, e)), _zmul(q, g), M)
    h2 = _zadd(h, r, M)
    b = _zsub(_zadd(_zmul(s, g2), _zmul(t, h2)), [1], M)
    c, d = _zdivmod_monic(_zmul(s, b), h2, M)
    s2 = _zsub(s, d, M)
    t2 = _zsub(_zsub(t, _zmul(t, b)), _zmul(c, g2), M)
    return g2, h2, s2, t2


def _hensel_lift(f, factors, p, modulus):
    """Lift ``f = lc * prod(factors) (mod p)`` to a factorization mod ``modulus``."""
    lc = f[-1]
    if len(factors) == 1:
        inv = pow(lc, -1, modulus)
        return [[c * inv % modulus for c in f]]
    k = len(factors) // 2
    g = [lc % p]
    for fa in factors[:k]:
        g = _zmul(g, fa, p)
    h = [1]
    for fa in factors[k:]:
        h = _zmul(h, fa, p)
    _, s, t = poly_xgcd(_to_fp(g, p), _to_fp(h, p))
    s, t = _from_fp(s), _from_fp(t)
    m = p
    while m < modulus:
        g, h, s, t = _hensel_step(m, f, g, h, s, t)
        m = m * m
    g = [c % modulus for c in g]
    h = [c % modulus for c in h]
    return _hensel_lift(g, factors[:k], p, modulus) + _hensel_lift(h, factors[k:], p, modulus)


def _zassenhaus(f, seed):
    """Factor a primitive squarefree integer polynomial with positive lc."""
    n = len(f) - 1
    if n <= 1:
        return [f]
    lc = f[-1]
    best = None
    q = 2
    tried = 0
    while tried < 5:
        q += 1
        if not is_prime(q) or lc % q == 0:
            continue
        fp = _to_fp(f, q)
        if poly_gcd(fp, fp.derivative()).degree > 0:
            continue
        tried += 1
        mods = sorted(_factor_fp(fp, random.Random(seed)).elements(), key=Poly.sort_key)
        if best is None or len(mods) < len(best[1]):
            best = (q, mods)
        if len(mods) == 1:
            return [f]
    p, mods = best
    norm2 = math.isqrt(sum(c * c for c in f)) + 1
    bound = norm2 * (2 ** n) * abs(lc)
    modulus = p
    while modulus <= 2 * bound:
        modulus *= p
    lifted = _hensel_lift(f, [_from_fp(g) for g in mods], p, modulus)

    out = []
    remaining = list(range(len(lifted)))
    size = 1
    while 2 * size <= len(remaining):
        for subset in combinations(remaining, size):
            b = f[-1]
            g = [b]
            for i in subset:
                g = _zmul(g, lifted[i], modulus)
            g = _primitive(_symmetric(g, modulus))
            quo = _zexact_div(f, g)
            if quo is not None:
                out.append(g)
                f = quo
                remaining = [i for i in remaining if i not in subset]
                break
        else:
            size += 1
    out.append(_primitive(f))
    return out


def _squarefree_q(f: Poly):
    """Yun's squarefree decomposition over a field of characteristic zero."""
    out = []
    one = Poly.one(f.field)
    df = f.derivative()
    a0 = poly_gcd(f, df)
    b = f // a0
    c = df // a0
    d = c - b.derivative()
    i = 1
    while b != one and b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b // a
        c = d // a
        d = c - b.derivative()
        i += 1
    return out


def _factor_q(f: Poly, seed: int):
    counts = Counter()
    for part, mult in _squarefree_q(f.monic()):
        den = 1
        for c in part.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        ints = _primitive([int(c * den) for c in part.coeffs])
        for g in _zassenhaus(ints, seed):
            counts[Poly(f.field, [Fraction(c) for c in g]).monic()] += mult
    return counts


# ---------------------------------------------------------------------------
# public interface

@lru_cache(maxsize=8192)
def _factor_cached(f: Poly, seed: int):
    if isinstance(f.field, Rationals):
        counts = _factor_q(f, seed)
    else:
        counts = _factor_fp(f, random.Random(seed))
    return tuple(sorted(counts.items(), key=lambda kv: (kv[0].sort_key(), kv[1])))


def factor(p: Poly, seed: int = 0):
    """Irreducible factorization as a sorted tuple of ``(monic factor, multiplicity)``.

    The leading coefficient is dropped; use :func:`factor_list` to keep it.
    """
    if p.is_zero():
        raise PreconditionError("cannot factor the zero polynomial")
    if isinstance(p.field, Rationals) and p.degree > DEGREE_CAP:
        raise FactorizationCapError(
            f"degree {p.degree} exceeds the rational factorization cap of {DEGREE_CAP}"
        )
    if p.degree == 0:
        return ()
    return _factor_cached(p, seed)


def factor_list(p: Poly, seed: int = 0):
    """Return ``(leading coefficient, factors)``."""
    return p.lc, factor(p, seed)


def is_irreducible(p: Poly) -> bool:
    fs = factor(p)
    return len(fs) == 1 and fs[0][1] == 1


def first_irreducible(field, degree: int) -> Poly:
    """Lexicographically first monic irreducible of the given degree over GF(p)."""
    p = field.characteristic()
    for tail in product(range(p), repeat=degree):
        f = Poly(field, list(tail) + [1])
        if f.coeff(0) == 0 and degree > 1:
            continue
        if is_irreducible(f):
            return f
    raise PreconditionError(f"no irreducible polynomial of degree {degree}")
