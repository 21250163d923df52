"""Deciding whether a matrix is ``alpha*P + beta*Q`` with ``P``, ``Q`` idempotent.

All conditions are evaluated on elementary divisors.  A statement about an
eigenvalue ``lam`` in the algebraic closure becomes a statement about the
irreducible factor ``f`` it is a root of; the substitution ``lam -> c - lam``
becomes ``f(X) -> monic(f(c - X))``.  Irreducible factors of degree two or
more never have a root in the base field, so they never meet the finite
excluded sets that the criteria carve out.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .canonical import primary_form
from .errors import PreconditionError
from .fields import FieldSpec
from .matrix import Matrix
from .poly import Poly


@dataclass(frozen=True)
class JordanProfile:
    field: FieldSpec
    n: int
    eldivs: tuple  # ((f, k), multiplicity) pairs

    @classmethod
    def from_blocks(cls, field, blocks):
        counts = Counter(blocks)
        items = tuple(sorted(counts.items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1])))
        n = sum(f.degree * k * m for (f, k), m in items)
        return cls(field, n, items)

    def multiplicity(self, f: Poly, k: int) -> int:
        for (g, j), m in self.eldivs:
            if j == k and g == f:
                return m
        return 0

    def _linear(self, lam):
        return Poly.linear(self.field, lam)

    def j(self, lam, k: int) -> int:
        """Number of Jordan blocks of size exactly ``k`` for eigenvalue ``lam``."""
        return self.multiplicity(self._linear(lam), k)

    def n_k(self, lam, k: int) -> int:
        """Number of Jordan blocks of size at least ``k`` for eigenvalue ``lam``."""
        f = self._linear(lam)
        return sum(m for (g, j), m in self.eldivs if g == f and j >= k)

    def n_seq(self, lam):
        """``(n_1, n_2, ...)`` up to the largest block size (trailing zeros dropped)."""
        f = self._linear(lam)
        top = max((j for (g, j), _ in self.eldivs if g == f), default=0)
        return [self.n_k(lam, k) for k in range(1, top + 1)]

    def eigenvalues(self):
        """Eigenvalues lying in the base field."""
        return sorted({-g.coeffs[0] for (g, _), _ in self.eldivs if g.degree == 1},
                      key=self.field.key)

    def outside_degree(self, excluded) -> int:
        """Total algebraic multiplicity of eigenvalues not in ``excluded``."""
        total = 0
        for (g, k), m in self.eldivs:
            if g.degree == 1 and -g.coeffs[0] in excluded:
                continue
            total += g.degree * k * m
        return total

    def irrational_degree(self) -> int:
        """Total multiplicity of eigenvalues outside the base field."""
        return sum(g.degree * k * m for (g, k), m in self.eldivs if g.degree > 1)


@dataclass(frozen=True)
class CompositeQuery:
    alpha: object
    beta: object

    def __post_init__(self):
        if self.alpha == 0 or self.beta == 0:
            raise PreconditionError("composite coefficients must be nonzero")


def jordan_profile(a: Matrix, seed: int = 0) -> JordanProfile:
    return JordanProfile.from_blocks(a.field, primary_form(a, seed).blocks)


def intertwined(u, v) -> bool:
    """``u_{k+1} <= v_k`` and ``v_{k+1} <= u_k`` for every ``k >= 1``.

    Sequences are given by their finite support, starting at index 1.
    """
    size = max(len(u), len(v)) + 1
    u = list(u) + [0] * (size - len(u))
    v = list(v) + [0] * (size - len(v))
    return all(u[k + 1] <= v[k] and v[k + 1] <= u[k] for k in range(size - 1))


def pairing_ok(profile: JordanProfile, c, excluded) -> bool:
    """Blocks at ``lam`` and ``c - lam`` match for every ``lam`` outside ``excluded``."""
    excluded = set(excluded)
    for (f, k), m in profile.eldivs:
        if f.degree == 1 and -f.coeffs[0] in excluded:
            continue
        if profile.multiplicity(f.reflect(c), k) != m:
            return False
    return True


def is_lc2_composite(a: Matrix, alpha, beta, profile: JordanProfile | None = None):
    """Return ``(is_composite, reason)``; ``reason`` names the first failed condition."""
    field = a.field
    alpha, beta = field(alpha), field(beta)
    CompositeQuery(alpha, beta)
    if profile is None:
        profile = jordan_profile(a)
    char2 = field.characteristic() == 2
    zero = field.zero

    if beta == alpha and char2:
        for (f, k), _ in profile.eldivs:
            if f.degree == 1 and -f.coeffs[0] in (zero, alpha):
                continue
            if k % 2:
                return False, "char2-sum.odd-block"
        return True, None

    if beta == -alpha:
        if not intertwined(profile.n_seq(alpha), profile.n_seq(-alpha)):
            return False, "difference.intertwined"
        if not pairing_ok(profile, zero, {zero, alpha, -alpha}):
            return False, "difference.pairing"
        return True, None

    if beta == alpha:
        two = alpha + alpha
        if not intertwined(profile.n_seq(zero), profile.n_seq(two)):
            return False, "sum.intertwined"
        if not pairing_ok(profile, two, {zero, alpha, two}):
            return False, "sum.pairing"
        return True, None

    total = alpha + beta
    if not intertwined(profile.n_seq(zero), profile.n_seq(total)):
        return False, "general.intertwined-zero-sum"
    if not intertwined(profile.n_seq(alpha), profile.n_seq(beta)):
        return False, "general.intertwined-alpha-beta"
    if not pairing_ok(profile, total, {zero, alpha, beta, total}):
        return False, "general.pairing"
    if not char2:
        mid = Poly.linear(field, total / 2)
        for (f, k), _ in profile.eldivs:
            if f == mid and k % 2:
                return False, "general.odd-block-at-midpoint"
    return True, None


def diag_composite(values, alpha, beta, field: FieldSpec | None = None) -> bool:
    """Composite test for ``D(values)`` by counting equal diagonal entries."""
    if field is None:
        from .fields import field_of

        field = field_of(values[0]) if values else field_of(alpha)
    values = [field(v) for v in values]
    alpha, beta = field(alpha), field(beta)
    CompositeQuery(alpha, beta)
    counts = Counter(values)
    zero = field.zero
    char2 = field.characteristic() == 2

    def balanced(c, excluded):
        return all(counts[lam] == counts[c - lam] for lam in counts if lam not in excluded)

    if char2 and alpha == beta:
        return all(v in (zero, alpha) for v in values)
    if not char2 and beta == -alpha:
        return balanced(zero, {zero, alpha, -alpha})
    if not char2 and beta == alpha:
        return balanced(alpha + alpha, {zero, alpha, alpha + alpha})
    total = alpha + beta
    if char2:
        return balanced(total, {zero, alpha, beta, total})
    mid = total / 2
    return counts[mid] == 0 and balanced(total, {zero, alpha, beta, total, mid})


def evenout_check(a: Matrix, alpha, beta, profile: JordanProfile | None = None) -> bool:
    """Necessary parity conditions for being an ``(alpha, beta)``-composite."""
    field = a.field
    alpha, beta = field(alpha), field(beta)
    CompositeQuery(alpha, beta)
    if profile is None:
        profile = jordan_profile(a)
    excluded = {field.zero, alpha, beta, alpha + beta}
    return profile.outside_degree(excluded) % 2 == 0 and profile.irrational_degree() % 2 == 0
