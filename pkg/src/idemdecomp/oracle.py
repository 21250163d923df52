"""Exhaustive ground truth over small prime fields.

Matrices are handled here as flat row-major tuples of ints so that whole
matrix spaces such as M_3(GF(3)) can be swept quickly.  Nothing in this
module uses the canonical-form machinery; it is an independent check on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from .errors import BudgetError, PreconditionError
from .fields import PrimeField, is_prime
from .matrix import Matrix

BUDGET = 2 ** 20


def _check_budget(n, q):
    if not is_prime(q):
        raise PreconditionError(f"{q} is not prime")
    if n < 0 or q ** (n * n) > BUDGET:
        raise BudgetError(f"q^(n^2) = {q}^{n * n} exceeds the enumeration budget {BUDGET}")


def _mul(a, b, n, q):
    out = []
    for i in range(n):
        row = a[i * n:(i + 1) * n]
        for j in range(n):
            s = 0
            for k in range(n):
                s += row[k] * b[k * n + j]
            out.append(s % q)
    return tuple(out)


def to_key(m: Matrix):
    return tuple(x.v for r in m.tolist() for x in r)


def from_key(key, n, q) -> Matrix:
    return Matrix(PrimeField(q), [list(key[i * n:(i + 1) * n]) for i in range(n)])


@dataclass(frozen=True)
class IdempotentCatalog:
    n: int
    q: int
    keys: tuple  # sorted flat tuples

    @property
    def items(self):
        return [from_key(k, self.n, self.q) for k in self.keys]

    def __len__(self):
        return len(self.keys)


def _rref_subspaces(n, r, q):
    """All ``r x n`` reduced row echelon matrices of rank ``r`` over GF(q)."""
    for pivots in combinations(range(n), r):
        slots = [(i, c) for i, p in enumerate(pivots) for c in range(p + 1, n) if c not in pivots]
        for values in product(range(q), repeat=len(slots)):
            rows = [[0] * n for _ in range(r)]
            for i, p in enumerate(pivots):
                rows[i][p] = 1
            for (i, c), v in zip(slots, values):
                rows[i][c] = v
            yield pivots, rows


def idempotent_count(n, q):
    """``sum_r [n choose r]_q * q^(r(n-r))``: the number of idempotents in M_n(GF(q))."""
    def gauss_binomial(n, r):
        num = den = 1
        for i in range(r):
            num *= q ** (n - i) - 1
            den *= q ** (i + 1) - 1
        return num // den

    return sum(gauss_binomial(n, r) * q ** (r * (n - r)) for r in range(n + 1))


@lru_cache(maxsize=None)
def _catalog_keys(n, q):
    found = set()
    for r in range(n + 1):
        for pivots, rows in _rref_subspaces(n, r, q):
            free = [c for c in range(n) if c not in pivots]
            # left kernel of the image basis V = rows^T, i.e. right kernel of rows
            kernel = []
            for f in free:
                z = [0] * n
                z[f] = 1
                for i, p in enumerate(pivots):
                    z[p] = (-rows[i][f]) % q
                kernel.append(z)
            for coeffs in product(range(q), repeat=r * len(kernel)):
                # coordinate rows: M = M0 + Z with M0 selecting pivot coordinates
                m = []
                for i, p in enumerate(pivots):
                    row = [0] * n
                    row[p] = 1
                    for j, z in enumerate(kernel):
                        c = coeffs[i * len(kernel) + j]
                        if c:
                            row = [(x + c * y) % q for x, y in zip(row, z)]
                    m.append(row)
                # P = V @ M where V[:, i] = rows[i]
                key = tuple(
                    sum(rows[t][a] * m[t][b] for t in range(r)) % q for a in range(n) for b in range(n)
                )
                found.add(key)
    return tuple(sorted(found))


def enumerate_idempotents(n: int, q: int) -> IdempotentCatalog:
    """Every idempotent of M_n(GF(q)), built from (image, kernel) pairs."""
    _check_budget(n, q)
    keys = _catalog_keys(n, q)
    for k in keys:
        if _mul(k, k, n, q) != k:
            raise AssertionError("catalog produced a non-idempotent")
    if len(keys) != idempotent_count(n, q):
        raise AssertionError("idempotent catalog is incomplete")
    return IdempotentCatalog(n, q, keys)


def filter_idempotents(n: int, q: int):
    """Idempotents found by testing all ``q^(n^2)`` matrices (cross-check only)."""
    _check_budget(n, q)
    return tuple(k for k in product(range(q), repeat=n * n) if _mul(k, k, n, q) == k)


@lru_cache(maxsize=None)
def composite_table(n: int, q: int, alpha: int, beta: int):
    """Map each ``alpha*P + beta*Q`` to its first ``(P, Q)`` in catalog order."""
    keys = enumerate_idempotents(n, q).keys
    alpha %= q
    beta %= q
    table = {}
    for p in keys:
        ap = [alpha * x for x in p]
        for r in keys:
            s = tuple((x + beta * y) % q for x, y in zip(ap, r))
            if s not in table:
                table[s] = (p, r)
    return table


def brute_lc2(a: Matrix, alpha, beta):
    """First ``(P, Q)`` in catalog order with ``alpha*P + beta*Q == a``, else ``None``."""
    field = a.field
    q = field.characteristic()
    n = a.rows
    if q == 0:
        raise PreconditionError("brute force search needs a finite field")
    _check_budget(n, q)
    alpha, beta = field(alpha).v, field(beta).v
    if alpha == 0 or beta == 0:
        raise PreconditionError("composite coefficients must be nonzero")
    catalog = enumerate_idempotents(n, q)
    members = set(catalog.keys)
    target = to_key(a)
    inv_beta = pow(beta, q - 2, q)
    for p in catalog.keys:
        rest = tuple((t - alpha * x) * inv_beta % q for t, x in zip(target, p))
        if rest in members:
            return from_key(p, n, q), from_key(rest, n, q)
    return None


@lru_cache(maxsize=None)
def _lc2_set(n, q):
    out = set()
    for alpha in range(1, q):
        for beta in range(1, q):
            out.update(composite_table(n, q, alpha, beta))
    return frozenset(out)


@lru_cache(maxsize=None)
def _lc1_set(n, q):
    keys = enumerate_idempotents(n, q).keys
    return frozenset(tuple(c * x % q for x in k) for c in range(1, q) for k in keys)


def brute_min_terms(a: Matrix, max_terms: int = 3):
    """Least number of idempotent terms (coefficients in GF(q)*) summing to ``a``.

    Returns ``"more"`` when ``max_terms`` terms do not suffice.
    """
    if not 0 <= max_terms <= 3:
        raise PreconditionError("max_terms must be between 0 and 3")
    field = a.field
    q = field.characteristic()
    n = a.rows
    if q == 0:
        raise PreconditionError("brute force search needs a finite field")
    _check_budget(n, q)
    key = to_key(a)
    if not any(key):
        return 0
    if max_terms >= 1 and key in _lc1_set(n, q):
        return 1
    if max_terms >= 2 and key in _lc2_set(n, q):
        return 2
    if max_terms >= 3:
        lc2 = _lc2_set(n, q)
        for c in range(1, q):
            for p in enumerate_idempotents(n, q).keys:
                if tuple((t - c * x) % q for t, x in zip(key, p)) in lc2:
                    return 3
    return "more"


def all_matrices(n: int, q: int):
    _check_budget(n, q)
    for key in product(range(q), repeat=n * n):
        yield key


def sweep_predicates(n: int, q: int, progress=None):
    """Compare the elementary-divisor predicate with brute force on all of M_n(GF(q))."""
    from .composites import is_lc2_composite, jordan_profile

    field = PrimeField(q)
    tables = {(a, b): composite_table(n, q, a, b) for a in range(1, q) for b in range(1, q)}
    checked = 0
    mismatches = []
    total = q ** (n * n)
    for idx, key in enumerate(all_matrices(n, q)):
        m = from_key(key, n, q)
        profile = jordan_profile(m)
        for (a, b), table in tables.items():
            verdict, _ = is_lc2_composite(m, field(a), field(b), profile=profile)
            checked += 1
            if verdict != (key in table):
                mismatches.append({"matrix": [list(key[i * n:(i + 1) * n]) for i in range(n)],
                                   "alpha": a, "beta": b, "predicate": verdict})
        if progress and (idx + 1) % 1000 == 0:
            progress(f"{idx + 1}/{total} matrices, {len(mismatches)} mismatches")
    return {"checked": checked, "mismatches": len(mismatches), "examples": mismatches[:10]}


def sweep_min_terms(n: int, q: int, progress=None):
    """Confirm that every matrix of M_n(GF(q)) needs at most three idempotent terms."""
    field = PrimeField(q)
    histogram = {}
    failures = []
    total = q ** (n * n)
    for idx, key in enumerate(all_matrices(n, q)):
        m = Matrix(field, [list(key[i * n:(i + 1) * n]) for i in range(n)])
        k = brute_min_terms(m, 3)
        histogram[str(k)] = histogram.get(str(k), 0) + 1
        if k == "more":
            failures.append([list(key[i * n:(i + 1) * n]) for i in range(n)])
        if progress and (idx + 1) % 1000 == 0:
            progress(f"{idx + 1}/{total} matrices")
    return {"checked": total, "mismatches": len(failures), "histogram": histogram,
            "examples": failures[:10]}
