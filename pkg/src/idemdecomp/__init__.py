"""Exact decompositions of square matrices into linear combinations of idempotents.

Works over the rationals (``QQ``) and prime fields (``PrimeField(p)``).  Every
matrix is a combination of at most three idempotents (:func:`decompose3`);
whether it is ``alpha*P + beta*Q`` for given coefficients is decided from its
elementary divisors (:func:`is_lc2_composite`).
"""

from .canonical import (
    FrobeniusForm,
    InvariantFactors,
    PrimaryForm,
    companion_merge,
    companion_split,
    cyclicfit,
    frobenius_form,
    good_cyclic_normalize,
    invariant_factors,
    primary_form,
    roth_solve,
)
from .composites import (
    JordanProfile,
    diag_composite,
    evenout_check,
    intertwined,
    is_lc2_composite,
    jordan_profile,
)
from .errors import (
    BudgetError,
    FactorizationCapError,
    FieldMismatchError,
    IdemError,
    NotCoprimeError,
    NotInvertibleError,
    PreconditionError,
    ShapeError,
    VerificationError,
)
from .factor import factor, is_irreducible
from .fields import QQ, FpElement, PrimeField, parse_field
from .matrix import (
    Matrix,
    SimilarityCert,
    block_diag,
    charpoly,
    companion,
    minpoly,
    verify_similarity,
)
from .oracle import brute_lc2, brute_min_terms, enumerate_idempotents
from .poly import Poly, poly_gcd, trace_of_poly
from .synthesis import (
    Decomposition,
    choose_target_poly,
    companion_family,
    decompose3,
    decompose_primary_power,
    ell,
    key_lemma,
    nilpotent_diff,
    rearrange,
    two_by_two,
    unipotent_sum_char2,
    verify_decomposition,
    witness_no_lc2,
)

__version__ = "0.1.0"
