"""JSON encodings for scalars, matrices, certificates and decompositions.

Matrix JSON::

    {"field": "Q" | {"Fp": p}, "entries": [["1", "-2/3"], ...]}

Scalars are strings: ``"3"``, ``"-1/2"`` over Q and ``"0".."p-1"`` over GF(p).
"""

from __future__ import annotations

import json

from .errors import PreconditionError, ShapeError
from .fields import parse_field
from .matrix import Matrix, SimilarityCert


def scalar_to_json(field, x) -> str:
    return field.format(field(x))


def scalar_from_json(field, text):
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise PreconditionError(f"scalar must be a string or integer, got {text!r}")
    return field(text) if isinstance(text, int) else field.parse(text)


def matrix_to_json(m: Matrix) -> dict:
    f = m.field
    return {"field": f.to_json(), "entries": [[f.format(x) for x in row] for row in m.tolist()]}


def matrix_from_json(obj, field=None) -> Matrix:
    if not isinstance(obj, dict) or "entries" not in obj:
        raise PreconditionError("matrix JSON needs an object with an 'entries' list")
    if "field" in obj:
        f = parse_field(obj["field"])
        if field is not None and parse_field(field) != f:
            raise PreconditionError(f"matrix is over {f.label()}, expected {parse_field(field).label()}")
    elif field is not None:
        f = parse_field(field)
    else:
        raise PreconditionError("matrix JSON is missing its 'field'")
    rows = obj["entries"]
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise PreconditionError("'entries' must be a list of lists")
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ShapeError("ragged matrix rows")
    return Matrix(f, [[scalar_from_json(f, x) for x in r] for r in rows])


def cert_to_json(cert: SimilarityCert) -> dict:
    return {"s": matrix_to_json(cert.s), "s_inv": matrix_to_json(cert.s_inv)}


def cert_from_json(obj) -> SimilarityCert:
    return SimilarityCert(matrix_from_json(obj["s"]), matrix_from_json(obj["s_inv"]))


def poly_to_json(p) -> list:
    return [p.field.format(c) for c in p.coeffs]


def decomposition_to_json(d) -> dict:
    f = d.target.field
    return {
        "field": f.to_json(),
        "target": matrix_to_json(d.target),
        "terms": [{"coeff": f.format(c), "idempotent": matrix_to_json(p)} for c, p in d.terms],
        "verified": bool(d.verified),
    }


def decomposition_from_json(obj, target: Matrix | None = None):
    from .synthesis import Decomposition

    if not isinstance(obj, dict) or "terms" not in obj:
        raise PreconditionError("decomposition JSON needs a 'terms' list")
    if target is None:
        if "target" not in obj:
            raise PreconditionError("decomposition JSON has no 'target'; pass the matrix separately")
        target = matrix_from_json(obj["target"])
    f = target.field
    terms = []
    for t in obj["terms"]:
        terms.append((scalar_from_json(f, t["coeff"]), matrix_from_json(t["idempotent"], f)))
    return Decomposition(terms, target, False)


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=False)
