"""Command-line front end.

JSON results go to standard output, progress and diagnostics to standard
error.  Exit status: 0 on success, 1 on invalid input, 2 when an internal
verification check fails (a bug, reported with whatever payload is known).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import canonical, oracle, synthesis
from .composites import is_lc2_composite
from .errors import IdemError, VerificationError
from .fields import QQ, parse_field
from .matrix import Matrix
from .serialize import (
    cert_to_json,
    decomposition_from_json,
    decomposition_to_json,
    matrix_from_json,
    matrix_to_json,
    poly_to_json,
    scalar_from_json,
)

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _field_arg(text):
    try:
        return parse_field(text)
    except Exception as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _read_json(path):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _load_matrix(path, field) -> Matrix:
    try:
        m = matrix_from_json(_read_json(path), field)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed matrix JSON: {exc}") from exc
    if not m.is_square():
        raise UsageError("expected a square matrix")
    return m


def _emit(obj):
    sys.stdout.write(json.dumps(obj) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="idemdecomp", description="Idempotent decompositions of matrices over Q and GF(p).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=_field_arg, default=None,
                        help="Q or Fp:<prime>; must agree with the matrix file when both are given")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized factorization (default 0)")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose3", parents=[common], help="write a matrix as <= 3 idempotent terms")
    p.add_argument("matrix", help="matrix JSON file, or - for stdin")

    p = sub.add_parser("check2", parents=[common], help="is the matrix alpha*P + beta*Q?")
    p.add_argument("--alpha", required=True)
    p.add_argument("--beta", required=True)
    p.add_argument("matrix")

    p = sub.add_parser("canonical", parents=[common], help="Frobenius / primary form with certificate")
    p.add_argument("--form", choices=["frobenius", "primary", "invariant-factors"], default="frobenius")
    p.add_argument("matrix")

    p = sub.add_parser("ell", parents=[common], help="least number of idempotents needed in size n")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("witness", parents=[common], help="a matrix that is not a combination of two idempotents")
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("oracle", parents=[common], help="exhaustive checks over GF(q)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", choices=["predicates", "min-terms"], default="predicates")

    p = sub.add_parser("verify", parents=[common], help="check a decomposition JSON")
    p.add_argument("decomposition")
    p.add_argument("--matrix", dest="target", default=None,
                   help="target matrix JSON (defaults to the 'target' stored in the decomposition)")
    return parser


def _cmd_decompose3(args):
    a = _load_matrix(args.matrix, args.field)
    d = synthesis.decompose3(a, seed=args.seed)
    _emit(decomposition_to_json(d))
    return EXIT_OK


def _cmd_check2(args):
    a = _load_matrix(args.matrix, args.field)
    f = a.field
    alpha, beta = scalar_from_json(f, args.alpha), scalar_from_json(f, args.beta)
    verdict, reason = is_lc2_composite(a, alpha, beta)
    _emit({"composite": verdict, "reason": reason})
    return EXIT_OK


def _cmd_canonical(args):
    a = _load_matrix(args.matrix, args.field)
    f = a.field
    if args.form == "primary":
        form = canonical.primary_form(a, args.seed)
        out = {
            "form": "primary",
            "blocks": [{"factor": poly_to_json(g), "power": k} for g, k in form.blocks],
            "matrix": matrix_to_json(form.matrix(f)),
            "cert": cert_to_json(form.cert),
        }
    else:
        form = canonical.frobenius_form(a)
        out = {"form": args.form, "invariant_factors": [poly_to_json(g) for g in form.factors]}
        if args.form == "frobenius":
            out["matrix"] = matrix_to_json(form.matrix(f))
            out["cert"] = cert_to_json(form.cert)
    _emit(out)
    return EXIT_OK


def _cmd_ell(args):
    _emit({"ell": synthesis.ell(args.n, args.field or QQ)})
    return EXIT_OK


def _cmd_witness(args):
    w = synthesis.witness_no_lc2(args.n, args.field or QQ)
    _emit({"matrix": matrix_to_json(w)})
    return EXIT_OK


def _cmd_oracle(args):
    def progress(msg):
        print(msg, file=sys.stderr, flush=True)

    if args.mode == "predicates":
        summary = oracle.sweep_predicates(args.n, args.q, progress)
    else:
        summary = oracle.sweep_min_terms(args.n, args.q, progress)
    _emit(summary)
    return EXIT_OK if summary["mismatches"] == 0 else EXIT_VERIFY


def _cmd_verify(args):
    obj = _read_json(args.decomposition)
    target = _load_matrix(args.target, args.field) if args.target else None
    try:
        d = decomposition_from_json(obj, target)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"malformed decomposition JSON: {exc}") from exc
    if args.field is not None and d.target.field != args.field:
        raise UsageError("decomposition field does not match --field")
    ok = synthesis.verify_decomposition(d)
    _emit({"verified": ok, "terms": len(d.terms)})
    return EXIT_OK if ok else EXIT_INPUT


COMMANDS = {
    "decompose3": _cmd_decompose3,
    "check2": _cmd_check2,
    "canonical": _cmd_canonical,
    "ell": _cmd_ell,
    "witness": _cmd_witness,
    "oracle": _cmd_oracle,
    "verify": _cmd_verify,
}


def _payload_json(payload):
    out = {}
    for k, v in (payload or {}).items():
        out[k] = matrix_to_json(v) if isinstance(v, Matrix) else repr(v)
    return out


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return COMMANDS[args.verb](args)
    except VerificationError as exc:
        print(f"internal verification failure: {exc}", file=sys.stderr)
        _emit({"error": "verification", "message": str(exc), "payload": _payload_json(exc.payload)})
        return EXIT_VERIFY
    except (UsageError, IdemError, ValueError, ZeroDivisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        _emit({"error": "input", "message": str(exc)})
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
