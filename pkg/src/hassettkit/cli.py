"""Command-line interface.

Every command prints one JSON document on stdout.  Exit status 0 means
success, 1 a mathematically meaningful failure (missing discriminants, a
form leaving the Hassett set, no distinguished element), 2 invalid input.
Human-readable summaries go to stderr with ``--verbose``.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .arithmetic import in_hassett, solve_hassett_enum, solve_hassett_proof
from .enumeration import image_up_to, min_norm, vectors_with_norm
from .errors import (
    LatticeError,
    MissingDiscriminants,
    NotDistinguished,
    NotSupportedInH,
    RankOutOfRange,
)
from .gramio import dumps, gram_document, read_gram
from .hassett import dm_quotient, lift_form, verify_z_membership, yang_yu_check
from .lattice import default_distinguished, determinant, find_distinguished, is_even, smith_normal_form

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2


class _Invalid(Exception):
    pass


def _emit(payload) -> None:
    sys.stdout.write(dumps(payload))


def _note(args, text: str) -> None:
    if args.verbose:
        print(text, file=sys.stderr)


def _load(path, require_definite=True):
    try:
        return read_gram(path, require_definite)
    except OSError as exc:
        raise _Invalid(f"cannot read {path}: {exc}") from exc
    except LatticeError as exc:
        raise _Invalid(str(exc)) from exc


def _pick_distinguished(L, choice: str):
    if choice == "auto":
        return default_distinguished(L)
    ds = find_distinguished(L)
    if not ds:
        return None
    try:
        idx = int(choice)
    except ValueError:
        raise _Invalid(f"--distinguished must be an index or 'auto', got {choice!r}") from None
    if not 0 <= idx < len(ds):
        raise _Invalid(f"--distinguished index {idx} out of range (found {len(ds)})")
    return ds[idx]


def cmd_lattice_info(args) -> int:
    L = _load(args.file)
    snf = smith_normal_form(L.gram)
    roots = vectors_with_norm(L, 2)
    ds = find_distinguished(L)
    _emit(
        {
            "rank": L.rank,
            "determinant": determinant(L),
            "even": is_even(L),
            "min_norm": min_norm(L),
            "roots": [list(r) for r in roots],
            "distinguished": [list(o) for o in ds],
            "snf": list(snf.invariant_factors),
            "l": snf.l,
        }
    )
    _note(args, f"rank {L.rank}, det {determinant(L)}, {'even' if is_even(L) else 'odd'}")
    return EXIT_OK


def cmd_form_image(args) -> int:
    if args.bound < 1:
        raise _Invalid("--bound must be >= 1")
    L = _load(args.file)
    rep = image_up_to(L, args.bound, primitive_only=args.primitive, witnesses=args.witnesses)
    _emit(rep.to_dict(complement=args.complement))
    _note(args, f"{len(rep.values)} values up to {args.bound}")
    return EXIT_OK


def cmd_hassett_solve(args) -> int:
    d = args.d
    if not in_hassett(d):
        _emit({"d": d, "error": f"{d} is not in the Hassett set"})
        return EXIT_FAILED
    sol = solve_hassett_proof(d) if args.mode == "proof" else solve_hassett_enum(d)
    out = {"d": d, "mode": args.mode}
    out.update(sol.to_dict())
    _emit(out)
    _note(args, f"f0{sol.vector} = {sol.value}, gcd {sol.gcd}")
    return EXIT_OK


def cmd_dm(args) -> int:
    L = _load(args.file)
    o = _pick_distinguished(L, args.distinguished)
    if o is None:
        _emit({"error": "lattice has no distinguished element"})
        return EXIT_FAILED
    _emit(gram_document(dm_quotient(L, o)))
    _note(args, f"distinguished element {o}")
    return EXIT_OK


def cmd_lift(args) -> int:
    F = _load(args.file)
    try:
        res = lift_form(F)
    except NotSupportedInH as exc:
        _emit({"error": str(exc), "witness": list(exc.witness), "value": exc.value})
        return EXIT_FAILED
    doc = gram_document(res.lattice)
    doc["parity"] = res.parity_flag
    doc["distinguished"] = list(res.distinguished)
    doc["basis"] = [list(b) for b in res.basis]
    _emit(doc)
    return EXIT_OK


def cmd_yangyu(args) -> int:
    L = _load(args.file)
    try:
        rep = yang_yu_check(L)
    except RankOutOfRange as exc:
        raise _Invalid(str(exc)) from exc
    _emit(rep.to_dict())
    _note(args, "conditions hold" if rep.passes else "conditions fail")
    return EXIT_OK if rep.passes else EXIT_FAILED


def cmd_zcheck(args) -> int:
    if args.bound < 8:
        raise _Invalid("--bound must be >= 8")
    L = _load(args.file)
    o = _pick_distinguished(L, args.distinguished)
    if o is None:
        _emit({"error": "lattice has no distinguished element"})
        return EXIT_FAILED
    mode = "enumeration" if args.mode in ("enum", "enumeration") else "proof"
    try:
        cert = verify_z_membership(L, o, args.bound, mode)
    except MissingDiscriminants as exc:
        _emit({"error": "missing discriminants", "bound": exc.bound, "missing": exc.missing})
        return EXIT_FAILED
    if args.out:
        try:
            Path(args.out).write_text(cert.to_json())
        except OSError as exc:
            raise _Invalid(f"cannot write {args.out}: {exc}") from exc
    codim = L.rank - 1
    _emit(
        {
            "digest": cert.digest,
            "distinguished": list(o),
            "bound": cert.bound,
            "mode": cert.mode,
            "witnesses": len(cert.witnesses),
            "codimension": codim,
            "dimension": 20 - codim,
            "summary": f"codim {codim}, dim {20 - codim}",
            "certificate": args.out,
        }
    )
    _note(args, f"codim {codim}, dim {20 - codim}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hassettkit", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", "-v", action="store_true", help="human-readable notes on stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("lattice-info", parents=[common], help="invariants of a Gram matrix")
    s.add_argument("file")
    s.set_defaults(func=cmd_lattice_info)

    s = sub.add_parser("form-image", parents=[common], help="values represented up to a bound")
    s.add_argument("file")
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--primitive", action="store_true")
    s.add_argument("--complement", action="store_true", help="also list missed values")
    s.add_argument("--witnesses", action="store_true")
    s.set_defaults(func=cmd_form_image)

    s = sub.add_parser("hassett-solve", parents=[common], help="primitive solution of f0 = d")
    s.add_argument("d", type=int)
    s.add_argument("--mode", choices=("proof", "enum"), default="proof")
    s.set_defaults(func=cmd_hassett_solve)

    s = sub.add_parser("dm", parents=[common], help="quotient form D(M)")
    s.add_argument("file")
    s.add_argument("--distinguished", default="auto")
    s.set_defaults(func=cmd_dm)

    s = sub.add_parser("lift", parents=[common], help="lattice M with D(M) equal to a form")
    s.add_argument("file")
    s.set_defaults(func=cmd_lift)

    s = sub.add_parser("yangyu", parents=[common], help="admissibility conditions")
    s.add_argument("file")
    s.set_defaults(func=cmd_yangyu)

    s = sub.add_parser("zcheck", parents=[common], help="certificate for all Hassett d up to a bound")
    s.add_argument("file")
    s.add_argument("--bound", type=int, required=True)
    s.add_argument("--out")
    s.add_argument("--mode", choices=("enumeration", "enum", "proof"), default="enumeration")
    s.add_argument("--distinguished", default="auto")
    s.set_defaults(func=cmd_zcheck)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (_Invalid, NotDistinguished, LatticeError, ValueError) as exc:
        _emit({"error": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
