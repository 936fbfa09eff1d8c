"""Command-line interface.

Exit codes: 0 verdict computed, 1 not found or failed, 2 usage error,
3 scale refusal.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .catalog import build_catalog
from .certify import validate_certificate
from .errors import HypothesisError, PreconditionError, ScaleRefusal, UsageError
from .flats import atlas_certificate
from .io import dumps, emit_matroid, loads, parse_matroid
from .lemmas import (SearchParams, copunctual_census, kelly2_trichotomy, lift_affine, restriction_trichotomy,
                     unavoidable_search, verify_reid1, verify_reid2, verify_reid_characteristic)
from .matroid import Matroid, mask_of
from .ramsey import cap_certificate, small_hj_report, small_ramsey_report, theorem_census

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SCALE = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def load_matroid(ref: str) -> Matroid:
    """A MatroidText file path, or a catalog spec such as ``pg:2,2``."""
    path = Path(ref)
    if path.is_file():
        return parse_matroid(path.read_text())
    if ":" in ref:
        return build_catalog(ref)
    raise UsageError(f"no matroid file or catalog spec {ref!r}")


def _elements(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad element list {text!r}") from None


def _lines(M: Matroid, apex: int, text: str | None):
    if text is None:
        lines = M.lines_through(apex)
        if len(lines) != 3:
            raise UsageError(f"{len(lines)} lines pass through {apex}; give --lines")
        return lines
    parts = text.split(";")
    if len(parts) != 3:
        raise UsageError("--lines needs three ';'-separated element lists")
    return [mask_of(_elements(s)) for s in parts]


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------- subcommands


def cmd_catalog(args):
    _emit(args, emit_matroid(build_catalog(args.spec)))
    return EXIT_OK


def cmd_classify(args):
    M = load_matroid(args.matroid)
    _emit(args, dumps(atlas_certificate(M, args.k)))
    return EXIT_OK


def cmd_find(args):
    M = load_matroid(args.matroid)
    res = unavoidable_search(M, args.k, args.strategy)
    _emit(args, dumps(res.certificate(M)))
    return EXIT_OK if res.found else EXIT_FAIL


def cmd_ramsey(args):
    if args.affine:
        rep = small_hj_report(args.q, args.t, args.colors, args.max_rank)
    else:
        rep = small_ramsey_report(args.q, args.t, args.max_rank, args.colors)
    _emit(args, dumps(rep.to_json()))
    return EXIT_OK


def cmd_cap(args):
    M = load_matroid(args.matroid)
    _emit(args, dumps(cap_certificate(M, args.k)))
    return EXIT_OK


def cmd_lemma(args):
    lemma = args.lemma
    if args.census is not None:
        if lemma != "reid1":
            raise UsageError("--census applies to reid1")
        rep = copunctual_census(args.census)
        _emit(args, dumps(rep.to_json()))
        return EXIT_OK if not rep.exceptions else EXIT_FAIL
    if args.matroid is None:
        raise UsageError("a matroid is required")
    M = load_matroid(args.matroid)
    if lemma in ("kelly", "reid1"):
        lines = _lines(M, args.apex, args.lines)
        if lemma == "kelly":
            cert = verify_reid_characteristic(M, args.apex, *lines).certificate(M)
            ok = True
        else:
            verdict = verify_reid1(M, args.apex, *lines)
            cert, ok = verdict.certificate(M, args.apex, lines), verdict.holds
    elif lemma == "reid2":
        rep = verify_reid2(M, args.element)
        cert, ok = rep.certificate(M), bool(rep.holds)
    elif lemma in ("kelly2", "restriction"):
        if args.k is None or args.t is None or args.n is None:
            raise UsageError(f"{lemma} needs --k, --t and --n")
        params = SearchParams(M.p, args.k, args.t, args.n)
        if lemma == "kelly2":
            try:
                out = kelly2_trichotomy(M, params)
            except PreconditionError as exc:
                _emit(args, dumps({"precondition_failed": str(exc), "witness": exc.witness}))
                return EXIT_FAIL
        else:
            out = restriction_trichotomy(M, params)
        cert, ok = out.certificate(M), out.branch != "exhausted"
    else:
        if args.k is None:
            raise UsageError("affine needs --k")
        J = mask_of(_elements(args.J) or [])
        A = _elements(args.A)
        res = lift_affine(M, J, args.k, None if A is None else mask_of(A))
        cert, ok = res.certificate(M), res.success
    _emit(args, dumps(cert))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_enumerate(args):
    rep = theorem_census(args.r, args.k, threads=args.threads, samples=args.samples, seed=args.seed)
    _emit(args, dumps(rep.to_json()))
    return EXIT_OK


def cmd_validate(args):
    M = load_matroid(args.matroid)
    try:
        cert = loads(Path(args.certificate).read_text())
    except ValueError as exc:
        raise UsageError(f"certificate is not JSON: {exc}") from None
    res = validate_certificate(M, cert)
    _emit(args, "valid\n" if res else f"invalid: {res.detail}\n")
    return EXIT_OK if res else EXIT_FAIL


def _default_threads() -> int:
    raw = os.environ.get("FLATFORGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=_default_threads())
    common.add_argument("--out", metavar="PATH")

    ap = _Parser(prog="flatforge", description="Unavoidable flats in GF(p)-represented matroids.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("catalog", parents=[common], help="emit a named geometry")
    s.add_argument("spec")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("classify", parents=[common], help="tag every rank-k flat")
    s.add_argument("matroid")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("find-unavoidable", parents=[common], help="search for an unavoidable rank-k flat")
    s.add_argument("matroid")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--strategy", choices=["direct", "proof"], default="direct")
    s.set_defaults(func=cmd_find)

    s = sub.add_parser("ramsey", parents=[common], help="small geometric Ramsey report")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--colors", type=int, default=2)
    s.add_argument("--max-rank", type=int, required=True)
    s.add_argument("--affine", action="store_true", help="colour affine instead of projective geometries")
    s.set_defaults(func=cmd_ramsey)

    s = sub.add_parser("cap", parents=[common], help="largest set containing no rank-k flat")
    s.add_argument("matroid")
    s.add_argument("--k", type=int, required=True)
    s.set_defaults(func=cmd_cap)

    s = sub.add_parser("verify-lemma", parents=[common], help="run a lemma and emit its certificate")
    s.add_argument("lemma", choices=["kelly", "reid1", "reid2", "kelly2", "affine", "restriction"])
    s.add_argument("matroid", nargs="?")
    s.add_argument("--census", type=int, metavar="P",
                   help="reid1 only: check every copunctual configuration in PG(2, P)")
    s.add_argument("--apex", type=int, default=0)
    s.add_argument("--lines", help="three ';'-separated element lists")
    s.add_argument("--element", type=int, default=0)
    s.add_argument("--k", type=int)
    s.add_argument("--t", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--J", help="comma-separated independent set")
    s.add_argument("--A", help="comma-separated affine set in M/J")
    s.set_defaults(func=cmd_lemma)

    s = sub.add_parser("enumerate-check", parents=[common], help="census of simple binary matroids")
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--samples", type=int, help="sample size at rank 5")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("validate", parents=[common], help="re-check a certificate")
    s.add_argument("certificate")
    s.add_argument("matroid")
    s.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScaleRefusal as exc:
        print(f"flatforge: too large: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except (UsageError, HypothesisError, OSError) as exc:
        print(f"flatforge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
