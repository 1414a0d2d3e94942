"""Command-line front end.

Exit status: 0 consistent / success, 1 no model up to the bound (or no
tiling, or a failed verification), 2 usage, parse or file errors and
deadline overruns.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import checks
from .c2 import render_tbox_translation
from .generators import (
    domino_tcbox, parse_domino_spec, render_tiling, tile_torus, torus_tcbox, torus_tibox,
)
from .model_finder import ConsistentWitness, DeadlineExceeded, SearchOptions, find_model
from .reductions import internalise, phi, singleton_cardinalities, singleton_ledger
from .semantics import extension, parse_interpretation, render_interpretation
from .syntax import CardRestriction, ParseError, Signature, TcBox, TiBox, parse_concept, parse_tbox, render, signature_of

EXIT_OK, EXIT_NO_MODEL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None


def _tbox(path: str):
    return parse_tbox(_read(path))


def cmd_parse(args, out) -> int:
    out.write(render(_tbox(args.file)))
    return EXIT_OK


def cmd_check(args, out) -> int:
    t = _tbox(args.file)
    opts = SearchOptions(
        max_domain_size=args.bound,
        una=args.una,
        deadline=args.deadline,
        extra_signature=Signature(individuals=frozenset(args.individual)),
    )
    verdict = find_model(t, opts)
    if isinstance(verdict, ConsistentWitness):
        out.write(f"# consistent: model with {verdict.size} elements\n")
        out.write(render_interpretation(verdict.interpretation))
        return EXIT_OK
    out.write(f"no model up to {verdict.bound}\n")
    return EXIT_NO_MODEL


def cmd_translate(args, out) -> int:
    t = _tbox(args.file)
    if args.to in ("c2", "nominals") and not isinstance(t, TcBox):
        raise UsageError(f"--to {args.to} expects cardinality restrictions")
    if args.to in ("cardinalities", "internalise") and not isinstance(t, TiBox):
        raise UsageError(f"--to {args.to} expects GCIs")
    if args.to == "c2":
        if signature_of(t).individuals:
            raise UsageError("--to c2 is defined for nominal-free input only")
        out.write(render_tbox_translation(t))
    elif args.to == "nominals":
        if signature_of(t).individuals:
            print("warning: input already uses nominals; the result is ALCQIO", file=sys.stderr)
        box, ledger = phi(t)
        out.write("".join(line + "\n" for line in ledger.comments()))
        out.write(render(box))
    elif args.to == "cardinalities":
        for o, a in sorted(singleton_ledger(t).items()):
            out.write(f"# nominal {o} -> concept {a}\n")
        out.write(render(singleton_cardinalities(t)))
    else:
        c = internalise(t, reach_nominals=not args.literal)
        out.write("# spy role _spy, spy point _i (suffixed with _ if taken)\n")
        out.write(render(TcBox([CardRestriction(">=", 1, c)])))
    return EXIT_OK


def cmd_generate(args, out) -> int:
    gadget = args.gadget
    if gadget == "torus":
        gadget = f"torus-{args.style}"
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    if gadget == "torus-card":
        out.write(render(torus_tcbox(args.n)))
    elif gadget == "torus-gci":
        out.write(render(torus_tibox(args.n)))
    else:
        if not args.spec:
            raise UsageError("generate domino needs --spec")
        d, w = parse_domino_spec(_read(args.spec))
        out.write(render(domino_tcbox(args.n, d, w)))
    return EXIT_OK


def cmd_tile(args, out) -> int:
    d, w = parse_domino_spec(_read(args.spec))
    if args.s < 1 or args.t < 1:
        raise UsageError("--s and --t must be positive")
    tiling = tile_torus(d, args.s, args.t, w)
    if tiling is None:
        out.write("no tiling\n")
        return EXIT_NO_MODEL
    out.write(render_tiling(tiling))
    return EXIT_OK


def cmd_eval(args, out) -> int:
    i = parse_interpretation(_read(args.model))
    c = parse_concept(args.concept)
    out.write("{" + ", ".join(str(a) for a in sorted(extension(i, c))) + "}\n")
    return EXIT_OK


def cmd_verify(args, out) -> int:
    seeded = {"phi", "internalise", "sizes", "c2"}
    names = args.only or list(checks.ALL_CHECKS)
    ok = True
    for name in names:
        fn = checks.ALL_CHECKS[name]
        result = fn(seed=args.seed) if name in seeded and args.seed is not None else fn()
        out.write(result.line() + "\n")
        for f in result.failures:
            out.write(f"    {f}\n")
        out.flush()
        ok &= result.passed
    if args.expensive:
        result = checks.torus_shape(2)
        out.write(result.line() + "\n")
        ok &= result.passed
    return EXIT_OK if ok else EXIT_NO_MODEL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="dlreduce",
        description="Cardinality restrictions and nominals in ALCQI/ALCQIO: bounded model search, "
        "translations and torus/domino gadgets.",
        epilog="exit status: 0 consistent or success, 1 no model up to the bound / no tiling / "
        "failed check, 2 error or deadline exceeded",
    )
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", help="parse a TBox file and print it in canonical form")
    s.add_argument("file", help="TBox file, or - for stdin")
    s.set_defaults(run=cmd_parse)

    s = sub.add_parser("check", help="search for a model up to a domain size")
    s.add_argument("file")
    s.add_argument("--bound", type=int, default=4, help="largest domain size to try (default 4)")
    s.add_argument("--una", action="store_true", help="distinct individual names denote distinct elements")
    s.add_argument("--deadline", type=float, default=None, metavar="SECS")
    s.add_argument("--individual", action="append", default=[], metavar="NAME",
                   help="extra individual name to interpret (repeatable; matters under --una)")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("translate", help="translate a TBox")
    s.add_argument("file")
    s.add_argument("--to", required=True, choices=["c2", "nominals", "cardinalities", "internalise"])
    s.add_argument("--literal", action="store_true",
                   help="internalise without forcing nominals into the spy point's reach")
    s.set_defaults(run=cmd_translate)

    s = sub.add_parser("generate", help="print a torus or domino TBox")
    s.add_argument("gadget", choices=["torus", "torus-card", "torus-gci", "domino"])
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--style", choices=["card", "gci"], default="card")
    s.add_argument("--spec", default=None, help="domino spec file (tiles/h/v/init lines)")
    s.set_defaults(run=cmd_generate)

    s = sub.add_parser("tile", help="tile an s x t torus by backtracking")
    s.add_argument("--spec", required=True)
    s.add_argument("--s", type=int, required=True)
    s.add_argument("--t", type=int, required=True)
    s.set_defaults(run=cmd_tile)

    s = sub.add_parser("eval", help="print the extension of a concept in an interpretation")
    s.add_argument("model", help="interpretation file")
    s.add_argument("concept", help="concept text")
    s.set_defaults(run=cmd_eval)

    s = sub.add_parser("verify", help="run the property checks")
    s.add_argument("--seed", type=int, default=None, help="seed for the random corpora")
    s.add_argument("--expensive", action="store_true", help="also check the 16-element torus")
    s.add_argument("--only", action="append", choices=sorted(checks.ALL_CHECKS), default=None)
    s.set_defaults(run=cmd_verify)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_OK
    if args.command == "check" and args.bound < 1:
        print("error: --bound must be at least 1", file=sys.stderr)
        return EXIT_ERROR
    try:
        return args.run(args, out)
    except (DeadlineExceeded, UsageError, ParseError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
