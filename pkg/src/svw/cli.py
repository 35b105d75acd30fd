"""Command line front end.

Exit codes: 0 success or all cases passed, 1 some verification case failed,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .diagrams import DiagramError, DottedDiagram, count_basis, diagram_from_json, enumerate_basis, render
from .engine import normal_form
from .superlin import SignatureError
from .words import WordError, parse_word

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SUITES = ("relations", "loops", "dotslide", "flip", "counting", "independence", "presentation", "centre", "corpus")


class UsageError(Exception):
    pass


def load_diagram(text: str) -> DottedDiagram:
    """Parse and validate diagram JSON (inline text or @file)."""
    if text.startswith("@"):
        with open(text[1:], encoding="utf-8") as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DiagramError(f"invalid JSON: {exc}") from None
    return diagram_from_json(obj)


def _hbar(value: str) -> Optional[Fraction]:
    if value in ("sym", "symbolic"):
        return None
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad --hbar value {value!r}; use sym, 0 or 1") from None


def _ints(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected a comma separated list of integers, got {text!r}") from None


def _triples(text: str):
    out = []
    for chunk in text.split(";"):
        vals = _ints(chunk)
        if len(vals) != 3:
            raise UsageError(f"expected a,b,k triples separated by ';', got {chunk!r}")
        out.append(tuple(vals))
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="svw", description="Affine VW supercategory toolkit.")
    sub = p.add_subparsers(dest="cmd", required=True)

    for name in ("count", "basis"):
        q = sub.add_parser(name, help=f"{name} the normal dotted diagrams of Hom(a,b) with k dots")
        q.add_argument("--a", type=int, required=True)
        q.add_argument("--b", type=int, required=True)
        q.add_argument("--k", type=int, required=True)
        if name == "basis":
            q.add_argument("--json", action="store_true", help="one JSON object per line")

    q = sub.add_parser("nf", help="normal form of a word")
    q.add_argument("--source", type=int, required=True)
    q.add_argument("--hbar", default="sym")
    q.add_argument("word")

    q = sub.add_parser("keyvec", help="key vectors v_d, w_d of a diagram")
    q.add_argument("--diagram", required=True, help="diagram JSON or @file")
    q.add_argument("--n", type=int)
    q.add_argument("--pairing", action="store_true", help="also evaluate <w_d | Phi_n(d) v_d>")

    q = sub.add_parser("verify", help="run a verification suite")
    q.add_argument("suite", choices=SUITES)
    q.add_argument("--n", type=int, default=3)
    q.add_argument("--m", default="0,1", help="relations: comma separated list of m values")
    q.add_argument("--a-max", type=int)
    q.add_argument("--b-max", type=int)
    q.add_argument("--kmax", type=int)
    q.add_argument("--lmax", type=int)
    q.add_argument("--cases", help="independence: 'a,b,k;a,b,k;...'")
    q.add_argument("--dmax", type=int, default=4, help="centre: degree cap")
    q.add_argument("--extended", action="store_true", help="centre: add a=3, D=6")
    q.add_argument("--count", type=int, default=200, help="corpus size")
    q.add_argument("--seed", type=int, default=20240531)
    q.add_argument("--corrupt-sigma", action="store_true", help="negative control: flip the sign of sigma")

    q = sub.add_parser("centre", help="centralizer of A_t in degrees <= D")
    q.add_argument("--a", type=int, default=2)
    q.add_argument("--D", type=int, default=4)
    q.add_argument("--t", default="1")

    q = sub.add_parser("render", help="draw a diagram")
    q.add_argument("--format", choices=("ascii", "tikz", "png"), default="ascii")
    q.add_argument("--diagram", required=True, help="diagram JSON or @file")
    q.add_argument("--out", help="output file (required for png)")

    return p


def _run_suite(args):
    from . import center, verify

    s = args.suite
    if s == "relations":
        a_max = args.a_max if args.a_max is not None else 3
        rep = verify.VerificationReport("relations")
        for m in _ints(args.m):
            rep.cases += verify.check_relations(n=args.n, m=m, a_max=a_max, corrupt_sigma=args.corrupt_sigma).cases
        return rep
    if s == "loops":
        return verify.check_loops(args.kmax if args.kmax is not None else 3, args.lmax if args.lmax is not None else 3, n=args.n)
    if s == "dotslide":
        return verify.check_dotslide(args.kmax if args.kmax is not None else 3)
    if s == "flip":
        return verify.check_flip(args.a_max if args.a_max is not None else 4, args.kmax if args.kmax is not None else 2)
    if s == "counting":
        return verify.check_counting(
            args.a_max if args.a_max is not None else 6,
            args.b_max if args.b_max is not None else 6,
            args.kmax if args.kmax is not None else 4,
        )
    if s == "independence":
        if args.cases:
            return verify.check_independence(_triples(args.cases))
        return verify.check_independence()
    if s == "presentation":
        return center.check_presentation(args.a_max if args.a_max is not None else 3)
    if s == "centre":
        return center.check_centre(D_max=args.dmax, extended=args.extended)
    return verify.check_corpus(count=args.count, seed=args.seed)


def _dispatch(args, out) -> int:
    if args.cmd == "count":
        out.write(f"{count_basis(args.a, args.b, args.k)}\n")
        return EXIT_OK
    if args.cmd == "basis":
        for d in enumerate_basis(args.a, args.b, args.k):
            out.write((d.to_json() if args.json else str(d)) + "\n")
        return EXIT_OK
    if args.cmd == "nf":
        w = parse_word(args.word, args.source)
        out.write(normal_form(w, _hbar(args.hbar)).to_json() + "\n")
        return EXIT_OK
    if args.cmd == "keyvec":
        from .verify import graded_pairing, key_vectors, tensor_str

        d = load_diagram(args.diagram)
        v, w = key_vectors(d, args.n)
        n = args.n if args.n is not None else max(2, max((abs(x) for x in v + w), default=0))
        obj = {"n": n, "v": tensor_str(v), "w": tensor_str(w), "vLabels": list(v), "wLabels": list(w)}
        if args.pairing:
            obj["pairing"] = repr(graded_pairing(d, v, w, n))
        out.write(json.dumps(obj) + "\n")
        return EXIT_OK
    if args.cmd == "verify":
        rep = _run_suite(args)
        out.write(rep.to_json() + "\n")
        return EXIT_OK if rep.ok else EXIT_FAIL
    if args.cmd == "centre":
        from .center import centre_report

        if args.a < 2:
            raise UsageError("centre needs --a >= 2")
        t = _hbar(args.t)
        if t is None:
            raise UsageError("centre needs a rational --t")
        out.write(json.dumps(centre_report(args.a, args.D, t)) + "\n")
        return EXIT_OK
    if args.cmd == "render":
        d = load_diagram(args.diagram)
        if args.format == "png":
            if not args.out:
                raise UsageError("png output needs --out")
            from .render import render_png

            render_png(d, args.out)
            return EXIT_OK
        text = render(d, args.format)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        else:
            out.write(text)
        return EXIT_OK
    raise UsageError(f"unknown command {args.cmd}")


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return _dispatch(args, out)
    except (UsageError, DiagramError, WordError, SignatureError, ValueError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
