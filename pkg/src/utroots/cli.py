"""Command-line entry point: ``utroots {embed,root,wreath,class,verify}``.

Exit codes: 0 ok, 2 input error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any

import numpy as np

from .embeddings import (
    VerificationReport,
    extend_hom,
    phi_closed_form,
    phi_fr,
    psi_closed_form,
    psi_lc,
    simple_embedding,
    theta,
    verify_embedding,
)
from .nilpotency import SizeLimit, default_size_bound, wreath_class_check
from .prime_field import FieldError, check_prime
from .roots import coprime_multipliers, qth_root, transvection_root, verify_root
from .unitriangular import (
    MatrixFormatError,
    UTMatrix,
    format_matrix,
    iter_ut,
    parse_matrices,
    parse_matrix,
    random_ut,
    transvection,
    ut_pow,
)
from .wreath import (
    WreathElement,
    build_wreath_embedding,
    equiv_check,
    lemma42,
    tau,
    verify_wreath_conditions,
)

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 2, 3
DEFAULT_SEED = 20240229


class InputError(Exception):
    pass


class Emitter:
    """Collects output once and renders it as text or JSON with the same fields."""

    def __init__(self):
        self.items: list[tuple[str, Any]] = []

    def value(self, name: str, v: Any) -> None:
        self.items.append((name, v))

    def matrix(self, name: str, a: UTMatrix) -> None:
        self.items.append((name, a))

    def report(self, name: str, rep: VerificationReport) -> None:
        self.items.append((name, rep))

    def text(self) -> str:
        out = []
        for name, v in self.items:
            if isinstance(v, UTMatrix):
                out.append(f"{name}:")
                out.append(format_matrix(v).rstrip("\n"))
            elif isinstance(v, VerificationReport):
                out.append(f"{name}: {'pass' if v.ok else 'FAIL'}")
                out.extend("  " + line for line in v.lines())
            else:
                out.append(f"{name}: {v}")
        return "\n".join(out) + "\n"

    def json(self) -> str:
        def conv(v):
            if isinstance(v, UTMatrix):
                return v.rows()
            if isinstance(v, VerificationReport):
                return v.as_dict()
            return v

        return json.dumps({name: conv(v) for name, v in self.items}, indent=2) + "\n"


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _read_matrix(path: str) -> UTMatrix:
    try:
        return parse_matrix(_read_text(path))
    except MatrixFormatError as exc:
        raise InputError(f"{path}: {exc}") from None


def _read_wreath(path: str, q: int) -> WreathElement:
    lines = [ln for ln in _read_text(path).splitlines() if ln.strip()]
    if not lines:
        raise InputError(f"{path}: empty wreath element")
    try:
        k = int(lines[0])
    except ValueError:
        raise InputError(f"{path}: first line must be the shift k, got {lines[0]!r}") from None
    try:
        mats = parse_matrices("\n".join(lines[1:]))
    except MatrixFormatError as exc:
        raise InputError(f"{path}: {exc}") from None
    if len(mats) != q:
        raise InputError(f"{path}: expected {q} base matrices, got {len(mats)}")
    try:
        return WreathElement(k % q, tuple(mats))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise InputError(f"missing required option --{name}")


def _check_params(n=None, p=None, s=None):
    if p is not None:
        try:
            check_prime(p)
        except FieldError as exc:
            raise InputError(str(exc)) from None
    if n is not None and n < 2:
        raise InputError(f"need n >= 2, got {n}")
    if s is not None and s < 1:
        raise InputError(f"need s >= 1, got {s}")


# subcommands

def cmd_embed(args, out: Emitter) -> int:
    a = _read_matrix(args.apply) if args.apply else None
    if a is not None:
        args.n = args.n if args.n is not None else a.n
        args.p = args.p if args.p is not None else a.p
        if (a.n, a.p) != (args.n, args.p):
            raise InputError(f"matrix is in UT_{a.n}(F_{a.p}), options say UT_{args.n}(F_{args.p})")
    _require(args, "n", "p")
    _check_params(args.n, args.p, args.s)
    if args.kind == "simple":
        if not args.breakpoints:
            raise InputError("--kind simple needs --breakpoints")
        try:
            bps = [int(b) for b in args.breakpoints.split(",")]
            emb = simple_embedding(args.n, args.p, bps)
        except ValueError as exc:
            raise InputError(f"bad breakpoints: {exc}") from None
    else:
        emb = {"fr": phi_fr, "lc": psi_lc, "theta": theta}[args.kind](args.n, args.p, args.s)
    out.value("embedding", emb.name)
    out.value("source", f"UT_{emb.source_n}(F_{emb.p})")
    out.value("target", f"UT_{emb.target_m}(F_{emb.p})")
    for i, g in enumerate(emb.images, start=1):
        out.matrix(f"image of t_({i},{i + 1})", g)
    rep = verify_embedding(emb)
    out.report("verification", rep)
    status = EXIT_OK if rep.ok else EXIT_VERIFY
    if a is not None:
        image = extend_hom(emb, a)
        out.matrix("image of a", image)
        closed = {"fr": phi_closed_form, "lc": psi_closed_form}.get(args.kind)
        if closed is not None:
            agree = closed(args.n, args.p, args.s, a) == image
            out.value("closed form agrees", "yes" if agree else "NO")
            if not agree:
                status = EXIT_VERIFY
    return status


def cmd_root(args, out: Emitter) -> int:
    a = _read_matrix(args.matrix)
    _check_params(a.n, a.p, args.s)
    w = qth_root(a, args.s, args.variant)
    out.value("variant", args.variant)
    out.value("q", w.q)
    out.value("m", w.m)
    out.matrix("image of a", w.target_image)
    out.matrix("x", w.x)
    n = a.n
    labels = range(n - 1, 0, -1) if args.variant == "fr" else range(1, n)
    for k, f in zip(labels, w.factors):
        out.matrix(f"x_{k}", f)
    rep = verify_root(w)
    out.report("verdict", rep)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_wreath(args, out: Emitter) -> int:
    _require(args, "n", "p")
    _check_params(args.n, args.p, args.s)
    data = build_wreath_embedding(args.n, args.p, args.s)
    out.value("q", data.q)
    out.value("m", data.m)
    out.matrix("c", data.c)
    for i in range(data.q):
        for k in range(data.n - 1):
            out.matrix(f"g_({i + 1},{k + 1})", data.g[i][k])
    rep = verify_wreath_conditions(data)
    out.report("conditions", rep)
    if args.element:
        w = _read_wreath(args.element, data.q)
        if (w.n, w.p) != (data.n, data.p):
            raise InputError(f"wreath element lives over UT_{w.n}(F_{w.p})")
        out.matrix("tau of element", tau(data, w))
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_class(args, out: Emitter) -> int:
    _require(args, "n", "p")
    _check_params(args.n, args.p, args.s)
    bound = args.size_bound if args.size_bound is not None else default_size_bound()
    try:
        rep = wreath_class_check(args.n, args.p, args.s, bound)
    except SizeLimit as exc:
        raise InputError(str(exc)) from None
    out.value("group", f"UT_{args.n}(F_{args.p}) wr C_{args.p ** args.s}")
    out.value("formula q(n-1)", rep.formula)
    out.value("shield", rep.shield)
    out.value("brute force", rep.brute if rep.brute is not None else f"skipped ({rep.skipped})")
    out.value("comparison", rep.line())
    out.value("agree", "yes" if rep.agree else "NO")
    return EXIT_OK if rep.agree else EXIT_VERIFY


def _suite_lemma42(args, out):
    _require(args, "p", "s")
    _check_params(p=args.p, s=args.s)
    lm, rep = lemma42(args.p, args.s)
    out.value("q", lm.q)
    out.report("lemma42", rep)
    return rep.ok


def _suite_equiv(args, out):
    _require(args, "n", "p", "s")
    _check_params(args.n, args.p, args.s)
    rep = equiv_check(args.n, args.p, args.s, args.samples, args.seed)
    out.report("equiv", rep)
    return rep.ok


def _suite_embedding(args, out):
    _require(args, "n", "p", "s")
    _check_params(args.n, args.p, args.s)
    ok = True
    for name, ctor in (("fr", phi_fr), ("lc", psi_lc), ("theta", theta)):
        rep = verify_embedding(ctor(args.n, args.p, args.s))
        out.report(f"embedding {name}", rep)
        ok &= rep.ok
    return ok


def _suite_roots(args, out):
    _require(args, "n", "p", "s")
    _check_params(args.n, args.p, args.s)
    n, p, s = args.n, args.p, args.s
    if p ** (n * (n - 1) // 2) <= 729:
        elements = list(iter_ut(n, p))
    else:
        rng = np.random.default_rng(args.seed)
        elements = [random_ut(n, p, rng) for _ in range(args.samples)]
    ok = True
    for variant in ("fr", "lc"):
        rep = VerificationReport({"roots": True})
        for a in elements:
            r = verify_root(qth_root(a, s, variant))
            if not r.ok:
                rep.record("roots", False, f"a = {a.rows()}: {'; '.join(r.witnesses.values())}")
        out.value(f"{variant} elements checked", len(elements))
        out.report(f"roots {variant}", rep)
        ok &= rep.ok
    return ok


def _suite_transvection_root(args, out):
    _require(args, "n", "p", "s")
    _check_params(args.n, args.p, args.s)
    n, p, s = args.n, args.p, args.s
    q = p**s
    rep = VerificationReport({"transvection roots": True})
    count = 0
    for r in coprime_multipliers(p):
        for i in range(1, n):
            for j in range(i + 1, n + 1):
                for gamma in range(p):
                    emb, x = transvection_root(n, p, s, r, i, j, gamma)
                    target = extend_hom(emb, transvection(n, p, i, j, gamma))
                    count += 1
                    if ut_pow(x, q * r) != target:
                        rep.record("transvection roots", False, f"r={r}, t_({i},{j})({gamma})")
    out.value("cases", count)
    out.report("transvection-root", rep)
    return rep.ok


def _suite_wreath(args, out):
    _require(args, "n", "p", "s")
    _check_params(args.n, args.p, args.s)
    rep = verify_wreath_conditions(build_wreath_embedding(args.n, args.p, args.s))
    out.report("wreath conditions", rep)
    return rep.ok


SUITES = {
    "lemma42": _suite_lemma42,
    "equiv": _suite_equiv,
    "embedding": _suite_embedding,
    "roots": _suite_roots,
    "transvection-root": _suite_transvection_root,
    "wreath": _suite_wreath,
}


def cmd_verify(args, out: Emitter) -> int:
    out.value("suite", args.suite)
    out.value("seed", args.seed)
    ok = SUITES[args.suite](args, out)
    out.value("result", "pass" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", type=int, help="source dimension")
    common.add_argument("-p", type=int, help="prime")
    common.add_argument("-s", type=int, default=1, help="root exponent, q = p^s (default 1)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("-o", "--output", default="-", help="output path (default stdout)")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)

    parser = argparse.ArgumentParser(prog="utroots", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("embed", parents=[common], help="generator images of an embedding")
    p.add_argument("--kind", choices=("simple", "fr", "lc", "theta"), default="fr")
    p.add_argument("--breakpoints", help="comma-separated k_1=1 < ... < k_n=m (simple only)")
    p.add_argument("--apply", metavar="FILE", help="matrix to map ('-' for stdin)")
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("root", parents=[common], help="q-th root of a matrix")
    p.add_argument("matrix", help="matrix file ('-' for stdin)")
    p.add_argument("--variant", choices=("fr", "lc"), default="fr")
    p.set_defaults(func=cmd_root)

    p = sub.add_parser("wreath", parents=[common], help="wreath product embedding data")
    p.add_argument("--element", metavar="FILE", help="wreath element: shift line, then q matrices")
    p.set_defaults(func=cmd_wreath)

    p = sub.add_parser("class", parents=[common], help="nilpotency class of UT_n wr C_q")
    p.add_argument("--size-bound", type=int, help="element bound for the brute-force leg")
    p.set_defaults(func=cmd_class)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = Emitter()
    try:
        status = args.func(args, out)
    except InputError as exc:
        print(f"utroots: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    rendered = out.json() if args.format == "json" else out.text()
    if args.output == "-":
        sys.stdout.write(rendered)
    else:
        with open(args.output, "w") as fh:
            fh.write(rendered)
    return status


if __name__ == "__main__":
    sys.exit(main())
