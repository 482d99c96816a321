"""Command-line front end and the batch verification harness.

Exit statuses: 0 success or confirmed, 1 refuted, 2 usage error, 3 resource
limit. With ``--format json`` exactly one JSON document goes to stdout, error
reports included. Wall-clock timings only appear in certificate files so that
stdout is byte-identical across runs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable

from . import alexander
from .errors import Caps, KFiltrationError, NoClaim, NonTermination, ResourceLimit
from .families import (
    CONFIRMED,
    REFUTED,
    RESOURCE_LIMITED,
    BigCable,
    IteratedCable,
    KFamily,
    SFamily,
    TorusKnot,
    VerificationReport,
    _record,
    _run,
    build_T,
    claimed_decomposition,
    construction,
    final_form_ok,
    model_staircase,
    verify_lemma,
    verify_proposition,
    witness_theorem,
)
from .filtcx import FilteredComplex, dual
from .invariants import compare, dominates_bounded, invariants
from .laurent import LaurentPoly, format_poly
from .staircase import Staircase, parse_stairsum, stairsum_to_complex, to_complex

EXIT_OK, EXIT_REFUTED, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
_EXIT_OF_VERDICT = {CONFIRMED: EXIT_OK, REFUTED: EXIT_REFUTED, RESOURCE_LIMITED: EXIT_RESOURCE}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- argument helpers ----------------------------------------------------------------


def _ints(text: str) -> list[int]:
    try:
        return [int(a) for a in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers, got {text!r}") from None


def _word(text: str) -> alexander.CableWord:
    """``"2,3;3,7"`` -> ``T(2,3)`` cabled by ``(3,7)``."""
    stages = []
    for part in text.split(";"):
        pq = _ints(part)
        if len(pq) != 2:
            raise argparse.ArgumentTypeError(f"each stage needs p,q: {part!r}")
        stages.append(tuple(pq))
    return alexander.CableWord(tuple(stages))


def _pairs(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(";"):
        pq = _ints(part)
        if len(pq) != 2:
            raise argparse.ArgumentTypeError(f"each pair needs n,p: {part!r}")
        out.append((pq[0], pq[1]))
    return out


def _require(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing " + ", ".join("-" + n if len(n) == 1 else "--" + n for n in missing))


def _knot(args):
    kind = args.kind
    if kind == "torus":
        _require(args, "p", "q")
        return TorusKnot(args.p, args.q)
    if kind == "cable":
        _require(args, "word")
        return IteratedCable(args.word)
    if kind == "k":
        _require(args, "n", "p")
        return KFamily(args.n, args.p)
    if kind == "s":
        _require(args, "q")
        return SFamily(args.q)
    _require(args, "n", "p")
    return BigCable(args.n, args.p)


def _caps(args) -> Caps:
    return Caps.from_env(max_generators=args.max_generators, max_n=args.max_n, claim_budget=args.budget)


# -- subcommands: each returns (exit status, json document, text) --------------------


def _poly_doc(p: LaurentPoly) -> tuple[dict, str]:
    return p.to_json(), format_poly(p)


def cmd_alexander(args):
    if args.kind == "torus":
        _require(args, "p", "q")
        poly = alexander.torus_alexander(args.p, args.q)
    elif args.kind == "cable":
        _require(args, "word")
        poly = alexander.iterated_cable_alexander(args.word)
    else:
        _require(args, "form", "p")
        if args.form == "np1":
            _require(args, "n")
            poly = alexander.closed_form_np1(args.p, args.n)
        elif args.form == "pcable":
            poly = alexander.closed_form_pcable(args.p)
        else:
            poly = alexander.closed_form_2pm1(args.p)
    doc, text = _poly_doc(poly)
    return EXIT_OK, doc, text


def cmd_staircase(args):
    k = _knot(args)
    if args.claimed:
        s = claimed_decomposition(k)
        return EXIT_OK, s.to_json(), str(s)
    st = model_staircase(k)
    return EXIT_OK, st.to_json(), str(st)


def _complex_of(text: str, caps: Caps) -> FilteredComplex:
    return stairsum_to_complex(parse_stairsum(text), caps.max_generators)


def cmd_complex(args):
    c = _complex_of(args.sum, _caps(args))
    if args.dual:
        c = dual(c)
    lines = [
        f"generators {len(c)}",
        f"arrows {c.n_arrows}",
        f"alexander range {int(c.alexander.min())}..{int(c.alexander.max())}" if len(c) else "alexander range empty",
        f"digest {c.digest()}",
    ]
    return EXIT_OK, c.to_json(), "\n".join(lines)


def cmd_invariants(args):
    c = _complex_of(args.sum, _caps(args))
    rec = invariants(c)
    doc = rec.to_json()
    lines = [f"tau {rec.tau}", f"nu {rec.nu}", f"nu' {rec.nu_prime}", f"epsilon {rec.epsilon}"]
    if args.basis:
        from .basis import epsilon_by_basis

        try:
            eb = epsilon_by_basis(c)
        except KFiltrationError as exc:
            eb = None
            lines.append(f"epsilon from basis unavailable: {exc}")
        doc["epsilon_by_basis"] = eb
        if eb is not None:
            lines.append(f"epsilon from basis {eb}")
    return EXIT_OK, doc, "\n".join(lines)


def cmd_compare(args):
    caps = _caps(args)
    a, b = _complex_of(args.a, caps), _complex_of(args.b, caps)
    res = compare(a, b, caps.max_generators)
    doc = res.to_json()
    lines = [res.relation]
    if args.dominates:
        ev = dominates_bounded(a, b, caps.max_n, caps.max_generators)
        doc["dominates_evidence"] = ev.to_json()
        lines.append(f"|a| against n|b| for n = 1..{ev.n_max}: " + ", ".join(ev.verdicts))
        lines.append("all greater" if ev.all_greater else f"first non-greater verdict at n = {ev.first_failure}")
    return EXIT_OK, doc, "\n".join(lines)


def _report_text(r: VerificationReport) -> str:
    params = " ".join(f"{k}={json.dumps(v, separators=(',', ':'))}" for k, v in r.params.items())
    lines = [f"{r.claim} {params}: {r.verdict}".replace(" :", ":")]
    for e in r.evidence:
        detail = ", ".join(f"{k}={v}" for k, v in e.items() if k not in ("check", "holds"))
        head = e.get("check", "?")
        if "holds" in e:
            head += ": " + ("holds" if e["holds"] else "FAILS")
        lines.append(f"  {head}" + (f" ({detail})" if detail else ""))
    return "\n".join(lines)


def _write_certificate(directory: Path, r: VerificationReport) -> None:
    directory.mkdir(parents=True, exist_ok=True)
    (directory / r.certificate_name()).write_text(json.dumps(r.to_json(timing=True), indent=2) + "\n")


def _report_result(r: VerificationReport, certs: str | None):
    if certs:
        _write_certificate(Path(certs), r)
    return _EXIT_OF_VERDICT[r.verdict], r.to_json(), _report_text(r)


def build_claim(n: int, p: int, caps: Caps | None = None) -> VerificationReport:
    """``build_T`` as a claim: termination, decreasing q-values and the final form."""

    def body(report, caps):
        try:
            result = build_T(n, p)
        except NonTermination as exc:
            _record(report, "terminates", False, detail=str(exc))
            return
        _record(report, "terminates", True, steps=len(result.steps) - 1)
        A = construction(n, p).A
        _record(report, "final sum is A plus dominated terms", final_form_ok(result, A), final=str(result.final))
        report.evidence.append({"check": "certificate", **result.certificate})

    return _run("build", {"n": n, "p": p}, caps, body)


def cmd_verify(args):
    caps = _caps(args)
    if args.what == "all":
        return verify_all(caps, args.certs or "certs")
    if args.what == "build":
        _require(args, "n", "p")
        return _report_result(build_claim(args.n, args.p, caps), args.certs)
    if args.id is None:
        raise UsageError(f"verify {args.what} needs an identifier")
    if args.what == "prop":
        names = {"3.2": ("n", "p"), "3.3": ("q",), "3.4": ("p", "n"), "3.5": ("p",), "3.6": ("n", "p")}
        if args.id not in names:
            raise NoClaim(f"unknown proposition {args.id!r}")
        _require(args, *names[args.id])
        params = {k: getattr(args, k) for k in names[args.id]}
        return _report_result(verify_proposition(args.id, params, caps), args.certs)
    if args.id in ("2.4", "2.6"):
        _require(args, "a", "b")
        params = {"a": args.a, "b": args.b}
    elif args.id == "2.5":
        _require(args, "a", "c", "d")
        if len(args.a) != 1:
            raise UsageError("lemma 2.5 takes a single integer for -a")
        params = {"a": args.a[0], "c": args.c, "d": args.d}
    elif args.id == "2.8":
        _require(args, "u", "v", "w")
        params = {"u": args.u, "v": args.v, "w": args.w}
    else:
        raise NoClaim(f"unknown lemma {args.id!r}")
    return _report_result(verify_lemma(args.id, params, caps), args.certs)


def cmd_witness(args):
    return _report_result(witness_theorem(args.pairs, _caps(args)), args.certs)


# -- the acceptance grid ---------------------------------------------------------------


def closed_forms_claim(caps: Caps | None = None) -> VerificationReport:
    """Summation formulas against the division formula and cabling product."""

    def body(report, caps):
        bad = [
            [p, n]
            for p in range(2, 9)
            for n in range(1, 6)
            if alexander.closed_form_np1(p, n) != alexander.torus_alexander(p, n * p + 1)
        ]
        _record(report, "T(p, np+1)", not bad, grid="p 2..8, n 1..5", mismatches=bad)
        bad = [
            p
            for p in range(2, 11)
            if alexander.closed_form_pcable(p)
            != alexander.iterated_cable_alexander(alexander.CableWord(((2, 3), (p, p + 1))))
        ]
        _record(report, "(p, p+1) cable of T(2,3)", not bad, grid="p 2..10", mismatches=bad)
        bad = [p for p in range(2, 9) if alexander.closed_form_2pm1(p) != alexander.torus_alexander(p, 2 * p - 1)]
        _record(report, "T(p, 2p-1)", not bad, grid="p 2..8", mismatches=bad)

    return _run("closed-forms", {}, caps, body)


def figure_claim(caps: Caps | None = None) -> VerificationReport:
    """``T(2,5)``: polynomial ``1 - t + t^2 - t^3 + t^4`` and staircase ``(1, 1)``."""

    def body(report, caps):
        poly = alexander.torus_alexander(2, 5)
        expected = LaurentPoly({0: 1, 1: -1, 2: 1, 3: -1, 4: 1})
        _record(report, "alexander polynomial", poly == expected, computed=format_poly(poly))
        st = model_staircase(TorusKnot(2, 5))
        _record(report, "staircase", st == Staircase((1, 1)), computed=str(st))

    return _run("figure-T2_5", {}, caps, body)


GROUND_TRUTH_KNOTS = ((2, 3), (2, 5), (3, 4), (3, 5), (4, 5))


def ground_truth_claim(caps: Caps | None = None) -> VerificationReport:
    def body(report, caps):
        unknot = invariants(FilteredComplex.unknot())
        _record(report, "unknot", unknot.epsilon == 0 and unknot.tau == 0, epsilon=unknot.epsilon)
        for p, q in GROUND_TRUTH_KNOTS:
            c = to_complex(model_staircase(TorusKnot(p, q)))
            rec, rec_dual = invariants(c), invariants(dual(c))
            g = (p - 1) * (q - 1) // 2
            ok = rec.tau == g and rec.epsilon == 1 and rec_dual.epsilon == -1 and rec_dual.tau == -g
            _record(report, f"T({p},{q})", ok, tau=rec.tau, epsilon=rec.epsilon, dual_epsilon=rec_dual.epsilon)

    return _run("ground-truths", {}, caps, body)


def _grid() -> list[Callable[[Caps], VerificationReport]]:
    claims: list[Callable[[Caps], VerificationReport]] = [closed_forms_claim, figure_claim, ground_truth_claim]

    def prop(cid, **params):
        return lambda caps: verify_proposition(cid, params, caps)

    def lemma(cid, **params):
        return lambda caps: verify_lemma(cid, params, caps)

    claims += [prop("3.4", p=p, n=n) for p, n in ((2, 2), (2, 3), (3, 2), (4, 2), (5, 2))]
    claims += [prop("3.5", p=p) for p in range(3, 7)]
    claims += [prop("3.3", q=q) for q in range(4, 10)]
    claims += [prop("3.6", n=n, p=p) for n, p in ((2, 2), (3, 2), (2, 3))]
    claims += [prop("3.2", n=4, p=5)]
    claims += [lemma("2.8", u=u, v=v, w=w) for u, v, w in ((2, 2, 1), (3, 5, 2), (4, 4, 3))]
    claims += [lemma("2.4", a=[1, 3], b=[2, 1]), lemma("2.5", a=2, c=3, d=2), lemma("2.6", a=[1, 4], b=[2, 3])]
    claims += [lambda caps: build_claim(0, 0, caps)]
    claims += [lambda caps: witness_theorem([(0, 0), (0, 1), (1, 0)], caps)]
    return claims


def verify_all(caps: Caps | None = None, certs: str | None = "certs"):
    """Run the acceptance grid in a fixed order, one certificate per claim.

    Exit 1 if anything is refuted, else 3 if anything hit a resource limit.
    """
    caps = caps or Caps.from_env()
    reports = [claim(caps) for claim in _grid()]
    if certs:
        for r in reports:
            _write_certificate(Path(certs), r)
    counts = {v: sum(r.verdict == v for r in reports) for v in (CONFIRMED, REFUTED, RESOURCE_LIMITED)}
    status = EXIT_REFUTED if counts[REFUTED] else EXIT_RESOURCE if counts[RESOURCE_LIMITED] else EXIT_OK
    doc = {
        "summary": counts,
        "caps": {"max_generators": caps.max_generators, "max_n": caps.max_n, "claim_budget": caps.claim_budget},
        "claims": [r.to_json() for r in reports],
    }
    lines = []
    for r in reports:
        params = " ".join(f"{k}={v}" for k, v in r.params.items())
        lines.append(f"{r.verdict:<17} {r.claim} {params}".rstrip())
    lines.append(", ".join(f"{v} {k}" for k, v in counts.items()))
    return status, doc, "\n".join(lines)


# -- parser ---------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--max-generators", type=int, help="generator cap per complex")
    common.add_argument("--max-n", type=int, help="depth of bounded domination")
    common.add_argument("--budget", type=float, help="seconds per claim")
    return common


def _knot_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("kind", choices=("torus", "cable", "k", "s", "big"))
    p.add_argument("-p", type=int)
    p.add_argument("-q", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("--word", type=_word, help='cable word such as "2,3;3,7"')


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="kfiltration", description="Knot Floer filtrations of staircase knots.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("alexander", parents=[common], help="Alexander polynomials")
    p.add_argument("kind", choices=("torus", "cable", "closed-form"))
    p.add_argument("form", nargs="?", choices=("np1", "pcable", "2pm1"))
    p.add_argument("-p", type=int)
    p.add_argument("-q", type=int)
    p.add_argument("-n", type=int)
    p.add_argument("--word", type=_word, help='cable word such as "2,3;3,7"')
    p.set_defaults(run=cmd_alexander)

    p = sub.add_parser("staircase", parents=[common], help="staircase of an L-space knot")
    _knot_options(p)
    p.add_argument("--claimed", action="store_true", help="print the stated decomposition instead")
    p.set_defaults(run=cmd_staircase)

    p = sub.add_parser("complex", parents=[common], help="tensor complex of a staircase sum")
    p.add_argument("sum", help='staircase sum such as "2(1) - (1, 1)"')
    p.add_argument("--dual", action="store_true")
    p.set_defaults(run=cmd_complex)

    p = sub.add_parser("invariants", parents=[common], help="tau, nu, nu' and epsilon")
    p.add_argument("sum")
    p.add_argument("--basis", action="store_true", help="also read epsilon from a simplified basis")
    p.set_defaults(run=cmd_invariants)

    p = sub.add_parser("compare", parents=[common], help="order of two staircase sums")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--dominates", action="store_true", help="add bounded domination evidence")
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("verify", parents=[common], help="check a stated claim")
    p.add_argument("what", choices=("prop", "lemma", "build", "all"))
    p.add_argument("id", nargs="?")
    for name in ("p", "q", "n"):
        p.add_argument("-" + name, type=int)
    for name in ("c", "d", "u", "v", "w"):
        p.add_argument("--" + name, "-" + name, type=int)
    p.add_argument("-a", "--a", type=_ints)
    p.add_argument("-b", "--b", type=_ints)
    p.add_argument("--certs", help="certificate directory (verify all defaults to ./certs)")
    p.set_defaults(run=cmd_verify)

    p = sub.add_parser("witness", parents=[common], help="lemma hypotheses along (n, p) pairs")
    p.add_argument("--pairs", type=_pairs, required=True, help='"0,0;0,1;1,0"')
    p.add_argument("--certs")
    p.set_defaults(run=cmd_witness)
    return parser


def _emit(fmt: str, doc, text: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(doc) + "\n")
    else:
        sys.stdout.write(text + "\n")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    # known before parsing so that usage errors honour the requested format
    fmt = "json" if "--format=json" in argv or any(a == "--format" and b == "json" for a, b in zip(argv, argv[1:])) else "text"
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:  # --help
            return int(exc.code or 0)
        fmt = args.format
        for name in ("max_generators", "max_n"):
            value = getattr(args, name)
            if value is not None and value < 1:
                raise UsageError(f"--{name.replace('_', '-')} must be positive")
        status, doc, text = args.run(args)
    except UsageError as exc:
        return _fail(fmt, EXIT_USAGE, "usage", str(exc))
    except ResourceLimit as exc:
        return _fail(fmt, EXIT_RESOURCE, "resource-limit", str(exc))
    except (KFiltrationError, ValueError, argparse.ArgumentTypeError) as exc:
        return _fail(fmt, EXIT_USAGE, type(exc).__name__, str(exc))
    _emit(fmt, doc, text)
    return status


def _fail(fmt: str, status: int, kind: str, message: str) -> int:
    if fmt == "json":
        _emit(fmt, {"error": kind, "message": message, "exit": status}, "")
    else:
        sys.stderr.write(f"error ({kind}): {message}\n")
    return status


__all__ = ["build_parser", "main", "verify_all"]
