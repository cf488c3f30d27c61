"""Command-line frontend.

Subcommands: unify, separate, verify, model, corpus, render.  Exit codes
follow one convention: 0 for unifiable/separated/clean, 1 for the opposite
verdict, 2 for input errors.  With `--format records` every report becomes
line-oriented `key=value` pairs so golden tests can diff output exactly;
both formats are deterministic byte for byte.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path as FilePath

from .corpus import CORPUS_SIGNATURE, run_corpus
from .gf2 import (
    AFFINE_ONE,
    AlgebraSyntaxError,
    BruteForceLimitError,
    DEFAULT_BRUTE_LIMIT,
    FiniteAlgebra,
    check_separation,
    check_separation_bruteforce,
    format_algebra,
    format_transformation,
    parse_algebra,
    separation_form,
)
from .models import FiniteModel, Inconsistent, finite_model, parse_sentence
from .separator import SeparationCertificate, separate
from .terms import (
    Signature,
    Term,
    TermSyntaxError,
    format_path,
    format_term,
    load_signature,
    parse_term,
    render_tree,
)
from .unification import (
    Base,
    Closure,
    ConflictWitness,
    CycleWitness,
    Decompose,
    Failed,
    Statement,
    Unifiable,
    close,
    unify,
    verify_derivation,
)

__all__ = ["main"]


def _signature(args: argparse.Namespace) -> Signature:
    if args.sig is None:
        return CORPUS_SIGNATURE
    return load_signature(args.sig)


def _substitution_lines(subst: dict[str, Term], records: bool) -> list[str]:
    if records:
        return [f"subst.{name}={format_term(subst[name])}" for name in sorted(subst)]
    if not subst:
        return ["substitution: (identity)"]
    lines = ["substitution:"]
    lines += [f"  {name} -> {format_term(subst[name])}" for name in sorted(subst)]
    return lines


class _DeductionPrinter:
    """Numbered linearization of derivations, shared across statements."""

    def __init__(self, closure: Closure):
        self.closure = closure
        self.lines: list[str] = []
        self._numbers: dict[Statement, int] = {}

    def emit(self, stmt: Statement) -> int:
        if stmt in self._numbers:
            return self._numbers[stmt]
        d = self.closure.derive(stmt)
        if isinstance(d, Base):
            rule = "given"
        elif isinstance(d, Decompose):
            rule = f"descend {format_path(d.path)} from {self.emit(d.parent)}"
        else:
            rule = "chain " + ",".join(str(self.emit(link)) for link in d.chain)
        n = len(self.lines) + 1
        self._numbers[stmt] = n
        self.lines.append(f"  {n}. {stmt}  [{rule}]")
        return n


def _witness_lines(
    witness: ConflictWitness | CycleWitness, closure: Closure, records: bool
) -> list[str]:
    out: list[str] = []
    printer = _DeductionPrinter(closure)
    if isinstance(witness, ConflictWitness):
        if records:
            out.append("reason=conflict")
            out.append(f"witness={witness.stmt}")
        else:
            out.append("reason: operation conflict")
            out.append(f"witness: {witness.stmt}")
        printer.emit(witness.stmt)
        sound = verify_derivation(closure, witness.stmt)
    else:
        if records:
            out.append("reason=cycle")
        else:
            out.append("reason: subterm cycle")
            out.append(f"cycle ({len(witness.links)} links):")
        for i, link in enumerate(witness.links):
            nxt = witness.links[(i + 1) % len(witness.links)].left
            where = f"{format_term(link.right)} at {format_path(link.path_in_next)} inside {format_term(nxt)}"
            if records:
                out.append(f"link={link.statement} ; {where}")
            else:
                out.append(f"  {link.statement}, with {where}")
            printer.emit(link.statement)
        sound = all(
            verify_derivation(closure, link.statement) for link in witness.links
        )
    if records:
        out.append(f"replay={'sound' if sound else 'UNSOUND'}")
        out += ["deduction=" + line.strip() for line in printer.lines]
    else:
        out.append(f"replay: {'sound' if sound else 'UNSOUND'}")
        out.append("deduction:")
        out += printer.lines
    return out


def cmd_unify(args: argparse.Namespace) -> int:
    sig = _signature(args)
    s = parse_term(args.s, sig)
    t = parse_term(args.t, sig)
    records = args.format == "records"
    outcome = unify(s, t)
    if isinstance(outcome, Unifiable):
        if records:
            print("verdict=unifiable")
            print(f"unifier={format_term(outcome.unifier)}")
        else:
            print("UNIFIABLE")
            print(f"unifier: {format_term(outcome.unifier)}")
        for line in _substitution_lines(outcome.substitution, records):
            print(line)
        if args.trace:
            printer = _DeductionPrinter(close(s, t))
            for stmt in printer.closure.merged_statements():
                printer.emit(stmt)
            print("trace=merged" if records else "trace (all merged statements):")
            for line in printer.lines:
                print("deduction=" + line.strip() if records else line)
        return 0
    assert isinstance(outcome, Failed)
    print("verdict=not-unifiable" if records else "NOT UNIFIABLE")
    for line in _witness_lines(outcome.witness, outcome.closure, records):
        print(line)
    return 1


def _algebra_lines(algebra: FiniteAlgebra, records: bool) -> list[str]:
    body = format_algebra(algebra).rstrip("\n").splitlines()
    if records:
        return ["algebra=" + line for line in body]
    return ["algebra:"] + ["  " + line for line in body]


def cmd_separate(args: argparse.Namespace) -> int:
    sig = _signature(args)
    s = parse_term(args.s, sig)
    t = parse_term(args.t, sig)
    records = args.format == "records"
    result = separate(s, t, sig)
    if isinstance(result, Unifiable):
        if records:
            print("verdict=unifiable")
            print(f"unifier={format_term(result.unifier)}")
        else:
            print("UNIFIABLE (no separating algebra exists)")
            print(f"unifier: {format_term(result.unifier)}")
        for line in _substitution_lines(result.substitution, records):
            print(line)
        return 0
    cert: SeparationCertificate = result
    if records:
        print("verdict=separated")
        print(f"case={cert.case}")
    else:
        print("NOT UNIFIABLE")
        print(f"case: {cert.case}")
    if cert.path is not None:
        print(f"path={format_path(cert.path)}" if records else f"path: {format_path(cert.path)}")
    if not records:
        print("transformations:")
    for summand in cert.summands:
        text = format_transformation(summand)
        print(f"summand={text}" if records else f"  {text}")
    for line in _algebra_lines(cert.algebra, records):
        print(line)
    symbolic = separation_form(cert.algebra, s, t) == AFFINE_ONE
    try:
        exhaustive = check_separation_bruteforce(cert.algebra, s, t, args.limit)
        exhaustive_text = "pass" if exhaustive else "FAIL"
    except BruteForceLimitError:
        exhaustive = None
        exhaustive_text = "skipped"
    if records:
        print(f"symbolic={'pass' if symbolic else 'FAIL'}")
        print(f"exhaustive={exhaustive_text}")
        print(f"verified={'true' if cert.verified else 'false'}")
    else:
        print(f"verification: symbolic {'PASS' if symbolic else 'FAIL'}"
              f", exhaustive {exhaustive_text.upper()}")
    if args.trace and cert.witness is not None:
        for line in _witness_lines(cert.witness, close(s, t), records):
            print(line)
    return 1


def cmd_verify(args: argparse.Namespace) -> int:
    sig = _signature(args)
    s = parse_term(args.s, sig)
    t = parse_term(args.t, sig)
    algebra = parse_algebra(FilePath(args.algebra).read_text(), sig)
    records = args.format == "records"
    symbolic = check_separation(algebra, s, t)
    try:
        exhaustive: bool | None = check_separation_bruteforce(algebra, s, t, args.limit)
    except BruteForceLimitError:
        exhaustive = None
    separated = bool(symbolic or exhaustive)
    if records:
        print(f"symbolic={'pass' if symbolic else 'fail'}")
        print(
            "exhaustive="
            + ("skipped" if exhaustive is None else "pass" if exhaustive else "fail")
        )
        print(f"verdict={'separated' if separated else 'not-separated'}")
    else:
        print(f"symbolic: {'PASS' if symbolic else 'FAIL'}")
        print(
            "exhaustive: "
            + ("SKIPPED" if exhaustive is None else "PASS" if exhaustive else "FAIL")
        )
        print("SEPARATED" if separated else "NOT SEPARATED")
    return 0 if separated else 1


def cmd_model(args: argparse.Namespace) -> int:
    sig = _signature(args)
    sentence = parse_sentence(FilePath(args.sentence).read_text(), sig)
    records = args.format == "records"
    result = finite_model(sentence, sig, args.limit)
    if isinstance(result, Inconsistent):
        if records:
            print("verdict=inconsistent")
            print(f"equation={result.equation}")
        else:
            print("INCONSISTENT")
            print(f"equation: {result.equation}")
        for line in _substitution_lines(result.substitution, records):
            print(line)
        return 1
    model: FiniteModel = result
    if records:
        print("verdict=model")
        print(f"universe={model.algebra.universe_size}")
    else:
        print("MODEL")
        print(f"universe size: {model.algebra.universe_size}")
    for line in _algebra_lines(model.algebra, records):
        print(line)
    if model.relations:
        if not records:
            print("relations (always false):")
        seen = []
        for rel in model.relations:
            label = f"{rel.name}/{len(rel.args)}"
            if label not in seen:
                seen.append(label)
                print(f"relation={label}" if records else f"  {label}")
    for n, check in enumerate(model.checks, 1):
        exhaustive = (
            "skipped" if check.exhaustive is None
            else "pass" if check.exhaustive else "FAIL"
        )
        symbolic = "pass" if check.symbolic else "FAIL"
        if records:
            print(f"check{n}.equation={check.equation}")
            print(f"check{n}.case={check.certificate.case}")
            print(f"check{n}.symbolic={symbolic}")
            print(f"check{n}.exhaustive={exhaustive}")
        else:
            print(
                f"check: {check.equation}  [{check.certificate.case}]"
                f"  symbolic {symbolic.upper()}, exhaustive {exhaustive.upper()}"
            )
    if not model.verified:
        print("MODEL VERIFICATION FAILED" if not records else "verified=false")
        return 1
    if records:
        print("verified=true")
    return 0


def cmd_corpus(args: argparse.Namespace) -> int:
    sig = _signature(args)
    report = run_corpus(args.count, args.seed, sig, args.limit, args.tamper)
    records = args.format == "records"
    cases = ", ".join(f"{k}: {v}" for k, v in sorted(report.cases.items()))
    if records:
        print(f"pairs={report.count}")
        print(f"seed={report.seed}")
        print(f"unifiable={report.unifiable}")
        print(f"separated={report.separated}")
        for k, v in sorted(report.cases.items()):
            print(f"case.{k}={v}")
        print(f"mismatch.verdict={report.verdict_mismatches}")
        print(f"mismatch.mgu={report.mgu_mismatches}")
        print(f"mismatch.substitution={report.substitution_failures}")
        print(f"mismatch.verification={report.verification_failures}")
        print(f"brute.checked={report.brute_checked}")
        print(f"brute.skipped={report.brute_skipped}")
        print(f"result={'clean' if report.clean else 'FAILURES'}")
    else:
        print(f"pairs: {report.count}  seed: {report.seed}")
        print(f"unifiable: {report.unifiable}")
        print(f"separated: {report.separated}" + (f"  ({cases})" if cases else ""))
        print(f"oracle verdict mismatches: {report.verdict_mismatches}")
        print(f"mgu mismatches: {report.mgu_mismatches}")
        print(f"substitution failures: {report.substitution_failures}")
        print(f"verification failures: {report.verification_failures}")
        print(f"brute-force: {report.brute_checked} checked, {report.brute_skipped} skipped")
        print("RESULT: " + ("CLEAN" if report.clean else "FAILURES DETECTED"))
    for line in report.failures:
        print(f"failure={line}" if records else f"  failure: {line}")
    return 0 if report.clean else 1


def cmd_render(args: argparse.Namespace) -> int:
    sig = _signature(args)
    first = True
    for text in args.terms:
        if not first:
            print()
        first = False
        print(render_tree(parse_term(text, sig)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="termsep",
        description=(
            "Decide unifiability of first-order terms; when it fails, build a "
            "finite algebra over GF(2) vectors that provably separates them."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--sig",
        metavar="FILE",
        help="signature file, one name/arity per line (default: f/3,g/2,h/1,c/0)",
    )
    common.add_argument(
        "--format",
        choices=("text", "records"),
        default="text",
        help="report style: human text or key=value records",
    )
    limited = argparse.ArgumentParser(add_help=False)
    limited.add_argument(
        "--limit",
        type=int,
        default=DEFAULT_BRUTE_LIMIT,
        metavar="N",
        help=f"max assignments for exhaustive checks (default {DEFAULT_BRUTE_LIMIT})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("unify", parents=[common], help="decide unifiability, report mgu or witness")
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("--trace", action="store_true", help="print the full deduction trace")
    p.set_defaults(handler=cmd_unify)

    p = sub.add_parser("separate", parents=[common, limited], help="build a separating algebra")
    p.add_argument("s")
    p.add_argument("t")
    p.add_argument("--trace", action="store_true", help="print the witness deduction")
    p.set_defaults(handler=cmd_separate)

    p = sub.add_parser("verify", parents=[common, limited], help="check a serialized algebra against a pair")
    p.add_argument("algebra", metavar="ALGEBRA_FILE")
    p.add_argument("s")
    p.add_argument("t")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("model", parents=[common, limited], help="finite model for a negated-atom sentence")
    p.add_argument("sentence", metavar="SENTENCE_FILE")
    p.set_defaults(handler=cmd_model)

    p = sub.add_parser("corpus", parents=[common, limited], help="random cross-check against the oracle")
    p.add_argument("--count", type=int, default=100, metavar="N")
    p.add_argument("--seed", type=int, default=0, metavar="N")
    p.add_argument(
        "--tamper",
        action="store_true",
        help="corrupt every certificate before verification (the run must then fail)",
    )
    p.set_defaults(handler=cmd_corpus)

    p = sub.add_parser("render", parents=[common], help="print terms as indented trees")
    p.add_argument("terms", nargs="+", metavar="TERM")
    p.set_defaults(handler=cmd_render)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (TermSyntaxError, AlgebraSyntaxError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
