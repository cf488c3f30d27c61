"""Randomized cross-checking of the decision procedure against the oracle.

Generates seeded random term pairs, compares the closure-based unify verdict
with the independent Robinson unifier, and verifies every separation
certificate symbolically plus, within a size budget, exhaustively.  A tamper
hook strips the parity-carrying summands from each certificate before
verification, which must make the checks fail; it exists to prove the
harness can actually catch a corrupted separator.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .gf2 import (
    Assign,
    BruteForceLimitError,
    DEFAULT_BRUTE_LIMIT,
    FlagConst,
    TransformSum,
    TweakedAssign,
    alg_of,
    check_separation,
    check_separation_bruteforce,
)
from .robinson import apply_bindings, robinson_mgu
from .separator import SeparationCertificate, separate
from .terms import (
    App,
    Path,
    Signature,
    Term,
    Var,
    format_term,
    occurrences,
    rename_canonical,
    substitute,
    variables,
)
from .unification import Unifiable

__all__ = [
    "CORPUS_SIGNATURE",
    "CorpusReport",
    "random_pair",
    "random_term",
    "replace_at",
    "run_corpus",
    "strip_parity",
]

CORPUS_SIGNATURE = Signature({"f": 3, "g": 2, "h": 1, "c": 0})
_CORPUS_VARS = ("w", "x", "y", "z")


def random_term(
    rng: random.Random,
    sig: Signature = CORPUS_SIGNATURE,
    max_nodes: int = 12,
    var_names: tuple[str, ...] = _CORPUS_VARS,
) -> Term:
    """A random term with at most max_nodes nodes."""
    ops = sorted((name, sig.arity(name)) for name in sig.names())
    compound = [(n, a) for n, a in ops if a > 0]
    consts = [n for n, a in ops if a == 0]

    def grow(budget: int) -> Term:
        leafy = budget <= 1 or not compound or rng.random() < 0.3
        if leafy:
            if consts and rng.random() < 0.25:
                return App(rng.choice(consts))
            return Var(rng.choice(var_names))
        fitting = [(n, a) for n, a in compound if a + 1 <= budget]
        if not fitting:
            return Var(rng.choice(var_names))
        name, arity = rng.choice(fitting)
        shares = [1] * arity
        for _ in range(budget - 1 - arity):
            shares[rng.randrange(arity)] += 1
        return App(name, tuple(grow(share) for share in shares))

    return grow(max_nodes)


def replace_at(t: Term, path: Path, replacement: Term) -> Term:
    """Copy of t with the subterm at path swapped out."""
    if not path:
        return replacement
    if not isinstance(t, App) or t.op != path[0][0]:
        raise ValueError("path does not match the term")
    op, idx = path[0]
    args = list(t.args)
    args[idx - 1] = replace_at(args[idx - 1], path[1:], replacement)
    return App(op, tuple(args))


def random_pair(
    rng: random.Random,
    sig: Signature = CORPUS_SIGNATURE,
    max_nodes: int = 12,
    var_names: tuple[str, ...] = _CORPUS_VARS,
) -> tuple[Term, Term]:
    """A random pair, biased toward pairs that nearly unify.

    Mixes independent pairs with mutants of a shared skeleton (one subterm
    replaced, sometimes variables renamed) so conflicts, cycles, and
    unifiable pairs all show up at useful rates.
    """
    s = random_term(rng, sig, max_nodes, var_names)
    style = rng.random()
    if style < 0.35:
        return s, random_term(rng, sig, max_nodes, var_names)
    occs = occurrences(s)
    path, _ = occs[rng.randrange(len(occs))]
    t = replace_at(s, path, random_term(rng, sig, max(2, max_nodes // 2), var_names))
    if style < 0.75:
        return s, t
    renaming = {name: Var(rng.choice(var_names)) for name in variables(t)}
    return s, substitute(t, renaming)


def strip_parity(summands: TransformSum) -> TransformSum:
    """Corrupt a certificate: drop flags and untweak every assignment."""
    out = []
    for x in summands:
        if isinstance(x, FlagConst):
            continue
        if isinstance(x, TweakedAssign):
            out.append(Assign(x.op, x.out, x.arg, x.src))
        else:
            out.append(x)
    return tuple(out)


@dataclass
class CorpusReport:
    count: int
    seed: int
    unifiable: int = 0
    separated: int = 0
    cases: dict[str, int] = field(default_factory=dict)
    brute_checked: int = 0
    brute_skipped: int = 0
    verdict_mismatches: int = 0
    mgu_mismatches: int = 0
    substitution_failures: int = 0
    verification_failures: int = 0
    elapsed: float = 0.0
    failures: list[str] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return (
            self.verdict_mismatches
            == self.mgu_mismatches
            == self.substitution_failures
            == self.verification_failures
            == 0
        )

    def _note(self, message: str) -> None:
        if len(self.failures) < 10:
            self.failures.append(message)


def run_corpus(
    count: int,
    seed: int,
    sig: Signature = CORPUS_SIGNATURE,
    brute_limit: int = DEFAULT_BRUTE_LIMIT,
    tamper: bool = False,
) -> CorpusReport:
    """Cross-check `count` seeded random pairs; see the module docstring."""
    rng = random.Random(seed)
    report = CorpusReport(count, seed)
    started = time.perf_counter()
    for n in range(count):
        s, t = random_pair(rng, sig)
        pair = f"pair {n}: {format_term(s)} vs {format_term(t)}"
        result = separate(s, t, sig)
        oracle = robinson_mgu(s, t)
        if isinstance(result, Unifiable) != (oracle is not None):
            report.verdict_mismatches += 1
            report._note(f"{pair}: verdict disagrees with the oracle")
            continue
        if isinstance(result, Unifiable):
            report.unifiable += 1
            ours = substitute(s, result.substitution)
            if ours != substitute(t, result.substitution) or ours != result.unifier:
                report.substitution_failures += 1
                report._note(f"{pair}: substitution does not unify the pair")
            assert oracle is not None
            theirs = apply_bindings(oracle, s)
            if rename_canonical(ours) != rename_canonical(theirs):
                report.mgu_mismatches += 1
                report._note(f"{pair}: mgu differs from the oracle's")
            continue
        report.separated += 1
        report.cases[result.case] = report.cases.get(result.case, 0) + 1
        cert: SeparationCertificate = result
        summands = strip_parity(cert.summands) if tamper else cert.summands
        algebra = alg_of(summands, sig)
        ok = check_separation(algebra, s, t)
        if ok:
            try:
                ok = check_separation_bruteforce(algebra, s, t, brute_limit)
                report.brute_checked += 1
            except BruteForceLimitError:
                report.brute_skipped += 1
        if not ok:
            report.verification_failures += 1
            report._note(f"{pair}: certificate failed verification")
    report.elapsed = time.perf_counter() - started
    return report
