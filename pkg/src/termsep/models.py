"""Finite models for universally quantified conjunctions of negated atoms.

Such a sentence is consistent exactly when no negated equation has unifiable
sides, and then a finite model always exists: take the product of one
separating algebra per equation and read every relation symbol as constantly
false.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .gf2 import (
    BruteForceLimitError,
    DEFAULT_BRUTE_LIMIT,
    FiniteAlgebra,
    check_separation,
    check_separation_bruteforce,
    product,
)
from .separator import SeparationCertificate, separate
from .terms import (
    Signature,
    Term,
    TermSyntaxError,
    format_term,
    parse_term_prefix,
)
from .unification import Unifiable

__all__ = [
    "EquationCheck",
    "FiniteModel",
    "Inconsistent",
    "NegatedEquation",
    "NegatedRelation",
    "Sentence",
    "finite_model",
    "parse_sentence",
]


@dataclass(frozen=True)
class NegatedEquation:
    """A conjunct asserting its two sides are never equal."""

    left: Term
    right: Term

    def __str__(self) -> str:
        return f"!= {format_term(self.left)} {format_term(self.right)}"


@dataclass(frozen=True)
class NegatedRelation:
    """A conjunct asserting a relational atom never holds."""

    name: str
    args: tuple[Term, ...]

    def __str__(self) -> str:
        inner = ",".join(format_term(a) for a in self.args)
        return f"!{self.name}({inner})" if self.args else f"!{self.name}"


Sentence = list["NegatedEquation | NegatedRelation"]


def parse_sentence(text: str, sig: Signature) -> Sentence:
    """One negated atom per line: `!= s t` or `!R(t1,...,tn)`.

    Blank lines and `#` comments are skipped.  Relation names share the
    identifier syntax but must not clash with declared operations.
    """
    out: Sentence = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("!="):
                left, pos = parse_term_prefix(line, 2, sig)
                right, pos = parse_term_prefix(line, pos, sig)
                if line[pos:].strip():
                    raise TermSyntaxError("trailing input after the two sides", pos)
                out.append(NegatedEquation(left, right))
            elif line.startswith("!"):
                out.append(_parse_relation(line, sig))
            else:
                raise TermSyntaxError("expected a line starting with `!=` or `!`")
        except TermSyntaxError as e:
            raise TermSyntaxError(f"line {n}: {e}") from None
    return out


def _parse_relation(line: str, sig: Signature) -> NegatedRelation:
    m = re.match(r"!\s*([A-Za-z_][A-Za-z0-9_]*)\s*(\(?)", line)
    if m is None:
        raise TermSyntaxError("expected a relation name after `!`")
    name = m.group(1)
    if name in sig:
        raise TermSyntaxError(f"{name!r} is an operation, not a relation")
    if not m.group(2):
        if line[m.end() :].strip():
            raise TermSyntaxError("trailing input after relation name", m.end())
        return NegatedRelation(name, ())
    pos = m.end()
    args: list[Term] = []
    while True:
        arg, pos = parse_term_prefix(line, pos, sig)
        args.append(arg)
        while pos < len(line) and line[pos].isspace():
            pos += 1
        if pos >= len(line):
            raise TermSyntaxError("unterminated argument list", pos)
        if line[pos] == ",":
            pos += 1
            continue
        if line[pos] == ")":
            pos += 1
            break
        raise TermSyntaxError(f"expected `,` or `)`, found {line[pos]!r}", pos)
    if line[pos:].strip():
        raise TermSyntaxError("trailing input after the relation", pos)
    return NegatedRelation(name, tuple(args))


@dataclass
class EquationCheck:
    """How one negated equation fared in the final product algebra."""

    equation: NegatedEquation
    certificate: SeparationCertificate
    symbolic: bool
    exhaustive: bool | None  # None when the assignment count exceeded the limit


@dataclass
class FiniteModel:
    """Product algebra plus always-false relations satisfying the sentence."""

    algebra: FiniteAlgebra
    relations: tuple[NegatedRelation, ...]
    checks: list[EquationCheck] = field(default_factory=list)

    @property
    def verified(self) -> bool:
        return all(c.symbolic and c.exhaustive is not False for c in self.checks)


@dataclass
class Inconsistent:
    """The sentence has no models: this equation's sides unify."""

    equation: NegatedEquation
    substitution: dict[str, Term]


def finite_model(
    sentence: Sentence, sig: Signature, brute_limit: int = DEFAULT_BRUTE_LIMIT
) -> FiniteModel | Inconsistent:
    """Build and check a finite model, or report why none exists.

    Every negated equation gets its own separating algebra; the model is
    their product, in which each equation is re-checked symbolically and,
    within the assignment budget, exhaustively.
    """
    equations = [c for c in sentence if isinstance(c, NegatedEquation)]
    relations = tuple(c for c in sentence if isinstance(c, NegatedRelation))
    certificates: list[SeparationCertificate] = []
    for eq in equations:
        result = separate(eq.left, eq.right, sig)
        if isinstance(result, Unifiable):
            return Inconsistent(eq, result.substitution)
        certificates.append(result)
    model = FiniteModel(product([cert.algebra for cert in certificates], sig), relations)
    for eq, cert in zip(equations, certificates):
        symbolic = check_separation(model.algebra, eq.left, eq.right)
        try:
            exhaustive: bool | None = check_separation_bruteforce(
                model.algebra, eq.left, eq.right, brute_limit
            )
        except BruteForceLimitError:
            exhaustive = None
        model.checks.append(EquationCheck(eq, cert, symbolic, exhaustive))
    return model
