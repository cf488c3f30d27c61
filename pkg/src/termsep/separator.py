"""Constructing finite algebras that keep two non-unifiable terms apart.

Separation always targets the designated output component 0: the produced
algebra makes s[0] XOR t[0] the constant 1, so the two terms disagree under
every assignment.  Four constructions cover the ways unification can fail:

* one term is a variable occurring inside the other,
* one term is a proper subterm of the other,
* the closure equates applications of two different operations (conflict),
* the closure chains a class into a proper subterm of itself (cycle).

The conflict and cycle constructions hoist a derived statement p ≡ q up to
the inputs: `lift` produces summands under which p[k] XOR q[k] equals
s[0] XOR t[0] as affine forms, and a flag or a tweaked cycle of path
transforms then forces the constant 1.  Construction heuristics are treated
as untrusted: every candidate algebra is checked symbolically and the next
candidate witness is tried on failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import islice
from typing import Iterator

from .gf2 import (
    AFFINE_ONE,
    FiniteAlgebra,
    FlagConst,
    IndexAllocator,
    TransformSum,
    alg_of,
    path_transform,
    separation_form,
    tweaked_path_transform,
)
from .terms import Path, Signature, Term, Var, find_subterm_paths, format_term
from .unification import (
    Base,
    Closure,
    ConflictWitness,
    CycleWitness,
    Decompose,
    Statement,
    Transitive,
    Unifiable,
    conflict_witnesses,
    cycle_witnesses,
    unify,
)

__all__ = [
    "SeparationCertificate",
    "SeparationError",
    "build_conflict",
    "build_cycle",
    "lift",
    "separate",
    "separate_subterm",
    "separate_variable",
]


class SeparationError(RuntimeError):
    """No candidate construction verified; indicates an implementation bug."""


@dataclass
class SeparationCertificate:
    """A verified separating algebra together with how it was built."""

    case: str  # "variable" | "subterm" | "conflict" | "cycle"
    summands: TransformSum
    algebra: FiniteAlgebra
    verified: bool
    witness: ConflictWitness | CycleWitness | None = None
    path: Path | None = None


def separate_variable(host: Term, x: Var, alloc: IndexAllocator) -> TransformSum:
    """Summands separating a variable from a term it occurs in.

    Tweaks the first occurrence: host[0] becomes x[0] + 1 while the
    variable itself keeps component x[0].
    """
    paths = [p for p in find_subterm_paths(x, host) if p]
    if not paths:
        raise ValueError(f"{x.name} does not occur in {format_term(host)}")
    return tweaked_path_transform(0, paths[0], 0, alloc)


def separate_subterm(outer: Term, inner: Term, alloc: IndexAllocator) -> TransformSum:
    """Summands separating a term from one of its proper subterms."""
    paths = [p for p in find_subterm_paths(inner, outer) if p]
    if not paths:
        raise ValueError(
            f"{format_term(inner)} is not a proper subterm of {format_term(outer)}"
        )
    return tweaked_path_transform(0, paths[0], 0, alloc)


def lift(c: Closure, stmt: Statement, k: int, alloc: IndexAllocator) -> TransformSum:
    """Summands under which stmt's sides agree at k exactly when s[0] = t[0].

    Precisely: writing p, q for the sides and s, t for the closure's inputs,
    the affine forms in the induced algebra satisfy
    p[k] XOR q[k] = s[0] XOR t[0].  The recursion mirrors the statement's
    deduction; k must be 0 exactly when the statement is the root itself.
    """
    d = c.derive(stmt)
    if isinstance(d, Base):
        if k != 0:
            raise ValueError("the root statement lifts only at component 0")
        return ()
    if k == 0:
        raise ValueError("derived statements lift at a nonzero component")
    if isinstance(d, Decompose):
        if isinstance(c.derive(d.parent), Base):
            return path_transform(k, d.path, 0, alloc)
        m = alloc.fresh()
        return lift(c, d.parent, m, alloc) + path_transform(k, d.path, m, alloc)
    assert isinstance(d, Transitive)
    out: TransformSum = ()
    for link in d.chain:
        out += lift(c, link, k, alloc)
    return out


def build_conflict(c: Closure, w: ConflictWitness, alloc: IndexAllocator) -> TransformSum:
    """Case of two equivalent applications with different heads.

    Lifts the witness statement to a fresh component k and flags component k
    of the smaller side's operation, so exactly one of s[0], t[0] picks up
    the constant 1.  When the witness is the root statement itself the flag
    alone suffices.
    """
    head = w.stmt.left.op  # type: ignore[union-attr]
    if isinstance(w.derivation, Base):
        return (FlagConst(head, 0),)
    k = alloc.fresh()
    return lift(c, w.stmt, k, alloc) + (FlagConst(head, k),)


def build_cycle(c: Closure, w: CycleWitness, alloc: IndexAllocator) -> TransformSum:
    """Case of a class equivalent to a proper subterm of itself.

    Each link statement p_i ≡ q_i is lifted to its own component k_i, and
    path transforms route q_i's component around the cycle into the next
    link's component, the last one tweaked.  Going around the loop then
    forces s[0] XOR t[0] = 1.  A link whose statement is the root itself
    uses component 0, which in the one-link case degenerates to exactly the
    variable-occurrence construction.
    """
    links = w.links
    ks = [
        0 if isinstance(link.derivation, Base) else alloc.fresh() for link in links
    ]
    total: TransformSum = ()
    for link, k in zip(links, ks):
        total += lift(c, link.statement, k, alloc)
    last = len(links) - 1
    for i, link in enumerate(links):
        maker = tweaked_path_transform if i == last else path_transform
        total += maker(ks[i], link.path_in_next, ks[(i + 1) % len(links)], alloc)
    return total


def _verified(
    case: str,
    summands: TransformSum,
    sig: Signature,
    s: Term,
    t: Term,
    witness: ConflictWitness | CycleWitness | None = None,
    path: Path | None = None,
) -> SeparationCertificate | None:
    algebra = alg_of(summands, sig)
    if separation_form(algebra, s, t) != AFFINE_ONE:
        return None
    return SeparationCertificate(case, summands, algebra, True, witness, path)


def separate(
    s: Term, t: Term, sig: Signature, max_attempts: int = 64
) -> Unifiable | SeparationCertificate:
    """Unify s and t, or build and verify an algebra separating them.

    The two structural special cases (variable occurrence, proper subterm)
    are tried before the closure analysis; conflict and cycle constructions
    fall back to alternative witnesses until one verifies.
    """
    if s == t:
        return Unifiable({}, s)
    for var, other in ((s, t), (t, s)):
        if isinstance(var, Var) and not isinstance(other, Var):
            paths = [p for p in find_subterm_paths(var, other) if p]
            if paths:
                alloc = IndexAllocator()
                cert = _verified(
                    "variable",
                    separate_variable(other, var, alloc),
                    sig, s, t, path=paths[0],
                )
                if cert is None:
                    raise SeparationError("variable-case construction failed to verify")
                return cert
    if not isinstance(s, Var) and not isinstance(t, Var):
        for inner, outer in ((s, t), (t, s)):
            paths = [p for p in find_subterm_paths(inner, outer) if p]
            if paths:
                alloc = IndexAllocator()
                cert = _verified(
                    "subterm",
                    separate_subterm(outer, inner, alloc),
                    sig, s, t, path=paths[0],
                )
                if cert is None:
                    raise SeparationError("subterm-case construction failed to verify")
                return cert
    outcome = unify(s, t)
    if isinstance(outcome, Unifiable):
        return outcome
    c = outcome.closure
    candidates: Iterator[ConflictWitness | CycleWitness]
    if isinstance(outcome.witness, ConflictWitness):
        case, candidates = "conflict", conflict_witnesses(c)
    else:
        case, candidates = "cycle", cycle_witnesses(c)
    tried = 0
    for w in islice(candidates, max_attempts):
        tried += 1
        alloc = IndexAllocator()
        if isinstance(w, ConflictWitness):
            summands = build_conflict(c, w, alloc)
        else:
            summands = build_cycle(c, w, alloc)
        cert = _verified(case, summands, sig, s, t, witness=w)
        if cert is not None:
            return cert
    raise SeparationError(
        f"no {case} construction verified for {format_term(s)} vs {format_term(t)} "
        f"after {tried} candidates"
    )
