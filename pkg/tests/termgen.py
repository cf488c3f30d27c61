"""Shared random generators for the test suite."""

from __future__ import annotations

import random

from hypothesis import strategies as st

from termsep.corpus import CORPUS_SIGNATURE, random_term
from termsep.terms import App, Path, Signature, Term, Var, find_subterm_paths
from termsep.unification import Closure, Statement, close

VARS = ("w", "x", "y", "z")


def term_strategy(
    sig: Signature = CORPUS_SIGNATURE,
    var_names: tuple[str, ...] = VARS,
    max_leaves: int = 12,
):
    leaves = [Var(v) for v in var_names]
    leaves += [App(f) for f, a in sig.arities.items() if a == 0]
    growers = [(f, a) for f, a in sig.arities.items() if a >= 1]

    def extend(children):
        return st.one_of(
            *(
                st.tuples(*([children] * a)).map(lambda args, f=f: App(f, args))
                for f, a in growers
            )
        )

    return st.recursive(st.sampled_from(leaves), extend, max_leaves=max_leaves)


def random_path(
    rng: random.Random,
    sig: Signature = CORPUS_SIGNATURE,
    min_len: int = 1,
    max_len: int = 3,
) -> Path:
    ops = [(f, a) for f, a in sig.arities.items() if a >= 1]
    steps = []
    for _ in range(rng.randint(min_len, max_len)):
        f, a = rng.choice(ops)
        steps.append((f, rng.randint(1, a)))
    return tuple(steps)


def wrap_along(
    rng: random.Random,
    sub: Term,
    path: Path,
    sig: Signature = CORPUS_SIGNATURE,
    var_names: tuple[str, ...] = VARS,
) -> Term:
    """A term with `sub` sitting exactly at `path` and random siblings."""
    t = sub
    for op, i in reversed(path):
        args = [random_term(rng, sig, 3, var_names) for _ in range(sig.arity(op))]
        args[i - 1] = t
        t = App(op, tuple(args))
    return t


def random_vectors(
    rng: random.Random, names: tuple[str, ...], width: int
) -> dict[str, tuple[int, ...]]:
    return {n: tuple(rng.getrandbits(1) for _ in range(width)) for n in names}


def liftable_closure(
    rng: random.Random, tries: int = 200
) -> tuple[Closure, list[Statement]]:
    """A closure with derived statements whose deductions avoid the root
    internally: both inputs are applications with one head, distinct, and
    neither occurs inside the other."""
    for _ in range(tries):
        s = random_term(rng, CORPUS_SIGNATURE, 9)
        t = random_term(rng, CORPUS_SIGNATURE, 9)
        if not isinstance(s, App) or not isinstance(t, App):
            continue
        if s == t or s.op != t.op:
            continue
        if find_subterm_paths(s, t) or find_subterm_paths(t, s):
            continue
        c = close(s, t)
        derived = [stmt for stmt in c.merged_statements() if stmt != c.root]
        if derived:
            return c, derived
    raise AssertionError("no liftable closure found")
