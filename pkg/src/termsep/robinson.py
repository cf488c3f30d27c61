"""Independent unification oracle in the classic Robinson style.

Kept deliberately separate from the closure-based decision procedure: this
module implements the textbook algorithm (eager variable binding with an
occurs check over a triangular substitution) and imports nothing from it,
so the two can cross-check each other on random inputs.
"""

from __future__ import annotations

from .terms import App, Term, Var

__all__ = ["apply_bindings", "robinson_mgu"]


def _walk(t: Term, bindings: dict[str, Term]) -> Term:
    while isinstance(t, Var) and t.name in bindings:
        t = bindings[t.name]
    return t


def _occurs(name: str, t: Term, bindings: dict[str, Term]) -> bool:
    t = _walk(t, bindings)
    if isinstance(t, Var):
        return t.name == name
    return any(_occurs(name, a, bindings) for a in t.args)


def apply_bindings(bindings: dict[str, Term], t: Term) -> Term:
    """Resolve a term fully through a triangular substitution."""
    t = _walk(t, bindings)
    if isinstance(t, Var):
        return t
    return App(t.op, tuple(apply_bindings(bindings, a) for a in t.args))


def robinson_mgu(s: Term, t: Term) -> dict[str, Term] | None:
    """Most general unifier of s and t, or None when they do not unify.

    The result maps each bound variable to its fully resolved image;
    identity bindings are dropped.
    """
    bindings: dict[str, Term] = {}
    stack = [(s, t)]
    while stack:
        a, b = stack.pop()
        a, b = _walk(a, bindings), _walk(b, bindings)
        if a == b:
            continue
        if isinstance(a, Var):
            if _occurs(a.name, b, bindings):
                return None
            bindings[a.name] = b
        elif isinstance(b, Var):
            if _occurs(b.name, a, bindings):
                return None
            bindings[b.name] = a
        else:
            if a.op != b.op or len(a.args) != len(b.args):
                return None
            stack.extend(zip(a.args, b.args))
    out: dict[str, Term] = {}
    for name in sorted(bindings):
        image = apply_bindings(bindings, Var(name))
        if image != Var(name):
            out[name] = image
    return out
