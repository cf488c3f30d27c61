"""Finite algebras whose elements are bit vectors and whose operations are
affine over GF(2).

An algebra is assembled from *component assignments*: a summand `f[b] := x_i[j]`
makes component b of f's output depend on component j of its i-th argument, a
tweaked summand adds the constant 1 to that, and a flag `f[k] := 1` sets an
output component to the constant 1.  Summands targeting the same output
component combine by XOR, every unassigned component is 0, and operations with
no summands at all are constantly the zero vector.  Components are addressed
by nonnegative integer indices; the universe uses exactly the referenced
indices (plus 0), so it stays small.

Besides concrete evaluation, every term component can be evaluated
symbolically as an affine form (an XOR of input-variable components plus a
constant bit), which is what the separation checks are built on.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .terms import App, Path, Signature, Term, Var, variables

__all__ = [
    "AFFINE_ONE",
    "AFFINE_ZERO",
    "AffineForm",
    "AlgebraSyntaxError",
    "Assign",
    "Assignment",
    "BruteForceLimitError",
    "ComponentRule",
    "DEFAULT_BRUTE_LIMIT",
    "FiniteAlgebra",
    "FlagConst",
    "IndexAllocator",
    "Transformation",
    "TransformSum",
    "TweakedAssign",
    "Vector",
    "affine_components",
    "affine_xor",
    "alg_of",
    "check_separation",
    "check_separation_bruteforce",
    "eval_affine",
    "eval_term",
    "format_algebra",
    "format_transformation",
    "parse_algebra",
    "path_transform",
    "product",
    "product_index_map",
    "referenced_indices",
    "separation_form",
    "tweaked_path_transform",
    "zero_algebra",
]


# -- component assignments -------------------------------------------------


@dataclass(frozen=True)
class Assign:
    """f[out] := x_arg[src]  (arg is 1-based)."""

    op: str
    out: int
    arg: int
    src: int


@dataclass(frozen=True)
class TweakedAssign:
    """f[out] := x_arg[src] + 1."""

    op: str
    out: int
    arg: int
    src: int


@dataclass(frozen=True)
class FlagConst:
    """f[out] := 1."""

    op: str
    out: int


Transformation = Assign | TweakedAssign | FlagConst
TransformSum = tuple[Transformation, ...]


def format_transformation(t: Transformation) -> str:
    if isinstance(t, Assign):
        return f"{t.op}[{t.out}] := x_{t.arg}[{t.src}]"
    if isinstance(t, TweakedAssign):
        return f"{t.op}[{t.out}] := x_{t.arg}[{t.src}] + 1"
    return f"{t.op}[{t.out}] := 1"


class IndexAllocator:
    """Hands out component indices that collide with nothing issued before.

    Index 0 is reserved for the designated output component and is never
    issued.
    """

    def __init__(self, start: int = 1):
        if start < 1:
            raise ValueError("fresh indices start at 1 or above; 0 is reserved")
        self._next = start

    def fresh(self) -> int:
        issued = self._next
        self._next += 1
        return issued


def path_transform(read: int, path: Path, write: int, alloc: IndexAllocator) -> TransformSum:
    """Summands carrying component `read` of the subterm at `path` up to
    component `write` of the whole term.

    One assignment per path step, threaded through fresh intermediate
    indices: the deepest step reads `read`, the root step writes `write`.
    """
    if not path:
        raise ValueError("path transform needs a nonempty path")
    targets = [write] + [alloc.fresh() for _ in path[:-1]]
    out: list[Transformation] = []
    for depth in range(len(path) - 1, -1, -1):
        op, arg = path[depth]
        src = read if depth == len(path) - 1 else targets[depth + 1]
        out.append(Assign(op, targets[depth], arg, src))
    return tuple(out)


def tweaked_path_transform(read: int, path: Path, write: int, alloc: IndexAllocator) -> TransformSum:
    """As path_transform, with the deepest assignment's source flipped."""
    parts = path_transform(read, path, write, alloc)
    deepest = parts[0]
    assert isinstance(deepest, Assign)
    return (TweakedAssign(deepest.op, deepest.out, deepest.arg, deepest.src),) + parts[1:]


# -- algebras ---------------------------------------------------------------


@dataclass(frozen=True)
class ComponentRule:
    """One output component: XOR of argument components plus a constant."""

    sources: frozenset[tuple[int, int]]  # (argument position 1-based, index)
    const: int = 0


@dataclass
class FiniteAlgebra:
    """Operations affine over GF(2) vectors indexed by `indices`.

    `rules[op][out]` gives the affine map for one output component; missing
    entries are the constant 0.  Treated as immutable once built.
    """

    signature: Signature
    indices: tuple[int, ...]
    rules: dict[str, dict[int, ComponentRule]]

    @property
    def universe_size(self) -> int:
        return 1 << len(self.indices)


def referenced_indices(summands: Iterable[Transformation]) -> tuple[int, ...]:
    """All indices any summand reads or writes, plus the reserved 0."""
    seen = {0}
    for s in summands:
        seen.add(s.out)
        if isinstance(s, (Assign, TweakedAssign)):
            seen.add(s.src)
    return tuple(sorted(seen))


def alg_of(summands: Iterable[Transformation], sig: Signature) -> FiniteAlgebra:
    """The algebra induced by a sum of transformations.

    Summands for the same (operation, output component) XOR together;
    components left unassigned are 0 and unreferenced operations are
    constantly the zero vector.
    """
    summands = tuple(summands)
    for s in summands:
        if s.op not in sig:
            raise ValueError(f"summand references undeclared operation {s.op!r}")
        if isinstance(s, (Assign, TweakedAssign)) and not 1 <= s.arg <= sig.arity(s.op):
            raise ValueError(
                f"summand argument x_{s.arg} out of range for {s.op}/{sig.arity(s.op)}"
            )
    acc: dict[str, dict[int, tuple[set[tuple[int, int]], int]]] = {}
    for s in summands:
        slot = acc.setdefault(s.op, {}).setdefault(s.out, (set(), 0))
        sources, const = slot
        if isinstance(s, (Assign, TweakedAssign)):
            sources ^= {(s.arg, s.src)}
            if isinstance(s, TweakedAssign):
                const ^= 1
        else:
            const ^= 1
        acc[s.op][s.out] = (sources, const)
    rules: dict[str, dict[int, ComponentRule]] = {}
    for op in sorted(acc):
        per_op: dict[int, ComponentRule] = {}
        for out in sorted(acc[op]):
            sources, const = acc[op][out]
            if sources or const:
                per_op[out] = ComponentRule(frozenset(sources), const)
        if per_op:
            rules[op] = per_op
    return FiniteAlgebra(sig, referenced_indices(summands), rules)


def zero_algebra(sig: Signature) -> FiniteAlgebra:
    return alg_of((), sig)


# -- concrete evaluation ----------------------------------------------------

Vector = tuple[int, ...]
Assignment = Mapping[str, Vector]


def _positions(a: FiniteAlgebra) -> dict[int, int]:
    return {idx: i for i, idx in enumerate(a.indices)}


def eval_term(a: FiniteAlgebra, t: Term, asg: Assignment) -> Vector:
    """Value of `t` under an assignment of vectors to its variables."""
    pos = _positions(a)
    width = len(a.indices)

    def ev(u: Term) -> Vector:
        if isinstance(u, Var):
            try:
                v = asg[u.name]
            except KeyError:
                raise ValueError(f"assignment gives no value for variable {u.name}") from None
            if len(v) != width:
                raise ValueError(
                    f"vector for {u.name} has {len(v)} components, expected {width}"
                )
            return tuple(v)
        children = [ev(arg) for arg in u.args]
        out = [0] * width
        for out_idx, rule in a.rules.get(u.op, {}).items():
            bit = rule.const
            for arg, src in rule.sources:
                bit ^= children[arg - 1][pos[src]]
            out[pos[out_idx]] = bit
        return tuple(out)

    return ev(t)


# -- symbolic evaluation ----------------------------------------------------


@dataclass(frozen=True)
class AffineForm:
    """XOR of (variable, component index) inputs plus a constant bit."""

    monomials: frozenset[tuple[str, int]]
    constant: int

    def __str__(self) -> str:
        parts = [f"{v}[{i}]" for v, i in sorted(self.monomials)]
        if self.constant or not parts:
            parts.append(str(self.constant))
        return " + ".join(parts)


AFFINE_ZERO = AffineForm(frozenset(), 0)
AFFINE_ONE = AffineForm(frozenset(), 1)


def affine_xor(f: AffineForm, g: AffineForm) -> AffineForm:
    return AffineForm(f.monomials ^ g.monomials, f.constant ^ g.constant)


def eval_affine(form: AffineForm, asg: Assignment, indices: tuple[int, ...]) -> int:
    pos = {idx: i for i, idx in enumerate(indices)}
    bit = form.constant
    for name, idx in form.monomials:
        bit ^= asg[name][pos[idx]]
    return bit


def affine_components(a: FiniteAlgebra, t: Term) -> dict[int, AffineForm]:
    """Each output component of `t` as an affine form of variable components."""
    memo: dict[Term, dict[int, AffineForm]] = {}

    def ev(u: Term) -> dict[int, AffineForm]:
        if u in memo:
            return memo[u]
        if isinstance(u, Var):
            comp = {i: AffineForm(frozenset({(u.name, i)}), 0) for i in a.indices}
        else:
            children = [ev(arg) for arg in u.args]
            comp = {i: AFFINE_ZERO for i in a.indices}
            for out_idx, rule in a.rules.get(u.op, {}).items():
                f = AffineForm(frozenset(), rule.const)
                for arg, src in sorted(rule.sources):
                    f = affine_xor(f, children[arg - 1][src])
                comp[out_idx] = f
        memo[u] = comp
        return comp

    return ev(t)


def separation_form(a: FiniteAlgebra, s: Term, t: Term, index: int = 0) -> AffineForm:
    """The affine form of s[index] XOR t[index]."""
    if index not in a.indices:
        raise ValueError(f"component {index} is not an index of the algebra")
    return affine_xor(affine_components(a, s)[index], affine_components(a, t)[index])


def check_separation(a: FiniteAlgebra, s: Term, t: Term) -> bool:
    """True when some component of s XOR t is identically the constant 1.

    Sufficient for separation: that component differs under every
    assignment, so s and t never evaluate equal.
    """
    fs = affine_components(a, s)
    ft = affine_components(a, t)
    return any(affine_xor(fs[i], ft[i]) == AFFINE_ONE for i in a.indices)


# -- brute force ------------------------------------------------------------

DEFAULT_BRUTE_LIMIT = 1 << 16


class BruteForceLimitError(RuntimeError):
    """Raised when exhaustive checking would exceed the assignment budget."""


def check_separation_bruteforce(
    a: FiniteAlgebra, s: Term, t: Term, limit: int = DEFAULT_BRUTE_LIMIT
) -> bool:
    """Exhaustively test that s and t never evaluate to the same vector.

    Enumerates every assignment of universe elements to the variables of the
    two terms; refuses to run when there are more than `limit` assignments.
    """
    names = sorted(set(variables(s)) | set(variables(t)))
    width = len(a.indices)
    bits = width * len(names)
    if bits > 62 or (1 << bits) > limit:
        raise BruteForceLimitError(
            f"2^{bits} assignments exceed the limit of {limit}"
        )
    total = 1 << bits
    ids = np.arange(total, dtype=np.uint64)
    var_bits = {
        name: [
            ((ids >> np.uint64(vi * width + p)) & np.uint64(1)).astype(np.uint8)
            for p in range(width)
        ]
        for vi, name in enumerate(names)
    }
    pos = _positions(a)
    memo: dict[Term, list[np.ndarray]] = {}

    def ev(u: Term) -> list[np.ndarray]:
        if u in memo:
            return memo[u]
        if isinstance(u, Var):
            comp = var_bits[u.name]
        else:
            children = [ev(arg) for arg in u.args]
            comp = [np.zeros(total, dtype=np.uint8) for _ in range(width)]
            for out_idx, rule in a.rules.get(u.op, {}).items():
                acc = np.full(total, rule.const, dtype=np.uint8)
                for arg, src in rule.sources:
                    acc = acc ^ children[arg - 1][pos[src]]
                comp[pos[out_idx]] = acc
        memo[u] = comp
        return comp

    sv, tv = ev(s), ev(t)
    if width == 0:
        return False
    differs = np.zeros(total, dtype=bool)
    for p in range(width):
        differs |= sv[p] != tv[p]
    return bool(differs.all())


# -- products ---------------------------------------------------------------


def product_index_map(algebras: list[FiniteAlgebra]) -> dict[tuple[int, int], int]:
    """Relabeling of per-factor indices into the product's index line.

    Tags each factor's indices with the factor position, then numbers the
    tagged pairs consecutively, factor-major.  Deterministic, so callers can
    reconstruct which product component came from where.
    """
    tagged = [
        (fid, idx) for fid, a in enumerate(algebras) for idx in a.indices
    ]
    return {pair: n for n, pair in enumerate(tagged)}


def product(algebras: list[FiniteAlgebra], sig: Signature | None = None) -> FiniteAlgebra:
    """Componentwise product over a shared signature.

    The factors' index sets are kept disjoint by tagging, then renumbered.
    The empty product is the one-element algebra (no indices at all).
    """
    if not algebras:
        if sig is None:
            raise ValueError("empty product needs an explicit signature")
        return FiniteAlgebra(sig, (), {})
    first = algebras[0].signature
    for a in algebras[1:]:
        if a.signature != first:
            raise ValueError("product factors must share one signature")
    if sig is not None and sig != first:
        raise ValueError("product factors must share the given signature")
    remap = product_index_map(algebras)
    rules: dict[str, dict[int, ComponentRule]] = {}
    for fid, a in enumerate(algebras):
        for op, per_op in a.rules.items():
            for out, rule in per_op.items():
                rules.setdefault(op, {})[remap[(fid, out)]] = ComponentRule(
                    frozenset((arg, remap[(fid, src)]) for arg, src in rule.sources),
                    rule.const,
                )
    rules = {op: dict(sorted(per.items())) for op, per in sorted(rules.items())}
    return FiniteAlgebra(first, tuple(range(len(remap))), rules)


# -- serialization ----------------------------------------------------------


class AlgebraSyntaxError(ValueError):
    """Malformed serialized algebra."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


def format_algebra(a: FiniteAlgebra) -> str:
    """Canonical text form: index header, then one line per assignment.

    A component with several sources takes several lines (they XOR); a
    constant bit rides on the last source line as `+ 1`, or stands alone
    as `f[k] := 1`.  Operations with no rules are omitted (they are zero).
    """
    lines = ["indices: " + ",".join(str(i) for i in a.indices)]
    for op in sorted(a.rules):
        for out in sorted(a.rules[op]):
            rule = a.rules[op][out]
            sources = sorted(rule.sources)
            if not sources:
                lines.append(f"{op}[{out}] := 1")
                continue
            for n, (arg, src) in enumerate(sources):
                tail = " + 1" if rule.const and n == len(sources) - 1 else ""
                lines.append(f"{op}[{out}] := x_{arg}[{src}]{tail}")
    return "\n".join(lines) + "\n"


_HEADER_RE = re.compile(r"indices:\s*(.*)$")
_ASSIGN_RE = re.compile(
    r"(?P<op>[A-Za-z_][A-Za-z0-9_]*)\[(?P<out>\d+)\]\s*:=\s*"
    r"(?:x_(?P<arg>\d+)\[(?P<src>\d+)\](?P<tweak>\s*\+\s*1)?|(?P<one>1))\s*$"
)


def parse_algebra(text: str, sig: Signature) -> FiniteAlgebra:
    """Inverse of format_algebra; tolerant of blank lines and # comments."""
    lines = [
        (n, line.strip())
        for n, line in enumerate(text.splitlines(), 1)
        if line.strip() and not line.strip().startswith("#")
    ]
    if not lines:
        raise AlgebraSyntaxError("empty algebra text")
    header_no, header = lines[0]
    m = _HEADER_RE.match(header)
    if m is None:
        raise AlgebraSyntaxError("expected an `indices:` header", header_no)
    body = m.group(1).strip()
    try:
        indices = tuple(sorted({int(p) for p in body.split(",") if p.strip()})) if body else ()
    except ValueError:
        raise AlgebraSyntaxError("indices must be integers", header_no) from None
    summands: list[Transformation] = []
    for n, line in lines[1:]:
        m = _ASSIGN_RE.match(line)
        if m is None:
            raise AlgebraSyntaxError(f"unrecognized assignment {line!r}", n)
        op, out = m.group("op"), int(m.group("out"))
        if op not in sig:
            raise AlgebraSyntaxError(f"undeclared operation {op!r}", n)
        if m.group("one"):
            summands.append(FlagConst(op, out))
        else:
            arg, src = int(m.group("arg")), int(m.group("src"))
            if not 1 <= arg <= sig.arity(op):
                raise AlgebraSyntaxError(
                    f"argument x_{arg} out of range for {op}/{sig.arity(op)}", n
                )
            if m.group("tweak"):
                summands.append(TweakedAssign(op, out, arg, src))
            else:
                summands.append(Assign(op, out, arg, src))
    built = alg_of(summands, sig)
    missing = [i for i in built.indices if i not in indices and (i != 0 or summands)]
    if summands and missing:
        raise AlgebraSyntaxError(
            "assignments reference indices missing from the header: "
            + ",".join(str(i) for i in missing)
        )
    return FiniteAlgebra(sig, indices, built.rules)
