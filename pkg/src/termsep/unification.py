"""Syntactic unification as saturation of an equivalence on subterms.

Two terms unify exactly when the smallest equivalence on their subterms that
contains the root pair and is closed under argument decomposition is both
homogeneous (no class holds applications of two different operations) and
acyclic (no class is equivalent, through a chain of statements, to a proper
subterm of itself).  Every merge performed during saturation is recorded, so
any derivable statement can be justified by a deduction built from three
rules: the root pair is given, equal paths below both sides of a statement
may be descended in one step, and adjacent statements chain transitively.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import islice, product as _iter_product
from typing import Iterator

from .terms import (
    App,
    Path,
    PathStep,
    Term,
    Var,
    find_subterm_paths,
    format_term,
    occurrences,
    subterm_at,
    term_key,
    term_size,
    variables,
)

__all__ = [
    "Base",
    "Closure",
    "ConflictWitness",
    "CycleLink",
    "CycleWitness",
    "Decompose",
    "Derivation",
    "Failed",
    "Statement",
    "Transitive",
    "Unifiable",
    "UnifyOutcome",
    "check_acyclic",
    "check_homogeneous",
    "close",
    "conflict_witnesses",
    "cycle_witnesses",
    "derivation_size",
    "extract_mgu",
    "statement_key",
    "unify",
    "verify_derivation",
]


def statement_key(t: Term) -> tuple:
    """Order terms small-to-large, then structurally."""
    return (term_size(t), term_key(t))


@dataclass(frozen=True)
class Statement:
    """An unordered pair of distinct terms asserted equivalent."""

    left: Term
    right: Term

    @staticmethod
    def of(a: Term, b: Term) -> "Statement":
        if a == b:
            raise ValueError(f"trivial statement about {format_term(a)}")
        if statement_key(b) < statement_key(a):
            a, b = b, a
        return Statement(a, b)

    def sides(self) -> tuple[Term, Term]:
        return (self.left, self.right)

    def __str__(self) -> str:
        return f"{format_term(self.left)} ≡ {format_term(self.right)}"


@dataclass(frozen=True)
class Base:
    """The root statement: the two input terms are asserted equivalent."""


@dataclass(frozen=True)
class Decompose:
    """Derived by descending to the same path below both sides of `parent`."""

    parent: Statement
    path: Path


@dataclass(frozen=True)
class Transitive:
    """Derived by chaining adjacent statements end to end."""

    chain: tuple[Statement, ...]


Derivation = Base | Decompose | Transitive


@dataclass(frozen=True)
class _Edge:
    """One recorded merge.  `parent`/`step` are None for the root merge;
    otherwise the merge was of the `step`-th arguments of the parent pair."""

    left: Term
    right: Term
    parent: tuple[Term, Term] | None
    step: PathStep | None


class Closure:
    """The saturated equivalence together with its recorded deductions."""

    def __init__(self, s: Term, t: Term):
        self.source: tuple[Term, Term] = (s, t)
        self.root: Statement | None = Statement.of(s, t) if s != t else None
        seen: dict[Term, None] = {}
        for origin in (s, t):
            for _, sub in occurrences(origin):
                seen.setdefault(sub, None)
        self.universe: tuple[Term, ...] = tuple(seen)
        self._index: dict[Term, int] = {u: i for i, u in enumerate(self.universe)}
        self._parent: dict[Term, Term] = {u: u for u in self.universe}
        self._size: dict[Term, int] = {u: 1 for u in self.universe}
        self._members: dict[Term, list[Term]] = {u: [u] for u in self.universe}
        self._apps: dict[Term, dict[str, list[App]]] = {}
        for u in self.universe:
            if isinstance(u, App):
                self._apps[u] = {u.op: [u]}
            else:
                self._apps[u] = {}
        self._adjacent: dict[Term, list[_Edge]] = defaultdict(list)
        self._edges: list[_Edge] = []
        self._derive_memo: dict[Statement, Derivation] = {}
        self._size_memo: dict[Statement, int] = {}

    # -- union-find ------------------------------------------------------

    def _find(self, u: Term) -> Term:
        root = u
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[u] != root:
            self._parent[u], u = root, self._parent[u]
        return root

    def find(self, u: Term) -> Term:
        """Class representative of `u` (an arbitrary but fixed member)."""
        if u not in self._parent:
            raise ValueError(f"{format_term(u)} is not a subterm of the inputs")
        return self._find(u)

    def same(self, a: Term, b: Term) -> bool:
        return self.find(a) == self.find(b)

    def members(self, u: Term) -> tuple[Term, ...]:
        return tuple(
            sorted(self._members[self.find(u)], key=self._index.__getitem__)
        )

    def classes(self) -> tuple[tuple[Term, ...], ...]:
        """All classes; members and classes ordered by first appearance."""
        groups: dict[Term, list[Term]] = defaultdict(list)
        for u in self.universe:
            groups[self._find(u)].append(u)
        return tuple(
            tuple(g) for g in sorted(groups.values(), key=lambda g: self._index[g[0]])
        )

    def merged_statements(self) -> tuple[Statement, ...]:
        """The statements recorded during saturation, in merge order."""
        return tuple(Statement.of(e.left, e.right) for e in self._edges)

    # -- deduction reconstruction ---------------------------------------

    def _forest_path(self, a: Term, b: Term) -> list[tuple[Term, Term, _Edge]]:
        """The unique proof-forest path from `a` to `b` as oriented edges."""
        prev: dict[Term, tuple[Term, _Edge] | None] = {a: None}
        queue = deque([a])
        while queue:
            cur = queue.popleft()
            if cur == b:
                break
            for edge in self._adjacent[cur]:
                nxt = edge.right if edge.left == cur else edge.left
                if nxt not in prev:
                    prev[nxt] = (cur, edge)
                    queue.append(nxt)
        if b not in prev:
            raise ValueError(f"statement not derivable: {format_term(a)} ≡ {format_term(b)}")
        steps: list[tuple[Term, Term, _Edge]] = []
        cur = b
        while prev[cur] is not None:
            before, edge = prev[cur]  # type: ignore[misc]
            steps.append((before, cur, edge))
            cur = before
        steps.reverse()
        return steps

    def _edge_derivation(self, edge: _Edge) -> Derivation:
        if edge.parent is None:
            return Base()
        p, q = edge.parent
        parent_stmt = Statement.of(p, q)
        parent_deriv = self.derive(parent_stmt)
        step: Path = (edge.step,)  # type: ignore[assignment]
        if isinstance(parent_deriv, Decompose):
            # Collapse nested descents into one step with a composite path.
            return Decompose(parent_deriv.parent, parent_deriv.path + step)
        return Decompose(parent_stmt, step)

    def derive(self, stmt: Statement) -> Derivation:
        """A deduction of `stmt` whose leaves are the root statement."""
        if stmt in self._derive_memo:
            return self._derive_memo[stmt]
        hops = self._forest_path(stmt.left, stmt.right)
        if len(hops) == 1:
            d: Derivation = self._edge_derivation(hops[0][2])
        else:
            d = Transitive(tuple(Statement.of(u, v) for u, v, _ in hops))
        self._derive_memo[stmt] = d
        return d


def close(s: Term, t: Term) -> Closure:
    """Saturate the equivalence generated by s ≡ t under decomposition.

    Whenever two classes merge, every pair of applications of the same
    operation that the merge brings together has its arguments merged in
    turn, with the trigger pair recorded as the justification.
    """
    c = Closure(s, t)
    if s == t:
        return c
    pending: deque[tuple[Term, Term, tuple[Term, Term] | None, PathStep | None]] = deque()
    pending.append((s, t, None, None))
    while pending:
        a, b, parent, step = pending.popleft()
        if a == b:
            continue
        ra, rb = c._find(a), c._find(b)
        if ra == rb:
            continue
        edge = _Edge(a, b, parent, step)
        c._edges.append(edge)
        c._adjacent[a].append(edge)
        c._adjacent[b].append(edge)
        if c._size[ra] < c._size[rb]:
            ra, rb = rb, ra
        apps_a, apps_b = c._apps[ra], c._apps[rb]
        for head in sorted(set(apps_a) & set(apps_b)):
            for p in apps_a[head]:
                for q in apps_b[head]:
                    for i, (pa, qa) in enumerate(zip(p.args, q.args), 1):
                        if pa != qa:
                            pending.append((pa, qa, (p, q), (head, i)))
        c._parent[rb] = ra
        c._size[ra] += c._size[rb]
        c._members[ra].extend(c._members.pop(rb))
        for head, apps in c._apps.pop(rb).items():
            apps_a.setdefault(head, []).extend(apps)
    for u in c.universe:
        c._find(u)
    return c


# -- deduction inspection -------------------------------------------------


def verify_derivation(c: Closure, stmt: Statement, derivation: Derivation | None = None) -> bool:
    """Replay a deduction bottom-up and check each rule application."""
    d = c.derive(stmt) if derivation is None else derivation
    if isinstance(d, Base):
        return stmt == c.root
    if isinstance(d, Decompose):
        if not d.path:
            return False
        try:
            a = subterm_at(d.parent.left, d.path)
            b = subterm_at(d.parent.right, d.path)
        except ValueError:
            return False
        if a == b or Statement.of(a, b) != stmt:
            return False
        return verify_derivation(c, d.parent)
    if len(d.chain) < 2:
        return False
    for start, goal in ((stmt.left, stmt.right), (stmt.right, stmt.left)):
        cur = start
        ok = True
        for link in d.chain:
            if cur == link.left:
                cur = link.right
            elif cur == link.right:
                cur = link.left
            else:
                ok = False
                break
        if ok and cur == goal:
            return all(verify_derivation(c, link) for link in d.chain)
    return False


def derivation_size(c: Closure, stmt: Statement) -> int:
    """Number of statements in the fully unfolded deduction of `stmt`."""
    if stmt in c._size_memo:
        return c._size_memo[stmt]
    d = c.derive(stmt)
    if isinstance(d, Base):
        n = 1
    elif isinstance(d, Decompose):
        n = 1 + derivation_size(c, d.parent)
    else:
        n = 1 + sum(derivation_size(c, link) for link in d.chain)
    c._size_memo[stmt] = n
    return n


def _derivation_paths(c: Closure, stmt: Statement) -> tuple[Path, ...]:
    d = c.derive(stmt)
    if isinstance(d, Base):
        return ()
    if isinstance(d, Decompose):
        return (d.path,) + _derivation_paths(c, d.parent)
    out: tuple[Path, ...] = ()
    for link in d.chain:
        out += _derivation_paths(c, link)
    return out


# -- failure analysis ------------------------------------------------------


@dataclass(frozen=True)
class ConflictWitness:
    """Two equivalent applications of different operations."""

    stmt: Statement
    derivation: Derivation


@dataclass(frozen=True)
class CycleLink:
    """One step of a subterm cycle: `left` ≡ `right` is derivable, and
    `right` occurs at `path_in_next` inside the next link's `left`."""

    left: Term
    right: Term
    path_in_next: Path
    derivation: Derivation

    @property
    def statement(self) -> Statement:
        return Statement.of(self.left, self.right)


@dataclass(frozen=True)
class CycleWitness:
    """A cyclic chain of statements descending into proper subterms."""

    links: tuple[CycleLink, ...]


def conflict_witnesses(c: Closure) -> Iterator[ConflictWitness]:
    """All equivalent pairs of distinct-operation applications.

    Ordered by smallest deduction first, ties broken by the deduction's
    path list and then by the statement itself.
    """
    candidates = []
    for cls in c.classes():
        by_head: dict[str, list[App]] = defaultdict(list)
        for u in cls:
            if isinstance(u, App):
                by_head[u.op].append(u)
        heads = sorted(by_head)
        if len(heads) < 2:
            continue
        for i, h1 in enumerate(heads):
            for h2 in heads[i + 1 :]:
                for p in by_head[h1]:
                    for q in by_head[h2]:
                        stmt = Statement.of(p, q)
                        key = (
                            derivation_size(c, stmt),
                            _derivation_paths(c, stmt),
                            term_key(stmt.left),
                            term_key(stmt.right),
                        )
                        candidates.append((key, stmt))
    candidates.sort(key=lambda it: it[0])
    for _, stmt in candidates:
        yield ConflictWitness(stmt, c.derive(stmt))


def check_homogeneous(c: Closure) -> ConflictWitness | None:
    """None when every class sticks to one operation, else the best witness."""
    return next(conflict_witnesses(c), None)


def _has_subterm_cycle(c: Closure) -> bool:
    """Cycle detection on the class graph with immediate-subterm edges."""
    edges: dict[Term, set[Term]] = defaultdict(set)
    for u in c.universe:
        if isinstance(u, App):
            target = c.find(u)
            for a in u.args:
                edges[c.find(a)].add(target)
    WHITE, GREY, BLACK = 0, 1, 2
    color: dict[Term, int] = defaultdict(int)
    for start in {c.find(u) for u in c.universe}:
        if color[start] != WHITE:
            continue
        stack: list[tuple[Term, Iterator[Term]]] = [(start, iter(sorted(edges[start], key=term_key)))]
        color[start] = GREY
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if color[nxt] == GREY:
                    return True
                if color[nxt] == WHITE:
                    color[nxt] = GREY
                    stack.append((nxt, iter(sorted(edges[nxt], key=term_key))))
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
    return False


def cycle_witnesses(c: Closure, max_candidates: int = 512) -> Iterator[CycleWitness]:
    """Candidate subterm cycles, best first.

    Candidates come from the graph whose edge p → p' stands for "some
    q ≠ p equivalent to p occurs properly inside p'".  They are ordered by
    fewest links, then by largest total occurrence depth of the embedded
    sides within the two input terms, then structurally, so the first
    candidate is the preferred witness and later ones serve as fallbacks.
    """
    s, t = c.source
    label_edges: dict[Term, dict[Term, list[tuple[Term, Path]]]] = defaultdict(dict)
    for host in c.universe:
        if not isinstance(host, App) or not host.args:
            continue
        for path, sub in occurrences(host):
            if not path:
                continue
            for p in c.members(sub):
                if p != sub:
                    label_edges[p].setdefault(host, []).append((sub, path))
    for targets in label_edges.values():
        for labels in targets.values():
            labels.sort(key=lambda it: (len(it[1]), it[1], term_key(it[0])))
    max_depth = {
        u: max(
            (len(p) for p in find_subterm_paths(u, s) + find_subterm_paths(u, t)),
            default=0,
        )
        for u in c.universe
    }
    nodes = sorted(label_edges, key=term_key)
    emitted = 0
    for m in range(1, len(nodes) + 1):
        node_cycles: list[list[Term]] = []

        def grow(start: Term, cur: Term, trail: list[Term]) -> None:
            if len(trail) == m:
                if start in label_edges.get(cur, {}):
                    node_cycles.append(trail.copy())
                return
            for nxt in sorted(label_edges.get(cur, {}), key=term_key):
                if nxt in trail or term_key(nxt) < term_key(start):
                    continue
                trail.append(nxt)
                grow(start, nxt, trail)
                trail.pop()

        for start in nodes:
            grow(start, start, [start])

        batch = []
        for cycle in node_cycles:
            label_lists = [
                label_edges[cycle[i]][cycle[(i + 1) % m]] for i in range(m)
            ]
            for combo in islice(_iter_product(*label_lists), 64):
                score = sum(max_depth[q] for q, _ in combo)
                links = tuple(
                    (cycle[i], combo[i][0], combo[i][1]) for i in range(m)
                )
                batch.append((-score, tuple(term_key(p) for p, _, _ in links), links))
        batch.sort(key=lambda it: (it[0], it[1]))
        for _, _, raw in batch:
            yield CycleWitness(
                tuple(
                    CycleLink(p, q, sigma, c.derive(Statement.of(p, q)))
                    for p, q, sigma in raw
                )
            )
            emitted += 1
            if emitted >= max_candidates:
                return


def check_acyclic(c: Closure) -> CycleWitness | None:
    """None when no class reaches a proper subterm of itself, else a witness."""
    if not _has_subterm_cycle(c):
        return None
    witness = next(cycle_witnesses(c), None)
    if witness is None:
        raise RuntimeError("cycle detected but no witness could be assembled")
    return witness


# -- unifier extraction ----------------------------------------------------


def extract_mgu(c: Closure) -> tuple[dict[str, Term], Term]:
    """Most general unifier from a homogeneous, acyclic closure.

    Each class is represented by one member, an application whenever the
    class holds one, and representatives are rewritten recursively.  Returns
    the substitution (restricted to the input variables, identity entries
    dropped) and the unified term it produces on both inputs.
    """
    s, t = c.source
    reps: dict[Term, Term] = {}
    for cls in c.classes():
        apps = [u for u in cls if isinstance(u, App)]
        if len({a.op for a in apps}) > 1:
            raise ValueError("closure is not homogeneous")
        pool = apps or list(cls)
        reps[c.find(cls[0])] = min(pool, key=term_key)
    resolved: dict[Term, Term] = {}
    in_progress: set[Term] = set()

    def image(u: Term) -> Term:
        root = c.find(u)
        if root in resolved:
            return resolved[root]
        if root in in_progress:
            raise ValueError("closure is not acyclic")
        in_progress.add(root)
        rep = reps[root]
        if isinstance(rep, Var):
            result: Term = rep
        else:
            result = App(rep.op, tuple(image(a) for a in rep.args))
        in_progress.discard(root)
        resolved[root] = result
        return result

    unifier = image(s)
    subst: dict[str, Term] = {}
    for name in sorted(set(variables(s)) | set(variables(t))):
        img = image(Var(name))
        if img != Var(name):
            subst[name] = img
    return subst, unifier


@dataclass
class Unifiable:
    substitution: dict[str, Term]
    unifier: Term


@dataclass
class Failed:
    witness: ConflictWitness | CycleWitness
    closure: Closure


UnifyOutcome = Unifiable | Failed


def unify(s: Term, t: Term) -> UnifyOutcome:
    """Decide unifiability; produce an mgu or a replayable failure witness.

    A conflict witness is preferred over a cycle witness when both exist.
    """
    c = close(s, t)
    conflict = check_homogeneous(c)
    if conflict is not None:
        return Failed(conflict, c)
    cycle = check_acyclic(c)
    if cycle is not None:
        return Failed(cycle, c)
    subst, unifier = extract_mgu(c)
    return Unifiable(subst, unifier)
