"""First-order terms over ranked signatures: parsing, printing, subterm paths.

Terms are immutable trees built from variables and operation applications.
A path addresses a subterm by the sequence of (operation, argument-index)
steps taken from the root, with argument indices counted from 1.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, NamedTuple

__all__ = [
    "App",
    "EMPTY_PATH",
    "Occurrence",
    "Path",
    "PathStep",
    "Signature",
    "Term",
    "TermSyntaxError",
    "Var",
    "find_subterm_paths",
    "format_path",
    "format_term",
    "load_signature",
    "occurrences",
    "parse_signature",
    "parse_term",
    "parse_term_prefix",
    "render_tree",
    "rename_canonical",
    "substitute",
    "subterm_at",
    "term_key",
    "term_size",
    "variables",
]

_IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_SIG_LINE_RE = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*/\s*(\d+)")


class TermSyntaxError(ValueError):
    """Malformed term, signature, or sentence text."""

    def __init__(self, message: str, pos: int | None = None):
        if pos is not None:
            message = f"{message} (at offset {pos})"
        super().__init__(message)
        self.pos = pos


@dataclass(frozen=True)
class Signature:
    """Finitely many ranked operation symbols.  Constants have arity 0."""

    arities: dict[str, int]

    def __post_init__(self) -> None:
        for name, arity in self.arities.items():
            if not _IDENT_RE.fullmatch(name):
                raise ValueError(f"bad operation name {name!r}")
            if not isinstance(arity, int) or arity < 0:
                raise ValueError(f"bad arity for {name!r}: {arity!r}")

    def __contains__(self, name: str) -> bool:
        return name in self.arities

    def arity(self, name: str) -> int:
        try:
            return self.arities[name]
        except KeyError:
            raise ValueError(f"unknown operation {name!r}") from None

    def names(self) -> tuple[str, ...]:
        return tuple(sorted(self.arities))

    @classmethod
    def parse(cls, text: str) -> "Signature":
        """Parse `name/arity` lines; blank lines and `#` comments are skipped."""
        entries: dict[str, int] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = _SIG_LINE_RE.fullmatch(line)
            if m is None:
                raise TermSyntaxError(f"bad signature entry on line {lineno}: {raw.strip()!r}")
            name = m.group(1)
            if name in entries:
                raise TermSyntaxError(f"duplicate operation {name!r} on line {lineno}")
            entries[name] = int(m.group(2))
        return cls(entries)


def parse_signature(text: str) -> Signature:
    return Signature.parse(text)


def load_signature(path: str) -> Signature:
    with open(path, encoding="utf-8") as handle:
        return Signature.parse(handle.read())


@dataclass(frozen=True)
class Var:
    """A variable leaf."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class App:
    """An operation applied to argument terms.  Constants carry no arguments."""

    op: str
    args: tuple["Term", ...] = ()

    def __str__(self) -> str:
        return format_term(self)


Term = Var | App

PathStep = tuple[str, int]
Path = tuple[PathStep, ...]
EMPTY_PATH: Path = ()


class Occurrence(NamedTuple):
    path: Path
    subterm: Term


def term_key(t: Term):
    """Total order key on terms: variables before applications, then structural."""
    if isinstance(t, Var):
        return (0, t.name)
    return (1, t.op, len(t.args), tuple(term_key(a) for a in t.args))


def term_size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(term_size(a) for a in t.args)


def variables(t: Term) -> tuple[str, ...]:
    """Variable names in order of first appearance (preorder)."""
    seen: dict[str, None] = {}

    def go(u: Term) -> None:
        if isinstance(u, Var):
            seen.setdefault(u.name, None)
        else:
            for a in u.args:
                go(a)

    go(t)
    return tuple(seen)


def subterm_at(t: Term, path: Path) -> Term:
    """The subterm reached from the root by `path`.

    Each step must name the operation at the current node and a valid
    1-based argument position.
    """
    cur = t
    for depth, (op, i) in enumerate(path):
        if not isinstance(cur, App) or cur.op != op or not 1 <= i <= len(cur.args):
            raise ValueError(
                f"path {format_path(path)} does not exist in {format_term(t)} "
                f"(failed at step {depth + 1})"
            )
        cur = cur.args[i - 1]
    return cur


def occurrences(t: Term) -> list[Occurrence]:
    """All (path, subterm) pairs of `t` in preorder, starting with the root."""
    out: list[Occurrence] = []

    def go(u: Term, path: Path) -> None:
        out.append(Occurrence(path, u))
        if isinstance(u, App):
            for i, a in enumerate(u.args, 1):
                go(a, path + ((u.op, i),))

    go(t, EMPTY_PATH)
    return out


def find_subterm_paths(needle: Term, hay: Term) -> list[Path]:
    """Paths of every occurrence of `needle` inside `hay`, in preorder."""
    return [path for path, sub in occurrences(hay) if sub == needle]


def substitute(t: Term, mapping: Mapping[str, Term]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    return App(t.op, tuple(substitute(a, mapping) for a in t.args))


def rename_canonical(t: Term, stem: str = "v") -> Term:
    """Rename variables to stem0, stem1, ... in order of first appearance.

    Two terms are equal after canonical renaming exactly when one is the
    other with variables renamed bijectively.
    """
    names: dict[str, str] = {}

    def go(u: Term) -> Term:
        if isinstance(u, Var):
            if u.name not in names:
                names[u.name] = f"{stem}{len(names)}"
            return Var(names[u.name])
        return App(u.op, tuple(go(a) for a in u.args))

    return go(t)


def format_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.op
    return f"{t.op}({','.join(format_term(a) for a in t.args)})"


def format_path(path: Path) -> str:
    if not path:
        return "Λ"
    return ".".join(f"{op}{i}" for op, i in path)


def render_tree(t: Term) -> str:
    """One node per line, children indented two spaces below their parent."""
    lines: list[str] = []

    def go(u: Term, depth: int) -> None:
        lines.append("  " * depth + (u.name if isinstance(u, Var) else u.op))
        if isinstance(u, App):
            for a in u.args:
                go(a, depth + 1)

    go(t, 0)
    return "\n".join(lines)


class _TermParser:
    def __init__(self, text: str, sig: Signature):
        self.text = text
        self.sig = sig
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def error(self, message: str, pos: int | None = None):
        raise TermSyntaxError(message, self.pos if pos is None else pos)

    def term(self) -> Term:
        self.skip_ws()
        m = _IDENT_RE.match(self.text, self.pos)
        if m is None:
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            self.error(f"expected an identifier, found {found!r}")
        name = m.group(0)
        start = self.pos
        self.pos = m.end()
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == "(":
            if name not in self.sig:
                self.error(f"unknown operation {name!r}", start)
            self.pos += 1
            args: list[Term] = []
            self.skip_ws()
            if self.pos < len(self.text) and self.text[self.pos] == ")":
                self.pos += 1
            else:
                while True:
                    args.append(self.term())
                    self.skip_ws()
                    if self.pos >= len(self.text):
                        self.error("unterminated argument list")
                    ch = self.text[self.pos]
                    self.pos += 1
                    if ch == ")":
                        break
                    if ch != ",":
                        self.error(f"expected ',' or ')', found {ch!r}", self.pos - 1)
            want = self.sig.arity(name)
            if len(args) != want:
                self.error(
                    f"operation {name!r} takes {want} argument(s), got {len(args)}", start
                )
            return App(name, tuple(args))
        if name in self.sig:
            want = self.sig.arity(name)
            if want != 0:
                self.error(f"operation {name!r} takes {want} argument(s), got 0", start)
            return App(name, ())
        return Var(name)


def parse_term(text: str, sig: Signature) -> Term:
    """Parse a complete term.  Whitespace is insignificant.

    Any identifier that is not a declared operation parses as a variable.
    """
    parser = _TermParser(text, sig)
    t = parser.term()
    parser.skip_ws()
    if parser.pos != len(text):
        parser.error(f"unexpected trailing input {text[parser.pos:]!r}")
    return t


def parse_term_prefix(text: str, pos: int, sig: Signature) -> tuple[Term, int]:
    """Parse one term starting at `pos`; return it and the offset just past it."""
    parser = _TermParser(text, sig)
    parser.pos = pos
    t = parser.term()
    return t, parser.pos
