"""Modal formulas: tree types, concrete syntax, measures and enumeration.

Grammar (ASCII)::

    formula := disj
    disj    := conj { "|" conj }
    conj    := unary { "&" unary }
    unary   := "!" unary | "<>" unary | "[]" unary | atom
    atom    := "true" | "false" | ident | "(" formula ")"

``&`` binds tighter than ``|``; both are n-ary and left-associative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ParseError, ResourceCapError

__all__ = [
    "Formula", "Top", "Bot", "Atom", "Not", "And", "Or", "Dia", "Box",
    "TOP", "BOT", "Alphabet", "make_alphabet",
    "parse_formula", "print_formula", "modal_depth", "formula_size", "atoms",
    "conj", "disj", "neg", "canonicalize", "enumerate_formulas",
    "DEFAULT_ENUMERATION_CAP",
]

DEFAULT_ENUMERATION_CAP = 10**6

Alphabet = tuple  # ordered, duplicate-free tuple of proposition names

KEYWORDS = frozenset({"true", "false"})
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

# binding strength used by the printer
_PREC_OR, _PREC_AND, _PREC_UNARY, _PREC_ATOM = 1, 2, 3, 4


class Formula:
    """Base class of formula nodes. Instances are immutable and hashable."""

    __slots__ = ()

    children: tuple = ()

    @cached_property
    def text(self) -> str:
        return print_formula(self)

    @cached_property
    def size(self) -> int:
        return 1 + sum(c.size for c in self.children)

    @cached_property
    def depth(self) -> int:
        return modal_depth(self)

    def __str__(self):
        return self.text

    def __and__(self, other):
        return conj([self, other])

    def __or__(self, other):
        return disj([self, other])

    def __invert__(self):
        return Not(self)


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self):
        return "Top()"


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    def __repr__(self):
        return "Bot()"


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def __post_init__(self):
        if not _IDENT.fullmatch(self.name) or self.name in KEYWORDS:
            raise ValueError(f"invalid proposition name {self.name!r}")


@dataclass(frozen=True)
class Not(Formula):
    child: Formula

    @property
    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class Dia(Formula):
    child: Formula

    @property
    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class Box(Formula):
    child: Formula

    @property
    def children(self):
        return (self.child,)


@dataclass(frozen=True)
class And(Formula):
    children: tuple

    def __init__(self, *children):
        if len(children) == 1 and not isinstance(children[0], Formula):
            children = tuple(children[0])
        if len(children) < 2:
            raise ValueError("And needs at least two children")
        object.__setattr__(self, "children", tuple(children))


@dataclass(frozen=True)
class Or(Formula):
    children: tuple

    def __init__(self, *children):
        if len(children) == 1 and not isinstance(children[0], Formula):
            children = tuple(children[0])
        if len(children) < 2:
            raise ValueError("Or needs at least two children")
        object.__setattr__(self, "children", tuple(children))


TOP = Top()
BOT = Bot()


def make_alphabet(props: Iterable[str]) -> Alphabet:
    """Ordered alphabet: first occurrence wins, duplicates dropped."""
    out = []
    for p in props:
        Atom(p)  # validates the identifier
        if p not in out:
            out.append(p)
    return tuple(out)


# --------------------------------------------------------------------------
# measures

def modal_depth(f: Formula) -> int:
    if isinstance(f, (Dia, Box)):
        return 1 + f.child.depth
    if f.children:
        return max(c.depth for c in f.children)
    return 0


def formula_size(f: Formula) -> int:
    """Node count."""
    return f.size


def atoms(f: Formula) -> frozenset:
    if isinstance(f, Atom):
        return frozenset([f.name])
    out = frozenset()
    for c in f.children:
        out |= atoms(c)
    return out


# --------------------------------------------------------------------------
# printing

def _prec(f):
    if isinstance(f, Or):
        return _PREC_OR
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, (Not, Dia, Box)):
        return _PREC_UNARY
    return _PREC_ATOM


def _wrap(f, floor):
    # nested n-ary nodes of the same kind keep their parentheses so the tree round-trips
    if _prec(f) < floor or (floor == _PREC_AND and isinstance(f, And)):
        return f"({f.text})"
    return f.text


def print_formula(f: Formula) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return "!" + _wrap(f.child, _PREC_UNARY)
    if isinstance(f, Dia):
        return "<> " + _wrap(f.child, _PREC_UNARY)
    if isinstance(f, Box):
        return "[] " + _wrap(f.child, _PREC_UNARY)
    if isinstance(f, And):
        return " & ".join(_wrap(c, _PREC_UNARY if isinstance(c, Or) else _PREC_AND) for c in f.children)
    if isinstance(f, Or):
        return " | ".join(f"({c.text})" if isinstance(c, Or) else c.text for c in f.children)
    raise TypeError(f"not a formula: {f!r}")


# --------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(<>|\[\]|[!&|()])|([A-Za-z_][A-Za-z0-9_]*))")


def _tokenize(text):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.start(m.lastindex) != pos:
            raise ParseError(f"unexpected character {text[pos]!r}", offset=pos)
        tokens.append((m.group(m.lastindex), pos))
        pos = m.end()
    tokens.append(("<eof>", n))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, expected):
        tok, off = self.tokens[self.i]
        found = "end of input" if tok == "<eof>" else repr(tok)
        raise ParseError(f"expected {expected}, found {found}", offset=off)

    def formula(self):
        items = [self.conj()]
        while self.peek() == "|":
            self.take()
            items.append(self.conj())
        return items[0] if len(items) == 1 else Or(items)

    def conj(self):
        items = [self.unary()]
        while self.peek() == "&":
            self.take()
            items.append(self.unary())
        return items[0] if len(items) == 1 else And(items)

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok == "<>":
            self.take()
            return Dia(self.unary())
        if tok == "[]":
            self.take()
            return Box(self.unary())
        return self.atom()

    def atom(self):
        tok = self.peek()
        if tok == "true":
            self.take()
            return TOP
        if tok == "false":
            self.take()
            return BOT
        if tok == "(":
            self.take()
            f = self.formula()
            if self.peek() != ")":
                self.fail("')'")
            self.take()
            return f
        if _IDENT.fullmatch(tok):
            self.take()
            return Atom(tok)
        self.fail("proposition, 'true', 'false', '(', '!', '<>' or '[]'")


def parse_formula(text: str) -> Formula:
    """Parse ``text`` into a formula tree.

    Raises:
        ParseError: with the byte offset of the offending token.
    """
    if not text.isascii():
        bad = next(i for i, ch in enumerate(text) if not ch.isascii())
        raise ParseError("formula text must be ASCII", offset=len(text[:bad].encode()))
    p = _Parser(text)
    f = p.formula()
    if p.peek() != "<eof>":
        p.fail("'&', '|' or end of input")
    return f


# --------------------------------------------------------------------------
# smart constructors used by the synthesis procedures

def _dedup(items):
    seen = set()
    out = []
    for f in items:
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out


def conj(items: Iterable[Formula], sort: bool = True) -> Formula:
    """n-ary conjunction: duplicates dropped, empty -> true, singleton -> itself."""
    items = _dedup(items)
    if sort:
        items.sort(key=lambda f: f.text)
    if not items:
        return TOP
    if len(items) == 1:
        return items[0]
    return And(items)


def disj(items: Iterable[Formula], sort: bool = True) -> Formula:
    """n-ary disjunction: duplicates dropped, empty -> false, singleton -> itself."""
    items = _dedup(items)
    if sort:
        items.sort(key=lambda f: f.text)
    if not items:
        return BOT
    if len(items) == 1:
        return items[0]
    return Or(items)


def neg(f: Formula) -> Formula:
    """Negation that strips an existing outer negation."""
    return f.child if isinstance(f, Not) else Not(f)


def canonicalize(f: Formula) -> Formula:
    """Sort And/Or children by printed form and drop duplicate children.

    Purely syntactic: no flattening and no Boolean simplification.
    """
    if isinstance(f, (And, Or)):
        kids = [canonicalize(c) for c in f.children]
        return (conj if isinstance(f, And) else disj)(kids)
    if isinstance(f, (Not, Dia, Box)):
        return type(f)(canonicalize(f.child))
    return f


# --------------------------------------------------------------------------
# enumeration

def _subsets_with_sum(pool, total, start=0, acc=()):
    # pool: list of (size, formula) sorted by printed form; yields tuples of >= 1 members
    for i in range(start, len(pool)):
        size, f = pool[i]
        if size > total:
            continue
        if size == total:
            yield acc + (f,)
        else:
            yield from _subsets_with_sum(pool, total - size, i + 1, acc + (f,))


def enumerate_formulas(
    alphabet: Sequence[str],
    max_depth: int,
    max_size: int,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> list:
    """Every canonical formula over ``alphabet`` within the depth and size bounds.

    Canonical means And/Or children are distinct and sorted by printed form.
    The result is ordered by (modal depth, size, printed form).

    Raises:
        ResourceCapError: if more than ``cap`` formulas would be produced.
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    alphabet = make_alphabet(alphabet)
    by_size = {1: [TOP, BOT] + [Atom(p) for p in alphabet]}
    count = len(by_size[1])

    def bump(k):
        nonlocal count
        count += k
        if count > cap:
            raise ResourceCapError(f"formula enumeration exceeds cap of {cap}")

    bump(0)
    for s in range(2, max_size + 1):
        layer = []
        for f in by_size[s - 1]:
            layer.append(Not(f))
            if f.depth < max_depth:
                layer.append(Dia(f))
                layer.append(Box(f))
        if s >= 3:
            pool = sorted(
                ((k, f) for k in range(1, s - 1) for f in by_size[k]),
                key=lambda kf: kf[1].text,
            )
            for combo in _subsets_with_sum(pool, s - 1):
                if len(combo) >= 2:
                    layer.append(And(combo))
                    layer.append(Or(combo))
                    if count + len(layer) > cap:
                        bump(len(layer))
        bump(len(layer))
        by_size[s] = layer
    out = [f for s in sorted(by_size) for f in by_size[s]]
    out.sort(key=lambda f: (f.depth, f.size, f.text))
    return out
