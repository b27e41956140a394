"""Propositional sentences: AST, parser, canonical rendering and evaluation.

Concrete syntax, loosest to tightest binding::

    <->   biconditional (right-associative)
    ->    implication (right-associative); ``=>`` and ``⇒`` are aliases
    |     disjunction
    &     conjunction
    !     negation (prefix)

Parentheses override precedence and whitespace is insignificant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .errors import ParseError

ATOM_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class Atom:
    name: str

    def __post_init__(self):
        if not ATOM_RE.fullmatch(self.name):
            raise ValueError(f"invalid atom name {self.name!r}")


@dataclass(frozen=True)
class Not:
    child: "Sentence"


@dataclass(frozen=True)
class And:
    left: "Sentence"
    right: "Sentence"


@dataclass(frozen=True)
class Or:
    left: "Sentence"
    right: "Sentence"


@dataclass(frozen=True)
class Implies:
    left: "Sentence"
    right: "Sentence"


@dataclass(frozen=True)
class Iff:
    left: "Sentence"
    right: "Sentence"


Sentence = Union[Atom, Not, And, Or, Implies, Iff]

_BINARY_SYMBOL = {And: "&", Or: "|", Implies: "->", Iff: "<->"}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<atom>[A-Za-z_][A-Za-z0-9_]*)|(?P<op><->|->|=>|⇒|[!&|()]))"
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", position=bad)
        start = m.start("atom") if m.group("atom") else m.start("op")
        if m.group("atom"):
            tokens.append(("atom", m.group("atom"), start))
        else:
            op = m.group("op")
            if op in ("=>", "⇒"):
                op = "->"
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def accept(self, op):
        kind, value, _ = self.peek()
        if kind == "op" and value == op:
            self.i += 1
            return True
        return False

    def parse(self):
        node = self.iff()
        kind, value, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected token {value!r}", position=pos)
        return node

    def iff(self):
        left = self.implies()
        if self.accept("<->"):
            return Iff(left, self.iff())
        return left

    def implies(self):
        left = self.disjunction()
        if self.accept("->"):
            return Implies(left, self.implies())
        return left

    def disjunction(self):
        node = self.conjunction()
        while self.accept("|"):
            node = Or(node, self.conjunction())
        return node

    def conjunction(self):
        node = self.unary()
        while self.accept("&"):
            node = And(node, self.unary())
        return node

    def unary(self):
        if self.accept("!"):
            return Not(self.unary())
        kind, value, pos = self.peek()
        if kind == "atom":
            self.i += 1
            return Atom(value)
        if self.accept("("):
            node = self.iff()
            if not self.accept(")"):
                _, value, pos = self.peek()
                found = "end of input" if value is None else repr(value)
                raise ParseError(f"expected ')' but found {found}", position=pos)
            return node
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"expected atom, '!' or '(' but found {found}", position=pos)


def parse(text: str) -> Sentence:
    """Parse ``text`` into a sentence AST.

    >>> parse("A1 & A2 & A3 -> B")
    Implies(left=And(left=And(left=Atom(name='A1'), right=Atom(name='A2')), right=Atom(name='A3')), right=Atom(name='B'))
    """
    if not text or not text.strip():
        raise ParseError("empty formula")
    return _Parser(text).parse()


def to_text(s: Sentence) -> str:
    """Canonical fully parenthesized rendering; atoms are left bare."""
    if isinstance(s, Atom):
        return s.name
    if isinstance(s, Not):
        return f"(!{to_text(s.child)})"
    return f"({to_text(s.left)} {_BINARY_SYMBOL[type(s)]} {to_text(s.right)})"


def evaluate(s: Sentence, assignment: Mapping[str, bool]) -> bool:
    if isinstance(s, Atom):
        try:
            return bool(assignment[s.name])
        except KeyError:
            raise KeyError(f"atom {s.name!r} missing from assignment") from None
    if isinstance(s, Not):
        return not evaluate(s.child, assignment)
    left = evaluate(s.left, assignment)
    right = evaluate(s.right, assignment)
    if isinstance(s, And):
        return left and right
    if isinstance(s, Or):
        return left or right
    if isinstance(s, Implies):
        return (not left) or right
    if isinstance(s, Iff):
        return left == right
    raise TypeError(f"not a sentence: {s!r}")


def atoms_of(s: Sentence) -> list[str]:
    """Distinct atom names in first-appearance (left-to-right) order."""
    return atoms_of_all([s])


def atoms_of_all(sentences: Iterable[Sentence]) -> list[str]:
    """Atom table for a sentence list: first appearance across the whole list."""
    seen: dict[str, None] = {}

    def walk(node):
        if isinstance(node, Atom):
            seen.setdefault(node.name, None)
        elif isinstance(node, Not):
            walk(node.child)
        else:
            walk(node.left)
            walk(node.right)

    for s in sentences:
        walk(s)
    return list(seen)
