"""Property formulas over agent beliefs.

Grammar, loosest binding first::

    formula := disj ( '->' formula )?          right associative
    disj    := conj ( '|' conj )*
    conj    := unary ( '&' unary )*
    unary   := '!' unary | 'G' unary | '(' formula ')' | atom
    atom    := 'B' '(' agent ',' term ')'
    term    := name ( '(' term ( ',' term )* ')' )?

``G`` is "always". Names are identifiers or non-negative integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .terms import Term


class PropertyParseError(ValueError):
    def __init__(self, message: str, position: int, text: str = "") -> None:
        self.message = message
        self.position = position
        self.text = text
        super().__init__(f"column {position + 1}: {message}")


@dataclass(frozen=True)
class Atom:
    agent: str
    predicate: Term

    def __str__(self) -> str:
        return f"B({self.agent},{self.predicate})"


@dataclass(frozen=True)
class Not:
    sub: Formula

    def __str__(self) -> str:
        return f"!{self.sub}"


@dataclass(frozen=True)
class Always:
    sub: Formula

    def __str__(self) -> str:
        return f"G {self.sub}"


@dataclass(frozen=True)
class And:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} & {self.right})"


@dataclass(frozen=True)
class Or:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} | {self.right})"


@dataclass(frozen=True)
class Implies:
    left: Formula
    right: Formula

    def __str__(self) -> str:
        return f"({self.left} -> {self.right})"


Formula = Union[Atom, Not, Always, And, Or, Implies]

_TOKEN_RE = re.compile(r"\s*(?:(->)|([()!&|,])|([A-Za-z_][A-Za-z0-9_]*|[0-9]+))")


@dataclass(frozen=True)
class _Token:
    kind: str  # "op", "name" or "eof"
    value: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            tokens.append(_Token("eof", "", pos))
            return tokens
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise PropertyParseError(f"unexpected character {text[pos]!r}", pos, text)
        start = m.start(m.lastindex)
        value = m.group(m.lastindex)
        tokens.append(_Token("name" if m.lastindex == 3 else "op", value, start))
        pos = m.end()


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: _Token | None = None) -> PropertyParseError:
        tok = tok or self.tok
        found = "end of input" if tok.kind == "eof" else repr(tok.value)
        return PropertyParseError(f"{message}, found {found}", tok.pos, self.text)

    def accept(self, value: str) -> bool:
        if self.tok.kind == "op" and self.tok.value == value:
            self.i += 1
            return True
        return False

    def expect(self, value: str) -> None:
        if not self.accept(value):
            raise self.error(f"expected {value!r}")

    def name(self) -> str:
        if self.tok.kind != "name":
            raise self.error("expected a name")
        value = self.tok.value
        self.i += 1
        return value

    def parse(self) -> Formula:
        f = self.formula()
        if self.tok.kind != "eof":
            raise self.error("expected end of formula")
        return f

    def formula(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.formula())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.accept("|"):
            left = Or(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.accept("&"):
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        tok = self.tok
        if self.accept("!"):
            return Not(self.unary())
        if self.accept("("):
            f = self.formula()
            self.expect(")")
            return f
        if tok.kind == "name" and tok.value == "G":
            self.i += 1
            return Always(self.unary())
        if tok.kind == "name" and tok.value == "B":
            return self.atom()
        raise self.error("expected '!', 'G', '(' or an atom B(agent, term)")

    def atom(self) -> Atom:
        self.name()  # the B
        self.expect("(")
        agent = self.name()
        self.expect(",")
        predicate = self.term()
        self.expect(")")
        return Atom(agent, predicate)

    def term(self) -> Term:
        functor = self.name()
        if not self.accept("("):
            return Term(functor)
        args = [self.term()]
        while self.accept(","):
            args.append(self.term())
        self.expect(")")
        return Term(functor, tuple(args))


def parse_property(text: str) -> Formula:
    return _Parser(text).parse()


def parse_property_file(text: str) -> list[tuple[int, str, Formula]]:
    """Parse one formula per line; blank lines and ``#`` comments are skipped.

    Returns ``(line_number, source, formula)`` triples. Errors carry the line
    number in their message.
    """
    result = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            result.append((number, line, parse_property(line)))
        except PropertyParseError as exc:
            raise PropertyParseError(f"line {number}: {exc.message}", exc.position, line) from None
    return result


def atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, (Not, Always)):
        yield from atoms(f.sub)
    else:
        yield from atoms(f.left)
        yield from atoms(f.right)
