"""Search query language: lexer, recursive-descent parser, printer.

Grammar:

    expr    := or
    or      := and ("OR" and)*
    and     := unary (("AND")? unary)*      (juxtaposition means AND)
    unary   := "NOT" unary | primary
    primary := "(" expr ")"
             | field ":" (pattern | range | quoted)
             | quoted
             | pattern
    range   := "[" lit "TO" lit "]" | "{" lit "TO" lit "}"

Patterns may contain `*` (any run) and `?` (one character).  A bare `*`
parses to MatchAll, as does empty input.  Parse errors carry the 0-based
character position and the set of token kinds that would have been accepted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

_SPECIALS = set('()[]{}:"')

Node = Union["MatchAll", "Term", "Phrase", "FieldMatch", "Range", "Not", "And", "Or"]


@dataclass(frozen=True)
class MatchAll:
    pass


@dataclass(frozen=True)
class Term:
    text: str


@dataclass(frozen=True)
class Phrase:
    text: str


@dataclass(frozen=True)
class FieldMatch:
    field: str
    pattern: str
    quoted: bool = False  # quoted patterns match literally, wildcards inert


@dataclass(frozen=True)
class Range:
    field: str
    lo: str
    hi: str
    inclusive_lo: bool
    inclusive_hi: bool


@dataclass(frozen=True)
class Not:
    child: Node


@dataclass(frozen=True)
class And:
    children: tuple[Node, ...]


@dataclass(frozen=True)
class Or:
    children: tuple[Node, ...]


class ParseError(Exception):
    def __init__(self, position: int, expected: tuple[str, ...]):
        self.position = position
        self.expected = tuple(expected)
        super().__init__(
            f"syntax error at position {position}: expected "
            + " or ".join(self.expected)
        )


@dataclass(frozen=True)
class _Token:
    kind: str  # word, quoted, (, ), [, ], {, }, :, end
    text: str
    pos: int


def _lex(q: str) -> list[_Token]:
    out: list[_Token] = []
    i, n = 0, len(q)
    while i < n:
        c = q[i]
        if c.isspace():
            i += 1
            continue
        if c == '"':
            end = q.find('"', i + 1)
            if end < 0:
                raise ParseError(n, ('"',))
            out.append(_Token("quoted", q[i + 1 : end], i))
            i = end + 1
            continue
        if c in _SPECIALS:
            out.append(_Token(c, c, i))
            i += 1
            continue
        j = i
        while j < n and not q[j].isspace() and q[j] not in _SPECIALS:
            j += 1
        out.append(_Token("word", q[i:j], i))
        i = j
    out.append(_Token("end", "", n))
    return out


_PRIMARY_EXPECTED = ("term", '"phrase"', "(", "NOT")


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str, shown: Optional[str] = None) -> _Token:
        if self.cur.kind != kind:
            raise ParseError(self.cur.pos, (shown or kind,))
        return self.advance()

    def parse(self) -> Node:
        if self.cur.kind == "end":
            return MatchAll()
        node = self.expr()
        if self.cur.kind != "end":
            raise ParseError(self.cur.pos, ("end of input",))
        return node

    def expr(self) -> Node:
        return self.or_expr()

    def or_expr(self) -> Node:
        children = [self.and_expr()]
        while self.cur.kind == "word" and self.cur.text == "OR":
            self.advance()
            children.append(self.and_expr())
        if len(children) == 1:
            return children[0]
        flat: list[Node] = []
        for c in children:
            flat.extend(c.children) if isinstance(c, Or) else flat.append(c)
        return Or(tuple(flat))

    def and_expr(self) -> Node:
        children = [self.unary()]
        while True:
            tok = self.cur
            if tok.kind == "word" and tok.text == "AND":
                self.advance()
                children.append(self.unary())
                continue
            if tok.kind in ("(", "quoted") or (
                tok.kind == "word" and tok.text not in ("OR", "AND")
            ):
                children.append(self.unary())
                continue
            break
        if len(children) == 1:
            return children[0]
        flat: list[Node] = []
        for c in children:
            flat.extend(c.children) if isinstance(c, And) else flat.append(c)
        return And(tuple(flat))

    def unary(self) -> Node:
        if self.cur.kind == "word" and self.cur.text == "NOT":
            self.advance()
            return Not(self.unary())
        return self.primary()

    def primary(self) -> Node:
        tok = self.cur
        if tok.kind == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "quoted":
            self.advance()
            return Phrase(tok.text)
        if tok.kind == "word":
            if tok.text in ("AND", "OR"):
                raise ParseError(tok.pos, _PRIMARY_EXPECTED)
            self.advance()
            if self.cur.kind == ":":
                self.advance()
                return self.field_body(tok.text)
            if tok.text == "*":
                return MatchAll()
            return Term(tok.text)
        raise ParseError(tok.pos, _PRIMARY_EXPECTED)

    def field_body(self, field: str) -> Node:
        tok = self.cur
        if tok.kind == "quoted":
            self.advance()
            return FieldMatch(field, tok.text, quoted=True)
        if tok.kind in ("[", "{"):
            inclusive = tok.kind == "["
            self.advance()
            lo = self.expect("word", "range bound").text
            to = self.expect("word", "TO")
            if to.text != "TO":
                raise ParseError(to.pos, ("TO",))
            hi = self.expect("word", "range bound").text
            self.expect("]" if inclusive else "}")
            return Range(field, lo, hi, inclusive_lo=inclusive, inclusive_hi=inclusive)
        if tok.kind == "word":
            self.advance()
            return FieldMatch(field, tok.text, quoted=False)
        raise ParseError(tok.pos, ("pattern", '"phrase"', "[", "{"))


def parse_query(q: str) -> Node:
    return _Parser(_lex(q)).parse()


def print_query(node: Node) -> str:
    if isinstance(node, MatchAll):
        return "*"
    if isinstance(node, Term):
        return node.text
    if isinstance(node, Phrase):
        return f'"{node.text}"'
    if isinstance(node, FieldMatch):
        if node.quoted:
            return f'{node.field}:"{node.pattern}"'
        return f"{node.field}:{node.pattern}"
    if isinstance(node, Range):
        open_, close = ("[", "]") if node.inclusive_lo else ("{", "}")
        return f"{node.field}:{open_}{node.lo} TO {node.hi}{close}"
    if isinstance(node, Not):
        return f"NOT {print_query(node.child)}"
    if isinstance(node, And):
        return "(" + " AND ".join(print_query(c) for c in node.children) + ")"
    if isinstance(node, Or):
        return "(" + " OR ".join(print_query(c) for c in node.children) + ")"
    raise TypeError(f"not a query node: {node!r}")


def has_wildcards(pattern: str) -> bool:
    return "*" in pattern or "?" in pattern


def compile_pattern(pattern: str) -> "re.Pattern[str]":
    """Anchored, case-insensitive via casefolded input on both sides."""
    parts = []
    for ch in pattern:
        if ch == "*":
            parts.append(".*")
        elif ch == "?":
            parts.append(".")
        else:
            parts.append(re.escape(ch.casefold()))
    return re.compile("".join(parts), re.DOTALL)
