"""Parser for the supported SELECT subset.

The dialect covers exactly what the mapped tables need: projections of key
struct fields and plain columns, one optional inner JOIN with an AND list of
equality conditions, and a WHERE conjunction of equality and IN predicates
against literals.  Keywords are case-insensitive; identifiers may start
with digits, so 03_31_2020 is an ordinary column name.  Anything from the
wider language (GROUP BY, ORDER BY, and friends) is rejected by name so the
caller knows it hit a deliberate boundary, not a bug.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .errors import SqlSyntaxError, UnsupportedClauseError
from .lexer import ATOM, STRING, Token, tokenize

Literal = Union[str, int, float]


@dataclass(frozen=True)
class KeyFieldRef:
    """A struct field of the row key, as in key.Country_Region."""

    alias: Optional[str]
    field: str


@dataclass(frozen=True)
class ColumnRef:
    """A plain declared column, as in c.03_31_2020 or Lat."""

    alias: Optional[str]
    name: str


Ref = Union[KeyFieldRef, ColumnRef]


@dataclass(frozen=True)
class Comparison:
    ref: Ref
    value: Literal


@dataclass(frozen=True)
class InList:
    ref: Ref
    values: tuple[Literal, ...]


Predicate = Union[Comparison, InList]


@dataclass(frozen=True)
class TableSource:
    table: str
    alias: Optional[str]


@dataclass(frozen=True)
class JoinClause:
    source: TableSource
    conditions: tuple[tuple[Ref, Ref], ...]


@dataclass(frozen=True)
class SelectQuery:
    select_all: bool
    projections: tuple[Ref, ...]
    source: TableSource
    join: Optional[JoinClause]
    where: tuple[Predicate, ...]


_KEYWORDS = {
    "SELECT",
    "FROM",
    "JOIN",
    "ON",
    "WHERE",
    "AND",
    "IN",
}

# Constructs we recognize only to refuse them by name.
_UNSUPPORTED = {
    "GROUP": "GROUP BY",
    "ORDER": "ORDER BY",
    "HAVING": "HAVING",
    "LIMIT": "LIMIT",
    "UNION": "UNION",
    "DISTINCT": "DISTINCT",
    "LEFT": "LEFT JOIN",
    "RIGHT": "RIGHT JOIN",
    "FULL": "FULL JOIN",
    "OUTER": "OUTER JOIN",
    "CROSS": "CROSS JOIN",
    "INNER": "INNER JOIN",
    "OR": "OR",
}


class _QueryParser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    # ------------------------------------------------------------ primitives

    def peek(self) -> Optional[Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise SqlSyntaxError("unexpected end of query", len(self.text))
        self.pos += 1
        return tok

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == ATOM and tok.text.upper() == word

    def take_keyword(self, word: str) -> bool:
        if self.at_keyword(word):
            self.next()
            return True
        return False

    def expect_keyword(self, word: str) -> None:
        if not self.take_keyword(word):
            tok = self.peek()
            where = tok.pos if tok else len(self.text)
            found = tok.text if tok else "end of query"
            raise SqlSyntaxError(f"expected {word}, found {found!r}", where)

    def _check_unsupported(self) -> None:
        tok = self.peek()
        if tok is not None and tok.kind == ATOM:
            clause = _UNSUPPORTED.get(tok.text.upper())
            if clause is not None:
                raise UnsupportedClauseError(clause)

    def expect_name(self, what: str = "a name") -> Token:
        tok = self.peek()
        if tok is None or tok.kind != ATOM:
            where = tok.pos if tok else len(self.text)
            found = tok.text if tok else "end of query"
            raise SqlSyntaxError(f"expected {what}, found {found!r}", where)
        if tok.text.upper() in _KEYWORDS:
            raise SqlSyntaxError(f"expected {what}, found keyword {tok.text!r}", tok.pos)
        return self.next()

    # --------------------------------------------------------------- grammar

    def parse(self) -> SelectQuery:
        self.expect_keyword("SELECT")
        self._check_unsupported()

        select_all = False
        projections: list[Ref] = []
        tok = self.peek()
        if tok is not None and tok.kind == "STAR":
            self.next()
            select_all = True
        else:
            projections.append(self._ref())
            while self.peek() is not None and self.peek().kind == "COMMA":  # type: ignore[union-attr]
                self.next()
                projections.append(self._ref())

        self.expect_keyword("FROM")
        source = self._table_source()

        join: Optional[JoinClause] = None
        self._check_unsupported()
        if self.take_keyword("JOIN"):
            join_source = self._table_source()
            self.expect_keyword("ON")
            conditions = [self._join_condition()]
            while self.take_keyword("AND"):
                conditions.append(self._join_condition())
            join = JoinClause(join_source, tuple(conditions))
            self._check_unsupported()

        where: list[Predicate] = []
        if self.take_keyword("WHERE"):
            where.append(self._predicate())
            while self.take_keyword("AND"):
                where.append(self._predicate())

        # Allow one trailing semicolon, then require a clean end.
        tok = self.peek()
        if tok is not None and tok.kind == "SEMI":
            self.next()
        tok = self.peek()
        if tok is not None:
            self._check_unsupported()
            raise SqlSyntaxError(f"unexpected text {tok.text!r} after query", tok.pos)

        return SelectQuery(
            select_all=select_all,
            projections=tuple(projections),
            source=source,
            join=join,
            where=tuple(where),
        )

    def _table_source(self) -> TableSource:
        table = self.expect_name("a table name").text
        alias = None
        tok = self.peek()
        if (
            tok is not None
            and tok.kind == ATOM
            and tok.text.upper() not in _KEYWORDS
            and tok.text.upper() not in _UNSUPPORTED
        ):
            alias = self.next().text
        return TableSource(table, alias)

    def _ref(self) -> Ref:
        self._check_unsupported()
        first = self.expect_name("a column reference").text
        if self.peek() is None or self.peek().kind != "DOT":  # type: ignore[union-attr]
            return ColumnRef(None, first)
        self.next()
        second = self.expect_name("a column reference").text
        if second.lower() == "key" and self.peek() is not None and self.peek().kind == "DOT":  # type: ignore[union-attr]
            self.next()
            third = self.expect_name("a key field name").text
            return KeyFieldRef(first, third)
        if first.lower() == "key":
            return KeyFieldRef(None, second)
        return ColumnRef(first, second)

    def _join_condition(self) -> tuple[Ref, Ref]:
        left = self._ref()
        tok = self.next()
        if tok.kind != "EQ":
            raise SqlSyntaxError(f"expected '=', found {tok.text!r}", tok.pos)
        right = self._ref()
        return (left, right)

    def _predicate(self) -> Predicate:
        ref = self._ref()
        tok = self.peek()
        if tok is not None and tok.kind == "EQ":
            self.next()
            return Comparison(ref, self._literal())
        if self.take_keyword("IN"):
            open_tok = self.next()
            if open_tok.kind != "LPAREN":
                raise SqlSyntaxError(f"expected '(', found {open_tok.text!r}", open_tok.pos)
            values = [self._literal()]
            while True:
                tok = self.next()
                if tok.kind == "RPAREN":
                    break
                if tok.kind != "COMMA":
                    raise SqlSyntaxError(f"expected ',' or ')', found {tok.text!r}", tok.pos)
                values.append(self._literal())
            return InList(ref, tuple(values))
        where = tok.pos if tok else len(self.text)
        found = tok.text if tok else "end of query"
        raise SqlSyntaxError(f"expected '=' or IN, found {found!r}", where)

    def _literal(self) -> Literal:
        tok = self.next()
        if tok.kind == STRING:
            return tok.text
        negative = False
        if tok.kind == "MINUS":
            negative = True
            tok = self.next()
        if tok.kind == ATOM and tok.text.isdigit():
            # A dotted pair of digit runs is a float literal; anything else
            # after the dot is a malformed reference, not a number.
            if self.peek() is not None and self.peek().kind == "DOT":  # type: ignore[union-attr]
                mark = self.pos
                self.next()
                frac = self.peek()
                if frac is not None and frac.kind == ATOM and frac.text.isdigit():
                    self.next()
                    value = float(f"{tok.text}.{frac.text}")
                    return -value if negative else value
                self.pos = mark
            return -int(tok.text) if negative else int(tok.text)
        raise SqlSyntaxError(f"expected a literal, found {tok.text!r}", tok.pos)


def parse_query(text: str) -> SelectQuery:
    """Parse one SELECT statement into its syntax tree."""
    return _QueryParser(text).parse()
