"""Hive-flavored DDL: parsing CREATE/DROP/DESCRIBE and generating CREATE.

A mapped table declares a struct-typed key column named "key" first, then
plain int or float columns.  The SERDEPROPERTIES block carries the name of
the backing store table and a column mapping whose entries line up with the
declared columns, ":key" standing for the row key itself.  The STORED BY
class and any extra properties are recorded verbatim and otherwise ignored;
they matter to the cluster software this replaces, not to this engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

from ..ingest import date_columns_between
from ..store import ColumnCoord
from .errors import SqlError, SqlSyntaxError
from .lexer import ATOM, DQSTRING, STRING, Token, tokenize

COLUMN_TYPES = ("int", "float")

PROP_TABLE_NAME = "hbase.table.name"
PROP_MAPPING = "hbase.columns.mapping"
_REQUIRED_PROPS = (PROP_TABLE_NAME, PROP_MAPPING)

_KEY_MARKER = ":key"

_STORAGE_CLASS = "org.apache.hadoop.hive.hbase.HBaseStorageHandler"
_KEY_FACTORY_CLASS = "org.apache.hadoop.hive.hbase.SampleHBaseKeyFactory2"


@dataclass(frozen=True)
class ColumnDef:
    name: str
    ctype: str  # "int" or "float"


@dataclass(frozen=True)
class RelationalSchema:
    """Declared shape of a mapped table."""

    table_name: str
    key_fields: tuple[str, ...]
    columns: tuple[ColumnDef, ...]
    collection_terminator: str

    def column_named(self, name: str) -> ColumnDef | None:
        lowered = name.lower()
        for col in self.columns:
            if col.name.lower() == lowered:
                return col
        return None

    def key_field_named(self, name: str) -> str | None:
        lowered = name.lower()
        for f in self.key_fields:
            if f.lower() == lowered:
                return f
        return None


@dataclass(frozen=True)
class ColumnMapping:
    """Where each declared column lives in the store.

    coords is parallel to the schema's columns; the key itself is implied
    as the first mapping entry.
    """

    store_table: str
    coords: tuple[ColumnCoord, ...]

    def entries(self) -> list[str]:
        return [_KEY_MARKER] + [str(c) for c in self.coords]

    def families(self) -> frozenset[str]:
        return frozenset(c.family for c in self.coords)


@dataclass(frozen=True)
class CreateTable:
    schema: RelationalSchema
    mapping: ColumnMapping
    properties: dict[str, str]
    stored_by: str
    raw: str


@dataclass(frozen=True)
class DropTable:
    name: str


@dataclass(frozen=True)
class DescribeTable:
    name: str


class _Parser:
    """Shared cursor helpers for the statement parsers."""

    def __init__(self, text: str) -> None:
        self.text = text
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self) -> Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise SqlSyntaxError("unexpected end of statement", len(self.text))
        self.pos += 1
        return tok

    def at_keyword(self, word: str) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind == ATOM and tok.text.upper() == word.upper()

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            tok = self.peek()
            where = tok.pos if tok else len(self.text)
            found = tok.text if tok else "end of statement"
            raise SqlSyntaxError(f"expected {word}, found {found!r}", where)
        return self.next()

    def expect(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            where = tok.pos if tok else len(self.text)
            found = tok.text if tok else "end of statement"
            raise SqlSyntaxError(f"expected {what}, found {found!r}", where)
        return self.next()

    def expect_name(self) -> str:
        return self.expect(ATOM, "a name").text

    def finish(self) -> None:
        if self.peek() is not None and self.peek().kind == "SEMI":  # type: ignore[union-attr]
            self.next()
        tok = self.peek()
        if tok is not None:
            raise SqlSyntaxError(f"unexpected text {tok.text!r} after statement", tok.pos)


def parse_ddl_statement(text: str) -> CreateTable | DropTable | DescribeTable:
    """Parse one DDL statement: CREATE TABLE, DROP TABLE, or DESCRIBE."""
    p = _Parser(text)
    if p.at_keyword("CREATE"):
        return _parse_create(p, text)
    if p.at_keyword("DROP"):
        p.next()
        p.expect_keyword("TABLE")
        name = p.expect_name()
        p.finish()
        return DropTable(name)
    if p.at_keyword("DESCRIBE"):
        p.next()
        name = p.expect_name()
        p.finish()
        return DescribeTable(name)
    tok = p.peek()
    where = tok.pos if tok else 0
    found = tok.text if tok else "empty statement"
    raise SqlSyntaxError(f"expected CREATE, DROP, or DESCRIBE, found {found!r}", where)


def parse_ddl(text: str) -> CreateTable:
    """Parse a CREATE TABLE statement, validating schema against mapping."""
    parsed = parse_ddl_statement(text)
    if not isinstance(parsed, CreateTable):
        raise SqlError("expected a CREATE TABLE statement")
    return parsed


def _parse_create(p: _Parser, raw: str) -> CreateTable:
    p.expect_keyword("CREATE")
    p.expect_keyword("TABLE")
    table_name = p.expect_name()
    p.expect("LPAREN", "'('")

    key_tok = p.expect(ATOM, "a column name")
    key_name = key_tok.text
    if key_name.lower() != "key":
        raise SqlSyntaxError(
            f"first column must be the struct key, found {key_name!r}", key_tok.pos
        )
    p.expect_keyword("struct")
    p.expect("LT", "'<'")
    key_fields: list[str] = []
    while True:
        fname = p.expect_name()
        p.expect("COLON", "':'")
        ftype = p.expect_name()
        if ftype.lower() != "string":
            raise SqlError(f"unknown key field type {ftype!r}, only string is supported")
        if any(f.lower() == fname.lower() for f in key_fields):
            raise SqlError(f"duplicate key field {fname!r}")
        key_fields.append(fname)
        tok = p.next()
        if tok.kind == "GT":
            break
        if tok.kind != "COMMA":
            raise SqlSyntaxError(f"expected ',' or '>', found {tok.text!r}", tok.pos)

    columns: list[ColumnDef] = []
    seen = {key_name.lower()}
    while True:
        tok = p.next()
        if tok.kind == "RPAREN":
            break
        if tok.kind != "COMMA":
            raise SqlSyntaxError(f"expected ',' or ')', found {tok.text!r}", tok.pos)
        name = p.expect_name()
        ctype = p.expect_name().lower()
        if ctype not in COLUMN_TYPES:
            raise SqlError(f"unknown column type {ctype!r} for column {name!r}")
        if name.lower() in seen:
            raise SqlError(f"duplicate column {name!r}")
        seen.add(name.lower())
        columns.append(ColumnDef(name, ctype))

    p.expect_keyword("ROW")
    p.expect_keyword("FORMAT")
    p.expect_keyword("DELIMITED")
    p.expect_keyword("COLLECTION")
    p.expect_keyword("ITEMS")
    p.expect_keyword("TERMINATED")
    p.expect_keyword("BY")
    term_tok = p.expect(STRING, "a quoted terminator")
    if len(term_tok.text) != 1:
        raise SqlError(
            f"collection terminator must be one character, got {term_tok.text!r}"
        )

    p.expect_keyword("STORED")
    p.expect_keyword("BY")
    stored_by = p.expect(STRING, "a quoted storage handler class").text

    p.expect_keyword("WITH")
    p.expect_keyword("SERDEPROPERTIES")
    p.expect("LPAREN", "'('")
    properties: dict[str, str] = {}
    while True:
        key_tok = p.expect(DQSTRING, "a quoted property name")
        p.expect("EQ", "'='")
        value_tok = p.expect(DQSTRING, "a quoted property value")
        if key_tok.text in properties:
            raise SqlError(f"duplicate property {key_tok.text!r}")
        properties[key_tok.text] = value_tok.text
        tok = p.next()
        if tok.kind == "RPAREN":
            break
        if tok.kind != "COMMA":
            raise SqlSyntaxError(f"expected ',' or ')', found {tok.text!r}", tok.pos)
    p.finish()

    for prop in _REQUIRED_PROPS:
        if prop not in properties:
            raise SqlError(f"missing required property {prop!r}")

    entries = [e.strip() for e in properties[PROP_MAPPING].split(",")]
    if len(entries) != len(columns) + 1:
        raise SqlError(
            f"column mapping has {len(entries)} entries for {len(columns)} "
            "columns; expected one per column plus the key"
        )
    if entries[0] != _KEY_MARKER:
        raise SqlError(f"first mapping entry must be {_KEY_MARKER!r}, got {entries[0]!r}")
    coords = tuple(ColumnCoord.parse(e) for e in entries[1:])

    schema = RelationalSchema(
        table_name=table_name,
        key_fields=tuple(key_fields),
        columns=tuple(columns),
        collection_terminator=term_tok.text,
    )
    mapping = ColumnMapping(store_table=properties[PROP_TABLE_NAME], coords=coords)
    return CreateTable(
        schema=schema,
        mapping=mapping,
        properties=properties,
        stored_by=stored_by,
        raw=raw.strip(),
    )


def generate_schema(
    table: str,
    store_table: str,
    family: str,
    start: date,
    end: date,
) -> str:
    """Emit the CREATE TABLE statement for a time-series table.

    One int column per day from start to end inclusive, named MM_DD_YYYY and
    mapped to d<month><two-digit day> qualifiers after the fixed key,
    latitude, and longitude entries.  The output parses back through
    parse_ddl unchanged.
    """
    dates = date_columns_between(start, end)

    decls = [f"{d.column_name} int" for d in dates]
    lines: list[str] = []
    for i in range(0, len(decls), 3):
        chunk = ", ".join(decls[i : i + 3])
        lines.append(chunk + ("," if i + 3 < len(decls) else ""))
    date_block = "\n".join(lines)

    mapping = ",".join(
        [_KEY_MARKER, f"{family}:lt", f"{family}:lg"]
        + [f"{family}:{d.qualifier}" for d in dates]
    )

    return (
        f"CREATE TABLE {table} (\n"
        "key struct<Province_State : string,Country_Region : string>,\n"
        "Lat float,\n"
        "Long float,\n"
        f"{date_block}\n"
        ")\n"
        "ROW FORMAT DELIMITED\n"
        "COLLECTION ITEMS TERMINATED BY '~'\n"
        f"STORED BY '{_STORAGE_CLASS}'\n"
        "WITH SERDEPROPERTIES (\n"
        f'"{PROP_TABLE_NAME}" = "{store_table}",\n'
        f'"hbase.mapred.output.outputtable" = "{store_table}",\n'
        f'"{PROP_MAPPING}" = "{mapping}",\n'
        f'"hbase.composite.key.factory" = "{_KEY_FACTORY_CLASS}");'
    )
