"""Tokenizer shared by the DDL and query parsers.

Identifiers here may start with digits (date columns are named like
03_31_2020), so there is no separate number token; the parsers decide from
context whether an atom is a name or a numeric literal.  Single-quoted and
double-quoted strings both use backslash escapes; an unknown escape stands
for the escaped character itself, which is how '\\~' denotes a tilde.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SqlSyntaxError

ATOM = "ATOM"
STRING = "STRING"  # single-quoted
DQSTRING = "DQSTRING"  # double-quoted

_PUNCT = {
    "(": "LPAREN",
    ")": "RPAREN",
    "<": "LT",
    ">": "GT",
    ",": "COMMA",
    ";": "SEMI",
    "=": "EQ",
    ".": "DOT",
    ":": "COLON",
    "*": "STAR",
    "-": "MINUS",
}

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r"}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    pos: int


def _is_atom_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in ("'", '"'):
            kind = STRING if ch == "'" else DQSTRING
            value, i = _read_string(text, i, ch)
            tokens.append(Token(kind, value, i))
            continue
        if _is_atom_char(ch):
            start = i
            while i < n and _is_atom_char(text[i]):
                i += 1
            tokens.append(Token(ATOM, text[start:i], start))
            continue
        if ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, i))
            i += 1
            continue
        raise SqlSyntaxError(f"unexpected character {ch!r}", i)
    return tokens


def _read_string(text: str, start: int, quote: str) -> tuple[str, int]:
    # start points at the opening quote
    buf: list[str] = []
    i = start + 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\\":
            if i + 1 >= n:
                raise SqlSyntaxError("unterminated string literal", start)
            nxt = text[i + 1]
            buf.append(_ESCAPES.get(nxt, nxt))
            i += 2
            continue
        if ch == quote:
            return "".join(buf), i + 1
        buf.append(ch)
        i += 1
    raise SqlSyntaxError("unterminated string literal", start)


def split_statements(text: str) -> list[str]:
    """Split script text into statements at semicolons outside strings."""
    parts: list[str] = []
    buf: list[str] = []
    i = 0
    n = len(text)
    quote = None
    while i < n:
        ch = text[i]
        if quote is not None:
            buf.append(ch)
            if ch == "\\" and i + 1 < n:
                buf.append(text[i + 1])
                i += 2
                continue
            if ch == quote:
                quote = None
            i += 1
            continue
        if ch in ("'", '"'):
            quote = ch
            buf.append(ch)
            i += 1
            continue
        if ch == ";":
            parts.append("".join(buf))
            buf = []
            i += 1
            continue
        buf.append(ch)
        i += 1
    parts.append("".join(buf))
    return [p.strip() for p in parts if p.strip()]
