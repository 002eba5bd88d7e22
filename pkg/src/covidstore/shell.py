"""Line-oriented shell over the store, in the style of the HBase shell.

Commands are a lowercase verb followed by single-quoted arguments separated
by commas; a quote inside an argument is written as two quotes.  The shell
never dies on a failed command: every error is rendered as a line starting
with "ERROR:" and the loop carries on until exit or end of input.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Optional

from .store import ColumnCoord, Store, StoreError


class ShellError(Exception):
    pass


# verb -> (minimum args, maximum args or None for unbounded)
_ARITY: dict[str, tuple[int, Optional[int]]] = {
    "create": (2, None),
    "put": (4, 4),
    "get": (2, 3),
    "scan": (1, 1),
    "disable": (1, 1),
    "drop": (1, 1),
    "exit": (0, 0),
}


@dataclass(frozen=True)
class ShellCommand:
    verb: str
    args: tuple[str, ...]


def parse_command(line: str) -> ShellCommand:
    """Parse one shell line into a command.

    Raises ShellError for unknown verbs, unbalanced quotes, text outside
    quotes, or the wrong number of arguments.  Verbs are case-sensitive
    lowercase, as in the original shell.
    """
    text = line.strip()
    if not text:
        raise ShellError("empty command")

    i = 0
    while i < len(text) and not text[i].isspace():
        i += 1
    verb = text[:i]
    if verb not in _ARITY:
        raise ShellError(f"unknown command {verb!r}")

    args: list[str] = []
    pos = _skip_spaces(text, i)
    if pos < len(text):
        while True:
            if text[pos] != "'":
                raise ShellError(f"expected a quoted argument at position {pos}")
            pos += 1
            buf: list[str] = []
            while True:
                if pos >= len(text):
                    raise ShellError("unbalanced quote in command")
                ch = text[pos]
                if ch == "'":
                    if pos + 1 < len(text) and text[pos + 1] == "'":
                        buf.append("'")
                        pos += 2
                        continue
                    pos += 1
                    break
                buf.append(ch)
                pos += 1
            args.append("".join(buf))
            pos = _skip_spaces(text, pos)
            if pos >= len(text):
                break
            if text[pos] != ",":
                raise ShellError(f"unexpected text at position {pos}")
            pos = _skip_spaces(text, pos + 1)
            if pos >= len(text):
                raise ShellError("trailing comma without an argument")

    lo, hi = _ARITY[verb]
    if len(args) < lo or (hi is not None and len(args) > hi):
        if hi is None:
            expected = f"at least {lo}"
        elif lo == hi:
            expected = str(lo)
        else:
            expected = f"{lo} or {hi}"
        raise ShellError(f"{verb} expects {expected} argument(s), got {len(args)}")
    return ShellCommand(verb, tuple(args))


def _skip_spaces(text: str, pos: int) -> int:
    while pos < len(text) and text[pos].isspace():
        pos += 1
    return pos


def render_command(cmd: ShellCommand) -> str:
    """Format a command back into shell syntax; the inverse of parse_command."""
    if not cmd.args:
        return cmd.verb
    quoted = ", ".join("'" + a.replace("'", "''") + "'" for a in cmd.args)
    return f"{cmd.verb} {quoted}"


def _dispatch(cmd: ShellCommand, store: Store) -> str:
    """Run a command, raising on failure; returns the text to display."""
    if cmd.verb == "create":
        store.create_table(cmd.args[0], set(cmd.args[1:]))
        return ""
    if cmd.verb == "put":
        store.put(cmd.args[0], cmd.args[1], ColumnCoord.parse(cmd.args[2]), cmd.args[3])
        return ""
    if cmd.verb == "get":
        coord = ColumnCoord.parse(cmd.args[2]) if len(cmd.args) == 3 else None
        cells = store.get(cmd.args[0], cmd.args[1], coord)
        lines = [f"column={c}, value={v}" for c, v in cells]
        lines.append(f"{1 if cells else 0} row(s)")
        return "\n".join(lines)
    if cmd.verb == "scan":
        rows = store.scan(cmd.args[0])
        lines = []
        for row in rows:
            for c, v in row.cells.items():
                lines.append(f"{row.key}  column={c}, value={v}")
        lines.append(f"{len(rows)} row(s)")
        return "\n".join(lines)
    if cmd.verb == "disable":
        store.disable_table(cmd.args[0])
        return ""
    if cmd.verb == "drop":
        store.drop_table(cmd.args[0])
        return ""
    if cmd.verb == "exit":
        return ""
    raise ShellError(f"unknown command {cmd.verb!r}")


def execute_command(cmd: ShellCommand, store: Store) -> str:
    """Run a command and render the outcome, errors included.

    Failures come back as an "ERROR: <message>" line instead of an
    exception, so a driving loop can print and continue.
    """
    try:
        return _dispatch(cmd, store)
    except (StoreError, ShellError) as exc:
        return f"ERROR: {exc}"


def run_script(store: Store, path: str | Path, out: Optional[IO[str]] = None) -> int:
    """Execute commands from a file, one per line; returns the error count.

    Blank lines are skipped.  Execution continues past failures so a partly
    broken script still does what it can; the caller turns a nonzero count
    into a nonzero exit status.
    """
    # Resolve at call time so stream redirection is honored.
    out = sys.stdout if out is None else out
    errors = 0
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        try:
            cmd = parse_command(line)
            if cmd.verb == "exit":
                break
            text = _dispatch(cmd, store)
        except (StoreError, ShellError) as exc:
            print(f"ERROR: {exc}", file=out)
            errors += 1
            continue
        if text:
            print(text, file=out)
    return errors


def repl(
    store: Store, stdin: Optional[IO[str]] = None, out: Optional[IO[str]] = None
) -> None:
    """Interactive loop; ends on the exit command or end of input."""
    stdin = sys.stdin if stdin is None else stdin
    out = sys.stdout if out is None else out
    interactive = hasattr(stdin, "isatty") and stdin.isatty()
    while True:
        if interactive:
            out.write("kv> ")
            out.flush()
        line = stdin.readline()
        if not line:
            break
        if not line.strip():
            continue
        try:
            cmd = parse_command(line)
        except ShellError as exc:
            print(f"ERROR: {exc}", file=out)
            continue
        if cmd.verb == "exit":
            break
        text = execute_command(cmd, store)
        if text:
            print(text, file=out)
