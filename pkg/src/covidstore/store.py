"""Embedded wide-column store in the HBase mold.

Tables hold sparse rows addressed by a string row key.  Each cell lives at a
family:qualifier coordinate; families are fixed at table creation, qualifiers
are free-form.  Rows and cells come back in byte order, writes are
last-write-wins upserts, and there is no cell versioning.

A store is a directory.  MANIFEST lists the tables, one tab-separated line
each; every table keeps its cells in a <name>.dat file of tab-separated
(row key, family, qualifier, value) records, rewritten in sorted order on
flush.  A LOCK file keeps a second process out while the store is open.
Keys and values are UTF-8 text and must not contain tabs or newlines, which
is what keeps the on-disk format trivial.

Table removal follows the HBase two-step: disable first, then drop.  Unlike
HBase, disabling an already disabled table is a no-op rather than an error;
nothing in the workflows here needs the stricter behavior.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Final, Optional, Sequence, Union

# Marker used in import column specs for the field that becomes the row key.
ROW_KEY: Final = "HBASE_ROW_KEY"

_FORBIDDEN = ("\t", "\n", "\r")


class StoreError(Exception):
    """Base class for all store failures."""


class TableNotFoundError(StoreError):
    pass


class TableExistsError(StoreError):
    pass


class TableNotEnabledError(StoreError):
    pass


class TableEnabledError(StoreError):
    """Drop attempted on a table that has not been disabled."""


class UnknownFamilyError(StoreError):
    pass


class CellValueError(StoreError):
    """A key, coordinate, or value that the cell format cannot hold."""


class StoreLockedError(StoreError):
    pass


class CorruptStoreError(StoreError):
    """An on-disk file failed to parse; the message names the file."""


def _check_text(text: str, what: str, allow_empty: bool = False) -> None:
    if not text and not allow_empty:
        raise CellValueError(f"empty {what} not allowed")
    for ch in _FORBIDDEN:
        if ch in text:
            raise CellValueError(f"{what} must not contain tab or newline characters")


@dataclass(frozen=True, order=True)
class ColumnCoord:
    """A cell coordinate, rendered family:qualifier."""

    family: str
    qualifier: str

    def __str__(self) -> str:
        return f"{self.family}:{self.qualifier}"

    @classmethod
    def parse(cls, text: str) -> "ColumnCoord":
        family, sep, qualifier = text.partition(":")
        if not sep or not family or not qualifier or ":" in qualifier:
            raise CellValueError(f"invalid column coordinate {text!r}")
        if "," in family or "," in qualifier:
            raise CellValueError(f"invalid column coordinate {text!r}")
        return cls(family, qualifier)


@dataclass(frozen=True)
class TableDescriptor:
    name: str
    families: frozenset[str]
    enabled: bool


@dataclass(frozen=True)
class Row:
    """One scanned row; cells are keyed by coordinate, in coordinate order."""

    key: str
    cells: dict[ColumnCoord, str]


@dataclass(frozen=True)
class ImportSpec:
    """Shape of a delimited file for bulk import.

    columns names every field of the line in order; exactly one entry must
    be the ROW_KEY marker.  skip_bad_lines turns malformed lines into skips
    instead of aborting; skip_empty_columns silently omits cells for empty
    fields rather than treating the line as malformed.
    """

    columns: tuple[Union[str, ColumnCoord], ...]
    separator: str = "\t"
    skip_bad_lines: bool = False
    skip_empty_columns: bool = False

    def __post_init__(self) -> None:
        if len(self.separator) != 1:
            raise ValueError(f"separator must be one character, got {self.separator!r}")
        markers = [c for c in self.columns if c == ROW_KEY]
        if len(markers) != 1:
            raise ValueError(f"import spec needs exactly one {ROW_KEY} column")
        for c in self.columns:
            if c != ROW_KEY and not isinstance(c, ColumnCoord):
                raise ValueError(f"import spec column {c!r} is not a coordinate")

    @property
    def key_index(self) -> int:
        return self.columns.index(ROW_KEY)


@dataclass
class ImportReport:
    """What a bulk import did: rows written, lines skipped, and why."""

    loaded: int = 0
    skipped: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)


@dataclass
class _Table:
    descriptor: TableDescriptor
    data_file: str
    rows: dict[str, dict[ColumnCoord, str]] = field(default_factory=dict)
    dirty: bool = False


MANIFEST_NAME: Final = "MANIFEST"
LOCK_NAME: Final = "LOCK"


def open_store(directory: str | Path) -> "Store":
    """Open (creating if needed) the store in the given directory."""
    return Store(directory)


class Store:
    """A directory-backed collection of wide-column tables.

    One process at a time; within it, operations are serialized by a lock so
    readers always see a consistent snapshot and get back private copies.
    Mutations become durable on flush (close flushes too), except that table
    creation, disabling, and dropping persist immediately.
    """

    def __init__(self, directory: str | Path) -> None:
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)
        self._mutex = threading.RLock()
        self._closed = False
        self._lock_path = self.directory / LOCK_NAME
        self._acquire_lock()
        try:
            self._tables: dict[str, _Table] = {}
            self._load()
        except BaseException:
            self._release_lock()
            raise

    # ------------------------------------------------------------------ setup

    def _acquire_lock(self) -> None:
        try:
            fd = os.open(self._lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            raise StoreLockedError(
                f"store {self.directory} is already open (lock file {self._lock_path}; "
                "remove it if no other process is using the store)"
            ) from None
        with os.fdopen(fd, "w") as fh:
            fh.write(f"{os.getpid()}\n")

    def _release_lock(self) -> None:
        try:
            self._lock_path.unlink()
        except FileNotFoundError:
            pass

    def _load(self) -> None:
        manifest = self.directory / MANIFEST_NAME
        if not manifest.exists():
            return
        text = manifest.read_text(encoding="utf-8")
        # Split on newline only: values may hold exotic line separators that
        # splitlines() would treat as record breaks.
        for i, line in enumerate(text.split("\n"), 1):
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4:
                raise CorruptStoreError(
                    f"corrupt manifest {manifest}: line {i}: "
                    f"expected 4 fields, found {len(parts)}"
                )
            name, families_text, flag, data_file = parts
            if not name or name in self._tables:
                raise CorruptStoreError(
                    f"corrupt manifest {manifest}: line {i}: bad table name {name!r}"
                )
            families = frozenset(f for f in families_text.split(",") if f)
            if not families or flag not in ("0", "1"):
                raise CorruptStoreError(
                    f"corrupt manifest {manifest}: line {i}: bad table entry"
                )
            table = _Table(
                descriptor=TableDescriptor(name, families, flag == "1"),
                data_file=data_file,
            )
            self._read_data(table)
            self._tables[name] = table

    def _read_data(self, table: _Table) -> None:
        path = self.directory / table.data_file
        if not path.exists():
            # A crash between manifest write and first flush leaves no data
            # file; that is an empty table, not corruption.
            return
        text = path.read_text(encoding="utf-8")
        for i, line in enumerate(text.split("\n"), 1):
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 4 or not parts[0] or not parts[3]:
                raise CorruptStoreError(f"corrupt data file {path}: line {i}")
            key, family, qualifier, value = parts
            if family not in table.descriptor.families:
                raise CorruptStoreError(
                    f"corrupt data file {path}: line {i}: unknown family {family!r}"
                )
            table.rows.setdefault(key, {})[ColumnCoord(family, qualifier)] = value

    # ------------------------------------------------------------- persistence

    def _write_atomic(self, path: Path, text: str) -> None:
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(text, encoding="utf-8", newline="\n")
        os.replace(tmp, path)

    def _write_manifest(self) -> None:
        lines = []
        for name in sorted(self._tables):
            t = self._tables[name]
            d = t.descriptor
            lines.append(
                "\t".join(
                    [d.name, ",".join(sorted(d.families)), "1" if d.enabled else "0", t.data_file]
                )
            )
        self._write_atomic(
            self.directory / MANIFEST_NAME, "".join(line + "\n" for line in lines)
        )

    def _write_table(self, table: _Table) -> None:
        records = []
        for key in sorted(table.rows):
            for coord in sorted(table.rows[key]):
                records.append(
                    f"{key}\t{coord.family}\t{coord.qualifier}\t{table.rows[key][coord]}\n"
                )
        self._write_atomic(self.directory / table.data_file, "".join(records))
        table.dirty = False

    def flush(self) -> None:
        """Write every pending mutation to disk."""
        with self._mutex:
            self._ensure_open()
            for table in self._tables.values():
                if table.dirty:
                    self._write_table(table)

    def close(self) -> None:
        """Flush, then release the store directory for other processes."""
        with self._mutex:
            if self._closed:
                return
            self.flush()
            self._release_lock()
            self._closed = True

    def __enter__(self) -> "Store":
        return self

    def __exit__(self, *exc_info: object) -> None:
        self.close()

    # ---------------------------------------------------------------- helpers

    def _ensure_open(self) -> None:
        if self._closed:
            raise StoreError("store is closed")

    def _table(self, name: str) -> _Table:
        try:
            return self._tables[name]
        except KeyError:
            raise TableNotFoundError(f"table {name!r} not found") from None

    def _enabled_table(self, name: str) -> _Table:
        table = self._table(name)
        if not table.descriptor.enabled:
            raise TableNotEnabledError(f"table {name!r} is disabled")
        return table

    # ------------------------------------------------------------- public API

    def table_names(self) -> list[str]:
        with self._mutex:
            self._ensure_open()
            return sorted(self._tables)

    def has_table(self, name: str) -> bool:
        with self._mutex:
            self._ensure_open()
            return name in self._tables

    def descriptor(self, name: str) -> TableDescriptor:
        with self._mutex:
            self._ensure_open()
            return self._table(name).descriptor

    def create_table(self, name: str, families: Sequence[str] | set[str]) -> TableDescriptor:
        """Create an enabled table with the given column families."""
        with self._mutex:
            self._ensure_open()
            _check_text(name, "table name")
            if "/" in name or "\\" in name:
                raise StoreError(f"table name {name!r} must not contain path separators")
            if name in self._tables:
                raise TableExistsError(f"table {name!r} already exists")
            family_set = frozenset(families)
            if not family_set:
                raise StoreError("a table needs at least one column family")
            for fam in family_set:
                _check_text(fam, "family name")
                if ":" in fam or "," in fam:
                    raise StoreError(f"invalid family name {fam!r}")
            table = _Table(
                descriptor=TableDescriptor(name, family_set, True),
                data_file=f"{name}.dat",
            )
            self._tables[name] = table
            self._write_table(table)
            self._write_manifest()
            return table.descriptor

    def disable_table(self, name: str) -> None:
        """Take a table out of service; disabling twice is a no-op."""
        with self._mutex:
            self._ensure_open()
            table = self._table(name)
            if table.descriptor.enabled:
                table.descriptor = replace(table.descriptor, enabled=False)
                self._write_manifest()

    def drop_table(self, name: str) -> None:
        """Remove a disabled table and its data for good."""
        with self._mutex:
            self._ensure_open()
            table = self._table(name)
            if table.descriptor.enabled:
                raise TableEnabledError("table must be disabled first")
            del self._tables[name]
            try:
                (self.directory / table.data_file).unlink()
            except FileNotFoundError:
                pass
            self._write_manifest()

    def put(self, table: str, row_key: str, coord: ColumnCoord, value: str) -> None:
        """Write one cell; an existing cell at the coordinate is replaced."""
        with self._mutex:
            self._ensure_open()
            t = self._enabled_table(table)
            _check_text(row_key, "row key")
            _check_text(value, "value")
            if coord.family not in t.descriptor.families:
                raise UnknownFamilyError(
                    f"unknown column family {coord.family!r} for table {table!r}"
                )
            t.rows.setdefault(row_key, {})[coord] = value
            t.dirty = True

    def get(
        self, table: str, row_key: str, coord: Optional[ColumnCoord] = None
    ) -> list[tuple[ColumnCoord, str]]:
        """Read one row, or one cell of it.

        A missing row or cell is an empty result, not an error.  Without a
        coordinate, every cell of the row comes back in coordinate order.
        """
        with self._mutex:
            self._ensure_open()
            t = self._enabled_table(table)
            row = t.rows.get(row_key)
            if not row:
                return []
            if coord is not None:
                value = row.get(coord)
                return [(coord, value)] if value is not None else []
            return [(c, row[c]) for c in sorted(row)]

    def scan(self, table: str) -> list[Row]:
        """Every row of the table, keys ascending, cells in coordinate order."""
        with self._mutex:
            self._ensure_open()
            t = self._enabled_table(table)
            out = []
            for key in sorted(t.rows):
                cells = t.rows[key]
                out.append(Row(key, {c: cells[c] for c in sorted(cells)}))
            return out

    def import_tsv(self, table: str, file: str | Path, spec: ImportSpec) -> ImportReport:
        """Bulk-load a delimited file, one row per line.

        Returns a report of rows written and lines skipped; the caller
        decides what to print.  Re-importing merges cell by cell, newest
        write winning, same as put.
        """
        with self._mutex:
            self._ensure_open()
            t = self._enabled_table(table)
            for col in spec.columns:
                if isinstance(col, ColumnCoord) and col.family not in t.descriptor.families:
                    raise UnknownFamilyError(
                        f"unknown column family {col.family!r} for table {table!r}"
                    )
            path = Path(file)
            try:
                text = path.read_text(encoding="utf-8")
            except OSError as exc:
                raise StoreError(f"cannot read {path}: {exc}") from exc

            report = ImportReport()
            key_index = spec.key_index
            lines = text.split("\n")
            if lines and lines[-1] == "":
                lines.pop()  # trailing newline, not an empty record
            for line_no, line in enumerate(lines, 1):
                problem = None
                fields = line.split(spec.separator)
                cells: list[tuple[ColumnCoord, str]] = []
                if len(fields) != len(spec.columns):
                    problem = f"expected {len(spec.columns)} fields, found {len(fields)}"
                elif not fields[key_index]:
                    problem = "empty row key"
                else:
                    for i, value in enumerate(fields):
                        if i == key_index:
                            continue
                        if value == "":
                            if spec.skip_empty_columns:
                                continue
                            problem = f"empty value in column {spec.columns[i]}"
                            break
                        try:
                            _check_text(value, "value")
                        except CellValueError as exc:
                            problem = str(exc)
                            break
                        cells.append((spec.columns[i], value))  # type: ignore[arg-type]
                    if problem is None and not cells:
                        # A row with no cells does not exist; refuse the line
                        # rather than fabricate one.
                        problem = "no values to write"

                if problem is not None:
                    if not spec.skip_bad_lines:
                        raise StoreError(f"{path}: line {line_no}: {problem}")
                    report.skipped += 1
                    report.errors.append((line_no, problem))
                    continue

                try:
                    _check_text(fields[key_index], "row key")
                except CellValueError as exc:
                    if not spec.skip_bad_lines:
                        raise StoreError(f"{path}: line {line_no}: {exc}") from None
                    report.skipped += 1
                    report.errors.append((line_no, str(exc)))
                    continue

                row = t.rows.setdefault(fields[key_index], {})
                for coord, value in cells:
                    row[coord] = value
                t.dirty = True
                report.loaded += 1
            return report
