"""CSV-backed data model: feature tables and importance vectors.

Data files are UTF-8 CSV (RFC 4180) with a mandatory header row.  Importance
files carry exactly the two columns ``feature,importance``.  Loading never
repairs anything: missing cells, non-numeric cells, NaN/inf literals, ragged
rows and duplicate names are all hard errors.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ValidationError

IMPORTANCE_HEADER = ("feature", "importance")


def _duplicates(names):
    seen, dupes = set(), []
    for name in names:
        if name in seen and name not in dupes:
            dupes.append(name)
        seen.add(name)
    return dupes


@dataclass(frozen=True, eq=False)
class ObservationTable:
    """An n x m matrix of finite reals with named columns and optional row ids."""

    column_names: tuple[str, ...]
    values: np.ndarray
    row_ids: tuple[str, ...] | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValidationError("table values must be a 2-d matrix")
        n, m = values.shape
        if n < 1 or m < 1:
            raise ValidationError("table must have at least one row and one column")
        names = tuple(str(c) for c in self.column_names)
        if len(names) != m:
            raise ValidationError(f"{len(names)} column names for {m} columns")
        dupes = _duplicates(names)
        if dupes:
            raise ValidationError("duplicate column names: " + ", ".join(dupes))
        if not np.isfinite(values).all():
            raise ValidationError("table contains non-finite values")
        if self.row_ids is not None:
            ids = tuple(str(r) for r in self.row_ids)
            if len(ids) != n:
                raise ValidationError(f"{len(ids)} row ids for {n} rows")
            object.__setattr__(self, "row_ids", ids)
        values = np.ascontiguousarray(values)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "column_names", names)

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_cols(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True, eq=False)
class FeatureImportance:
    """A per-feature importance vector aligned to named columns."""

    column_names: tuple[str, ...]
    beta: np.ndarray

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=np.float64)
        if beta.ndim != 1:
            raise ValidationError("importance values must be a 1-d vector")
        names = tuple(str(c) for c in self.column_names)
        if len(names) != beta.shape[0]:
            raise ValidationError(
                f"{len(names)} feature names for {beta.shape[0]} importance values"
            )
        if len(names) < 1:
            raise ValidationError("importance vector must name at least one feature")
        dupes = _duplicates(names)
        if dupes:
            raise ValidationError("duplicate feature names: " + ", ".join(dupes))
        if not np.isfinite(beta).all():
            raise ValidationError("importance vector contains non-finite values")
        beta = np.ascontiguousarray(beta)
        beta.setflags(write=False)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "column_names", names)


def _read_rows(source) -> list[list[str]]:
    """Decode a path, bytes, or file object into CSV rows."""
    if isinstance(source, (str, Path)):
        try:
            with open(source, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise ValidationError(f"cannot read '{source}': {exc.strerror}") from None
    elif isinstance(source, bytes):
        raw = source
    elif hasattr(source, "read"):
        raw = source.read()
    else:
        raise ValidationError(f"unsupported CSV source: {type(source).__name__}")
    if isinstance(raw, bytes):
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ValidationError(f"CSV is not valid UTF-8: {exc}") from None
    else:
        text = raw
    return list(csv.reader(io.StringIO(text, newline="")))


def _parse_cell(text: str, row: int, column: str) -> float:
    """Parse one numeric cell; ``row`` is 1-based over data rows."""
    s = text.strip()
    if not s:
        raise ValidationError(f"row {row}, column '{column}': missing value")
    try:
        # float() is locale-independent (period decimal separator) but also
        # accepts underscores, which CSV numbers never carry
        value = float(s) if "_" not in s else math.nan
    except ValueError:
        value = math.nan
    if not math.isfinite(value):
        raise ValidationError(
            f"row {row}, column '{column}': cannot parse '{text}' as a finite number"
        )
    return value


def load_table(source, has_row_ids: bool = False) -> ObservationTable:
    """Load a feature table from CSV.

    ``source`` is a filesystem path, raw bytes, or a readable file object.
    When ``has_row_ids`` is set the first column holds row identifiers.
    """
    rows = _read_rows(source)
    if not rows:
        raise ValidationError("empty CSV: no header row")
    header = rows[0]
    data_rows = rows[1:]
    if has_row_ids:
        if len(header) < 2:
            raise ValidationError("id column present but no feature columns")
        names = header[1:]
    else:
        names = header
    if not names or all(not c.strip() for c in names):
        raise ValidationError("header row has no column names")
    dupes = _duplicates(names)
    if dupes:
        raise ValidationError("duplicate column names: " + ", ".join(dupes))
    if not data_rows:
        raise ValidationError("CSV has a header but no data rows")

    width = len(header)
    values = np.empty((len(data_rows), len(names)), dtype=np.float64)
    ids: list[str] | None = [] if has_row_ids else None
    for r, row in enumerate(data_rows, start=1):
        if len(row) != width:
            raise ValidationError(
                f"row {r}: expected {width} cells, found {len(row)} (ragged row)"
            )
        cells = row
        if has_row_ids:
            ids.append(row[0])
            cells = row[1:]
        for c, cell in enumerate(cells):
            values[r - 1, c] = _parse_cell(cell, r, names[c])
    return ObservationTable(tuple(names), values, tuple(ids) if ids else None)


def load_importance(source) -> FeatureImportance:
    """Load a ``feature,importance`` CSV into a FeatureImportance."""
    rows = _read_rows(source)
    if not rows:
        raise ValidationError("empty CSV: no header row")
    header = tuple(rows[0])
    if header != IMPORTANCE_HEADER:
        raise ValidationError(
            "importance file must have the header 'feature,importance', "
            f"found {','.join(header) if header else '(blank)'!r}"
        )
    data_rows = rows[1:]
    if not data_rows:
        raise ValidationError("importance file has no data rows")
    names: list[str] = []
    beta: list[float] = []
    for r, row in enumerate(data_rows, start=1):
        if len(row) != 2:
            raise ValidationError(
                f"row {r}: expected 2 cells, found {len(row)} (ragged row)"
            )
        name = row[0]
        if name in names:
            raise ValidationError(f"duplicate feature '{name}' at row {r}")
        names.append(name)
        beta.append(_parse_cell(row[1], r, "importance"))
    return FeatureImportance(tuple(names), np.array(beta))


def align(imp: FeatureImportance, table: ObservationTable) -> FeatureImportance:
    """Reorder an importance vector to the table's column order.

    Both objects must describe the same feature set; any mismatch is an
    error naming the offending features.
    """
    table_set = set(table.column_names)
    imp_set = set(imp.column_names)
    missing = [c for c in table.column_names if c not in imp_set]
    extra = [c for c in imp.column_names if c not in table_set]
    problems = []
    if missing:
        problems.append("missing from importance: " + ", ".join(missing))
    if extra:
        problems.append("absent from table: " + ", ".join(extra))
    if problems:
        raise ValidationError("feature sets differ; " + "; ".join(problems))
    if imp.column_names == table.column_names:
        return imp
    index = {name: i for i, name in enumerate(imp.column_names)}
    beta = np.array([imp.beta[index[name]] for name in table.column_names])
    return FeatureImportance(table.column_names, beta)


def _open_text_sink(dest):
    if isinstance(dest, (str, Path)):
        try:
            return open(dest, "w", encoding="utf-8", newline=""), True
        except OSError as exc:
            raise ValidationError(f"cannot write '{dest}': {exc.strerror}") from None
    return dest, False


def write_table(table: ObservationTable, dest, id_header: str = "id") -> None:
    """Write a table back to CSV so that load_table round-trips exactly.

    Cells use repr-style shortest float formatting, which float() parses
    back to the identical double.
    """
    fh, owned = _open_text_sink(dest)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        if table.row_ids is not None:
            writer.writerow([id_header, *table.column_names])
            for rid, row in zip(table.row_ids, table.values):
                writer.writerow([rid, *(repr(v) for v in row.tolist())])
        else:
            writer.writerow(table.column_names)
            for row in table.values:
                writer.writerow([repr(v) for v in row.tolist()])
    finally:
        if owned:
            fh.close()


def write_importance(imp: FeatureImportance, dest) -> None:
    """Write an importance vector in the ``feature,importance`` schema."""
    fh, owned = _open_text_sink(dest)
    try:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(IMPORTANCE_HEADER)
        for name, b in zip(imp.column_names, imp.beta.tolist()):
            writer.writerow([name, repr(b)])
    finally:
        if owned:
            fh.close()
