"""Tabular ingestion: dialect sniffing, streaming CSV/TSV parsing, type
inference, and per-column profiling.

The parse is a single streaming pass; the raw byte stream is never held in
memory a second time.  Missing cells are represented as ``None`` end to end.

Dialect detection is deterministic: the delimiter is the candidate whose
per-line occurrence counts are most consistent (lowest variance, then
highest mean) over the first 20 non-empty sample lines; header presence is
decided by two signals (numeric-shape mismatch between row 1 and the data
rows, or duplicate cells appearing only in data rows).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import BinaryIO, Iterable, Optional, Sequence

from autoviz import errors

DELIMITER_CANDIDATES = (",", "\t", ";", "|")
DEFAULT_MAX_BYTES = 500 * 2**20
DEFAULT_MISSING_TOKENS = frozenset({"", "na", "n/a", "null", "none", "nan", "-"})
NUMERIC_SHARE_THRESHOLD = 0.95
_BOOL_TOKENS = {"true": True, "yes": True, "false": False, "no": False,
                "1": True, "0": False}
_SNIFF_LINES = 20


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Dialect:
    delimiter: str
    quote_char: str = '"'
    has_header: bool = True
    encoding: str = "utf-8"
    fallback_used: bool = False

    def __post_init__(self):
        if self.delimiter not in DELIMITER_CANDIDATES:
            raise ValueError(f"unsupported delimiter {self.delimiter!r}")


class ColumnKind:
    TEXT = "text"          # untyped, straight from the parser
    NUMERIC = "numeric"
    CATEGORICAL = "categorical"
    BOOLEAN = "boolean"


@dataclass(frozen=True)
class Column:
    name: str
    kind: str
    values: tuple

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class Dataset:
    """Immutable typed columnar table; ``None`` marks a missing cell."""

    columns: tuple[Column, ...]
    row_count: int
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        for col in self.columns:
            if len(col.values) != self.row_count:
                raise ValueError(f"column {col.name!r} length != row_count")

    @property
    def column_names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.columns)

    def column(self, name: str) -> Column:
        for c in self.columns:
            if c.name == name:
                return c
        raise KeyError(name)

    def numeric_columns(self) -> list[Column]:
        return [c for c in self.columns if c.kind == ColumnKind.NUMERIC]

    def categorical_columns(self) -> list[Column]:
        # Booleans behave as two-level categoricals everywhere downstream.
        return [c for c in self.columns
                if c.kind in (ColumnKind.CATEGORICAL, ColumnKind.BOOLEAN)]

    def with_warnings(self, extra: Iterable[str]) -> "Dataset":
        return replace(self, warnings=self.warnings + tuple(extra))


@dataclass(frozen=True)
class ColumnProfile:
    name: str
    type: str
    count: int
    missing_count: int
    completeness: float
    distinct_count: int
    stats: Optional["SummaryStats"] = None  # noqa: F821 - analysis module


# ---------------------------------------------------------------------------
# Dialect detection
# ---------------------------------------------------------------------------

def _parse_number(text) -> float | None:
    """Parse a cell as a finite float, or return None."""
    if not isinstance(text, str):
        return None
    text = text.strip()
    if not text:
        return None
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def decode_sample(sample: bytes) -> tuple[str, str]:
    """Decode sniffing bytes, returning (text, encoding name)."""
    if sample.startswith(b"\xef\xbb\xbf"):
        return sample[3:].decode("utf-8", errors="replace"), "utf-8-sig"
    try:
        return sample.decode("utf-8"), "utf-8"
    except UnicodeDecodeError:
        return sample.decode("latin-1"), "latin-1"


def detect_dialect(sample: bytes, max_sample_bytes: int = 65536) -> Dialect:
    """Sniff delimiter, header presence, and encoding from a byte sample."""
    if max_sample_bytes < 1024:
        raise ValueError("max_sample_bytes must be >= 1024")
    if not sample:
        raise errors.EmptyInput("input is empty")
    text, encoding = decode_sample(sample[:max_sample_bytes])
    # NUL bytes would trip the csv module during header sniffing
    text = text.replace("\x00", "")
    lines = [ln for ln in text.splitlines() if ln.strip()][:_SNIFF_LINES]
    if not lines:
        raise errors.EmptyInput("input has no non-empty lines")

    best = None
    for cand in DELIMITER_CANDIDATES:
        counts = [ln.count(cand) for ln in lines]
        if not any(counts):
            continue
        mean = sum(counts) / len(counts)
        var = sum((c - mean) ** 2 for c in counts) / len(counts)
        key = (var, -mean)
        if best is None or key < best[0]:
            best = (key, cand)
    if best is None:
        delimiter, fallback = ",", True
    else:
        delimiter, fallback = best[1], False

    rows = list(csv.reader(lines, delimiter=delimiter, quotechar='"'))
    has_header = _looks_like_header(rows)
    return Dialect(delimiter=delimiter, has_header=has_header,
                   encoding=encoding, fallback_used=fallback)


def _looks_like_header(rows: list[list[str]]) -> bool:
    if not rows:
        return False
    first, data = rows[0], rows[1:]
    if not first:
        return False
    # Signal 1: row 1 entirely non-numeric while data rows are numeric in
    # at least one matching position (majority of rows).
    if data and all(_parse_number(c) is None for c in first):
        for pos in range(len(first)):
            hits = sum(1 for r in data
                       if pos < len(r) and _parse_number(r[pos]) is not None)
            if hits * 2 >= len(data):
                return True
    # Signal 2: row 1 duplicate-free while some data row has duplicates.
    if data and len(set(first)) == len(first):
        if any(len(set(r)) < len(r) for r in data if r):
            return True
    return False


# ---------------------------------------------------------------------------
# Streaming parse
# ---------------------------------------------------------------------------

class _LimitedReader(io.RawIOBase):
    """Byte-counting reader that enforces the size cap mid-stream."""

    def __init__(self, raw: BinaryIO, max_bytes: int):
        self._raw = raw
        self._max = max_bytes
        self.total = 0

    def readable(self):
        return True

    def readinto(self, b):
        n = self._raw.readinto(b) if hasattr(self._raw, "readinto") else None
        if n is None:
            chunk = self._raw.read(len(b))
            n = len(chunk)
            b[:n] = chunk
        self.total += n
        if self.total > self._max:
            raise errors.SizeLimitExceeded(
                f"input exceeds size cap of {self._max} bytes")
        return n


def _dedupe_names(names: list[str]) -> list[str]:
    seen: dict[str, int] = {}
    out = []
    for name in names:
        if name in seen:
            seen[name] += 1
            out.append(f"{name}_{seen[name]}")
        else:
            seen[name] = 1
            out.append(name)
    return out


def parse_table(stream: BinaryIO | bytes, dialect: Dialect,
                max_bytes: int = DEFAULT_MAX_BYTES) -> Dataset:
    """Parse a byte stream into an untyped (all-text) Dataset.

    Quoted fields (embedded delimiters and newlines) are honored.  Ragged
    rows are padded with missing cells or truncated with a warning.
    """
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(bytes(stream))
    limited = io.BufferedReader(_LimitedReader(stream, max_bytes))
    text = io.TextIOWrapper(limited, encoding=dialect.encoding,
                            errors="strict", newline="")
    reader = csv.reader(text, delimiter=dialect.delimiter,
                        quotechar=dialect.quote_char)

    names: list[str] | None = None
    cells: list[list] = []
    warnings: list[str] = []
    n_cols = 0
    row_idx = 0
    try:
        for row in reader:
            if not row:
                continue
            if names is None:
                if dialect.has_header:
                    names = _dedupe_names([c.strip() for c in row])
                    n_cols = len(names)
                    cells = [[] for _ in range(n_cols)]
                    continue
                n_cols = len(row)
                names = [f"col_{i + 1}" for i in range(n_cols)]
                cells = [[] for _ in range(n_cols)]
            row_idx += 1
            if len(row) > n_cols:
                warnings.append(
                    f"row {row_idx}: {len(row) - n_cols} extra cell(s) truncated")
                row = row[:n_cols]
            for i in range(n_cols):
                cells[i].append(row[i] if i < len(row) else None)
    except UnicodeDecodeError as exc:
        raise errors.EncodingError(
            f"input is not valid {dialect.encoding}") from exc
    except csv.Error as exc:
        raise errors.EncodingError(f"malformed CSV: {exc}") from exc

    if names is None or row_idx == 0:
        raise errors.EmptyTable("no data rows")

    columns = tuple(Column(name=names[i], kind=ColumnKind.TEXT,
                           values=tuple(cells[i]))
                    for i in range(n_cols))
    return Dataset(columns=columns, row_count=row_idx,
                   warnings=tuple(warnings))


# ---------------------------------------------------------------------------
# Type inference
# ---------------------------------------------------------------------------

def infer_types(dataset: Dataset,
                missing_tokens: frozenset[str] = DEFAULT_MISSING_TOKENS,
                ) -> Dataset:
    """Assign numeric / boolean / categorical kinds to an untyped Dataset.

    Missing tokens are matched case-insensitively.  A column is numeric when
    at least 95% of its non-missing cells parse as finite numbers (the rest
    become missing, with a coercion warning); boolean when every value is a
    recognized true/false token with at least two distinct values; otherwise
    categorical.
    """
    tokens = {t.lower() for t in missing_tokens}
    new_cols = []
    warnings = list(dataset.warnings)
    for col in dataset.columns:
        present: list = []
        mapped: list = []
        for v in col.values:
            if v is None:
                mapped.append(None)
                continue
            s = v.strip() if isinstance(v, str) else v
            if isinstance(s, str) and s.lower() in tokens:
                mapped.append(None)
            else:
                mapped.append(s)
                present.append(s)

        if present:
            parsed = [_parse_number(v) if isinstance(v, str) else None
                      for v in mapped]
            n_numeric = sum(1 for v, p in zip(mapped, parsed)
                            if v is not None and p is not None)
            if n_numeric >= NUMERIC_SHARE_THRESHOLD * len(present):
                coerced = sum(1 for v, p in zip(mapped, parsed)
                              if v is not None and p is None)
                if coerced:
                    warnings.append(
                        f"column {col.name!r}: {coerced} non-numeric "
                        f"cell(s) coerced to missing")
                new_cols.append(Column(col.name, ColumnKind.NUMERIC,
                                       tuple(parsed)))
                continue
            lowered = [str(v).lower() for v in present]
            if (all(t in _BOOL_TOKENS for t in lowered)
                    and len({_BOOL_TOKENS[t] for t in lowered}) >= 2):
                vals = tuple(None if v is None else _BOOL_TOKENS[str(v).lower()]
                             for v in mapped)
                new_cols.append(Column(col.name, ColumnKind.BOOLEAN, vals))
                continue
        new_cols.append(Column(col.name, ColumnKind.CATEGORICAL,
                               tuple(mapped)))
    return Dataset(columns=tuple(new_cols), row_count=dataset.row_count,
                   warnings=tuple(warnings))


# ---------------------------------------------------------------------------
# Profiling
# ---------------------------------------------------------------------------

def profile_columns(dataset: Dataset) -> list[ColumnProfile]:
    """One profile per column; numeric columns carry summary statistics."""
    from autoviz.analysis import summary_stats

    profiles = []
    for col in dataset.columns:
        present = [v for v in col.values if v is not None]
        count = len(col.values)
        missing = count - len(present)
        completeness = (len(present) / count) if count else 1.0
        stats = None
        if col.kind == ColumnKind.NUMERIC and present:
            stats = summary_stats(present)
        profiles.append(ColumnProfile(
            name=col.name, type=col.kind, count=count,
            missing_count=missing, completeness=completeness,
            distinct_count=len(set(present)), stats=stats))
    return profiles


# ---------------------------------------------------------------------------
# CSV writer (RFC-4180 style quoting)
# ---------------------------------------------------------------------------

def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if value.is_integer() and abs(value) < 1e16:
            return str(int(value))
        return repr(value)
    return str(value)


def write_csv(dataset: Dataset, dialect: Dialect) -> bytes:
    """Serialize a Dataset back to delimited text under ``dialect``."""
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, delimiter=dialect.delimiter,
                        quotechar=dialect.quote_char,
                        quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    if dialect.has_header:
        writer.writerow(dataset.column_names)
    for i in range(dataset.row_count):
        writer.writerow([format_cell(c.values[i]) for c in dataset.columns])
    encoding = "utf-8" if dialect.encoding == "utf-8-sig" else dialect.encoding
    return buf.getvalue().encode(encoding)
