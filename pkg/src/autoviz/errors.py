"""Exception hierarchy shared by every pipeline stage.

Each error carries a stable machine-readable ``code`` so the CLI and the
HTTP service can map failures onto their respective vocabularies without
string matching.
"""

from __future__ import annotations


class AutovizError(Exception):
    """Base class for all pipeline errors."""

    code = "internal_error"
    http_status = 500

    def __init__(self, message: str, detail: str | None = None):
        super().__init__(message)
        self.message = message
        self.detail = detail


# --- ingest ----------------------------------------------------------------

class EmptyInput(AutovizError):
    code = "empty_input"
    http_status = 422


class UndecidableDialect(AutovizError):
    code = "undecidable_dialect"
    http_status = 422


class SizeLimitExceeded(AutovizError):
    code = "size_limit_exceeded"
    http_status = 413


class EncodingError(AutovizError):
    code = "encoding_error"
    http_status = 422


class EmptyTable(AutovizError):
    code = "empty_table"
    http_status = 422


# --- cleaning --------------------------------------------------------------

class AllMissingColumn(AutovizError):
    code = "all_missing_column"
    http_status = 422


class TooFewValues(AutovizError):
    code = "too_few_values"
    http_status = 422


class DegenerateScale(AutovizError):
    code = "degenerate_scale"
    http_status = 422


class CardinalityTooHigh(AutovizError):
    code = "cardinality_too_high"
    http_status = 422


class NonPositiveInput(AutovizError):
    code = "non_positive_input"
    http_status = 422


# --- analysis --------------------------------------------------------------

class DegenerateTable(AutovizError):
    code = "degenerate_table"
    http_status = 422


class TooFewRows(AutovizError):
    code = "too_few_rows"
    http_status = 422


class NoVaryingColumns(AutovizError):
    code = "no_varying_columns"
    http_status = 422


class DegenerateSpread(AutovizError):
    code = "degenerate_spread"
    http_status = 422


# --- feature selection / charts -------------------------------------------

class UnknownTarget(AutovizError):
    code = "unknown_target"
    http_status = 422


class NoCandidates(AutovizError):
    code = "no_candidates"
    http_status = 422
