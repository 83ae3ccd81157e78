"""Data cleaning: imputation, outlier flagging, adaptive scaling, encoding,
and skew transforms, with a ledger recording every mutated cell.

Pipeline order is impute -> detect outliers (flags only; values are never
deleted) -> optionally scale.  Outlier detection runs on the unscaled data;
all three detectors are scale-covariant so the flag set is unaffected.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from autoviz import errors, kernels
from autoviz.analysis import quantile, summary_stats
from autoviz.ingest import Column, ColumnKind, Dataset, format_cell

MODIFIED_Z_CONSTANT = 0.6745
MEAN_AD_CONSTANT = 0.7979
ONE_HOT_MAX_CARDINALITY = 50
BOX_COX_GRID = (-5.0, 5.0, 0.01)


# ---------------------------------------------------------------------------
# Configuration and ledger types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ImputationConfig:
    knn_k: int = 5
    knn_fallback: str = "column_mean"
    categorical_tie_break: str = "lexicographic_min"

    def __post_init__(self):
        if self.knn_k < 1:
            raise ValueError("knn_k must be >= 1")


@dataclass(frozen=True)
class OutlierParams:
    z_threshold: float = 3.0
    modified_z_threshold: float = 3.5
    iqr_multiplier: float = 1.5
    modified_z_constant: float = MODIFIED_Z_CONSTANT

    def __post_init__(self):
        if min(self.z_threshold, self.modified_z_threshold,
               self.iqr_multiplier) <= 0:
            raise ValueError("all thresholds must be positive")


@dataclass(frozen=True)
class ScalingChoice:
    method: str  # standard | robust | minmax | unit_vector | none
    parameters: dict = field(default_factory=dict)


@dataclass(frozen=True)
class ImputationEntry:
    column: str
    row: int
    new_value: object
    method: str  # knn | column_mean | mode


@dataclass(frozen=True)
class OutlierFlag:
    column: str
    row: int
    value: float
    detector: str  # zscore | modified_z | iqr
    score: float


@dataclass(frozen=True)
class TransformEntry:
    column: str
    name: str
    parameters: dict


@dataclass
class CleaningReport:
    imputations: list[ImputationEntry] = field(default_factory=list)
    outlier_flags: list[OutlierFlag] = field(default_factory=list)
    scalings: list[tuple[str, ScalingChoice]] = field(default_factory=list)
    transforms: list[TransformEntry] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    dropped_columns: list[str] = field(default_factory=list)
    completeness_before: float = 1.0
    completeness_after: float = 1.0
    input_digest: str = ""
    output_digest: str = ""


def dataset_digest(dataset: Dataset) -> str:
    """SHA-256 over a canonical cell-by-cell rendering of the table."""
    h = hashlib.sha256()
    for col in dataset.columns:
        h.update(col.name.encode())
        h.update(col.kind.encode())
        for v in col.values:
            h.update(b"\x00" if v is None else format_cell(v).encode())
            h.update(b"\x1f")
    return h.hexdigest()


def dataset_completeness(dataset: Dataset) -> float:
    total = dataset.row_count * len(dataset.columns)
    if total == 0:
        return 1.0
    present = sum(1 for c in dataset.columns
                  for v in c.values if v is not None)
    return present / total


# ---------------------------------------------------------------------------
# Imputation
# ---------------------------------------------------------------------------

def impute_numeric_knn(dataset: Dataset, column: str,
                       config: ImputationConfig = ImputationConfig(),
                       ) -> tuple[list, list[ImputationEntry]]:
    """Fill a numeric column's missing cells with the mean of the k nearest
    rows by partial Euclidean distance over the other numeric columns.

    Feature columns are standardized; dimensions missing in either row are
    skipped and the squared distance rescaled by total/used.  Distance ties
    break toward the lower row index; rows with no shared dimension fall
    back to the column mean.
    """
    target = dataset.column(column)
    values = list(target.values)
    present_vals = [v for v in values if v is not None]
    if not present_vals:
        raise errors.AllMissingColumn(f"column {column!r} has no values")
    missing_rows = [i for i, v in enumerate(values) if v is None]
    if not missing_rows:
        return values, []

    features = [c for c in dataset.numeric_columns() if c.name != column]
    col_mean = float(np.mean(present_vals))
    entries: list[ImputationEntry] = []

    if not features:
        for i in missing_rows:
            values[i] = col_mean
            entries.append(ImputationEntry(column, i, col_mean, "column_mean"))
        return values, entries

    n = dataset.row_count
    p = len(features)
    x = np.zeros((n, p))
    present = np.zeros((n, p), dtype=bool)
    for j, feat in enumerate(features):
        col_present = [v for v in feat.values if v is not None]
        if not col_present:
            continue
        mu = float(np.mean(col_present))
        sigma = float(np.std(col_present))
        for i, v in enumerate(feat.values):
            if v is not None:
                present[i, j] = True
                x[i, j] = (v - mu) / sigma if sigma > 0 else 0.0

    target_present = np.array([v is not None for v in values])
    for i in missing_rows:
        dist = kernels.masked_distances(x, present, i)
        cand = [(float(dist[j]), j) for j in range(n)
                if target_present[j] and math.isfinite(dist[j])]
        if not cand:
            values[i] = col_mean
            entries.append(ImputationEntry(column, i, col_mean, "column_mean"))
            continue
        cand.sort()
        chosen = cand[:config.knn_k]
        imputed = float(np.mean([values[j] for _, j in chosen]))
        values[i] = imputed
        entries.append(ImputationEntry(column, i, imputed, "knn"))
    return values, entries


def impute_categorical_mode(column: str, values: Sequence,
                            ) -> tuple[list, list[ImputationEntry]]:
    """Fill missing cells with the most frequent value; frequency ties break
    to the lexicographically smallest value."""
    out = list(values)
    present = [v for v in out if v is not None]
    if not present:
        raise errors.AllMissingColumn(f"column {column!r} has no values")
    counts: dict = {}
    for v in present:
        counts[v] = counts.get(v, 0) + 1
    mode = min(counts, key=lambda v: (-counts[v], str(v)))
    entries = []
    for i, v in enumerate(out):
        if v is None:
            out[i] = mode
            entries.append(ImputationEntry(column, i, mode, "mode"))
    return out, entries


# ---------------------------------------------------------------------------
# Outlier detection
# ---------------------------------------------------------------------------

def detect_outliers_zscore(values: Sequence[float],
                           params: OutlierParams = OutlierParams(),
                           ) -> list[tuple[int, float]]:
    """Flag |x - mu| / sigma > threshold using the population sigma;
    constant columns flag nothing."""
    x = np.asarray(values, dtype=np.float64)
    sigma = x.std(ddof=0)
    if sigma == 0:
        return []
    z = (x - x.mean()) / sigma
    return [(i, float(z[i])) for i in np.nonzero(
        np.abs(z) > params.z_threshold)[0]]


def detect_outliers_modified_z(values: Sequence[float],
                               params: OutlierParams = OutlierParams(),
                               ) -> list[tuple[int, float]]:
    """Flag |c * (x - median) / MAD| > threshold; a zero MAD falls back to
    the mean absolute deviation with constant 0.7979, and a zero mean AD
    flags nothing."""
    x = np.asarray(values, dtype=np.float64)
    med = quantile(x, 0.5)
    abs_dev = np.abs(x - med)
    mad = quantile(abs_dev, 0.5)
    if mad > 0:
        m = params.modified_z_constant * (x - med) / mad
    else:
        mean_ad = abs_dev.mean()
        if mean_ad == 0:
            return []
        m = MEAN_AD_CONSTANT * (x - med) / mean_ad
    return [(i, float(m[i])) for i in np.nonzero(
        np.abs(m) > params.modified_z_threshold)[0]]


def iqr_fences(values: Sequence[float], multiplier: float,
               ) -> tuple[float, float]:
    q1 = quantile(values, 0.25)
    q3 = quantile(values, 0.75)
    spread = q3 - q1
    return q1 - multiplier * spread, q3 + multiplier * spread


def detect_outliers_iqr(values: Sequence[float],
                        params: OutlierParams = OutlierParams(),
                        ) -> list[tuple[int, float]]:
    """Flag values outside [Q1 - m*IQR, Q3 + m*IQR]."""
    if len(values) < 4:
        raise errors.TooFewValues("IQR detection needs n >= 4")
    low, high = iqr_fences(values, params.iqr_multiplier)
    return [(i, float(v)) for i, v in enumerate(values)
            if v < low or v > high]


# ---------------------------------------------------------------------------
# Scaling
# ---------------------------------------------------------------------------

def select_scaler(values: Sequence[float], has_outlier_flags: bool,
                  ) -> ScalingChoice:
    """Adaptive choice: robust when skewed (|skew| > 1) or outliers were
    flagged, standard otherwise, none when degenerate.  Min-max and
    unit-vector scaling are only applied on explicit request."""
    x = np.asarray(values, dtype=np.float64)
    sigma = float(x.std(ddof=0))
    if sigma == 0:
        return ScalingChoice("none")
    stats = summary_stats(x)
    if abs(stats.skewness) > 1 or has_outlier_flags:
        med = quantile(x, 0.5)
        iqr = quantile(x, 0.75) - quantile(x, 0.25)
        if iqr == 0:
            return ScalingChoice("none")
        return ScalingChoice("robust", {"median": med, "iqr": iqr})
    return ScalingChoice("standard", {"mean": float(x.mean()), "std": sigma})


def fit_scaler(values: Sequence[float], method: str) -> ScalingChoice:
    """Fit the requested scaling method, degrading to none when degenerate."""
    x = np.asarray(values, dtype=np.float64)
    if method == "none":
        return ScalingChoice("none")
    if method == "standard":
        sigma = float(x.std(ddof=0))
        return (ScalingChoice("standard", {"mean": float(x.mean()),
                                           "std": sigma})
                if sigma > 0 else ScalingChoice("none"))
    if method == "robust":
        med = quantile(x, 0.5)
        iqr = quantile(x, 0.75) - quantile(x, 0.25)
        return (ScalingChoice("robust", {"median": med, "iqr": iqr})
                if iqr > 0 else ScalingChoice("none"))
    if method == "minmax":
        lo, hi = float(x.min()), float(x.max())
        return (ScalingChoice("minmax", {"min": lo, "max": hi})
                if hi > lo else ScalingChoice("none"))
    if method == "unit_vector":
        norm = float(np.linalg.norm(x))
        return (ScalingChoice("unit_vector", {"norm": norm})
                if norm > 0 else ScalingChoice("none"))
    raise ValueError(f"unknown scaling method {method!r}")


def apply_scaling(values: Sequence[float], choice: ScalingChoice) -> list[float]:
    x = np.asarray(values, dtype=np.float64)
    p = choice.parameters
    if choice.method == "none":
        return x.tolist()
    if choice.method == "standard":
        if p["std"] == 0:
            raise errors.DegenerateScale("zero std")
        return ((x - p["mean"]) / p["std"]).tolist()
    if choice.method == "robust":
        if p["iqr"] == 0:
            raise errors.DegenerateScale("zero IQR")
        return ((x - p["median"]) / p["iqr"]).tolist()
    if choice.method == "minmax":
        span = p["max"] - p["min"]
        if span == 0:
            raise errors.DegenerateScale("zero range")
        return ((x - p["min"]) / span).tolist()
    if choice.method == "unit_vector":
        if p["norm"] == 0:
            raise errors.DegenerateScale("zero norm")
        return (x / p["norm"]).tolist()
    raise ValueError(f"unknown scaling method {choice.method!r}")


# ---------------------------------------------------------------------------
# Encoding and skew transforms
# ---------------------------------------------------------------------------

def encode_categorical(column: str, values: Sequence, method: str,
                       ) -> list[Column]:
    """Encode a complete categorical column; categories in sorted order."""
    cats = sorted(set(values), key=str)
    if method == "label":
        code = {c: float(i) for i, c in enumerate(cats)}
        return [Column(column, ColumnKind.NUMERIC,
                       tuple(code[v] for v in values))]
    if method == "one_hot":
        if len(cats) > ONE_HOT_MAX_CARDINALITY:
            raise errors.CardinalityTooHigh(
                f"{len(cats)} categories exceeds one-hot guard of "
                f"{ONE_HOT_MAX_CARDINALITY}")
        return [Column(f"{column}={format_cell(c)}", ColumnKind.NUMERIC,
                       tuple(1.0 if v == c else 0.0 for v in values))
                for c in cats]
    raise ValueError(f"unknown encoding {method!r}")


def box_cox_log_likelihood(values: np.ndarray, lam: float) -> float:
    y = box_cox_apply(values, lam)
    var = float(np.asarray(y).var(ddof=0))
    if var <= 0:
        return -math.inf
    n = len(values)
    return (lam - 1) * float(np.log(values).sum()) - n / 2 * math.log(var)


def box_cox_apply(values: np.ndarray, lam: float) -> np.ndarray:
    if lam == 0:
        return np.log(values)
    return (values**lam - 1) / lam


def select_box_cox_lambda(values: np.ndarray) -> float:
    lo, hi, step = BOX_COX_GRID
    grid = np.arange(lo, hi + step / 2, step)
    best_lam, best_llf = None, -math.inf
    for lam in grid:
        lam = round(float(lam), 2)
        llf = box_cox_log_likelihood(values, lam)
        if llf > best_llf:
            best_lam, best_llf = lam, llf
    return best_lam


def transform_skewed(values: Sequence[float], method: str = "auto",
                     lam: Optional[float] = None,
                     ) -> tuple[list[float], dict]:
    """Skew-reducing transform: shifted log, Box-Cox with grid-selected
    lambda, or auto (gated on |skewness| > 1)."""
    x = np.asarray(values, dtype=np.float64)
    if method == "auto":
        if abs(summary_stats(x).skewness) <= 1:
            return x.tolist(), {"method": "identity"}
        method = "box_cox" if (x > 0).all() else "log"
    if method == "log":
        shift = 1.0 - float(x.min())
        return np.log(x + shift).tolist(), {"method": "log", "shift": shift}
    if method == "box_cox":
        if (x <= 0).any():
            raise errors.NonPositiveInput(
                "box_cox requires strictly positive values")
        if lam is None:
            lam = select_box_cox_lambda(x)
        return box_cox_apply(x, lam).tolist(), {"method": "box_cox",
                                                "lambda": lam}
    raise ValueError(f"unknown transform {method!r}")


# ---------------------------------------------------------------------------
# Pipeline
# ---------------------------------------------------------------------------

def clean_pipeline(dataset: Dataset,
                   impute_config: ImputationConfig = ImputationConfig(),
                   outlier_params: OutlierParams = OutlierParams(),
                   scaling: bool = False,
                   cap_outliers: bool = False,
                   ) -> tuple[Dataset, CleaningReport]:
    """Full cleaning pass: impute every column, flag outliers with all
    three detectors, then optionally scale numeric columns.

    All-missing columns are dropped with a warning, never a pipeline abort.
    """
    report = CleaningReport(
        completeness_before=dataset_completeness(dataset),
        input_digest=dataset_digest(dataset),
        warnings=list(dataset.warnings))

    imputed_cols: list[Column] = []
    for col in dataset.columns:
        if all(v is None for v in col.values):
            report.dropped_columns.append(col.name)
            report.warnings.append(
                f"column {col.name!r} dropped: all values missing")
            continue
        if col.kind == ColumnKind.NUMERIC:
            vals, entries = impute_numeric_knn(dataset, col.name,
                                               impute_config)
        else:
            vals, entries = impute_categorical_mode(col.name, col.values)
        report.imputations.extend(entries)
        imputed_cols.append(Column(col.name, col.kind, tuple(vals)))

    out_cols: list[Column] = []
    for col in imputed_cols:
        if col.kind != ColumnKind.NUMERIC:
            out_cols.append(col)
            continue
        values = list(col.values)
        for i, score in detect_outliers_zscore(values, outlier_params):
            report.outlier_flags.append(OutlierFlag(
                col.name, i, float(values[i]), "zscore", score))
        for i, score in detect_outliers_modified_z(values, outlier_params):
            report.outlier_flags.append(OutlierFlag(
                col.name, i, float(values[i]), "modified_z", score))
        if len(values) >= 4:
            for i, score in detect_outliers_iqr(values, outlier_params):
                report.outlier_flags.append(OutlierFlag(
                    col.name, i, float(values[i]), "iqr", score))

        if cap_outliers and len(values) >= 4:
            low, high = iqr_fences(values, outlier_params.iqr_multiplier)
            capped = [i for i, v in enumerate(values)
                      if v < low or v > high]
            if capped:
                for i in capped:
                    values[i] = min(max(values[i], low), high)
                report.transforms.append(TransformEntry(
                    col.name, "cap_to_fence",
                    {"rows": capped, "low": low, "high": high}))

        if scaling:
            flagged = any(f.column == col.name
                          for f in report.outlier_flags)
            choice = select_scaler(values, flagged)
            if choice.method != "none":
                values = apply_scaling(values, choice)
            report.scalings.append((col.name, choice))
        out_cols.append(Column(col.name, col.kind, tuple(values)))

    cleaned = Dataset(columns=tuple(out_cols), row_count=dataset.row_count)
    report.completeness_after = dataset_completeness(cleaned)
    report.output_digest = dataset_digest(cleaned)
    return cleaned, report
