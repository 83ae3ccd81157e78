"""Statistical core: summary statistics, Pearson correlation, chi-square
independence tests, PCA, mutual information, and kernel density estimation.

Conventions, applied consistently across the package:

* descriptive std is the sample (n-1) flavor; scaling and z-scores use the
  population (n) flavor
* skewness and excess kurtosis are raw moment ratios without small-sample
  correction; both are 0 for constant columns
* quantiles interpolate linearly at position (n-1)*q
* mutual information is reported in nats
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from autoviz import errors, kernels
from autoviz.ingest import Column, ColumnKind, Dataset
from autoviz.special import chi_square_sf

DEFAULT_MI_BINS = 10
DEFAULT_KDE_GRID = 256


# ---------------------------------------------------------------------------
# Summary statistics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SummaryStats:
    mean: float
    median: float
    std: float
    skewness: float
    kurtosis: float
    min: float
    max: float
    n: int


def quantile(values: Sequence[float], q: float) -> float:
    """Linear-interpolation quantile at position (n-1)*q."""
    xs = sorted(values)
    n = len(xs)
    if n == 0:
        raise ValueError("empty input")
    pos = (n - 1) * q
    lo = int(math.floor(pos))
    hi = int(math.ceil(pos))
    if lo == hi:
        return float(xs[lo])
    frac = pos - lo
    return float(xs[lo] * (1 - frac) + xs[hi] * frac)


def summary_stats(values: Sequence[float]) -> SummaryStats:
    """Moment-based descriptive statistics for a numeric column."""
    x = np.asarray(values, dtype=np.float64)
    n = len(x)
    if n == 0:
        raise ValueError("empty input")
    mean = float(x.mean())
    dev = x - mean
    m2 = float((dev**2).mean())
    if m2 > 0:
        skew = float((dev**3).mean()) / m2**1.5
        kurt = float((dev**4).mean()) / m2**2 - 3.0
    else:
        skew = kurt = 0.0
    std = float(x.std(ddof=1)) if n > 1 else 0.0
    return SummaryStats(mean=mean, median=quantile(x, 0.5), std=std,
                        skewness=skew, kurtosis=kurt,
                        min=float(x.min()), max=float(x.max()), n=n)


def population_std(values: Sequence[float]) -> float:
    return float(np.asarray(values, dtype=np.float64).std(ddof=0))


# ---------------------------------------------------------------------------
# Pearson correlation (pairwise-complete)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrelationMatrix:
    feature_names: tuple[str, ...]
    values: np.ndarray       # symmetric, r in [-1, 1]
    pair_counts: np.ndarray  # n used per pair
    degenerate: np.ndarray   # True where a zero-variance pair forced r = 0

    def r(self, a: str, b: str) -> float:
        i = self.feature_names.index(a)
        j = self.feature_names.index(b)
        return float(self.values[i, j])


def pearson_r(x: Sequence[float], y: Sequence[float]) -> float:
    """Plain Pearson correlation of two complete same-length vectors."""
    xa = np.asarray(x, dtype=np.float64)
    ya = np.asarray(y, dtype=np.float64)
    dx = xa - xa.mean()
    dy = ya - ya.mean()
    denom = math.sqrt(float((dx**2).sum()) * float((dy**2).sum()))
    if denom == 0:
        return 0.0
    return float((dx * dy).sum()) / denom


def pearson_matrix(columns: Sequence[Column]) -> CorrelationMatrix:
    """Pairwise-complete correlation matrix over numeric columns."""
    if len(columns) < 2:
        raise ValueError("need at least two numeric columns")
    names = tuple(c.name for c in columns)
    p = len(columns)
    data = np.full((p, max(len(c.values) for c in columns)), np.nan)
    for i, col in enumerate(columns):
        data[i] = [np.nan if v is None else v for v in col.values]
    present = ~np.isnan(data)

    r = np.zeros((p, p))
    counts = np.zeros((p, p), dtype=np.int64)
    degen = np.zeros((p, p), dtype=bool)
    for i in range(p):
        for j in range(i, p):
            both = present[i] & present[j]
            n = int(both.sum())
            counts[i, j] = counts[j, i] = n
            if n < 2:
                degen[i, j] = degen[j, i] = True
                continue
            xi, xj = data[i][both], data[j][both]
            if xi.std() == 0 or xj.std() == 0:
                degen[i, j] = degen[j, i] = True
                continue
            val = pearson_r(xi, xj)
            val = max(-1.0, min(1.0, val))
            r[i, j] = r[j, i] = val
    return CorrelationMatrix(feature_names=names, values=r,
                             pair_counts=counts, degenerate=degen)


# ---------------------------------------------------------------------------
# Chi-square test of independence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float
    observed: np.ndarray
    expected: np.ndarray
    row_categories: tuple
    col_categories: tuple
    low_expected_warning: bool


def chi_square_from_table(observed: np.ndarray,
                          row_categories: tuple = (),
                          col_categories: tuple = ()) -> ChiSquareResult:
    """Chi-square independence test for a ready-made contingency table."""
    obs = np.asarray(observed, dtype=np.float64)
    row_tot = obs.sum(axis=1)
    col_tot = obs.sum(axis=0)
    keep_r = row_tot > 0
    keep_c = col_tot > 0
    obs = obs[np.ix_(keep_r, keep_c)]
    row_categories = tuple(np.asarray(row_categories)[keep_r]) \
        if len(row_categories) else ()
    col_categories = tuple(np.asarray(col_categories)[keep_c]) \
        if len(col_categories) else ()
    r, c = obs.shape
    if r < 2 or c < 2:
        raise errors.DegenerateTable(
            "contingency table needs >= 2 non-empty rows and columns")
    row_tot = obs.sum(axis=1, keepdims=True)
    col_tot = obs.sum(axis=0, keepdims=True)
    total = obs.sum()
    expected = row_tot @ col_tot / total
    stat = float(((obs - expected) ** 2 / expected).sum())
    dof = (r - 1) * (c - 1)
    return ChiSquareResult(
        statistic=stat, dof=dof, p_value=chi_square_sf(stat, dof),
        observed=obs, expected=expected,
        row_categories=row_categories, col_categories=col_categories,
        low_expected_warning=bool((expected < 5).any()))


def chi_square(col_a: Sequence, col_b: Sequence) -> ChiSquareResult:
    """Chi-square test between two categorical columns (co-present rows)."""
    pairs = [(a, b) for a, b in zip(col_a, col_b)
             if a is not None and b is not None]
    if not pairs:
        raise errors.DegenerateTable("no co-present rows")
    cats_a = sorted({a for a, _ in pairs}, key=str)
    cats_b = sorted({b for _, b in pairs}, key=str)
    if len(cats_a) < 2 or len(cats_b) < 2:
        raise errors.DegenerateTable("each column needs >= 2 categories")
    idx_a = {c: i for i, c in enumerate(cats_a)}
    idx_b = {c: i for i, c in enumerate(cats_b)}
    obs = np.zeros((len(cats_a), len(cats_b)))
    for a, b in pairs:
        obs[idx_a[a], idx_b[b]] += 1
    return chi_square_from_table(obs, tuple(cats_a), tuple(cats_b))


# ---------------------------------------------------------------------------
# PCA (correlation PCA over listwise-complete rows)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PCAResult:
    feature_names: tuple[str, ...]
    components: np.ndarray               # rows are component weight vectors
    eigenvalues: np.ndarray              # descending, clamped >= 0
    explained_variance_ratio: np.ndarray
    means: np.ndarray
    stds: np.ndarray                     # population std used to standardize
    excluded: tuple[str, ...] = ()       # zero-variance columns left out


def pca(columns: Sequence[Column], n_components: Optional[int] = None,
        ) -> PCAResult:
    """Eigendecomposition of the covariance of standardized complete rows.

    Sign convention: each component's largest-magnitude weight is positive.
    """
    if len(columns) < 2:
        raise errors.NoVaryingColumns("need at least two numeric columns")
    rows_ok = np.ones(len(columns[0].values), dtype=bool)
    for col in columns:
        rows_ok &= np.array([v is not None for v in col.values])
    if int(rows_ok.sum()) < 3:
        raise errors.TooFewRows("PCA needs at least 3 complete rows")

    kept, excluded, data = [], [], []
    for col in columns:
        vals = np.array([v for v, ok in zip(col.values, rows_ok) if ok],
                        dtype=np.float64)
        if vals.std(ddof=0) == 0:
            excluded.append(col.name)
        else:
            kept.append(col.name)
            data.append(vals)
    if len(kept) < 2:
        raise errors.NoVaryingColumns(
            "fewer than two columns with nonzero variance")

    x = np.stack(data, axis=1)
    means = x.mean(axis=0)
    stds = x.std(axis=0, ddof=0)
    z = (x - means) / stds
    cov = z.T @ z / z.shape[0]
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = np.clip(eigvals[order], 0.0, None)
    comps = eigvecs[:, order].T
    for k in range(comps.shape[0]):
        if comps[k, np.argmax(np.abs(comps[k]))] < 0:
            comps[k] = -comps[k]
    total = eigvals.sum()
    ratio = eigvals / total if total > 0 else np.zeros_like(eigvals)
    if n_components is not None:
        comps = comps[:n_components]
    return PCAResult(feature_names=tuple(kept), components=comps,
                     eigenvalues=eigvals, explained_variance_ratio=ratio,
                     means=means, stds=stds, excluded=tuple(excluded))


# ---------------------------------------------------------------------------
# Mutual information
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MIScore:
    feature_pair: tuple[str, str]
    score: float
    bins_used: int


def _discretize(values: list, kind: str, bins: int) -> tuple[list, int]:
    """Map a column to discrete symbols; numeric columns get quantile bins."""
    if kind != ColumnKind.NUMERIC:
        return list(values), len(set(values))
    x = np.asarray(values, dtype=np.float64)
    b = min(bins, max(1, int(math.isqrt(len(x)))))
    if len(set(x.tolist())) <= 1:
        return [0] * len(x), 1
    edges = np.unique(np.quantile(x, np.linspace(0, 1, b + 1)))
    inner = edges[1:-1]
    codes = np.searchsorted(inner, x, side="right")
    return codes.tolist(), len(edges) - 1 if len(edges) > 1 else 1


def mutual_information(col_x: Column, col_y: Column,
                       bins: int = DEFAULT_MI_BINS) -> MIScore:
    """MI in nats over a discretized joint distribution, computed by
    direct summation with 0*log(0) taken as 0."""
    if bins < 2:
        raise ValueError("bins must be >= 2")
    pairs = [(a, b) for a, b in zip(col_x.values, col_y.values)
             if a is not None and b is not None]
    if not pairs:
        return MIScore((col_x.name, col_y.name), 0.0, 0)
    xs, ys = zip(*pairs)
    dx, kx = _discretize(list(xs), col_x.kind, bins)
    dy, ky = _discretize(list(ys), col_y.kind, bins)
    if kx <= 1 or ky <= 1:
        return MIScore((col_x.name, col_y.name), 0.0, max(kx, ky))

    n = len(dx)
    joint: dict = {}
    px: dict = {}
    py: dict = {}
    for a, b in zip(dx, dy):
        joint[(a, b)] = joint.get((a, b), 0) + 1
        px[a] = px.get(a, 0) + 1
        py[b] = py.get(b, 0) + 1
    mi = 0.0
    for (a, b), c in joint.items():
        p_xy = c / n
        mi += p_xy * math.log(p_xy * n * n / (px[a] * py[b]))
    return MIScore((col_x.name, col_y.name), max(0.0, mi), max(kx, ky))


def entropy_of(values: list, kind: str, bins: int = DEFAULT_MI_BINS) -> float:
    """Shannon entropy in nats under the same discretization as MI."""
    codes, k = _discretize(list(values), kind, bins)
    if k <= 1:
        return 0.0
    n = len(codes)
    counts: dict = {}
    for c in codes:
        counts[c] = counts.get(c, 0) + 1
    return -sum((c / n) * math.log(c / n) for c in counts.values())


# ---------------------------------------------------------------------------
# Kernel density estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DensityEstimate:
    grid: np.ndarray
    density: np.ndarray
    bandwidth: float
    rule: str


def scott_bandwidth(sigma: float, n: int) -> float:
    return sigma * n ** (-1.0 / 5.0)


def silverman_bandwidth(sigma: float, iqr: float, n: int) -> float:
    return 0.9 * min(sigma, iqr / 1.34) * n ** (-1.0 / 5.0)


def kde_evaluate(values: Sequence[float], grid: Sequence[float],
                 h: float) -> np.ndarray:
    """Gaussian-kernel density at the given points; no input gating."""
    return kernels.kde_gaussian(np.asarray(values, dtype=np.float64),
                                np.asarray(grid, dtype=np.float64), h)


def kde(values: Sequence[float], rule: str = "silverman",
        grid_size: int = DEFAULT_KDE_GRID) -> DensityEstimate:
    """Density estimate on a uniform grid spanning [min-3h, max+3h]."""
    x = np.asarray(values, dtype=np.float64)
    n = len(x)
    if n < 2:
        raise ValueError("kde needs at least 2 values")
    lo, hi = float(x.min()), float(x.max())
    if hi == lo:
        raise errors.DegenerateSpread("zero spread")
    sigma = float(x.std(ddof=1))
    if rule == "scott":
        h = scott_bandwidth(sigma, n)
    elif rule == "silverman":
        iqr = quantile(x, 0.75) - quantile(x, 0.25)
        h = silverman_bandwidth(sigma, iqr, n)
    else:
        raise ValueError(f"unknown bandwidth rule {rule!r}")
    h = max(h, 1e-9 * (hi - lo))
    grid = np.linspace(lo - 3 * h, hi + 3 * h, grid_size)
    return DensityEstimate(grid=grid, density=kde_evaluate(x, grid, h),
                           bandwidth=h, rule=rule)


# ---------------------------------------------------------------------------
# Aggregate
# ---------------------------------------------------------------------------

@dataclass
class AnalysisResult:
    stats: dict[str, SummaryStats] = field(default_factory=dict)
    correlation: Optional[CorrelationMatrix] = None
    chi_square: dict[tuple[str, str], ChiSquareResult] = field(default_factory=dict)
    pca: Optional[PCAResult] = None
    mi: dict[tuple[str, str], MIScore] = field(default_factory=dict)
    kde: dict[str, DensityEstimate] = field(default_factory=dict)
    skipped: dict[str, str] = field(default_factory=dict)

    def mi_score(self, a: str, b: str) -> Optional[float]:
        key = (a, b) if (a, b) in self.mi else (b, a)
        score = self.mi.get(key)
        return None if score is None else score.score


def analyze(dataset: Dataset, mi_bins: int = DEFAULT_MI_BINS,
            kde_rule: str = "silverman") -> AnalysisResult:
    """Run the full statistical battery; stage failures are recorded as
    skipped, never raised."""
    result = AnalysisResult()
    numeric = dataset.numeric_columns()
    categorical = dataset.categorical_columns()

    for col in numeric:
        present = [v for v in col.values if v is not None]
        if present:
            result.stats[col.name] = summary_stats(present)

    if len(numeric) >= 2:
        result.correlation = pearson_matrix(numeric)
    else:
        result.skipped["correlation"] = "fewer than two numeric columns"

    for i, a in enumerate(categorical):
        for b in categorical[i + 1:]:
            try:
                result.chi_square[(a.name, b.name)] = chi_square(
                    a.values, b.values)
            except errors.DegenerateTable as exc:
                result.skipped[f"chi_square:{a.name}:{b.name}"] = exc.message

    if len(numeric) >= 2:
        try:
            result.pca = pca(numeric)
        except errors.AutovizError as exc:
            result.skipped["pca"] = exc.message
    else:
        result.skipped["pca"] = "fewer than two numeric columns"

    scorable = numeric + categorical
    for i, a in enumerate(scorable):
        for b in scorable[i + 1:]:
            result.mi[(a.name, b.name)] = mutual_information(a, b, mi_bins)

    for col in numeric:
        present = [v for v in col.values if v is not None]
        try:
            result.kde[col.name] = kde(present, rule=kde_rule)
        except (errors.DegenerateSpread, ValueError) as exc:
            result.skipped[f"kde:{col.name}"] = str(exc)
    return result
