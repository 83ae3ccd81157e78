"""Chart recommendation: enumerate candidates from column types, score them
with a weighted decision matrix, generate titles, and keep the top N.

Scoring criteria (each in [0, 1]):

* interpretability - fixed per-type constant
* relationship_strength - |r| for scatter, Cramer's V for heatmap,
  between-group variance fraction for box/grouped bar, a skewness-based
  fit 1/(1+|skew|) for histogram/density, normalized category entropy
  for bar
* data_fit - axis completeness times a cardinality fit

Final score is the weighted sum (defaults 0.4 / 0.4 / 0.2).  Output order
is deterministic: descending score, then (chart_type, x, y).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from autoviz import errors
from autoviz.analysis import AnalysisResult
from autoviz.ingest import ColumnKind, ColumnProfile, Dataset, format_cell

CHART_SCHEMA_VERSION = "autoviz-spec/1"

BAR_MAX_CARDINALITY = 50
PAIR_MAX_CARDINALITY = 20
PAIR_CAP = 30
DEFAULT_TOP_N = 5
INLINE_DATA_ROWS = 10_000

INTERPRETABILITY = {
    "bar": 1.0,
    "scatter": 0.9,
    "histogram": 0.9,
    "box": 0.8,
    "grouped_bar": 0.7,
    "heatmap": 0.6,
    "density": 0.6,
}

_PAIR_CHARTS = {"scatter", "box", "grouped_bar", "heatmap"}


@dataclass(frozen=True)
class DecisionWeights:
    interpretability: float = 0.4
    relationship_strength: float = 0.4
    data_fit: float = 0.2

    def __post_init__(self):
        total = self.interpretability + self.relationship_strength + self.data_fit
        if abs(total - 1.0) > 1e-9:
            raise ValueError("weights must sum to 1")


@dataclass(frozen=True)
class ChartSpec:
    chart_type: str
    x: str
    y: Optional[str] = None
    aggregate: Optional[str] = None  # count | mean
    title: str = ""
    score: float = 0.0
    rationale: str = ""
    criteria: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.chart_type in _PAIR_CHARTS and self.y is None:
            raise ValueError(f"{self.chart_type} requires a y column")
        if self.chart_type in {"histogram", "density", "bar"} \
                and self.y is not None:
            raise ValueError(f"{self.chart_type} takes no y column")


# ---------------------------------------------------------------------------
# Candidate enumeration
# ---------------------------------------------------------------------------

def enumerate_candidates(profiles: Sequence[ColumnProfile],
                         analysis: Optional[AnalysisResult] = None,
                         ) -> list[ChartSpec]:
    """Apply the rule table over column types.

    Rule table: numeric -> histogram + density; categorical (2..50 levels)
    -> bar; numeric x numeric -> scatter; categorical (<=20) x numeric ->
    box + grouped bar; categorical x categorical (each <=20) -> heatmap.
    Pair charts are capped at the strongest 30 pairs per family.
    """
    numeric = [p for p in profiles if p.type == ColumnKind.NUMERIC]
    categorical = [p for p in profiles if p.type != ColumnKind.NUMERIC]

    specs: list[ChartSpec] = []
    for p in numeric:
        specs.append(ChartSpec("histogram", x=p.name))
        specs.append(ChartSpec("density", x=p.name))
    for p in categorical:
        if 2 <= p.distinct_count <= BAR_MAX_CARDINALITY:
            specs.append(ChartSpec("bar", x=p.name, aggregate="count"))

    def strength_r(a: str, b: str) -> float:
        if analysis is None or analysis.correlation is None:
            return 0.0
        try:
            return abs(analysis.correlation.r(a, b))
        except ValueError:
            return 0.0

    num_pairs = [(numeric[i], numeric[j])
                 for i in range(len(numeric))
                 for j in range(i + 1, len(numeric))]
    num_pairs.sort(key=lambda ab: (-strength_r(ab[0].name, ab[1].name),
                                   ab[0].name, ab[1].name))
    for a, b in num_pairs[:PAIR_CAP]:
        specs.append(ChartSpec("scatter", x=a.name, y=b.name))

    def strength_chi(a: str, b: str) -> float:
        if analysis is None:
            return 0.0
        res = analysis.chi_square.get((a, b)) or analysis.chi_square.get((b, a))
        return 0.0 if res is None else res.statistic

    def strength_mi(a: str, b: str) -> float:
        if analysis is None:
            return 0.0
        return analysis.mi_score(a, b) or 0.0

    mixed = [(c, n) for c in categorical for n in numeric
             if c.distinct_count <= PAIR_MAX_CARDINALITY]
    mixed.sort(key=lambda cn: (-strength_mi(cn[0].name, cn[1].name),
                               cn[0].name, cn[1].name))
    for c, n in mixed[:PAIR_CAP]:
        specs.append(ChartSpec("box", x=c.name, y=n.name))
        specs.append(ChartSpec("grouped_bar", x=c.name, y=n.name,
                               aggregate="mean"))

    cat_pairs = [(categorical[i], categorical[j])
                 for i in range(len(categorical))
                 for j in range(i + 1, len(categorical))
                 if categorical[i].distinct_count <= PAIR_MAX_CARDINALITY
                 and categorical[j].distinct_count <= PAIR_MAX_CARDINALITY]
    cat_pairs.sort(key=lambda ab: (-strength_chi(ab[0].name, ab[1].name),
                                   ab[0].name, ab[1].name))
    for a, b in cat_pairs[:PAIR_CAP]:
        specs.append(ChartSpec("heatmap", x=a.name, y=b.name,
                               aggregate="count"))

    if not specs:
        raise errors.NoCandidates("dataset has no chartable columns")
    return specs


# ---------------------------------------------------------------------------
# Scoring
# ---------------------------------------------------------------------------

def _clamp(v: float) -> float:
    return max(0.0, min(1.0, v))

def _cramers_v(result) -> float:
    n = result.observed.sum()
    k = min(result.observed.shape[0] - 1, result.observed.shape[1] - 1)
    if n <= 0 or k <= 0:
        return 0.0
    return math.sqrt(result.statistic / (n * k))


def _eta_squared(groups: Sequence, values: Sequence[float]) -> float:
    """Between-group variance fraction of a numeric column split by a
    categorical one."""
    y = np.asarray(values, dtype=np.float64)
    total_var = y.var(ddof=0)
    if total_var == 0:
        return 0.0
    grand = y.mean()
    between = 0.0
    buckets: dict = {}
    for g, v in zip(groups, y):
        buckets.setdefault(g, []).append(v)
    for vals in buckets.values():
        between += len(vals) * (float(np.mean(vals)) - grand) ** 2
    return float(between / len(y) / total_var)


def _norm_entropy(values: Sequence) -> float:
    counts: dict = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    k = len(counts)
    if k < 2:
        return 0.0
    n = len(values)
    h = -sum((c / n) * math.log(c / n) for c in counts.values())
    return h / math.log(k)


def _cardinality_fit(distinct: int, soft: int, hard: int) -> float:
    if distinct <= soft:
        return 1.0
    if distinct >= hard:
        return 0.2
    return 1.0 - 0.8 * (distinct - soft) / (hard - soft)


def _relationship_strength(spec: ChartSpec, dataset: Dataset,
                           analysis: AnalysisResult) -> float:
    ct = spec.chart_type
    if ct == "scatter":
        corr = analysis.correlation
        if corr is None:
            return 0.0
        try:
            return abs(corr.r(spec.x, spec.y))
        except ValueError:
            return 0.0
    if ct == "heatmap":
        res = analysis.chi_square.get((spec.x, spec.y)) \
            or analysis.chi_square.get((spec.y, spec.x))
        return 0.0 if res is None else _cramers_v(res)
    if ct in ("box", "grouped_bar"):
        pairs = [(g, v) for g, v in zip(dataset.column(spec.x).values,
                                        dataset.column(spec.y).values)
                 if g is not None and v is not None]
        if not pairs:
            return 0.0
        groups, vals = zip(*pairs)
        return _eta_squared(groups, vals)
    if ct in ("histogram", "density"):
        stats = analysis.stats.get(spec.x)
        skew = 0.0 if stats is None else abs(stats.skewness)
        return 1.0 / (1.0 + skew)
    if ct == "bar":
        vals = [v for v in dataset.column(spec.x).values if v is not None]
        return _norm_entropy(vals)
    return 0.0


def _data_fit(spec: ChartSpec, profile_map: dict[str, ColumnProfile]) -> float:
    fit = 1.0
    for axis in (spec.x, spec.y):
        if axis is None:
            continue
        prof = profile_map.get(axis)
        if prof is None:
            continue
        fit *= prof.completeness
        if prof.type != ColumnKind.NUMERIC:
            hard = BAR_MAX_CARDINALITY if spec.chart_type == "bar" \
                else PAIR_MAX_CARDINALITY
            fit *= _cardinality_fit(prof.distinct_count, soft=hard // 4,
                                    hard=hard)
    return fit


def score_candidates(candidates: Sequence[ChartSpec], dataset: Dataset,
                     analysis: AnalysisResult,
                     profiles: Sequence[ColumnProfile],
                     weights: DecisionWeights = DecisionWeights(),
                     ) -> list[ChartSpec]:
    """Score every candidate with the weighted decision matrix and return
    them in deterministic descending-score order."""
    profile_map = {p.name: p for p in profiles}
    scored = []
    for spec in candidates:
        criteria = {
            "interpretability": INTERPRETABILITY[spec.chart_type],
            "relationship_strength": _clamp(
                _relationship_strength(spec, dataset, analysis)),
            "data_fit": _clamp(_data_fit(spec, profile_map)),
        }
        score = _clamp(
            weights.interpretability * criteria["interpretability"]
            + weights.relationship_strength * criteria["relationship_strength"]
            + weights.data_fit * criteria["data_fit"])
        winner = max(criteria, key=lambda k: criteria[k])
        rationale = (", ".join(f"{k} {v:.2f}" for k, v in criteria.items())
                     + f"; strongest criterion: {winner}")
        scored.append(replace(spec, score=score, criteria=criteria,
                              rationale=rationale))
    scored.sort(key=lambda s: (-s.score, s.chart_type, s.x, s.y or ""))
    return scored


# ---------------------------------------------------------------------------
# Titles and top-level recommendation
# ---------------------------------------------------------------------------

def _pretty(name: str) -> str:
    return name.replace("_", " ").title()


def generate_title(spec: ChartSpec) -> str:
    x, y = _pretty(spec.x), _pretty(spec.y) if spec.y else ""
    templates = {
        "histogram": f"Distribution of {x}",
        "density": f"Distribution of {x}",
        "bar": f"Count of {x}",
        "scatter": f"{y} vs {x}",
        "box": f"{y} by {x}",
        "grouped_bar": f"Mean {y} by {x}",
        "heatmap": f"{x} × {y} frequency",
    }
    return templates[spec.chart_type]


def recommend(dataset: Dataset, analysis: AnalysisResult,
              profiles: Sequence[ColumnProfile],
              top_n: int = DEFAULT_TOP_N,
              weights: DecisionWeights = DecisionWeights(),
              ) -> list[ChartSpec]:
    """Enumerate, score, title, and truncate to the top N chart specs."""
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    candidates = enumerate_candidates(profiles, analysis)
    scored = score_candidates(candidates, dataset, analysis, profiles,
                              weights)
    return [replace(s, title=generate_title(s)) for s in scored[:top_n]]


def chart_spec_document(spec: ChartSpec, dataset: Dataset) -> dict:
    """Standalone renderer-agnostic JSON document for one chart."""
    data = {}
    for axis in (spec.x, spec.y):
        if axis is None:
            continue
        col = dataset.column(axis)
        data[axis] = [None if v is None else
                      (v if isinstance(v, (int, float)) and
                       not isinstance(v, bool) else format_cell(v))
                      for v in col.values[:INLINE_DATA_ROWS]]
    return {
        "schema": CHART_SCHEMA_VERSION,
        "chart_type": spec.chart_type,
        "x": spec.x,
        "y": spec.y,
        "aggregate": spec.aggregate,
        "title": spec.title,
        "score": spec.score,
        "rationale": spec.rationale,
        "data": data,
    }
