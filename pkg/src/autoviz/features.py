"""Feature ranking via four scorers (correlation, chi-square, PCA loadings,
mutual information) plus an aggregate rank, and correlation-redundancy
filtering.

Without a target column each feature's relevance is the mean of its
pairwise scores against the other features ("unsupervised relevance");
reports flag this mode explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from autoviz import errors
from autoviz.analysis import AnalysisResult
from autoviz.ingest import ColumnKind, Dataset

PCA_VARIANCE_CUTOFF = 0.95
REDUNDANCY_THRESHOLD = 0.9

METHODS = ("correlation", "chi_square", "pca_loading", "mutual_information")


@dataclass(frozen=True)
class FeatureRanking:
    method: str
    scores: dict[str, float]
    ranks: dict[str, int]          # 1 = best; ties share the smaller rank
    target: Optional[str] = None
    inapplicable: dict[str, str] = field(default_factory=dict)


def _competition_ranks(scores: dict[str, float]) -> dict[str, int]:
    """Higher score -> lower rank number; equal scores share a rank."""
    ordered = sorted(scores, key=lambda f: (-scores[f], f))
    ranks: dict[str, int] = {}
    for i, feat in enumerate(ordered):
        if i > 0 and scores[feat] == scores[ordered[i - 1]]:
            ranks[feat] = ranks[ordered[i - 1]]
        else:
            ranks[feat] = i + 1
    return ranks


def _correlation_scores(features, analysis: AnalysisResult, target):
    corr = analysis.correlation
    scores, skip = {}, {}
    for col in features:
        if col.kind != ColumnKind.NUMERIC or corr is None:
            skip[col.name] = "not numeric" if col.kind != ColumnKind.NUMERIC \
                else "no correlation matrix"
            continue
        if target is not None:
            if target.kind != ColumnKind.NUMERIC:
                skip[col.name] = "target not numeric"
                continue
            scores[col.name] = abs(corr.r(col.name, target.name))
        else:
            others = [abs(corr.r(col.name, c.name)) for c in features
                      if c is not col and c.kind == ColumnKind.NUMERIC]
            if not others:
                skip[col.name] = "no other numeric features"
                continue
            scores[col.name] = float(np.mean(others))
    return scores, skip


def _chi_square_scores(features, analysis: AnalysisResult, target):
    def stat(a: str, b: str):
        res = analysis.chi_square.get((a, b)) or analysis.chi_square.get((b, a))
        return None if res is None else res.statistic

    scores, skip = {}, {}
    categorical = [c for c in features if c.kind != ColumnKind.NUMERIC]
    for col in features:
        if col.kind == ColumnKind.NUMERIC:
            skip[col.name] = "not categorical"
            continue
        if target is not None:
            if target.kind == ColumnKind.NUMERIC:
                skip[col.name] = "target not categorical"
                continue
            s = stat(col.name, target.name)
            if s is None:
                skip[col.name] = "degenerate pair with target"
                continue
            scores[col.name] = s
        else:
            pair_stats = [stat(col.name, c.name) for c in categorical
                          if c is not col]
            pair_stats = [s for s in pair_stats if s is not None]
            if not pair_stats:
                skip[col.name] = "no other categorical features"
                continue
            scores[col.name] = float(np.mean(pair_stats))
    return scores, skip


def _pca_loading_scores(features, analysis: AnalysisResult):
    scores, skip = {}, {}
    res = analysis.pca
    if res is None:
        for col in features:
            skip[col.name] = "no PCA result"
        return scores, skip
    cum = np.cumsum(res.explained_variance_ratio)
    k = int(np.searchsorted(cum, PCA_VARIANCE_CUTOFF) + 1)
    k = min(k, len(res.eigenvalues))
    for col in features:
        if col.name not in res.feature_names:
            skip[col.name] = "not in PCA basis"
            continue
        j = res.feature_names.index(col.name)
        scores[col.name] = float(sum(
            res.explained_variance_ratio[i] * abs(res.components[i, j])
            for i in range(k)))
    return scores, skip


def _mi_scores(features, analysis: AnalysisResult, target):
    scores, skip = {}, {}
    for col in features:
        if target is not None:
            s = analysis.mi_score(col.name, target.name)
            if s is None:
                skip[col.name] = "no MI score against target"
                continue
            scores[col.name] = s
        else:
            pair = [analysis.mi_score(col.name, c.name) for c in features
                    if c is not col]
            pair = [s for s in pair if s is not None]
            if not pair:
                skip[col.name] = "no MI pairs"
                continue
            scores[col.name] = float(np.mean(pair))
    return scores, skip


def rank_features(dataset: Dataset, analysis: AnalysisResult,
                  target: Optional[str] = None) -> list[FeatureRanking]:
    """One ranking per scoring method plus the aggregate (mean-rank) one.

    Aggregate scores are negated mean ranks so that the higher-score /
    lower-rank convention holds for every method uniformly.
    """
    target_col = None
    if target is not None:
        try:
            target_col = dataset.column(target)
        except KeyError:
            raise errors.UnknownTarget(f"target column {target!r} not found")
    features = [c for c in dataset.columns if c.name != target]

    per_method = {
        "correlation": _correlation_scores(features, analysis, target_col),
        "chi_square": _chi_square_scores(features, analysis, target_col),
        "pca_loading": _pca_loading_scores(features, analysis),
        "mutual_information": _mi_scores(features, analysis, target_col),
    }
    rankings = []
    for method in METHODS:
        scores, skip = per_method[method]
        rankings.append(FeatureRanking(
            method=method, scores=scores, ranks=_competition_ranks(scores),
            target=target, inapplicable=skip))

    mean_ranks: dict[str, float] = {}
    for col in features:
        ranks = [r.ranks[col.name] for r in rankings if col.name in r.ranks]
        if ranks:
            mean_ranks[col.name] = float(np.mean(ranks))
    agg_scores = {f: -mr for f, mr in mean_ranks.items()}
    rankings.append(FeatureRanking(
        method="aggregate", scores=agg_scores,
        ranks=_competition_ranks(agg_scores), target=target,
        inapplicable={c.name: "no applicable method" for c in features
                      if c.name not in mean_ranks}))
    return rankings


def redundancy_filter(matrix, threshold: float = REDUNDANCY_THRESHOLD,
                      ) -> tuple[list[str], list[tuple[str, str, float]]]:
    """Greedily drop one member of each over-threshold correlation pair.

    The member with the larger mean absolute correlation to the retained
    set is dropped; ties drop the later column.  Deterministic.
    """
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1]")
    names = list(matrix.feature_names)
    r = np.abs(np.asarray(matrix.values, dtype=np.float64))
    retained = list(range(len(names)))
    dropped: list[tuple[str, str, float]] = []

    while True:
        worst = None
        for ai, i in enumerate(retained):
            for j in retained[ai + 1:]:
                if r[i, j] > threshold:
                    if worst is None or r[i, j] > r[worst[0], worst[1]]:
                        worst = (i, j)
        if worst is None:
            break
        i, j = worst
        mean_i = np.mean([r[i, k] for k in retained if k != i])
        mean_j = np.mean([r[j, k] for k in retained if k != j])
        if mean_i > mean_j:
            drop, keep = i, j
        elif mean_j > mean_i:
            drop, keep = j, i
        else:
            drop, keep = max(i, j), min(i, j)
        retained.remove(drop)
        dropped.append((names[drop], names[keep], float(matrix.values[i, j])))
    return [names[i] for i in retained], dropped
