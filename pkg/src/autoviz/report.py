"""Report assembly and canonical serialization.

The report document (schema ``autoviz-report/1``) carries the input
digest, before/after column profiles, quality metrics, the cleaning
ledger, the analysis summary, feature rankings, and the recommended
charts.  Serialization is canonical: sorted keys and floats rounded to 12
significant digits, so identical inputs produce byte-identical files.

Stage timings are collected but serialized to a separate sidecar document
(`timings.json` in the CLI) so that the canonical report stays
byte-deterministic across reruns.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence

import numpy as np

from autoviz.analysis import AnalysisResult
from autoviz.charts import ChartSpec
from autoviz.cleaning import CleaningReport
from autoviz.features import FeatureRanking
from autoviz.ingest import ColumnProfile

REPORT_SCHEMA_VERSION = "autoviz-report/1"
DIGEST_ALGORITHM = "sha256"
SIGNIFICANT_DIGITS = 12


@dataclass(frozen=True)
class QualityMetrics:
    rows_processed: int
    completeness_before: float
    completeness_after: float
    outlier_flag_count: int
    transformations_applied: int
    per_column_quality: dict[str, float]


@dataclass
class AnalysisReport:
    dataset_digest: str
    row_count: int
    column_names: tuple[str, ...]
    profiles_before: list[ColumnProfile]
    profiles_after: list[ColumnProfile]
    quality: QualityMetrics
    cleaning: CleaningReport
    analysis: Optional[AnalysisResult]
    feature_importance: list[FeatureRanking]
    charts: list[ChartSpec]
    warnings: list[str] = field(default_factory=list)
    stages: dict[str, str] = field(default_factory=dict)  # stage -> ok/skipped:...
    timings_ms: dict[str, float] = field(default_factory=dict)


def input_digest(raw: bytes) -> str:
    return hashlib.sha256(raw).hexdigest()


def quality_metrics(before: Sequence[ColumnProfile],
                    after: Sequence[ColumnProfile],
                    cleaning: CleaningReport) -> QualityMetrics:
    """Per-column quality = completeness_after * (1 - flagged_fraction/2),
    clamped to [0, 1]; dropped columns are absent."""
    flagged_rows: dict[str, set[int]] = {}
    for flag in cleaning.outlier_flags:
        flagged_rows.setdefault(flag.column, set()).add(flag.row)
    per_column = {}
    for prof in after:
        frac = (len(flagged_rows.get(prof.name, ())) / prof.count
                if prof.count else 0.0)
        q = prof.completeness * (1 - frac / 2)
        per_column[prof.name] = max(0.0, min(1.0, q))
    rows = after[0].count if after else (before[0].count if before else 0)
    return QualityMetrics(
        rows_processed=rows,
        completeness_before=cleaning.completeness_before,
        completeness_after=cleaning.completeness_after,
        outlier_flag_count=len(cleaning.outlier_flags),
        transformations_applied=(len(cleaning.scalings)
                                 + len(cleaning.transforms)),
        per_column_quality=per_column)


# ---------------------------------------------------------------------------
# Document rendering
# ---------------------------------------------------------------------------

def _round_floats(obj):
    if isinstance(obj, float):
        return float(f"{obj:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _round_floats(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return _round_floats(float(obj))
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def canonical_json(document: dict) -> str:
    """Stable rendering: sorted keys, 12-significant-digit floats."""
    return json.dumps(_round_floats(document), sort_keys=True, indent=2,
                      ensure_ascii=False) + "\n"


def _profile_doc(prof: ColumnProfile) -> dict:
    doc = {
        "name": prof.name,
        "type": prof.type,
        "count": prof.count,
        "missing_count": prof.missing_count,
        "completeness": prof.completeness,
        "distinct_count": prof.distinct_count,
        "stats": None,
    }
    if prof.stats is not None:
        doc["stats"] = asdict(prof.stats)
    return doc


def _cleaning_doc(cleaning: CleaningReport) -> dict:
    return {
        "imputations": [
            {"column": e.column, "row": e.row,
             "new_value": e.new_value if not isinstance(e.new_value, bool)
             else str(e.new_value).lower(),
             "method": e.method}
            for e in cleaning.imputations],
        "outlier_flags": [
            {"column": f.column, "row": f.row, "value": f.value,
             "detector": f.detector, "score": f.score}
            for f in cleaning.outlier_flags],
        "scalings": [
            {"column": name, "method": choice.method,
             "parameters": dict(choice.parameters)}
            for name, choice in cleaning.scalings],
        "transforms": [
            {"column": t.column, "name": t.name,
             "parameters": dict(t.parameters)}
            for t in cleaning.transforms],
        "dropped_columns": list(cleaning.dropped_columns),
        "warnings": list(cleaning.warnings),
        "completeness_before": cleaning.completeness_before,
        "completeness_after": cleaning.completeness_after,
        "input_digest": cleaning.input_digest,
        "output_digest": cleaning.output_digest,
    }


def _analysis_doc(analysis: Optional[AnalysisResult]) -> dict:
    if analysis is None:
        return {"skipped": "analysis stage did not run"}
    doc: dict = {"skipped_parts": dict(analysis.skipped)}
    doc["summary_stats"] = {name: asdict(s)
                            for name, s in analysis.stats.items()}
    if analysis.correlation is not None:
        corr = analysis.correlation
        doc["correlation"] = {
            "features": list(corr.feature_names),
            "values": corr.values.tolist(),
            "pair_counts": corr.pair_counts.tolist(),
            "degenerate": corr.degenerate.tolist(),
        }
    doc["chi_square"] = [
        {"x": a, "y": b, "statistic": r.statistic, "dof": r.dof,
         "p_value": r.p_value,
         "low_expected_warning": r.low_expected_warning}
        for (a, b), r in sorted(analysis.chi_square.items())]
    if analysis.pca is not None:
        pca = analysis.pca
        doc["pca"] = {
            "features": list(pca.feature_names),
            "eigenvalues": pca.eigenvalues.tolist(),
            "explained_variance_ratio":
                pca.explained_variance_ratio.tolist(),
            "components": pca.components.tolist(),
            "excluded": list(pca.excluded),
        }
    doc["mutual_information"] = [
        {"x": a, "y": b, "score": s.score, "bins_used": s.bins_used}
        for (a, b), s in sorted(analysis.mi.items())]
    doc["kde"] = {
        name: {"grid": d.grid.tolist(), "density": d.density.tolist(),
               "bandwidth": d.bandwidth, "rule": d.rule}
        for name, d in analysis.kde.items()}
    return doc


def _feature_doc(rankings: Sequence[FeatureRanking]) -> dict:
    aggregate = next((r for r in rankings if r.method == "aggregate"), None)
    order = []
    if aggregate is not None:
        order = sorted(aggregate.ranks, key=lambda f: (aggregate.ranks[f], f))
    mode = "unsupervised"
    if rankings and rankings[0].target is not None:
        mode = "supervised"
    return {
        "mode": mode,
        "order": order,
        "rankings": [
            {"method": r.method, "target": r.target,
             "scores": dict(r.scores),
             "ranks": dict(r.ranks),
             "inapplicable": dict(r.inapplicable)}
            for r in rankings],
    }


def _chart_doc(spec: ChartSpec) -> dict:
    return {
        "chart_type": spec.chart_type,
        "x": spec.x,
        "y": spec.y,
        "aggregate": spec.aggregate,
        "title": spec.title,
        "score": spec.score,
        "rationale": spec.rationale,
        "criteria": dict(spec.criteria),
    }


def report_document(report: AnalysisReport) -> dict:
    """Render the report to a plain JSON-serializable dict (no timings;
    those live in a sidecar to keep this document deterministic)."""
    return {
        "schema": REPORT_SCHEMA_VERSION,
        "dataset": {
            "digest": report.dataset_digest,
            "digest_algorithm": DIGEST_ALGORITHM,
            "rows": report.row_count,
            "columns": list(report.column_names),
        },
        "profiles": {
            "before": [_profile_doc(p) for p in report.profiles_before],
            "after": [_profile_doc(p) for p in report.profiles_after],
        },
        "quality": {
            "rows_processed": report.quality.rows_processed,
            "completeness_before": report.quality.completeness_before,
            "completeness_after": report.quality.completeness_after,
            "outlier_flag_count": report.quality.outlier_flag_count,
            "transformations_applied":
                report.quality.transformations_applied,
            "per_column_quality": dict(report.quality.per_column_quality),
        },
        "cleaning": _cleaning_doc(report.cleaning),
        "analysis": _analysis_doc(report.analysis),
        "feature_importance": _feature_doc(report.feature_importance),
        "charts": [_chart_doc(c) for c in report.charts],
        "warnings": list(report.warnings),
        "stages": dict(report.stages),
    }


def render_report(report: AnalysisReport) -> str:
    return canonical_json(report_document(report))
