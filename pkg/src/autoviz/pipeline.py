"""End-to-end pipeline: bytes in, report + cleaned dataset + charts out.

Both the CLI and the HTTP service drive this single entry point, so the
two facades produce byte-identical reports for identical input bytes and
options.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from autoviz import charts as charts_mod
from autoviz import cleaning as cleaning_mod
from autoviz import errors
from autoviz import features as features_mod
from autoviz import ingest
from autoviz.analysis import AnalysisResult, analyze
from autoviz.charts import ChartSpec, DecisionWeights
from autoviz.report import (AnalysisReport, input_digest, quality_metrics,
                            render_report)


@dataclass(frozen=True)
class PipelineOptions:
    target: Optional[str] = None
    top_charts: int = charts_mod.DEFAULT_TOP_N
    scaling: bool = False
    cap_outliers: bool = False
    weights: DecisionWeights = DecisionWeights()
    impute: cleaning_mod.ImputationConfig = cleaning_mod.ImputationConfig()
    outliers: cleaning_mod.OutlierParams = cleaning_mod.OutlierParams()
    max_bytes: int = ingest.DEFAULT_MAX_BYTES

    @classmethod
    def from_dict(cls, raw: dict) -> "PipelineOptions":
        known = {}
        if "target" in raw and raw["target"] is not None:
            known["target"] = str(raw["target"])
        if "top_charts" in raw:
            known["top_charts"] = int(raw["top_charts"])
        if "scaling" in raw:
            known["scaling"] = bool(raw["scaling"])
        if "cap_outliers" in raw:
            known["cap_outliers"] = bool(raw["cap_outliers"])
        if "weights" in raw:
            w = raw["weights"]
            known["weights"] = DecisionWeights(
                interpretability=float(w.get("interpretability", 0.4)),
                relationship_strength=float(
                    w.get("relationship_strength", 0.4)),
                data_fit=float(w.get("data_fit", 0.2)))
        if "knn_k" in raw:
            known["impute"] = cleaning_mod.ImputationConfig(
                knn_k=int(raw["knn_k"]))
        return cls(**known)


@dataclass
class PipelineResult:
    report: AnalysisReport
    dataset: ingest.Dataset          # cleaned
    dialect: ingest.Dialect
    charts: list[ChartSpec] = field(default_factory=list)

    def report_json(self) -> str:
        return render_report(self.report)

    def chart_documents(self) -> list[dict]:
        return [charts_mod.chart_spec_document(c, self.dataset)
                for c in self.charts]

    def cleaned_csv(self) -> bytes:
        return ingest.write_csv(self.dataset, self.dialect)


def run_pipeline(raw: bytes,
                 options: PipelineOptions = PipelineOptions(),
                 ) -> PipelineResult:
    """Parse, clean, analyze, rank, and recommend in one pass.

    Raises typed errors for unusable input (empty, oversized, undecodable);
    downstream stage failures degrade to skipped markers in the report.
    """
    timings: dict[str, float] = {}
    stages: dict[str, str] = {}
    warnings: list[str] = []

    t0 = time.perf_counter()
    dialect = ingest.detect_dialect(raw[:65536])
    if dialect.fallback_used:
        warnings.append("dialect undecidable; fell back to comma delimiter")
    parsed = ingest.parse_table(raw, dialect, max_bytes=options.max_bytes)
    typed = ingest.infer_types(parsed)
    profiles_before = ingest.profile_columns(typed)
    timings["ingest"] = (time.perf_counter() - t0) * 1000
    stages["ingest"] = "ok"

    if options.target is not None \
            and options.target not in typed.column_names:
        raise errors.UnknownTarget(
            f"target column {options.target!r} not found")

    t0 = time.perf_counter()
    cleaned, cleaning_report = cleaning_mod.clean_pipeline(
        typed, impute_config=options.impute,
        outlier_params=options.outliers, scaling=options.scaling,
        cap_outliers=options.cap_outliers)
    profiles_after = ingest.profile_columns(cleaned)
    timings["cleaning"] = (time.perf_counter() - t0) * 1000
    stages["cleaning"] = "ok"

    t0 = time.perf_counter()
    analysis: Optional[AnalysisResult] = None
    try:
        analysis = analyze(cleaned)
        stages["analysis"] = "ok"
    except Exception as exc:  # noqa: BLE001 - stage isolation by contract
        stages["analysis"] = f"skipped: {exc}"
        warnings.append(f"analysis stage failed: {exc}")
    timings["analysis"] = (time.perf_counter() - t0) * 1000

    t0 = time.perf_counter()
    rankings: list = []
    if analysis is not None:
        target = options.target
        if target is not None and target in cleaning_report.dropped_columns:
            warnings.append(f"target {target!r} was dropped during cleaning;"
                            " ranking unsupervised")
            target = None
        try:
            rankings = features_mod.rank_features(cleaned, analysis, target)
            stages["feature_selection"] = "ok"
        except errors.AutovizError as exc:
            stages["feature_selection"] = f"skipped: {exc.message}"
            warnings.append(f"feature selection skipped: {exc.message}")
    else:
        stages["feature_selection"] = "skipped: no analysis"
    timings["feature_selection"] = (time.perf_counter() - t0) * 1000

    t0 = time.perf_counter()
    recommended: list[ChartSpec] = []
    if analysis is not None:
        try:
            recommended = charts_mod.recommend(
                cleaned, analysis, profiles_after,
                top_n=options.top_charts, weights=options.weights)
            stages["charts"] = "ok"
        except errors.NoCandidates as exc:
            stages["charts"] = f"skipped: {exc.message}"
            warnings.append(f"chart recommendation skipped: {exc.message}")
    else:
        stages["charts"] = "skipped: no analysis"
    timings["charts"] = (time.perf_counter() - t0) * 1000

    quality = quality_metrics(profiles_before, profiles_after,
                              cleaning_report)
    report = AnalysisReport(
        dataset_digest=input_digest(raw),
        row_count=cleaned.row_count,
        column_names=cleaned.column_names,
        profiles_before=profiles_before,
        profiles_after=profiles_after,
        quality=quality,
        cleaning=cleaning_report,
        analysis=analysis,
        feature_importance=rankings,
        charts=recommended,
        warnings=warnings + list(cleaning_report.warnings),
        stages=stages,
        timings_ms=timings)
    return PipelineResult(report=report, dataset=cleaned, dialect=dialect,
                          charts=recommended)
