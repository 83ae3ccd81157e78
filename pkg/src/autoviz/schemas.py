"""JSON Schemas for the two emitted document formats.

``autoviz-report/1`` is the full analysis report; ``autoviz-spec/1`` is the
standalone per-chart document.  Tests and the export-integrity gate
validate every emitted file against these.
"""

CHART_TYPES = ["histogram", "density", "bar", "scatter", "box",
               "grouped_bar", "heatmap"]

CHART_SPEC_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "chart_type", "x", "title", "score", "data"],
    "properties": {
        "schema": {"const": "autoviz-spec/1"},
        "chart_type": {"enum": CHART_TYPES},
        "x": {"type": "string"},
        "y": {"type": ["string", "null"]},
        "aggregate": {"enum": ["count", "mean", None]},
        "title": {"type": "string", "minLength": 1},
        "score": {"type": "number", "minimum": 0, "maximum": 1},
        "rationale": {"type": "string"},
        "data": {
            "type": "object",
            "additionalProperties": {
                "type": "array",
                "items": {"type": ["number", "string", "null"]},
            },
        },
    },
    "allOf": [
        {
            "if": {"properties": {"chart_type": {
                "enum": ["scatter", "box", "grouped_bar", "heatmap"]}}},
            "then": {"properties": {"y": {"type": "string"}}},
        },
        {
            "if": {"properties": {"chart_type": {
                "enum": ["histogram", "density", "bar"]}}},
            "then": {"properties": {"y": {"const": None}}},
        },
    ],
}

_PROFILE_SCHEMA = {
    "type": "object",
    "required": ["name", "type", "count", "missing_count", "completeness",
                 "distinct_count"],
    "properties": {
        "name": {"type": "string"},
        "type": {"enum": ["numeric", "categorical", "boolean", "text"]},
        "count": {"type": "integer", "minimum": 0},
        "missing_count": {"type": "integer", "minimum": 0},
        "completeness": {"type": "number", "minimum": 0, "maximum": 1},
        "distinct_count": {"type": "integer", "minimum": 0},
        "stats": {"type": ["object", "null"]},
    },
}

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["schema", "dataset", "profiles", "quality", "cleaning",
                 "analysis", "feature_importance", "charts", "warnings",
                 "stages"],
    "properties": {
        "schema": {"const": "autoviz-report/1"},
        "dataset": {
            "type": "object",
            "required": ["digest", "digest_algorithm", "rows", "columns"],
            "properties": {
                "digest": {"type": "string"},
                "digest_algorithm": {"const": "sha256"},
                "rows": {"type": "integer", "minimum": 0},
                "columns": {"type": "array", "items": {"type": "string"}},
            },
        },
        "profiles": {
            "type": "object",
            "required": ["before", "after"],
            "properties": {
                "before": {"type": "array", "items": _PROFILE_SCHEMA},
                "after": {"type": "array", "items": _PROFILE_SCHEMA},
            },
        },
        "quality": {
            "type": "object",
            "required": ["rows_processed", "completeness_before",
                         "completeness_after", "outlier_flag_count",
                         "transformations_applied", "per_column_quality"],
        },
        "cleaning": {
            "type": "object",
            "required": ["imputations", "outlier_flags", "scalings",
                         "transforms", "dropped_columns", "warnings",
                         "completeness_before", "completeness_after"],
        },
        "analysis": {"type": "object"},
        "feature_importance": {
            "type": "object",
            "required": ["order", "rankings", "mode"],
            "properties": {
                "mode": {"enum": ["supervised", "unsupervised"]},
                "order": {"type": "array", "items": {"type": "string"}},
            },
        },
        "charts": {"type": "array"},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "stages": {
            "type": "object",
            "additionalProperties": {"type": "string"},
        },
    },
}
