"""Automated exploratory data analysis engine.

Takes raw CSV/TSV bytes and produces a cleaned dataset, a statistical
analysis, ranked feature importance, and recommended chart specifications,
via a library API, a CLI (``autoviz``), and an HTTP service.
"""

__version__ = "0.1.0"
