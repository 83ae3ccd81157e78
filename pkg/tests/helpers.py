"""Shared test helpers for building datasets and random tables."""

from __future__ import annotations

import random

from autoviz.ingest import Column, ColumnKind, Dataset


def num_col(name: str, values) -> Column:
    return Column(name, ColumnKind.NUMERIC,
                  tuple(None if v is None else float(v) for v in values))


def cat_col(name: str, values) -> Column:
    return Column(name, ColumnKind.CATEGORICAL, tuple(values))


def make_dataset(*cols: Column) -> Dataset:
    return Dataset(columns=tuple(cols), row_count=len(cols[0].values))


def random_numeric_table(rng: random.Random, n_rows: int, n_cols: int,
                         missing_rate: float = 0.0) -> Dataset:
    cols = []
    for j in range(n_cols):
        vals = []
        for _ in range(n_rows):
            if missing_rate and rng.random() < missing_rate:
                vals.append(None)
            else:
                vals.append(rng.gauss(j, 1 + j * 0.5))
        cols.append(num_col(f"n{j}", vals))
    return make_dataset(*cols)


def random_mixed_table(rng: random.Random, n_rows: int,
                       n_numeric: int, n_categorical: int,
                       missing_rate: float = 0.0) -> Dataset:
    cols = []
    for j in range(n_numeric):
        vals = [None if (missing_rate and rng.random() < missing_rate)
                else rng.gauss(0, 1 + j) for _ in range(n_rows)]
        cols.append(num_col(f"n{j}", vals))
    alphabets = ["abc", "xyzw", "pq"]
    for j in range(n_categorical):
        letters = alphabets[j % len(alphabets)]
        vals = [None if (missing_rate and rng.random() < missing_rate)
                else rng.choice(letters) for _ in range(n_rows)]
        cols.append(cat_col(f"c{j}", vals))
    return make_dataset(*cols)


def to_csv_bytes(dataset: Dataset) -> bytes:
    from autoviz.ingest import Dialect, write_csv
    return write_csv(dataset, Dialect(delimiter=",", has_header=True))
