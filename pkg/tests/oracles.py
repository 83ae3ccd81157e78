"""Independent direct-summation oracles.

Everything here is written from the defining formulas with plain Python
loops (plus polynomial root finding for the PCA oracle), deliberately
avoiding the code paths under test.  Expected values frozen into tests
were computed with these.
"""

from __future__ import annotations

import math

import numpy as np


def mean(xs):
    return sum(xs) / len(xs)


def pearson_oracle(xs, ys) -> float:
    mx, my = mean(xs), mean(ys)
    num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    den = math.sqrt(sum((x - mx) ** 2 for x in xs)) \
        * math.sqrt(sum((y - my) ** 2 for y in ys))
    return num / den


def chi2_oracle(pairs) -> tuple[float, int]:
    """(statistic, dof) from raw category pairs."""
    rows = sorted({a for a, _ in pairs}, key=str)
    cols = sorted({b for _, b in pairs}, key=str)
    obs = {(a, b): 0 for a in rows for b in cols}
    for a, b in pairs:
        obs[(a, b)] += 1
    n = len(pairs)
    row_tot = {a: sum(obs[(a, b)] for b in cols) for a in rows}
    col_tot = {b: sum(obs[(a, b)] for a in rows) for b in cols}
    stat = 0.0
    for a in rows:
        for b in cols:
            e = row_tot[a] * col_tot[b] / n
            stat += (obs[(a, b)] - e) ** 2 / e
    return stat, (len(rows) - 1) * (len(cols) - 1)


def mi_oracle(xs, ys) -> float:
    """MI in nats over discrete symbol pairs, 0*log(0) = 0."""
    n = len(xs)
    px: dict = {}
    py: dict = {}
    pxy: dict = {}
    for x, y in zip(xs, ys):
        px[x] = px.get(x, 0) + 1
        py[y] = py.get(y, 0) + 1
        pxy[(x, y)] = pxy.get((x, y), 0) + 1
    mi = 0.0
    for (x, y), c in pxy.items():
        p = c / n
        mi += p * math.log(p / ((px[x] / n) * (py[y] / n)))
    return mi


def entropy_oracle(xs) -> float:
    n = len(xs)
    counts: dict = {}
    for x in xs:
        counts[x] = counts.get(x, 0) + 1
    return -sum((c / n) * math.log(c / n) for c in counts.values())


# ---------------------------------------------------------------------------
# PCA oracle: characteristic polynomial roots + adjugate eigenvectors
# ---------------------------------------------------------------------------

def standardized_cov_oracle(columns) -> np.ndarray:
    """Population covariance of columns standardized to mean 0 / pop-std 1."""
    z = []
    for col in columns:
        m = mean(col)
        s = math.sqrt(sum((v - m) ** 2 for v in col) / len(col))
        z.append([(v - m) / s for v in col])
    p, n = len(z), len(z[0])
    cov = np.zeros((p, p))
    for i in range(p):
        for j in range(p):
            cov[i, j] = sum(z[i][r] * z[j][r] for r in range(n)) / n
    return cov


def charpoly_eigvals_oracle(cov: np.ndarray) -> list[float]:
    """Eigenvalues (descending) via characteristic-polynomial roots, p <= 3."""
    p = cov.shape[0]
    if p == 2:
        a, b = cov[0, 0], cov[0, 1]
        c, d = cov[1, 0], cov[1, 1]
        coeffs = [1.0, -(a + d), a * d - b * c]
    elif p == 3:
        tr = cov[0, 0] + cov[1, 1] + cov[2, 2]
        m2 = 0.0  # sum of principal 2x2 minors
        for i in range(3):
            for j in range(i + 1, 3):
                m2 += cov[i, i] * cov[j, j] - cov[i, j] * cov[j, i]
        det = (cov[0, 0] * (cov[1, 1] * cov[2, 2] - cov[1, 2] * cov[2, 1])
               - cov[0, 1] * (cov[1, 0] * cov[2, 2] - cov[1, 2] * cov[2, 0])
               + cov[0, 2] * (cov[1, 0] * cov[2, 1] - cov[1, 1] * cov[2, 0]))
        coeffs = [1.0, -tr, m2, -det]
    else:
        raise ValueError("oracle handles p in {2, 3}")
    roots = np.roots(coeffs)
    return sorted((float(r.real) for r in roots), reverse=True)


def eigvec_oracle(cov: np.ndarray, lam: float) -> np.ndarray:
    """Unit eigenvector for eigenvalue lam, p <= 3, via row cross products."""
    p = cov.shape[0]
    a = cov - lam * np.eye(p)
    if p == 2:
        # at an eigenvalue the rows of a are parallel; the eigenvector is
        # orthogonal to the larger-norm row
        row = a[0] if np.linalg.norm(a[0]) >= np.linalg.norm(a[1]) else a[1]
        v = np.array([-row[1], row[0]])
    else:
        crosses = [np.cross(a[i], a[j])
                   for i in range(3) for j in range(i + 1, 3)]
        v = max(crosses, key=lambda c: float(np.linalg.norm(c)))
    norm = float(np.linalg.norm(v))
    if norm == 0:
        raise ValueError("degenerate eigenvector (repeated eigenvalue?)")
    return v / norm


# ---------------------------------------------------------------------------
# KNN imputation oracle
# ---------------------------------------------------------------------------

def knn_impute_oracle(columns: dict[str, list], target: str, k: int,
                      ) -> dict[int, float]:
    """Brute-force KNN imputation over a dict of numeric columns (None =
    missing).  Returns {row: imputed value} for the target's missing rows."""
    feats = {name: vals for name, vals in columns.items() if name != target}
    tvals = columns[target]
    n = len(tvals)

    std = {}
    for name, vals in feats.items():
        present = [v for v in vals if v is not None]
        if not present:
            std[name] = [None] * n
            continue
        m = mean(present)
        s = math.sqrt(sum((v - m) ** 2 for v in present) / len(present))
        std[name] = [None if v is None else
                     ((v - m) / s if s > 0 else 0.0) for v in vals]

    col_mean = mean([v for v in tvals if v is not None])
    out = {}
    total = len(feats)
    for i, tv in enumerate(tvals):
        if tv is not None:
            continue
        cands = []
        for j in range(n):
            if tvals[j] is None:
                continue
            sq, used = 0.0, 0
            for name in feats:
                vi, vj = std[name][i], std[name][j]
                if vi is not None and vj is not None:
                    sq += (vi - vj) ** 2
                    used += 1
            if used == 0:
                continue
            cands.append((math.sqrt(sq * total / used), j))
        if not cands:
            out[i] = col_mean
            continue
        cands.sort()
        chosen = cands[:k]
        out[i] = mean([tvals[j] for _, j in chosen])
    return out


# ---------------------------------------------------------------------------
# Misc direct evaluations
# ---------------------------------------------------------------------------

def zscores_oracle(xs) -> list[float]:
    mu = mean(xs)
    sigma = math.sqrt(sum((x - mu) ** 2 for x in xs) / len(xs))
    return [(x - mu) / sigma for x in xs]


def quantile_oracle(xs, q) -> float:
    s = sorted(xs)
    pos = (len(s) - 1) * q
    lo, hi = math.floor(pos), math.ceil(pos)
    return s[lo] + (s[hi] - s[lo]) * (pos - lo)


def trapezoid(ys, xs) -> float:
    return sum((ys[i] + ys[i + 1]) / 2 * (xs[i + 1] - xs[i])
               for i in range(len(xs) - 1))
