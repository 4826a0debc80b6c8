"""Katz-Bonacich influence vectors over input-share networks.

With S the input-share matrix (S[i][j] = share of supplier i in buyer j's
inputs) and labour share alpha in (0, 1), the influence vector solves

    v = (alpha / n) * 1 + (1 - alpha) * S v

by dense LU factorisation; column sums of S at most one bound the spectral
radius of (1 - alpha) * S below one, so the system is always invertible.
The solution is renormalised to sum to one so entries read as shares of
total influence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ColumnSumExceedsOne, NotShareMatrix
from .iot import SHARE_KINDS, FlowMatrix

COLSUM_TOL = 1e-9


@dataclass(frozen=True)
class InfluenceVector:
    labels: tuple[str, ...]
    values: np.ndarray
    alpha_l: float
    source_kind: str | None
    period: str

    def __post_init__(self):
        self.values.setflags(write=False)


def influence_vector(shares: FlowMatrix, alpha_l: float) -> InfluenceVector:
    if shares.kind != "input-share":
        raise NotShareMatrix(f"need an input-share matrix, got kind {shares.kind!r}")
    if not 0.0 < alpha_l < 1.0:
        raise ValueError("alpha_l must lie strictly between 0 and 1")
    colsums = shares.cells.sum(axis=0)
    worst = colsums.max(initial=0.0)
    if worst > 1.0 + COLSUM_TOL:
        raise ColumnSumExceedsOne(f"column sum {worst} exceeds 1")
    n = shares.n
    # Solve in canonical label order so that relabelling/permuting sectors
    # permutes the result bit for bit (LU pivoting is layout-dependent).
    order = np.argsort(np.array(shares.labels))
    cells = shares.cells[np.ix_(order, order)]
    system = np.eye(n) - (1.0 - alpha_l) * cells
    v_sorted = np.linalg.solve(system, np.full(n, alpha_l / n))
    v_sorted = v_sorted / v_sorted.sum()
    v = np.empty(n)
    v[order] = v_sorted
    return InfluenceVector(shares.labels, v, alpha_l, shares.source_kind, shares.period)


def top_k(
    v: InfluenceVector, k: int, descriptions: dict[str, str] | None = None
) -> list[tuple[str, float, str]]:
    """Top-k sectors by influence, ties broken by ascending sector code."""
    if k < 1:
        raise ValueError("k must be at least 1")
    ranked = sorted(zip(v.labels, v.values), key=lambda lv: (-lv[1], lv[0]))
    out = []
    for code, value in ranked[:k]:
        desc = descriptions.get(code, "") if descriptions else ""
        out.append((code, float(value), desc))
    return out


def format_ranking(rows: list[tuple[str, float, str]]) -> list[str]:
    """Display rows with values rounded to 4 decimals (presentation only)."""
    return [f"{code},{value:.4f},{desc}" for code, value, desc in rows]


def ccdf(values) -> tuple[np.ndarray, np.ndarray]:
    """Empirical P(X >= x) at each distinct x, ascending; starts at 1."""
    x = np.sort(np.asarray(values, dtype=float))
    if x.size == 0:
        raise ValueError("ccdf needs at least one value")
    distinct = np.unique(x)
    # count(x_i >= d) = N - (first index of d in the sorted sample)
    first = np.searchsorted(x, distinct, side="left")
    p = (x.size - first) / x.size
    return distinct, p
