"""Shortest-path distances on truncated networks and growth correlations of
industry pairs stratified by distance.

Distances come from the annual network (truncated by input share, binarised,
by default symmetrised so a pair counts as connected regardless of payment
direction); growth series come from monthly totals. A hop count of 1 is a
direct link; unreachable pairs carry -1.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientOverlap
from .iot import FlowMatrix, truncate
from .periods import Window
from .series import TimeSeries, _make_series, correlate, yoy_growth

UNREACHABLE = -1


@dataclass(frozen=True)
class DistanceMatrix:
    labels: tuple[str, ...]
    hops: np.ndarray  # int, -1 for unreachable, 0 on the diagonal
    threshold: float
    symmetrized: bool
    direction: str


def shortest_paths(
    m: FlowMatrix,
    threshold: float,
    symmetrize: bool = True,
    direction: str = "input",
) -> DistanceMatrix:
    """BFS hop counts between all sector pairs after share truncation."""
    adj = truncate(m, threshold, direction).cells > 0
    np.fill_diagonal(adj, False)
    if symmetrize:
        adj = adj | adj.T
    n = m.n
    neighbours = [np.nonzero(adj[i])[0] for i in range(n)]
    hops = np.full((n, n), UNREACHABLE, dtype=np.int64)
    for src in range(n):
        hops[src, src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in neighbours[u]:
                if hops[src, v] == UNREACHABLE:
                    hops[src, v] = hops[src, u] + 1
                    queue.append(v)
    return DistanceMatrix(m.labels, hops, threshold, symmetrize, direction)


@dataclass(frozen=True)
class DistanceBin:
    distance: int
    mean_corr: float
    n_pairs: int
    n_undefined: int


def _sector_growth_series(
    monthly: list[FlowMatrix], labels: tuple[str, ...], side: str
) -> dict[str, TimeSeries]:
    axis = 0 if side == "input" else 1
    out = {}
    for i, lab in enumerate(labels):
        pairs = []
        for m in monthly:
            pos = m.labels.index(lab) if lab in m.labels else None
            if pos is not None:
                pairs.append((m.period, float(m.cells.sum(axis=axis)[pos])))
        out[lab] = yoy_growth(_make_series("monthly", pairs))
    return out


def growth_corr_by_distance(
    monthly: list[FlowMatrix],
    distances: DistanceMatrix,
    side: str = "input",
    method: str = "spearman",
    window: Window | None = None,
    pooled: bool = False,
) -> list[DistanceBin]:
    """Mean pairwise growth correlation for every finite hop distance.

    Each sector's monthly input (or output) totals become a year-on-year
    growth series; every unordered pair at distance d >= 1 contributes one
    coefficient. Pairs whose correlation is undefined are counted separately
    and excluded from the mean. With `pooled`, all pairs at a distance are
    stacked into a single correlation instead of averaging coefficients.
    """
    if side not in ("input", "output"):
        raise ValueError(f"side must be input or output, got {side!r}")
    growth = _sector_growth_series(monthly, distances.labels, side)
    per_d_vals: dict[int, list[float]] = {}
    per_d_pooled: dict[int, tuple[list[float], list[float]]] = {}
    per_d_undef: dict[int, int] = {}
    n = len(distances.labels)
    for i in range(n):
        for j in range(i + 1, n):
            d = int(distances.hops[i, j])
            if d < 1:
                continue
            a = growth[distances.labels[i]]
            b = growth[distances.labels[j]]
            per_d_undef.setdefault(d, 0)
            try:
                c = correlate(a, b, method, window)
            except InsufficientOverlap:
                per_d_undef[d] += 1
                continue
            if np.isnan(c):
                per_d_undef[d] += 1
                continue
            per_d_vals.setdefault(d, []).append(c)
            if pooled:
                bd = b.as_dict()
                xs, ys = per_d_pooled.setdefault(d, ([], []))
                for p, va in a.observations:
                    if p in bd and (window is None or window.contains(p)):
                        xs.append(va)
                        ys.append(bd[p])
    bins = []
    for d in sorted(set(per_d_vals) | set(per_d_undef)):
        vals = per_d_vals.get(d, [])
        if pooled and d in per_d_pooled:
            xs, ys = per_d_pooled[d]
            mean = correlate(np.array(xs), np.array(ys), method)
        else:
            mean = float(np.mean(vals)) if vals else float("nan")
        bins.append(DistanceBin(d, mean, len(vals), per_d_undef.get(d, 0)))
    return bins
