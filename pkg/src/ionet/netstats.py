"""Aggregate statistics of weighted directed sector networks.

Conventions (chosen to reconcile every column of the published 2022 summary
table, see tests):

* E counts positive cells including self-loops; W is the total weight.
* density = E / n_active**2 where n_active is the number of sectors with at
  least one incident edge; per-sector averages divide by the full sector
  count instead.
* reciprocity, transitivity and assortativity ignore self-loops;
  transitivity is the global clustering of the binarised symmetrised graph;
  assortativity correlates (source out-degree, target in-degree) over
  directed edges.

Statistics that are undefined on a given graph (empty edge set, constant
degree sequences) are reported as NaN, never silently as zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .iot import FlowMatrix

CSV_FIELDS = (
    "density",
    "avg_degree",
    "avg_strength",
    "avg_weight",
    "reciprocity",
    "transitivity",
    "assortativity",
    "n_total",
    "n_active",
    "n_edges",
)


@dataclass(frozen=True)
class NetworkStatsReport:
    density: float
    avg_degree: float
    avg_strength: float
    avg_weight: float
    reciprocity: float
    transitivity: float
    assortativity: float
    n_total: int
    n_active: int
    n_edges: int

    def as_row(self) -> list:
        return [getattr(self, f) for f in CSV_FIELDS]


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    if x.size < 2:
        return float("nan")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt((xc * xc).sum() * (yc * yc).sum())
    if denom == 0:
        return float("nan")
    return float((xc * yc).sum() / denom)


def network_stats(m: FlowMatrix) -> NetworkStatsReport:
    cells = m.cells
    n = m.n
    adj = cells > 0
    n_edges = int(adj.sum())
    weight_total = float(cells.sum())

    incident = adj.any(axis=0) | adj.any(axis=1)
    n_active = int(incident.sum())

    density = n_edges / n_active**2 if n_active else 0.0
    avg_degree = n_edges / n if n else 0.0
    avg_strength = weight_total / n if n else 0.0
    avg_weight = weight_total / n_edges if n_edges else 0.0

    off = adj.copy()
    np.fill_diagonal(off, False)
    n_directed = int(off.sum())
    if n_directed:
        reciprocity = float((off & off.T).sum() / n_directed)
    else:
        reciprocity = float("nan")

    sym = (off | off.T).astype(float)
    deg = sym.sum(axis=1)
    triples = float((deg * (deg - 1)).sum())
    if triples > 0:
        closed = float(np.trace(sym @ sym @ sym))  # = 2 * 3 * triangles
        transitivity = closed / triples
    else:
        transitivity = float("nan")

    out_deg = off.sum(axis=1)
    in_deg = off.sum(axis=0)
    src, dst = np.nonzero(off)
    assortativity = _pearson(out_deg[src].astype(float), in_deg[dst].astype(float))

    return NetworkStatsReport(
        density=density,
        avg_degree=avg_degree,
        avg_strength=avg_strength,
        avg_weight=avg_weight,
        reciprocity=reciprocity,
        transitivity=transitivity,
        assortativity=assortativity,
        n_total=n,
        n_active=n_active,
        n_edges=n_edges,
    )


def derive_edge_stats(
    avg_strength: float, avg_weight: float, n_total: int, n_active: int
) -> tuple[float, float, float]:
    """Back out (n_edges, avg_degree, density) from the two weight averages.

    Uses the identities W = avg_strength * n_total, E = W / avg_weight,
    avg_degree = E / n_total, density = E / n_active**2. Handy for checking
    published summary tables that print the averages but not E.
    """
    total_weight = avg_strength * n_total
    n_edges = total_weight / avg_weight
    return n_edges, n_edges / n_total, n_edges / n_active**2
