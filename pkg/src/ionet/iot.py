"""Sector-by-sector flow matrices: construction, shares, truncation.

Orientation: cells[i][j] is the flow of goods/services from supplier i to
buyer j, i.e. money paid by j to i. Row sums are sector outputs, column sums
sector inputs. Ledger-built value matrices hold integer pence (as float64)
so that aggregating months into years is exact.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import NegativeDenominator, NegativeEntry, NotSquare
from .periods import sort_key, year_of

WEIGHT_KINDS = ("value", "count")
SHARE_KINDS = ("input-share", "output-share")


@dataclass(frozen=True)
class FlowMatrix:
    labels: tuple[str, ...]
    cells: np.ndarray
    kind: str
    period: str
    source_kind: str | None = None

    def __post_init__(self):
        if self.cells.ndim != 2 or self.cells.shape[0] != self.cells.shape[1]:
            raise NotSquare(f"cells have shape {self.cells.shape}")
        if len(self.labels) != self.cells.shape[0]:
            raise NotSquare("label count does not match matrix size")
        if len(set(self.labels)) != len(self.labels):
            raise NegativeEntry("duplicate sector labels")
        if (self.cells < 0).any():
            raise NegativeEntry("negative cell")
        self.cells.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def reindexed(self, labels: tuple[str, ...]) -> "FlowMatrix":
        """Submatrix on `labels` (must all be present), in the given order."""
        pos = {lab: i for i, lab in enumerate(self.labels)}
        idx = np.array([pos[lab] for lab in labels], dtype=int)
        return replace(self, labels=tuple(labels), cells=self.cells[np.ix_(idx, idx)].copy())


def build_matrices(
    records,
    table=None,
    granularity: str = "cpa",
    period_agg: str = "annual",
    weight: str = "value",
) -> list[FlowMatrix]:
    """Aggregate ledger records into one flow matrix per period.

    granularity "cpa" maps each end through `table` (records whose ends are
    already universe codes pass through; records with an unmappable end are
    ignored, so split raw/clean upstream if the residual matters).
    granularity "sic5" keeps codes as given; the universe is the set of codes
    observed anywhere in the ledger.
    """
    if weight not in WEIGHT_KINDS:
        raise ValueError(f"weight must be one of {WEIGHT_KINDS}")
    if granularity == "cpa":
        if table is None:
            raise ValueError("cpa granularity requires a concordance table")
        universe = tuple(table.cpa_universe)
        in_universe = set(universe)

        def resolve(code):
            return code if code in in_universe else table.map(code)

    elif granularity == "sic5":
        seen = sorted({r.payer for r in records} | {r.payee for r in records})
        universe = tuple(seen)

        def resolve(code):
            return code
    else:
        raise ValueError(f"unknown granularity {granularity!r}")

    pos = {lab: i for i, lab in enumerate(universe)}
    sums: dict[str, np.ndarray] = {}
    for r in records:
        supplier = resolve(r.payee)
        buyer = resolve(r.payer)
        if supplier is None or buyer is None:
            continue
        key = r.period if period_agg == "monthly" else year_of(r.period)
        if key not in sums:
            sums[key] = np.zeros((len(universe), len(universe)))
        w = r.value_pence if weight == "value" else r.count
        sums[key][pos[supplier], pos[buyer]] += w
    return [
        FlowMatrix(universe, sums[key], weight, key)
        for key in sorted(sums, key=sort_key)
    ]


def to_shares(
    m: FlowMatrix, direction: str = "input", denominators: np.ndarray | None = None
) -> FlowMatrix:
    """Normalise columns (input) or rows (output) to shares.

    With internal denominators every nonzero column (row) sums to one; zero
    columns (rows) stay zero rather than turning into NaNs. External
    denominators override the internal sums, e.g. to express flows as shares
    of totals measured elsewhere.
    """
    if direction not in ("input", "output"):
        raise ValueError(f"direction must be input or output, got {direction!r}")
    if denominators is None:
        denom = m.cells.sum(axis=0) if direction == "input" else m.cells.sum(axis=1)
    else:
        denom = np.asarray(denominators, dtype=float)
        if denom.shape != (m.n,):
            raise ValueError("denominator length does not match matrix size")
        if (denom < 0).any():
            raise NegativeDenominator("negative denominator")
    safe = np.where(denom > 0, denom, 1.0)
    if direction == "input":
        cells = np.where(denom > 0, m.cells / safe, 0.0)
    else:
        cells = np.where(denom[:, None] > 0, m.cells / safe[:, None], 0.0)
    source = m.kind if m.kind in WEIGHT_KINDS else m.source_kind
    return FlowMatrix(m.labels, cells, f"{direction}-share", m.period, source)


def truncate(m: FlowMatrix, threshold: float, direction: str = "input") -> FlowMatrix:
    """Zero out cells whose input (output) share is below `threshold`.

    Shares are always computed on the untruncated matrix, so a threshold sweep
    is not path-dependent; surviving cells keep their original weights.
    """
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must be in [0, 1]")
    shares = to_shares(m, direction).cells
    cells = np.where(shares < threshold, 0.0, m.cells)
    return replace(m, cells=cells)


def truncate_by_quantile(m: FlowMatrix, q: float) -> FlowMatrix:
    """Remove positive cells strictly below the q-quantile of positive cells.

    Quantile uses linear interpolation (type 7); ties at the threshold
    survive.
    """
    if not 0.0 <= q < 1.0:
        raise ValueError("q must be in [0, 1)")
    positive = m.cells[m.cells > 0]
    if positive.size == 0:
        return m
    thr = float(np.quantile(positive, q))
    cells = np.where((m.cells > 0) & (m.cells < thr), 0.0, m.cells)
    return replace(m, cells=cells)


def write_matrix_csv(m: FlowMatrix, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow([""] + list(m.labels))
        for lab, row in zip(m.labels, m.cells):
            writer.writerow([lab] + [repr(float(v)) for v in row])


def read_matrix_csv(
    path: str | Path, kind: str = "value", period: str = ""
) -> FlowMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    labels = tuple(c.strip() for c in rows[0][1:])
    n = len(labels)
    cells = np.zeros((n, n))
    if len(rows) - 1 != n:
        raise NotSquare(f"{len(rows) - 1} rows vs {n} columns")
    for i, row in enumerate(rows[1:]):
        if row[0].strip() != labels[i]:
            raise NotSquare("row labels do not match column labels in order")
        cells[i] = [float(v) for v in row[1:]]
    return FlowMatrix(labels, cells, kind, period)


def external_to_flow(ext) -> FlowMatrix:
    """View an official table as a value-weighted flow matrix (£ million)."""
    return FlowMatrix(ext.labels, ext.matrix.copy(), "value", str(ext.year))
