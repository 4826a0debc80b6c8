"""Time-series transforms and the correlation batteries.

Correlations that are undefined (constant inputs) come back as NaN markers
rather than raising, because benchmark tables have structurally missing
cells; too little overlap to correlate at all is an error.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientOverlap, MissingBase, ZeroBase
from .iot import FlowMatrix, to_shares
from .periods import Window, prev_year, sort_key, year_of

MIN_OVERLAP = 3


@dataclass(frozen=True)
class TimeSeries:
    frequency: str  # "monthly" or "annual"
    observations: tuple[tuple[str, float], ...]

    def __post_init__(self):
        keys = [sort_key(p) for p, _ in self.observations]
        if any(b <= a for a, b in zip(keys, keys[1:])):
            raise ValueError("periods must be strictly increasing")

    @property
    def periods(self) -> tuple[str, ...]:
        return tuple(p for p, _ in self.observations)

    def as_dict(self) -> dict[str, float]:
        return dict(self.observations)

    def get(self, period: str, default=None):
        return self.as_dict().get(period, default)


def _make_series(frequency: str, pairs) -> TimeSeries:
    return TimeSeries(frequency, tuple(sorted(pairs, key=lambda kv: sort_key(kv[0]))))


def aggregate_ledger(records, weight: str = "value", period_agg: str = "monthly") -> TimeSeries:
    """Per-period ledger totals; value series are in integer pence.

    Periods with no records are absent, not zero-filled.
    """
    sums: dict[str, int] = {}
    for r in records:
        key = r.period if period_agg == "monthly" else year_of(r.period)
        w = r.value_pence if weight == "value" else r.count
        sums[key] = sums.get(key, 0) + w
    return _make_series(period_agg, [(p, float(v)) for p, v in sums.items()])


def average_value(value_series: TimeSeries, count_series: TimeSeries) -> TimeSeries:
    """Elementwise value / count; periods with zero count are dropped."""
    counts = count_series.as_dict()
    pairs = [
        (p, v / counts[p])
        for p, v in value_series.observations
        if counts.get(p) not in (None, 0)
    ]
    return _make_series(value_series.frequency, pairs)


def yoy_growth(s: TimeSeries) -> TimeSeries:
    """Percentage growth against the same period one year earlier.

    Undefined where the lagged observation is missing or zero; those periods
    are simply absent from the result.
    """
    values = s.as_dict()
    pairs = []
    for p, v in s.observations:
        base = values.get(prev_year(p))
        if base is not None and base != 0:
            pairs.append((p, 100.0 * (v / base - 1.0)))
    return _make_series(s.frequency, pairs)


def index_to_base(s: TimeSeries, base: str) -> TimeSeries:
    ref = s.get(base)
    if ref is None:
        raise MissingBase(f"base period {base} not in series")
    if ref == 0:
        raise ZeroBase(f"zero value at base period {base}")
    return _make_series(s.frequency, [(p, v * 100.0 / ref) for p, v in s.observations])


def _avg_ranks(x: np.ndarray) -> np.ndarray:
    """Average ranks (1-based), ties receive the mean of their rank block."""
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(x.size)
    sx = x[order]
    i = 0
    while i < x.size:
        j = i
        while j + 1 < x.size and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i : j + 1]] = (i + j) / 2 + 1
        i = j + 1
    return ranks


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    denom = np.sqrt((xc * xc).sum() * (yc * yc).sum())
    if denom == 0:
        return float("nan")
    return float((xc * yc).sum() / denom)


def _paired(a, b, window: Window | None):
    if isinstance(a, TimeSeries) and isinstance(b, TimeSeries):
        bd = b.as_dict()
        pairs = [
            (va, bd[p])
            for p, va in a.observations
            if p in bd and (window is None or window.contains(p))
        ]
        x = np.array([u for u, _ in pairs], dtype=float)
        y = np.array([v for _, v in pairs], dtype=float)
    else:
        x = np.asarray(a, dtype=float)
        y = np.asarray(b, dtype=float)
        if x.shape != y.shape:
            raise InsufficientOverlap("vectors differ in length")
    keep = ~(np.isnan(x) | np.isnan(y))
    return x[keep], y[keep]


def correlate(a, b, method: str = "pearson", window: Window | None = None) -> float:
    """Pearson or Spearman correlation over the paired observations.

    Accepts period-indexed series (intersected on periods and filtered by the
    window) or plain equal-length vectors. NaN on constant inputs.
    """
    x, y = _paired(a, b, window)
    if x.size < MIN_OVERLAP:
        raise InsufficientOverlap(f"only {x.size} paired observations")
    if method == "spearman":
        x, y = _avg_ranks(x), _avg_ranks(y)
    elif method != "pearson":
        raise ValueError(f"unknown method {method!r}")
    return _pearson(x, y)


def _common(mA: FlowMatrix, mB: FlowMatrix) -> tuple[FlowMatrix, FlowMatrix]:
    if mA.labels == mB.labels:
        return mA, mB
    shared = tuple(lab for lab in mA.labels if lab in set(mB.labels))
    if not shared:
        raise InsufficientOverlap("no common sector labels")
    return mA.reindexed(shared), mB.reindexed(shared)


def edge_correlation(
    mA: FlowMatrix,
    mB: FlowMatrix,
    transform: str = "raw",
    include_diagonal: bool = True,
) -> float:
    """Pearson correlation of the two matrices cell by cell.

    "log10-positive" keeps only cells positive in both matrices; the share
    transforms renormalise each matrix before flattening.
    """
    a, b = _common(mA, mB)
    if transform in ("input-share", "output-share"):
        direction = transform.split("-")[0]
        a = to_shares(a, direction)
        b = to_shares(b, direction)
    x = a.cells.ravel()
    y = b.cells.ravel()
    mask = np.ones(x.size, dtype=bool)
    if not include_diagonal:
        mask &= ~np.eye(a.n, dtype=bool).ravel()
    if transform == "log10-positive":
        mask &= (x > 0) & (y > 0)
        x, y = np.log10(x[mask]), np.log10(y[mask])
    elif transform in ("raw", "input-share", "output-share"):
        x, y = x[mask], y[mask]
    else:
        raise ValueError(f"unknown transform {transform!r}")
    if x.size < MIN_OVERLAP:
        raise InsufficientOverlap(f"only {x.size} comparable cells")
    return _pearson(x, y)


def _node_totals(m: FlowMatrix, side: str) -> np.ndarray:
    if side == "input":
        return m.cells.sum(axis=0)
    if side == "output":
        return m.cells.sum(axis=1)
    raise ValueError(f"side must be input or output, got {side!r}")


def node_correlation(a, b, side: str = "input", transform: str = "levels") -> float:
    """Correlate sector-level input or output totals across two datasets.

    In "growth-vs-prior-matrix" mode each argument is a (prior, current) pair
    of matrices and per-sector percentage growth is correlated instead;
    sectors with a zero prior total drop out. Constant vectors give NaN.
    """
    if transform == "levels":
        ma, mb = _common(a, b)
        x = _node_totals(ma, side)
        y = _node_totals(mb, side)
    elif transform == "growth-vs-prior-matrix":
        (pa, ca), (pb, cb) = a, b
        pa, ca = _common(pa, ca)
        pb, cb = _common(pb, cb)
        ga = _growth_vector(pa, ca, side)
        gb = _growth_vector(pb, cb, side)
        shared = tuple(lab for lab in ga if lab in gb)
        x = np.array([ga[lab] for lab in shared])
        y = np.array([gb[lab] for lab in shared])
    else:
        raise ValueError(f"unknown transform {transform!r}")
    keep = ~(np.isnan(x) | np.isnan(y))
    x, y = x[keep], y[keep]
    if x.size < MIN_OVERLAP:
        raise InsufficientOverlap(f"only {x.size} comparable sectors")
    return _pearson(x, y)


def _growth_vector(prior: FlowMatrix, current: FlowMatrix, side: str) -> dict[str, float]:
    p = _node_totals(prior, side)
    c = _node_totals(current, side)
    return {
        lab: 100.0 * (c[i] / p[i] - 1.0)
        for i, lab in enumerate(prior.labels)
        if p[i] != 0
    }


@dataclass(frozen=True)
class CorrelationTable:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    values: np.ndarray  # NaN marks undefined cells
    method: str
    window_desc: str

    def to_csv_lines(self) -> list[str]:
        lines = [f"#window: {self.window_desc}", "," + ",".join(self.col_labels)]
        for lab, row in zip(self.row_labels, self.values):
            cells = ["" if np.isnan(v) else f"{v:.3f}" for v in row]
            lines.append(lab + "," + ",".join(cells))
        return lines


def benchmark_table(
    payment_rows: dict[str, TimeSeries],
    macro_cols: dict[str, TimeSeries],
    method: str = "pearson",
    window: Window | None = None,
    growth: bool = False,
    share_year: str | None = None,
    share_row: str | None = None,
) -> CorrelationTable:
    """Correlation grid of payment aggregates against benchmark series.

    Rows and columns correlate at the row's own frequency; a column series at
    a different frequency gives an undefined cell. With `share_year`, a
    leading ratio row divides the `share_row` payment total for that year by
    each annual column total. Cells never abort the table: anything
    uncomputable is NaN.
    """
    row_names = list(payment_rows)
    col_names = list(macro_cols)
    rows = []
    labels = []
    if share_year is not None:
        base_name = share_row or row_names[0]
        base = payment_rows[base_name].get(share_year)
        ratio_row = []
        for cname in col_names:
            ref = macro_cols[cname].get(share_year)
            ratio_row.append(base / ref if base is not None and ref else float("nan"))
        rows.append(ratio_row)
        labels.append(f"share_{share_year}")
    for rname in row_names:
        rs = payment_rows[rname]
        if growth:
            rs = yoy_growth(rs)
        row = []
        for cname in col_names:
            cs = macro_cols[cname]
            if cs.frequency != rs.frequency:
                row.append(float("nan"))
                continue
            if growth:
                cs = yoy_growth(cs)
            try:
                row.append(correlate(rs, cs, method, window))
            except InsufficientOverlap:
                row.append(float("nan"))
        rows.append(row)
        labels.append(rname)
    desc = window.describe() if window else "all periods"
    if growth:
        desc += "; yoy growth"
    return CorrelationTable(
        tuple(labels), tuple(col_names), np.array(rows, dtype=float), method, desc
    )
