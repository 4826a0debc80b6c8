"""Synthetic economies and brute-force oracles.

The generator is deterministic for a fixed seed: every random draw comes from
a counter-based stream keyed by (seed, month index), so ledgers are
byte-identical across runs and platforms. The oracles re-derive network
statistics and influence vectors by exhaustive enumeration / series expansion
and share no code with the modules they check.
"""

from __future__ import annotations

import math

import numpy as np

from .ingest import TransactionRecord
from .iot import FlowMatrix
from .netstats import NetworkStatsReport

SDC_COUNT_THRESHOLD = 50

# SIC 2007 divisions observed in UK data (gaps in the numbering are real).
_DIVISIONS = (
    list(range(1, 4)) + list(range(5, 10)) + list(range(10, 34)) + [35]
    + list(range(36, 40)) + list(range(41, 44)) + list(range(45, 48))
    + list(range(49, 54)) + [55, 56] + list(range(58, 67)) + list(range(68, 76))
    + list(range(77, 83)) + list(range(84, 89)) + list(range(90, 97))
)


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, index]))


def _sector_codes(rng: np.random.Generator, n: int) -> list[str]:
    pool = [f"{d:02d}{s:03d}" for d in _DIVISIONS for s in (110, 200, 410, 900, 990)]
    if n > len(pool):
        pool = [f"{d:02d}{s:03d}" for d in _DIVISIONS for s in range(100, 1000, 10)]
    picks = rng.choice(len(pool), size=n, replace=False)
    return [pool[i] for i in sorted(picks)]


def gen_economy(
    seed: int,
    n_sectors: int,
    months: int,
    size_distribution: tuple[str, float] | str = ("pareto", 1.4),
    link_density: float = 0.3,
    unclassified_share: float = 0.0,
    sdc: str = "off",
    start: str = "2017-01",
    value_scale: float = 1e6,
    avg_ticket_pence: int = 50_000,
) -> list[TransactionRecord]:
    """Generate a monthly inter-sector ledger.

    Sector sizes follow the requested distribution; a link (i pays j) appears
    each month with probability `link_density` and carries a value
    proportional to the product of the two sizes. With sdc="suppress",
    counts below 50 are emitted as zero with the value retained. A fraction
    of records get one end replaced by the unclassified code "0".
    """
    if n_sectors < 2 or months < 1:
        raise ValueError("need at least 2 sectors and 1 month")
    setup = _stream(seed, 2**62)
    codes = _sector_codes(setup, n_sectors)
    if size_distribution == "uniform":
        sizes = setup.random(n_sectors) + 0.05
    else:
        name, exponent = size_distribution
        if name != "pareto":
            raise ValueError(f"unknown size distribution {name!r}")
        sizes = setup.random(n_sectors) ** (-1.0 / (exponent - 1.0))
    sizes = sizes / sizes.mean()

    y0, m0 = int(start[:4]), int(start[5:7])
    records: list[TransactionRecord] = []
    for t in range(months):
        year, month = divmod(y0 * 12 + m0 - 1 + t, 12)
        period = f"{year:04d}-{month + 1:02d}"
        rng = _stream(seed, t)
        mask = rng.random((n_sectors, n_sectors)) < link_density
        payer_idx, payee_idx = np.nonzero(mask)
        n_links = payer_idx.size
        noise = np.exp(rng.normal(0.0, 0.5, n_links))
        raw = value_scale * sizes[payer_idx] * sizes[payee_idx] * noise
        values = np.maximum(1, np.rint(raw)).astype(np.int64)
        counts = 1 + rng.poisson(values / avg_ticket_pence)
        drop_end = rng.random(n_links) < unclassified_share
        payer_side = rng.random(n_links) < 0.5
        for k in range(n_links):
            payer = codes[payer_idx[k]]
            payee = codes[payee_idx[k]]
            if drop_end[k]:
                if payer_side[k]:
                    payer = "0"
                else:
                    payee = "0"
            count = int(counts[k])
            if sdc == "suppress-counts-below-50" and count < SDC_COUNT_THRESHOLD:
                count = 0
            records.append(TransactionRecord(period, payer, payee, int(values[k]), count))
    return records


def _rescale_ints(values: list[int], target: int) -> list[int]:
    """Scale nonnegative ints to sum exactly to target, keeping positives positive."""
    current = sum(values)
    if current == 0:
        raise ValueError("cannot rescale an all-zero ledger")
    scaled = [v * target // current for v in values]
    scaled = [max(1, s) if v > 0 else 0 for s, v in zip(scaled, values)]
    largest = max(range(len(values)), key=lambda i: values[i])
    scaled[largest] += target - sum(scaled)
    if scaled[largest] <= 0:
        raise ValueError("target too small to preserve positive entries")
    return scaled


def calibrate_ledger(
    records: list[TransactionRecord],
    target_value_pence: int | None = None,
    target_count: int | None = None,
) -> list[TransactionRecord]:
    """Rescale a ledger so aggregate value and count hit exact targets."""
    from dataclasses import replace

    out = list(records)
    if target_value_pence is not None:
        new_values = _rescale_ints([r.value_pence for r in out], target_value_pence)
        out = [replace(r, value_pence=v) for r, v in zip(out, new_values)]
    if target_count is not None:
        new_counts = _rescale_ints([r.count for r in out], target_count)
        out = [replace(r, count=c) for r, c in zip(out, new_counts)]
    return out


def _mean(xs) -> float:
    return math.fsum(xs) / len(xs)


def _pearson_listwise(xs, ys) -> float:
    if len(xs) < 2:
        return float("nan")
    mx, my = _mean(xs), _mean(ys)
    sxy = math.fsum((a - mx) * (b - my) for a, b in zip(xs, ys))
    sxx = math.fsum((a - mx) ** 2 for a in xs)
    syy = math.fsum((b - my) ** 2 for b in ys)
    if sxx == 0 or syy == 0:
        return float("nan")
    return sxy / math.sqrt(sxx * syy)


def oracle_network_stats(m: FlowMatrix) -> NetworkStatsReport:
    """Exhaustive pair/triple-loop re-derivation of the network statistics."""
    n = m.n
    if n > 64:
        raise ValueError("oracle is O(n^3); intended for n <= 64")
    cells = [[float(m.cells[i, j]) for j in range(n)] for i in range(n)]

    edges = [(i, j) for i in range(n) for j in range(n) if cells[i][j] > 0]
    n_edges = len(edges)
    total = math.fsum(cells[i][j] for i, j in edges)
    active = set()
    for i, j in edges:
        active.add(i)
        active.add(j)
    n_active = len(active)

    density = n_edges / n_active**2 if n_active else 0.0
    avg_degree = n_edges / n if n else 0.0
    avg_strength = total / n if n else 0.0
    avg_weight = total / n_edges if n_edges else 0.0

    directed = [(i, j) for i, j in edges if i != j]
    if directed:
        mutual = sum(1 for i, j in directed if cells[j][i] > 0)
        reciprocity = mutual / len(directed)
    else:
        reciprocity = float("nan")

    sym = [
        [i != j and (cells[i][j] > 0 or cells[j][i] > 0) for j in range(n)]
        for i in range(n)
    ]
    triples = closed = 0
    for i in range(n):
        for j in range(n):
            if j == i or not sym[i][j]:
                continue
            for k in range(n):
                if k == i or k == j or not sym[i][k]:
                    continue
                triples += 1
                if sym[j][k]:
                    closed += 1
    transitivity = closed / triples if triples else float("nan")

    out_deg = [sum(1 for j in range(n) if j != i and cells[i][j] > 0) for i in range(n)]
    in_deg = [sum(1 for i in range(n) if i != j and cells[i][j] > 0) for j in range(n)]
    xs = [float(out_deg[i]) for i, j in directed]
    ys = [float(in_deg[j]) for i, j in directed]
    assortativity = _pearson_listwise(xs, ys) if directed else float("nan")

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


def oracle_neumann_influence(shares: FlowMatrix, alpha_l: float, terms: int) -> np.ndarray:
    """Truncated series expansion of the influence solve, renormalised."""
    if terms < 1:
        raise ValueError("need at least one series term")
    n = shares.n
    term = np.full(n, alpha_l / n)
    acc = term.copy()
    for _ in range(terms - 1):
        term = (1.0 - alpha_l) * (shares.cells @ term)
        acc = acc + term
    return acc / acc.sum()
