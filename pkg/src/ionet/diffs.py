"""Edge-level difference metrics between two IOTs.

The proportional difference of a cell is max(a, b) / min(a, b), always >= 1
and symmetric; the scaled percentage difference is 100 * |a - b| / min(a, b).
By default cells that are zero on one side are dropped ("drop-one-sided");
the include mode keeps them, mapping proportional differences to a sentinel
and scaling percentage differences by a caller-supplied floor. Cells zero on
both sides never contribute.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NonPositiveSample, ScaleFloorRequired
from .iot import FlowMatrix
from .series import _common


def _aligned_cells(mA: FlowMatrix, mB: FlowMatrix) -> tuple[np.ndarray, np.ndarray]:
    a, b = _common(mA, mB)
    return a.cells.ravel(), b.cells.ravel()


def proportional_diff(
    mA: FlowMatrix,
    mB: FlowMatrix,
    zero_policy: str = "drop-one-sided",
    sentinel: float = math.inf,
) -> np.ndarray:
    a, b = _aligned_cells(mA, mB)
    both = (a > 0) & (b > 0)
    ratios = np.maximum(a[both], b[both]) / np.minimum(a[both], b[both])
    if zero_policy == "drop-one-sided":
        return ratios
    if zero_policy == "include":
        one_sided = ((a > 0) ^ (b > 0)).sum()
        return np.concatenate([ratios, np.full(one_sided, sentinel)])
    raise ValueError(f"unknown zero_policy {zero_policy!r}")


def scaled_pct_diff(
    mA: FlowMatrix,
    mB: FlowMatrix,
    zero_policy: str = "drop-one-sided",
    scale_floor: float | None = None,
) -> np.ndarray:
    a, b = _aligned_cells(mA, mB)
    both = (a > 0) & (b > 0)
    pct = 100.0 * np.abs(a[both] - b[both]) / np.minimum(a[both], b[both])
    if zero_policy == "drop-one-sided":
        return pct
    if zero_policy == "include":
        if scale_floor is None or scale_floor <= 0:
            raise ScaleFloorRequired("include mode needs a positive scale floor")
        one_sided = (a > 0) ^ (b > 0)
        extra = 100.0 * np.abs(a[one_sided] - b[one_sided]) / scale_floor
        return np.concatenate([pct, extra])
    raise ValueError(f"unknown zero_policy {zero_policy!r}")


def quantiles(xs, probs) -> np.ndarray:
    """Linear-interpolation (type 7) quantiles; prob 1.0 is the maximum."""
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise ValueError("quantiles of an empty sample")
    return np.quantile(xs, np.asarray(probs, dtype=float))


def log10_histogram(xs, bins: int) -> tuple[np.ndarray, np.ndarray]:
    """Counts over equal-width bins in log10 space spanning [min, max].

    Bins are right-closed (the first bin also includes its left edge), so the
    counts always sum to the sample size.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.size == 0:
        raise ValueError("histogram of an empty sample")
    if (xs <= 0).any():
        raise NonPositiveSample("log-scale histogram needs positive samples")
    logs = np.log10(xs)
    lo, hi = logs.min(), logs.max()
    if lo == hi:
        return np.array([lo, hi]), np.array([xs.size])
    edges = np.linspace(lo, hi, bins + 1)
    idx = np.searchsorted(edges, logs, side="left")
    idx = np.clip(idx, 1, bins)
    counts = np.bincount(idx - 1, minlength=bins)
    return edges, counts
