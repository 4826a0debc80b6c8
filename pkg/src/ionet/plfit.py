"""Continuous power-law tail fitting: MLE exponent, KS-optimal cutoff,
semi-parametric bootstrap p-value.

The cutoff scan evaluates every distinct sample value whose tail holds at
least `min_tail` points and keeps the KS-minimising one (ties go to the
smallest cutoff). The scan is exact but pruned: a candidate is skipped only
when a cheap lower bound on its KS distance (the same deviations evaluated on
a subsample of tail points) already exceeds the best distance seen, and a
partial scan aborts as soon as its running maximum does. Bootstrap replicates
draw from counter-based streams keyed by (seed, replicate index), so serial
and parallel runs agree bit for bit.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from .errors import DegenerateTail, TooFewSamples

DEFAULT_MIN_TAIL = 10


@dataclass(frozen=True)
class PowerLawFit:
    gamma: float
    xmin: float
    loglik: float
    ks_stat: float
    n_tail: int
    p_value: float | None = None
    bootstrap_reps: int = 0
    seed: int | None = None


def mle_gamma(x, xmin: float) -> tuple[float, float]:
    """Closed-form MLE of the tail exponent and its log-likelihood.

    gamma = 1 + m / sum(log(x_i / xmin)) over the m samples at or above xmin.
    """
    if xmin <= 0:
        raise ValueError("xmin must be positive")
    x = np.asarray(x, dtype=float)
    tail = x[x >= xmin]
    m = tail.size
    if m < 2:
        raise TooFewSamples(f"tail has {m} samples, need at least 2")
    log_ratios = np.log(tail / xmin)
    s = float(log_ratios.sum())
    if s <= 0.0:
        raise DegenerateTail("all tail samples equal xmin")
    gamma = 1.0 + m / s
    loglik = m * np.log(gamma - 1.0) - m * np.log(xmin) - gamma * s
    return gamma, float(loglik)


def ks_distance(x, gamma: float, xmin: float) -> float:
    """Sup distance between the tail's empirical CDF and the fitted CDF.

    The empirical CDF is evaluated with both its left and right limits at
    every sample point.
    """
    x = np.asarray(x, dtype=float)
    tail = np.sort(x[x >= xmin])
    m = tail.size
    if m == 0:
        raise TooFewSamples("empty tail")
    points = np.unique(tail)
    fitted = 1.0 - (points / xmin) ** (1.0 - gamma)
    right = np.searchsorted(tail, points, side="right") / m
    left = np.searchsorted(tail, points, side="left") / m
    return float(
        max(np.abs(right - fitted).max(), np.abs(left - fitted).max())
    )


@njit(cache=True)
def _ks_scan(xs, logs, min_tail, coarse):  # pragma: no cover - jitted
    n = xs.shape[0]
    n_cand = n - min_tail + 1
    suffix = np.zeros(n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + logs[i]

    best_ks = np.inf
    best_i = -1
    for phase in range(2):
        idxs = coarse if phase == 0 else np.arange(n_cand)
        for t in range(idxs.shape[0]):
            i = idxs[t]
            if i >= n_cand:
                continue
            if i > 0 and xs[i] == xs[i - 1]:
                continue  # same cutoff as its first occurrence
            m = n - i
            s = suffix[i] - m * logs[i]
            if s <= 0.0:
                continue
            gamma = 1.0 + m / s
            c = 1.0 - gamma
            inv_m = 1.0 / m
            li = logs[i]
            if phase == 1:
                # lower bound from a strided subsample of the tail
                stride = m // 24
                if stride < 1:
                    stride = 1
                probe = 0.0
                j = i
                while j < n:
                    f = 1.0 - np.exp(c * (logs[j] - li))
                    d1 = (j - i + 1) * inv_m - f
                    if d1 < 0.0:
                        d1 = -d1
                    d2 = (j - i) * inv_m - f
                    if d2 < 0.0:
                        d2 = -d2
                    if d1 > probe:
                        probe = d1
                    if d2 > probe:
                        probe = d2
                    j += stride
                if probe > best_ks:
                    continue
            d = 0.0
            for j in range(i, n):
                f = 1.0 - np.exp(c * (logs[j] - li))
                d1 = (j - i + 1) * inv_m - f
                if d1 < 0.0:
                    d1 = -d1
                d2 = (j - i) * inv_m - f
                if d2 < 0.0:
                    d2 = -d2
                if d1 > d:
                    d = d1
                if d2 > d:
                    d = d2
                if d > best_ks:
                    break
            if d < best_ks:
                best_ks = d
                best_i = i
            elif d == best_ks and best_i >= 0 and xs[i] < xs[best_i]:
                best_i = i
    return best_i


def _fit_core(x, min_tail: int) -> tuple[float, float, float, float, int]:
    """(xmin, gamma, loglik, ks, n_tail) for the KS-optimal cutoff."""
    x = np.asarray(x, dtype=float)
    xs = np.sort(x[x > 0])
    if xs.size < min_tail:
        raise TooFewSamples(f"{xs.size} positive samples, need {min_tail}")
    if xs[0] == xs[-1]:
        raise DegenerateTail("all samples equal")
    logs = np.log(xs)
    n_cand = xs.size - min_tail + 1
    coarse = np.unique(
        np.exp(np.linspace(0.0, np.log(n_cand), 48)).astype(np.int64) - 1
    )
    best_i = _ks_scan(xs, logs, min_tail, coarse)
    if best_i < 0:
        raise DegenerateTail("no cutoff leaves a non-degenerate tail")
    xmin = float(xs[best_i])
    gamma, loglik = mle_gamma(xs, xmin)
    ks = ks_distance(xs, gamma, xmin)
    return xmin, gamma, loglik, ks, xs.size - best_i


def fit_xmin(x, min_tail: int = DEFAULT_MIN_TAIL) -> PowerLawFit:
    """Scan distinct cutoff candidates and return the KS-optimal fit."""
    xmin, gamma, loglik, ks, n_tail = _fit_core(x, min_tail)
    return PowerLawFit(gamma=gamma, xmin=xmin, loglik=loglik, ks_stat=ks, n_tail=n_tail)


def pareto_sample(rng: np.random.Generator, size: int, gamma: float, xmin: float):
    """Inverse-CDF draws from the continuous power law with exponent gamma."""
    return xmin * rng.random(size) ** (-1.0 / (gamma - 1.0))


def _replicate_stream(seed: int, rep: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, rep]))


def _replicate_ks(x_sorted, body, tail_frac, gamma, xmin, min_tail, seed, rep):
    rng = _replicate_stream(seed, rep)
    n = x_sorted.size
    k_tail = int(rng.binomial(n, tail_frac))
    synth = np.empty(n)
    synth[:k_tail] = pareto_sample(rng, k_tail, gamma, xmin)
    if n - k_tail > 0:
        synth[k_tail:] = rng.choice(body, size=n - k_tail, replace=True)
    try:
        return _fit_core(synth, min_tail)[3]
    except (TooFewSamples, DegenerateTail):
        return np.inf


def _bootstrap_chunk(args):
    x, body, tail_frac, gamma, xmin, min_tail, seed, reps = args
    return [
        _replicate_ks(x, body, tail_frac, gamma, xmin, min_tail, seed, rep)
        for rep in reps
    ]


def bootstrap_pvalue(
    x,
    fit: PowerLawFit,
    reps: int,
    seed: int,
    min_tail: int = DEFAULT_MIN_TAIL,
    jobs: int = 1,
) -> float:
    """Semi-parametric bootstrap p-value for the fitted tail.

    Each replicate mixes draws from the fitted tail law (with the observed
    tail probability) with resamples of the below-cutoff body, is refitted
    with the full cutoff scan, and contributes to p as the fraction of
    replicate KS distances at or above the observed one. Low p rejects the
    power-law hypothesis.
    """
    if reps < 100:
        raise ValueError("need at least 100 bootstrap replicates")
    x = np.asarray(x, dtype=float)
    xs = np.sort(x[x > 0])
    body = xs[xs < fit.xmin]
    tail_frac = (xs.size - body.size) / xs.size
    if jobs <= 1:
        ks_reps = _bootstrap_chunk(
            (xs, body, tail_frac, fit.gamma, fit.xmin, min_tail, seed, range(reps))
        )
    else:
        chunks = [
            (xs, body, tail_frac, fit.gamma, fit.xmin, min_tail, seed,
             range(lo, min(lo + -(-reps // jobs), reps)))
            for lo in range(0, reps, -(-reps // jobs))
        ]
        ks_reps = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_bootstrap_chunk, chunks):
                ks_reps.extend(part)
    worse = sum(1 for k in ks_reps if k >= fit.ks_stat)
    return worse / reps


def fit_power_law(
    x,
    reps: int,
    seed: int,
    min_tail: int = DEFAULT_MIN_TAIL,
    jobs: int = 1,
) -> PowerLawFit:
    """Cutoff scan plus bootstrap significance in one call."""
    fit = fit_xmin(x, min_tail)
    p = bootstrap_pvalue(x, fit, reps, seed, min_tail, jobs)
    return replace(fit, p_value=p, bootstrap_reps=reps, seed=seed)
