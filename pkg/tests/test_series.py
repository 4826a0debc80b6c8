import math

import numpy as np
import pytest

from conftest import random_matrix, rng_for
from ionet.errors import InsufficientOverlap, MissingBase, ZeroBase
from ionet.ingest import TransactionRecord
from ionet.iot import FlowMatrix
from ionet.periods import Window, covid_window, month_range
from ionet.series import (
    TimeSeries,
    aggregate_ledger,
    average_value,
    benchmark_table,
    correlate,
    edge_correlation,
    index_to_base,
    node_correlation,
    yoy_growth,
)


def ts(frequency, pairs):
    return TimeSeries(frequency, tuple(pairs))


def _rec(period, pence, count=1):
    return TransactionRecord(period, "10000", "20000", pence, count)


def test_aggregate_sums_per_period():
    s = aggregate_ledger([_rec("2022-03", 1000), _rec("2022-03", 500)], "value")
    assert s.observations == (("2022-03", 1500.0),)


def test_aggregate_missing_months_absent():
    s = aggregate_ledger([_rec("2022-01", 10), _rec("2022-03", 10)], "count")
    assert s.periods == ("2022-01", "2022-03")


def test_annual_aggregate_equals_sum_of_monthlies():
    rng = rng_for(401)
    records = [
        _rec(f"2022-{rng.integers(1, 13):02d}", int(rng.integers(1, 10**10)))
        for _ in range(300)
    ]
    annual = aggregate_ledger(records, "value", "annual")
    monthly = aggregate_ledger(records, "value", "monthly")
    assert annual.get("2022") == math.fsum(v for _, v in monthly.observations)
    assert annual.get("2022") == sum(r.value_pence for r in records)


def test_average_value():
    avg = average_value(
        ts("annual", [("2022", 100.0), ("2023", 80.0)]),
        ts("annual", [("2022", 4.0), ("2023", 0.0)]),
    )
    assert avg.observations == (("2022", 25.0),)


def test_yoy_growth_monthly():
    s = ts("monthly", [("2017-03", 100.0), ("2018-03", 110.0), ("2019-03", 110.0)])
    g = yoy_growth(s)
    assert g.as_dict() == {"2018-03": pytest.approx(10.0), "2019-03": pytest.approx(0.0)}


def test_yoy_growth_skips_missing_or_zero_lag():
    s = ts("monthly", [("2017-03", 0.0), ("2018-03", 5.0), ("2018-04", 7.0)])
    assert yoy_growth(s).observations == ()


def test_yoy_growth_matches_direct_formula():
    rng = rng_for(402)
    pairs = [
        (f"{y}-{m:02d}", float(rng.integers(1, 1000)))
        for y in (2017, 2018, 2019)
        for m in range(1, 13)
    ]
    s = ts("monthly", pairs)
    g = yoy_growth(s).as_dict()
    d = s.as_dict()
    for (p, v) in pairs:
        prev = f"{int(p[:4]) - 1}{p[4:]}"
        if prev in d:
            assert g[p] == pytest.approx(100.0 * (v / d[prev] - 1.0), abs=1e-12)


def test_index_to_base():
    s = ts("monthly", [("2017-01", 50.0), ("2017-05", 75.0)])
    idx = index_to_base(s, "2017-01")
    assert idx.as_dict() == {"2017-01": 100.0, "2017-05": 150.0}
    doubled = ts("monthly", [(p, 2 * v) for p, v in s.observations])
    assert index_to_base(doubled, "2017-01").as_dict() == idx.as_dict()
    with pytest.raises(MissingBase):
        index_to_base(s, "2016-01")
    with pytest.raises(ZeroBase):
        index_to_base(ts("monthly", [("2017-01", 0.0)]), "2017-01")


def test_correlate_extremes():
    a = ts("monthly", [("2017-01", 1.0), ("2017-02", 2.0), ("2017-03", 5.0)])
    b = ts("monthly", [("2017-01", -1.0), ("2017-02", -2.0), ("2017-03", -5.0)])
    assert correlate(a, a) == pytest.approx(1.0)
    assert correlate(a, b) == pytest.approx(-1.0)
    assert correlate(a, a, "spearman") == pytest.approx(1.0)


def rank_oracle(x):
    # average ranks by explicit tie groups
    out = np.empty(len(x))
    for i, v in enumerate(x):
        less = sum(1 for u in x if u < v)
        eq = sum(1 for u in x if u == v)
        out[i] = less + (eq + 1) / 2
    return out


def test_correlate_matches_rank_product_moment_oracle():
    rng = rng_for(403)
    for _ in range(20):
        x = rng.integers(0, 10, 20).astype(float)  # ties likely
        y = rng.integers(0, 10, 20).astype(float)
        rx, ry = rank_oracle(x), rank_oracle(y)
        mx, my = rx.mean(), ry.mean()
        num = ((rx - mx) * (ry - my)).sum()
        den = math.sqrt(((rx - mx) ** 2).sum() * ((ry - my) ** 2).sum())
        if den == 0:
            continue
        assert correlate(x, y, "spearman") == pytest.approx(num / den, abs=1e-12)


def test_spearman_invariant_under_monotone_maps():
    rng = rng_for(404)
    x = rng.random(30)
    y = rng.random(30)
    base = correlate(x, y, "spearman")
    assert correlate(np.exp(5 * x), y, "spearman") == base
    assert correlate(x, y**3 + 2, "spearman") == base


def test_correlate_insufficient_overlap():
    a = ts("monthly", [("2017-01", 1.0), ("2017-02", 2.0)])
    with pytest.raises(InsufficientOverlap):
        correlate(a, a)


def test_covid_window_drops_34_months():
    full = month_range("2017-01", "2024-11")
    w = covid_window("monthly")
    kept = [p for p in full if w.contains(p)]
    assert len(full) - len(kept) == 34


def test_window_idempotent_and_order_independent():
    w1 = Window(exclude=(("2020-03", "2020-06"), ("2022-01", "2022-02")))
    w2 = Window(exclude=(("2022-01", "2022-02"), ("2020-03", "2020-06")))
    months = month_range("2019-01", "2023-12")
    kept1 = [p for p in months if w1.contains(p)]
    kept2 = [p for p in months if w2.contains(p)]
    assert kept1 == kept2
    again = [p for p in kept1 if w1.contains(p)]
    assert again == kept1


def test_edge_correlation_scaled_copy():
    m = random_matrix(405, 6)
    doubled = FlowMatrix(m.labels, 2.0 * m.cells, "value", m.period)
    assert edge_correlation(m, doubled, "raw") == pytest.approx(1.0, abs=1e-12)


def test_edge_correlation_matches_flat_vector_oracle():
    rng = rng_for(406)
    m = random_matrix(407, 5)
    shuffled = m.cells.copy()
    off = ~np.eye(5, dtype=bool)
    vals = shuffled[off]
    rng.shuffle(vals)
    shuffled[off] = vals
    other = FlowMatrix(m.labels, shuffled, "value", m.period)
    x, y = m.cells.ravel(), shuffled.ravel()
    mx, my = x.mean(), y.mean()
    expected = ((x - mx) * (y - my)).sum() / math.sqrt(
        ((x - mx) ** 2).sum() * ((y - my) ** 2).sum()
    )
    assert edge_correlation(m, other, "raw") == pytest.approx(expected, abs=1e-12)


def test_edge_correlation_log10_disjoint_support_errors():
    a = np.zeros((3, 3))
    a[0, 1] = 5.0
    b = np.zeros((3, 3))
    b[1, 2] = 5.0
    ma = FlowMatrix(("x", "y", "z"), a, "value", "2022")
    mb = FlowMatrix(("x", "y", "z"), b, "value", "2022")
    with pytest.raises(InsufficientOverlap):
        edge_correlation(ma, mb, "log10-positive")


def test_edge_correlation_share_transform_and_diagonal_flag():
    a = random_matrix(408, 6, density=0.9)
    b = random_matrix(409, 6, density=0.9)
    c_with = edge_correlation(a, b, "input-share", include_diagonal=True)
    c_without = edge_correlation(a, b, "input-share", include_diagonal=False)
    assert -1 <= c_with <= 1 and -1 <= c_without <= 1
    assert c_with != c_without


def test_node_correlation_identity_and_hand_case():
    m = random_matrix(410, 5)
    assert node_correlation(m, m, "input") == pytest.approx(1.0)
    cells_a = np.array([[0.0, 1.0, 2.0, 3.0]] * 4)
    cells_b = np.array([[0.0, 2.0, 4.0, 6.0]] * 4)
    ma = FlowMatrix(("a", "b", "c", "d"), cells_a, "value", "2022")
    mb = FlowMatrix(("a", "b", "c", "d"), cells_b, "value", "2022")
    # input totals (0,4,8,12) vs (0,8,16,24): perfectly linear
    assert node_correlation(ma, mb, "input") == pytest.approx(1.0)
    # output totals are constant (6 each) vs (12 each): undefined marker
    assert math.isnan(node_correlation(ma, mb, "output"))


def test_node_correlation_growth_degenerate_marker():
    m = random_matrix(411, 5)
    c = node_correlation((m, m), (m, m), "input", "growth-vs-prior-matrix")
    assert math.isnan(c)


def test_node_correlation_growth_mode():
    prior = random_matrix(412, 5, density=1.0)
    cur_a = FlowMatrix(prior.labels, prior.cells * 1.1, "value", "2022")
    growth_b = 1.0 + 0.1 * rng_for(413).random((5, 5))
    cur_b = FlowMatrix(prior.labels, prior.cells * growth_b, "value", "2022")
    c = node_correlation((prior, cur_a), (prior, cur_b), "input", "growth-vs-prior-matrix")
    assert -1 <= c <= 1 or math.isnan(c)


def test_benchmark_table_share_row_and_diagonal():
    pay_annual = ts("annual", [("2022", 2.8e12), ("2023", 3.131e12), ("2024", 3.4e12)])
    clean_annual = ts("annual", [("2022", 1.1e12), ("2023", 1.227e12), ("2024", 1.3e12)])
    table = benchmark_table(
        {"yearly_value": pay_annual},
        {"self": pay_annual, "clean": clean_annual},
        share_year="2023",
        share_row="yearly_value",
    )
    assert table.row_labels == ("share_2023", "yearly_value")
    share = dict(zip(table.col_labels, table.values[0]))
    assert share["clean"] == pytest.approx(3.131 / 1.227, abs=1e-3)  # ≈ 2.552
    corr_row = dict(zip(table.col_labels, table.values[1]))
    assert corr_row["self"] == pytest.approx(1.0)


def test_benchmark_table_mixed_frequency_gives_marker_not_abort():
    pay = ts("annual", [("2021", 1.0), ("2022", 2.0), ("2023", 3.0)])
    monthly = ts("monthly", [("2021-01", 1.0), ("2021-02", 2.0), ("2021-03", 3.0)])
    table = benchmark_table({"yearly_value": pay}, {"m": monthly})
    assert math.isnan(table.values[0][0])


def test_benchmark_table_csv_has_window_comment():
    pay = ts("annual", [("2021", 1.0), ("2022", 2.0), ("2023", 3.0)])
    t = benchmark_table({"r": pay}, {"c": pay}, window=covid_window("annual"))
    lines = t.to_csv_lines()
    assert lines[0].startswith("#window:")
    assert "exclude 2020:2022" in lines[0]
