import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_matrix
from ionet.concordance import (
    ConcordanceTable,
    SectorFilter,
    apply_filter,
    default_filters,
    default_table,
    load_filters,
    map_sic,
    split_raw_clean,
)
from ionet.errors import EmptyResult
from ionet.ingest import TransactionRecord


def test_longest_prefix_wins():
    table = ConcordanceTable({"494": "H49", "49": "H49B"}, ("H49", "H49B"))
    assert map_sic(table, "49410") == "H49"
    assert map_sic(table, "49100") == "H49B"
    assert map_sic(table, "50000") is None


def test_unclassified_and_dormant_codes_unmatched():
    t = default_table()
    assert t.map("0") is None
    assert t.map("74990") is None
    assert t.map("99999") is None
    assert t.map("74100") == "M74"


def test_default_table_has_104_classes_with_merge():
    t = default_table()
    assert len(t.cpa_universe) == 104
    # the former stand-alone class for division 25.4 folds into the residual
    assert t.map("25400") == "C25OTHER"
    assert t.map("30110") == "C301"
    assert t.map("30200") == "C30OTHER"


@given(st.text(alphabet="0123456789", min_size=2, max_size=5), st.data())
def test_longest_prefix_property(p2, data):
    # p1 is a proper prefix of p2; any code extending p2 resolves to p2's target
    p1 = data.draw(st.integers(2, len(p2) - 1).map(lambda k: p2[:k])) if len(p2) > 2 else None
    entries = {p2: "LONG"}
    universe = ["LONG"]
    if p1:
        entries[p1] = "SHORT"
        universe.append("SHORT")
    table = ConcordanceTable(entries, tuple(universe))
    code = (p2 + "00000")[:5]
    assert table.map(code) == "LONG"


def _rec(payer, payee, pence=100, count=1, period="2022-01"):
    return TransactionRecord(period, payer, payee, pence, count)


def test_split_raw_clean_partitions_and_conserves():
    table = default_table()
    records = [
        _rec("49410", "10910", 150),
        _rec("0", "10910", 33),
        _rec("49410", "99999", 44),
    ]
    clean, residual = split_raw_clean(records, table)
    assert len(clean) == 1 and len(residual) == 2
    assert clean[0].payer == "H493H495" and clean[0].payee == "C109"
    total = sum(r.value_pence for r in records)
    assert sum(r.value_pence for r in clean) + sum(r.value_pence for r in residual) == total


def test_split_keep_codes_mode():
    clean, _ = split_raw_clean([_rec("49410", "10910")], default_table(), relabel=False)
    assert clean[0].payer == "49410"


def test_split_empty():
    assert split_raw_clean([], default_table()) == ([], [])


def test_apply_filter_removes_rows_and_columns():
    m = random_matrix(5, 3, density=1.0, labels=("G45X", "K64X", "C10X"))
    out = apply_filter(m, default_filters()["intermediaries"])
    assert out.labels == ("C10X",)
    assert out.cells.shape == (1, 1)


def test_apply_filter_identity_when_no_match():
    m = random_matrix(6, 3, labels=("C10", "C11", "C12"))
    out = apply_filter(m, SectorFilter("noop", ("Z99",)))
    assert out.labels == m.labels
    assert (out.cells == m.cells).all()


def test_apply_filter_empty_result():
    m = random_matrix(7, 2, labels=("G45", "G46"))
    with pytest.raises(EmptyResult):
        apply_filter(m, default_filters()["intermediaries"])


def test_services_filter_matches_bruteforce_range_membership():
    universe = default_table().cpa_universe
    services = default_filters()["services"]
    flagged = {c for c in universe if services.matches(c)}
    expected = {
        c for c in universe
        if "G45" <= c <= "Q88" or "S94" <= c <= "U99"
    }
    assert flagged == expected
    assert "G45" in flagged and "Q87Q88" in flagged and "T97T98" in flagged
    assert "C109" not in flagged and "F41F43" not in flagged


def test_services_filter_on_5digit_labels():
    services = default_filters()["services"]
    assert services.matches("45111") and services.matches("84110")
    assert services.matches("96090") and not services.matches("35140")
    assert not services.matches("10910") and not services.matches("43999")


def test_intermediaries_filter_on_5digit_labels():
    f = default_filters()["intermediaries"]
    assert f.matches("45111") and f.matches("64999") and f.matches("84110")
    assert not f.matches("47110") and not f.matches("61900")
    g4 = default_filters()["intermediaries-g4"]
    assert g4.matches("G47")  # whole G section at CPA level
    assert not f.matches("G47")


def test_load_filters(write_csv):
    p = write_csv("f.csv", "myfilter,G45;K64\n")
    filters = load_filters(p)
    assert filters["myfilter"].excluded_prefixes == ("G45", "K64")


def test_split_totals_random(write_csv):
    rng = np.random.Generator(np.random.Philox(key=3))
    codes = ["49410", "10910", "0", "74990", "84110"]
    records = [
        _rec(codes[rng.integers(5)], codes[rng.integers(5)], int(rng.integers(1, 10**6)))
        for _ in range(200)
    ]
    clean, residual = split_raw_clean(records, default_table())
    assert len(clean) + len(residual) == len(records)
    assert sum(r.value_pence for r in clean) + sum(
        r.value_pence for r in residual
    ) == sum(r.value_pence for r in records)
