import pytest
from hypothesis import given
from hypothesis import strategies as st

from ionet.errors import (
    BadNumber,
    BadPeriod,
    DuplicatePeriod,
    LabelMismatch,
    MalformedRow,
    NegativeEntry,
    NegativeValue,
    NotSquare,
    ValueZeroCountPositive,
)
from ionet.ingest import (
    parse_external_iot,
    parse_ledger,
    parse_macro_series,
    write_ledger,
)

HEADER = "period,payer_sic,payee_sic,value_gbp,count\n"


def test_parse_ledger_basic(write_csv):
    p = write_csv("l.csv", HEADER + "2022-03,49410,10910,1500.00,3\n")
    (r,) = parse_ledger(p)
    assert (r.period, r.payer, r.payee) == ("2022-03", "49410", "10910")
    assert r.value_pence == 150000
    assert r.value_gbp == 1500.0
    assert r.count == 3


def test_sdc_suppressed_count_is_legal(write_csv):
    p = write_csv("l.csv", HEADER + "2022-03,49410,10910,1500.00,0\n")
    (r,) = parse_ledger(p)
    assert r.count == 0 and r.value_pence > 0


def test_zero_value_positive_count_rejected(write_csv):
    p = write_csv("l.csv", HEADER + "2022-03,49410,10910,0.00,5\n")
    with pytest.raises(ValueZeroCountPositive) as exc:
        parse_ledger(p)
    assert exc.value.line == 2


def test_located_errors(write_csv):
    cases = [
        ("2022-03,49410,10910,-4.00,1\n", NegativeValue),
        ("2022-13,49410,10910,4.00,1\n", BadPeriod),
        ("2022,49410,10910,4.00,1\n", BadPeriod),
        ("2022-03,abc,10910,4.00,1\n", MalformedRow),
        ("2022-03,494101,10910,4.00,1\n", MalformedRow),
        ("2022-03,49410,10910,4.005,1\n", MalformedRow),
        ("2022-03,49410,10910,4.00\n", MalformedRow),
        ("2022-03,49410,10910,4.00,x\n", MalformedRow),
    ]
    for row, err in cases:
        with pytest.raises(err) as exc:
            parse_ledger(write_csv("bad.csv", HEADER + "2022-01,1,2,1.00,1\n" + row))
        assert exc.value.line == 3


def test_bad_header(write_csv):
    with pytest.raises(MalformedRow):
        parse_ledger(write_csv("l.csv", "a,b,c,d,e\n"))


def test_unknown_sector_codes_pass_through(write_csv):
    p = write_csv("l.csv", HEADER + "2022-03,0,99999,1.00,1\n")
    (r,) = parse_ledger(p)
    assert r.payer == "0" and r.payee == "99999"


def test_round_trip(write_csv, tmp_path):
    text = HEADER + "2022-03,49410,10910,1500.00,3\n2022-04,0,10910,0.07,0\n"
    src = write_csv("l.csv", text)
    out = tmp_path / "copy.csv"
    write_ledger(parse_ledger(src), out)
    assert out.read_text(encoding="utf-8").replace("\r\n", "\n") == text


@given(
    st.lists(
        st.tuples(
            st.integers(2017, 2024),
            st.integers(1, 12),
            st.integers(0, 99999),
            st.integers(0, 99999),
            st.integers(1, 10**9),
            st.integers(0, 10**6),
        ),
        max_size=30,
    )
)
def test_round_trip_property(tmp_path_factory, rows):
    tmp = tmp_path_factory.mktemp("ledger")
    lines = [HEADER.strip()]
    for y, m, payer, payee, pence, count in rows:
        lines.append(f"{y:04d}-{m:02d},{payer % 99999 + 1},{payee % 99999 + 1},"
                     f"{pence / 100:.2f},{count}")
    src = tmp / "l.csv"
    src.write_text("\n".join(lines) + "\n", encoding="utf-8")
    records = parse_ledger(src)
    out = tmp / "o.csv"
    write_ledger(records, out)
    assert parse_ledger(out) == records


def test_macro_series_grouping_and_sorting(write_csv):
    p = write_csv(
        "m.csv",
        "series,period,value\nM1,2017-02,5\nM1,2017-01,4\nCPI,2017,99\n",
    )
    series = parse_macro_series(p)
    assert [s.name for s in series] == ["M1", "CPI"]
    assert series[0].observations == (("2017-01", 4.0), ("2017-02", 5.0))
    assert series[0].frequency == "monthly"
    assert series[1].frequency == "annual"


def test_macro_duplicate_period(write_csv):
    p = write_csv("m.csv", "series,period,value\nM1,2017-01,4\nM1,2017-01,5\n")
    with pytest.raises(DuplicatePeriod):
        parse_macro_series(p)


def test_macro_bad_number_and_mixed_frequency(write_csv):
    with pytest.raises(BadNumber):
        parse_macro_series(write_csv("m.csv", "series,period,value\nM1,2017-01,x\n"))
    with pytest.raises(BadPeriod):
        parse_macro_series(
            write_csv("m2.csv", "series,period,value\nM1,2017-01,1\nM1,2018,2\n")
        )


IOT_3X3 = ",A,B,C\nA,1,2,3\nB,0,4,5\nC,6,0,7\n"


def test_external_iot_parse(write_csv):
    ext = parse_external_iot(write_csv("t.csv", IOT_3X3), "SUT", 2022)
    assert ext.labels == ("A", "B", "C")
    assert ext.matrix[2, 0] == 6 and ext.kind == "SUT" and ext.year == 2022


def test_external_iot_permuted_columns_canonicalised(write_csv):
    permuted = ",B,C,A\nA,2,3,1\nB,4,5,0\nC,0,7,6\n"
    direct = parse_external_iot(write_csv("a.csv", IOT_3X3), "IxI", 2022)
    reordered = parse_external_iot(write_csv("b.csv", permuted), "IxI", 2022)
    assert (direct.matrix == reordered.matrix).all()
    assert direct.labels == reordered.labels


def test_external_iot_errors(write_csv):
    with pytest.raises(LabelMismatch):
        parse_external_iot(write_csv("x.csv", ",A,C\nA,1,2\nB,3,4\n"), "SUT", 2022)
    with pytest.raises(NotSquare):
        parse_external_iot(write_csv("y.csv", ",A,B\nA,1,2\n"), "SUT", 2022)
    with pytest.raises(NegativeEntry):
        parse_external_iot(write_csv("z.csv", ",A,B\nA,1,-2\nB,3,4\n"), "SUT", 2022)
