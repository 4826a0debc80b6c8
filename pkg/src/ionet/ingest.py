"""Strict tabular ingestion for payment ledgers, macro series and official IOTs.

Money is held as integer pence so that aggregation over very large ledgers is
exact and order-independent. A row either becomes a record or raises a located
error; nothing is dropped silently.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

from .errors import (
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
from .periods import is_monthly, parse_period, sort_key

LEDGER_HEADER = ("period", "payer_sic", "payee_sic", "value_gbp", "count")
MACRO_HEADER = ("series", "period", "value")


@dataclass(frozen=True)
class TransactionRecord:
    """One monthly payer-sector -> payee-sector flow.

    `value_pence` > 0 with `count` == 0 is legal: counts below the disclosure
    threshold are published as zero while the value is retained.
    """

    period: str
    payer: str
    payee: str
    value_pence: int
    count: int

    @property
    def value_gbp(self) -> float:
        return self.value_pence / 100.0


@dataclass(frozen=True)
class MacroSeries:
    name: str
    observations: tuple[tuple[str, float], ...]

    @property
    def frequency(self) -> str:
        return "monthly" if is_monthly(self.observations[0][0]) else "annual"


@dataclass(frozen=True)
class ExternalIOT:
    """Official sector-by-sector table (suppliers on rows), values in £ million."""

    labels: tuple[str, ...]
    matrix: np.ndarray
    kind: str  # SUT, PxP or IxI
    year: int


def _parse_sector(code: str, line: int) -> str:
    code = code.strip()
    if not (1 <= len(code) <= 5 and code.isdigit()):
        raise MalformedRow(line, f"sector code {code!r} is not a 1-5 digit string")
    return code


def _parse_pence(s: str, line: int) -> int:
    try:
        d = Decimal(s.strip())
    except InvalidOperation:
        raise MalformedRow(line, f"bad money amount {s!r}") from None
    pence = d * 100
    if pence != pence.to_integral_value():
        raise MalformedRow(line, f"amount {s!r} has sub-penny precision")
    return int(pence)


def parse_ledger(path: str | Path) -> list[TransactionRecord]:
    """Parse a `period,payer_sic,payee_sic,value_gbp,count` CSV.

    Unknown sector codes are accepted; classification is a downstream concern.
    """
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != LEDGER_HEADER:
            raise MalformedRow(1, f"header must be {','.join(LEDGER_HEADER)}")
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise MalformedRow(line, f"expected 5 fields, got {len(row)}")
            period = row[0].strip()
            y_m = parse_period(period, line)
            if y_m[1] is None:
                raise BadPeriod(line, f"ledger periods must be monthly, got {period!r}")
            payer = _parse_sector(row[1], line)
            payee = _parse_sector(row[2], line)
            pence = _parse_pence(row[3], line)
            if pence < 0:
                raise NegativeValue(line, f"negative value {row[3]!r}")
            try:
                count = int(row[4].strip())
            except ValueError:
                raise MalformedRow(line, f"bad count {row[4]!r}") from None
            if count < 0:
                raise NegativeValue(line, f"negative count {row[4]!r}")
            if pence == 0 and count > 0:
                raise ValueZeroCountPositive(
                    line, f"zero value with positive count {count}"
                )
            records.append(TransactionRecord(period, payer, payee, pence, count))
    return records


def write_ledger(records, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(LEDGER_HEADER)
        for r in records:
            writer.writerow(
                [r.period, r.payer, r.payee, f"{r.value_pence / 100:.2f}", r.count]
            )


def parse_macro_series(path: str | Path) -> list[MacroSeries]:
    """Parse a long-format `series,period,value` CSV into one series per name."""
    buckets: dict[str, dict[str, float]] = {}
    order: list[str] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != MACRO_HEADER:
            raise MalformedRow(1, f"header must be {','.join(MACRO_HEADER)}")
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise MalformedRow(line, f"expected 3 fields, got {len(row)}")
            name = row[0].strip()
            period = row[1].strip()
            parse_period(period, line)
            try:
                value = float(row[2])
            except ValueError:
                raise BadNumber(line, f"bad number {row[2]!r}") from None
            if name not in buckets:
                buckets[name] = {}
                order.append(name)
            if period in buckets[name]:
                raise DuplicatePeriod(name, period)
            buckets[name][period] = value
    out = []
    for name in order:
        obs = sorted(buckets[name].items(), key=lambda kv: sort_key(kv[0]))
        freqs = {is_monthly(p) for p, _ in obs}
        if len(freqs) > 1:
            raise BadPeriod(0, f"series {name!r} mixes monthly and annual periods")
        out.append(MacroSeries(name, tuple(obs)))
    return out


def parse_external_iot(path: str | Path, kind: str, year: int) -> ExternalIOT:
    """Parse a labelled square CSV and canonicalise columns to the row order."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows:
        raise NotSquare("empty file")
    col_labels = [c.strip() for c in rows[0][1:]]
    row_labels = [r[0].strip() for r in rows[1:]]
    n = len(row_labels)
    if len(col_labels) != n:
        raise NotSquare(f"{n} row labels vs {len(col_labels)} column labels")
    if len(set(row_labels)) != n or len(set(col_labels)) != n:
        raise LabelMismatch("duplicate labels")
    if set(row_labels) != set(col_labels):
        raise LabelMismatch(
            f"row/column label sets differ: {sorted(set(row_labels) ^ set(col_labels))}"
        )
    matrix = np.zeros((n, n))
    col_pos = {lab: i for i, lab in enumerate(col_labels)}
    perm = [col_pos[lab] for lab in row_labels]
    for i, row in enumerate(rows[1:]):
        if len(row) != n + 1:
            raise NotSquare(f"row {i + 2} has {len(row) - 1} cells, expected {n}")
        try:
            vals = np.array([float(v) for v in row[1:]])
        except ValueError as exc:
            raise BadNumber(i + 2, str(exc)) from None
        matrix[i] = vals[perm]
    if (matrix < 0).any():
        raise NegativeEntry("table has negative entries")
    return ExternalIOT(tuple(row_labels), matrix, kind, year)
