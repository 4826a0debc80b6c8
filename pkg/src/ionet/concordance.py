"""Longest-prefix SIC to CPA mapping and named sector-group filters.

A concordance row maps a 2-5 digit leading-digit prefix to an aggregation
class; a 5-digit code resolves to the longest matching prefix. Codes with no
matching prefix (including the unclassified dummy "0" and dormant/non-trading
tags such as "74990" and "99999") stay unmatched, which drives the raw/clean
split.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .errors import EmptyResult, MalformedRow
from .iot import FlowMatrix


@dataclass(frozen=True)
class ConcordanceTable:
    entries: dict[str, str]
    cpa_universe: tuple[str, ...]

    def __post_init__(self):
        universe = set(self.cpa_universe)
        for prefix, code in self.entries.items():
            if code not in universe:
                raise MalformedRow(0, f"target {code!r} missing from universe")
            if not (prefix.isdigit() and 2 <= len(prefix) <= 5):
                raise MalformedRow(0, f"bad prefix {prefix!r}")

    def map(self, sic: str) -> str | None:
        """CPA code of the longest entry prefix of `sic`, or None."""
        for plen in range(min(len(sic), 5), 1, -1):
            hit = self.entries.get(sic[:plen])
            if hit is not None:
                return hit
        return None


def map_sic(table: ConcordanceTable, sic: str) -> str | None:
    return table.map(sic)


def load_concordance(path: str | Path) -> ConcordanceTable:
    """Read a `sic_prefix,cpa_code` CSV; universe order follows first appearance."""
    entries: dict[str, str] = {}
    universe: list[str] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["sic_prefix", "cpa_code"]:
            raise MalformedRow(1, "header must be sic_prefix,cpa_code")
        for line, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise MalformedRow(line, f"expected 2 fields, got {len(row)}")
            prefix, code = row[0].strip(), row[1].strip()
            if prefix in entries:
                raise MalformedRow(line, f"duplicate prefix {prefix!r}")
            entries[prefix] = code
            if code not in universe:
                universe.append(code)
    return ConcordanceTable(entries, tuple(universe))


@lru_cache(maxsize=1)
def default_table() -> ConcordanceTable:
    """The shipped 104-class aggregation (C254 already merged into C25OTHER)."""
    with resources.as_file(resources.files("ionet.data") / "cpa104.csv") as p:
        return load_concordance(p)


def split_raw_clean(records, table: ConcordanceTable, relabel: bool = True):
    """Partition records into (clean, residual) by mappability of both ends.

    Clean records carry the mapped aggregation codes when `relabel` is true;
    pass relabel=False to keep original 5-digit codes (e.g. for granular
    networks restricted to classifiable flows). Totals are conserved exactly:
    every input record lands in exactly one of the two outputs.
    """
    clean, residual = [], []
    from dataclasses import replace as _replace

    for r in records:
        payer = table.map(r.payer)
        payee = table.map(r.payee)
        if payer is None or payee is None:
            residual.append(r)
        elif relabel:
            clean.append(_replace(r, payer=payer, payee=payee))
        else:
            clean.append(r)
    return clean, residual


def _digit_part(code: str) -> str:
    return code.lstrip("ABCDEFGHIJKLMNOPQRSTUVWXYZ")


@dataclass(frozen=True)
class SectorFilter:
    """Named exclusion list of code prefixes.

    A prefix with a 2+ digit part (e.g. "G45", "64") matches any label whose
    digit part starts with those digits, so the same filter works on CPA
    labels and on 5-digit SIC labels. Prefixes with a shorter digit part
    (e.g. "G4") match on the raw label only, i.e. at CPA level.
    """

    name: str
    excluded_prefixes: tuple[str, ...]

    def __post_init__(self):
        if not self.excluded_prefixes or any(not p for p in self.excluded_prefixes):
            raise MalformedRow(0, f"filter {self.name!r} has empty prefixes")

    def matches(self, label: str) -> bool:
        ld = _digit_part(label)
        for prefix in self.excluded_prefixes:
            pd = _digit_part(prefix)
            if len(pd) >= 2:
                if ld.startswith(pd):
                    return True
            elif label.startswith(prefix):
                return True
        return False


def apply_filter(m: FlowMatrix, f: SectorFilter) -> FlowMatrix:
    """Drop all rows and columns whose label the filter excludes."""
    keep = tuple(lab for lab in m.labels if not f.matches(lab))
    if not keep:
        raise EmptyResult(f"filter {f.name!r} removed every sector")
    return m.reindexed(keep)


def division_range(lo: int, hi: int) -> tuple[str, ...]:
    return tuple(f"{d:02d}" for d in range(lo, hi + 1))


def default_filters() -> dict[str, SectorFilter]:
    """Filters used in the robustness exercises.

    "services" removes everything in the G45-Q88 and S94-U99 ranges;
    "intermediaries" removes retail/wholesale, financial services and public
    administration. The "-g4" variant additionally excludes the whole G
    section at CPA level (the two variants exist because the source lists
    them both ways).
    """
    services = SectorFilter(
        "services", division_range(45, 88) + division_range(94, 99)
    )
    intermediaries = SectorFilter(
        "intermediaries", ("G45", "G46", "K64", "K65", "K66", "O84")
    )
    intermediaries_g4 = SectorFilter(
        "intermediaries-g4", ("G45", "G46", "G4", "K64", "K65", "K66", "O84")
    )
    return {f.name: f for f in (services, intermediaries, intermediaries_g4)}


def load_filters(path: str | Path) -> dict[str, SectorFilter]:
    """Read `name,prefix1;prefix2;...` rows into named filters."""
    out: dict[str, SectorFilter] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for line, row in enumerate(csv.reader(fh), start=1):
            if not row:
                continue
            if len(row) != 2:
                raise MalformedRow(line, "expected name,prefix1;prefix2;...")
            name = row[0].strip()
            prefixes = tuple(p.strip() for p in row[1].split(";") if p.strip())
            out[name] = SectorFilter(name, prefixes)
    return out
