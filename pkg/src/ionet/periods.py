"""Period grammar and calendar windows.

Two period forms are accepted everywhere: "YYYY-MM" (monthly) and "YYYY"
(annual). Periods are kept as strings at API boundaries; internally they are
compared through (year, month) keys so that mixed collections sort sanely.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import BadPeriod

_MONTHLY = re.compile(r"^(\d{4})-(\d{2})$")
_ANNUAL = re.compile(r"^(\d{4})$")


def parse_period(s: str, line: int = 0) -> tuple[int, int | None]:
    """Return (year, month) with month None for annual periods."""
    m = _MONTHLY.match(s)
    if m:
        year, month = int(m.group(1)), int(m.group(2))
        if not 1 <= month <= 12:
            raise BadPeriod(line, f"month out of range in period {s!r}")
        return year, month
    if _ANNUAL.match(s):
        return int(s), None
    raise BadPeriod(line, f"period {s!r} is not YYYY-MM or YYYY")


def is_monthly(s: str) -> bool:
    return parse_period(s)[1] is not None


def year_of(s: str) -> str:
    return s[:4]


def sort_key(s: str) -> tuple[int, int]:
    y, m = parse_period(s)
    return y, m or 0


def prev_year(s: str) -> str:
    """Same month one year earlier, or the previous year for annual periods."""
    y, m = parse_period(s)
    return f"{y - 1:04d}" if m is None else f"{y - 1:04d}-{m:02d}"


def month_range(start: str, end: str) -> list[str]:
    """Inclusive range of monthly periods."""
    y0, m0 = parse_period(start)
    y1, m1 = parse_period(end)
    if m0 is None or m1 is None:
        raise BadPeriod(0, "month_range needs monthly endpoints")
    lo, hi = y0 * 12 + m0 - 1, y1 * 12 + m1 - 1
    return [f"{i // 12:04d}-{i % 12 + 1:02d}" for i in range(lo, hi + 1)]


@dataclass(frozen=True)
class Window:
    """Inclusive period ranges to keep (`include`) and to drop (`exclude`).

    An empty `include` means "everything". Applying a window twice is a
    no-op, and non-overlapping excludes commute.
    """

    include: tuple[tuple[str, str], ...] = ()
    exclude: tuple[tuple[str, str], ...] = ()

    def contains(self, period: str) -> bool:
        k = sort_key(period)
        if self.include:
            if not any(sort_key(lo) <= k <= sort_key(hi) for lo, hi in self.include):
                return False
        return not any(sort_key(lo) <= k <= sort_key(hi) for lo, hi in self.exclude)

    def describe(self) -> str:
        parts = []
        for lo, hi in self.include:
            parts.append(f"include {lo}:{hi}")
        for lo, hi in self.exclude:
            parts.append(f"exclude {lo}:{hi}")
        return "; ".join(parts) if parts else "all periods"


# Covid-19 proxy windows used throughout the benchmarking tables.
COVID_EXCLUDE_MONTHLY = ("2020-03", "2022-12")
COVID_EXCLUDE_ANNUAL = ("2020", "2022")


def covid_window(frequency: str) -> Window:
    rng = COVID_EXCLUDE_MONTHLY if frequency == "monthly" else COVID_EXCLUDE_ANNUAL
    return Window(exclude=(rng,))
