"""Exception hierarchy shared across the package.

Everything raised on bad *data* derives from DataError so the CLI can map it
to exit code 1; anything else is a programming error and propagates.
"""


class DataError(Exception):
    pass


# --- ledger / macro / matrix ingestion -------------------------------------

class MalformedRow(DataError):
    def __init__(self, line: int, reason: str):
        self.line = line
        self.reason = reason
        super().__init__(f"line {line}: {reason}")


class BadPeriod(MalformedRow):
    pass


class NegativeValue(MalformedRow):
    pass


class ValueZeroCountPositive(MalformedRow):
    pass


class BadNumber(MalformedRow):
    pass


class DuplicatePeriod(DataError):
    def __init__(self, series: str, period: str):
        self.series = series
        self.period = period
        super().__init__(f"series {series!r}: duplicate period {period}")


class NotSquare(DataError):
    pass


class LabelMismatch(DataError):
    pass


class NegativeEntry(DataError):
    pass


# --- concordance / matrix operations ---------------------------------------

class EmptyResult(DataError):
    pass


class NegativeDenominator(DataError):
    pass


class NotShareMatrix(DataError):
    pass


class ColumnSumExceedsOne(DataError):
    pass


# --- series / correlations ---------------------------------------------------

class InsufficientOverlap(DataError):
    pass


class MissingBase(DataError):
    pass


class ZeroBase(DataError):
    pass


# --- tail fitting / differences ----------------------------------------------

class DegenerateTail(DataError):
    pass


class TooFewSamples(DataError):
    pass


class ScaleFloorRequired(DataError):
    pass


class NonPositiveSample(DataError):
    pass
