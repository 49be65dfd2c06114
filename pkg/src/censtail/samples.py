"""Censored-sample containers, ordering with concomitants, and CSV I/O."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass

import numpy as np

from .errors import EmptySample, InvalidIndicator, NonPositiveObservation, ParseError


def _freeze(arr):
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class CensoredSample:
    """Raw right-censored observations ``(z_i, delta_i)``.

    ``z`` holds the observed values (minimum of the variable of interest and
    its censoring variable) and ``delta`` is 1 where the true value was
    observed, 0 where it was censored.  All observations must be strictly
    positive because every estimator downstream takes logarithms of
    z-ratios.
    """

    z: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        delta_raw = np.asarray(self.delta)
        if z.ndim != 1 or delta_raw.ndim != 1:
            raise ValueError("z and delta must be one-dimensional")
        if z.shape != delta_raw.shape:
            raise ValueError(
                f"z and delta lengths differ: {z.shape[0]} vs {delta_raw.shape[0]}"
            )
        if z.size == 0:
            raise EmptySample("sample must contain at least one observation")
        if not np.all(np.isfinite(z)) or np.any(z <= 0.0):
            raise NonPositiveObservation(
                "all observations must be finite and strictly positive"
            )
        if not np.isin(delta_raw, (0, 1)).all():
            raise InvalidIndicator("censoring indicators must be 0 or 1")
        object.__setattr__(self, "z", _freeze(z))
        object.__setattr__(self, "delta", _freeze(delta_raw.astype(np.int8)))

    @classmethod
    def from_pairs(cls, pairs):
        """Build a sample from an iterable of ``(z, delta)`` pairs."""
        pairs = list(pairs)
        if not pairs:
            raise EmptySample("sample must contain at least one observation")
        z, delta = zip(*pairs)
        return cls(np.asarray(z, dtype=float), np.asarray(delta))

    @property
    def n(self):
        return self.z.shape[0]

    def pairs(self):
        """Return the observations as a list of ``(z, delta)`` tuples."""
        return list(zip(self.z.tolist(), self.delta.tolist()))


@dataclass(frozen=True)
class SortedCensoredSample:
    """Ascending order statistics with their concomitant indicators.

    ``z`` is nondecreasing and ``delta[j]`` is the censoring indicator that
    travelled with the j-th order statistic.  Instances are produced by
    :func:`sort_with_concomitants`; direct construction is allowed for
    already-sorted data.
    """

    z: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        delta_raw = np.asarray(self.delta)
        if z.ndim != 1 or delta_raw.ndim != 1 or z.shape != delta_raw.shape:
            raise ValueError("z and delta must be one-dimensional and equal length")
        if z.size == 0:
            raise EmptySample("sample must contain at least one observation")
        if not np.all(np.isfinite(z)) or np.any(z <= 0.0):
            raise NonPositiveObservation(
                "all observations must be finite and strictly positive"
            )
        if np.any(np.diff(z) < 0):
            raise ValueError("order statistics must be nondecreasing")
        if not np.isin(delta_raw, (0, 1)).all():
            raise InvalidIndicator("censoring indicators must be 0 or 1")
        object.__setattr__(self, "z", _freeze(z))
        object.__setattr__(self, "delta", _freeze(delta_raw.astype(np.int8)))

    @property
    def n(self):
        return self.z.shape[0]


def sort_with_concomitants(sample):
    """Sort a censored sample, carrying the indicators as concomitants.

    Ties in ``z`` are broken deterministically: uncensored observations
    (delta = 1) come before censored ones, and remaining ties keep the
    original input order.

    Parameters
    ----------
    sample : CensoredSample

    Returns
    -------
    SortedCensoredSample
    """
    order = np.lexsort((-sample.delta, sample.z))
    return SortedCensoredSample(sample.z[order], sample.delta[order])


# ---------------------------------------------------------------------------
# CSV input


@dataclass(frozen=True)
class CsvFormat:
    """Format of a two-column ``value,delta`` CSV file.

    ``header`` is True when the first line is a header, False when data
    starts on line 1, and None to sniff: the first line is treated as a
    header when its first field does not parse as a number.
    """

    header: bool | None = None


def _open_source(source):
    if isinstance(source, (str, os.PathLike)):
        return open(source, "r", encoding="utf-8", newline=""), True
    return source, False


def read_csv(source, fmt=CsvFormat()):
    """Read a censored sample from a ``value,delta`` CSV file.

    Parameters
    ----------
    source : path or text stream
    fmt : CsvFormat
        Header handling; see :class:`CsvFormat`.

    Returns
    -------
    CensoredSample
        Rows in file order.

    Raises
    ------
    ParseError
        Malformed row, with its 1-based line number.
    NonPositiveObservation
        A value column entry was <= 0 or not finite.
    InvalidIndicator
        A delta column entry was not 0 or 1.
    EmptySample
        No data rows.
    """
    stream, owned = _open_source(source)
    try:
        values = []
        deltas = []
        first_data_row = True
        for lineno, row in enumerate(csv.reader(stream), start=1):
            if not row:
                continue
            if first_data_row:
                is_header = fmt.header
                if is_header is None:
                    is_header = not _is_number(row[0])
                first_data_row = False
                if is_header:
                    continue
            if len(row) != 2:
                raise ParseError(
                    f"row {lineno}: expected 2 fields, got {len(row)}", row=lineno
                )
            try:
                value = float(row[0])
            except ValueError:
                raise ParseError(
                    f"row {lineno}: cannot parse value {row[0]!r}", row=lineno
                ) from None
            if not np.isfinite(value) or value <= 0.0:
                raise NonPositiveObservation(
                    f"row {lineno}: observation must be positive, got {row[0]!r}",
                    row=lineno,
                )
            try:
                delta = float(row[1])
            except ValueError:
                raise ParseError(
                    f"row {lineno}: cannot parse delta {row[1]!r}", row=lineno
                ) from None
            if delta not in (0.0, 1.0):
                raise InvalidIndicator(
                    f"row {lineno}: delta must be 0 or 1, got {row[1]!r}", row=lineno
                )
            values.append(value)
            deltas.append(int(delta))
    finally:
        if owned:
            stream.close()
    if not values:
        raise EmptySample("CSV file contains no data rows")
    return CensoredSample(np.asarray(values), np.asarray(deltas))


def _is_number(text):
    try:
        float(text)
    except ValueError:
        return False
    return True


# ---------------------------------------------------------------------------
# CSV output


@dataclass(frozen=True)
class Table:
    """Rectangular table with named columns, the unit of CSV emission."""

    columns: tuple
    rows: tuple

    def __post_init__(self):
        columns = tuple(str(c) for c in self.columns)
        rows = tuple(tuple(r) for r in self.rows)
        width = len(columns)
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ValueError(f"row {i} has {len(row)} cells, expected {width}")
        object.__setattr__(self, "columns", columns)
        object.__setattr__(self, "rows", rows)


def format_cell(value):
    """Render one table cell; floats use 17 significant digits so that the
    decimal text round-trips to the identical binary value."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def write_csv(table, dest):
    """Write a :class:`Table` as CSV (UTF-8, '\\n' line endings).

    Undefined cells (None) are emitted as empty fields.
    """
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            _write_csv_stream(table, fh)
    else:
        _write_csv_stream(table, dest)


def _write_csv_stream(table, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_cell(v) for v in row])


def render_csv(table):
    """Return the CSV text of a table as a string."""
    buf = io.StringIO()
    _write_csv_stream(table, buf)
    return buf.getvalue()


def read_table(source):
    """Read a generic CSV table back as strings (first line is the header).

    Empty fields become None so that undefined estimator cells survive a
    round trip.
    """
    stream, owned = _open_source(source)
    try:
        reader = csv.reader(stream)
        try:
            columns = next(reader)
        except StopIteration:
            raise ParseError("CSV table has no header line", row=1) from None
        rows = [tuple(cell if cell != "" else None for cell in row) for row in reader if row]
    finally:
        if owned:
            stream.close()
    return Table(tuple(columns), tuple(rows))
