"""Event-CSV interchange: parsing, validation, and daily count series.

Input format: UTF-8 CSV with header ``bank_id,date,rating``; dates are
``YYYY-MM-DD``; ratings are the 15 scale labels plus the sentinel ``WR``
which withdraws the bank (coverage closes the day before).  Rows may
appear in any order.  Re-affirmations (consecutive rows repeating a
bank's current state) are collapsed so that "transition" always means a
state change.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, Union

import numpy as np

from .dates import parse_iso_date
from .errors import DataFormatError
from .panel import Panel, RatingEvent, RatingHistory
from .scale import RATING_LABELS, WITHDRAWN_LABEL, decode, encode

__all__ = [
    "RawRecord",
    "parse_panel",
    "infer_span",
    "write_panel_csv",
    "daily_counts",
    "transitions_per_bank",
    "write_count_series_csv",
]

HEADER = ("bank_id", "date", "rating")

Source = Union[str, Path, IO[str], IO[bytes]]


@dataclass(frozen=True)
class RawRecord:
    """One validated CSV row before assembly into histories."""

    bank_id: str
    date: dt.date
    label: str
    row: int


def _open_text(source: Source):
    """Return (text stream, needs_close) for a path or file-like source."""
    if isinstance(source, (str, Path)):
        return open(source, "r", encoding="utf-8", newline=""), True
    if isinstance(source, io.TextIOBase):
        return source, False
    # byte stream
    return io.TextIOWrapper(source, encoding="utf-8", newline=""), False


def _read_records(stream: IO[str], span: tuple[dt.date, dt.date]) -> list[RawRecord]:
    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        return []  # entirely empty file -> empty panel
    if tuple(h.strip() for h in header) != HEADER:
        raise DataFormatError(
            f"expected header {','.join(HEADER)!r}, got {','.join(header)!r}", row=1
        )
    start, end = span
    records = []
    valid_labels = set(RATING_LABELS) | {WITHDRAWN_LABEL}
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != 3:
            raise DataFormatError(f"expected 3 fields, got {len(row)}", row=lineno)
        bank_id, date_text, label = (f.strip() for f in row)
        if label not in valid_labels:
            raise DataFormatError(f"unknown rating label {label!r}", row=lineno)
        try:
            date = parse_iso_date(date_text)
        except ValueError as exc:
            raise DataFormatError(str(exc), row=lineno) from None
        if date < start or date > end:
            raise DataFormatError(
                f"date {date} outside span [{start}, {end}]", row=lineno
            )
        records.append(RawRecord(bank_id=bank_id, date=date, label=label, row=lineno))
    return records


def parse_panel(source: Source, span: tuple[dt.date, dt.date]) -> Panel:
    """Parse an event CSV into a validated, immutable panel.

    Per bank, rows are date-sorted, same-state repeats are collapsed,
    and a ``WR`` row closes coverage on the previous day.  Hard errors
    (naming the offending row): unknown labels, conflicting labels on
    the same bank-day, events after withdrawal, dates outside the span.
    An empty file is an empty panel, not an error.
    """
    stream, needs_close = _open_text(source)
    try:
        records = _read_records(stream, span)
    finally:
        if needs_close:
            stream.close()

    by_bank: dict[str, list[RawRecord]] = {}
    for rec in records:
        by_bank.setdefault(rec.bank_id, []).append(rec)

    histories = []
    for bank_id, recs in by_bank.items():
        recs.sort(key=lambda r: (r.date, r.row))
        for a, b in zip(recs, recs[1:]):
            if a.date == b.date and a.label != b.label:
                raise DataFormatError(
                    f"bank {bank_id!r}: conflicting labels {a.label!r} and {b.label!r} "
                    f"on {a.date}",
                    row=b.row,
                )
        events: list[RatingEvent] = []
        coverage_end = span[1]
        withdrawn = False
        for rec in recs:
            if withdrawn:
                raise DataFormatError(
                    f"bank {bank_id!r}: event after withdrawal", row=rec.row
                )
            if rec.label == WITHDRAWN_LABEL:
                if not events:
                    raise DataFormatError(
                        f"bank {bank_id!r}: withdrawal without a prior rating",
                        row=rec.row,
                    )
                coverage_end = rec.date - dt.timedelta(days=1)
                withdrawn = True
                continue
            state = encode(rec.label)
            if events and events[-1].state == state:
                continue  # re-affirmation, not a transition
            if events and events[-1].date == rec.date:
                continue  # duplicate row (same label guaranteed above)
            events.append(RatingEvent(date=rec.date, state=state))
        if not events:
            raise DataFormatError(f"bank {bank_id!r}: no rating events")
        histories.append(
            RatingHistory(bank_id=bank_id, events=tuple(events), coverage_end=coverage_end)
        )
    return Panel(histories, span)


def infer_span(source: Source) -> tuple[dt.date, dt.date]:
    """Smallest [start, end] covering every record date in the file.

    Used when no explicit span is supplied.  Only the date column is
    inspected; full validation happens in :func:`parse_panel`.  A file
    without data rows has no inferable span and raises.
    """
    stream, needs_close = _open_text(source)
    try:
        reader = csv.reader(stream)
        try:
            header = next(reader)
        except StopIteration:
            raise DataFormatError("cannot infer a span from an empty file") from None
        if tuple(h.strip() for h in header) != HEADER:
            raise DataFormatError(
                f"expected header {','.join(HEADER)!r}, got {','.join(header)!r}", row=1
            )
        lo = hi = None
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise DataFormatError(f"expected 3 fields, got {len(row)}", row=lineno)
            try:
                date = parse_iso_date(row[1].strip())
            except ValueError as exc:
                raise DataFormatError(str(exc), row=lineno) from None
            if lo is None or date < lo:
                lo = date
            if hi is None or date > hi:
                hi = date
    finally:
        if needs_close:
            stream.close()
    if lo is None:
        raise DataFormatError("cannot infer a span from an empty panel")
    return lo, hi


def write_panel_csv(panel: Panel, target: Union[str, Path, IO[str]]) -> None:
    """Serialize a panel back to the event-CSV format (round-trip safe)."""
    own = isinstance(target, (str, Path))
    stream = open(target, "w", encoding="utf-8", newline="") if own else target
    try:
        writer = csv.writer(stream)
        writer.writerow(HEADER)
        for h in panel.histories:
            for e in h.events:
                writer.writerow([h.bank_id, e.date.isoformat(), decode(e.state)])
            if h.coverage_end < panel.span[1]:
                wr_date = h.coverage_end + dt.timedelta(days=1)
                writer.writerow([h.bank_id, wr_date.isoformat(), WITHDRAWN_LABEL])
    finally:
        if own:
            stream.close()


def daily_counts(panel: Panel) -> list[tuple[dt.date, int]]:
    """Number of rated banks per day; days with none are omitted.

    An empty panel therefore yields an empty series rather than a run
    of zero rows.
    """
    totals = panel.daily_state_counts.sum(axis=1)
    start = panel.span[0]
    return [
        (start + dt.timedelta(days=i), int(v)) for i, v in enumerate(totals) if v > 0
    ]


def transitions_per_bank(panel: Panel, window: int = 365) -> list[tuple[dt.date, float]]:
    """Trailing transitions-per-bank ratio for every day of the span.

    For each day ``t``: state changes dated within ``[t - window, t]``
    (clipped to the span) divided by the mean daily rated-bank count
    over the same days.  Days whose whole window has zero rated banks
    are omitted.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1 day, got {window}")
    n = panel.n_days
    daily_total = panel.daily_state_counts.sum(axis=1).astype(np.float64)
    tr_off, _, _ = panel._transition_arrays
    daily_tr = np.bincount(tr_off, minlength=n).astype(np.float64)

    cum_tr = np.concatenate([[0.0], np.cumsum(daily_tr)])
    cum_nr = np.concatenate([[0.0], np.cumsum(daily_total)])

    start = panel.span[0]
    out = []
    for t in range(n):
        lo = max(t - window, 0)
        n_events = cum_tr[t + 1] - cum_tr[lo]
        n_days = t + 1 - lo
        mean_banks = (cum_nr[t + 1] - cum_nr[lo]) / n_days
        if mean_banks == 0.0:
            continue
        out.append((start + dt.timedelta(days=t), float(n_events / mean_banks)))
    return out


def write_count_series_csv(
    series: Iterable[tuple[dt.date, float]], target: Union[str, Path, IO[str]]
) -> None:
    """Write a ``date,value`` series; one row per day."""
    own = isinstance(target, (str, Path))
    stream = open(target, "w", encoding="utf-8", newline="") if own else target
    try:
        writer = csv.writer(stream)
        writer.writerow(["date", "value"])
        for day, value in series:
            writer.writerow([day.isoformat(), format(value, ".12g")])
    finally:
        if own:
            stream.close()
