"""Domain model: per-bank rating histories and the pooled cross-bank panel.

Histories are sparse event lists evaluated as step functions.  A bank's
rating on day ``t`` is the state of its most recent event on or before
``t``; outside its coverage interval the bank is unrated and queries
return ``None``.  This is equivalent to a daily-sampled series but far
smaller, and the daily expansion is recoverable exactly.
"""

from __future__ import annotations

import bisect
import datetime as dt
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from .scale import N_STATES

__all__ = ["RatingEvent", "RatingHistory", "Increment", "Panel"]


@dataclass(frozen=True)
class RatingEvent:
    """A dated rating assignment (state change or initial rating)."""

    date: dt.date
    state: int

    def __post_init__(self):
        if not 0 <= self.state < N_STATES:
            raise ValueError(f"state {self.state} outside 0..{N_STATES - 1}")


@dataclass(frozen=True)
class Increment:
    """Signed rating change of one bank over a trailing period of ``tau`` days."""

    bank_id: str
    t: dt.date
    tau: int
    value: int


@dataclass(frozen=True)
class RatingHistory:
    """Date-ascending rating events of one bank plus its coverage end.

    Invariants enforced here: events strictly increasing in date,
    consecutive events change the state (re-affirmations are collapsed
    at ingestion), and coverage runs from the first event date through
    ``coverage_end`` inclusive.
    """

    bank_id: str
    events: tuple[RatingEvent, ...]
    coverage_end: dt.date

    def __post_init__(self):
        if not self.events:
            raise ValueError(f"bank {self.bank_id!r}: history has no events")
        for a, b in zip(self.events, self.events[1:]):
            if b.date <= a.date:
                raise ValueError(
                    f"bank {self.bank_id!r}: event dates not strictly increasing"
                )
            if b.state == a.state:
                raise ValueError(
                    f"bank {self.bank_id!r}: consecutive events repeat state {a.state}"
                )
        if self.coverage_end < self.events[-1].date:
            raise ValueError(
                f"bank {self.bank_id!r}: coverage ends before its last event"
            )

    @property
    def coverage(self) -> tuple[dt.date, dt.date]:
        """[first rated day, last rated day]."""
        return (self.events[0].date, self.coverage_end)

    @cached_property
    def _event_dates(self) -> list[dt.date]:
        return [e.date for e in self.events]

    def rating_at(self, t: dt.date) -> Optional[int]:
        """State on day ``t``, or ``None`` if the bank is unrated then.

        Step-function evaluation: the state of the most recent event on
        or before ``t``.  Absence (before the first event, or after
        withdrawal) is a value, not an error.
        """
        if t < self.events[0].date or t > self.coverage_end:
            return None
        idx = bisect.bisect_right(self._event_dates, t) - 1
        return self.events[idx].state

    def increment(self, t: dt.date, tau: int = 365) -> Optional[Increment]:
        """Rating change over ``[t - tau, t]``: ``R(t) - R(t - tau)``.

        Positive values are upgrades, negative downgrades.  ``None`` if
        either endpoint is unrated.
        """
        if tau < 1:
            raise ValueError(f"tau must be >= 1 day, got {tau}")
        now = self.rating_at(t)
        then = self.rating_at(t - dt.timedelta(days=tau))
        if now is None or then is None:
            return None
        return Increment(bank_id=self.bank_id, t=t, tau=tau, value=now - then)

    def transition_count(self) -> int:
        """Number of state changes (every event after the first)."""
        return len(self.events) - 1


class Panel:
    """Immutable collection of rating histories over a global span.

    The span ``[start, end]`` is inclusive on both ends.  Vectorized
    views of the event data (used by the window statistics) are built
    lazily and cached; the panel must not be mutated after construction.
    """

    def __init__(self, histories: Iterable[RatingHistory], span: tuple[dt.date, dt.date]):
        start, end = span
        if end < start:
            raise ValueError(f"span end {end} before start {start}")
        hist = sorted(histories, key=lambda h: h.bank_id)
        seen = set()
        for h in hist:
            if h.bank_id in seen:
                raise ValueError(f"duplicate bank_id {h.bank_id!r}")
            seen.add(h.bank_id)
            lo, hi = h.coverage
            if lo < start or hi > end:
                raise ValueError(
                    f"bank {h.bank_id!r}: coverage [{lo}, {hi}] outside span [{start}, {end}]"
                )
        self.histories: tuple[RatingHistory, ...] = tuple(hist)
        self.span: tuple[dt.date, dt.date] = (start, end)

    # -- basic queries ------------------------------------------------

    @property
    def n_banks(self) -> int:
        return len(self.histories)

    @property
    def bank_ids(self) -> tuple[str, ...]:
        return tuple(h.bank_id for h in self.histories)

    @cached_property
    def _by_id(self) -> dict[str, RatingHistory]:
        return {h.bank_id: h for h in self.histories}

    def history(self, bank_id: str) -> RatingHistory:
        return self._by_id[bank_id]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Panel):
            return NotImplemented
        return self.span == other.span and self.histories == other.histories

    def __len__(self) -> int:
        return len(self.histories)

    @property
    def n_days(self) -> int:
        """Number of calendar days in the span, inclusive."""
        return (self.span[1] - self.span[0]).days + 1

    def day_offset(self, t: dt.date) -> int:
        """Day index of ``t`` within the span; raises if outside."""
        off = (t - self.span[0]).days
        if not 0 <= off < self.n_days:
            raise ValueError(f"date {t} outside span [{self.span[0]}, {self.span[1]}]")
        return off

    def total_transitions(self) -> int:
        return sum(h.transition_count() for h in self.histories)

    # -- vectorized event views ---------------------------------------

    @cached_property
    def _event_arrays(self) -> tuple[np.ndarray, ...]:
        """(bank, day-offset, state) per event, sorted by (bank, day)."""
        banks, offs, states = [], [], []
        start = self.span[0]
        for k, h in enumerate(self.histories):
            for e in h.events:
                banks.append(k)
                offs.append((e.date - start).days)
                states.append(e.state)
        return (
            np.asarray(banks, dtype=np.int64),
            np.asarray(offs, dtype=np.int64),
            np.asarray(states, dtype=np.int64),
        )

    @cached_property
    def _coverage_offsets(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-bank first/last rated day offsets."""
        start = self.span[0]
        first = np.asarray([(h.events[0].date - start).days for h in self.histories], dtype=np.int64)
        last = np.asarray([(h.coverage_end - start).days for h in self.histories], dtype=np.int64)
        return first, last

    @cached_property
    def _transition_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(day-offset, from-state, to-state) per state change, day-sorted."""
        offs, src, dst = [], [], []
        start = self.span[0]
        for h in self.histories:
            for a, b in zip(h.events, h.events[1:]):
                offs.append((b.date - start).days)
                src.append(a.state)
                dst.append(b.state)
        off_a = np.asarray(offs, dtype=np.int64)
        src_a = np.asarray(src, dtype=np.int64)
        dst_a = np.asarray(dst, dtype=np.int64)
        order = np.argsort(off_a, kind="stable")
        return off_a[order], src_a[order], dst_a[order]

    @cached_property
    def _segment_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Constant-state segments as (state, start-offset, end-offset).

        End offsets are exclusive: the bank holds ``state`` on every day
        ``start <= d < end``.  The last segment of a history ends one day
        past its coverage end.
        """
        states, seg_start, seg_end = [], [], []
        start = self.span[0]
        for h in self.histories:
            offs = [(e.date - start).days for e in h.events]
            ends = offs[1:] + [(h.coverage_end - start).days + 1]
            for e, a, b in zip(h.events, offs, ends):
                states.append(e.state)
                seg_start.append(a)
                seg_end.append(b)
        return (
            np.asarray(states, dtype=np.int64),
            np.asarray(seg_start, dtype=np.int64),
            np.asarray(seg_end, dtype=np.int64),
        )

    @cached_property
    def _event_keys(self) -> np.ndarray:
        banks, offs, _ = self._event_arrays
        return banks * np.int64(self.n_days + 1) + offs

    def states_at(self, t: dt.date) -> np.ndarray:
        """Cross-section of states on day ``t``; -1 where a bank is unrated.

        Dates outside the span are legal here and yield an all-unrated
        cross-section (needed when an increment endpoint precedes the
        span).
        """
        out = np.full(self.n_banks, -1, dtype=np.int64)
        off = (t - self.span[0]).days
        if not 0 <= off < self.n_days:
            return out
        banks, _, states = self._event_arrays
        first, last = self._coverage_offsets
        if len(banks) == 0:
            return out
        stride = np.int64(self.n_days + 1)
        query = np.arange(self.n_banks, dtype=np.int64) * stride + off
        pos = np.searchsorted(self._event_keys, query, side="right") - 1
        valid = (pos >= 0) & (first <= off) & (off <= last)
        valid &= banks[np.maximum(pos, 0)] == np.arange(self.n_banks)
        out[valid] = states[pos[valid]]
        return out

    def count_rated(self, t: dt.date) -> int:
        """Number of banks rated on day ``t`` (errors outside the span)."""
        self.day_offset(t)
        return int(np.count_nonzero(self.states_at(t) >= 0))

    @cached_property
    def daily_state_counts(self) -> np.ndarray:
        """Array of shape (n_days, 15): banks per state per span day."""
        states, seg_a, seg_b = self._segment_arrays
        delta = np.zeros((self.n_days + 1, N_STATES), dtype=np.int64)
        np.add.at(delta, (seg_a, states), 1)
        np.add.at(delta, (np.minimum(seg_b, self.n_days), states), -1)
        return np.cumsum(delta[:-1], axis=0)
