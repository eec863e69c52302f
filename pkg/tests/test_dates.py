import datetime as dt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ratinglab.dates import (
    DAYS_PER_YEAR,
    add_months,
    day_range,
    month_starts,
    parse_iso_date,
    years_between,
)


def test_days_per_year_constant():
    assert DAYS_PER_YEAR == 365.0


def test_parse_iso_date():
    assert parse_iso_date("2007-01-01") == dt.date(2007, 1, 1)
    assert parse_iso_date("2016-12-31") == dt.date(2016, 12, 31)


@pytest.mark.parametrize("bad", ["2007/01/01", "01-01-2007", "2007-13-01", "", "yesterday"])
def test_parse_iso_date_rejects(bad):
    with pytest.raises(ValueError):
        parse_iso_date(bad)


def test_add_months_basic():
    assert add_months(dt.date(2007, 1, 1), 1) == dt.date(2007, 2, 1)
    assert add_months(dt.date(2007, 11, 1), 3) == dt.date(2008, 2, 1)
    assert add_months(dt.date(2007, 1, 1), -1) == dt.date(2006, 12, 1)
    assert add_months(dt.date(2007, 6, 1), 0) == dt.date(2007, 6, 1)


def test_add_months_rejects_mid_month():
    with pytest.raises(ValueError):
        add_months(dt.date(2007, 1, 15), 1)


@given(
    year=st.integers(1990, 2030),
    month=st.integers(1, 12),
    k=st.integers(-60, 60),
)
def test_add_months_inverts(year, month, k):
    d = dt.date(year, month, 1)
    assert add_months(add_months(d, k), -k) == d


def test_month_starts_interior():
    got = month_starts(dt.date(2007, 1, 15), dt.date(2007, 4, 10))
    assert got == [dt.date(2007, 2, 1), dt.date(2007, 3, 1), dt.date(2007, 4, 1)]


def test_month_starts_inclusive_endpoints():
    got = month_starts(dt.date(2007, 1, 1), dt.date(2007, 3, 1))
    assert got == [dt.date(2007, 1, 1), dt.date(2007, 2, 1), dt.date(2007, 3, 1)]


def test_month_starts_empty():
    assert month_starts(dt.date(2007, 1, 2), dt.date(2007, 1, 31)) == []


@given(
    start=st.dates(dt.date(2000, 1, 1), dt.date(2015, 1, 1)),
    days=st.integers(0, 1200),
)
def test_month_starts_properties(start, days):
    end = start + dt.timedelta(days=days)
    got = month_starts(start, end)
    assert all(d.day == 1 for d in got)
    assert all(start <= d <= end for d in got)
    assert got == sorted(got)
    # nothing missed: every first-of-month inside the range appears
    probe = dt.date(start.year, start.month, 1)
    while probe <= end:
        if probe >= start:
            assert probe in got
        probe = add_months(probe, 1)


def test_day_range():
    days = day_range(dt.date(2007, 1, 30), dt.date(2007, 2, 2))
    assert days == [
        dt.date(2007, 1, 30),
        dt.date(2007, 1, 31),
        dt.date(2007, 2, 1),
        dt.date(2007, 2, 2),
    ]
    assert day_range(dt.date(2007, 5, 5), dt.date(2007, 5, 5)) == [dt.date(2007, 5, 5)]


def test_years_between():
    assert years_between(dt.date(2007, 1, 1), dt.date(2008, 1, 1)) == 1.0
    assert years_between(dt.date(2007, 1, 1), dt.date(2007, 1, 1)) == 0.0
    got = years_between(dt.date(2007, 1, 1), dt.date(2007, 2, 1))
    assert got == pytest.approx(31 / 365)
