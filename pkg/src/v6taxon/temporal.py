"""Per-day observation sets and stability classes."""

from __future__ import annotations

import datetime as dt
import logging
import os
import re
from dataclasses import dataclass
from typing import Optional

from . import addrarray
from .addr_core import mask_of

logger = logging.getLogger(__name__)

EPOCH = dt.date(1970, 1, 1)
DAYFILE_SUFFIX = ".addrset"


class MissingDayError(KeyError):
    def __str__(self):
        return f"no observations recorded for day {self.args[0]}"


# -- day indices ---------------------------------------------------------------


def day_index(date):
    return (date - EPOCH).days


def day_date(day):
    return EPOCH + dt.timedelta(days=day)


def parse_day(text):
    """``YYYYMMDD`` -> day index."""
    try:
        return day_index(dt.datetime.strptime(text.strip(), "%Y%m%d").date())
    except ValueError:
        raise ValueError(f"malformed day {text!r}, expected YYYYMMDD") from None


def format_day(day):
    return day_date(day).strftime("%Y%m%d")


def parse_day_range(text):
    """``YYYYMMDD`` or inclusive ``YYYYMMDD-YYYYMMDD`` -> (first, last)."""
    first, sep, last = text.partition("-")
    lo = parse_day(first)
    hi = parse_day(last) if sep else lo
    if hi < lo:
        raise ValueError(f"day range {text!r} ends before it starts")
    return lo, hi


# -- the log ---------------------------------------------------------------------


class ObservationLog:
    """Map from day index to the set of addresses (or /p prefixes) active that day."""

    def __init__(self, prefix_len=128):
        self.prefix_len = prefix_len
        self.days = {}

    def record_day(self, day, addresses):
        day = int(day)
        m = mask_of(self.prefix_len)
        self.days.setdefault(day, set()).update(int(a) & m for a in addresses)
        return self

    def __contains__(self, day):
        return day in self.days

    def __getitem__(self, day):
        try:
            return self.days[day]
        except KeyError:
            raise MissingDayError(day) from None

    def get(self, day):
        return self.days.get(day, set())

    def sorted_day(self, day):
        return sorted(self[day])

    def active(self, first, last):
        out = set()
        for d in range(first, last + 1):
            out |= self.get(d)
        return out

    def derive(self, prefix_len):
        """The same log with every address replaced by its covering /prefix_len."""
        if prefix_len > self.prefix_len:
            raise ValueError(f"cannot refine a /{self.prefix_len} log to /{prefix_len}")
        out = ObservationLog(prefix_len)
        for d, addrs in self.days.items():
            out.record_day(d, addrs)
        return out


@dataclass(frozen=True)
class StabilityClass:
    n: int
    before: Optional[int] = 7
    after: Optional[int] = 7

    @property
    def label(self):
        if self.before is None:
            return f"{self.n}d-stable"
        return f"{self.n}d-stable (-{self.before}d,+{self.after}d)"

    def __str__(self):
        return self.label


def _required_gap(n, slew_tolerance):
    # the two observations must fall on different days whatever the slack
    return max(1, n - slew_tolerance)


def nd_stable(log, reference_day, n, before=7, after=7, slew_tolerance=0):
    """Addresses active on ``reference_day`` that were seen on two days at
    least ``n`` apart inside ``[reference_day - before, reference_day + after]``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    ref = log[reference_day]
    gap = _required_gap(n, slew_tolerance)
    if gap > before + after:
        return set()
    first, last = {}, {}
    for d in range(reference_day - before, reference_day + after + 1):
        for a in log.get(d) & ref:
            first.setdefault(a, d)
            last[a] = d
    return {a for a in ref if last[a] - first[a] >= gap}


def _check_disjoint(period_a, period_b):
    (a0, a1), (b0, b1) = period_a, period_b
    if a1 < a0 or b1 < b0:
        raise ValueError("period ends before it starts")
    if a0 <= b1 and b0 <= a1:
        raise ValueError(f"periods overlap: {period_a} and {period_b}")


def stable_across(log, period_a, period_b):
    """Addresses active in both (inclusive) day ranges."""
    _check_disjoint(period_a, period_b)
    return log.active(*period_a) & log.active(*period_b)


def epoch_label(period_a, period_b):
    """``1y-stable (-1y)`` / ``6m-stable (-6m)`` naming for a cross-epoch check."""
    gap = abs(period_a[0] - period_b[0])
    months = round(gap / 30.44)
    if months and months % 12 == 0:
        tag = f"{months // 12}y"
    elif months:
        tag = f"{months}m"
    else:
        tag = f"{gap}d"
    return f"{tag}-stable (-{tag})"


def weekly_unique_stable(log, days, n, before=7, after=7, slew_tolerance=0):
    """Union of nd-stable sets over seven consecutive reference days."""
    days = list(days)
    if len(days) != 7 or any(b - a != 1 for a, b in zip(days, days[1:])):
        raise ValueError("weekly classification needs 7 consecutive days")
    out = set()
    for d in days:
        out |= nd_stable(log, d, n, before, after, slew_tolerance)
    return out


def weekly_not_stable(log, days, n, before=7, after=7, slew_tolerance=0):
    days = list(days)
    stable = weekly_unique_stable(log, days, n, before, after, slew_tolerance)
    return log.active(days[0], days[-1]) - stable


# -- day-files ------------------------------------------------------------------


def dayfile_name(day):
    return format_day(day) + DAYFILE_SUFFIX


def dayfile_path(data_dir, day):
    return os.path.join(data_dir, dayfile_name(day))


def write_dayfile(path, arr):
    """Write a sorted, duplicate-free set of 16-byte big-endian records."""
    arr = addrarray.sort_unique(arr)
    tmp = path + ".tmp"
    with open(tmp, "wb") as f:
        f.write(addrarray.to_packed(arr))
    os.replace(tmp, path)
    return arr


def read_dayfile(path):
    with open(path, "rb") as f:
        arr = addrarray.from_packed(f.read())
    if not addrarray.is_sorted_unique(arr):
        raise ValueError(f"{path}: records are not strictly ascending")
    return arr


def available_days(data_dir):
    days = []
    for name in os.listdir(data_dir):
        m = re.fullmatch(r"(\d{8})" + re.escape(DAYFILE_SUFFIX), name)
        if m:
            days.append(parse_day(m.group(1)))
    return sorted(days)


def load_log(data_dir, required=(), optional=(), prefix_len=128):
    """Build an ObservationLog from day-files.  Missing required days raise
    FileNotFoundError; missing optional days are skipped."""
    out = ObservationLog(prefix_len)
    for day in sorted(set(required) | set(optional)):
        path = dayfile_path(data_dir, day)
        if not os.path.exists(path):
            if day in required:
                raise FileNotFoundError(path)
            logger.info("no day-file for %s, treating as no observations", format_day(day))
            continue
        out.record_day(day, addrarray.to_ints(read_dayfile(path)))
    return out
