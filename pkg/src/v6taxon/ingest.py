"""Log ingestion: text address lines -> per-day binary address sets."""

from __future__ import annotations

import logging
import os
import socket
from dataclasses import dataclass, field

import numpy as np

from . import addrarray, temporal
from .addr_core import AddressParseError, parse_address
from .taxonomy import KIND_ORDER, FormatKind, classify_array

logger = logging.getLogger(__name__)

AF_INET6 = socket.AF_INET6
FILTERS = ("all", "other")


@dataclass(frozen=True)
class LogRecord:
    day: int
    address: int
    hits: int = 1

    @classmethod
    def parse(cls, line, day):
        text, _, hits = line.strip().partition(",")
        try:
            h = int(hits) if hits else 1
        except ValueError:
            raise AddressParseError(line) from None
        if h < 1:
            raise AddressParseError(line)
        return cls(day, int(parse_address(text)), h)


@dataclass
class IngestSummary:
    day: int
    lines_read: int = 0
    records_accepted: int = 0
    parse_failures: int = 0
    duplicates_merged: int = 0
    total_hits: int = 0
    tallies: dict = field(default_factory=lambda: {k: 0 for k in KIND_ORDER})
    distinct_addresses: int = 0
    persisted_addresses: int = 0
    distinct_64s: int = 0
    path: str = ""

    @property
    def addrs_per_64(self):
        return self.persisted_addresses / self.distinct_64s if self.distinct_64s else 0.0

    def as_rows(self):
        rows = [
            ("day", temporal.format_day(self.day)),
            ("lines_read", self.lines_read),
            ("records_accepted", self.records_accepted),
            ("parse_failures", self.parse_failures),
            ("duplicates_merged", self.duplicates_merged),
            ("total_hits", self.total_hits),
        ]
        rows += [(f"kind_{k.value}", self.tallies[k]) for k in KIND_ORDER]
        rows += [
            ("distinct_addresses", self.distinct_addresses),
            ("persisted_addresses", self.persisted_addresses),
            ("distinct_64s", self.distinct_64s),
            ("addrs_per_64", f"{self.addrs_per_64:.4f}"),
            ("dayfile", self.path),
        ]
        return rows


def parse_lines(lines):
    """Parse ``address`` or ``address,hits`` lines.

    Returns (array of records in input order, hit total, lines read, failures).
    Blank lines and ``#`` comments are not counted.
    """
    pton = socket.inet_pton
    packed = []
    append = packed.append
    hits_total = 0
    read = failures = 0
    for raw in lines:
        line = raw.strip()
        if not line or line[0] == "#":
            continue
        read += 1
        if "," in line:
            text, _, hits = line.partition(",")
            try:
                h = int(hits)
            except ValueError:
                h = 0
            if h < 1:
                failures += 1
                logger.debug("bad hit count: %r", raw)
                continue
        else:
            text, h = line, 1
        try:
            append(pton(AF_INET6, text.strip()))
        except (OSError, ValueError):
            failures += 1
            logger.debug("unparseable address: %r", raw)
            continue
        hits_total += h
    arr = addrarray.from_packed(b"".join(packed)) if packed else addrarray.empty()
    return arr, hits_total, read, failures


def ingest(lines, day, data_dir, kind_filter="all"):
    """Parse, classify, optionally keep only native ("Other") addresses, and
    merge the result into the day-file for ``day``."""
    if kind_filter not in FILTERS:
        raise ValueError(f"unknown filter {kind_filter!r}")
    records, hits, read, failures = parse_lines(lines)
    summary = IngestSummary(day, read, len(records), failures, total_hits=hits)

    kinds = classify_array(records)
    tally = np.bincount(kinds, minlength=len(KIND_ORDER))
    summary.tallies = {k: int(c) for k, c in zip(KIND_ORDER, tally)}

    distinct = addrarray.sort_unique(records)
    summary.distinct_addresses = len(distinct)
    summary.duplicates_merged = len(records) - len(distinct)

    if kind_filter == "other":
        keep = classify_array(distinct) == KIND_ORDER.index(FormatKind.OTHER)
        distinct = distinct[keep]

    os.makedirs(data_dir, exist_ok=True)
    path = temporal.dayfile_path(data_dir, day)
    if os.path.exists(path):
        distinct = np.concatenate([temporal.read_dayfile(path), distinct])
    persisted = temporal.write_dayfile(path, distinct)
    summary.path = path
    summary.persisted_addresses = len(persisted)
    summary.distinct_64s = addrarray.count_prefixes(persisted, 64)
    return summary


def read_days(data_dir, first, last):
    """Union of the day-files for an inclusive day range; every file must exist."""
    parts = []
    for day in range(first, last + 1):
        path = temporal.dayfile_path(data_dir, day)
        if not os.path.exists(path):
            raise FileNotFoundError(path)
        parts.append(temporal.read_dayfile(path))
    arr = np.concatenate(parts) if parts else addrarray.empty()
    return arr if len(parts) == 1 else addrarray.sort_unique(arr)
