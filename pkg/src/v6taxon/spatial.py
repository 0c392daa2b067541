"""Multi-resolution aggregate ratios, population distributions and density reports."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

import numpy as np

from . import addrarray
from .addr_core import BITS, mask_of
from .trie import AggregateCounts, DensityClass, EmptyAddressSetError, aggregate_counts, dense_fixed_length_array

RESOLUTIONS = (1, 4, 8, 16)
PLOT_RESOLUTIONS = (1, 4, 16)

__all__ = [
    "AggregateCounts",
    "MRARatioSeries",
    "PopulationDistribution",
    "DensityReportRow",
    "SignatureVerdict",
    "aggregate_counts",
    "mra_ratios",
    "population_distribution",
    "density_report",
    "privacy_signature_check",
]


@dataclass(frozen=True)
class MRARatioSeries:
    """gamma_p^k = n[p+k] / n[p] at p = 0, k, ..., 128-k, kept as exact fractions."""

    k: int
    counts: AggregateCounts
    points: tuple

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)

    def ratio(self, p):
        return dict(self.points)[p]

    def floats(self):
        return [(p, float(r)) for p, r in self.points]

    def product(self):
        return prod((r for _, r in self.points), start=Fraction(1))

    def csv_rows(self):
        return [(self.k, p, self.counts[p], self.counts[p + self.k], f"{float(r):.6f}") for p, r in self.points]


def mra_ratios(counts, k):
    if k not in RESOLUTIONS:
        raise ValueError(f"resolution k must be one of {RESOLUTIONS}, got {k}")
    if counts.n[0] == 0:
        raise EmptyAddressSetError("MRA ratios are undefined for an empty address set")
    points = tuple((p, Fraction(counts[p + k], counts[p])) for p in range(0, BITS, k))
    return MRARatioSeries(k, counts, points)


@dataclass(frozen=True)
class PopulationDistribution:
    aggregate_length: int
    counts: Counter  # population -> number of length-p prefixes with that population
    ccdf: tuple  # (x, fraction of active prefixes with population >= x), x ascending

    @property
    def prefix_count(self):
        return sum(self.counts.values())

    def populations(self):
        return sorted(self.counts.elements())

    def ccdf_at(self, x):
        total = self.prefix_count
        return Fraction(sum(c for pop, c in self.counts.items() if pop >= x), total)


def _ccdf(counts):
    total = sum(counts.values())
    out = []
    remaining = total
    for pop in sorted(counts):
        out.append((pop, Fraction(remaining, total)))
        remaining -= counts[pop]
    return tuple(out)


def population_distribution(addresses, p):
    """Group addresses by covering /p and tabulate how many hold each population."""
    if not 0 <= p <= BITS:
        raise ValueError(f"prefix length out of range: {p}")
    if isinstance(addresses, np.ndarray):
        arr = addresses if addrarray.is_sorted_unique(addresses) else addrarray.sort_unique(addresses)
        if len(arr) == 0:
            raise EmptyAddressSetError("population distribution of an empty set")
        starts = np.ones(len(arr), dtype=bool)
        starts[1:] = addrarray.adjacent_common_prefix(arr) < p
        sizes = np.diff(np.append(np.flatnonzero(starts), len(arr)))
        pops, freq = np.unique(sizes, return_counts=True)
        counts = Counter({int(a): int(b) for a, b in zip(pops, freq)})
    else:
        m = mask_of(p)
        groups = Counter(a & m for a in {int(a) for a in addresses})
        if not groups:
            raise EmptyAddressSetError("population distribution of an empty set")
        counts = Counter(groups.values())
    return PopulationDistribution(p, counts, _ccdf(counts))


@dataclass(frozen=True)
class DensityReportRow:
    density: DensityClass
    dense_prefix_count: int
    contained_address_count: int

    @property
    def possible_addresses(self):
        return self.dense_prefix_count << (BITS - self.density.p)

    @property
    def density_value(self):
        if not self.dense_prefix_count:
            return Fraction(0)
        return Fraction(self.contained_address_count, self.possible_addresses)

    def csv_row(self):
        return (
            str(self.density),
            self.dense_prefix_count,
            self.contained_address_count,
            self.possible_addresses,
            f"{float(self.density_value):.10f}",
        )


DENSITY_CSV_HEADER = ("density_class", "dense_prefixes", "addresses", "possible_addresses", "density")


def density_report(addresses, classes):
    """One fixed-length dense-prefix tally per class."""
    if isinstance(addresses, np.ndarray):
        arr = addrarray.sort_unique(addresses)
    else:
        arr = addrarray.sort_unique(addrarray.from_ints(set(int(a) for a in addresses)))
    if len(arr) == 0:
        raise EmptyAddressSetError("density report over an empty set")
    rows = []
    for c in classes:
        report = dense_fixed_length_array(arr, c)
        rows.append(DensityReportRow(c, len(report), report.address_count))
    return rows


@dataclass
class SignatureVerdict:
    consistent: bool
    failures: list = field(default_factory=list)
    ratios: dict = field(default_factory=dict)

    def __bool__(self):
        return self.consistent

    @property
    def label(self):
        return "consistent" if self.consistent else "inconsistent"


def privacy_signature_check(counts, t_high=1.8, t_low=1.1, t_flat=1.05, p_flat=96):
    """Check single-bit ratios for the RFC 4941 privacy-address shape: close to
    2 just past the /64, a dip at bit 70 (the forced u-bit), flat at 1 deep in
    the IID."""
    series = mra_ratios(counts, 1)
    g = dict(series.floats())
    failures = []
    for p in range(64, 70):
        if g[p] < t_high:
            failures.append(f"gamma_{p} = {g[p]:.4f} < {t_high}")
    if g[70] > t_low:
        failures.append(f"gamma_70 = {g[70]:.4f} > {t_low}")
    for p in range(p_flat, BITS):
        if g[p] > t_flat:
            failures.append(f"gamma_{p} = {g[p]:.4f} > {t_flat}")
    return SignatureVerdict(not failures, failures, g)
