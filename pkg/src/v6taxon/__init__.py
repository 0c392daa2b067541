"""Temporal and spatial classification of active IPv6 addresses."""

from .addr_core import Address, AddressParseError, Prefix, contains, format_address, format_fixed, parse_address, prefix_of
from .spatial import density_report, mra_ratios, population_distribution, privacy_signature_check
from .taxonomy import FormatClass, FormatKind, classify_format, extract_mac, mac_to_iid, u_bit
from .temporal import ObservationLog, nd_stable, stable_across, weekly_unique_stable
from .trie import AggregateCounts, CountingTrie, DensityClass, aggregate_counts, dense_fixed_length, densify

__version__ = "0.1.0"
