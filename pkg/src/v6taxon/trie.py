"""Counting Patricia trie over 128-bit keys, active aggregate counts, and
dense-prefix discovery."""

from __future__ import annotations

import copy
import re
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import addrarray
from .addr_core import BITS, Address, Prefix, format_address, format_fixed, mask_of, prefix_of


class EmptyAddressSetError(ValueError):
    pass


@dataclass(frozen=True)
class DensityClass:
    """``n@/p``: prefixes of length ``p`` holding at least ``n`` active addresses."""

    n: int
    p: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"density class needs n >= 1, got {self.n}")
        if not 0 <= self.p <= BITS - 1:
            raise ValueError(f"density class prefix length must be 0..127, got {self.p}")

    @classmethod
    def parse(cls, text):
        m = re.fullmatch(r"\s*(\d+)\s*@\s*/?(\d+)\s*", text)
        if not m:
            raise ValueError(f"malformed density class {text!r}, expected e.g. 2@/112")
        return cls(int(m.group(1)), int(m.group(2)))

    @property
    def span(self):
        return 1 << (BITS - self.p)

    def __str__(self):
        return f"{self.n}@/{self.p}"


@dataclass(frozen=True, order=True)
class DensePrefix:
    prefix: Prefix
    count: int
    weight: int = field(default=0, compare=False)


@dataclass
class DensePrefixReport:
    density: DensityClass
    entries: list

    def __post_init__(self):
        self.entries = sorted(self.entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def as_dict(self):
        return {e.prefix: e.count for e in self.entries}

    @property
    def address_count(self):
        return sum(e.count for e in self.entries)

    def lines(self):
        return [f"{e.prefix} {e.count}" for e in self.entries]

    def csv_rows(self):
        rows = []
        for e in self.entries:
            span = e.prefix.span
            rows.append((str(e.prefix.base), e.prefix.length, e.count, span, f"{e.count / span:.10f}"))
        return rows


@dataclass(frozen=True)
class AggregateCounts:
    """Active aggregate counts: ``n[p]`` distinct /p prefixes cover the set."""

    n: tuple

    def __post_init__(self):
        if len(self.n) != BITS + 1:
            raise ValueError("aggregate counts need 129 entries (p = 0..128)")

    @property
    def total(self):
        return self.n[BITS]

    def __getitem__(self, p):
        return self.n[p]


def _counts_from_branch_lengths(lengths):
    # a branch at length L adds one more covering prefix for every p > L
    hist = np.bincount(np.asarray(lengths, dtype=np.int64), minlength=BITS + 1)
    n = 1 + np.concatenate(([0], np.cumsum(hist)[:BITS]))
    return AggregateCounts(tuple(int(x) for x in n))


def aggregate_counts(addresses):
    """n_p for p = 0..128 over a non-empty set of addresses.

    Accepts an iterable of addresses or a sorted/unsorted ``(N, 2)`` uint64
    array.  Each adjacent pair in sorted order diverges at exactly one trie
    branch, so the common-prefix lengths give every n_p at once.
    """
    if isinstance(addresses, np.ndarray):
        arr = addresses if addrarray.is_sorted_unique(addresses) else addrarray.sort_unique(addresses)
    else:
        arr = addrarray.sort_unique(addrarray.from_ints(addresses))
    if len(arr) == 0:
        raise EmptyAddressSetError("aggregate counts are undefined for an empty address set")
    return _counts_from_branch_lengths(addrarray.adjacent_common_prefix(arr))


class Node:
    __slots__ = ("base", "length", "count", "distinct", "children")

    def __init__(self, base, length, count=0, distinct=0):
        self.base = base
        self.length = length
        self.count = count
        self.distinct = distinct
        self.children = [None, None]

    @property
    def prefix(self):
        return Prefix(Address(self.base), self.length)

    def is_leaf(self):
        return self.children[0] is None and self.children[1] is None

    def __repr__(self):
        return f"<Node {format_address(self.base)}/{self.length} count={self.count} distinct={self.distinct}>"


def _bit(value, i):
    return (value >> (BITS - 1 - i)) & 1


def _common_prefix(a, b):
    x = a ^ b
    return BITS if x == 0 else BITS - x.bit_length()


class CountingTrie:
    """Binary radix trie keyed by /128 addresses with per-node counts.

    Interior nodes are created only at branch points.  ``count`` is hit
    weight, ``distinct`` the number of distinct addresses held directly at
    the node (leaves hold one; aggregated nodes hold what they absorbed).
    """

    def __init__(self, addresses=()):
        self.root = Node(0, 0)
        self.frozen = False
        for a in addresses:
            self.insert(a)

    def insert(self, a, weight=1):
        if self.frozen:
            raise RuntimeError("trie is frozen")
        if weight < 1:
            raise ValueError(f"weight must be positive, got {weight}")
        key = int(Address(a))
        node = self.root
        while True:
            if node.length == BITS:
                node.count += weight
                return self
            b = _bit(key, node.length)
            child = node.children[b]
            if child is None:
                node.children[b] = Node(key, BITS, weight, 1)
                return self
            cpl = _common_prefix(key, child.base)
            if cpl >= child.length:
                node = child
                continue
            branch = Node(key & mask_of(cpl), cpl)
            branch.children[_bit(child.base, cpl)] = child
            branch.children[_bit(key, cpl)] = Node(key, BITS, weight, 1)
            node.children[b] = branch
            return self

    def freeze(self):
        self.frozen = True
        return self

    def copy(self):
        dup = copy.deepcopy(self)
        dup.frozen = False
        return dup

    def nodes(self):
        """Pre-order (which is also address order) walk yielding (node, parent)."""
        stack = [(self.root, None)]
        while stack:
            node, parent = stack.pop()
            yield node, parent
            for child in reversed(node.children):
                if child is not None:
                    stack.append((child, node))

    def leaves(self):
        return [n for n, _ in self.nodes() if n.is_leaf() and (n.distinct or n.count)]

    @property
    def total_weight(self):
        return sum(n.count for n, _ in self.nodes())

    @property
    def total_distinct(self):
        return sum(n.distinct for n, _ in self.nodes())

    def __len__(self):
        return self.total_distinct

    def aggregate_counts(self):
        branches = [n.length for n, _ in self.nodes() if n.children[0] is not None and n.children[1] is not None]
        if self.total_distinct == 0:
            raise EmptyAddressSetError("aggregate counts are undefined for an empty trie")
        return _counts_from_branch_lengths(branches)

    def aggregate(self, density):
        """Post-order pass folding children into every node of length >= p
        whose subtree holds at least n distinct addresses.  Mutates the trie."""
        if self.frozen:
            raise RuntimeError("trie is frozen")

        def visit(node):
            weight, distinct = node.count, node.distinct
            for child in node.children:
                if child is not None:
                    w, d = visit(child)
                    weight += w
                    distinct += d
            if not node.is_leaf() and node.length >= density.p and distinct >= density.n:
                node.count, node.distinct = weight, distinct
                node.children = [None, None]
            return weight, distinct

        visit(self.root)
        return self

    def dense_prefixes(self, density):
        """In-order report of nodes holding at least n addresses, each widened
        to the least-specific prefix of length >= p that holds the same set."""
        entries = []
        for node, parent in self.nodes():
            if node.distinct < density.n or node.length < density.p:
                continue
            parent_len = parent.length if parent is not None else -1
            length = max(density.p, parent_len + 1)
            entries.append(DensePrefix(prefix_of(node.base, length), node.distinct, node.count))
        return DensePrefixReport(density, entries)

    def densify(self, density):
        """Least-specific, non-overlapping dense prefixes.  Leaves ``self``
        untouched; the aggregation runs on a copy."""
        return self.copy().aggregate(density).dense_prefixes(density)


def densify(addresses, density):
    return CountingTrie(addresses).densify(density)


def dense_fixed_length(addresses, density):
    """Length-p prefixes containing at least n distinct addresses."""
    distinct = set(int(a) for a in addresses)
    p = density.p
    if p % 4 == 0:
        # sort | cut -c1-p/4 | uniq -c over the fixed-width hex form
        groups = Counter(format_fixed(a)[: p // 4] for a in sorted(distinct))
        hits = {int(h.ljust(32, "0"), 16): c for h, c in groups.items()}
    else:
        hits = Counter(a & mask_of(p) for a in distinct)
    entries = [DensePrefix(Prefix(Address(base), p), c) for base, c in hits.items() if c >= density.n]
    return DensePrefixReport(density, entries)


def dense_fixed_length_array(arr, density):
    """Array version of :func:`dense_fixed_length` for large sorted sets."""
    arr = arr if addrarray.is_sorted_unique(arr) else addrarray.sort_unique(arr)
    if len(arr) == 0:
        return DensePrefixReport(density, [])
    masked = addrarray.mask(arr, density.p)
    starts = np.ones(len(masked), dtype=bool)
    starts[1:] = addrarray.adjacent_common_prefix(arr) < density.p
    idx = np.flatnonzero(starts)
    sizes = np.diff(np.append(idx, len(masked)))
    keep = sizes >= density.n
    bases = addrarray.to_ints(masked[idx[keep]])
    return DensePrefixReport(
        density, [DensePrefix(Prefix(Address(b), density.p), int(c)) for b, c in zip(bases, sizes[keep])]
    )
