"""Brute-force reference implementations, deliberately naive and independent of
the package code paths they check."""

from collections import Counter, defaultdict


def n_p_bruteforce(addresses):
    """Count distinct prefixes at every length by shifting."""
    addrs = {int(a) for a in addresses}
    return [len({a >> (128 - p) for a in addrs}) if p else 1 for p in range(129)]


def densify_bruteforce(addresses, n, p):
    """Least-specific disjoint prefixes of length p..127 holding >= n addresses.

    Enumerates every candidate prefix at every length, then drops those with a
    qualifying ancestor in range.
    """
    addrs = {int(a) for a in addresses}
    qualifying = set()
    for length in range(p, 128):
        shift = 128 - length
        for key, c in Counter(a >> shift for a in addrs).items():
            if c >= n:
                qualifying.add((key << shift, length))
    out = {}
    for base, length in qualifying:
        has_ancestor = any(((base >> (128 - l)) << (128 - l), l) in qualifying for l in range(p, length))
        if not has_ancestor:
            shift = 128 - length
            out[(base, length)] = sum(1 for a in addrs if a >> shift == base >> shift)
    return out


def eui64_from_mac_text(mac, prefix64_hex):
    """String-level EUI-64 construction: split the MAC, insert ff:fe, flip 0x02
    in the first octet, append to the /64 written as 16 hex chars."""
    parts = mac.split(":")
    octets = parts[:3] + ["ff", "fe"] + parts[3:]
    octets[0] = "%02x" % (int(octets[0], 16) ^ 0x02)
    return int(prefix64_hex + "".join(octets), 16)


def group_counts(addresses, p):
    """Population per /p via a dict of lists."""
    groups = defaultdict(list)
    for a in {int(a) for a in addresses}:
        groups[a >> (128 - p) if p else 0].append(a)
    return sorted(len(v) for v in groups.values())


def nd_stable_bruteforce(day_sets, ref, n, before=7, after=7):
    """Check every pair of window days literally."""
    window = [d for d in range(ref - before, ref + after + 1) if d in day_sets]
    out = set()
    for a in day_sets.get(ref, ()):
        seen = [d for d in window if a in day_sets[d]]
        if any(d2 - d1 >= n for d1 in seen for d2 in seen if d1 < d2):
            out.add(a)
    return out
