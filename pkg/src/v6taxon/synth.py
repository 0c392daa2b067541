"""Reproducible synthetic address populations.

Each scheme returns a sorted, duplicate-free ``(N, 2)`` uint64 array; the
same seed always yields the same array.
"""

from __future__ import annotations

import socket

import numpy as np

from . import addrarray
from .addr_core import LOW64, Prefix
from .taxonomy import mac_to_iid

SCHEMES = ("privacy", "eui64", "sequential-pool", "dynamic-64-pool")

U_BIT_MASK = np.uint64(1 << 57)  # bit 70 of the address, bit 6 of the IID
DEFAULT_BASE = "2001:db8::/32"


class UnknownSchemeError(ValueError):
    pass


def _rng(seed, *extra):
    return np.random.default_rng([seed, *extra])


def _networks(rng, base, count):
    """``count`` distinct /64 network halves drawn under ``base`` (length <= 64)."""
    base = Prefix.parse(base) if isinstance(base, str) else base
    if base.length > 64:
        raise ValueError(f"base prefix must be /64 or shorter, got /{base.length}")
    free_bits = 64 - base.length
    if free_bits < 63 and count > (1 << free_bits):
        raise ValueError(f"{base} holds fewer than {count} /64s")
    hi = int(base.base) >> 64
    if free_bits == 0:
        picks = np.zeros(count, dtype=np.uint64)
    elif free_bits <= 40:
        picks = rng.choice(1 << free_bits, size=count, replace=False).astype(np.uint64)
    else:
        picks = np.unique(rng.integers(0, 1 << min(free_bits, 63), size=count * 2, dtype=np.uint64))
        picks = rng.permutation(picks)[:count]
    return np.uint64(hi) | picks


def _random_iids(rng, count):
    return rng.integers(0, LOW64, size=count, dtype=np.uint64, endpoint=True)


def _assemble(nets, iids):
    arr = np.empty((len(iids), 2), dtype=np.uint64)
    arr[:, 0] = nets
    arr[:, 1] = iids
    return addrarray.sort_unique(arr)


def privacy(prefixes=50, per_prefix=200, seed=0, base=DEFAULT_BASE):
    """Fixed /64s, pseudorandom IIDs with the u-bit cleared."""
    rng = _rng(seed)
    nets = np.repeat(_networks(rng, base, prefixes), per_prefix)
    iids = _random_iids(rng, len(nets)) & ~U_BIT_MASK
    return _assemble(nets, iids)


def eui64(prefixes=50, per_prefix=200, seed=0, base=DEFAULT_BASE, ouis=4, macs=None):
    """SLAAC EUI-64 hosts.  MACs are drawn from a few vendor OUIs unless
    ``macs`` is given, in which case every /64 gets that MAC list."""
    rng = _rng(seed)
    nets = _networks(rng, base, prefixes)
    if macs is not None:
        macs = np.asarray([int(m) for m in macs], dtype=np.uint64)
        nets = np.repeat(nets, len(macs))
        macs = np.tile(macs, prefixes)
    else:
        # universally administered unicast: low two bits of the first octet clear
        oui_pool = rng.integers(0, 1 << 24, size=ouis, dtype=np.uint64) & np.uint64(0xFCFFFF)
        nets = np.repeat(nets, per_prefix)
        oui = rng.choice(oui_pool, size=len(nets))
        nic = rng.integers(0, 1 << 24, size=len(nets), dtype=np.uint64)
        macs = (oui << np.uint64(24)) | nic
    iids = np.fromiter((mac_to_iid(int(m)) for m in macs), dtype=np.uint64, count=len(macs))
    return _assemble(nets, iids)


def sequential_pool(pools=10, per_pool=50, seed=0, base=DEFAULT_BASE):
    """DHCPv6-style pools: each /64 hands out ::1, ::2, ... in order."""
    rng = _rng(seed)
    nets = np.repeat(_networks(rng, base, pools), per_pool)
    iids = np.tile(np.arange(1, per_pool + 1, dtype=np.uint64), pools)
    return _assemble(nets, iids)


def dynamic_64_pool(hosts=100, seed=0, day=0, base="2001:db8:100::/48"):
    """A fixed IID population that is re-homed onto a fresh /64 from the pool
    every day."""
    iids = _random_iids(_rng(seed), hosts) & ~U_BIT_MASK
    nets = _networks(_rng(seed, day + (1 << 32)), base, hosts)
    return _assemble(nets, iids)


def generate(scheme, seed=0, **params):
    try:
        fn = {
            "privacy": privacy,
            "eui64": eui64,
            "sequential-pool": sequential_pool,
            "dynamic-64-pool": dynamic_64_pool,
        }[scheme]
    except KeyError:
        raise UnknownSchemeError(f"unknown synth scheme {scheme!r}; choose from {', '.join(SCHEMES)}") from None
    return fn(seed=seed, **params)


def lines(arr, chunk=1 << 16):
    """Presentation-format text, one address per line."""
    ntop = socket.inet_ntop
    af = socket.AF_INET6
    for start in range(0, len(arr), chunk):
        packed = addrarray.to_packed(arr[start : start + chunk])
        for i in range(0, len(packed), 16):
            yield ntop(af, packed[i : i + 16])
