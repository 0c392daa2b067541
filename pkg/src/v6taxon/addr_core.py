"""IPv6 address and prefix values.

Addresses are plain 128-bit integers wrapped in :class:`Address`, so every
bit operation in the rest of the package works on ints directly.  Bit 0 is
the most significant bit.
"""

from __future__ import annotations

import ipaddress
import socket
from dataclasses import dataclass

BITS = 128
ALL_ONES = (1 << BITS) - 1
LOW64 = (1 << 64) - 1


class AddressParseError(ValueError):
    def __init__(self, text):
        super().__init__(f"malformed IPv6 address: {text!r}")
        self.text = text


class Address(int):
    """A 128-bit IPv6 address value."""

    __slots__ = ()

    def __new__(cls, value):
        if isinstance(value, str):
            return parse_address(value)
        value = int(value)
        if not 0 <= value <= ALL_ONES:
            raise ValueError(f"address value out of range: {value:#x}")
        return super().__new__(cls, value)

    def bit(self, i):
        return (self >> (BITS - 1 - i)) & 1

    @property
    def iid(self):
        return int(self) & LOW64

    def __str__(self):
        return format_address(self)

    def __repr__(self):
        return f"Address('{format_address(self)}')"


def parse_address(text):
    """Parse presentation-format text (full, ``::``-compressed, or with a
    dotted-quad tail).  Zone indices are rejected."""
    if not isinstance(text, str):
        raise AddressParseError(text)
    try:
        packed = socket.inet_pton(socket.AF_INET6, text.strip())
    except (OSError, ValueError):
        raise AddressParseError(text) from None
    return Address(int.from_bytes(packed, "big"))


def format_address(a):
    """Canonical lowercase compressed form (longest zero run, leftmost on tie)."""
    return ipaddress.IPv6Address(int(a)).compressed


def format_fixed(a):
    """32 lowercase hex characters, most significant nybble first."""
    return f"{int(a):032x}"


def to_bytes(a):
    return int(a).to_bytes(16, "big")


def mask_of(length):
    return (ALL_ONES << (BITS - length)) & ALL_ONES


@dataclass(frozen=True, order=True)
class Prefix:
    base: Address
    length: int

    def __post_init__(self):
        if not 0 <= self.length <= BITS:
            raise ValueError(f"prefix length out of range: {self.length}")
        if int(self.base) & ~mask_of(self.length) & ALL_ONES:
            raise ValueError(f"prefix base has bits set past /{self.length}: {self.base!r}")
        if not isinstance(self.base, Address):
            object.__setattr__(self, "base", Address(self.base))

    @classmethod
    def parse(cls, text):
        addr, _, length = text.partition("/")
        if not length.isdigit():
            raise AddressParseError(text)
        return prefix_of(parse_address(addr), int(length))

    @property
    def span(self):
        """Number of addresses covered."""
        return 1 << (BITS - self.length)

    def __contains__(self, a):
        return contains(self, a)

    def __str__(self):
        return f"{format_address(self.base)}/{self.length}"


def prefix_of(a, length):
    if not 0 <= length <= BITS:
        raise ValueError(f"prefix length out of range: {length}")
    return Prefix(Address(int(a) & mask_of(length)), length)


def contains(p, a):
    return (int(a) & mask_of(p.length)) == int(p.base)
