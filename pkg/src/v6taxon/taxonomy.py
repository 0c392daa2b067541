"""Per-address format classification: transition mechanisms and EUI-64 IIDs."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .addr_core import LOW64, Prefix, contains, parse_address

TEREDO = Prefix.parse("2001::/32")
SIXTO4 = Prefix.parse("2002::/16")
ISATAP_MARKERS = (0x00005EFE, 0x02005EFE)
EUI64_MARKER = 0xFFFE
U_BIT = 70


class FormatKind(enum.Enum):
    TEREDO = "Teredo"
    SIXTO4 = "6to4"
    ISATAP = "ISATAP"
    EUI64 = "EUI-64"
    OTHER = "Other"

    def __str__(self):
        return self.value


class NotEUI64Error(ValueError):
    pass


@dataclass(frozen=True)
class FormatClass:
    kind: FormatKind
    embedded_ipv4: Optional[int] = None
    mac: Optional[int] = None

    @property
    def eui64(self):
        """True whenever the IID has the EUI-64 layout, even if a transition
        mechanism took precedence for ``kind``."""
        return self.mac is not None


def is_eui64_iid(iid):
    return (iid >> 24) & 0xFFFF == EUI64_MARKER


def extract_mac(iid):
    """Recover the 48-bit MAC from an EUI-64 IID (u-bit flipped back, ff:fe removed)."""
    if not is_eui64_iid(iid):
        raise NotEUI64Error(f"IID {iid:016x} has no ff:fe marker")
    upper = (iid >> 40) ^ 0x020000
    lower = iid & 0xFFFFFF
    return (upper << 24) | lower


def mac_to_iid(mac):
    """Modified EUI-64 IID for a 48-bit MAC."""
    octets = bytearray(mac.to_bytes(6, "big"))
    octets[0] ^= 0x02
    return int.from_bytes(bytes(octets[:3]) + b"\xff\xfe" + bytes(octets[3:]), "big")


def u_bit(a):
    return (int(a) >> (127 - U_BIT)) & 1


def classify_format(a):
    a = int(a)
    iid = a & LOW64
    mac = extract_mac(iid) if is_eui64_iid(iid) else None
    if contains(TEREDO, a):
        # client IPv4 is stored inverted in the low 32 bits
        return FormatClass(FormatKind.TEREDO, (a & 0xFFFFFFFF) ^ 0xFFFFFFFF, mac)
    if contains(SIXTO4, a):
        return FormatClass(FormatKind.SIXTO4, (a >> 80) & 0xFFFFFFFF, mac)
    if iid >> 32 in ISATAP_MARKERS:
        return FormatClass(FormatKind.ISATAP, iid & 0xFFFFFFFF, mac)
    if mac is not None:
        return FormatClass(FormatKind.EUI64, None, mac)
    return FormatClass(FormatKind.OTHER)


def format_mac(mac):
    return ":".join(f"{b:02x}" for b in mac.to_bytes(6, "big"))


def parse_mac(text):
    parts = text.replace("-", ":").split(":")
    if len(parts) != 6 or not all(len(p) in (1, 2) for p in parts):
        raise ValueError(f"malformed MAC address: {text!r}")
    return int.from_bytes(bytes(int(p, 16) for p in parts), "big")


def format_ipv4(value):
    return ".".join(str(b) for b in value.to_bytes(4, "big"))


def classify_text(text):
    return classify_format(parse_address(text))


KIND_ORDER = (FormatKind.TEREDO, FormatKind.SIXTO4, FormatKind.ISATAP, FormatKind.EUI64, FormatKind.OTHER)


def classify_array(arr):
    """Vectorized ``classify_format(...).kind`` for an ``(N, 2)`` uint64 array.

    Returns indices into :data:`KIND_ORDER`.
    """
    hi, lo = arr[:, 0], arr[:, 1]
    conditions = [
        (hi >> np.uint64(32)) == np.uint64(0x20010000),
        (hi >> np.uint64(48)) == np.uint64(0x2002),
        np.isin(lo >> np.uint64(32), np.array(ISATAP_MARKERS, dtype=np.uint64)),
        ((lo >> np.uint64(24)) & np.uint64(0xFFFF)) == np.uint64(EUI64_MARKER),
    ]
    return np.select(conditions, [0, 1, 2, 3], default=4).astype(np.int8)
