"""Bit-exact codecs for the SDAP header and the simplified IPv4/UDP/TCP models.

SDAP data PDU header (one byte)::

     7   6   5   4   3   2   1   0
   +---+---+---+---+---+---+---+---+
   |D/C|RQI|          QFI          |
   +---+---+---+---+---+---+---+---+

D/C = 1 marks a data PDU. IPv4 carries no options (IHL fixed at 5) and TCP
carries no options (data offset fixed at 5). Checksums are stored verbatim and
never validated or recomputed.
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass

from .errors import InsufficientBytes, MalformedHeader, QfiOutOfRange, UnsupportedProtocol

QFI_MAX = 63
SDAP_HEADER_SIZE = 1

PROTO_TCP = 6
PROTO_UDP = 17
SUPPORTED_PROTOCOLS = (PROTO_TCP, PROTO_UDP)

IPV4_FMT = "!BBHHHBBHII"
IPV4_HEADER_SIZE = struct.calcsize(IPV4_FMT)
_IPV4_VERSION_IHL = 0x45

UDP_FMT = "!HHHH"
UDP_HEADER_SIZE = struct.calcsize(UDP_FMT)

TCP_FMT = "!HH12sHH"
TCP_HEADER_SIZE = struct.calcsize(TCP_FMT)

_DC_BIT = 0x80
_RQI_BIT = 0x40
_QFI_MASK = 0x3F


class DC(enum.IntEnum):
    CONTROL = 0
    DATA = 1

    def __str__(self):
        return self.name.capitalize()


def check_qfi(qfi):
    if not isinstance(qfi, int) or isinstance(qfi, bool) or not 0 <= qfi <= QFI_MAX:
        raise QfiOutOfRange(qfi)
    return qfi


def _check_u16(name, value):
    if not 0 <= value <= 0xFFFF:
        raise ValueError(f"{name}={value} does not fit in 16 bits")


@dataclass(frozen=True)
class SdapHeader:
    dc: DC = DC.DATA
    rqi: bool = False
    qfi: int = 0

    def __post_init__(self):
        check_qfi(self.qfi)
        object.__setattr__(self, "dc", DC(self.dc))
        object.__setattr__(self, "rqi", bool(self.rqi))

    @property
    def size(self):
        return SDAP_HEADER_SIZE

    def encode(self):
        return encode_sdap(self)


@dataclass(frozen=True)
class Ipv4Header:
    protocol: int
    total_length: int
    src_addr: int = 0x0A000001
    dst_addr: int = 0x0A000002
    tos: int = 0
    identification: int = 0
    flags_fragment: int = 0
    ttl: int = 64
    checksum: int = 0

    header_length = IPV4_HEADER_SIZE

    def __post_init__(self):
        if not 0 <= self.protocol <= 0xFF:
            raise ValueError(f"protocol={self.protocol} does not fit in 8 bits")
        _check_u16("total_length", self.total_length)
        if self.total_length < IPV4_HEADER_SIZE:
            raise ValueError(f"total_length={self.total_length} below header length {IPV4_HEADER_SIZE}")

    @property
    def size(self):
        return IPV4_HEADER_SIZE

    def encode(self):
        return encode_ip(self)


@dataclass(frozen=True)
class UdpHeader:
    src_port: int
    dst_port: int
    length: int
    checksum: int = 0

    protocol = PROTO_UDP

    def __post_init__(self):
        for name in ("src_port", "dst_port", "length", "checksum"):
            _check_u16(name, getattr(self, name))
        if self.length < UDP_HEADER_SIZE:
            raise ValueError(f"udp length={self.length} below header size {UDP_HEADER_SIZE}")

    @property
    def size(self):
        return UDP_HEADER_SIZE

    def encode(self):
        return encode_transport(self)


@dataclass(frozen=True)
class TcpHeader:
    """TCP header; sequence/ack/offset/flags/window ride along uninterpreted."""

    src_port: int
    dst_port: int
    fixed_fields: bytes = b"\x00" * 8 + b"\x50\x10\xff\xff"
    checksum: int = 0
    urgent: int = 0

    protocol = PROTO_TCP

    def __post_init__(self):
        for name in ("src_port", "dst_port", "checksum", "urgent"):
            _check_u16(name, getattr(self, name))
        if len(self.fixed_fields) != 12:
            raise ValueError("tcp fixed_fields must be exactly 12 bytes")

    @property
    def size(self):
        return TCP_HEADER_SIZE

    def encode(self):
        return encode_transport(self)


def encode_sdap(header):
    value = (_DC_BIT if header.dc == DC.DATA else 0) | (_RQI_BIT if header.rqi else 0) | header.qfi
    return bytes((value,))


def decode_sdap(data):
    """Decode the first byte of ``data``. Every byte value is a valid header."""
    if len(data) < SDAP_HEADER_SIZE:
        raise InsufficientBytes(SDAP_HEADER_SIZE, len(data), "SDAP header")
    b = data[0]
    return SdapHeader(
        dc=DC.DATA if b & _DC_BIT else DC.CONTROL,
        rqi=bool(b & _RQI_BIT),
        qfi=b & _QFI_MASK,
    )


def encode_ip(header):
    return struct.pack(
        IPV4_FMT,
        _IPV4_VERSION_IHL,
        header.tos,
        header.total_length,
        header.identification,
        header.flags_fragment,
        header.ttl,
        header.protocol,
        header.checksum,
        header.src_addr,
        header.dst_addr,
    )


def decode_ip(data):
    if len(data) < IPV4_HEADER_SIZE:
        raise InsufficientBytes(IPV4_HEADER_SIZE, len(data), "IPv4 header")
    (ver_ihl, tos, total_length, ident, flags_frag, ttl, proto, checksum, src, dst) = struct.unpack_from(
        IPV4_FMT, data
    )
    if ver_ihl != _IPV4_VERSION_IHL:
        raise MalformedHeader(f"IPv4 version/IHL byte 0x{ver_ihl:02x}, only 0x45 is modeled")
    try:
        return Ipv4Header(
            protocol=proto,
            total_length=total_length,
            src_addr=src,
            dst_addr=dst,
            tos=tos,
            identification=ident,
            flags_fragment=flags_frag,
            ttl=ttl,
            checksum=checksum,
        )
    except ValueError as exc:
        raise MalformedHeader(str(exc)) from exc


def encode_transport(header):
    if isinstance(header, UdpHeader):
        return struct.pack(UDP_FMT, header.src_port, header.dst_port, header.length, header.checksum)
    if isinstance(header, TcpHeader):
        return struct.pack(
            TCP_FMT, header.src_port, header.dst_port, header.fixed_fields, header.checksum, header.urgent
        )
    raise TypeError(f"not a transport header: {header!r}")


def decode_transport(protocol, data):
    """Decode the transport header selected by the IP ``protocol`` number."""
    if protocol == PROTO_UDP:
        if len(data) < UDP_HEADER_SIZE:
            raise InsufficientBytes(UDP_HEADER_SIZE, len(data), "UDP header")
        src, dst, length, checksum = struct.unpack_from(UDP_FMT, data)
        try:
            return UdpHeader(src, dst, length, checksum)
        except ValueError as exc:
            raise MalformedHeader(str(exc)) from exc
    if protocol == PROTO_TCP:
        if len(data) < TCP_HEADER_SIZE:
            raise InsufficientBytes(TCP_HEADER_SIZE, len(data), "TCP header")
        src, dst, fixed, checksum, urgent = struct.unpack_from(TCP_FMT, data)
        return TcpHeader(src, dst, fixed, checksum, urgent)
    raise UnsupportedProtocol(protocol)
