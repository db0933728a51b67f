"""Layered packet: a stack of header chunks over a payload, plus out-of-band tags.

Packets behave as values. ``push_front``/``pop_front``/``with_tag`` return new
packets and never mutate the receiver.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace

from .codec import (
    IPV4_HEADER_SIZE,
    Ipv4Header,
    SdapHeader,
    TcpHeader,
    UdpHeader,
    check_qfi,
    decode_ip,
    decode_sdap,
    decode_transport,
)
from .errors import EmptyPacket


@dataclass(frozen=True)
class QosFlowTag:
    """Requested QoS flow of a packet, attached by the application."""

    qfi: int

    def __post_init__(self):
        check_qfi(self.qfi)


@dataclass
class Packet:
    chunks: tuple = ()
    payload: bytes = b""
    tags: dict = field(default_factory=dict)
    # simulator metadata, never serialized
    created_at: int = 0
    flow_id: int = -1
    seq: int = -1

    def __post_init__(self):
        self.chunks = tuple(self.chunks)
        self.payload = bytes(self.payload)
        self.tags = dict(self.tags)

    def __len__(self):
        return sum(c.size for c in self.chunks) + len(self.payload)

    @property
    def front(self):
        return self.chunks[0] if self.chunks else None

    def push_front(self, chunk):
        return replace(self, chunks=(chunk,) + self.chunks)

    def pop_front(self):
        if not self.chunks:
            raise EmptyPacket("no header chunks left to pop")
        return self.chunks[0], replace(self, chunks=self.chunks[1:])

    def with_tag(self, tag):
        tags = dict(self.tags)
        tags[type(tag)] = tag
        return replace(self, tags=tags)

    def get_tag(self, kind):
        return self.tags.get(kind)

    def serialize(self):
        return b"".join(c.encode() for c in self.chunks) + self.payload


def push_front(packet, chunk):
    return packet.push_front(chunk)


def pop_front(packet):
    return packet.pop_front()


def set_tag(packet, tag):
    return packet.with_tag(tag)


def get_tag(packet, kind):
    return packet.get_tag(kind)


def serialize(packet):
    return packet.serialize()


def deserialize(data, sdap=False):
    """Parse ``IP | transport [| SDAP] | payload`` from raw bytes.

    With ``sdap=False`` anything after the transport header, an SDAP byte
    included, stays in the payload. Trailing bytes beyond the IP total_length
    are kept in the payload too; lengths are not cross-checked here.
    """
    ip = decode_ip(data)
    rest = data[IPV4_HEADER_SIZE:]
    transport = decode_transport(ip.protocol, rest)
    rest = rest[transport.size:]
    chunks = [ip, transport]
    if sdap:
        header = decode_sdap(rest)
        chunks.append(header)
        rest = rest[header.size:]
    return Packet(chunks=chunks, payload=rest)


def payload_fill(flow_id, seq, size):
    """Deterministic pseudorandom payload for packet ``seq`` of ``flow_id``."""
    return random.Random(f"payload/{flow_id}/{seq}").randbytes(size)


def make_packet(payload, transport="udp", src_port=1000, dst_port=2000,
                src_addr=0x0A000001, dst_addr=0x0A000002, **meta):
    """Build an ``IP | transport | payload`` packet with consistent length fields."""
    if transport == "udp":
        l4 = UdpHeader(src_port, dst_port, length=8 + len(payload))
    elif transport == "tcp":
        l4 = TcpHeader(src_port, dst_port)
    else:
        raise ValueError(f"unknown transport {transport!r}")
    ip = Ipv4Header(
        protocol=l4.protocol,
        total_length=IPV4_HEADER_SIZE + l4.size + len(payload),
        src_addr=src_addr,
        dst_addr=dst_addr,
    )
    return Packet(chunks=(ip, l4), payload=payload, **meta)


__all__ = [
    "Packet",
    "QosFlowTag",
    "SdapHeader",
    "deserialize",
    "get_tag",
    "make_packet",
    "payload_fill",
    "pop_front",
    "push_front",
    "serialize",
    "set_tag",
]
