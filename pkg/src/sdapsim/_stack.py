"""Helpers shared by the TX and RX entities for the outer IP/transport pair."""

from dataclasses import replace

from .codec import SUPPORTED_PROTOCOLS, Ipv4Header, TcpHeader, UdpHeader
from .errors import MalformedStack, UnsupportedProtocol

_TRANSPORT = {17: UdpHeader, 6: TcpHeader}


def split_outer(packet):
    """Pop ``IP`` and transport off ``packet``; returns ``(ip, transport, rest)``."""
    chunks = packet.chunks
    if not chunks or not isinstance(chunks[0], Ipv4Header):
        raise MalformedStack(f"outermost chunk must be IPv4, got {type(chunks[0]).__name__ if chunks else 'nothing'}")
    ip = chunks[0]
    if ip.protocol not in SUPPORTED_PROTOCOLS:
        raise UnsupportedProtocol(ip.protocol)
    if len(chunks) < 2 or not isinstance(chunks[1], _TRANSPORT[ip.protocol]):
        raise MalformedStack(f"IP protocol {ip.protocol} requires a {_TRANSPORT[ip.protocol].__name__} next")
    ip, rest = packet.pop_front()
    transport, rest = rest.pop_front()
    return ip, transport, rest


def adjust_lengths(ip, transport, delta):
    """Shift IP total_length (and UDP length) by ``delta`` bytes. Raises ValueError on range violations."""
    if isinstance(transport, UdpHeader):
        transport = replace(transport, length=transport.length + delta)
    ip = replace(ip, total_length=ip.total_length + delta)
    return ip, transport
