"""Receive-side SDAP entity."""

from __future__ import annotations

from dataclasses import dataclass, replace

from ._stack import adjust_lengths, split_outer
from .codec import IPV4_HEADER_SIZE, UDP_HEADER_SIZE, SdapHeader, UdpHeader, decode_sdap
from .errors import InsufficientBytes, LengthUnderflow, MalformedStack
from .packet import QosFlowTag


@dataclass(frozen=True)
class RxRecord:
    qfi: int
    drb: int
    timestamp: int = 0


def emit_rx_logs(record):
    return [
        f"[RX] Extracted QFI = {record.qfi}",
        f"[RX] Mapped DRB = {record.drb}",
    ]


class RxEntity:
    """Strips the SDAP header and re-derives the DRB from the recovered QFI.

    The SDAP header is taken from an ``SdapHeader`` chunk when one follows the
    transport header, otherwise from the first payload byte (the case after
    the packet crossed a byte-level link).
    """

    def __init__(self, table, log=None):
        self.table = table
        self.log = log
        self.drb_mismatches = 0

    def process(self, packet, now=0, carried_drb=None):
        ip, transport, rest = split_outer(packet)

        if rest.chunks and isinstance(rest.chunks[0], SdapHeader):
            header, rest = rest.pop_front()
        elif rest.chunks:
            raise MalformedStack(f"expected SDAP header after transport, got {type(rest.chunks[0]).__name__}")
        else:
            try:
                header = decode_sdap(rest.payload)
            except InsufficientBytes as exc:
                raise MalformedStack("no SDAP header after transport header") from exc
            rest = replace(rest, payload=rest.payload[header.size:])

        if isinstance(transport, UdpHeader) and transport.length - 1 < UDP_HEADER_SIZE:
            raise LengthUnderflow(f"UDP length {transport.length} cannot lose the SDAP byte")
        if ip.total_length - 1 < IPV4_HEADER_SIZE + transport.size:
            raise LengthUnderflow(f"IP total_length {ip.total_length} cannot lose the SDAP byte")
        ip, transport = adjust_lengths(ip, transport, -1)

        out = rest.push_front(transport).push_front(ip).with_tag(QosFlowTag(header.qfi))

        record = RxRecord(qfi=header.qfi, drb=self.table.lookup(header.qfi), timestamp=now)
        if carried_drb is not None and carried_drb != record.drb:
            self.drb_mismatches += 1
        if self.log is not None:
            for line in emit_rx_logs(record):
                self.log(now, line)
        return out, record


def process_rx(table, packet, now=0):
    return RxEntity(table).process(packet, now)
