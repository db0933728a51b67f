"""Transmit-side SDAP entity."""

from __future__ import annotations

from dataclasses import dataclass

from ._stack import adjust_lengths, split_outer
from .codec import DC, SdapHeader
from .errors import MalformedStack
from .packet import QosFlowTag

DEFAULT_QFI = 0


@dataclass(frozen=True)
class TxRecord:
    qfi: int
    drb: int
    had_tag: bool
    timestamp: int = 0


def emit_tx_logs(record):
    if record.had_tag:
        first = f"[TX] QFI = {record.qfi} extracted from QosTagReq;"
    else:
        first = f"[TX] QFI = {record.qfi} assumed (no QosTagReq);"
    return [
        first,
        f"[TX] Inserted SDAP header with QFI = {record.qfi};",
        f"[TX] Selected DRB = {record.drb} for QFI = {record.qfi}.",
    ]


class TxEntity:
    """Inserts the SDAP header behind the IP and transport headers.

    ``log`` is an optional ``callable(timestamp, line)`` receiving the audit lines.
    """

    def __init__(self, table, log=None):
        self.table = table
        self.log = log

    def process(self, packet, now=0):
        ip, transport, rest = split_outer(packet)

        tag = packet.get_tag(QosFlowTag)
        qfi = tag.qfi if tag is not None else DEFAULT_QFI

        rest = rest.push_front(SdapHeader(dc=DC.DATA, rqi=False, qfi=qfi))
        try:
            ip, transport = adjust_lengths(ip, transport, +1)
        except ValueError as exc:
            raise MalformedStack(f"length field overflow: {exc}") from exc
        out = rest.push_front(transport).push_front(ip)

        record = TxRecord(qfi=qfi, drb=self.table.lookup(qfi), had_tag=tag is not None, timestamp=now)
        if self.log is not None:
            for line in emit_tx_logs(record):
                self.log(now, line)
        return out, record


def process_tx(table, packet, now=0):
    return TxEntity(table).process(packet, now)
