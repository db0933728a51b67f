"""QFI-to-DRB mapping table parsed from a ``qfiToDrbMapping`` string.

Grammar: ``qfi:drb`` pairs separated by ``;``, e.g. ``"1:0;5:1;9:2;63:3"``.
Whitespace around tokens is ignored and empty segments (``"1:0;;5:1;"``) are
skipped. QFIs absent from the table resolve to DRB 0.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from types import MappingProxyType

from .codec import QFI_MAX, check_qfi
from .errors import MalformedMapping

DEFAULT_DRB = 0

_INT = re.compile(r"[+-]?\d+")


@dataclass(frozen=True)
class QfiDrbTable:
    entries: MappingProxyType = MappingProxyType({})

    def __post_init__(self):
        entries = dict(self.entries)
        for qfi, drb in entries.items():
            check_qfi(qfi)
            if drb < 0:
                raise ValueError(f"DRB id {drb} is negative")
        object.__setattr__(self, "entries", MappingProxyType(dict(sorted(entries.items()))))

    @property
    def default_drb(self):
        return DEFAULT_DRB

    def lookup(self, qfi):
        check_qfi(qfi)
        return self.entries.get(qfi, DEFAULT_DRB)

    def drbs(self):
        return sorted(set(self.entries.values()) | {DEFAULT_DRB})

    def render(self):
        return ";".join(f"{q}:{d}" for q, d in self.entries.items())

    def __len__(self):
        return len(self.entries)

    def __eq__(self, other):
        if not isinstance(other, QfiDrbTable):
            return NotImplemented
        return dict(self.entries) == dict(other.entries)

    def __hash__(self):
        return hash(tuple(self.entries.items()))

    def __str__(self):
        return self.render()


def _parse_int(token, pos, what):
    stripped = token.strip()
    if not _INT.fullmatch(stripped):
        raise MalformedMapping(pos + (len(token) - len(token.lstrip())), f"{what} {stripped!r} is not an integer")
    return int(stripped)


def parse_mapping(config_string):
    entries = {}
    pos = 0
    for segment in config_string.split(";"):
        start = pos
        pos += len(segment) + 1
        if not segment.strip():
            continue
        if segment.count(":") != 1:
            raise MalformedMapping(start, f"expected 'qfi:drb', got {segment.strip()!r}")
        qfi_tok, drb_tok = segment.split(":")
        qfi = _parse_int(qfi_tok, start, "qfi")
        drb = _parse_int(drb_tok, start + len(qfi_tok) + 1, "drb")
        if qfi < 0 or qfi > QFI_MAX:
            raise MalformedMapping(start, f"qfi {qfi} outside [0, {QFI_MAX}]")
        if drb < 0:
            raise MalformedMapping(start, f"drb {drb} is negative")
        if qfi in entries:
            raise MalformedMapping(start, f"duplicate qfi {qfi}")
        entries[qfi] = drb
    return QfiDrbTable(entries)


def lookup(table, qfi):
    return table.lookup(qfi)
