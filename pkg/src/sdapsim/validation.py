"""Seven-point SDAP functional checklist evaluated over a real scenario run.

Each checkpoint combines the event log of the run with the per-packet
counters the simulator gathered. The expected DRB for every QFI is derived
from a fresh parse of the scenario's mapping string, independent of the
table the entities used.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .mapping import parse_mapping
from .sim import run_scenario

PASSED = "Passed"
FAILED = "Failed"
SKIPPED = "Skipped (no traffic)"

CHECKPOINTS = (
    "QFI extraction from QosTagReq tag",
    "SDAP header insertion (QFI, D/C, RQI fields)",
    "QFI-to-DRB logical mapping",
    "SDAP header removal",
    "QFI extraction from SDAP header",
    "DRB mapping verification",
    "End-to-end packet integrity",
)

_LINE = re.compile(r"^\d+\.\d{9} (?P<msg>.*)$")
_TX_EXTRACT = re.compile(r"^\[TX\] QFI = (\d+) extracted from QosTagReq;$")
_TX_INSERT = re.compile(r"^\[TX\] Inserted SDAP header with QFI = (\d+);$")
_TX_SELECT = re.compile(r"^\[TX\] Selected DRB = (\d+) for QFI = (\d+)\.$")
_RX_EXTRACT = re.compile(r"^\[RX\] Extracted QFI = (\d+)$")
_RX_MAPPED = re.compile(r"^\[RX\] Mapped DRB = (\d+)$")


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""

    @property
    def passed(self):
        return self.status == PASSED


def _messages(event_log):
    out = []
    for line in event_log:
        m = _LINE.match(line)
        out.append(m.group("msg") if m else line)
    return out


def _matches(pattern, messages):
    return [m.groups() for m in map(pattern.match, messages) if m]


def evaluate(report):
    """Return one ``CheckResult`` per checkpoint, in checklist order."""
    cfg = report.config
    sent = sum(f.sent for f in report.flows)
    if sent == 0:
        return [CheckResult(name, SKIPPED) for name in CHECKPOINTS]

    c = report.checks
    expected = parse_mapping(cfg.qfi_to_drb_mapping)
    flow_qfis = Counter()
    for f in report.flows:
        flow_qfis[f.qfi] += f.sent
    received_qfis = Counter()
    for f in report.flows:
        received_qfis[f.qfi] += f.received

    msgs = _messages(report.event_log)
    extracted = Counter(int(q) for (q,) in _matches(_TX_EXTRACT, msgs))
    inserted = Counter(int(q) for (q,) in _matches(_TX_INSERT, msgs))
    selected = _matches(_TX_SELECT, msgs)
    rx_extracted = Counter(int(q) for (q,) in _matches(_RX_EXTRACT, msgs))
    rx_mapped = [int(d) for (d,) in _matches(_RX_MAPPED, msgs)]

    results = []

    def add(name, ok, detail):
        results.append(CheckResult(name, PASSED if ok else FAILED, detail))

    add(
        CHECKPOINTS[0],
        c.tx_packets == sent and c.tx_tagged == sent and c.tx_qfi_errors == 0 and extracted == flow_qfis,
        f"{c.tx_tagged}/{sent} packets carried QosTagReq, {c.tx_qfi_errors} QFI errors",
    )
    add(
        CHECKPOINTS[1],
        c.tx_packets == sent and c.tx_header_errors == 0 and inserted == flow_qfis,
        f"{c.tx_packets - c.tx_header_errors}/{sent} headers inserted with D/C=Data, RQI=false and +1 length fields",
    )
    bad_select = sum(1 for d, q in selected if int(d) != expected.lookup(int(q)))
    add(
        CHECKPOINTS[2],
        len(selected) == sent and bad_select == 0 and c.tx_mapping_errors == 0,
        f"{len(selected)} DRB selections logged, {bad_select} disagree with qfiToDrbMapping",
    )
    add(
        CHECKPOINTS[3],
        c.rx_packets == report_received(report) and c.rx_packets > 0 and c.rx_removal_errors == 0,
        f"{c.rx_packets - c.rx_removal_errors}/{c.rx_packets} headers stripped with -1 length fields",
    )
    add(
        CHECKPOINTS[4],
        c.rx_packets > 0 and c.rx_qfi_errors == 0 and rx_extracted == received_qfis,
        f"{c.rx_packets - c.rx_qfi_errors}/{c.rx_packets} QFIs recovered from the SDAP field",
    )
    add(
        CHECKPOINTS[5],
        c.rx_packets > 0 and c.drb_mismatches == 0 and len(rx_mapped) == c.rx_packets,
        f"{c.drb_mismatches} DRB mismatches between TX selection and RX lookup",
    )
    lost = sum(f.lost for f in report.flows)
    add(
        CHECKPOINTS[6],
        lost == 0 and c.integrity_failures == 0 and report_received(report) == sent,
        f"{report_received(report)}/{sent} delivered, {lost} lost, {c.integrity_failures} corrupted",
    )
    return results


def report_received(report):
    return sum(f.received for f in report.flows)


def run_checklist(config):
    report = run_scenario(config)
    return report, evaluate(report)


def format_checklist(results):
    width = max(len(r.name) for r in results)
    lines = [f"{'Validation Checkpoint':<{width}}  Result"]
    for r in results:
        row = f"{r.name:<{width}}  {r.status}"
        if r.detail:
            row += f"  ({r.detail})"
        lines.append(row)
    return "\n".join(lines) + "\n"
