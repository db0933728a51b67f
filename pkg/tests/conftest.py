from pathlib import Path

import pytest
from hypothesis import strategies as st

from sdapsim.mapping import QfiDrbTable
from sdapsim.packet import QosFlowTag, make_packet

GOLDEN = Path(__file__).parent / "golden"

TABLE1_MAPPING = "1:0;5:1;9:2;63:3"


@pytest.fixture
def golden():
    return GOLDEN


qfis = st.integers(0, 63)
ports = st.integers(0, 0xFFFF)
addrs = st.integers(0, 0xFFFFFFFF)

tables = st.dictionaries(qfis, st.integers(0, 7), max_size=64).map(QfiDrbTable)


@st.composite
def pipeline_packets(draw, max_payload=1400, tagged=None):
    """``IP | UDP-or-TCP | payload`` with consistent lengths, optionally tagged."""
    payload = draw(st.binary(min_size=1, max_size=max_payload))
    pkt = make_packet(
        payload,
        transport=draw(st.sampled_from(["udp", "tcp"])),
        src_port=draw(ports),
        dst_port=draw(ports),
        src_addr=draw(addrs),
        dst_addr=draw(addrs),
    )
    if tagged is None:
        tagged = draw(st.booleans())
    if tagged:
        pkt = pkt.with_tag(QosFlowTag(draw(qfis)))
    return pkt


ACCEPTANCE_LINES = {}


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        ACCEPTANCE_LINES[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in sorted(ACCEPTANCE_LINES.items()):
        terminalreporter.write_line(f"{status}  {name}")
