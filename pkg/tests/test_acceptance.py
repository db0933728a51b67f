"""Exit criteria for the build. Each test is one criterion at its stated tolerance."""

import random
import time
from dataclasses import replace

from conftest import GOLDEN, TABLE1_MAPPING
from sdapsim.cli import main
from sdapsim.codec import DC, SdapHeader, decode_sdap, encode_sdap
from sdapsim.config import FlowConfig, LinkConfig, ScenarioConfig, load_scenario
from sdapsim.mapping import QfiDrbTable, parse_mapping
from sdapsim.packet import QosFlowTag, deserialize, make_packet
from sdapsim.rx import RxEntity
from sdapsim.sim import compare_sdap, run_scenario
from sdapsim.tx import TxEntity
from sdapsim.validation import PASSED, run_checklist


def _corpus(n=10_000, seed=20240518):
    rng = random.Random(seed)
    for _ in range(n):
        table = QfiDrbTable({q: rng.randrange(8) for q in rng.sample(range(64), rng.randrange(65))})
        pkt = make_packet(
            rng.randbytes(rng.randint(1, 1400)),
            transport=rng.choice(("udp", "tcp")),
            src_port=rng.randrange(65536),
            dst_port=rng.randrange(65536),
        )
        if rng.random() < 0.9:
            pkt = pkt.with_tag(QosFlowTag(rng.randrange(64)))
        yield table, pkt


def test_c1_table1_checklist_all_passed():
    start = time.perf_counter()
    config = load_scenario("table1_scenario.ini")
    _, results = run_checklist(config)
    elapsed = time.perf_counter() - start
    assert len(results) == 7
    assert [r.status for r in results] == [PASSED] * 7, [(r.name, r.status, r.detail) for r in results]
    assert elapsed < 5.0


def test_c2_exact_traffic_accounting():
    config = load_scenario("table1_scenario.ini")
    assert [f.qfi for f in config.flows] == [1, 5, 9, 63]
    assert config.qfi_to_drb_mapping == TABLE1_MAPPING
    assert all(f.packet_rate == 50 and f.payload_size == 160 for f in config.flows)
    assert config.duration == 20
    report = run_scenario(config)
    for f in report.flows:
        assert (f.sent, f.lost, f.drb_mismatches, f.integrity_failures) == (1000, 0, 0, 0)


def test_c3_codec_exhaustive_roundtrip():
    for dc in DC:
        for rqi in (False, True):
            for qfi in range(64):
                h = SdapHeader(dc, rqi, qfi)
                assert decode_sdap(encode_sdap(h)) == h
    for b in range(256):
        assert encode_sdap(decode_sdap(bytes([b]))) == bytes([b])


def test_c4_tx_rx_inverse_10k():
    failures = 0
    count = 0
    for table, pkt in _corpus():
        count += 1
        wire, txr = TxEntity(table).process(pkt)
        out, rxr = RxEntity(table).process(deserialize(wire.serialize()))
        if out.serialize() != pkt.serialize() or (rxr.qfi, rxr.drb) != (txr.qfi, txr.drb):
            failures += 1
    assert count >= 10_000
    assert failures == 0


def test_c5_length_bookkeeping():
    for table, pkt in _corpus():
        wire, _ = TxEntity(table).process(pkt)
        out, _ = RxEntity(table).process(wire)
        assert len(wire.serialize()) == len(pkt.serialize()) + 1
        assert len(out.serialize()) == len(wire.serialize()) - 1
        ip0, l40 = pkt.chunks
        ip1, l41, _ = wire.chunks
        ip2, l42 = out.chunks
        assert ip1.total_length == ip0.total_length + 1
        assert ip2.total_length == ip1.total_length - 1
        if ip0.protocol == 17:
            assert l41.length == l40.length + 1
            assert l42.length == l41.length - 1
        else:
            assert l41 == l40 == l42


def test_c6_default_paths():
    table = parse_mapping(TABLE1_MAPPING)
    out, rec = TxEntity(table).process(make_packet(bytes(160)))
    assert out.chunks[2].qfi == 0 and rec.qfi == 0 and not rec.had_tag
    assert table.lookup(7) == 0
    _, rec7 = TxEntity(table).process(make_packet(bytes(160)).with_tag(QosFlowTag(7)))
    assert rec7.drb == 0


def test_c7_differentiation_ten_seeds():
    start = time.perf_counter()
    config = load_scenario("table2_compare.ini")
    load = sum(f.packet_rate * (20 + 8 + 1 + f.payload_size) for f in config.flows) / config.link.service_rate
    assert load >= 0.8
    assert all(f.jitter > 0 for f in config.flows)
    for seed, with_sdap, without in compare_sdap(config, range(1, 11)):
        lower = 0
        for a, b in zip(with_sdap.flows, without.flows):
            assert a.std_latency <= b.std_latency, (seed, a.qfi, a.std_latency, b.std_latency)
            lower += a.std_latency < b.std_latency
        assert lower >= 1, seed
    assert time.perf_counter() - start < 30.0


def test_c8_log_golden_single_packet():
    config = ScenarioConfig(
        duration=0.02,
        flows=[FlowConfig(flow_id=0, qfi=5, packet_rate=50, payload_size=160)],
        link=LinkConfig(service_rate=1_000_000, propagation_delay=0.001),
        qfi_to_drb_mapping=TABLE1_MAPPING,
    )
    report = run_scenario(config)
    assert report.event_log_text() == (GOLDEN / "single_udp_packet.log").read_text()
    messages = [line.split(" ", 1)[1] for line in report.event_log]
    assert messages == [
        "[TX] QFI = 5 extracted from QosTagReq;",
        "[TX] Inserted SDAP header with QFI = 5;",
        "[TX] Selected DRB = 1 for QFI = 5.",
        "[RX] Extracted QFI = 5",
        "[RX] Mapped DRB = 1",
    ]


def test_c9_cli_determinism(tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        assert main(["run", "--scenario", "table2_compare.ini", "--seed", "4", "--out", str(out)]) == 0
        outs.append(out)
    a, b = outs
    assert (a / "events.log").read_bytes() == (b / "events.log").read_bytes()
    assert (a / "stats.csv").read_bytes() == (b / "stats.csv").read_bytes()
    assert (a / "events.log").stat().st_size > 0
