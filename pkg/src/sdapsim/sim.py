"""Discrete-event simulation of the user plane.

CBR sources -> SDAP TX -> per-DRB queues -> bottleneck server -> propagation
delay -> SDAP RX -> per-flow statistics. The layers below SDAP are collapsed
into the queues and the server. Time is integer nanoseconds; events at equal
timestamps run in insertion order.
"""

from __future__ import annotations

import heapq
import logging
import random
import statistics
from collections import defaultdict, deque
from dataclasses import dataclass, field
from pathlib import Path

from .codec import IPV4_HEADER_SIZE, SDAP_HEADER_SIZE, TCP_HEADER_SIZE, UDP_HEADER_SIZE, DC, decode_sdap
from .config import Scheduler, Transport
from .errors import ConfigError
from .packet import QosFlowTag, deserialize, make_packet, payload_fill
from .rx import RxEntity
from .tx import TxEntity

log = logging.getLogger(__name__)

NS = 1_000_000_000

CSV_HEADER = (
    "flow_id,qfi,drb,sent,received,lost,mean_latency_ms,std_latency_ms,drb_mismatches,integrity_failures"
)


def to_ns(seconds):
    return round(seconds * NS)


def format_time(ns):
    sec, frac = divmod(ns, NS)
    return f"{sec}.{frac:09d}"


@dataclass
class FlowStats:
    flow_id: int
    qfi: int
    drb: int = 0
    sent: int = 0
    received: int = 0
    lost: int = 0
    mean_latency: float = 0.0  # seconds
    std_latency: float = 0.0  # seconds, n-1 denominator
    std_defined: bool = False
    drb_mismatches: int = 0
    integrity_failures: int = 0

    def csv_row(self):
        return (
            f"{self.flow_id},{self.qfi},{self.drb},{self.sent},{self.received},{self.lost},"
            f"{self.mean_latency * 1e3:.6f},{self.std_latency * 1e3:.6f},"
            f"{self.drb_mismatches},{self.integrity_failures}"
        )


def compute_flow_stats(samples, flow_id=0, qfi=0, drb=0, sent=None, lost=0,
                       drb_mismatches=0, integrity_failures=0):
    """Summarize latency ``samples`` (seconds or integer ns, returned in the same unit).

    With fewer than two samples the std is 0 and ``std_defined`` is False;
    with none the mean is 0 as well.
    """
    n = len(samples)
    mean = statistics.mean(samples) if n else 0
    std = statistics.stdev(samples) if n >= 2 else 0
    return FlowStats(
        flow_id=flow_id,
        qfi=qfi,
        drb=drb,
        sent=n + lost if sent is None else sent,
        received=n,
        lost=lost,
        mean_latency=float(mean),
        std_latency=float(std),
        std_defined=n >= 2,
        drb_mismatches=drb_mismatches,
        integrity_failures=integrity_failures,
    )


@dataclass
class Checks:
    """Per-packet conformance counters gathered while the scenario runs."""

    tx_packets: int = 0
    tx_tagged: int = 0
    tx_qfi_errors: int = 0
    tx_header_errors: int = 0
    tx_mapping_errors: int = 0
    rx_packets: int = 0
    rx_removal_errors: int = 0
    rx_qfi_errors: int = 0
    drb_mismatches: int = 0
    integrity_failures: int = 0


@dataclass
class Delivery:
    time: int
    flow_id: int
    seq: int
    drb: int
    enqueue_order: int


@dataclass
class ScenarioReport:
    config: object
    flows: list
    event_log: list
    checks: Checks
    deliveries: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    offered_load: float = 0.0  # bytes/s
    log_path: Path | None = None

    def flow(self, flow_id):
        for f in self.flows:
            if f.flow_id == flow_id:
                return f
        raise KeyError(flow_id)

    def event_log_text(self):
        return "".join(line + "\n" for line in self.event_log)

    def to_csv(self):
        return CSV_HEADER + "\n" + "".join(f.csv_row() + "\n" for f in self.flows)

    def summary(self):
        cfg = self.config
        lines = [
            f"scenario: {cfg.name or '(unnamed)'}",
            f"duration: {cfg.duration:g} s  seed: {cfg.seed}  sdap_enabled: {str(cfg.sdap_enabled).lower()}",
            f"qfiToDrbMapping: {cfg.qfi_to_drb_mapping or '(empty)'}",
            f"link: {cfg.link.service_rate:g} B/s  scheduler: {cfg.link.scheduler.value}  "
            f"propagation: {cfg.link.propagation_delay * 1e3:g} ms  "
            f"offered load: {self.offered_load:.1f} B/s ({self.offered_load / cfg.link.service_rate:.1%})",
        ]
        for w in self.warnings:
            lines.append(f"warning: {w}")
        lines.append("")
        lines.append(f"{'flow':>4} {'qfi':>3} {'drb':>3} {'sent':>6} {'recv':>6} {'lost':>5} "
                     f"{'mean ms':>9} {'std ms':>9}")
        for f in self.flows:
            lines.append(
                f"{f.flow_id:>4} {f.qfi:>3} {f.drb:>3} {f.sent:>6} {f.received:>6} {f.lost:>5} "
                f"{f.mean_latency * 1e3:>9.3f} {f.std_latency * 1e3:>9.3f}"
            )
        return "\n".join(lines) + "\n"

    def write(self, out_dir):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        self.log_path = out / "events.log"
        self.log_path.write_text(self.event_log_text())
        (out / "stats.csv").write_text(self.to_csv())
        (out / "summary.txt").write_text(self.summary())
        return self.log_path


def _wire_size(flow, sdap):
    l4 = UDP_HEADER_SIZE if flow.transport is Transport.UDP else TCP_HEADER_SIZE
    return IPV4_HEADER_SIZE + l4 + (SDAP_HEADER_SIZE if sdap else 0) + flow.payload_size


def offered_load(config):
    return sum(f.packet_rate * _wire_size(f, config.sdap_enabled) for f in config.flows)


@dataclass
class _Item:
    wire: bytes
    original: bytes
    flow_id: int
    seq: int
    created_at: int
    drb: int
    enqueue_order: int


class _Simulation:
    def __init__(self, config):
        self.config = config
        self.link = config.link
        self.sdap = config.sdap_enabled
        self.tx_table = config.tx_table()
        self.rx_table = config.rx_table()
        self.flows = sorted(config.flows, key=lambda f: f.flow_id)
        self.flow_by_id = {f.flow_id: f for f in self.flows}

        self.event_log = []
        self.tx = TxEntity(self.tx_table, log=self._log)
        self.rx = RxEntity(self.rx_table, log=self._log)
        self.checks = Checks()

        self.heap = []
        self.event_seq = 0
        self.now = 0

        drbs = sorted({self.tx_table.lookup(f.qfi) for f in self.flows}) if self.sdap else [0]
        self.queues = {d: deque() for d in drbs}
        self.rr_last = None
        self.busy = False
        self.enqueue_counter = 0

        self.sent = defaultdict(int)
        self.lost = defaultdict(int)
        self.latencies = defaultdict(list)
        self.mismatches = defaultdict(int)
        self.integrity = defaultdict(int)
        self.deliveries = []

        self.prop_ns = to_ns(self.link.propagation_delay)
        self.duration_ns = to_ns(config.duration)

    def _log(self, t, line):
        self.event_log.append(f"{format_time(t)} {line}")

    def schedule(self, t, handler, *args):
        heapq.heappush(self.heap, (t, self.event_seq, handler, args))
        self.event_seq += 1

    # traffic sources

    def start_sources(self):
        n = len(self.flows)
        for k, flow in enumerate(self.flows):
            interval = to_ns(1.0 / flow.packet_rate)
            first = to_ns(flow.start_time) + k * interval // n
            end = to_ns(min(flow.stop_time, self.config.duration))
            rng = random.Random(f"jitter/{self.config.seed}/{flow.flow_id}")
            jitter_ns = to_ns(flow.jitter)
            self._next_packet(flow, rng, interval, first, end, jitter_ns, 0)

    def _next_packet(self, flow, rng, interval, first, end, jitter_ns, seq):
        generated = first + seq * interval
        if generated >= end:
            return
        # jitter delays arrival at SDAP; the generator stamps the nominal CBR instant
        delay = rng.randrange(jitter_ns) if jitter_ns > 0 else 0
        self.schedule(generated + delay, self._arrive, flow, rng, interval, first, end, jitter_ns, seq, generated)

    def _arrive(self, flow, rng, interval, first, end, jitter_ns, seq, generated):
        self._next_packet(flow, rng, interval, first, end, jitter_ns, seq + 1)
        self.sent[flow.flow_id] += 1
        pkt = make_packet(
            payload_fill(flow.flow_id, seq, flow.payload_size),
            transport=flow.transport.value,
            src_port=flow.src_port,
            dst_port=flow.dst_port,
            src_addr=flow.src_addr,
            dst_addr=flow.dst_addr,
            created_at=generated,
            flow_id=flow.flow_id,
            seq=seq,
        )
        original = pkt.serialize()
        if self.sdap:
            pkt = pkt.with_tag(QosFlowTag(flow.qfi))
            out, rec = self.tx.process(pkt, self.now)
            wire = out.serialize()
            self._check_tx(flow, original, wire, rec)
            drb = rec.drb
        else:
            wire = original
            drb = 0
        self._enqueue(_Item(wire, original, flow.flow_id, seq, generated, drb, 0))

    def _check_tx(self, flow, original, wire, rec):
        c = self.checks
        c.tx_packets += 1
        c.tx_tagged += rec.had_tag
        if not rec.had_tag or rec.qfi != flow.qfi:
            c.tx_qfi_errors += 1
        if rec.drb != self.tx_table.lookup(flow.qfi):
            c.tx_mapping_errors += 1
        l4 = UDP_HEADER_SIZE if flow.transport is Transport.UDP else TCP_HEADER_SIZE
        boundary = IPV4_HEADER_SIZE + l4
        header = decode_sdap(wire[boundary:])
        ok = (
            len(wire) == len(original) + 1
            and header.dc == DC.DATA
            and not header.rqi
            and header.qfi == flow.qfi
            and wire[:2] == original[:2]
            and int.from_bytes(wire[2:4], "big") == int.from_bytes(original[2:4], "big") + 1
            and wire[boundary + 1:] == original[boundary:]
        )
        if flow.transport is Transport.UDP:
            udp_len = slice(IPV4_HEADER_SIZE + 4, IPV4_HEADER_SIZE + 6)
            ok = ok and int.from_bytes(wire[udp_len], "big") == int.from_bytes(original[udp_len], "big") + 1
        if not ok:
            c.tx_header_errors += 1

    # bottleneck

    def _enqueue(self, item):
        queue = self.queues.get(item.drb)
        if queue is None:
            queue = self.queues[item.drb] = deque()
            self.queues = dict(sorted(self.queues.items()))
        cap = self.link.per_queue_capacity
        if cap and len(queue) >= cap:
            self.lost[item.flow_id] += 1
            return
        item.enqueue_order = self.enqueue_counter
        self.enqueue_counter += 1
        queue.append(item)
        if not self.busy:
            self._serve_next()

    def _pick_queue(self):
        nonempty = [d for d, q in self.queues.items() if q]
        if not nonempty:
            return None
        if self.link.scheduler is Scheduler.SHARED_FIFO or len(nonempty) == 1:
            return min(nonempty, key=lambda d: self.queues[d][0].enqueue_order)
        if self.rr_last is None:
            return nonempty[0]
        for d in nonempty:
            if d > self.rr_last:
                return d
        return nonempty[0]

    def _serve_next(self):
        drb = self._pick_queue()
        if drb is None:
            self.busy = False
            return
        item = self.queues[drb].popleft()
        self.rr_last = drb
        self.busy = True
        service = round(len(item.wire) * NS / self.link.service_rate)
        self.schedule(self.now + service, self._departed, item)

    def _departed(self, item):
        self.schedule(self.now + self.prop_ns, self._deliver, item)
        self._serve_next()

    # receiver

    def _deliver(self, item):
        flow = self.flow_by_id[item.flow_id]
        pkt = deserialize(item.wire)
        if self.sdap:
            before = self.rx.drb_mismatches
            out, rec = self.rx.process(pkt, self.now, carried_drb=item.drb)
            self.mismatches[item.flow_id] += self.rx.drb_mismatches - before
            self._check_rx(flow, item, out, rec)
        else:
            out = pkt
        restored = out.serialize()
        expected = payload_fill(item.flow_id, item.seq, flow.payload_size)
        if out.payload != expected or restored != item.original:
            self.integrity[item.flow_id] += 1
        self.latencies[item.flow_id].append(self.now - item.created_at)
        self.deliveries.append(Delivery(self.now, item.flow_id, item.seq, item.drb, item.enqueue_order))

    def _check_rx(self, flow, item, out, rec):
        c = self.checks
        c.rx_packets += 1
        if rec.qfi != flow.qfi:
            c.rx_qfi_errors += 1
        restored = out.serialize()
        tag = out.get_tag(QosFlowTag)
        if (
            len(restored) != len(item.wire) - 1
            or len(out.chunks) != 2
            or tag is None
            or tag.qfi != rec.qfi
        ):
            c.rx_removal_errors += 1

    def run(self):
        load = offered_load(self.config)
        warnings = []
        if load > self.link.service_rate:
            msg = f"offered load {load:.1f} B/s exceeds service rate {self.link.service_rate:g} B/s"
            log.warning(msg)
            warnings.append(msg)

        self.start_sources()
        # generation stops at duration; the loop keeps running until queues drain
        while self.heap:
            t, _, handler, args = heapq.heappop(self.heap)
            self.now = t
            handler(*args)

        stats = []
        for f in self.flows:
            samples = [ns / NS for ns in self.latencies[f.flow_id]]
            st = compute_flow_stats(
                samples,
                flow_id=f.flow_id,
                qfi=f.qfi,
                drb=self.tx_table.lookup(f.qfi) if self.sdap else 0,
                sent=self.sent[f.flow_id],
                lost=self.lost[f.flow_id],
                drb_mismatches=self.mismatches[f.flow_id],
                integrity_failures=self.integrity[f.flow_id],
            )
            stats.append(st)
        self.checks.drb_mismatches = sum(self.mismatches.values())
        self.checks.integrity_failures = sum(self.integrity.values())
        return ScenarioReport(
            config=self.config,
            flows=stats,
            event_log=self.event_log,
            checks=self.checks,
            deliveries=self.deliveries,
            warnings=warnings,
            offered_load=load,
        )


def run_scenario(config):
    config.validate()
    if not config.flows:
        log.info("scenario %r has no flows", config.name)
    return _Simulation(config).run()


def compare_sdap(config, seeds):
    """Run ``config`` with and without SDAP for each seed.

    Returns ``[(seed, with_report, without_report), ...]``.
    """
    results = []
    for seed in seeds:
        with_ = run_scenario(config.with_overrides(seed=seed, sdap_enabled=True))
        without = run_scenario(config.with_overrides(seed=seed, sdap_enabled=False))
        results.append((seed, with_, without))
    return results


__all__ = [
    "CSV_HEADER",
    "Checks",
    "ConfigError",
    "FlowStats",
    "ScenarioReport",
    "compare_sdap",
    "compute_flow_stats",
    "offered_load",
    "run_scenario",
]
