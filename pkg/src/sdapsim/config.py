"""Scenario description and the INI file format that carries it.

Example::

    [scenario]
    duration = 20
    seed = 1
    sdap_enabled = true
    qfiToDrbMapping = 1:0;5:1;9:2;63:3

    [link]
    service_rate = 1000000
    scheduler = PerDrbRoundRobin
    propagation_delay = 0.001
    per_queue_capacity = 0

    [flow.0]
    qfi = 1
    packet_rate = 50
    payload_size = 160
    src_port = 5000
    dst_port = 6000

A ``[radio]`` section is accepted and echoed but has no effect on the run.
"""

from __future__ import annotations

import configparser
import enum
import ipaddress
from dataclasses import dataclass, field, replace
from pathlib import Path

from .codec import QFI_MAX
from .errors import ConfigError, MalformedMapping
from .mapping import parse_mapping

BUNDLED_DIR = Path(__file__).parent / "scenarios"


class Transport(enum.Enum):
    UDP = "udp"
    TCP = "tcp"


class Scheduler(enum.Enum):
    SHARED_FIFO = "SharedFifo"
    PER_DRB_ROUND_ROBIN = "PerDrbRoundRobin"


@dataclass(frozen=True)
class FlowConfig:
    flow_id: int
    qfi: int
    packet_rate: float
    payload_size: int
    src_port: int = 5000
    dst_port: int = 6000
    transport: Transport = Transport.UDP
    start_time: float = 0.0
    stop_time: float = float("inf")
    # per-packet delay between generation and arrival at SDAP, uniform in [0, jitter) seconds
    jitter: float = 0.0
    src_addr: int = 0x0A000001
    dst_addr: int = 0x0A000002

    def validate(self):
        key = f"flow.{self.flow_id}"
        if not 0 <= self.qfi <= QFI_MAX:
            raise ConfigError(f"qfi {self.qfi} outside [0, {QFI_MAX}]", f"{key}.qfi")
        if self.packet_rate <= 0:
            raise ConfigError("packet_rate must be > 0", f"{key}.packet_rate")
        if self.payload_size <= 0:
            raise ConfigError("payload_size must be > 0", f"{key}.payload_size")
        if self.stop_time <= self.start_time:
            raise ConfigError("stop_time must be > start_time", f"{key}.stop_time")
        if not 0 <= self.jitter <= 1.0 / self.packet_rate:
            raise ConfigError("jitter must lie in [0, 1/packet_rate]", f"{key}.jitter")
        for name in ("src_port", "dst_port"):
            if not 0 <= getattr(self, name) <= 0xFFFF:
                raise ConfigError("port outside [0, 65535]", f"{key}.{name}")


@dataclass(frozen=True)
class LinkConfig:
    service_rate: float = 1_000_000.0  # bytes/s
    scheduler: Scheduler = Scheduler.PER_DRB_ROUND_ROBIN
    propagation_delay: float = 0.0
    per_queue_capacity: int = 0  # packets, 0 = unbounded

    def validate(self):
        if self.service_rate <= 0:
            raise ConfigError("service_rate must be > 0", "link.service_rate")
        if self.propagation_delay < 0:
            raise ConfigError("propagation_delay must be >= 0", "link.propagation_delay")
        if self.per_queue_capacity < 0:
            raise ConfigError("per_queue_capacity must be >= 0", "link.per_queue_capacity")


@dataclass(frozen=True)
class ScenarioConfig:
    duration: float
    flows: tuple = ()
    link: LinkConfig = LinkConfig()
    seed: int = 0
    sdap_enabled: bool = True
    qfi_to_drb_mapping: str = ""
    # RX-side mapping; None means "same string as TX"
    rx_qfi_to_drb_mapping: str | None = None
    radio: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "flows", tuple(self.flows))

    def validate(self):
        if self.duration <= 0:
            raise ConfigError("duration must be > 0", "scenario.duration")
        ids = [f.flow_id for f in self.flows]
        if len(ids) != len(set(ids)):
            raise ConfigError("flow ids must be unique", "flows")
        for f in self.flows:
            f.validate()
        self.link.validate()
        self.tx_table()
        self.rx_table()
        return self

    def tx_table(self):
        return _table(self.qfi_to_drb_mapping, "scenario.qfiToDrbMapping")

    def rx_table(self):
        if self.rx_qfi_to_drb_mapping is None:
            return self.tx_table()
        return _table(self.rx_qfi_to_drb_mapping, "scenario.rxQfiToDrbMapping")

    def with_overrides(self, seed=None, sdap_enabled=None):
        changes = {}
        if seed is not None:
            changes["seed"] = seed
        if sdap_enabled is not None:
            changes["sdap_enabled"] = sdap_enabled
        return replace(self, **changes)


def _table(text, key):
    try:
        return parse_mapping(text)
    except MalformedMapping as exc:
        raise ConfigError(str(exc), key) from exc


def resolve_scenario_path(path):
    """Return ``path`` if it exists, else the bundled scenario of that name."""
    p = Path(path)
    if p.is_file():
        return p
    bundled = BUNDLED_DIR / p.name
    if p.parent == Path(".") and bundled.is_file():
        return bundled
    raise ConfigError(f"scenario file not found: {path}", "scenario")


def _get(section, key, conv, default=None, required=False):
    full = f"{section.name}.{key}"
    if key not in section:
        if required:
            raise ConfigError("missing required key", full)
        return default
    raw = section[key].strip()
    try:
        return conv(raw)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad value {raw!r}", full) from exc


def _bool(raw):
    low = raw.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(raw)


def _addr(raw):
    return int(ipaddress.IPv4Address(raw))


def _transport(raw):
    return Transport(raw.lower())


def _scheduler(raw):
    for s in Scheduler:
        if s.value.lower() == raw.lower():
            return s
    raise ValueError(raw)


def _int(raw):
    return int(raw, 0)


def parse_scenario(text, name=""):
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#",))
    # keep camelCase keys such as qfiToDrbMapping
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"unparseable scenario file: {exc}") from exc

    if "scenario" not in parser:
        raise ConfigError("missing [scenario] section", "scenario")
    sc = parser["scenario"]
    duration = _get(sc, "duration", float, required=True)

    link = LinkConfig()
    if "link" in parser:
        ln = parser["link"]
        link = LinkConfig(
            service_rate=_get(ln, "service_rate", float, link.service_rate),
            scheduler=_get(ln, "scheduler", _scheduler, link.scheduler),
            propagation_delay=_get(ln, "propagation_delay", float, link.propagation_delay),
            per_queue_capacity=_get(ln, "per_queue_capacity", _int, link.per_queue_capacity),
        )

    flows = []
    for sect_name in parser.sections():
        if not sect_name.startswith("flow."):
            continue
        sect = parser[sect_name]
        try:
            flow_id = int(sect_name.split(".", 1)[1])
        except ValueError as exc:
            raise ConfigError("flow section suffix must be an integer id", sect_name) from exc
        flows.append(
            FlowConfig(
                flow_id=flow_id,
                qfi=_get(sect, "qfi", _int, required=True),
                packet_rate=_get(sect, "packet_rate", float, required=True),
                payload_size=_get(sect, "payload_size", _int, required=True),
                src_port=_get(sect, "src_port", _int, 5000 + flow_id),
                dst_port=_get(sect, "dst_port", _int, 6000 + flow_id),
                transport=_get(sect, "transport", _transport, Transport.UDP),
                start_time=_get(sect, "start_time", float, 0.0),
                stop_time=_get(sect, "stop_time", float, duration),
                jitter=_get(sect, "jitter", float, 0.0),
                src_addr=_get(sect, "src_addr", _addr, 0x0A000001),
                dst_addr=_get(sect, "dst_addr", _addr, 0x0A000002),
            )
        )

    config = ScenarioConfig(
        duration=duration,
        flows=flows,
        link=link,
        seed=_get(sc, "seed", _int, 0),
        sdap_enabled=_get(sc, "sdap_enabled", _bool, True),
        qfi_to_drb_mapping=sc.get("qfiToDrbMapping", "").strip(),
        rx_qfi_to_drb_mapping=sc["rxQfiToDrbMapping"].strip() if "rxQfiToDrbMapping" in sc else None,
        radio=dict(parser["radio"]) if "radio" in parser else {},
        name=name,
    )
    return config.validate()


def load_scenario(path):
    p = resolve_scenario_path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file: {exc}", "scenario") from exc
    return parse_scenario(text, name=p.stem)
