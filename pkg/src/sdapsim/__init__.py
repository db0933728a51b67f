"""SDAP user-plane sublayer: header codec, TX/RX entities, QFI-to-DRB mapping
and a discrete-event simulator of the end-to-end user plane."""

from .codec import (
    DC,
    Ipv4Header,
    SdapHeader,
    TcpHeader,
    UdpHeader,
    decode_ip,
    decode_sdap,
    decode_transport,
    encode_ip,
    encode_sdap,
    encode_transport,
)
from .errors import (
    CodecError,
    ConfigError,
    EmptyPacket,
    InsufficientBytes,
    LengthUnderflow,
    MalformedMapping,
    MalformedStack,
    QfiOutOfRange,
    SdapError,
    UnsupportedProtocol,
)
from .mapping import DEFAULT_DRB, QfiDrbTable, parse_mapping
from .packet import Packet, QosFlowTag
from .rx import RxEntity, RxRecord, emit_rx_logs
from .tx import TxEntity, TxRecord, emit_tx_logs

__version__ = "0.1.0"

__all__ = [
    "DC",
    "DEFAULT_DRB",
    "CodecError",
    "ConfigError",
    "EmptyPacket",
    "InsufficientBytes",
    "Ipv4Header",
    "LengthUnderflow",
    "MalformedMapping",
    "MalformedStack",
    "Packet",
    "QfiDrbTable",
    "QfiOutOfRange",
    "QosFlowTag",
    "RxEntity",
    "RxRecord",
    "SdapError",
    "SdapHeader",
    "TcpHeader",
    "TxEntity",
    "TxRecord",
    "UdpHeader",
    "UnsupportedProtocol",
    "decode_ip",
    "decode_sdap",
    "decode_transport",
    "emit_rx_logs",
    "emit_tx_logs",
    "encode_ip",
    "encode_sdap",
    "encode_transport",
    "parse_mapping",
]
