import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import pipeline_packets, qfis
from sdapsim.codec import DC, SdapHeader, UdpHeader
from sdapsim.errors import EmptyPacket
from sdapsim.packet import (
    Packet,
    QosFlowTag,
    deserialize,
    get_tag,
    make_packet,
    payload_fill,
    pop_front,
    push_front,
    serialize,
    set_tag,
)

SDAP5 = SdapHeader(DC.DATA, False, 5)


def test_push_front_puts_chunk_outermost():
    udp = UdpHeader(1000, 2000, 11)
    p = Packet(chunks=[udp], payload=b"abc")
    q = push_front(p, SDAP5)
    assert q.chunks == (SDAP5, udp)
    assert q.payload == b"abc"
    assert p.chunks == (udp,)


def test_push_order_law():
    base = Packet(payload=b"xyz")
    a = UdpHeader(1, 2, 11)
    q = push_front(push_front(base, a), SDAP5)
    assert serialize(q) == SDAP5.encode() + a.encode() + b"xyz"


def test_pop_front():
    p = make_packet(b"hello")
    ip, rest = pop_front(p)
    assert ip == p.chunks[0]
    assert rest.chunks == p.chunks[1:]
    assert rest.payload == b"hello"


def test_pop_empty():
    with pytest.raises(EmptyPacket):
        pop_front(Packet(payload=b"data"))


def test_tags():
    p = make_packet(b"x")
    assert get_tag(p, QosFlowTag) is None
    p = set_tag(p, QosFlowTag(5))
    assert get_tag(p, QosFlowTag).qfi == 5
    p = set_tag(set_tag(p, QosFlowTag(1)), QosFlowTag(9))
    assert get_tag(p, QosFlowTag).qfi == 9
    assert len(p.tags) == 1


@pytest.mark.parametrize("qfi", [-1, 64])
def test_tag_qfi_range(qfi):
    with pytest.raises(ValueError):
        QosFlowTag(qfi)


@given(pipeline_packets(), qfis)
def test_tags_never_serialized(pkt, qfi):
    assert serialize(set_tag(pkt, QosFlowTag(qfi))) == serialize(pkt)


@given(pipeline_packets(max_payload=200), st.booleans())
def test_serialize_roundtrip(pkt, with_sdap):
    if with_sdap:
        ip, rest = pkt.pop_front()
        l4, rest = rest.pop_front()
        pkt = rest.push_front(SDAP5).push_front(l4).push_front(ip)
    raw = serialize(pkt)
    assert len(raw) == len(pkt) == sum(c.size for c in pkt.chunks) + len(pkt.payload)
    back = deserialize(raw, sdap=with_sdap)
    assert back.chunks == pkt.chunks
    assert back.payload == pkt.payload
    assert serialize(back) == raw


@given(pipeline_packets(max_payload=100), st.integers(0, 3))
def test_stack_laws(pkt, depth):
    depth = min(depth, len(pkt.chunks))
    popped = []
    p = pkt
    for _ in range(depth):
        c, p = pop_front(p)
        popped.append(c)
    for c in reversed(popped):
        p = push_front(p, c)
    assert p == pkt
    assert serialize(p) == serialize(pkt)


def test_payload_fill_deterministic():
    a = payload_fill(3, 17, 160)
    assert len(a) == 160
    assert a == payload_fill(3, 17, 160)
    assert a != payload_fill(3, 18, 160)
    assert a != payload_fill(4, 17, 160)


def test_make_packet_lengths():
    p = make_packet(bytes(160))
    ip, l4 = p.chunks
    assert ip.protocol == 17 and ip.total_length == 188
    assert l4.length == 168
    t = make_packet(bytes(10), transport="tcp")
    assert t.chunks[0].protocol == 6 and t.chunks[0].total_length == 50
