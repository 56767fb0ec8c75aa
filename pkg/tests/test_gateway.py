import pytest

from lorawan_sim.frames import Frame, FrameKind
from lorawan_sim.gateway import NetworkServer
from lorawan_sim.medium import ActiveTransmission, ChannelPlan, Direction, Medium
from lorawan_sim.phy import PhyParams, airtime

CH1 = 868_100_000


def data(dev, fcnt, kind=FrameKind.DATA_CONFIRMED, ch=CH1):
    return Frame(kind, dev, fcnt, 21, 12, ch, 14.0, fcnt, 1.810432)


@pytest.fixture
def ns():
    return NetworkServer(ChannelPlan.eu868(1), Medium())


def test_ack_in_rx1(ns):
    new, ack = ns.on_ul_frame(data(1, 1), 10.0)
    assert new and ack.window == 1
    assert (ack.frequency_hz, ack.sf, ack.start) == (CH1, 12, 11.0)
    assert ack.airtime_s == pytest.approx(airtime(PhyParams(sf=12), 12))
    assert ns.acks_sent == 1


def test_rx1_taken_falls_back_to_rx2():
    ns = NetworkServer(ChannelPlan.eu868(1), Medium())
    _, first = ns.on_ul_frame(data(1, 1), 10.0)
    # The first ACK spent the uplink sub-band's downlink budget for ~13.5 s.
    _, second = ns.on_ul_frame(data(2, 1), 10.2)
    assert first.window == 1 and second.window == 2
    assert second.frequency_hz == 869_525_000 and second.start == pytest.approx(12.2)


def test_no_window_available():
    ns = NetworkServer(ChannelPlan.eu868(1), Medium())
    ns.on_ul_frame(data(1, 1), 10.0)
    ns.on_ul_frame(data(2, 1), 10.1)
    _, third = ns.on_ul_frame(data(3, 1), 10.2)
    assert third is None and ns.acks_sent == 2


def test_rx1_busy_with_uplink(ns):
    other = ActiveTransmission(data(9, 1), 10.5, 12.31, -120.0)
    ns.medium.begin(other)
    _, ack = ns.on_ul_frame(data(1, 1), 10.0)
    assert ack.window == 2


def test_duplicate_not_redelivered_but_acked(ns):
    new1, ack1 = ns.on_ul_frame(data(1, 5), 10.0)
    new2, ack2 = ns.on_ul_frame(data(1, 5), 500.0)
    assert new1 and not new2
    assert ack1 is not None and ack2 is not None


def test_unconfirmed_never_acked(ns):
    new, ack = ns.on_ul_frame(data(1, 1, FrameKind.DATA_UNCONFIRMED), 1.0)
    assert new and ack is None


def test_dl_duty_update(ns):
    assert ns.dl_duty_update("ul", 0.0, 1.5) == pytest.approx(15.0)
    ns2 = NetworkServer(ChannelPlan.eu868(1, dl_duty_cycle=1.0), Medium())
    assert ns2.dl_duty_update("ul", 3.0, 1.5) == pytest.approx(4.5)


def test_ack_frame(ns):
    _, ack = ns.on_ul_frame(data(4, 2), 0.0)
    f = ns.ack_frame(ack, 14.0)
    assert f.kind is FrameKind.ACK and f.device_id == 4 and f.fcnt == 2
    assert not f.is_data
    ns.medium.begin(ActiveTransmission(f, ack.start, ack.end, -100.0, Direction.DOWN, 14.0))
    ns.pop_ack(ack)
    assert ns.state.pending_acks == []
