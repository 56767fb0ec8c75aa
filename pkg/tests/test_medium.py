import pytest

from lorawan_sim.errors import ConfigError
from lorawan_sim.frames import Frame, FrameKind
from lorawan_sim.medium import (ActiveTransmission, ChannelPlan, Direction, Medium, Outcome,
                                resolve_reception)

CH1, CH2 = 868_100_000, 868_300_000
SENS = -137.0


def tx(power, sf=12, ch=CH1, start=0.0, dur=1.0, direction=Direction.UP, at_gw=None):
    kind = FrameKind.ACK if direction is Direction.DOWN else FrameKind.DATA_UNCONFIRMED
    f = Frame(kind, 0, 1, 21, sf, ch, 14.0, 0, dur)
    return ActiveTransmission(f, start, start + dur, power, direction, at_gw)


def test_capture_at_six_db():
    a, b = tx(-120.0), tx(-130.0, start=0.5)
    assert resolve_reception(a, [b], SENS, 6.0) is Outcome.RECEIVED
    assert resolve_reception(b, [a], SENS, 6.0) is Outcome.LOST_COLLISION


def test_small_margin_lost_at_six_but_captured_at_zero():
    a, b = tx(-120.0), tx(-123.0, start=0.5)
    assert resolve_reception(a, [b], SENS, 6.0) is Outcome.LOST_COLLISION
    assert resolve_reception(a, [b], SENS, 0.0) is Outcome.RECEIVED
    assert resolve_reception(b, [a], SENS, 0.0) is Outcome.LOST_COLLISION


@pytest.mark.parametrize("thr", [0.0, 6.0])
def test_equal_powers_both_lost(thr):
    a, b = tx(-125.0), tx(-125.0, start=0.2)
    assert resolve_reception(a, [b], SENS, thr) is Outcome.LOST_COLLISION
    assert resolve_reception(b, [a], SENS, thr) is Outcome.LOST_COLLISION


def test_orthogonal_sf_and_channel():
    a, b, c = tx(-125.0, sf=7), tx(-125.0, sf=12), tx(-125.0, ch=CH2)
    assert resolve_reception(a, [b, c], -124.0) is Outcome.LOST_SENSITIVITY
    assert resolve_reception(b, [a, c], SENS) is Outcome.RECEIVED
    assert resolve_reception(c, [a, b], SENS) is Outcome.RECEIVED


def test_sensitivity_checked_first():
    assert resolve_reception(tx(-140.0), [], SENS) is Outcome.LOST_SENSITIVITY


def test_no_time_overlap_no_collision():
    a, b = tx(-125.0), tx(-125.0, start=1.0)
    assert resolve_reception(a, [b], SENS) is Outcome.RECEIVED


def test_downlink_deafens_gateway():
    up = tx(-110.0)
    dl = tx(-110.0, start=0.5, direction=Direction.DOWN, at_gw=14.0)
    assert resolve_reception(up, [dl], SENS) is Outcome.LOST_COLLISION
    # An uplink does not disturb a downlink at the device.
    assert resolve_reception(dl, [up], SENS) is Outcome.RECEIVED


def test_medium_tracks_overlaps():
    m = Medium(6.0)
    a, b = tx(-120.0), tx(-121.0, start=0.5)
    m.begin(a)
    m.begin(b)
    assert m.active(CH1, 12) == [a, b]
    assert m.end(a, SENS) is Outcome.LOST_COLLISION
    assert m.end(b, SENS) is Outcome.LOST_COLLISION
    assert m.active(CH1, 12) == []


def test_busy_check():
    m = Medium()
    assert not m.gateway_busy_check(0.0, CH1, 12)
    m.begin(tx(-120.0, start=0.0, dur=2.0))
    assert m.gateway_busy_check(1.0, CH1, 12)
    assert not m.gateway_busy_check(1.0, CH2, 12)
    assert not m.gateway_busy_check(1.0, CH1, 11)
    m.schedule_downlink(869_525_000, 12, 5.0, 6.5)
    assert m.gateway_busy_check(5.5, 869_525_000, 12)
    assert m.gateway_busy_check(4.0, 869_525_000, 12, until=5.0)
    assert not m.gateway_busy_check(6.5, 869_525_000, 12)


def test_channel_plan():
    p = ChannelPlan.eu868(7)
    assert p.m_c == 7 and len(set(p.ul_channels_hz)) == 7
    assert p.subband_of(p.rx2_channel_hz) == "rx2" and p.subband_of(CH1) == "ul"
    with pytest.raises(ConfigError):
        ChannelPlan.eu868(8)
    with pytest.raises(ConfigError):
        ChannelPlan((CH1, CH1))
