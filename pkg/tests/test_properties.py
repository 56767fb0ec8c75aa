"""Randomized properties of the building blocks."""

import dataclasses

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from lorawan_sim import engine, metrics
from lorawan_sim.config import ScenarioConfig
from lorawan_sim.frames import Frame, FrameKind
from lorawan_sim.medium import ActiveTransmission, Outcome, resolve_reception
from lorawan_sim.metrics import DeviceRecord, MetricsLedger
from lorawan_sim.phy import LinkBudget, PhyParams, airtime, path_loss_db
from lorawan_sim.topology import place_devices_uniform_disc
from lorawan_sim.traffic import device_rng

sfs = st.integers(7, 12)
powers = st.floats(-136.0, -40.0, allow_nan=False)


def _tx(sf, ch, p, start):
    f = Frame(FrameKind.DATA_UNCONFIRMED, 0, 1, 21, sf, ch, 14.0, 0, 1.0)
    return ActiveTransmission(f, start, start + 1.0, p)


@given(sf=sfs, n=st.integers(0, 254), bw=st.sampled_from([125_000, 250_000, 500_000]))
def test_airtime_monotone_in_payload(sf, n, bw):
    p = PhyParams(sf=sf, bandwidth_hz=bw)
    assert airtime(p, n) <= airtime(p, n + 1)


@given(d=st.floats(1.0, 1e5), k=st.floats(1.01, 10.0))
def test_path_loss_monotone(d, k):
    b = LinkBudget()
    assert path_loss_db(b, d * k) > path_loss_db(b, d)


@given(pa=powers, pb=powers, sf=sfs, thr=st.sampled_from([0.0, 3.0, 6.0]),
       offset=st.floats(-0.99, 0.99))
def test_capture_never_receives_both(pa, pb, sf, thr, offset):
    a, b = _tx(sf, 868_100_000, pa, 0.0), _tx(sf, 868_100_000, pb, offset)
    ra, rb = resolve_reception(a, [b], -137.0, thr), resolve_reception(b, [a], -137.0, thr)
    assert not (ra is Outcome.RECEIVED and rb is Outcome.RECEIVED)
    if abs(pa - pb) >= thr and pa != pb:
        winner = ra if pa > pb else rb
        assert winner is Outcome.RECEIVED


@given(n=st.integers(1, 50), radius=st.floats(1.0, 1e4), seed=st.integers(0, 2**32))
def test_placement_inside_disc(n, radius, seed):
    p = place_devices_uniform_disc(n, radius, device_rng(seed, 2, 0))
    assert p.shape == (n, 2) and np.all(np.hypot(p[:, 0], p[:, 1]) <= radius * (1 + 1e-12))


records = st.builds(DeviceRecord, app_sent=st.integers(1, 50), app_delivered=st.integers(0, 1),
                    mac_sent_airtime=st.floats(0, 100), mac_received_airtime=st.floats(0, 100),
                    payload_bits_delivered=st.integers(0, 10_000))


@given(recs=st.lists(records, min_size=1, max_size=20), data=st.data())
def test_metrics_ignore_device_labels(recs, data):
    perm = data.draw(st.permutations(recs))
    a = MetricsLedger(100.0, 3, 0.01, [dataclasses.replace(r) for r in recs])
    b = MetricsLedger(100.0, 3, 0.01, list(perm))
    for f in (metrics.pdr, metrics.sub_band_load, metrics.sub_band_utilization,
              metrics.ul_throughput_bps):
        assert np.isclose(f(a), f(b))


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 10_000), sf=sfs, mode=st.sampled_from(["unconfirmed", "confirmed"]),
       n=st.sampled_from([1, 8]))
def test_duty_cycle_in_sliding_windows(seed, sf, mode, n):
    cfg = ScenarioConfig(device_count=1, lambda_pps=0.5, sf=sf, tx_mode=mode, max_tx=n,
                         seed=seed, duration_s=6 * 3600.0, disc_radius_m=800.0)
    log = engine.run(cfg, log_tx=True).devices[0].tx_log
    starts = np.array([s for s, _ in log])
    ends = starts + np.array([a for _, a in log])
    t_max = float((ends - starts).max())
    W = 3600.0
    for s in starts:
        used = np.clip(np.minimum(ends, s + W) - np.maximum(starts, s), 0, None).sum()
        assert used <= 0.01 * W + t_max + 1e-9
