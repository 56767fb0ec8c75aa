# Devices spread over a 5 km disc, all at SF12 on one channel, each fed by a
# Poisson source at the duty-cycle-limited rate (t_I = 1). Utilization counts
# the airtime of frames the gateway actually decoded.
#
# A full simulated day per point takes a few seconds for a few hundred devices.
from lorawan_sim import run_scenario_2, ScenarioConfig

devices = [10, 50, 100, 200]
base = ScenarioConfig(traffic_intensity=1.0, seed=1)

configs = [("unconfirmed", 1), ("unconfirmed", 8), ("confirmed", 1), ("confirmed", 8)]
print(f"{'|A|':>5}" + "".join(f"{m} N={n}".rjust(17) for m, n in configs))
for n_dev in devices:
    line = f"{n_dev:>5}"
    for mode, n in configs:
        [row] = run_scenario_2(base, devices=[n_dev], modes=[mode], max_tx=[n])
        line += f"{float(row['utilization']):>17.3f}"
    print(line)

# ACKs go out on the uplink channel, which deafens the gateway while they play,
# so confirmed traffic ends up with noticeably less useful airtime.
