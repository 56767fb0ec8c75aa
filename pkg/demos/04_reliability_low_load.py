# Lightly loaded network (t_I = 0.1): retrying confirmed frames buys
# reliability while the channel is quiet, but blind unconfirmed repeats only
# add load once the network is crowded.
from lorawan_sim import run_scenario_2, ScenarioConfig

base = ScenarioConfig(traffic_intensity=0.1, seed=2)
print(f"{'|A|':>5} {'unconf N=1':>11} {'unconf N=8':>11} {'conf N=8':>9}")
for n_dev in (10, 40, 200):
    out = []
    for mode, n in (("unconfirmed", 1), ("unconfirmed", 8), ("confirmed", 8)):
        [row] = run_scenario_2(base, devices=[n_dev], modes=[mode], max_tx=[n])
        out.append(float(row["pdr"]))
    print(f"{n_dev:>5} {out[0]:>11.3f} {out[1]:>11.3f} {out[2]:>9.3f}")

# More channels spread the same load: seven channels at t_I = 1.
wide = ScenarioConfig(traffic_intensity=1.0, m_c=7, max_tx=8, seed=2)
for mode in ("unconfirmed", "confirmed"):
    [row] = run_scenario_2(wide, devices=[150], modes=[mode])
    print(f"m_c=7, 150 devices, {mode} N=8: PDR {float(row['pdr']):.3f}")
