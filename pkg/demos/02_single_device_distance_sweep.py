# One device moved away from the gateway in steps; at each stop it sends 100
# frames back to back at the duty-cycle rate. Coverage ends abruptly per SF,
# and low SFs trade range for throughput.
import numpy as np

from lorawan_sim import run_scenario_1

distances = np.arange(1000, 7001, 500)
rows = run_scenario_1(distances=distances)

table = {}
for r in rows:
    table.setdefault(r["sf"], []).append((float(r["pdr"]), float(r["throughput_bps"])))

print("PDR by distance (km):", (distances / 1000).tolist())
for sf, vals in table.items():
    print(f"SF{sf:<2} " + " ".join(f"{p:4.2f}" for p, _ in vals))

print("\nUL throughput at 1 km (bit/s):")
for sf, vals in table.items():
    print(f"  SF{sf:<2} {vals[0][1]:7.3f}")
