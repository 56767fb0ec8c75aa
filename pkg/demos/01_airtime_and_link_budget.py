# Airtime, sensitivity and reach of each spreading factor for a 21-byte frame.
import numpy as np

from lorawan_sim.phy import LinkBudget, PhyParams, airtime, max_range_m, sensitivity_dbm

budget = LinkBudget()
print(f"{'SF':>3} {'airtime s':>10} {'period s':>9} {'sens dBm':>9} {'range m':>8}")
for sf in range(7, 13):
    t = airtime(PhyParams(sf=sf), 21)
    # Duty cycle of 1%: one frame every t / 0.01 seconds at most.
    print(f"{sf:>3} {t:>10.6f} {t / 0.01:>9.2f} {sensitivity_dbm(sf, 125_000):>9.2f} "
          f"{max_range_m(budget, sf):>8.0f}")

# Airtime against payload size, SF12 vs SF7
sizes = np.arange(0, 256, 51)
print("\npayload bytes:", sizes.tolist())
for sf in (7, 12):
    print(f"SF{sf:<2}", np.round([airtime(PhyParams(sf=sf), int(n)) for n in sizes], 4).tolist())
