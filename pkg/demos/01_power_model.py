"""
Base-station power and the offload threshold
============================================

How much does a small cell cost, and when is it cheaper to put it to sleep
and let the HAPS or the macro cell carry its traffic?
"""
import numpy as np

from vhetnet import power_model as pm

# Linear load model: a fixed operating cost plus a load-proportional part.
# Sleeping cells fall back to a small standby draw.
for load in (0.0, 0.25, 0.5, 1.0):
    print(f"SBS ON at load {load:4.2f}: {pm.active_power(pm.SBS_PROFILE, load):6.2f} W")
print("asleep:", pm.SBS_PROFILE.p_sleep, "W")
# bs_power reads zero load as "asleep"; an idle cell left ON still pays P_O
print("bs_power at zero load:", pm.bs_power(pm.SBS_PROFILE, 0.0), "W")

# Moving a cell's traffic onto a bigger station scales its load factor by the
# capacity ratio phi (5 Gbps cell onto a 40 Gbps HAPS -> 0.125).
phi_h = pm.relative_capacity(5.0, 40.0)
phi_m = pm.relative_capacity(5.0, 10.0)
print("phi to HAPS:", phi_h, " phi to MBS:", phi_m)

# The power change of one switch-off is linear in the cell's load, so it has
# a single root.  Below it, sleeping saves power.
rho_h = pm.offload_threshold(pm.SBS_PROFILE, pm.HAPS_PROFILE, phi_h)
rho_m = pm.offload_threshold(pm.SBS_PROFILE, pm.MBS_PROFILE, phi_m)
print(f"threshold towards HAPS: {rho_h:.5f}, towards MBS: {rho_m:.5f}")

loads = np.linspace(0, 1, 6)
deltas = [pm.switch_off_delta(pm.SBS_PROFILE, x, pm.HAPS_PROFILE, phi_h) for x in loads]
for x, d in zip(loads, deltas):
    verdict = "saves" if d < 0 else "costs"
    print(f"  offload at load {x:.1f} to HAPS {verdict} {abs(d):6.3f} W")

# The HAPS threshold is higher, so HAPS-targeted cells qualify more often.
# That is the whole reason to prefer the HAPS as an offload target.
