"""
Four switching policies on the same slot
========================================

Greedy offloading is compared against leaving everything on, offloading to
the macro cell only, and brute force over every ON/OFF vector.
"""
from dataclasses import replace

from vhetnet import SimConfig, build_topology, generate_snapshot
from vhetnet.policies import POLICY_NAMES, get_policy

# A lighter, flatter demand leaves plenty of cells under their threshold
config = SimConfig(sbs_counts=(12,), softmax_temperature=3.0)
topo = build_topology(config, seed=3, n_sbs=12)
snap = generate_snapshot(topo, config.traffic_config(35.0), seed=3, slot=0)

for name in POLICY_NAMES:
    d = get_policy(name)(snap, topo)
    off = [i for i, x in enumerate(d.state.delta) if x == 0]
    print(f"{name:14s} {d.total_power:8.2f} W  off={off}")

# The brute force looks at 2**12 = 4096 vectors here.  The greedy visits
# each cell once, lightest first, and usually lands on the same answer.

# Brute force is guarded: beyond es_max_s cells it refuses to run.
big = build_topology(replace(config, sbs_counts=(25,)), seed=3, n_sbs=25)
big_snap = generate_snapshot(big, config.traffic_config(35.0), seed=3, slot=0)
try:
    get_policy("exhaustive")(big_snap, big)
except ValueError as exc:
    print("refused:", exc)
