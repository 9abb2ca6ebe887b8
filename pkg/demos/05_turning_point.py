"""
When does offloading to the macro cell stop being useless?
==========================================================

Under heavy demand the MBS is already full, so MBS-only offloading cannot
move anything and behaves like no offloading at all.  As cells are added the
MBS frees up and the two curves part ways.
"""
from dataclasses import replace

from vhetnet import SimConfig
from vhetnet.config import congestion_config
from vhetnet.experiment import run_experiment

config = congestion_config(SimConfig(num_slots=200, policies=("no_offloading", "mbs_only", "haps_mbs")))
result = run_experiment(config)

print(" s   no_off  mbs_only  haps_mbs   mbs_only/no_off")
for s in config.sbs_counts:
    u = {p: result.summary(p, s).mean["capacity_utilization"] for p in config.policies}
    print(f"{s:2d}   {u['no_offloading']:.4f}  {u['mbs_only']:.4f}    {u['haps_mbs']:.4f}    {u['mbs_only'] / u['no_offloading'] - 1:+.2%}")

# The HAPS column never falls behind and pulls away once cells can move: the
# HAPS keeps spare capacity long after the macro cell has none.
