"""
Sweeps, KPIs and figure data
============================

Runs a short sweep over the number of small cells and writes the per-slot
CSV plus plot-ready tables.  Plot them with whatever tool you like.
"""
import tempfile
from dataclasses import replace
from pathlib import Path

from vhetnet import SimConfig
from vhetnet.experiment import emit_csv, emit_figure_data, run_experiment

config = SimConfig(num_slots=50, sbs_counts=(10, 30, 50, 70), policies=("no_offloading", "mbs_only", "haps_mbs"))
result = run_experiment(config)

print(f"{'policy':14s} {'s':>3s} {'total W':>9s} {'grid W':>9s} {'util':>6s} {'EE Gbps/W':>10s}")
for entry in result.summaries:
    m = entry.summary.mean
    print(f"{entry.policy:14s} {entry.s:3d} {m['total_power']:9.1f} {m['grid_power']:9.1f} "
          f"{m['capacity_utilization']:6.3f} {m['energy_efficiency']:10.5f}")

# Grid power leaves out the solar-fed HAPS.  The saving shows up there most.
s70 = {p: result.summary(p, 70).mean["grid_power"] for p in ("no_offloading", "haps_mbs")}
print(f"grid power reduction at s=70: {1 - s70['haps_mbs'] / s70['no_offloading']:.1%}")

out = Path(tempfile.mkdtemp(prefix="vhetnet-demo-"))
emit_csv(result.rows, out / "results.csv")
for figure in ("power_vs_s", "utilization_vs_s"):
    emit_figure_data(result.summaries, figure, out / f"{figure}.csv")

# Energy efficiency vs. traffic needs a demand axis.  Fractions of capacity
# keep every sweep point in its feasible range.
ee = run_experiment(replace(config, sbs_counts=(10, 30), demand_fractions=(0.2, 0.5, 0.8)))
emit_figure_data(ee.summaries, "ee_vs_traffic", out / "ee_vs_traffic.csv")
print("wrote", sorted(p.name for p in out.iterdir()))
