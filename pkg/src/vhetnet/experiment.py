"""Slot loops and parameter sweeps across policies, plus CSV / figure-data output."""
from __future__ import annotations

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .config import SimConfig
from .errors import ConfigurationError, InfeasibleDemandError, VHetNetError
from .kpi import BITS_PER_JOULE_PER_GBPS_PER_WATT, KpiRecord, RunSummary, aggregate, kpi_record
from .policies import POLICY_NAMES, get_policy
from .topology import build_topology
from .traffic import generate_snapshot

logger = logging.getLogger(__name__)

CSV_HEADER = (
    "policy", "s", "total_demand_gbps", "slot", "total_power_w",
    "grid_power_w", "ee_gbps_per_w", "capacity_utilization", "active_sbs",
)
FIGURES = ("ee_vs_traffic", "power_vs_s", "utilization_vs_s")


@dataclass(frozen=True)
class ResultRow:
    policy: str
    s: int
    total_demand: float
    slot: int
    total_power_w: float
    grid_power_w: float
    ee_gbps_per_w: float
    capacity_utilization: float
    active_sbs: int

    def as_csv(self) -> list[str]:
        return [
            self.policy, str(self.s), repr(self.total_demand), str(self.slot),
            repr(self.total_power_w), repr(self.grid_power_w), repr(self.ee_gbps_per_w),
            repr(self.capacity_utilization), str(self.active_sbs),
        ]


@dataclass(frozen=True)
class SweepSummary:
    """Aggregated KPIs of one policy at one (s, demand) sweep point."""

    policy: str
    s: int
    demand_index: int
    total_demand: float
    summary: RunSummary


@dataclass
class ExperimentResult:
    rows: list[ResultRow]
    summaries: list[SweepSummary]
    skipped: list[tuple[str, int]] = field(default_factory=list)

    def summary(self, policy: str, s: int, demand_index: int = 0) -> RunSummary:
        for entry in self.summaries:
            if (entry.policy, entry.s, entry.demand_index) == (policy, s, demand_index):
                return entry.summary
        raise KeyError((policy, s, demand_index))


def _policy_order(names) -> list[str]:
    return [p for p in POLICY_NAMES if p in names]


def _run_point(config: SimConfig, s: int, demand_index: int, demand: float, policies: list[str]):
    topology = build_topology(config, config.seed, s)
    traffic = config.traffic_config(demand)
    fns = {p: get_policy(p, config.es_max_s, config.phase_order) for p in policies}
    records: dict[str, list[KpiRecord]] = {p: [] for p in policies}
    for slot in range(config.num_slots):
        try:
            snapshot = generate_snapshot(topology, traffic, config.seed, slot)
        except InfeasibleDemandError as exc:
            raise InfeasibleDemandError(f"sweep point s={s}, total_demand={demand:g} Gbps: {exc}") from exc
        for p, fn in fns.items():
            records[p].append(kpi_record(fn(snapshot, topology), topology, slot))
    return s, demand_index, demand, records


def run_experiment(config: SimConfig) -> ExperimentResult:
    """Evaluate every requested policy on every slot of every sweep point.

    Deterministic in ``config``; the worker count only affects wall time.
    """
    config.validate()
    policies = _policy_order(config.policies)
    jobs, skipped = [], []
    for s in config.sbs_counts:
        point_policies = policies
        if "exhaustive" in policies and s > config.es_max_s:
            logger.warning("skipping exhaustive search at s=%d (> es_max_s=%d); raise es_max_s to run it", s, config.es_max_s)
            point_policies = [p for p in policies if p != "exhaustive"]
            skipped.append(("exhaustive", s))
        for k, demand in enumerate(config.demand_points(s)):
            jobs.append((s, k, demand, point_policies))

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(lambda job: _run_point(config, *job), jobs))
    else:
        outcomes = [_run_point(config, *job) for job in jobs]

    echo = config.to_dict()
    rows, summaries = [], []
    for s, k, demand, records in outcomes:
        for p, recs in records.items():
            summaries.append(SweepSummary(p, s, k, demand, aggregate(recs, config.seed, echo)))
            rows.extend(
                ResultRow(p, s, demand, r.slot_index, r.total_power, r.grid_power,
                          r.energy_efficiency, r.capacity_utilization, r.active_sbs_count)
                for r in recs
            )
    rank = {p: i for i, p in enumerate(POLICY_NAMES)}
    rows.sort(key=lambda r: (rank[r.policy], r.s, r.total_demand, r.slot))
    summaries.sort(key=lambda e: (rank[e.policy], e.s, e.demand_index))
    return ExperimentResult(rows, summaries, skipped)


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def emit_csv(rows: list[ResultRow], path: str | Path) -> Path:
    path = Path(path)
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            writer.writerows(row.as_csv() for row in rows)
    except OSError as exc:
        raise VHetNetError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def read_csv(path: str | Path) -> list[ResultRow]:
    with Path(path).open(newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != CSV_HEADER:
            raise ConfigurationError(f"{path}: unexpected header {header!r}")
        return [
            ResultRow(p, int(s), float(d), int(slot), float(tp), float(gp), float(ee), float(cu), int(a))
            for p, s, d, slot, tp, gp, ee, cu, a in reader
        ]


def emit_summary(result: ExperimentResult, config: SimConfig, path: str | Path) -> Path:
    path = Path(path)
    doc = {
        "seed": config.seed,
        "config": config.to_dict(),
        "skipped": [{"policy": p, "s": s} for p, s in result.skipped],
        "summaries": [
            {
                "policy": e.policy, "s": e.s, "demand_index": e.demand_index,
                "total_demand_gbps": e.total_demand, "n_slots": e.summary.n_slots,
                "mean": e.summary.mean, "std": e.summary.std,
            }
            for e in result.summaries
        ],
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


_AXES = {
    "ee_vs_traffic": {
        "x": {"name": "total_demand", "unit": "Gbps"},
        "y": {"name": "energy_efficiency", "unit": "Gbps/W", "bits_per_joule_scale": BITS_PER_JOULE_PER_GBPS_PER_WATT},
        "group": "one curve per policy and number of small cells (s=...)",
    },
    "power_vs_s": {
        "x": {"name": "s", "unit": "small cells"},
        "y": {"name": "power", "unit": "W", "series": {"total": "network power", "grid": "network power minus HAPS"}},
        "group": "demand point (demand=<Gbps> or demand_fraction=<f>)",
    },
    "utilization_vs_s": {
        "x": {"name": "s", "unit": "small cells"},
        "y": {"name": "capacity_utilization", "unit": "fraction of active capacity"},
        "group": "demand point (demand=<Gbps> or demand_fraction=<f>)",
    },
}


def _demand_label(config_echo: dict | None, entry: SweepSummary) -> str:
    fractions = (config_echo or {}).get("demand_fractions")
    if fractions:
        return f"demand_fraction={fractions[entry.demand_index]!r}"
    return f"demand={entry.total_demand!r}"


def figure_series(summaries: list[SweepSummary], figure: str) -> list[dict]:
    """Plot-ready points ``{policy, series, group, x, y, y_std}`` for one figure."""
    if figure not in FIGURES:
        raise ConfigurationError(f"unknown figure {figure!r}; choose from {', '.join(FIGURES)}")
    if not summaries:
        raise ConfigurationError(f"{figure}: no summaries to plot")

    points = []
    if figure == "ee_vs_traffic":
        per_s: dict[int, set] = {}
        for e in summaries:
            per_s.setdefault(e.s, set()).add(e.total_demand)
        if max(len(v) for v in per_s.values()) < 2:
            raise ConfigurationError(f"{figure}: needs at least two demand points per s (set total_demand_points or demand_fractions)")
        for e in summaries:
            points.append({
                "policy": e.policy, "series": "energy_efficiency", "group": f"s={e.s}",
                "x": e.total_demand, "y": e.summary.mean["energy_efficiency"],
                "y_std": e.summary.std["energy_efficiency"],
            })
        points.sort(key=lambda p: (POLICY_NAMES.index(p["policy"]), int(p["group"][2:]), p["x"]))
        return points

    if len({e.s for e in summaries}) < 2:
        raise ConfigurationError(f"{figure}: needs at least two values in sbs_counts")
    fields = [("total", "total_power"), ("grid", "grid_power")] if figure == "power_vs_s" else [("utilization", "capacity_utilization")]
    for e in summaries:
        group = _demand_label(e.summary.config, e)
        for series, name in fields:
            points.append({
                "policy": e.policy, "series": series, "group": group, "demand_index": e.demand_index,
                "x": e.s, "y": e.summary.mean[name], "y_std": e.summary.std[name],
            })
    points.sort(key=lambda p: (POLICY_NAMES.index(p["policy"]), p["series"], p["demand_index"], p["x"]))
    for p in points:
        del p["demand_index"]
    return points


def emit_figure_data(summaries: list[SweepSummary], figure: str, path: str | Path) -> Path:
    """Write ``path`` (CSV) plus a ``.meta.json`` sidecar describing the axes."""
    points = figure_series(summaries, figure)
    path = Path(path)
    columns = ["policy", "series", "group", "x", "y", "y_std"]
    if figure == "ee_vs_traffic":
        columns.append("y_bits_per_joule")
        for p in points:
            p["y_bits_per_joule"] = p["y"] * BITS_PER_JOULE_PER_GBPS_PER_WATT
    try:
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for p in points:
                writer.writerow([repr(v) if isinstance(v, float) else v for v in (p[c] for c in columns)])
        meta = {"figure": figure, "columns": columns, **_AXES[figure],
                "statistic": "y is the mean over slots, y_std the population standard deviation"}
        path.with_suffix(".meta.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise VHetNetError(f"cannot write figure data to {path}: {exc}") from exc
    return path
