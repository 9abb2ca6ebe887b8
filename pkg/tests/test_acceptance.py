"""Acceptance criteria, one test each; a PASS/FAIL line per criterion is printed at the end of the run."""
import collections
import csv
from dataclasses import replace

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from vhetnet.config import DEFAULT_SBS_COUNTS, SimConfig, congestion_config, ee_traffic_config
from vhetnet.experiment import emit_csv, emit_figure_data, run_experiment
from vhetnet.policies import (
    POLICY_NAMES,
    apply_switch_off,
    apply_switch_on,
    feasible,
    get_policy,
    served_traffic,
    state_from_snapshot,
)
from vhetnet.power_model import (
    HAPS_PROFILE,
    MBS_PROFILE,
    SBS_PROFILE,
    PowerProfile,
    network_power,
    offload_threshold,
    switch_off_delta,
)
from vhetnet.topology import HAPS, MBS, build_topology
from vhetnet.traffic import generate_snapshot

# slack on power comparisons between policies; summation order differs
POWER_SLACK_W = 1e-9
COINCIDE_REL = 0.005
DIVERGE_REL = 0.01

DEFAULT = SimConfig()
# gamma = 1 with a flatter, lighter demand profile
CALIBRATION = replace(DEFAULT, gamma=1.0, total_demand_points=(40.0,), softmax_temperature=3.0)
NO_ES = ("no_offloading", "mbs_only", "haps_mbs")


def report(n, ok, text):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {text}")
    assert ok, text


@pytest.fixture(scope="module")
def oracle_runs():
    return {s: run_experiment(replace(DEFAULT, sbs_counts=(s,))) for s in (10, 15)}


@pytest.fixture(scope="module")
def default_sweep():
    return run_experiment(replace(DEFAULT, policies=NO_ES))


@pytest.fixture(scope="module")
def calibration_sweep():
    return run_experiment(replace(CALIBRATION, policies=NO_ES))


def _by_slot(rows, policy):
    return {r.slot: r for r in rows if r.policy == policy}


def test_criterion_1_thresholds():
    phi_h, phi_m = 5.0 / 40.0, 5.0 / 10.0
    rho_h = offload_threshold(SBS_PROFILE, HAPS_PROFILE, phi_h)
    rho_m = offload_threshold(SBS_PROFILE, MBS_PROFILE, phi_m)
    residual = max(abs(switch_off_delta(SBS_PROFILE, rho_h, HAPS_PROFILE, phi_h)),
                   abs(switch_off_delta(SBS_PROFILE, rho_m, MBS_PROFILE, phi_m)))
    ok = abs(rho_h - 0.80492) <= 1e-4 and abs(rho_m - 0.55519) <= 1e-4 and residual <= 1e-9
    report(1, ok, f"rho_H={rho_h:.6f} rho_M={rho_m:.6f} (tol 1e-4), |dP(rho)|={residual:.2e} W (tol 1e-9)")


def test_criterion_2_optimality_sandwich(oracle_runs):
    rows = oracle_runs[10].rows
    es, hm, none, mbs = (_by_slot(rows, p) for p in ("exhaustive", "haps_mbs", "no_offloading", "mbs_only"))
    assert len(es) == DEFAULT.num_slots
    violations = 0
    for slot in es:
        p_es, p_hm = es[slot].total_power_w, hm[slot].total_power_w
        p_none, p_mbs = none[slot].total_power_w, mbs[slot].total_power_w
        if not (p_es <= p_hm + POWER_SLACK_W and p_hm <= p_none + POWER_SLACK_W
                and p_es <= p_mbs + POWER_SLACK_W and p_mbs <= p_none + POWER_SLACK_W):
            violations += 1
    report(2, violations == 0, f"{violations} sandwich violations over {len(es)} slots at s=10 (slack {POWER_SLACK_W:g} W)")


def test_criterion_3_greedy_near_optimal(oracle_runs):
    gaps = {}
    for s, result in oracle_runs.items():
        es, hm = _by_slot(result.rows, "exhaustive"), _by_slot(result.rows, "haps_mbs")
        gaps[s] = float(np.mean([hm[t].total_power_w / es[t].total_power_w - 1.0 for t in es]))
    ok = all(g <= 0.02 for g in gaps.values())
    report(3, ok, "mean haps_mbs vs ES power gap " + ", ".join(f"s={s}: {g:.4%}" for s, g in gaps.items()) + " (limit 2%)")


def _grid_reduction(result, s):
    hm = result.summary("haps_mbs", s).mean["grid_power"]
    none = result.summary("no_offloading", s).mean["grid_power"]
    return 1.0 - hm / none


def test_criterion_4_grid_power_reduction(default_sweep):
    reduction = _grid_reduction(default_sweep, 70)
    report(4, reduction >= 0.25, f"grid power reduction at s=70, default config: {reduction:.2%} (floor 25%)")


def test_criterion_4_calibration_reaches_30_percent(calibration_sweep):
    reduction = _grid_reduction(calibration_sweep, 70)
    report("4 (calibration)", reduction >= 0.30,
           f"grid power reduction at s=70, calibration config: {reduction:.2%} (floor 30%)")


def _utilization_gains(result):
    gains = {}
    for s in DEFAULT_SBS_COUNTS:
        hm = result.summary("haps_mbs", s).mean["capacity_utilization"]
        mo = result.summary("mbs_only", s).mean["capacity_utilization"]
        gains[s] = hm / mo - 1.0
    return gains


def test_criterion_5_utilization_gain(default_sweep):
    gains = _utilization_gains(default_sweep)
    worst = min(gains, key=gains.get)
    report(5, gains[worst] >= 0.15,
           f"min haps_mbs vs mbs_only utilization gain over s={list(gains)}: {gains[worst]:.2%} at s={worst} (floor 15%)")


def test_criterion_5_calibration_utilization_gain(calibration_sweep):
    gains = _utilization_gains(calibration_sweep)
    worst = min(gains, key=gains.get)
    report("5 (calibration)", gains[worst] >= 0.20,
           f"min utilization gain, calibration config: {gains[worst]:.2%} at s={worst} (floor 20%)")


def _read_figure(path):
    with open(path, newline="") as fh:
        return [dict(r, x=float(r["x"]), y=float(r["y"])) for r in csv.DictReader(fh)]


def test_criterion_6_curve_shapes(tmp_path, default_sweep):
    failures = []

    # EE falls with s at every demand fraction of the energy-efficiency figure
    ee_sweep = run_experiment(ee_traffic_config(replace(DEFAULT, policies=NO_ES)))
    points = _read_figure(emit_figure_data(ee_sweep.summaries, "ee_vs_traffic", tmp_path / "ee.csv"))
    curves = collections.defaultdict(list)
    for p in points:
        curves[(p["policy"], int(p["group"][2:]))].append(p["y"])
    for policy in NO_ES:
        for k in range(len(curves[(policy, 10)])):
            ys = [curves[(policy, s)][k] for s in (10, 30, 50)]
            if not ys[0] > ys[1] > ys[2]:
                failures.append(f"EE not decreasing in s for {policy} at demand index {k}: {ys}")

    # and along the s axis of the default and congestion sweeps
    congestion = run_experiment(congestion_config(replace(DEFAULT, policies=NO_ES)))
    for name, result in (("default", default_sweep), ("congestion", congestion)):
        for policy in NO_ES:
            ee = [e.summary.mean["energy_efficiency"] for e in result.summaries if e.policy == policy]
            if not all(a > b for a, b in zip(ee, ee[1:])):
                failures.append(f"EE not decreasing in s for {policy} on the {name} sweep")

    # utilization: mbs_only tracks no_offloading while the MBS is congested, then splits off
    util = _read_figure(emit_figure_data(congestion.summaries, "utilization_vs_s", tmp_path / "u.csv"))
    mo = {p["x"]: p["y"] for p in util if p["policy"] == "mbs_only"}
    no = {p["x"]: p["y"] for p in util if p["policy"] == "no_offloading"}
    rel = [(s, mo[s] / no[s] - 1.0) for s in sorted(mo)]
    labels = ["coincide" if abs(r) <= COINCIDE_REL else "diverge" if r >= DIVERGE_REL else "between" for _, r in rel]
    n_coincide = labels.index("diverge") if "diverge" in labels else len(labels)
    split_ok = (0 < n_coincide < len(labels)
                and set(labels[:n_coincide]) == {"coincide"} and set(labels[n_coincide:]) == {"diverge"})
    if not split_ok:
        failures.append(f"utilization curves do not split into coincide/diverge regimes: {rel}")
    turning = int(rel[n_coincide][0]) if split_ok else None

    report(6, not failures,
           f"EE decreasing in s (ee_vs_traffic, default, congestion sweeps); mbs_only/no_offloading utilization "
           f"coincide (<= {COINCIDE_REL:.1%}) for s < {turning} and diverge (>= {DIVERGE_REL:.0%}) from there"
           + ("" if not failures else "; " + " | ".join(failures)))


def test_criterion_7_invariants(tmp_path):
    rng = np.random.default_rng(20240607)
    failures = []

    # delta-P against the network-power difference on random instances
    worst = 0.0
    for _ in range(10_000):
        sbs = PowerProfile(*rng.uniform([0.5, 0.5, 60, 1], [20, 40, 300, 59]))
        target = PowerProfile(*rng.uniform([0.5, 0.5, 60, 1], [20, 40, 300, 59]))
        phi = rng.uniform(0.01, 1.0)
        lam = rng.uniform(0.0, 1.0)
        base = rng.uniform(0.0, 1.0 - phi * lam)
        before = network_power(base, 0.4, [lam], [1], target, MBS_PROFILE, sbs)
        after = network_power(base + phi * lam, 0.4, [0.0], [0], target, MBS_PROFILE, sbs)
        err = abs(switch_off_delta(sbs, lam, target, phi) - (after - before)) / max(abs(before), 1.0)
        worst = max(worst, err)
    if worst > 1e-9:
        failures.append(f"delta-P mismatch {worst:.2e}")

    # conservation, feasibility and transition inverse across every policy on seeded slots
    config = replace(DEFAULT, sbs_counts=(10,))
    topo = build_topology(config, config.seed, 10)
    traffic = config.traffic_config(config.total_demand_points[0])
    policies = {p: get_policy(p) for p in POLICY_NAMES}
    worst_conservation = worst_inverse = 0.0
    for slot in range(200):
        snap = generate_snapshot(topo, traffic, config.seed, slot)
        start = state_from_snapshot(snap, topo)
        served = served_traffic(start, topo)
        for name, fn in policies.items():
            decision = fn(snap, topo)
            if not (decision.feasible and feasible(decision.state)):
                failures.append(f"{name} emitted an infeasible decision at slot {slot}")
            worst_conservation = max(worst_conservation, abs(served_traffic(decision.state, topo) - served) / served)
        for i, cell in enumerate(topo.sbs):
            if start.target_load(cell.target) + topo.phis[i] * start.lambda_sbs[i] > 1.0:
                continue
            off = apply_switch_off(start, i, cell.target, topo.phis[i])
            back = apply_switch_on(off, i, float(snap.tau_sbs[i]), cell.target, topo.phis[i], cell.capacity)
            if back.delta != start.delta:
                failures.append(f"inverse broke delta at slot {slot}, SBS {i}")
            diffs = [abs(a - b) for a, b in zip(back.lambda_sbs, start.lambda_sbs)]
            diffs += [abs(back.lambda_haps - start.lambda_haps), abs(back.lambda_mbs - start.lambda_mbs)]
            worst_inverse = max(worst_inverse, *diffs)
    if worst_conservation > 1e-12:
        failures.append(f"served traffic changed by {worst_conservation:.2e} (relative)")
    if worst_inverse > 1e-12:
        failures.append(f"switch-on after switch-off off by {worst_inverse:.2e}")

    # byte-identical reruns
    rerun = replace(DEFAULT, num_slots=1, sbs_counts=(10, 20))
    a = emit_csv(run_experiment(rerun).rows, tmp_path / "a.csv").read_bytes()
    b = emit_csv(run_experiment(rerun).rows, tmp_path / "b.csv").read_bytes()
    if a != b:
        failures.append("reruns at a fixed seed differ")

    report(7, not failures,
           f"10000 delta-P instances (worst {worst:.1e}), conservation (worst {worst_conservation:.1e}), "
           f"inverse (worst {worst_inverse:.1e}), feasibility, byte-identical reruns"
           + ("" if not failures else "; " + " | ".join(failures)))
