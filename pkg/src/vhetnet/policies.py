"""State transitions, feasibility and the four cell-switching policies."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigurationError, InconsistentStateError, InfeasibleTransitionError
from .power_model import network_power
from .topology import HAPS, MBS, TARGETS, Topology
from .traffic import TrafficSnapshot

# Slack for capacity and sign checks on accumulated load factors.
LOAD_TOL = 1e-12
# Powers closer than this are treated as ties by the exhaustive search.
POWER_TIE_TOL = 1e-9

POLICY_NAMES = ("no_offloading", "mbs_only", "haps_mbs", "exhaustive")


@dataclass(frozen=True)
class NetworkLoadState:
    lambda_haps: float
    lambda_mbs: float
    lambda_sbs: tuple[float, ...]
    delta: tuple[int, ...]

    def target_load(self, target: str) -> float:
        if target == HAPS:
            return self.lambda_haps
        if target == MBS:
            return self.lambda_mbs
        raise ConfigurationError(f"unknown offload target {target!r}")

    def _with_target_load(self, target: str, value: float) -> "NetworkLoadState":
        if target == HAPS:
            return replace(self, lambda_haps=value)
        return replace(self, lambda_mbs=value)

    @property
    def active_count(self) -> int:
        return sum(self.delta)


@dataclass(frozen=True)
class SwitchDecision:
    state: NetworkLoadState
    policy_name: str
    total_power: float
    feasible: bool


def state_from_snapshot(snapshot: TrafficSnapshot, topology: Topology) -> NetworkLoadState:
    """All-ON state carrying the snapshot's own load factors."""
    caps = topology.sbs_capacities
    return NetworkLoadState(
        lambda_haps=snapshot.tau_haps / topology.haps.capacity,
        lambda_mbs=snapshot.tau_mbs / topology.mbs.capacity,
        lambda_sbs=tuple(float(x) for x in np.asarray(snapshot.tau_sbs) / caps) if caps.size else (),
        delta=(1,) * topology.s,
    )


def apply_switch_off(state: NetworkLoadState, sbs_id: int, target: str, phi: float) -> NetworkLoadState:
    """Put one SBS to sleep and move its load onto ``target``."""
    if state.delta[sbs_id] == 0:
        raise InfeasibleTransitionError(f"SBS {sbs_id} is already OFF")
    moved = phi * state.lambda_sbs[sbs_id]
    new_load = state.target_load(target) + moved
    if new_load > 1.0 + LOAD_TOL:
        raise InfeasibleTransitionError(
            f"offloading SBS {sbs_id} would raise the {target} load factor to {new_load:.6g}"
        )
    lam = list(state.lambda_sbs)
    delta = list(state.delta)
    lam[sbs_id] = 0.0
    delta[sbs_id] = 0
    return replace(state, lambda_sbs=tuple(lam), delta=tuple(delta))._with_target_load(target, new_load)


def apply_switch_on(
    state: NetworkLoadState,
    sbs_id: int,
    tau_i: float,
    target: str,
    phi: float,
    capacity: float,
) -> NetworkLoadState:
    """Wake one SBS and hand it back ``tau_i`` Gbps from ``target``."""
    if state.delta[sbs_id] == 1:
        raise InfeasibleTransitionError(f"SBS {sbs_id} is already ON")
    lam_i = tau_i / capacity
    new_load = state.target_load(target) - phi * lam_i
    if new_load < -LOAD_TOL:
        raise InconsistentStateError(
            f"waking SBS {sbs_id} would drive the {target} load factor to {new_load:.6g}"
        )
    lam = list(state.lambda_sbs)
    delta = list(state.delta)
    lam[sbs_id] = lam_i
    delta[sbs_id] = 1
    return replace(state, lambda_sbs=tuple(lam), delta=tuple(delta))._with_target_load(target, max(new_load, 0.0))


def feasible(state: NetworkLoadState) -> bool:
    """Capacity constraints on HAPS/MBS plus OFF-implies-zero-load for every SBS."""
    if not (0.0 <= state.lambda_haps <= 1.0 + LOAD_TOL and 0.0 <= state.lambda_mbs <= 1.0 + LOAD_TOL):
        return False
    if len(state.lambda_sbs) != len(state.delta):
        return False
    for lam, d in zip(state.lambda_sbs, state.delta):
        if d not in (0, 1) or not (0.0 <= lam <= 1.0):
            return False
        if d == 0 and lam != 0.0:
            return False
    return True


def served_traffic(state: NetworkLoadState, topology: Topology) -> float:
    parts = [lam * c.capacity for lam, c in zip(state.lambda_sbs, topology.sbs)]
    parts += [state.lambda_mbs * topology.mbs.capacity, state.lambda_haps * topology.haps.capacity]
    return math.fsum(parts)


def state_power(state: NetworkLoadState, topology: Topology) -> float:
    return network_power(
        min(state.lambda_haps, 1.0),
        min(state.lambda_mbs, 1.0),
        state.lambda_sbs,
        state.delta,
        topology.haps.profile,
        topology.mbs.profile,
        [c.profile for c in topology.sbs],
    )


def _decide(state: NetworkLoadState, topology: Topology, name: str) -> SwitchDecision:
    return SwitchDecision(state, name, state_power(state, topology), feasible(state))


def policy_no_offloading(snapshot: TrafficSnapshot, topology: Topology) -> SwitchDecision:
    """Every small cell stays ON."""
    return _decide(state_from_snapshot(snapshot, topology), topology, "no_offloading")


def _greedy_phase(state: NetworkLoadState, topology: Topology, target: str) -> NetworkLoadState:
    """Offload the lightest cells of one target set until a stop condition is hit."""
    members = [c.id for c in topology.sbs if c.target == target]
    members.sort(key=lambda i: (state.lambda_sbs[i], i))
    for i in members:
        lam = state.lambda_sbs[i]
        if lam > topology.thresholds[i]:
            break
        phi = topology.phis[i]
        if state.target_load(target) + phi * lam > 1.0 + LOAD_TOL:
            break
        state = apply_switch_off(state, i, target, phi)
    return state


def policy_haps_mbs(
    snapshot: TrafficSnapshot,
    topology: Topology,
    phase_order: Sequence[str] = (HAPS, MBS),
) -> SwitchDecision:
    """Single-pass greedy: HAPS-targeted cells first, then MBS-targeted cells."""
    if sorted(phase_order) != sorted(TARGETS):
        raise ConfigurationError(f"phase_order must contain HAPS and MBS once each, got {phase_order!r}")
    state = state_from_snapshot(snapshot, topology)
    for target in phase_order:
        state = _greedy_phase(state, topology, target)
    return _decide(state, topology, "haps_mbs")


def policy_mbs_only(snapshot: TrafficSnapshot, topology: Topology) -> SwitchDecision:
    """Greedy offloading with the MBS as the only target (gamma = 0)."""
    mbs_view = topology.mbs_only_view
    state = _greedy_phase(state_from_snapshot(snapshot, mbs_view), mbs_view, MBS)
    return _decide(state, topology, "mbs_only")


def _mask_bits(masks: np.ndarray, s: int) -> np.ndarray:
    # bit (s-1-i) of the mask is delta_i, so numeric order == lexicographic order of delta
    shifts = np.arange(s - 1, -1, -1, dtype=np.int64)
    return ((masks[:, None] >> shifts) & 1).astype(np.int8)


def enumerate_powers(
    state: NetworkLoadState, topology: Topology, chunk: int = 1 << 16
) -> tuple[np.ndarray, np.ndarray]:
    """Network power and feasibility for every state vector.

    Index ``m`` of the returned arrays is the vector whose delta_i is bit
    ``s-1-i`` of ``m``. Load transfer follows each cell's designated target.
    """
    s = topology.s
    lam = np.array(state.lambda_sbs, dtype=float)
    to_haps = np.array([c.target == HAPS for c in topology.sbs], dtype=bool)
    phis = np.array(topology.phis, dtype=float)
    add_haps = np.where(to_haps, phis * lam, 0.0)
    add_mbs = np.where(~to_haps, phis * lam, 0.0)
    p_on = np.array([c.profile.p_operational + c.profile.load_slope * l for c, l in zip(topology.sbs, lam)])
    p_off = np.array([c.profile.p_sleep for c in topology.sbs])
    hp, mp = topology.haps.profile, topology.mbs.profile

    n = 1 << s
    powers = np.empty(n)
    ok = np.empty(n, dtype=bool)
    for start in range(0, n, chunk):
        masks = np.arange(start, min(n, start + chunk), dtype=np.int64)
        on = _mask_bits(masks, s)
        off = 1 - on
        lam_h = state.lambda_haps + off @ add_haps
        lam_m = state.lambda_mbs + off @ add_mbs
        powers[start:start + masks.size] = (
            hp.p_operational + hp.load_slope * lam_h
            + mp.p_operational + mp.load_slope * lam_m
            + on @ p_on + off @ p_off
        )
        ok[start:start + masks.size] = (lam_h <= 1.0 + LOAD_TOL) & (lam_m <= 1.0 + LOAD_TOL)
    return powers, ok


def policy_exhaustive(snapshot: TrafficSnapshot, topology: Topology, max_s: int = 20) -> SwitchDecision:
    """Brute-force minimum over all 2**s state vectors.

    Ties (within ``POWER_TIE_TOL`` watts) go to the vector with more cells
    ON, then to the lexicographically smallest delta.
    """
    s = topology.s
    if s > max_s:
        raise ConfigurationError(
            f"exhaustive search over s={s} cells needs 2**{s} states; "
            f"raise the guard explicitly (max_s / es_max_s >= {s}) to run it"
        )
    start = state_from_snapshot(snapshot, topology)
    powers, ok = enumerate_powers(start, topology)
    if not ok.any():
        raise InconsistentStateError("no feasible state vector; the all-ON snapshot itself overloads HAPS or MBS")
    best = powers[ok].min()
    candidates = np.flatnonzero(ok & (powers <= best + POWER_TIE_TOL))
    ones = np.array([bin(int(m)).count("1") for m in candidates])
    mask = int(candidates[ones == ones.max()].min())

    state = start
    for i in range(s):
        if not (mask >> (s - 1 - i)) & 1:
            state = apply_switch_off(state, i, topology.sbs[i].target, topology.phis[i])
    return _decide(state, topology, "exhaustive")


PolicyFn = Callable[[TrafficSnapshot, Topology], SwitchDecision]


def get_policy(name: str, es_max_s: int = 20, phase_order: Sequence[str] = (HAPS, MBS)) -> PolicyFn:
    if name == "no_offloading":
        return policy_no_offloading
    if name == "mbs_only":
        return policy_mbs_only
    if name == "haps_mbs":
        return lambda snap, topo: policy_haps_mbs(snap, topo, phase_order)
    if name == "exhaustive":
        return lambda snap, topo: policy_exhaustive(snap, topo, es_max_s)
    raise ConfigurationError(f"unknown policy {name!r}; choose from {', '.join(POLICY_NAMES)}")
