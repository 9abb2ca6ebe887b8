"""Per-slot performance indicators and run-level aggregation."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .errors import DomainError
from .policies import SwitchDecision, served_traffic
from .power_model import active_power
from .topology import Topology

BITS_PER_JOULE_PER_GBPS_PER_WATT = 1e9


@dataclass(frozen=True)
class KpiRecord:
    slot_index: int
    total_power: float
    grid_power: float
    served_traffic: float
    energy_efficiency: float
    active_capacity: float
    capacity_utilization: float
    active_sbs_count: int


NUMERIC_FIELDS = tuple(f.name for f in fields(KpiRecord) if f.name != "slot_index")


@dataclass(frozen=True)
class RunSummary:
    mean: dict[str, float]
    std: dict[str, float]
    n_slots: int
    seed: int | None = None
    config: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def energy_efficiency(served: float, total_power: float) -> float:
    """Served traffic per watt (Gbps/W)."""
    if not total_power > 0:
        raise DomainError(f"total power must be positive, got {total_power!r}")
    return served / total_power


def haps_power(decision: SwitchDecision, topology: Topology) -> float:
    return active_power(topology.haps.profile, min(decision.state.lambda_haps, 1.0))


def grid_power(decision: SwitchDecision, topology: Topology) -> float:
    """Network power drawn from the grid: everything except the solar-fed HAPS."""
    return decision.total_power - haps_power(decision, topology)


def active_capacity(decision: SwitchDecision, topology: Topology) -> float:
    on = [c.capacity for c, d in zip(topology.sbs, decision.state.delta) if d == 1]
    return math.fsum([topology.haps.capacity, topology.mbs.capacity, *on])


def capacity_utilization(decision: SwitchDecision, topology: Topology) -> float:
    """Served traffic over the summed capacity of HAPS, MBS and every ON small cell."""
    return served_traffic(decision.state, topology) / active_capacity(decision, topology)


def kpi_record(decision: SwitchDecision, topology: Topology, slot_index: int) -> KpiRecord:
    served = served_traffic(decision.state, topology)
    cap = active_capacity(decision, topology)
    return KpiRecord(
        slot_index=slot_index,
        total_power=decision.total_power,
        grid_power=grid_power(decision, topology),
        served_traffic=served,
        energy_efficiency=energy_efficiency(served, decision.total_power),
        active_capacity=cap,
        capacity_utilization=served / cap,
        active_sbs_count=decision.state.active_count,
    )


def aggregate(records: list[KpiRecord], seed: int | None = None, config: dict | None = None) -> RunSummary:
    """Mean and population standard deviation of every numeric field."""
    if not records:
        raise DomainError("cannot aggregate an empty list of KPI records")
    mean, std = {}, {}
    for name in NUMERIC_FIELDS:
        values = np.array([getattr(r, name) for r in records], dtype=float)
        # summation rounding can push the mean a hair outside the sample range
        m = min(max(values.mean(), values.min()), values.max())
        mean[name] = float(m)
        # two-pass: deviations from the already computed mean
        std[name] = float(np.sqrt(np.mean((values - m) ** 2)))
    return RunSummary(mean=mean, std=std, n_slots=len(records), seed=seed, config=config)
