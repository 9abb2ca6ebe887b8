"""Per-slot offered traffic: a softmax split over the small cells, the rest to MBS/HAPS."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import softmax

from .errors import ConfigurationError, DomainError, InfeasibleDemandError
from .topology import Topology

logger = logging.getLogger(__name__)

TRAFFIC_STREAM = 1


@dataclass(frozen=True)
class TrafficConfig:
    """Traffic generator settings.

    ``total_demand`` is either a fixed value in Gbps or a ``(low, high)``
    range sampled uniformly per slot.
    """

    total_demand: float | tuple[float, float]
    sbs_share: float = 0.8
    temperature: float = 1.0
    strict: bool = False

    def __post_init__(self):
        demand = self.total_demand
        bounds = demand if isinstance(demand, tuple) else (demand, demand)
        if len(bounds) != 2 or not (0 <= bounds[0] <= bounds[1]):
            raise ConfigurationError(f"total_demand must be >= 0 or an ordered (low, high) range, got {demand!r}")
        if not (0.0 <= self.sbs_share <= 1.0):
            raise ConfigurationError(f"sbs_share must lie in [0, 1], got {self.sbs_share!r}")
        if not self.temperature > 0:
            raise ConfigurationError(f"softmax temperature must be positive, got {self.temperature!r}")


@dataclass(frozen=True)
class TrafficSnapshot:
    slot_index: int
    tau_sbs: np.ndarray
    tau_mbs: float
    tau_haps: float
    total_demand: float
    overflow: float = 0.0

    @property
    def served(self) -> float:
        return math.fsum(self.tau_sbs) + self.tau_mbs + self.tau_haps


def load_factor(tau: float, capacity: float) -> float:
    """Carried traffic as a fraction of capacity."""
    if capacity <= 0:
        raise DomainError(f"capacity must be positive, got {capacity!r}")
    if tau < 0 or tau > capacity:
        raise DomainError(f"traffic {tau!r} Gbps outside [0, {capacity!r}]")
    return tau / capacity


def slot_rng(seed: int, slot: int) -> np.random.Generator:
    """Independent generator for one slot, so slots can be produced in any order."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(TRAFFIC_STREAM, slot)))


def softmax_weights(logits: np.ndarray, temperature: float) -> np.ndarray:
    if logits.size == 0:
        return logits.astype(float)
    if math.isinf(temperature):
        return np.full(logits.size, 1.0 / logits.size)
    return softmax(logits / temperature)


def split_traffic(
    topology: Topology,
    total_demand: float,
    weights: np.ndarray,
    sbs_share: float,
) -> tuple[np.ndarray, float, float, float]:
    """Distribute ``total_demand`` given SBS weights.

    Returns ``(tau_sbs, tau_mbs, tau_haps, overflow)``. Small cells are
    clipped first and their excess joins the MBS/HAPS remainder, which is
    split in proportion to capacity and clipped in turn.
    """
    caps = topology.sbs_capacities
    if caps.size:
        tau_sbs = np.minimum(sbs_share * total_demand * weights, caps)
    else:
        tau_sbs = np.zeros(0)
    remainder = max(0.0, total_demand - math.fsum(tau_sbs))

    c_mbs, c_haps = topology.mbs.capacity, topology.haps.capacity
    tau_mbs = min(remainder * c_mbs / (c_mbs + c_haps), c_mbs)
    tau_haps = min(remainder - tau_mbs, c_haps)
    overflow = max(0.0, remainder - tau_mbs - tau_haps)
    return tau_sbs, tau_mbs, tau_haps, overflow


def generate_snapshot(topology: Topology, config: TrafficConfig, seed: int, slot: int) -> TrafficSnapshot:
    """Draw the offered traffic of one slot. Deterministic in ``(seed, slot)``."""
    rng = slot_rng(seed, slot)
    if isinstance(config.total_demand, tuple):
        total = float(rng.uniform(*config.total_demand))
    else:
        total = float(config.total_demand)
    if total > topology.total_capacity:
        raise InfeasibleDemandError(
            f"slot {slot}: demand {total:g} Gbps exceeds network capacity {topology.total_capacity:g} Gbps"
        )

    logits = rng.standard_normal(topology.s)
    weights = softmax_weights(logits, config.temperature)
    tau_sbs, tau_mbs, tau_haps, overflow = split_traffic(topology, total, weights, config.sbs_share)
    if overflow > 0:
        if config.strict:
            raise InfeasibleDemandError(f"slot {slot}: {overflow:g} Gbps cannot be placed after clipping")
        logger.debug("slot %d: discarding %.6g Gbps overflow", slot, overflow)
    return TrafficSnapshot(slot, tau_sbs, tau_mbs, tau_haps, total, overflow)
