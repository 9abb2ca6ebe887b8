"""Fixed vHetNet layout: one HAPS, one MBS and a tier of small cells."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from .errors import ConfigurationError
from .power_model import PowerProfile, offload_threshold, relative_capacity

if TYPE_CHECKING:
    from .config import SimConfig

HAPS = "HAPS"
MBS = "MBS"
TARGETS = (HAPS, MBS)

# spawn-key tag separating topology draws from traffic draws of the same seed
TOPOLOGY_STREAM = 0


@dataclass(frozen=True)
class BaseStation:
    capacity: float
    profile: PowerProfile


@dataclass(frozen=True)
class SmallCell:
    id: int
    capacity: float
    profile: PowerProfile
    target: str
    position: tuple[float, float] | None = None

    @property
    def distance(self) -> float | None:
        if self.position is None:
            return None
        return math.hypot(*self.position)


@dataclass(frozen=True)
class Radii:
    """Coverage radii in metres: HAPS serving area, macro cell, small cell."""

    r1_haps: float = 564.0
    r2_mbs: float = 471.0
    r3_sbs: float = 60.0


@dataclass(frozen=True)
class Topology:
    haps: BaseStation
    mbs: BaseStation
    sbs: tuple[SmallCell, ...]
    radii: Radii = field(default_factory=Radii)
    gamma: float = 0.7
    partition_mode: str = "ratio"

    def __post_init__(self):
        for i, cell in enumerate(self.sbs):
            if cell.id != i:
                raise ConfigurationError(f"small cell ids must be 0..s-1 in order, got id {cell.id} at {i}")
            if cell.target not in TARGETS:
                raise ConfigurationError(f"SBS {i} has unknown offload target {cell.target!r}")

    @property
    def s(self) -> int:
        return len(self.sbs)

    def station(self, target: str) -> BaseStation:
        if target == HAPS:
            return self.haps
        if target == MBS:
            return self.mbs
        raise ConfigurationError(f"unknown offload target {target!r}")

    def phi(self, sbs_id: int, target: str | None = None) -> float:
        """Relative capacity of an SBS w.r.t. ``target`` (default: its own target)."""
        cell = self.sbs[sbs_id]
        return relative_capacity(cell.capacity, self.station(target or cell.target).capacity)

    def threshold(self, sbs_id: int, target: str | None = None) -> float:
        cell = self.sbs[sbs_id]
        target = target or cell.target
        return offload_threshold(cell.profile, self.station(target).profile, self.phi(sbs_id, target))

    @cached_property
    def thresholds(self) -> tuple[float, ...]:
        """Offload threshold of every SBS towards its own target."""
        return tuple(self.threshold(i) for i in range(self.s))

    @cached_property
    def phis(self) -> tuple[float, ...]:
        return tuple(self.phi(i) for i in range(self.s))

    @cached_property
    def mbs_only_view(self) -> "Topology":
        """This topology with every SBS pointed at the MBS."""
        return self.with_all_targets(MBS)

    @cached_property
    def sbs_capacities(self) -> np.ndarray:
        return np.array([c.capacity for c in self.sbs], dtype=float)

    @property
    def total_capacity(self) -> float:
        return self.haps.capacity + self.mbs.capacity + float(self.sbs_capacities.sum())

    def with_all_targets(self, target: str) -> "Topology":
        """Copy of this topology with every SBS re-pointed at ``target``."""
        return replace(self, sbs=tuple(replace(c, target=target) for c in self.sbs))


def partition_sets(topology: Topology) -> tuple[list[int], list[int]]:
    """Split SBS ids into the HAPS-offloadable and MBS-offloadable sets."""
    to_haps = [c.id for c in topology.sbs if c.target == HAPS]
    to_mbs = [c.id for c in topology.sbs if c.target == MBS]
    return to_haps, to_mbs


def haps_count(gamma: float, s: int) -> int:
    """Number of HAPS-targeted cells, gamma * s rounded half up."""
    # the epsilon absorbs products like 0.7 * 45 = 31.499999999999996
    return min(s, int(math.floor(gamma * s + 0.5 + 1e-9)))


def geometric_target(position: tuple[float, float], radii: Radii) -> str:
    """MBS if the whole small cell fits inside the macro cell, else HAPS."""
    return MBS if math.hypot(*position) <= radii.r2_mbs - radii.r3_sbs else HAPS


def sample_positions(rng: np.random.Generator, n: int, radius: float) -> list[tuple[float, float]]:
    """Uniform points in a disk of the given radius."""
    r = radius * np.sqrt(rng.random(n))
    theta = 2.0 * np.pi * rng.random(n)
    return [(float(x), float(y)) for x, y in zip(r * np.cos(theta), r * np.sin(theta))]


def build_topology(config: "SimConfig", seed: int | None = None, n_sbs: int | None = None) -> Topology:
    """Build the network for ``n_sbs`` small cells (default: first sweep point).

    Deterministic in ``(config, seed, n_sbs)``.
    """
    config.validate()
    seed = config.seed if seed is None else seed
    s = config.sbs_counts[0] if n_sbs is None else n_sbs
    if s < 0:
        raise ConfigurationError(f"sbs count must be non-negative, got {s}")
    radii = Radii(config.r1_haps, config.r2_mbs, config.r3_sbs)
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(TOPOLOGY_STREAM, s)))

    positions: list[tuple[float, float]] | list[None]
    if config.partition_mode == "geometric":
        if config.sbs_positions is not None:
            if len(config.sbs_positions) != s:
                raise ConfigurationError(
                    f"sbs_positions has {len(config.sbs_positions)} entries but s={s}"
                )
            positions = [tuple(map(float, p)) for p in config.sbs_positions]
        else:
            positions = sample_positions(rng, s, radii.r1_haps - radii.r3_sbs)
        targets = [geometric_target(p, radii) for p in positions]
    elif config.partition_mode == "ratio":
        order = rng.permutation(s)
        n_haps = haps_count(config.gamma, s)
        targets = [MBS] * s
        for sbs_id in order[:n_haps]:
            targets[int(sbs_id)] = HAPS
        positions = [None] * s
    else:
        raise ConfigurationError(f"partition_mode must be 'ratio' or 'geometric', got {config.partition_mode!r}")

    cells = []
    for i in range(s):
        override = config.sbs_overrides.get(i, {})
        capacity = float(override.get("capacity_gbps", config.sbs_capacity))
        profile_fields = {k: override[k] for k in ("eta", "p_transmit", "p_operational", "p_sleep") if k in override}
        profile = replace(config.sbs_profile, **profile_fields) if profile_fields else config.sbs_profile
        if capacity <= 0:
            raise ConfigurationError(f"sbs_override.{i}.capacity_gbps must be positive, got {capacity}")
        cells.append(SmallCell(i, capacity, profile, targets[i], positions[i]))

    return Topology(
        haps=BaseStation(config.haps_capacity, config.haps_profile),
        mbs=BaseStation(config.mbs_capacity, config.mbs_profile),
        sbs=tuple(cells),
        radii=radii,
        gamma=config.gamma,
        partition_mode=config.partition_mode,
    )
