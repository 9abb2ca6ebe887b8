"""Simulation configuration and its flat ``key = value`` file format.

Example file::

    # lines starting with '#' are comments; lists are comma separated
    num_slots = 500
    sbs_counts = 10, 20, 30
    total_demand_points = 50
    gamma = 0.7
    sbs.p_sleep = 39
    sbs_override.3.capacity_gbps = 4

Every key maps onto a :class:`SimConfig` field; nested power-profile fields
use ``haps.``, ``mbs.`` and ``sbs.`` prefixes.
"""
from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigurationError
from .policies import POLICY_NAMES
from .power_model import HAPS_PROFILE, MBS_PROFILE, SBS_PROFILE, PowerProfile
from .topology import TARGETS
from .traffic import TrafficConfig

DEFAULT_SBS_COUNTS = (10, 20, 30, 40, 45, 50, 60, 70)
# energy-efficiency-vs-traffic demand axis: fractions of the total network capacity
EE_DEMAND_FRACTIONS = tuple(round(0.1 + k * 0.8 / 7, 12) for k in range(8))
PROFILE_FIELDS = ("eta", "p_transmit", "p_operational", "p_sleep")
_SECTION = "sim"


@dataclass(frozen=True)
class SimConfig:
    num_slots: int = 500
    sbs_counts: tuple[int, ...] = DEFAULT_SBS_COUNTS
    total_demand_points: tuple[float, ...] = (50.0,)
    # when set, demand points are these fractions of each sweep point's capacity
    demand_fractions: tuple[float, ...] | None = None
    # per-slot demand drawn uniformly from demand * (1 -/+ jitter)
    demand_jitter: float = 0.0
    gamma: float = 0.7
    r1_haps: float = 564.0
    r2_mbs: float = 471.0
    r3_sbs: float = 60.0
    haps_capacity: float = 40.0
    mbs_capacity: float = 10.0
    sbs_capacity: float = 5.0
    haps_profile: PowerProfile = HAPS_PROFILE
    mbs_profile: PowerProfile = MBS_PROFILE
    sbs_profile: PowerProfile = SBS_PROFILE
    sbs_share: float = 0.8
    softmax_temperature: float = 1.0
    seed: int = 1
    policies: tuple[str, ...] = POLICY_NAMES
    es_max_s: int = 20
    partition_mode: str = "ratio"
    strict_demand: bool = False
    sbs_positions: tuple[tuple[float, float], ...] | None = None
    sbs_overrides: dict[int, dict[str, float]] = field(default_factory=dict)
    phase_order: tuple[str, ...] = ("HAPS", "MBS")
    workers: int = 1

    def validate(self) -> "SimConfig":
        def bad(name, value, why):
            raise ConfigurationError(f"{name}={value!r}: {why}")

        if not isinstance(self.num_slots, int) or self.num_slots < 1:
            bad("num_slots", self.num_slots, "must be an integer >= 1")
        if not self.sbs_counts:
            bad("sbs_counts", self.sbs_counts, "sweep list must be non-empty")
        if any(not isinstance(s, int) or s < 0 for s in self.sbs_counts):
            bad("sbs_counts", self.sbs_counts, "entries must be non-negative integers")
        if self.demand_fractions is not None:
            if not self.demand_fractions or any(not 0 <= f <= 1 for f in self.demand_fractions):
                bad("demand_fractions", self.demand_fractions, "must be a non-empty list of values in [0, 1]")
        elif not self.total_demand_points or any(not d >= 0 for d in self.total_demand_points):
            bad("total_demand_points", self.total_demand_points, "must be a non-empty list of values >= 0")
        if not 0 <= self.demand_jitter < 1:
            bad("demand_jitter", self.demand_jitter, "must lie in [0, 1)")
        if not 0 <= self.gamma <= 1:
            bad("gamma", self.gamma, "must lie in [0, 1]")
        for name in ("haps_capacity", "mbs_capacity", "sbs_capacity", "r1_haps", "r2_mbs", "r3_sbs"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                bad(name, value, "must be strictly positive")
        if self.r3_sbs >= self.r1_haps:
            bad("r3_sbs", self.r3_sbs, "small-cell radius must be below the HAPS radius")
        if not 0 <= self.sbs_share <= 1:
            bad("sbs_share", self.sbs_share, "must lie in [0, 1]")
        if not self.softmax_temperature > 0:
            bad("softmax_temperature", self.softmax_temperature, "must be positive")
        if not isinstance(self.seed, int):
            bad("seed", self.seed, "an explicit integer seed is required")
        if not self.policies or any(p not in POLICY_NAMES for p in self.policies):
            bad("policies", self.policies, f"must be a non-empty subset of {', '.join(POLICY_NAMES)}")
        if self.es_max_s < 0:
            bad("es_max_s", self.es_max_s, "must be >= 0")
        if self.partition_mode not in ("ratio", "geometric"):
            bad("partition_mode", self.partition_mode, "must be 'ratio' or 'geometric'")
        if sorted(self.phase_order) != sorted(TARGETS):
            bad("phase_order", self.phase_order, "must list HAPS and MBS once each")
        if self.workers < 1:
            bad("workers", self.workers, "must be >= 1")
        return self

    def demand_points(self, s: int) -> tuple[float, ...]:
        """Absolute demand values (Gbps) simulated at sweep point ``s``."""
        if self.demand_fractions is None:
            return tuple(float(d) for d in self.total_demand_points)
        capacity = self.haps_capacity + self.mbs_capacity + s * self.sbs_capacity
        return tuple(f * capacity for f in self.demand_fractions)

    def traffic_config(self, demand: float) -> TrafficConfig:
        if self.demand_jitter:
            total = (demand * (1 - self.demand_jitter), demand * (1 + self.demand_jitter))
        else:
            total = demand
        return TrafficConfig(total, self.sbs_share, self.softmax_temperature, self.strict_demand)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["sbs_overrides"] = {str(k): v for k, v in self.sbs_overrides.items()}
        return out


# ---------------------------------------------------------------------------
# flat key-value file format
# ---------------------------------------------------------------------------

def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(x) for x in text.split(",") if x.strip())


def _ints(text: str) -> tuple[int, ...]:
    return tuple(int(x) for x in text.split(",") if x.strip())


def _strs(text: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _positions(text: str) -> tuple[tuple[float, float], ...]:
    # "x:y; x:y; ..."
    out = []
    for item in text.split(";"):
        if item.strip():
            x, y = item.split(":")
            out.append((float(x), float(y)))
    return tuple(out)


_PARSERS = {
    "num_slots": int,
    "sbs_counts": _ints,
    "total_demand_points": _floats,
    "demand_fractions": _floats,
    "demand_jitter": float,
    "gamma": float,
    "r1_haps": float,
    "r2_mbs": float,
    "r3_sbs": float,
    "haps_capacity_gbps": float,
    "mbs_capacity_gbps": float,
    "sbs_capacity_gbps": float,
    "sbs_share": float,
    "softmax_temperature": float,
    "seed": int,
    "policies": _strs,
    "es_max_s": int,
    "partition_mode": str.strip,
    "strict_demand": _bool,
    "sbs_positions": _positions,
    "phase_order": _strs,
    "workers": int,
}
# file keys that differ from field names carry their unit
_FIELD_FOR_KEY = {"haps_capacity_gbps": "haps_capacity", "mbs_capacity_gbps": "mbs_capacity", "sbs_capacity_gbps": "sbs_capacity"}


def parse_config(text: str, base: SimConfig | None = None) -> SimConfig:
    """Parse a flat ``key = value`` document on top of ``base`` (default: defaults)."""
    parser = configparser.ConfigParser(delimiters=("=",), comment_prefixes=("#",), inline_comment_prefixes=("#",))
    parser.optionxform = str.lower
    try:
        parser.read_string(f"[{_SECTION}]\n{text}")
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config: {exc}") from exc

    updates: dict = {}
    profiles = {"haps": {}, "mbs": {}, "sbs": {}}
    overrides: dict[int, dict[str, float]] = {}
    for key, raw in parser.items(_SECTION):
        try:
            if key in _PARSERS:
                updates[_FIELD_FOR_KEY.get(key, key)] = _PARSERS[key](raw)
            elif key.count(".") == 1 and key.split(".")[0] in profiles:
                owner, name = key.split(".")
                if name not in PROFILE_FIELDS:
                    raise ConfigurationError(f"unknown power-profile field {key!r}")
                profiles[owner][name] = float(raw)
            elif key.startswith("sbs_override."):
                _, idx, name = key.split(".")
                if name not in PROFILE_FIELDS + ("capacity_gbps",):
                    raise ConfigurationError(f"unknown per-SBS override {key!r}")
                overrides.setdefault(int(idx), {})[name] = float(raw)
            else:
                raise ConfigurationError(f"unknown config key {key!r}")
        except ConfigurationError:
            raise
        except ValueError as exc:
            raise ConfigurationError(f"config key {key!r}: {exc}") from exc

    config = base or SimConfig()
    for owner, values in profiles.items():
        if values:
            updates[f"{owner}_profile"] = replace(getattr(config, f"{owner}_profile"), **values)
    if overrides:
        updates["sbs_overrides"] = {**config.sbs_overrides, **overrides}
    return replace(config, **updates).validate()


def load_config(path: str | Path, base: SimConfig | None = None) -> SimConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file {path}: {exc}") from exc
    return parse_config(text, base)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, tuple):
        return ", ".join(_fmt(v) for v in value)
    return repr(value) if isinstance(value, float) else str(value)


def dump_config(config: SimConfig) -> str:
    """Inverse of :func:`parse_config`."""
    keys = {v: k for k, v in _FIELD_FOR_KEY.items()}
    lines = []
    for f in fields(SimConfig):
        value = getattr(config, f.name)
        if f.name.endswith("_profile"):
            owner = f.name.split("_")[0]
            lines += [f"{owner}.{name} = {_fmt(getattr(value, name))}" for name in PROFILE_FIELDS]
        elif f.name == "sbs_overrides":
            for idx in sorted(value):
                lines += [f"sbs_override.{idx}.{k} = {_fmt(v)}" for k, v in sorted(value[idx].items())]
        elif f.name == "sbs_positions":
            if value is not None:
                lines.append("sbs_positions = " + "; ".join(f"{x!r}:{y!r}" for x, y in value))
        elif value is not None:
            lines.append(f"{keys.get(f.name, f.name)} = {_fmt(value)}")
    return "\n".join(lines) + "\n"


def ee_traffic_config(base: SimConfig | None = None) -> SimConfig:
    """Energy efficiency vs. traffic: s in {10, 30, 50}, demand 10 % to 90 % of capacity."""
    base = base or SimConfig()
    return replace(base, sbs_counts=(10, 30, 50), demand_fractions=EE_DEMAND_FRACTIONS)


def congestion_config(base: SimConfig | None = None) -> SimConfig:
    """High fixed demand that saturates the MBS for small s (utilization turning point)."""
    base = base or SimConfig()
    return replace(
        base,
        sbs_counts=(8, 9, 10, 12, 14, 16, 20, 30, 45, 70),
        total_demand_points=(90.0,),
        demand_fractions=None,
    )
