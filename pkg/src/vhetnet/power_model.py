"""EARTH base-station power model, switch-off deltas and offloading thresholds.

All powers are in watts, capacities in Gbps. Load factors are plain floats
in [0, 1]; the helpers here validate them instead of wrapping them.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigurationError, DomainError, InconsistentStateError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PowerProfile:
    """Per-class power constants of a base station.

    ``eta`` is the power-amplifier efficiency factor, the three powers are
    the transmit, operational-circuit and sleep-circuit powers in watts.
    """

    eta: float
    p_transmit: float
    p_operational: float
    p_sleep: float

    def __post_init__(self):
        for name in ("eta", "p_transmit", "p_operational", "p_sleep"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ConfigurationError(f"PowerProfile.{name} must be strictly positive, got {value!r}")
        if self.p_sleep >= self.p_operational:
            raise ConfigurationError(
                f"PowerProfile.p_sleep ({self.p_sleep}) must be below p_operational ({self.p_operational})"
            )

    @property
    def load_slope(self) -> float:
        """Watts added per unit of load factor when active (eta * P_T)."""
        return self.eta * self.p_transmit


# Default per-class profiles.
HAPS_PROFILE = PowerProfile(eta=15.0, p_transmit=20.0, p_operational=130.0, p_sleep=75.0)
MBS_PROFILE = PowerProfile(eta=4.7, p_transmit=20.0, p_operational=130.0, p_sleep=75.0)
SBS_PROFILE = PowerProfile(eta=2.6, p_transmit=6.3, p_operational=56.0, p_sleep=39.0)


def check_load(load: float, name: str = "load") -> float:
    if not (0.0 <= load <= 1.0):
        raise DomainError(f"{name} must lie in [0, 1], got {load!r}")
    return float(load)


def bs_power(profile: PowerProfile, load: float) -> float:
    """Instantaneous power of one base station.

    Active stations (``load > 0``) draw ``P_O + eta * load * P_T``; a station
    with no load sleeps at ``P_S``.
    """
    load = check_load(load)
    if load == 0.0:
        return profile.p_sleep
    return profile.p_operational + profile.load_slope * load


def active_power(profile: PowerProfile, load: float) -> float:
    """Power of a station held ON regardless of its load (HAPS, MBS, ON SBSs)."""
    load = check_load(load)
    return profile.p_operational + profile.load_slope * load


def network_power(
    haps_load: float,
    mbs_load: float,
    sbs_loads: Sequence[float],
    states: Sequence[int],
    haps_profile: PowerProfile = HAPS_PROFILE,
    mbs_profile: PowerProfile = MBS_PROFILE,
    sbs_profiles: PowerProfile | Sequence[PowerProfile] = SBS_PROFILE,
) -> float:
    """Total network power for one state vector.

    The HAPS and MBS are always ON. An ON small cell draws its active power
    even at zero load; an OFF one draws its sleep power and must carry no
    load.
    """
    if len(sbs_loads) != len(states):
        raise DomainError(f"got {len(sbs_loads)} SBS loads but {len(states)} states")
    if isinstance(sbs_profiles, PowerProfile):
        sbs_profiles = [sbs_profiles] * len(states)
    elif len(sbs_profiles) != len(states):
        raise DomainError(f"got {len(sbs_profiles)} SBS profiles but {len(states)} states")

    total = active_power(haps_profile, haps_load) + active_power(mbs_profile, mbs_load)
    for i, (load, delta, profile) in enumerate(zip(sbs_loads, states, sbs_profiles)):
        check_load(load, f"sbs_loads[{i}]")
        if delta == 1:
            total += profile.p_operational + profile.load_slope * load
        elif delta == 0:
            if load != 0.0:
                raise InconsistentStateError(f"SBS {i} is OFF but carries load {load!r}")
            total += profile.p_sleep
        else:
            raise DomainError(f"states[{i}] must be 0 or 1, got {delta!r}")
    return total


def switch_off_delta(
    sbs_profile: PowerProfile,
    sbs_load: float,
    target_profile: PowerProfile,
    phi: float,
) -> float:
    """Change in network power when one SBS sleeps and its load moves to a target.

    Negative means switching off saves power. Only the SBS and the target
    change state, so the difference reduces to four terms.
    """
    return (
        target_profile.load_slope * phi * sbs_load
        + sbs_profile.p_sleep
        - sbs_profile.p_operational
        - sbs_profile.load_slope * sbs_load
    )


def offload_threshold(
    sbs_profile: PowerProfile,
    target_profile: PowerProfile,
    phi: float,
) -> float:
    """Largest SBS load factor for which offloading to the target saves power.

    Raises ``ConfigurationError`` when the relative capacity makes the
    denominator non-positive. A threshold at or above 1 is clamped to 1 with
    a warning, since then every feasible load qualifies.
    """
    denominator = phi * target_profile.load_slope - sbs_profile.load_slope
    if denominator <= 0:
        raise ConfigurationError(
            f"relative capacity phi={phi!r} gives a non-positive threshold denominator "
            f"({denominator!r}); phi must exceed {sbs_profile.load_slope / target_profile.load_slope!r}"
        )
    rho = (sbs_profile.p_operational - sbs_profile.p_sleep) / denominator
    if rho >= 1.0:
        logger.warning("offload threshold %.6g >= 1 for phi=%r; clamping to 1", rho, phi)
        return 1.0
    return rho


def relative_capacity(c_sbs: float, c_target: float) -> float:
    """Ratio of an SBS capacity to its offload target's capacity."""
    if not (c_sbs > 0 and c_target > 0):
        raise DomainError(f"capacities must be positive, got {c_sbs!r} and {c_target!r}")
    return c_sbs / c_target
