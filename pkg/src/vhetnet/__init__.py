"""Energy-aware small-cell switching in a HAPS + MBS + SBS vertical HetNet."""
from .config import SimConfig, congestion_config, ee_traffic_config, load_config, parse_config
from .errors import (
    ConfigurationError,
    DomainError,
    InconsistentStateError,
    InfeasibleDemandError,
    InfeasibleTransitionError,
    VHetNetError,
)
from .experiment import emit_csv, emit_figure_data, figure_series, read_csv, run_experiment
from .kpi import KpiRecord, RunSummary, aggregate, capacity_utilization, energy_efficiency, grid_power
from .policies import (
    NetworkLoadState,
    SwitchDecision,
    apply_switch_off,
    apply_switch_on,
    feasible,
    policy_exhaustive,
    policy_haps_mbs,
    policy_mbs_only,
    policy_no_offloading,
)
from .power_model import (
    HAPS_PROFILE,
    MBS_PROFILE,
    SBS_PROFILE,
    PowerProfile,
    bs_power,
    network_power,
    offload_threshold,
    relative_capacity,
    switch_off_delta,
)
from .topology import HAPS, MBS, Topology, build_topology, partition_sets
from .traffic import TrafficConfig, TrafficSnapshot, generate_snapshot, load_factor

__version__ = "0.1.0"
