import numpy as np
import pytest

from vhetnet.power_model import HAPS_PROFILE, MBS_PROFILE, SBS_PROFILE
from vhetnet.topology import HAPS, MBS, BaseStation, SmallCell, Topology
from vhetnet.traffic import TrafficSnapshot

ACCEPTANCE_LINES: list[str] = []


def make_topology(targets, sbs_capacity=5.0, sbs_profile=SBS_PROFILE):
    """Default-class topology with the given per-SBS offload targets."""
    cells = tuple(SmallCell(i, sbs_capacity, sbs_profile, t) for i, t in enumerate(targets))
    return Topology(BaseStation(40.0, HAPS_PROFILE), BaseStation(10.0, MBS_PROFILE), cells)


def make_snapshot(topology, sbs_loads, lambda_mbs=0.0, lambda_haps=0.0, slot=0):
    tau = np.array(sbs_loads, dtype=float) * topology.sbs_capacities
    tau_mbs = lambda_mbs * topology.mbs.capacity
    tau_haps = lambda_haps * topology.haps.capacity
    return TrafficSnapshot(slot, tau, tau_mbs, tau_haps, float(tau.sum() + tau_mbs + tau_haps))


@pytest.fixture
def two_haps():
    return make_topology([HAPS, HAPS])


@pytest.fixture
def one_mbs():
    return make_topology([MBS])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
