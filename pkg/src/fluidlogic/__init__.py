"""Steady-state simulation of hydraulic logic circuits built from membrane valves."""

from .actuator import BendState, TentacleParams, actuate_demo, bend_from_pressures
from .components import (
    AndValveGeometry,
    CheckValveParams,
    FluidProps,
    HoseParams,
    MembraneModel,
    NotValveParams,
    OrificeParams,
    and_valve_state,
    check_valve_flow,
    hose_resistance,
    membrane_displacement,
    not_valve_conductance_factor,
    orifice_flow,
    orifice_resistance,
    plate_gap_resistance,
)
from .graph import CircuitGraph, ValidationError, validate
from .netlist import Netlist, NetlistError, parse_netlist, serialize
from .solver import (
    ConvergenceError,
    NoSteadyState,
    SolveConfig,
    SteadyState,
    SweepResult,
    residual,
    solve_steady,
    sweep,
)

__version__ = "0.1.0"
