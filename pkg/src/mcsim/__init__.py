"""Multichamber air-suspension simulation and switching control.

A 7-DOF full car rides on four multichamber gas springs whose stiffness is
switched by per-corner valve controllers driven by an acceleration-based
load-transfer estimator.  See README.md for the CLI and file formats.
"""

from .airspring import (
    SpringParams,
    SpringState,
    Valve,
    close_valve,
    damper_force,
    elastic_force,
    export_elastic_map,
    init_at_equilibrium,
    linearized_stiffness,
    main_volume,
    open_valve,
)
from .config import SimConfig, default_config, load_config
from .controller import ControllerState, CornerController, Node, Thresholds, basic_step, extended_step
from .errors import (
    ConfigError,
    InvalidParameterError,
    McsimError,
    PhaseTooShortError,
    ScenarioError,
    SimulationDivergedError,
    StrokeRangeError,
)
from .estimator import LoadTransferEstimate, filter_update, inversion_detected, load_transfer
from .harness import (
    CompareReport,
    MetricsReport,
    RunResult,
    ValveEvent,
    compare,
    run,
    steady_state_angle,
    vertical_accel_peak,
)
from .scenarios import (
    PhaseLabel,
    ScenarioTrace,
    Segment,
    load_scenario,
    make_braking,
    make_chicane,
    make_mixed,
    make_road_noise,
)
from .vehicle import StepInputs, VehicleParams, VehicleState, corner_stroke, initial_state, step

__version__ = "0.1.0"
