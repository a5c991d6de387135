"""7-DOF full-car plant on four multichamber corner suspensions.

Degrees of freedom: sprung-body heave z, roll phi, pitch theta, and four
unsprung vertical positions.  All displacements are measured upward from the
static equilibrium; suspension strokes are compression-positive.

Angle/sign conventions (kept consistent with compression-positive strokes):

* phi > 0 rolls the left side down, so left strokes compress under +phi;
* theta > 0 pitches the nose down, so front strokes compress under +theta;
* A_x > 0 accelerates forward, A_y > 0 accelerates to the left.

Prescribed COG accelerations act as inertial moments M*H*A about the body
axes (braking A_x < 0 dives the nose); road heights excite linear vertical
tire springs under each unsprung mass.  Corner order is FL, FR, RL, RR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import airspring
from .airspring import SpringParams, SpringState, Valve
from .errors import InvalidParameterError, SimulationDivergedError

G = 9.81  # gravitational acceleration (m/s^2)

CORNERS = ("fl", "fr", "rl", "rr")
FL, FR, RL, RR = range(4)

ANGLE_BOUND = 0.2       # rad, small-angle sanity limit on |phi| and |theta|
MAX_STEP_DT = 2e-3      # s


def _default_springs() -> tuple[SpringParams, ...]:
    p = SpringParams()
    return (p, p, p, p)


@dataclass(frozen=True)
class VehicleParams:
    """Full-car parameters (Table-1 style values plus 7-DOF extras)."""

    sprung_mass: float = 2100.0          # kg
    wheelbase: float = 3.3               # m
    track: float = 1.6                   # m
    cog_height: float = 0.56             # m
    roll_inertia: float = 600.0          # kg*m^2
    pitch_inertia: float = 2500.0        # kg*m^2
    unsprung_mass: float = 50.0          # kg per corner
    tire_stiffness: float = 250e3        # N/m per corner
    front_axle_distance: float = 1.50    # a, COG to front axle (m)
    rear_axle_distance: float = 1.80     # b, COG to rear axle (m)
    springs: tuple[SpringParams, ...] = field(default_factory=_default_springs)

    def __post_init__(self):
        positive = (
            "sprung_mass", "wheelbase", "track", "cog_height", "roll_inertia",
            "pitch_inertia", "unsprung_mass", "tire_stiffness",
            "front_axle_distance", "rear_axle_distance",
        )
        for name in positive:
            if getattr(self, name) <= 0.0:
                raise InvalidParameterError(f"{name} must be > 0")
        if abs(self.front_axle_distance + self.rear_axle_distance - self.wheelbase) > 1e-9:
            raise InvalidParameterError(
                "front_axle_distance + rear_axle_distance must equal wheelbase"
            )
        if len(self.springs) != 4:
            raise InvalidParameterError("springs must hold four per-corner SpringParams")

    @property
    def corner_x(self) -> tuple[float, float, float, float]:
        """Longitudinal corner offsets from the COG (forward positive)."""
        a, b = self.front_axle_distance, self.rear_axle_distance
        return (a, a, -b, -b)

    @property
    def corner_y(self) -> tuple[float, float, float, float]:
        """Lateral corner offsets from the COG (left positive)."""
        h = self.track / 2.0
        return (h, -h, h, -h)

    def static_corner_loads(self) -> tuple[float, float, float, float]:
        """Static vertical load carried by each corner spring (N)."""
        w = self.sprung_mass * G
        front = w * self.rear_axle_distance / (2.0 * self.wheelbase)
        rear = w * self.front_axle_distance / (2.0 * self.wheelbase)
        return (front, front, rear, rear)


@dataclass(frozen=True)
class StepInputs:
    """Exogenous inputs held constant over one integration step."""

    a_x: float = 0.0
    a_y: float = 0.0
    road: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class VehicleState:
    """Sprung-body and unsprung states plus per-corner spring gas states."""

    z: float = 0.0
    z_rate: float = 0.0
    roll: float = 0.0
    roll_rate: float = 0.0
    pitch: float = 0.0
    pitch_rate: float = 0.0
    z_us: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    z_us_rate: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    springs: tuple[SpringState, ...] = ()

    def to_vector(self) -> np.ndarray:
        return np.array(
            [self.z, self.z_rate, self.roll, self.roll_rate, self.pitch, self.pitch_rate]
            + list(self.z_us) + list(self.z_us_rate)
        )

    def with_vector(self, y: np.ndarray) -> "VehicleState":
        return replace(
            self,
            z=float(y[0]), z_rate=float(y[1]), roll=float(y[2]), roll_rate=float(y[3]),
            pitch=float(y[4]), pitch_rate=float(y[5]),
            z_us=tuple(float(v) for v in y[6:10]),
            z_us_rate=tuple(float(v) for v in y[10:14]),
        )


def initial_state(params: VehicleParams, valve: Valve = Valve.OPEN) -> VehicleState:
    """Equilibrium state with all displacements zero.

    Each spring is initialized open at its static corner load; for a
    hard-passive setup the valve is then closed at zero stroke, which leaves
    the force balance (and therefore the equilibrium) untouched.
    """
    springs = []
    for spring_params, load in zip(params.springs, params.static_corner_loads()):
        s = airspring.init_at_equilibrium(spring_params, load)
        if valve is Valve.CLOSED:
            s = airspring.close_valve(s, spring_params, 0.0).state
        springs.append(s)
    return VehicleState(springs=tuple(springs))


def corner_stroke(state: VehicleState, params: VehicleParams, corner: int) -> float:
    """Suspension stroke at one corner (m, compression positive)."""
    x = params.corner_x[corner]
    y = params.corner_y[corner]
    return state.z_us[corner] - state.z + y * state.roll + x * state.pitch


def corner_stroke_rate(state: VehicleState, params: VehicleParams, corner: int) -> float:
    """Time derivative of the corner stroke (m/s, compression positive)."""
    x = params.corner_x[corner]
    y = params.corner_y[corner]
    return state.z_us_rate[corner] - state.z_rate + y * state.roll_rate + x * state.pitch_rate


def corner_forces(
    state: VehicleState, params: VehicleParams
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """(elastic, total) suspension force per corner, N upward on the body."""
    elastic = []
    total = []
    for i in range(4):
        dz = corner_stroke(state, params, i)
        rate = corner_stroke_rate(state, params, i)
        f_el = airspring.elastic_force(state.springs[i], params.springs[i], dz)
        f_tot = f_el + airspring.damper_force(params.springs[i], -rate)
        elastic.append(f_el)
        total.append(f_tot)
    return tuple(elastic), tuple(total)


def _derivatives(
    y: np.ndarray,
    springs: tuple[SpringState, ...],
    params: VehicleParams,
    inputs: StepInputs,
    loads: tuple[float, ...],
) -> np.ndarray:
    z, z_rate = y[0], y[1]
    roll, roll_rate = y[2], y[3]
    pitch, pitch_rate = y[4], y[5]

    xs = params.corner_x
    ys = params.corner_y
    m = params.sprung_mass
    moment_x = m * params.cog_height * inputs.a_y
    moment_y = m * params.cog_height * inputs.a_x

    sum_df = 0.0
    sum_y_df = 0.0
    sum_x_df = 0.0
    dydt = np.empty(14)
    for i in range(4):
        z_us = y[6 + i]
        v_us = y[10 + i]
        dz = z_us - z + ys[i] * roll + xs[i] * pitch
        rate = v_us - z_rate + ys[i] * roll_rate + xs[i] * pitch_rate
        sp = params.springs[i]
        f_corner = airspring.elastic_force(springs[i], sp, dz) + sp.damping_c * rate
        df = f_corner - loads[i]
        sum_df += df
        sum_y_df += ys[i] * df
        sum_x_df += xs[i] * df
        dydt[6 + i] = v_us
        dydt[10 + i] = (params.tire_stiffness * (inputs.road[i] - z_us) - df) / params.unsprung_mass

    dydt[0] = z_rate
    dydt[1] = sum_df / m
    dydt[2] = roll_rate
    dydt[3] = (-sum_y_df - moment_x) / params.roll_inertia
    dydt[4] = pitch_rate
    dydt[5] = (-sum_x_df - moment_y) / params.pitch_inertia
    return dydt


def step(
    state: VehicleState, params: VehicleParams, inputs: StepInputs, dt: float
) -> VehicleState:
    """Advance one fixed step of classical RK4.

    Valve states are frozen across the step; events are applied between
    steps, so positions and velocities stay continuous while the force law
    changes only at step boundaries.
    """
    if not 0.0 < dt <= MAX_STEP_DT:
        raise InvalidParameterError(f"dt must be in (0, {MAX_STEP_DT}] s, got {dt}")
    loads = params.static_corner_loads()
    y = state.to_vector()
    k1 = _derivatives(y, state.springs, params, inputs, loads)
    k2 = _derivatives(y + 0.5 * dt * k1, state.springs, params, inputs, loads)
    k3 = _derivatives(y + 0.5 * dt * k2, state.springs, params, inputs, loads)
    k4 = _derivatives(y + dt * k3, state.springs, params, inputs, loads)
    y_next = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    if not np.all(np.isfinite(y_next)):
        raise SimulationDivergedError("non-finite state encountered")
    if abs(y_next[2]) > ANGLE_BOUND or abs(y_next[4]) > ANGLE_BOUND:
        raise SimulationDivergedError(
            f"attitude left the small-angle regime: roll={y_next[2]:.3f}, pitch={y_next[4]:.3f} rad"
        )
    return state.with_vector(y_next)


def vertical_acceleration(
    state: VehicleState, params: VehicleParams, inputs: StepInputs | None = None
) -> float:
    """COG vertical acceleration from the current force balance (m/s^2).

    Only the suspension forces enter the sprung-mass vertical balance; the
    prescribed A_x/A_y act as pure moments and the road only through the
    unsprung states.
    """
    _, total = corner_forces(state, params)
    loads = params.static_corner_loads()
    return math.fsum(f - l for f, l in zip(total, loads)) / params.sprung_mass


def apply_valve_command(
    state: VehicleState,
    params: VehicleParams,
    corner: int,
    command: Valve,
) -> tuple[VehicleState, float, bool]:
    """Drive one corner's valve at its current stroke.

    Returns (new state, kick force, changed); a command matching the current
    valve position is a no-op.
    """
    dz = corner_stroke(state, params, corner)
    result = airspring.apply_valve_command(
        state.springs[corner], params.springs[corner], command, dz
    )
    if not result.changed:
        return state, 0.0, False
    springs = list(state.springs)
    springs[corner] = result.state
    return replace(state, springs=tuple(springs)), result.kick_force, True


def apply_valve_commands(
    state: VehicleState,
    params: VehicleParams,
    commands: Sequence[Valve],
) -> tuple[VehicleState, tuple[float, ...], tuple[bool, ...]]:
    """Apply per-corner valve commands at the current strokes.

    Returns the new state plus per-corner kick forces and changed flags.
    No-op commands leave the spring state untouched.
    """
    kicks = [0.0, 0.0, 0.0, 0.0]
    changed = [False, False, False, False]
    for i, cmd in enumerate(commands):
        state, kicks[i], changed[i] = apply_valve_command(state, params, i, cmd)
    return state, tuple(kicks), tuple(changed)


__all__ = [
    "G",
    "CORNERS",
    "FL", "FR", "RL", "RR",
    "VehicleParams",
    "VehicleState",
    "StepInputs",
    "initial_state",
    "corner_stroke",
    "corner_stroke_rate",
    "corner_forces",
    "step",
    "vertical_acceleration",
    "apply_valve_command",
    "apply_valve_commands",
]
