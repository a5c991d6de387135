"""Multichamber gas spring with one auxiliary reservoir, plus its damper.

The spring is a main pneumatic chamber of variable volume (piston area times
stroke) connected to a fixed auxiliary volume through an on/off valve.  The
active gas body (main alone when the valve is closed, main + auxiliary when
open) evolves polytropically from the reference captured at the last valve
event, p * V**gamma = const.  Valve events have the usual semantics of this
architecture:

* closing is force-continuous and freezes the auxiliary pressure, producing a
  stiff map shifted through the closing point;
* opening mixes the two gas bodies mass-consistently at the current stroke,
  and the resulting force jump is the kick force (zero only when the chamber
  pressures are equal, i.e. when the stroke is back at the closing level).

Sign convention: stroke > 0 is compression, elastic force > 0 pushes the
sprung side up.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import InvalidParameterError, StrokeRangeError


class Valve(Enum):
    """On/off valve position between main and auxiliary chamber."""

    OPEN = "open"
    CLOSED = "closed"


@dataclass(frozen=True)
class SpringParams:
    """Geometry and gas constants of one corner spring."""

    gamma: float = 1.4        # polytropic coefficient (-)
    area: float = 0.0133      # piston area (m^2)
    v_main_0: float = 1.4e-3  # main chamber volume at zero stroke (m^3)
    v_aux: float = 1.53e-3    # auxiliary chamber volume (m^3)
    p_atm: float = 101325.0   # ambient pressure (Pa)
    damping_c: float = 1600.0 # damper coefficient (N*s/m)

    def __post_init__(self):
        for name in ("area", "v_main_0", "v_aux", "p_atm", "damping_c"):
            if getattr(self, name) <= 0.0:
                raise InvalidParameterError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.gamma < 1.0:
            raise InvalidParameterError(f"gamma must be >= 1, got {self.gamma}")

    @property
    def v_total_0(self) -> float:
        """Main + auxiliary volume at zero stroke (m^3)."""
        return self.v_main_0 + self.v_aux

    @property
    def max_compression(self) -> float:
        """Stroke at which the main chamber volume would vanish (m)."""
        return self.v_main_0 / self.area


@dataclass(frozen=True)
class SpringState:
    """Gas state of one spring between valve events.

    (p_ref, v_ref) pin the polytrope of the active gas body.  p_aux_frozen is
    the auxiliary pressure while the valve is closed; with the valve open it
    simply tracks the shared reference pressure.  stroke_at_close is only
    meaningful while the valve is closed.
    """

    valve: Valve
    p_ref: float           # Pa, absolute
    v_ref: float           # m^3
    p_aux_frozen: float    # Pa, absolute
    stroke_at_close: float = 0.0  # m

    def __post_init__(self):
        if self.p_ref <= 0.0 or self.p_aux_frozen <= 0.0:
            raise InvalidParameterError("pressures must be > 0")
        if self.v_ref <= 0.0:
            raise InvalidParameterError("v_ref must be > 0")


class ValveOpenResult(NamedTuple):
    state: "SpringState"
    kick_force: float  # N, instantaneous elastic-force jump
    changed: bool      # False when the valve was already open


class ValveCloseResult(NamedTuple):
    state: "SpringState"
    changed: bool


def init_at_equilibrium(params: SpringParams, static_load: float) -> SpringState:
    """Open-valve state whose gauge pressure balances static_load at zero stroke."""
    if static_load <= 0.0:
        raise InvalidParameterError(f"static_load must be > 0, got {static_load}")
    p_bar = params.p_atm + static_load / params.area
    return SpringState(
        valve=Valve.OPEN,
        p_ref=p_bar,
        v_ref=params.v_total_0,
        p_aux_frozen=p_bar,
    )


def main_volume(params: SpringParams, stroke: float) -> float:
    """Main chamber volume at the given stroke (compression positive)."""
    v = params.v_main_0 - params.area * stroke
    if v <= 0.0:
        raise StrokeRangeError(
            f"stroke {stroke:.4f} m exceeds max compression {params.max_compression:.4f} m"
        )
    return v


def active_volume(state: SpringState, params: SpringParams, stroke: float) -> float:
    """Volume of the gas body currently connected to the piston."""
    v = main_volume(params, stroke)
    if state.valve is Valve.OPEN:
        v += params.v_aux
    return v


def gas_pressure(state: SpringState, params: SpringParams, stroke: float) -> float:
    """Absolute pressure of the active gas body at the given stroke."""
    v = active_volume(state, params, stroke)
    return state.p_ref * (state.v_ref / v) ** params.gamma


def elastic_force(state: SpringState, params: SpringParams, stroke: float) -> float:
    """Elastic force on the sprung side (N, positive pushing up)."""
    return (gas_pressure(state, params, stroke) - params.p_atm) * params.area


def linearized_stiffness(p_bar: float, params: SpringParams, total_volume: float) -> float:
    """Tangent stiffness gamma * p * A^2 / V of a pneumatic spring (N/m)."""
    if p_bar < 0.0 or total_volume <= 0.0:
        raise InvalidParameterError("p_bar must be >= 0 and total_volume > 0")
    return params.gamma * p_bar * params.area**2 / total_volume


def damper_force(params: SpringParams, rate: float) -> float:
    """Damper reaction F = -c * rate (N).

    `rate` is the rate of change of the strut length (extension positive);
    the force acts on the sprung side, upward positive, so the damper always
    opposes the relative motion.
    """
    return -params.damping_c * rate


def open_valve(state: SpringState, params: SpringParams, stroke: float) -> ValveOpenResult:
    """Connect the auxiliary chamber at the current stroke.

    The shared pressure is the mass-weighted (equal-temperature) mix of the
    two bodies, which conserves sum(p_i * v_i); the kick force is the
    resulting instantaneous jump of the elastic force.  Opening an already
    open valve is a no-op with zero kick.
    """
    if state.valve is Valve.OPEN:
        return ValveOpenResult(state, 0.0, False)
    v_main = main_volume(params, stroke)
    p_main = gas_pressure(state, params, stroke)
    p_mix = (p_main * v_main + state.p_aux_frozen * params.v_aux) / (v_main + params.v_aux)
    new = SpringState(
        valve=Valve.OPEN,
        p_ref=p_mix,
        v_ref=v_main + params.v_aux,
        p_aux_frozen=p_mix,
        stroke_at_close=state.stroke_at_close,
    )
    kick = (p_mix - p_main) * params.area
    return ValveOpenResult(new, kick, True)


def close_valve(state: SpringState, params: SpringParams, stroke: float) -> ValveCloseResult:
    """Isolate the auxiliary chamber at the current stroke.

    The main chamber inherits the current shared pressure as its new
    reference and the auxiliary pressure freezes at the same value, so the
    elastic force is continuous across the event by construction.
    """
    if state.valve is Valve.CLOSED:
        return ValveCloseResult(state, False)
    p = gas_pressure(state, params, stroke)
    new = SpringState(
        valve=Valve.CLOSED,
        p_ref=p,
        v_ref=main_volume(params, stroke),
        p_aux_frozen=p,
        stroke_at_close=stroke,
    )
    return ValveCloseResult(new, True)


def apply_valve_command(
    state: SpringState, params: SpringParams, command: Valve, stroke: float
) -> ValveOpenResult:
    """Drive the valve to `command`, returning the (state, kick, changed) triple."""
    if command is Valve.OPEN:
        return open_valve(state, params, stroke)
    closed, changed = close_valve(state, params, stroke)
    return ValveOpenResult(closed, 0.0, changed)


def export_elastic_map(
    params: SpringParams,
    valve_config: str = "soft",
    stroke_grid: Sequence[float] | np.ndarray | None = None,
    event_sequence: Iterable[tuple[str, float]] = (),
    *,
    static_load: float,
) -> np.ndarray:
    """Static stroke-force map for a given valve history.

    valve_config "soft" starts from the open-valve equilibrium state,
    "hard" closes the valve at zero stroke first.  event_sequence is an
    ordered list of ("open"|"close", stroke) events applied afterwards, which
    is enough to reproduce shifted hard maps.  Returns an (N, 2) array of
    (stroke, force) rows.
    """
    if valve_config not in ("soft", "hard"):
        raise InvalidParameterError(f"valve_config must be 'soft' or 'hard', got {valve_config!r}")
    if stroke_grid is None:
        stroke_grid = np.linspace(-0.04, 0.04, 161)
    grid = np.asarray(stroke_grid, dtype=float)

    state = init_at_equilibrium(params, static_load)
    if valve_config == "hard":
        state = close_valve(state, params, 0.0).state
    for kind, stroke in event_sequence:
        if kind == "open":
            state = open_valve(state, params, stroke).state
        elif kind == "close":
            state = close_valve(state, params, stroke).state
        else:
            raise InvalidParameterError(f"unknown valve event {kind!r}")

    forces = np.array([elastic_force(state, params, dz) for dz in grid])
    return np.column_stack([grid, forces])


def write_map_csv(path, table: np.ndarray) -> None:
    """Write a stroke-force table as CSV with header stroke_m,force_N."""
    with open(path, "w", newline="") as fh:
        fh.write("stroke_m,force_N\n")
        for stroke, force in table:
            fh.write(f"{stroke!r},{force!r}\n")


__all__ = [
    "Valve",
    "SpringParams",
    "SpringState",
    "ValveOpenResult",
    "ValveCloseResult",
    "init_at_equilibrium",
    "main_volume",
    "active_volume",
    "gas_pressure",
    "elastic_force",
    "linearized_stiffness",
    "damper_force",
    "open_valve",
    "close_valve",
    "apply_valve_command",
    "export_elastic_map",
    "write_map_csv",
]
