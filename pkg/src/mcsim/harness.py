"""Simulation loop, performance indexes and controller comparison.

Each step runs estimator -> per-corner controllers -> valve events on the
springs -> one plant step, logging the full time series and every valve
event with its kick force.  Indexes:

* J_phi / J_theta: mean |angle| over the last 0.5 s of each labeled
  constant-input phase (the steady-state value after the rising transient);
* J_z: max |A_z| in a window after each valve opening; for runs that never
  open a valve (hard/soft passive) it degrades to max |A_z| over the whole
  trace so normalized comparisons stay well defined.

Comparison tables are normalized against a hard-passive run of the identical
scenario.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import estimator as est_mod
from . import vehicle as veh
from .airspring import Valve
from .config import SimConfig, default_config
from .controller import CONTROLLER_MODES, CornerController
from .errors import InvalidParameterError, PhaseTooShortError, SimulationDivergedError
from .scenarios import PhaseLabel, ScenarioTrace

STEADY_WINDOW = 0.5   # s, averaging window at the end of a constant phase
MIN_PHASE_SPAN = 1.0  # s, required span of a labeled phase


@dataclass(frozen=True)
class ValveEvent:
    t: float
    corner: str          # "fl" | "fr" | "rl" | "rr"
    kind: str            # "open" | "close"
    kick_force: float    # N (zero for close events)
    az_jump: float       # m/s^2 jump of A_z caused by this event alone


@dataclass
class MetricsReport:
    j_phi: dict[str, float] = field(default_factory=dict)
    j_theta: dict[str, float] = field(default_factory=dict)
    j_z: dict[str, float] = field(default_factory=dict)
    j_z_overall: float = 0.0
    normalized_vs_hard: dict[str, float] | None = None


@dataclass
class RunResult:
    mode: str
    scenario_name: str
    dt: float
    t: np.ndarray
    phi: np.ndarray
    theta: np.ndarray
    z: np.ndarray
    az: np.ndarray
    strokes: np.ndarray   # (4, n), m compression positive
    fz: np.ndarray        # (4, n), estimated corner load transfer, N
    valves: np.ndarray    # (4, n), 1 = open, 0 = closed
    events: list[ValveEvent]
    labels: list[PhaseLabel]
    metrics: MetricsReport

    def open_events(self) -> list[ValveEvent]:
        return [e for e in self.events if e.kind == "open"]

    def phase_labels(self) -> list[PhaseLabel]:
        return [l for l in self.labels if l.kind == "phase"]


def run(scenario: ScenarioTrace, controller_mode: str,
        config: SimConfig | None = None) -> RunResult:
    """Simulate one scenario under one controller mode."""
    if controller_mode not in CONTROLLER_MODES:
        raise InvalidParameterError(f"unknown controller mode {controller_mode!r}")
    cfg = config if config is not None else default_config()
    params = cfg.vehicle
    dt = cfg.dt_s
    if abs(scenario.dt - dt) > 1e-12:
        raise InvalidParameterError(
            f"scenario dt {scenario.dt} differs from configured dt {dt}"
        )
    n = scenario.n_steps

    state = veh.initial_state(
        params, valve=Valve.CLOSED if controller_mode == "hard" else Valve.OPEN
    )
    controllers = [CornerController(controller_mode, cfg.thresholds) for _ in range(4)]
    estimate = est_mod.LoadTransferEstimate()

    t_arr = np.arange(n) * dt
    phi = np.empty(n); theta = np.empty(n); z_arr = np.empty(n); az = np.empty(n)
    strokes = np.empty((4, n)); fz_log = np.empty((4, n))
    valves = np.empty((4, n), dtype=int)
    events: list[ValveEvent] = []

    for k in range(n):
        t = k * dt
        fz = est_mod.load_transfer(scenario.ax[k], scenario.ay[k], params)
        estimate = est_mod.filter_update(estimate, fz, dt, cfg.tau_fast_s, cfg.tau_slow_s)

        for i in range(4):
            dz = veh.corner_stroke(state, params, i)
            command = controllers[i].step(
                t, fz[i], estimate.fz_fast[i], estimate.fz_slow[i], dz
            )
            if command is not state.springs[i].valve:
                # one corner at a time, so each event owns its A_z jump
                az_before = veh.vertical_acceleration(state, params)
                state, kick, changed = veh.apply_valve_command(state, params, i, command)
                if changed:
                    az_after = veh.vertical_acceleration(state, params)
                    events.append(ValveEvent(
                        t=t, corner=veh.CORNERS[i],
                        kind="open" if command is Valve.OPEN else "close",
                        kick_force=kick, az_jump=az_after - az_before,
                    ))

        phi[k] = state.roll
        theta[k] = state.pitch
        z_arr[k] = state.z
        az[k] = veh.vertical_acceleration(state, params)
        for i in range(4):
            strokes[i, k] = veh.corner_stroke(state, params, i)
            fz_log[i, k] = fz[i]
            valves[i, k] = 1 if state.springs[i].valve is Valve.OPEN else 0

        inputs = veh.StepInputs(
            a_x=scenario.ax[k], a_y=scenario.ay[k], road=tuple(scenario.road[:, k])
        )
        try:
            state = veh.step(state, params, inputs, dt)
        except SimulationDivergedError as exc:
            raise SimulationDivergedError(
                f"at t={t:.3f} s ({controller_mode}): {exc}"
            ) from exc

    result = RunResult(
        mode=controller_mode, scenario_name=scenario.name, dt=dt,
        t=t_arr, phi=phi, theta=theta, z=z_arr, az=az,
        strokes=strokes, fz=fz_log, valves=valves,
        events=events, labels=list(scenario.labels), metrics=MetricsReport(),
    )
    result.metrics = compute_metrics(result, jz_window=cfg.jz_window_s)
    return result


def steady_state_angle(times: np.ndarray, values: np.ndarray, phase: PhaseLabel) -> float:
    """Mean |angle| over the final 0.5 s of a labeled constant-input phase."""
    if phase.t_end - phase.t_start < MIN_PHASE_SPAN:
        raise PhaseTooShortError(
            f"phase {phase.name!r} spans {phase.t_end - phase.t_start:.2f} s < {MIN_PHASE_SPAN} s"
        )
    if phase.t_end > times[-1] + 1e-9:
        raise PhaseTooShortError(f"phase {phase.name!r} ends after the series")
    mask = (times >= phase.t_end - STEADY_WINDOW) & (times <= phase.t_end)
    return float(np.mean(np.abs(values[mask])))


def vertical_accel_peak(times: np.ndarray, az: np.ndarray, t_open: float,
                        window: float = 1.0) -> float:
    """Max |A_z| over [t_open, t_open + window]."""
    if not times[0] <= t_open <= times[-1]:
        raise InvalidParameterError(f"t_open {t_open} outside the series")
    t_end = t_open + window
    if t_end > times[-1] + 1e-9:
        warnings.warn("J_z window extends past the series end; truncating")
        t_end = times[-1]
    mask = (times >= t_open) & (times <= t_end)
    return float(np.max(np.abs(az[mask])))


def compute_metrics(result: RunResult, jz_window: float = 1.0) -> MetricsReport:
    """Steady-state angle indexes per phase plus kick-comfort indexes."""
    report = MetricsReport()
    for phase in result.phase_labels():
        report.j_phi[phase.name] = steady_state_angle(result.t, result.phi, phase)
        report.j_theta[phase.name] = steady_state_angle(result.t, result.theta, phase)
    opens = result.open_events()
    for event in opens:
        key = f"open_{event.corner}@{event.t:.3f}s"
        report.j_z[key] = vertical_accel_peak(result.t, result.az, event.t, jz_window)
    if report.j_z:
        report.j_z_overall = max(report.j_z.values())
    else:
        # passive run: no opening instant, fall back to the whole trace
        report.j_z_overall = float(np.max(np.abs(result.az)))
    return report


@dataclass
class CompareReport:
    scenario_name: str
    runs: dict[str, RunResult]
    rows: list[dict]  # mode, metric, key, value, ratio_vs_hard


def _ratio(value: float, denom: float) -> float:
    return value / denom if denom != 0.0 else math.nan


def compare(scenario: ScenarioTrace, modes, config: SimConfig | None = None) -> CompareReport:
    """Run several controller modes on one scenario, normalized against hard."""
    modes = list(modes)
    if len(modes) < 2:
        raise InvalidParameterError("compare needs at least two modes")
    for mode in modes:
        if mode not in CONTROLLER_MODES:
            raise InvalidParameterError(f"unknown controller mode {mode!r}")

    runs: dict[str, RunResult] = {}
    for mode in dict.fromkeys(modes):  # preserve order, drop duplicates
        runs[mode] = run(scenario, mode, config)
    hard = runs.get("hard")
    if hard is None:
        hard = run(scenario, "hard", config)

    rows: list[dict] = []
    for mode, res in runs.items():
        normalized: dict[str, float] = {}
        for name, value in sorted(res.metrics.j_phi.items()):
            r = _ratio(value, hard.metrics.j_phi.get(name, math.nan))
            normalized[f"j_phi/{name}"] = r
            rows.append({"mode": mode, "metric": "j_phi", "key": name,
                         "value": value, "ratio_vs_hard": r})
        for name, value in sorted(res.metrics.j_theta.items()):
            r = _ratio(value, hard.metrics.j_theta.get(name, math.nan))
            normalized[f"j_theta/{name}"] = r
            rows.append({"mode": mode, "metric": "j_theta", "key": name,
                         "value": value, "ratio_vs_hard": r})
        r = _ratio(res.metrics.j_z_overall, hard.metrics.j_z_overall)
        normalized["j_z"] = r
        rows.append({"mode": mode, "metric": "j_z", "key": "overall",
                     "value": res.metrics.j_z_overall, "ratio_vs_hard": r})
        res.metrics.normalized_vs_hard = normalized
    return CompareReport(scenario_name=scenario.name, runs=runs, rows=rows)


# ---------------------------------------------------------------------------
# CSV output (repr round-trip formatting keeps identical runs byte-identical)

TIMESERIES_HEADER = (
    "t,phi,theta,z,Az,"
    "stroke_fl,stroke_fr,stroke_rl,stroke_rr,"
    "Fz_fl,Fz_fr,Fz_rl,Fz_rr,"
    "valve_fl,valve_fr,valve_rl,valve_rr"
)


def write_timeseries_csv(result: RunResult, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(TIMESERIES_HEADER + "\n")
        for k in range(len(result.t)):
            cells = [repr(float(v)) for v in (
                result.t[k], result.phi[k], result.theta[k], result.z[k], result.az[k],
                *result.strokes[:, k], *result.fz[:, k],
            )]
            cells += [str(int(v)) for v in result.valves[:, k]]
            fh.write(",".join(cells) + "\n")


def write_events_csv(result: RunResult, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("t,corner,event,kick_force_n\n")
        for e in result.events:
            fh.write(f"{e.t!r},{e.corner},{e.kind},{e.kick_force!r}\n")


def write_metrics_csv(report: CompareReport, path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write("mode,metric,key,value,ratio_vs_hard\n")
        for row in report.rows:
            fh.write(
                f"{row['mode']},{row['metric']},{row['key']},"
                f"{row['value']!r},{row['ratio_vs_hard']!r}\n"
            )


__all__ = [
    "ValveEvent",
    "MetricsReport",
    "RunResult",
    "CompareReport",
    "run",
    "steady_state_angle",
    "vertical_accel_peak",
    "compute_metrics",
    "compare",
    "write_timeseries_csv",
    "write_events_csv",
    "write_metrics_csv",
    "TIMESERIES_HEADER",
]
