"""Maneuver and road-input generation.

A scenario is a sampled trace of exogenous inputs: longitudinal/lateral COG
acceleration and four road heights, plus named phase labels marking the
maneuver envelope and each constant-input window (the windows the steady
state indexes are evaluated on).

Acceleration profiles are piecewise linear: constant targets joined by short
ramps (default 0.2 s) so the plant is never hit with a true step.  Ramps are
amplitude-linear, which keeps superposition exact: the trace of composed
segments equals the sum of the single-segment traces.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ScenarioError

ACCEL_BOUND = 10.0  # m/s^2, sanity bound on |ax|, |ay|
DEFAULT_DT = 1e-3
DEFAULT_RAMP = 0.2


@dataclass(frozen=True)
class PhaseLabel:
    name: str
    t_start: float
    t_end: float
    kind: str = "phase"  # "phase" = constant-input window, "envelope" = whole maneuver


@dataclass(frozen=True)
class Segment:
    """One constant-acceleration span; ramps are added by the builder."""

    t0: float
    t1: float
    ax: float = 0.0
    ay: float = 0.0

    def __post_init__(self):
        if self.t1 <= self.t0:
            raise ScenarioError(f"segment must have t1 > t0, got [{self.t0}, {self.t1}]")
        if self.t0 < 0.0:
            raise ScenarioError("segment t0 must be >= 0")


@dataclass
class ScenarioTrace:
    """Time-indexed exogenous inputs for one simulation run."""

    dt: float
    ax: np.ndarray
    ay: np.ndarray
    road: np.ndarray  # (4, n) road height per corner, m
    labels: list[PhaseLabel] = field(default_factory=list)
    name: str = "scenario"

    def __post_init__(self):
        self.ax = np.asarray(self.ax, dtype=float)
        self.ay = np.asarray(self.ay, dtype=float)
        self.road = np.asarray(self.road, dtype=float)
        if self.dt <= 0.0:
            raise ScenarioError("dt must be > 0")
        n = self.ax.shape[0]
        if self.ay.shape != (n,) or self.road.shape != (4, n):
            raise ScenarioError("ax, ay and road must share one sample count")
        if n == 0:
            raise ScenarioError("empty scenario")
        amax = max(np.max(np.abs(self.ax), initial=0.0), np.max(np.abs(self.ay), initial=0.0))
        if amax > ACCEL_BOUND + 1e-9:
            raise ScenarioError(f"|acceleration| exceeds {ACCEL_BOUND} m/s^2 bound")

    @property
    def n_steps(self) -> int:
        return self.ax.shape[0]

    @property
    def duration(self) -> float:
        return self.n_steps * self.dt

    def times(self) -> np.ndarray:
        return np.arange(self.n_steps) * self.dt

    def phase(self, name: str) -> PhaseLabel:
        for label in self.labels:
            if label.name == name:
                return label
        raise ScenarioError(f"no phase labeled {name!r}")


def _sample_profile(knots: list[tuple[float, float]], n: int, dt: float) -> np.ndarray:
    """Sample a piecewise-linear profile defined by sorted (t, value) knots."""
    ts = np.array([k[0] for k in knots])
    vs = np.array([k[1] for k in knots])
    if np.any(np.diff(ts) < 0.0):
        raise ScenarioError("profile knots are not time ordered")
    return np.interp(np.arange(n) * dt, ts, vs, left=vs[0], right=vs[-1])


def _segment_knots(segments: list[Segment], which: str, ramp: float) -> list[tuple[float, float]]:
    knots: list[tuple[float, float]] = [(0.0, 0.0)]
    prev_t1 = None
    prev_level = 0.0
    for seg in segments:
        level = getattr(seg, which)
        if prev_t1 is not None and seg.t0 < prev_t1 - 1e-12:
            raise ScenarioError("overlapping segments")
        contiguous = prev_t1 is not None and abs(seg.t0 - prev_t1) <= 1e-12
        if not contiguous:
            if prev_t1 is not None:
                if seg.t0 < prev_t1 + ramp - 1e-12:
                    raise ScenarioError("segment gap shorter than the ramp time")
                knots.append((prev_t1, prev_level))
                knots.append((prev_t1 + ramp, 0.0))
            knots.append((seg.t0, 0.0))
        else:
            knots.append((seg.t0, prev_level))
        ramp_eff = min(ramp, seg.t1 - seg.t0)
        knots.append((seg.t0 + ramp_eff, level))
        prev_t1, prev_level = seg.t1, level
    knots.append((prev_t1, prev_level))
    knots.append((prev_t1 + ramp, 0.0))
    return knots


def make_mixed(
    segments,
    *,
    dt: float = DEFAULT_DT,
    ramp: float = DEFAULT_RAMP,
    duration: float | None = None,
    tail: float = 2.0,
    road: np.ndarray | None = None,
    name: str = "mixed",
) -> ScenarioTrace:
    """Compose arbitrary piecewise ax/ay segments into one trace."""
    segs = sorted(segments, key=lambda s: s.t0)
    if not segs:
        raise ScenarioError("need at least one segment")
    if ramp <= 0.0:
        raise ScenarioError("ramp must be > 0")
    end = segs[-1].t1 + ramp
    if duration is None:
        duration = end + tail
    if duration < end:
        raise ScenarioError("duration ends before the last segment ramps out")
    n = int(round(duration / dt))

    ax = _sample_profile(_segment_knots(segs, "ax", ramp), n, dt)
    ay = _sample_profile(_segment_knots(segs, "ay", ramp), n, dt)
    road_arr = np.zeros((4, n)) if road is None else np.asarray(road, dtype=float)

    labels = [PhaseLabel("maneuver", segs[0].t0, end, kind="envelope")]
    for i, seg in enumerate(segs, start=1):
        ramp_eff = min(ramp, seg.t1 - seg.t0)
        labels.append(PhaseLabel(f"segment_{i}", seg.t0 + ramp_eff, seg.t1))
    return ScenarioTrace(dt=dt, ax=ax, ay=ay, road=road_arr, labels=labels, name=name)


def make_braking(
    a_peak: float,
    t_start: float = 1.0,
    t_ramp: float = 0.5,
    t_hold: float = 3.0,
    t_release: float = 0.15,
    *,
    dt: float = DEFAULT_DT,
    tail: float = 4.0,
    road: np.ndarray | None = None,
) -> ScenarioTrace:
    """Trapezoidal longitudinal deceleration, flat road by default."""
    if a_peak > 0.0:
        raise ScenarioError("a_peak must be <= 0 for a braking maneuver")
    for label, value in (("t_ramp", t_ramp), ("t_hold", t_hold), ("t_release", t_release)):
        if value <= 0.0:
            raise ScenarioError(f"{label} must be > 0")
    if t_start < 0.0:
        raise ScenarioError("t_start must be >= 0")
    end = t_start + t_ramp + t_hold + t_release
    n = int(round((end + tail) / dt))
    knots = [
        (0.0, 0.0),
        (t_start, 0.0),
        (t_start + t_ramp, a_peak),
        (t_start + t_ramp + t_hold, a_peak),
        (end, 0.0),
    ]
    ax = _sample_profile(knots, n, dt)
    road_arr = np.zeros((4, n)) if road is None else np.asarray(road, dtype=float)
    labels = [
        PhaseLabel("brake", t_start, end, kind="envelope"),
        PhaseLabel("brake_hold", t_start + t_ramp, t_start + t_ramp + t_hold),
    ]
    return ScenarioTrace(dt=dt, ax=ax, ay=np.zeros(n), road=road_arr,
                         labels=labels, name="braking")


def make_chicane(
    ay_amp: float,
    n_steps: int = 3,
    t_hold: float = 3.0,
    *,
    t_start: float = 1.0,
    ramp: float = DEFAULT_RAMP,
    dt: float = DEFAULT_DT,
    tail: float = 3.0,
    road: np.ndarray | None = None,
) -> ScenarioTrace:
    """Alternating-sign lateral steps (step-steer set), smooth 0.2 s ramps."""
    if n_steps < 1:
        raise ScenarioError("need at least one step")
    segments = []
    t = t_start
    for i in range(n_steps):
        level = ay_amp if i % 2 == 0 else -ay_amp
        segments.append(Segment(t, t + ramp + t_hold, ax=0.0, ay=level))
        t += ramp + t_hold
    trace = make_mixed(segments, dt=dt, ramp=ramp, tail=tail, road=road, name="chicane")
    labels = [PhaseLabel("chicane", t_start, t + ramp, kind="envelope")]
    for i in range(n_steps):
        t0 = t_start + i * (ramp + t_hold)
        labels.append(PhaseLabel(f"phase{i + 1}", t0 + ramp, t0 + ramp + t_hold))
    trace.labels = labels
    return trace


def make_road_noise(
    class_amplitude: float,
    seed: int,
    n_steps: int,
    dt: float = DEFAULT_DT,
    cutoff_hz: float = 4.0,
) -> np.ndarray:
    """Seeded band-limited road height per corner, (4, n_steps), RMS-scaled.

    The same seed always reproduces the same trace bit for bit; the requested
    amplitude is the per-corner RMS of the height signal.
    """
    if class_amplitude < 0.0:
        raise ScenarioError("amplitude must be >= 0")
    if n_steps < 1:
        raise ScenarioError("n_steps must be >= 1")
    rng = np.random.default_rng(seed)
    white = rng.standard_normal((4, n_steps))
    tau = 1.0 / (2.0 * math.pi * cutoff_hz)
    alpha = dt / (tau + dt)
    filtered = np.empty_like(white)
    y = np.zeros(4)
    for k in range(n_steps):
        y = y + alpha * (white[:, k] - y)
        filtered[:, k] = y
    rms = np.sqrt(np.mean(filtered**2, axis=1, keepdims=True))
    return class_amplitude * (filtered / rms)


_SCENARIO_KEYS = {"dt", "duration", "ramp_s", "segments", "road", "name"}
_SEGMENT_KEYS = {"t0", "t1", "ax", "ay"}
_ROAD_KEYS = {"amplitude_m", "seed"}


def load_scenario(path) -> ScenarioTrace:
    """Load a scenario JSON: {dt, segments: [{t0, t1, ax, ay}], road: {amplitude_m, seed}}."""
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScenarioError("scenario file must hold a JSON object")
    unknown = set(raw) - _SCENARIO_KEYS
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {sorted(unknown)}")
    if "segments" not in raw or not raw["segments"]:
        raise ScenarioError("scenario needs a non-empty 'segments' list")

    dt = float(raw.get("dt", DEFAULT_DT))
    ramp = float(raw.get("ramp_s", DEFAULT_RAMP))
    segments = []
    for entry in raw["segments"]:
        bad = set(entry) - _SEGMENT_KEYS
        if bad:
            raise ScenarioError(f"unknown segment keys: {sorted(bad)}")
        segments.append(Segment(
            t0=float(entry["t0"]), t1=float(entry["t1"]),
            ax=float(entry.get("ax", 0.0)), ay=float(entry.get("ay", 0.0)),
        ))

    duration = float(raw["duration"]) if "duration" in raw else None
    trace = make_mixed(segments, dt=dt, ramp=ramp, duration=duration,
                       name=str(raw.get("name", "scenario")))
    road_cfg = raw.get("road")
    if road_cfg:
        bad = set(road_cfg) - _ROAD_KEYS
        if bad:
            raise ScenarioError(f"unknown road keys: {sorted(bad)}")
        amplitude = float(road_cfg.get("amplitude_m", 0.0))
        seed = int(road_cfg.get("seed", 0))
        trace.road = make_road_noise(amplitude, seed, trace.n_steps, dt)
    return trace


def trace_to_csv(trace: ScenarioTrace, path) -> None:
    """Export the sampled inputs as CSV."""
    with open(path, "w", newline="") as fh:
        fh.write("t,ax,ay,road_fl,road_fr,road_rl,road_rr\n")
        times = trace.times()
        for k in range(trace.n_steps):
            row = [times[k], trace.ax[k], trace.ay[k], *trace.road[:, k]]
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


__all__ = [
    "PhaseLabel",
    "Segment",
    "ScenarioTrace",
    "make_mixed",
    "make_braking",
    "make_chicane",
    "make_road_noise",
    "load_scenario",
    "trace_to_csv",
]
