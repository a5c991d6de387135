"""Per-corner valve-switching state machines.

Two active logics plus the passive modes:

* basic hardening - close the valve when the corner load transfer exceeds a
  closing threshold t1, reopen when it falls below an opening threshold
  t2 < t1 (hysteresis), never switching twice within the minimum valve
  interval;
* extended - same core, plus a kick-avoidance cycle (delay the opening until
  the stroke recrosses the level stored at closing, with a timed backup) and
  a maneuver-inversion cycle (a prompt open/close pulse that re-centers the
  stiff map when the load transfer flips sign mid-sequence).

Signal routing in the extended logic: the basic-equivalent core (t1 closing,
t2 arming, armed cancel) runs on the fast-filtered signal, so the valve
closes early while the stroke is still small and arms early enough to catch
the stroke recrossing the closing level on the way out of the maneuver; the
slow signal exists for the inversion detector, which compares the two.

Each corner runs its own instance; the machines are deterministic and total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .airspring import Valve
from .errors import InvalidParameterError

_TIME_EPS = 1e-12  # absorbs k*dt accumulation noise in dwell comparisons


class Node(Enum):
    SOFT = 0
    HARD = 1
    ARMED_OPEN = 2
    REOPEN_PULSE = 3


#: valve command associated with each node
_COMMAND = {
    Node.SOFT: Valve.OPEN,
    Node.HARD: Valve.CLOSED,
    Node.ARMED_OPEN: Valve.CLOSED,
    Node.REOPEN_PULSE: Valve.OPEN,
}


@dataclass(frozen=True)
class Thresholds:
    """Switching thresholds and timing constants."""

    t1_n: float = 300.0              # closing threshold (N)
    t2_n: float = 150.0              # opening threshold (N)
    t3_n: float = 200.0              # inversion modulus threshold (N)
    stroke_tol_m: float = 2e-5       # recross tolerance (m)
    backup_timeout_s: float = 2.0    # armed-open backup (s)
    min_switch_interval_s: float = 0.1

    def __post_init__(self):
        if not self.t1_n > self.t2_n > 0.0:
            raise InvalidParameterError("need t1 > t2 > 0 (hysteresis band)")
        if self.t3_n <= 0.0:
            raise InvalidParameterError("t3 must be > 0")
        if self.stroke_tol_m <= 0.0:
            raise InvalidParameterError("stroke_tol must be > 0")
        if self.backup_timeout_s <= 0.0:
            raise InvalidParameterError("backup_timeout must be > 0")
        if self.min_switch_interval_s < 0.1:
            raise InvalidParameterError("min_switch_interval must be >= 0.1 s")


@dataclass(frozen=True)
class ControllerState:
    """Mutable part of one corner's switching machine."""

    node: Node = Node.SOFT
    stroke_at_close: float = 0.0          # s-bar, valid in HARD / ARMED_OPEN
    last_switch_time: float = -math.inf   # time of the last valve command change
    armed_since: float = -math.inf
    armed_side: float = 0.0               # sign of (stroke - s_bar) at the last armed step
    inversion_handled: bool = False       # one pulse per inversion episode


def _sign(x: float) -> float:
    if x > 0.0:
        return 1.0
    return -1.0 if x < 0.0 else 0.0


def _can_switch(cs: ControllerState, t: float, th: Thresholds) -> bool:
    return t - cs.last_switch_time >= th.min_switch_interval_s - _TIME_EPS


def basic_step(
    cs: ControllerState, fz: float, t: float, th: Thresholds
) -> tuple[ControllerState, Valve]:
    """Core hardening logic: soft/hard hysteresis on |fz| with dwell time."""
    if _can_switch(cs, t, th):
        if cs.node is Node.SOFT and abs(fz) > th.t1_n:
            cs = replace(cs, node=Node.HARD, last_switch_time=t)
        elif cs.node is Node.HARD and abs(fz) <= th.t2_n:
            cs = replace(cs, node=Node.SOFT, last_switch_time=t)
    return cs, _COMMAND[cs.node]


def extended_step(
    cs: ControllerState,
    fz_fast: float,
    fz_slow: float,
    dz: float,
    t: float,
    th: Thresholds,
    enable_kick_avoidance: bool = True,
    enable_inversion: bool = True,
) -> tuple[ControllerState, Valve]:
    """Multichamber-aware logic with kick-avoidance and inversion cycles.

    With both cycles disabled this reduces exactly to basic_step driven by
    (fz_fast for t1, fz_slow for t2).
    """
    can = _can_switch(cs, t, th)
    inversion = enable_inversion and (
        fz_fast * fz_slow < 0.0 and min(abs(fz_fast), abs(fz_slow)) > th.t3_n
    )
    # the latch clears as soon as the detector drops, arming the next episode
    cs = replace(cs, inversion_handled=cs.inversion_handled and inversion)

    node = cs.node
    if node is Node.SOFT:
        if can and abs(fz_fast) > th.t1_n:
            cs = replace(cs, node=Node.HARD, stroke_at_close=dz, last_switch_time=t)

    elif node is Node.HARD:
        if inversion and not cs.inversion_handled and can:
            cs = replace(
                cs, node=Node.REOPEN_PULSE, last_switch_time=t, inversion_handled=True
            )
        elif enable_kick_avoidance and abs(fz_fast) <= th.t1_n:
            # arm as soon as the load is no longer above the closing level;
            # the stroke recrosses its closing value at a load below t1, so
            # arming at t1 always precedes the kick-free opening opportunity
            cs = replace(
                cs,
                node=Node.ARMED_OPEN,
                armed_since=t,
                armed_side=_sign(dz - cs.stroke_at_close),
            )
        elif not enable_kick_avoidance and abs(fz_fast) <= th.t2_n and can:
            cs = replace(cs, node=Node.SOFT, last_switch_time=t)

    elif node is Node.ARMED_OPEN:
        if abs(fz_fast) > th.t1_n:
            cs = replace(cs, node=Node.HARD)  # maneuver resumed, never opened
        elif inversion and not cs.inversion_handled and can:
            cs = replace(
                cs, node=Node.REOPEN_PULSE, last_switch_time=t, inversion_handled=True
            )
        else:
            # recross = within tolerance of s-bar, or the stroke crossed it
            # since the previous armed step (sign flip of the offset)
            offset = dz - cs.stroke_at_close
            side = _sign(offset)
            recrossed = abs(offset) <= th.stroke_tol_m or (
                cs.armed_side != 0.0 and side != 0.0 and side != cs.armed_side
            )
            if recrossed or t - cs.armed_since > th.backup_timeout_s:
                if can:
                    cs = replace(cs, node=Node.SOFT, last_switch_time=t)
                # a dwell-blocked recross stays pending: armed_side is not
                # refreshed, so the sign flip keeps triggering until allowed
            else:
                cs = replace(cs, armed_side=side)

    elif node is Node.REOPEN_PULSE:
        if can:  # earliest admissible re-close, stores the new closing stroke
            cs = replace(cs, node=Node.HARD, stroke_at_close=dz, last_switch_time=t)

    return cs, _COMMAND[cs.node]


class CornerController:
    """Stateful wrapper holding one corner's machine; mode in
    {"soft", "hard", "basic", "extended"}."""

    def __init__(
        self,
        mode: str,
        thresholds: Thresholds | None = None,
        enable_kick_avoidance: bool = True,
        enable_inversion: bool = True,
    ):
        if mode not in ("soft", "hard", "basic", "extended"):
            raise InvalidParameterError(f"unknown controller mode {mode!r}")
        self.mode = mode
        self.thresholds = thresholds if thresholds is not None else Thresholds()
        self.enable_kick_avoidance = enable_kick_avoidance
        self.enable_inversion = enable_inversion
        self.state = ControllerState(
            node=Node.HARD if mode == "hard" else Node.SOFT
        )

    def step(
        self, t: float, fz: float, fz_fast: float, fz_slow: float, dz: float
    ) -> Valve:
        if self.mode == "soft":
            return Valve.OPEN
        if self.mode == "hard":
            return Valve.CLOSED
        if self.mode == "basic":
            self.state, command = basic_step(self.state, fz, t, self.thresholds)
            return command
        self.state, command = extended_step(
            self.state, fz_fast, fz_slow, dz, t, self.thresholds,
            self.enable_kick_avoidance, self.enable_inversion,
        )
        return command


CONTROLLER_MODES = ("soft", "hard", "basic", "extended")


__all__ = [
    "Node",
    "Thresholds",
    "ControllerState",
    "basic_step",
    "extended_step",
    "CornerController",
    "CONTROLLER_MODES",
]
