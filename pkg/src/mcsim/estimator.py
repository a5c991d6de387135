"""Maneuver recognition from measured COG accelerations.

Corner load variations follow the linear quasi-static model

    fz = [-HM/(2L)*A_x - HM/(2T)*A_y,
          -HM/(2L)*A_x + HM/(2T)*A_y,
          +HM/(2L)*A_x - HM/(2T)*A_y,
          +HM/(2L)*A_x + HM/(2T)*A_y]      (order FL, FR, RL, RR)

so traction unloads the front axle and a leftward acceleration unloads the
left side.  The four components sum to zero identically.  Two first-order
low-pass copies (fast and slow) of the raw signal feed the switching logic;
a maneuver inversion is flagged when the two disagree in sign while both are
still large in modulus.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidParameterError
from .vehicle import VehicleParams

ZEROS4 = (0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class LoadTransferEstimate:
    """Raw and filtered per-corner load variations (N, order FL FR RL RR)."""

    fz: tuple[float, float, float, float] = ZEROS4
    fz_fast: tuple[float, float, float, float] = ZEROS4
    fz_slow: tuple[float, float, float, float] = ZEROS4


def load_transfer(a_x: float, a_y: float, params: VehicleParams) -> tuple[float, float, float, float]:
    """Quasi-static corner load variations for the given COG accelerations."""
    lon = params.cog_height * params.sprung_mass / (2.0 * params.wheelbase) * a_x
    lat = params.cog_height * params.sprung_mass / (2.0 * params.track) * a_y
    return (-lon - lat, -lon + lat, lon - lat, lon + lat)


def _lowpass(y: float, u: float, dt: float, tau: float) -> float:
    return y + (dt / (tau + dt)) * (u - y)


def filter_update(
    est: LoadTransferEstimate,
    fz_raw,
    dt: float,
    tau_fast: float = 0.02,
    tau_slow: float = 0.3,
) -> LoadTransferEstimate:
    """One discrete update of the fast and slow low-pass filters."""
    if dt <= 0.0:
        raise InvalidParameterError(f"dt must be > 0, got {dt}")
    if tau_fast <= 0.0 or tau_slow <= 0.0:
        raise InvalidParameterError("filter time constants must be > 0")
    fz = tuple(fz_raw)
    fast = tuple(_lowpass(y, u, dt, tau_fast) for y, u in zip(est.fz_fast, fz))
    slow = tuple(_lowpass(y, u, dt, tau_slow) for y, u in zip(est.fz_slow, fz))
    return LoadTransferEstimate(fz=fz, fz_fast=fast, fz_slow=slow)


def inversion_detected(est: LoadTransferEstimate, corner: int, t3: float) -> bool:
    """True iff fast and slow signals oppose in sign and both exceed t3 in modulus."""
    if t3 <= 0.0:
        raise InvalidParameterError(f"t3 must be > 0, got {t3}")
    fast = est.fz_fast[corner]
    slow = est.fz_slow[corner]
    return fast * slow < 0.0 and min(abs(fast), abs(slow)) > t3


__all__ = [
    "LoadTransferEstimate",
    "load_transfer",
    "filter_update",
    "inversion_detected",
]
