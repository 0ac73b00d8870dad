"""Arrival, traversal and tunneling times of the soliton, and the position-momentum bound.

All times use the principal arccos branch [0, pi]. Below the barrier the
cos(k2 a) denominator becomes cosh(k2 a). An arccos argument outside [-1, 1]
is a domain error; it is never clamped. The only exception is rounding noise
within ``ARG_ROUNDING`` of +-1, which is snapped back onto the branch edge.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ArccosDomainError, BoundViolationError, MatchingSingularityError
from .scattering import RESONANCE_TOL, SINGULARITY_FLOOR, ScatteringSetup, is_resonant
from .units import NATURAL, PhysicalContext, Regime

ARG_ROUNDING = 1e-12


@dataclass(frozen=True)
class TunnelingReport:
    total_time_t3: float | None
    classical_time: float
    tunneling_tau: float | None
    arccos_argument: float | None
    in_domain: bool
    resonant: bool
    resonance_index: int | None = None
    status: str = "ok"

    @property
    def parity_discrepancy(self) -> bool:
        """Resonant at odd n: the argument is -1 and tau = pi/(k3 c), not zero."""
        return self.resonant and self.resonance_index is not None and self.resonance_index % 2 == 1


@dataclass(frozen=True)
class UncertaintyRecord:
    delta_x: float
    delta_k: float
    delta_p: float
    product: float


def _wall_ratio(setup: ScatteringSetup) -> float:
    denom = setup.barrier_factor()
    if setup.regime is Regime.ABOVE and abs(denom) < SINGULARITY_FLOOR:
        raise MatchingSingularityError(f"cos(k2 a) = {denom!r} below floor")
    return math.cos(setup.k1 * setup.width) / denom


def arccos_argument(setup: ScatteringSetup, x1: float = 0.0, t1: float = 0.0) -> float:
    """[cos(k1 a)/D(k2 a)] * cos(k1 (x1 - c t1)), unchecked."""
    return _wall_ratio(setup) * math.cos(setup.k1 * (x1 - setup.speed * t1))


def _principal_arccos(arg: float) -> float:
    if abs(arg) > 1.0:
        if abs(arg) - 1.0 > ARG_ROUNDING or not math.isfinite(arg):
            raise ArccosDomainError(arg)
        arg = math.copysign(1.0, arg)
    return math.acos(arg)


def arrival_time(setup: ScatteringSetup, x1: float, t1: float, x3: float) -> float:
    """t3 = x3/c - arccos[ratio * cos(k1 (x1 - c t1))]/(k3 c)."""
    if x3 < setup.barrier.right_wall:
        raise ValueError(f"x3={x3!r} lies before the right barrier wall")
    c = setup.speed
    angle = _principal_arccos(arccos_argument(setup, x1, t1))
    return x3 / c - angle / (setup.k3 * c)


def tunneling_time(setup: ScatteringSetup) -> float:
    """tau = arccos[cos(k1 a)/D(k2 a)]/(k3 c), in [0, pi/(k3 c)]."""
    angle = _principal_arccos(arccos_argument(setup))
    return angle / (setup.k3 * setup.speed)


def _resonance(setup: ScatteringSetup, tol: float):
    if setup.regime is not Regime.ABOVE:
        return False, None
    ok, n, _ = is_resonant(setup, tol)
    return ok, (n if ok else None)


def traversal_time(setup: ScatteringSetup, tol: float = RESONANCE_TOL) -> TunnelingReport:
    """Time to reach the far wall x3 = a starting from x1 = 0 at t1 = 0.

    Domain errors and singular walls come back as a flagged report with the
    time fields set to None, so sweeps can record the point.
    """
    a, c = setup.width, setup.speed
    classical = a / c
    resonant, n = _resonance(setup, tol)
    try:
        arg = arccos_argument(setup)
    except MatchingSingularityError:
        return TunnelingReport(None, classical, None, None, False, resonant, n, "singular")
    try:
        angle = _principal_arccos(arg)
    except ArccosDomainError:
        return TunnelingReport(None, classical, None, arg, False, resonant, n, "out_of_domain")
    delay = angle / (setup.k3 * c)
    # delay >= 0 is |t3 - a/c| without the rounding of a subtraction
    return TunnelingReport(classical - delay, classical, delay, arg, True, resonant, n)


def min_transmitted_distance(setup: ScatteringSetup, x1: float = 0.0, t1: float = 0.0) -> float:
    """Smallest x3 keeping the arrival time nonnegative; at most pi/k3."""
    return _principal_arccos(arccos_argument(setup, x1, t1)) / setup.k3


def uncertainty_product(delta_k: float, delta_x: float, ctx: PhysicalContext = NATURAL) -> UncertaintyRecord:
    """Record for dx * hbar dk, which is >= pi hbar = h/2 whenever dx >= pi/dk."""
    if not (delta_k > 0 and delta_x > 0):
        raise ValueError("delta_k and delta_x must be positive")
    if delta_x * delta_k < math.pi * (1.0 - ARG_ROUNDING):
        raise BoundViolationError(
            f"delta_x={delta_x!r} below the minimum distance pi/delta_k={math.pi / delta_k!r}"
        )
    delta_p = ctx.hbar * delta_k
    return UncertaintyRecord(delta_x, delta_k, delta_p, delta_x * delta_p)
