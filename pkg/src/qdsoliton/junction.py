"""Josephson-junction view of the barrier: transmitted electron density,
lossless-conduction conditions and flux quantization.

Phases enter only through energies (E = -hbar dtheta/dt), so no explicit
theta(x, t) field is kept. The loop measure is a dimensionless arc
parameter whose full length defaults to 2 pi.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import MatchingSingularityError
from .scattering import RESONANCE_TOL, SINGULARITY_FLOOR, ScatteringSetup, is_resonant
from .units import NATURAL, PhysicalContext, Regime

FULL_LOOP = 2.0 * math.pi


@dataclass(frozen=True)
class JunctionState:
    setup: ScatteringSetup
    normalized: bool = False

    @property
    def incident_amplitude(self) -> float:
        """1, or 2 k1/pi so that one support width of the incident cos^2 integrates to 1."""
        if self.normalized:
            return 2.0 * self.setup.k1 / math.pi
        return 1.0


@dataclass(frozen=True)
class FluxRecord:
    p1: float
    p2: float
    loop_length: float
    n: int
    flux: float
    residual: float


def transmission_prefactor(state: JunctionState) -> float:
    setup = state.setup
    denom = math.cos(setup.k1 * setup.width)
    if abs(denom) < SINGULARITY_FLOOR:
        raise MatchingSingularityError(f"cos(sqrt(2mE) a/hbar) = {denom!r} below floor")
    return setup.barrier_factor() ** 2 / denom**2


def transmitted_number_density(state: JunctionState, x: float, t: float) -> float:
    """n_e(x, t) in the far superconductor, for either side of the barrier height."""
    setup = state.setup
    phase = setup.k1 * (x - setup.speed * t)
    prefactor = transmission_prefactor(state)
    if abs(phase) >= 0.5 * math.pi:
        return 0.0
    return state.incident_amplitude * prefactor * math.cos(phase) ** 2


def lossless_condition(state: JunctionState, tol: float = RESONANCE_TOL):
    """Whether current crosses the junction without loss.

    Above the barrier this is the resonance condition and the diagnostics are
    (k1 a, k2 a + n pi). Otherwise both sides of cos^2(k1 a) = cosh^2(k2 a) are
    returned; that equality only holds at k2 = 0.
    """
    setup = state.setup
    if setup.regime is Regime.ABOVE:
        ok, n, _ = is_resonant(setup, tol)
        sign = 1.0 if setup.k1 >= setup.k2 else -1.0
        return ok, (setup.k1 * setup.width, setup.k2 * setup.width + sign * n * math.pi)
    lhs = math.cos(setup.k1 * setup.width) ** 2
    rhs = math.cosh(setup.k2 * setup.width) ** 2
    return abs(lhs - rhs) < tol, (lhs, rhs)


def quantize_loop(p1: float, p2: float, loop_length: float = FULL_LOOP,
                  ctx: PhysicalContext = NATURAL) -> FluxRecord:
    """Nearest flux quantum for a phase winding (p1 - p2) L / hbar.

    The sign of ``n`` carries the +- of the winding.
    """
    if not loop_length > 0:
        raise ValueError("loop_length must be positive")
    winding = (p1 - p2) * loop_length / ctx.hbar
    n = round(winding / math.pi)
    return FluxRecord(p1, p2, loop_length, n, flux_from_quantum_number(n, ctx), abs(winding - n * math.pi))


def flux_from_quantum_number(n: int, ctx: PhysicalContext = NATURAL) -> float:
    """n pi hbar / q. With q = e this equals the usual n h/(2e) per quantum."""
    return n * math.pi * ctx.hbar / ctx.charge


def junction_momenta(setup: ScatteringSetup):
    """(p1, p2) = hbar*(k1, k2) for the two sides of the junction."""
    return setup.ctx.hbar * setup.k1, setup.ctx.hbar * setup.k2
