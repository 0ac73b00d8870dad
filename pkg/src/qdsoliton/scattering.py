"""Three-region soliton picture for a rectangular barrier.

Region I (x < 0) and III (x > a) are free, region II carries the barrier
height. Density continuity at the two walls fixes the region amplitudes:
rho2 = rho1 and rho3 = rho2 * D(k2 a)^2 / cos(k1 a)^2, with D = cos above the
barrier and D = cosh below it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import MatchingSingularityError, RegimeError
from .units import NATURAL, Barrier, ParticleState, PhysicalContext, Regime, classify_regime, wavenumber

SINGULARITY_FLOOR = 1e-12
RESONANCE_TOL = 1e-9


@dataclass(frozen=True)
class ScatteringSetup:
    particle: ParticleState
    barrier: Barrier
    ctx: PhysicalContext
    k1: float
    k2: float
    k3: float
    regime: Regime

    @property
    def width(self) -> float:
        return self.barrier.width_a

    @property
    def speed(self) -> float:
        return self.particle.speed_c

    def barrier_factor(self) -> float:
        """D(k2 a): cos above the barrier, cosh below, 1 at the critical energy."""
        phase = self.k2 * self.width
        if self.regime is Regime.BELOW:
            return math.cosh(phase)
        return math.cos(phase)


@dataclass(frozen=True)
class ScatteringSolution:
    rho1: float
    rho2: float
    rho3: float
    setup: ScatteringSetup
    resonant: bool
    resonance_index_n: int | None = None

    @property
    def amplitude_ratio(self) -> float:
        return self.rho3 / self.rho1 if self.rho1 else 1.0


def make_setup(particle: ParticleState, barrier: Barrier, ctx: PhysicalContext = NATURAL) -> ScatteringSetup:
    # region III is free space at the same energy, so k3 = k1 on and off resonance
    k1 = wavenumber(particle.energy_e, 0.0, ctx)
    k2 = wavenumber(particle.energy_e, barrier.height_v0, ctx)
    regime = classify_regime(particle.energy_e, barrier.height_v0)
    return ScatteringSetup(particle, barrier, ctx, k1, k2, k1, regime)


def setup_for(energy, width, height, ctx: PhysicalContext = NATURAL, speed=None, origin=0.0):
    """Convenience constructor; speed defaults to the free de Broglie speed."""
    if speed is None:
        particle = ParticleState.from_energy(energy, ctx)
    else:
        particle = ParticleState(energy, speed)
    return make_setup(particle, Barrier(width, height, origin), ctx)


def solve_regions(setup: ScatteringSetup, rho1: float = 1.0, tol: float = SINGULARITY_FLOOR,
                  rtol: float = RESONANCE_TOL) -> ScatteringSolution:
    """Apply the wall matching conditions.

    ``tol`` is the floor on |cos(k1 a)| below which the matching is singular;
    ``rtol`` is the relative tolerance for calling rho3 == rho1 a recovery.
    """
    if rho1 < 0:
        raise ValueError("rho1 must be nonnegative")
    denom = math.cos(setup.k1 * setup.width)
    if abs(denom) < tol:
        raise MatchingSingularityError(f"cos(k1 a) = {denom!r} below floor {tol!r}")
    rho2 = rho1
    rho3 = rho2 * setup.barrier_factor() ** 2 / denom**2

    recovered = abs(rho3 - rho1) <= rtol * rho1 and setup.k3 == setup.k1
    n = None
    if recovered and setup.regime is Regime.ABOVE:
        ok, nearest, _ = is_resonant(setup)
        n = nearest if ok else None
    return ScatteringSolution(rho1, rho2, rho3, setup, recovered, n)


def resonance_phase(setup: ScatteringSetup) -> float:
    """(k1 - k2) a, the quantity that must be a multiple of pi at resonance."""
    return (setup.k1 - setup.k2) * setup.width


def is_resonant(setup: ScatteringSetup, tol: float = RESONANCE_TOL):
    """Test (k1 - k2) a = +-n pi. Returns ``(resonant, nearest_n, residual)``."""
    if setup.regime is not Regime.ABOVE:
        raise RegimeError(f"resonance condition needs E > V0, regime is {setup.regime.value}")
    phase = resonance_phase(setup)
    n = round(abs(phase) / math.pi)
    residual = abs(abs(phase) - n * math.pi)
    return residual < tol, n, residual


def resonance_mismatch(energy, barrier: Barrier, n: int, ctx: PhysicalContext = NATURAL) -> float:
    """f(E) = (sqrt(2mE) - sqrt(2m(E-V0))) a/hbar - n pi for E >= V0.

    The momentum difference is written as 2mV0/(p1 + p2) to avoid cancellation.
    """
    p1 = math.sqrt(2.0 * ctx.mass * energy)
    p2 = math.sqrt(2.0 * ctx.mass * (energy - barrier.height_v0))
    dp = 2.0 * ctx.mass * barrier.height_v0 / (p1 + p2)
    return dp * barrier.width_a / ctx.hbar - n * math.pi


def resonance_energies(barrier: Barrier, n: int, ctx: PhysicalContext = NATURAL, tol: float = 1e-14):
    """Energy E > V0 with (k1 - k2) a = n pi, or None when no such energy exists.

    f(E) falls strictly from sqrt(2m V0) a/hbar - n pi at E = V0 to -n pi as
    E grows, so a root exists iff n pi < sqrt(2m V0) a/hbar.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    v0 = barrier.height_v0
    if not v0 > 0:
        return None
    if n * math.pi >= math.sqrt(2.0 * ctx.mass * v0) * barrier.width_a / ctx.hbar:
        return None

    def f(e):
        return resonance_mismatch(e, barrier, n, ctx)

    lo = v0
    # dp < 2 m V0 / p1, so f(hi) < 0 once p1 >= 2 m V0 a / (n pi hbar)
    p_hi = 2.0 * ctx.mass * v0 * barrier.width_a / (n * math.pi * ctx.hbar)
    hi = max(2.0 * v0, 2.0 * p_hi**2 / (2.0 * ctx.mass))
    while f(hi) >= 0:
        hi *= 2.0
    return optimize.bisect(f, lo, hi, xtol=tol * v0, rtol=max(tol, 4 * np.finfo(float).eps), maxiter=500)


def resonance_energies_upto(barrier: Barrier, e_max: float, ctx: PhysicalContext = NATURAL):
    """All roots n = 1, 2, ... with E <= e_max, in increasing n (decreasing E)."""
    roots = []
    n = 1
    while True:
        e = resonance_energies(barrier, n, ctx)
        if e is None:
            break
        if e <= e_max:
            roots.append((n, e))
        n += 1
    return roots
