"""Standard linear quantum mechanics for the same rectangular barrier.

This is the independent reference the soliton predictions are compared to.
Nothing here feeds back into the soliton modules.

Transmission amplitude convention: psi = exp(ik x) + r exp(-ik x) left of the
barrier and psi = t exp(ik (x - a)) right of it, with x measured from the left
wall. A free particle then has t = exp(ik a) and the phase time reduces to the
classical crossing time a/v.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chronometry import traversal_time
from .errors import MatchingSingularityError, RegimeError
from .scattering import is_resonant, solve_regions
from .units import NATURAL, Barrier, PhysicalContext, Regime, classify_regime, wavenumber


@dataclass(frozen=True)
class OracleResult:
    transmission_T: float
    reflection_R: float
    amplitude_phase: float
    wigner_time: float | None


def analytic_transmission(energy: float, barrier: Barrier, ctx: PhysicalContext = NATURAL) -> float:
    """Textbook |t|^2 for a rectangular barrier, with the continuous limit at E = V0."""
    if not energy > 0:
        raise ValueError("energy must be positive")
    v0, a = barrier.height_v0, barrier.width_a
    if v0 == 0:
        return 1.0
    regime = classify_regime(energy, v0)
    if regime is Regime.CRITICAL:
        return 1.0 / (1.0 + ctx.mass * v0 * a**2 / (2.0 * ctx.hbar**2))
    k2 = wavenumber(energy, v0, ctx)
    if regime is Regime.ABOVE:
        s = math.sin(k2 * a)
        return 1.0 / (1.0 + v0**2 * s * s / (4.0 * energy * (energy - v0)))
    s = math.sinh(k2 * a)
    return 1.0 / (1.0 + v0**2 * s * s / (4.0 * energy * (v0 - energy)))


def slab_matrix(energy: float, height: float, width: float, ctx: PhysicalContext = NATURAL) -> np.ndarray:
    """Propagator of (psi, psi') across a slab of constant potential.

    Written with real functions so the critical energy (q = 0) needs no special
    plane-wave basis.
    """
    q = wavenumber(energy, height, ctx)
    regime = classify_regime(energy, height)
    if regime is Regime.ABOVE:
        cs, sn = math.cos(q * width), math.sin(q * width)
        return np.array([[cs, sn / q], [-q * sn, cs]])
    if regime is Regime.BELOW:
        ch, sh = math.cosh(q * width), math.sinh(q * width)
        return np.array([[ch, sh / q], [q * sh, ch]])
    return np.array([[1.0, width], [0.0, 1.0]])


def amplitude_transfer_matrix(energy: float, barrier: Barrier, ctx: PhysicalContext = NATURAL) -> np.ndarray:
    """2x2 complex matrix taking free-wave amplitudes (A, B) at the left wall to those at the right wall."""
    k = wavenumber(energy, 0.0, ctx)
    to_field = np.array([[1.0, 1.0], [1j * k, -1j * k]])
    to_amplitudes = np.array([[0.5, -0.5j / k], [0.5, 0.5j / k]])
    return to_amplitudes @ slab_matrix(energy, barrier.height_v0, barrier.width_a, ctx) @ to_field


def transfer_matrix_amplitudes(energy: float, barrier: Barrier, ctx: PhysicalContext = NATURAL):
    """(t, r): right-going (t, 0) = M (1, r) solved for the incident unit wave.

    det M = 1, so t = 1/M[1, 1]; this avoids cancellation for opaque barriers.
    """
    if not energy > 0:
        raise ValueError("energy must be positive")
    m = amplitude_transfer_matrix(energy, barrier, ctx)
    r = -m[1, 0] / m[1, 1]
    t = 1.0 / m[1, 1]
    return complex(t), complex(r)


def transfer_matrix_amplitude(energy: float, barrier: Barrier, ctx: PhysicalContext = NATURAL) -> complex:
    return transfer_matrix_amplitudes(energy, barrier, ctx)[0]


def wigner_phase_time(energy: float, barrier: Barrier, ctx: PhysicalContext = NATURAL,
                      dE: float | None = None, with_error: bool = False):
    """hbar d(arg t)/dE by a central difference.

    The phase jump is taken on the nearest branch (angle of t(E+dE)/t(E-dE)),
    so wrapping at +-pi does not matter. With ``with_error`` the result is
    ``(tau, err)`` where err is the Richardson estimate from a halved step.
    """
    if dE is None:
        dE = 1e-5 * energy
    lo, hi = energy - dE, energy + dE
    v0 = barrier.height_v0
    if lo <= 0:
        raise ValueError("energy - dE must stay positive")
    if v0 > 0 and lo <= v0 <= hi:
        raise RegimeError(f"[{lo!r}, {hi!r}] straddles the barrier height {v0!r}")

    def central(step):
        t_hi = transfer_matrix_amplitude(energy + step, barrier, ctx)
        t_lo = transfer_matrix_amplitude(energy - step, barrier, ctx)
        return ctx.hbar * np.angle(t_hi / t_lo) / (2.0 * step)

    tau = central(dE)
    if not with_error:
        return float(tau)
    half = central(0.5 * dE)
    return float(half), float(abs(half - tau) / 3.0)


def oracle_resonance_energies(barrier: Barrier, e_max: float, ctx: PhysicalContext = NATURAL):
    """Energies V0 < E <= e_max with k2 a = n pi, where the textbook barrier is transparent."""
    out = []
    n = 1
    while True:
        k2 = n * math.pi / barrier.width_a
        e = barrier.height_v0 + (ctx.hbar * k2) ** 2 / (2.0 * ctx.mass)
        if e > e_max:
            return out
        out.append((n, e))
        n += 1


def solve(energy: float, barrier: Barrier, ctx: PhysicalContext = NATURAL, dE: float | None = None) -> OracleResult:
    t, r = transfer_matrix_amplitudes(energy, barrier, ctx)
    if dE is None:
        dE = 1e-5 * energy
        if barrier.height_v0 != energy:
            dE = min(dE, 0.5 * abs(energy - barrier.height_v0))
    try:
        tau = wigner_phase_time(energy, barrier, ctx, dE)
    except RegimeError:
        tau = None
    return OracleResult(abs(t) ** 2, abs(r) ** 2, float(np.angle(t)), tau)


@dataclass(frozen=True)
class ComparisonRecord:
    """Soliton-model predictions next to the textbook ones for one setup."""

    paper_tau: float | None
    paper_status: str
    wigner_time: float | None
    amplitude_ratio: float | None
    oracle_T: float
    paper_resonance_residual: float | None
    oracle_resonance_residual: float
    paper_resonant: bool
    oracle_resonant: bool

    @property
    def agree(self) -> bool:
        return self.paper_resonant == self.oracle_resonant


def oracle_resonance_residual(setup) -> float:
    """|sin(k2 a)| above the barrier (zero at transparency); |sinh(k2 a)| below."""
    phase = setup.k2 * setup.width
    if setup.regime is Regime.BELOW:
        return abs(math.sinh(phase))
    return abs(math.sin(phase))


def compare_report(setup, tol: float = 1e-9) -> ComparisonRecord:
    report = traversal_time(setup, tol)
    try:
        ratio = solve_regions(setup).amplitude_ratio
    except MatchingSingularityError:
        ratio = None
    paper_residual = None
    paper_resonant = False
    if setup.regime is Regime.ABOVE:
        paper_resonant, _, paper_residual = is_resonant(setup, tol)

    result = solve(setup.particle.energy_e, setup.barrier, setup.ctx)
    oracle_residual = oracle_resonance_residual(setup)
    # the textbook barrier is only transparent above it (or when absent)
    oracle_resonant = setup.barrier.height_v0 == 0 or (
        setup.regime is Regime.ABOVE and oracle_residual < tol
    )
    return ComparisonRecord(
        paper_tau=report.tunneling_tau,
        paper_status=report.status,
        wigner_time=result.wigner_time,
        amplitude_ratio=ratio,
        oracle_T=result.transmission_T,
        paper_resonance_residual=paper_residual,
        oracle_resonance_residual=oracle_residual,
        paper_resonant=paper_resonant,
        oracle_resonant=oracle_resonant,
    )
