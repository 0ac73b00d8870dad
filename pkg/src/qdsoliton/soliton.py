"""Compact cos^2 quantum-density soliton and its finite-difference verification.

The density is ``rho0 * cos(mu*xi)**beta`` on ``|mu*xi| < pi/2`` and exactly
zero outside, with ``xi = (x - x0) - c*(t - t0)``. Only ``beta = 2`` solves the
hydrodynamic equations with a non-constant density; other exponents are kept
as test fixtures for the residual checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateEnergyError, InsufficientGridError, ZeroDensityError
from .units import NATURAL, PhysicalContext, wavenumber

HALF_PI = 0.5 * math.pi
POSITIVITY_FLOOR = 1e-12


@dataclass(frozen=True)
class Soliton:
    amplitude_rho0: float
    wavenumber_mu: float
    speed_c: float
    center_x0: float = 0.0
    center_t0: float = 0.0
    exponent: int = 2

    def __post_init__(self):
        if self.amplitude_rho0 < 0:
            raise ValueError("amplitude must be nonnegative")
        if not self.wavenumber_mu > 0:
            raise ValueError("wavenumber must be positive")

    @property
    def support_width(self) -> float:
        return math.pi / self.wavenumber_mu

    def phase(self, x, t):
        """mu * xi for the given space-time point(s)."""
        xi = (np.asarray(x, dtype=float) - self.center_x0) - self.speed_c * (
            np.asarray(t, dtype=float) - self.center_t0
        )
        return self.wavenumber_mu * xi

    def support(self, t: float = 0.0) -> tuple[float, float]:
        """Open interval in x where the density is nonzero at time t."""
        mid = self.center_x0 + self.speed_c * (t - self.center_t0)
        half = 0.5 * self.support_width
        return mid - half, mid + half


@dataclass(frozen=True)
class DensityField:
    positions: np.ndarray
    densities: np.ndarray
    time_stamp: float
    grid_step: float

    def __post_init__(self):
        if self.positions.shape != self.densities.shape or self.positions.ndim != 1:
            raise ValueError("positions and densities must be 1-D arrays of equal length")
        if np.any(self.densities < 0):
            raise ValueError("densities must be nonnegative")


def build_soliton(energy, potential=0.0, ctx: PhysicalContext = NATURAL, amplitude=1.0,
                  speed=None, center_x0=0.0, center_t0=0.0) -> Soliton:
    """Soliton with mu = sqrt(2m(E - V))/hbar, i.e. quantum potential Q0 = E - V.

    ``speed`` defaults to the de Broglie particle speed hbar*mu/m.
    """
    if not energy > potential:
        raise DegenerateEnergyError(
            f"no compact soliton for E={energy!r} <= V={potential!r} (Q0 must be positive)"
        )
    mu = wavenumber(energy, potential, ctx)
    if speed is None:
        speed = ctx.hbar * mu / ctx.mass
    return Soliton(amplitude, mu, speed, center_x0, center_t0)


def density_at(s: Soliton, x, t):
    """Exact piecewise density. Returns a float for scalar input, else an array."""
    theta = s.phase(x, t)
    inside = np.abs(theta) < HALF_PI
    rho = np.where(inside, s.amplitude_rho0 * np.cos(np.where(inside, theta, 0.0)) ** s.exponent, 0.0)
    if rho.ndim == 0:
        return float(rho)
    return rho


def total_density(s: Soliton) -> float:
    """Analytic integral of rho0*cos^2 over the support: rho0*pi/(2*mu)."""
    if s.exponent != 2:
        raise ValueError("closed form only for the cos^2 soliton")
    return s.amplitude_rho0 * math.pi / (2.0 * s.wavenumber_mu)


def normalized(s: Soliton) -> Soliton:
    """Copy of ``s`` scaled so the density integrates to 1 over its support."""
    return replace(s, amplitude_rho0=2.0 * s.wavenumber_mu / math.pi)


def support_grid(s: Soliton, grid_points: int, t: float = 0.0):
    """``grid_points`` equally spaced positions strictly inside the support at time t.

    The spacing is width/(N+1), so the two walls sit exactly one step outside
    the first and last samples.
    """
    lo, hi = s.support(t)
    h = (hi - lo) / (grid_points + 1)
    return lo + h * np.arange(1, grid_points + 1), h


def sample(s: Soliton, grid_points: int, t: float = 0.0) -> DensityField:
    x, h = support_grid(s, grid_points, t)
    return DensityField(x, density_at(s, x, t), t, h)


def quantum_potential_numeric(field: DensityField, ctx: PhysicalContext = NATURAL,
                              floor: float | None = None):
    """Q = -(hbar^2/2m) (sqrt(rho))'' / sqrt(rho) by second-order central differences.

    Returns ``(positions, Q)`` for interior points whose three-point stencil has
    density above ``floor`` (default 1e-12 times the peak density).
    """
    rho = field.densities
    if rho.size < 5:
        raise InsufficientGridError(f"need at least 5 samples, got {rho.size}")
    if floor is None:
        floor = POSITIVITY_FLOOR * float(rho.max())
    positive = rho > floor
    usable = positive[:-2] & positive[1:-1] & positive[2:]
    n_usable = int(usable.sum())
    if n_usable < 5:
        if not usable.all():
            raise ZeroDensityError(
                f"only {n_usable} stencils avoid zero density; sample inside the support"
            )
        raise InsufficientGridError(f"only {n_usable} usable interior points")

    root = np.sqrt(rho)
    h = field.grid_step
    lap = (root[2:] - 2.0 * root[1:-1] + root[:-2]) / h**2
    with np.errstate(divide="ignore", invalid="ignore"):
        q = -(ctx.hbar**2 / (2.0 * ctx.mass)) * lap / root[1:-1]
    return field.positions[1:-1][usable], q[usable]


def residual_continuity(s: Soliton, grid_points: int = 2048, dt: float = 1e-4) -> float:
    """max |d(rho)/dt + d(rho*c)/dx| over the support interior at t = center_t0.

    Both derivatives are central differences. Points whose time stencil leaves
    the support are skipped.
    """
    if grid_points < 16:
        raise InsufficientGridError("grid_points must be >= 16")
    t = s.center_t0
    x, h = support_grid(s, grid_points, t)
    rho = density_at(s, x, t)
    drho_dt = (density_at(s, x, t + dt) - density_at(s, x, t - dt)) / (2.0 * dt)
    dflux_dx = s.speed_c * (rho[2:] - rho[:-2]) / (2.0 * h)
    residual = drho_dt[1:-1] + dflux_dx

    theta = s.phase(x[1:-1], t)
    shift = abs(s.wavenumber_mu * s.speed_c * dt)
    keep = np.abs(theta) + shift < HALF_PI
    return float(np.abs(residual[keep]).max())


def residual_momentum(s: Soliton, grid_points: int = 2048, ctx: PhysicalContext = NATURAL) -> float:
    """max |dQ/dx| over the support interior.

    With u = c and V constant, the momentum equation reduces to dQ/dx = 0.
    """
    if grid_points < 16:
        raise InsufficientGridError("grid_points must be >= 16")
    field = sample(s, grid_points, s.center_t0)
    x, q = quantum_potential_numeric(field, ctx)
    h = field.grid_step
    # only differentiate across neighbouring grid points
    contiguous = np.isclose(x[2:] - x[:-2], 2.0 * h, rtol=1e-6)
    dq = (q[2:] - q[:-2]) / (2.0 * h)
    return float(np.abs(dq[contiguous]).max())
