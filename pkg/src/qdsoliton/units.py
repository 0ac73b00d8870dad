"""Unit systems, constants and the parameter types shared by every module.

Natural units (hbar = m = 1, q = 1) are the default. SI uses CODATA values
for hbar, the electron mass and the elementary charge.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import constants

from .errors import DegenerateEnergyError


class Regime(str, enum.Enum):
    ABOVE = "above"
    BELOW = "below"
    CRITICAL = "critical"


@dataclass(frozen=True)
class PhysicalContext:
    hbar: float = 1.0
    mass: float = 1.0
    charge: float = 1.0
    unit_label: str = "natural"

    def __post_init__(self):
        if self.unit_label not in ("natural", "SI"):
            raise ValueError(f"unknown unit system {self.unit_label!r}")
        for name in ("hbar", "mass", "charge"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if self.unit_label == "natural" and (self.hbar != 1.0 or self.mass != 1.0):
            raise ValueError("natural units require hbar = mass = 1")

    @classmethod
    def natural(cls, charge: float = 1.0) -> "PhysicalContext":
        return cls(1.0, 1.0, charge, "natural")

    @classmethod
    def si(cls, mass: float = constants.m_e, charge: float = constants.e) -> "PhysicalContext":
        return cls(constants.hbar, mass, charge, "SI")

    @property
    def planck_h(self) -> float:
        return 2.0 * math.pi * self.hbar


NATURAL = PhysicalContext.natural()


@dataclass(frozen=True)
class Barrier:
    """Rectangular barrier: ``height_v0`` on (origin, origin + width_a), 0 elsewhere."""

    width_a: float
    height_v0: float
    origin: float = 0.0

    def __post_init__(self):
        if not self.width_a > 0:
            raise ValueError(f"barrier width must be positive, got {self.width_a!r}")

    @property
    def right_wall(self) -> float:
        return self.origin + self.width_a

    def potential(self, x):
        """V(x); accepts scalars or numpy arrays."""
        inside = (x > self.origin) & (x < self.right_wall)
        if isinstance(inside, bool):
            return self.height_v0 if inside else 0.0
        return inside * self.height_v0


@dataclass(frozen=True)
class ParticleState:
    energy_e: float
    speed_c: float
    start_x: float = 0.0
    start_t: float = 0.0

    def __post_init__(self):
        if not self.energy_e > 0:
            raise ValueError(f"particle energy must be positive, got {self.energy_e!r}")
        if not self.speed_c > 0:
            raise ValueError(f"particle speed must be positive, got {self.speed_c!r}")

    @classmethod
    def from_energy(cls, energy, ctx=NATURAL, start_x=0.0, start_t=0.0):
        """Particle moving at the de Broglie speed hbar*k/m for its free-space energy."""
        k = wavenumber(energy, 0.0, ctx)
        return cls(energy, ctx.hbar * k / ctx.mass, start_x, start_t)


def classify_regime(energy: float, potential: float) -> Regime:
    if energy > potential:
        return Regime.ABOVE
    if energy < potential:
        return Regime.BELOW
    return Regime.CRITICAL


def wavenumber(energy: float, potential: float, ctx: PhysicalContext = NATURAL) -> float:
    """sqrt(2m|E - V|)/hbar. Zero at E == V; pair with classify_regime for the sign."""
    return math.sqrt(2.0 * ctx.mass * abs(energy - potential)) / ctx.hbar


def de_broglie_wavelength(energy: float, potential: float, ctx: PhysicalContext = NATURAL) -> float:
    if not energy > potential:
        raise DegenerateEnergyError(
            f"de Broglie wavelength undefined for E={energy!r} <= V={potential!r}"
        )
    return 2.0 * math.pi / wavenumber(energy, potential, ctx)
