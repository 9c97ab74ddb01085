"""Natural units and beam kinematics for fast-particle string scattering.

Everything internal works in natural units (hbar = c = 1): energies and
momenta in eV, lengths and times in eV^-1.  SI values (meters, degrees)
are converted exactly once, at the I/O boundary.

The regime of interest is a fast particle crossing a long attractive
cylinder ("string") of depth V0, radius R and length L almost parallel
to its axis:

    p L  >>  p R  >>  1,        theta0  <<  1 / (p R),

where p is the particle momentum and theta0 the entry angle.  Over the
length L the string influences the particle out to the effective impact
parameter

    rho_eff = sqrt(L / p),      theta_eff = 1 / sqrt(p L),

and the azimuthal components m of the incident wave take part in the
scattering only while m / p_perp <= rho_eff.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidArgumentError


@dataclass(frozen=True)
class PhysicalConstants:
    """Conversion constants of the natural-unit system."""

    hbar_c: float = 1.973269804e-7   # eV * m
    electron_mass: float = 5.10999e5  # eV

    def __post_init__(self):
        if self.hbar_c <= 0:
            raise InvalidArgumentError("hbar_c must be positive")


CONSTANTS = PhysicalConstants()

ELECTRON_MASS_EV = CONSTANTS.electron_mass


def to_natural_length(length_si: float) -> float:
    """Convert a length in meters to natural units (eV^-1)."""
    if length_si < 0:
        raise InvalidArgumentError(f"length must be nonnegative, got {length_si}")
    return length_si / CONSTANTS.hbar_c


def from_natural_length(length_nat: float) -> float:
    """Convert a length in eV^-1 back to meters."""
    return length_nat * CONSTANTS.hbar_c


@dataclass(frozen=True)
class BeamState:
    """Incident particle: total energy, mass, momentum and entry angle.

    Invariants: momentum = sqrt(E^2 - mass^2) (unless constructed in
    ultrarelativistic mode, which forces momentum = E to reproduce the
    source arithmetic), transverse_momentum = momentum * entry_angle.
    """

    total_energy: float        # eV
    mass: float                # eV
    momentum: float            # eV
    entry_angle: float         # rad
    transverse_momentum: float  # eV


def beam_from(total_energy: float, mass: float, entry_angle: float,
              ultrarelativistic: bool = False) -> BeamState:
    """Build a BeamState from (E, mass, theta0).

    Parameters
    ----------
    total_energy : float
        Total particle energy E in eV; requires E >= mass.
    mass : float
        Rest mass in eV, >= 0.
    entry_angle : float
        Angle theta0 between beam and string axis, radians, >= 0.
    ultrarelativistic : bool
        When True, set p := E instead of the exact sqrt(E^2 - m^2).
        Off by default; exists to reproduce arithmetic that treats p
        and E as interchangeable.
    """
    if mass < 0:
        raise InvalidArgumentError(f"mass must be nonnegative, got {mass}")
    if total_energy < mass:
        raise InvalidArgumentError(
            f"total energy {total_energy} eV below rest mass {mass} eV")
    if entry_angle < 0:
        raise InvalidArgumentError(f"entry angle must be >= 0, got {entry_angle}")
    if ultrarelativistic:
        momentum = total_energy
    else:
        momentum = math.sqrt((total_energy - mass) * (total_energy + mass))
    return BeamState(
        total_energy=total_energy,
        mass=mass,
        momentum=momentum,
        entry_angle=entry_angle,
        transverse_momentum=momentum * entry_angle,
    )


@dataclass(frozen=True)
class StringPotential:
    """Attractive square-well string: U = -depth for rho <= radius, 0 <= z <= length.

    depth is the positive magnitude of the well depth (eV); radius and
    length are in eV^-1 with length > 2 * radius (extended string).
    depth = 0 is admitted as the exact free limit used by validation
    checks; physical scenarios have depth > 0.
    """

    depth: float    # V0 >= 0, eV
    radius: float   # R, eV^-1
    length: float   # L, eV^-1

    def __post_init__(self):
        if self.depth < 0:
            raise InvalidArgumentError(f"well depth must be nonnegative, got {self.depth}")
        if self.radius <= 0:
            raise InvalidArgumentError(f"radius must be positive, got {self.radius}")
        if self.length <= 2 * self.radius:
            raise InvalidArgumentError(
                f"length {self.length} must exceed the diameter {2 * self.radius}")

    def well_strength(self, energy: float) -> float:
        """Dimensionless well strength x0 = sqrt(2 E V0) * R."""
        return math.sqrt(2.0 * energy * self.depth) * self.radius


@dataclass(frozen=True)
class EffectiveScales:
    """Effective scattering scales of the extended string.

    rho_eff = sqrt(L/p) is the effective impact parameter, theta_eff =
    1/sqrt(pL) the effective scattering angle (so theta_eff * rho_eff *
    p = 1 identically), m_max the count of azimuthal waves satisfying
    m <= p_perp * rho_eff, and q_parallel ~ 1/(p R^2) the longitudinal
    momentum transfer scale (reported for diagnostics only).
    """

    rho_eff: float      # eV^-1
    theta_eff: float    # rad
    m_max: int
    q_parallel: float   # eV


def effective_scales(beam: BeamState, well: StringPotential) -> EffectiveScales:
    """Compute the effective scales for a beam/well pair."""
    if beam.momentum <= 0:
        raise InvalidArgumentError("beam momentum must be positive")
    rho_eff = math.sqrt(well.length / beam.momentum)
    theta_eff = 1.0 / math.sqrt(beam.momentum * well.length)
    m_max = int(math.floor(beam.transverse_momentum * rho_eff))
    q_parallel = 1.0 / (beam.momentum * well.radius ** 2)
    return EffectiveScales(rho_eff=rho_eff, theta_eff=theta_eff,
                           m_max=m_max, q_parallel=q_parallel)


@dataclass(frozen=True)
class RegimeCheck:
    """Dimensionless regime numbers with pass/warn flags.

    Conditions checked (thresholds in parentheses):
      extended string      pL / pR > 10
      fast particle        pR > 10
      small entry angle    theta0 * pR < 1
    """

    pL: float
    pR: float
    theta0_pR: float
    extended_string_ok: bool
    fast_particle_ok: bool
    small_angle_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.extended_string_ok and self.fast_particle_ok and self.small_angle_ok


def regime_check(beam: BeamState, well: StringPotential) -> RegimeCheck:
    """Diagnostic report on the validity conditions pL >> pR >> 1, theta0 << 1/pR."""
    pL = beam.momentum * well.length
    pR = beam.momentum * well.radius
    theta0_pR = beam.entry_angle * pR
    return RegimeCheck(
        pL=pL,
        pR=pR,
        theta0_pR=theta0_pR,
        extended_string_ok=(pL / pR > 10.0) if pR > 0 else False,
        fast_particle_ok=pR > 10.0,
        small_angle_ok=theta0_pR < 1.0,
    )
