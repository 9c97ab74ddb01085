"""Closed-form Breit-Wigner predictions for the quasi-bound resonances.

A quasi-bound level (n, m >= 1) of the transverse well is hit when the
transverse kinetic energy E theta0^2/2 matches it, giving the
resonance angle

    theta_res = sqrt( (pi^2 n^2 + m^2)/(E^2 R^2) - 2 V0 / E )

with quasiclassical angular width

    Gamma = theta_res * exp( -|2 E V0 R^2 - pi^2 n^2|^(1/2) ).

Near the resonance the cross section is Lorentzian on top of the
continuum baseline sigma0 = (2/pi) L/p, with peak excess (2/pi) L/p.
Scanning in energy at fixed entry angle instead gives the positive
root of  theta0^2 E^2 + 2 V0 E - (pi^2 n^2 + m^2)/R^2 = 0:

    E_res = [ (pi^2 n^2 + m^2)/R^2 ] / [ V0 + sqrt(V0^2 + theta0^2 (pi^2 n^2 + m^2)/R^2) ]

(the rationalized positive root; stable as theta0 -> 0), and the width
Gamma_bar = E_res exp(-|2 E_res V0 R^2 - pi^2 n^2|^(1/2)).  All
resonance equations are written in the total energy E.  A printed
variant of E_res with the opposite sign of V0 and an overall factor
(which does not close the theta_res round trip) is available behind
paper_literal=True for comparison output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidArgumentError, NoResonanceError
from .kinematics import BeamState, StringPotential
from .scattering import sigma_continuum_baseline


def _lambda2(n: int, m: int) -> float:
    if n < 1 or int(n) != n:
        raise InvalidArgumentError("radial index n must be a positive integer")
    if m < 0 or int(m) != m:
        raise InvalidArgumentError("m must be a nonnegative integer")
    return math.pi ** 2 * n * n + m * m


def theta_res(well: StringPotential, energy: float, n: int, m: int) -> float:
    """Resonance entry angle for the (n, m) quasi-bound level, radians.

    Raises NoResonanceError when the energy lies above the (n, m)
    threshold (negative radicand); returns exactly 0 at the boundary.
    """
    if energy <= 0:
        raise InvalidArgumentError("energy must be positive")
    lam2 = _lambda2(n, m)
    arg = lam2 / (energy * well.radius) ** 2 - 2.0 * well.depth / energy
    if arg < 0:
        raise NoResonanceError(
            f"no real resonance angle for (n={n}, m={m}) at E={energy} eV")
    return math.sqrt(arg)


def _width_factor(well: StringPotential, energy: float, n: int) -> float:
    """Quasiclassical barrier factor exp(-|2 E V0 R^2 - pi^2 n^2|^1/2)."""
    return math.exp(-math.sqrt(abs(2.0 * energy * well.depth * well.radius ** 2
                                   - math.pi ** 2 * n * n)))


def gamma_angle(well: StringPotential, energy: float, n: int, m: int) -> float:
    """Angular resonance width; independent of m at fixed theta_res."""
    return theta_res(well, energy, n, m) * _width_factor(well, energy, n)


def sigma_bw_angle(beam: BeamState, well: StringPotential, n: int, m: int) -> float:
    """Breit-Wigner cross section at the beam's entry angle, eV^-2."""
    t_res = theta_res(well, beam.total_energy, n, m)
    gam = t_res * _width_factor(well, beam.total_energy, n)
    return sigma_continuum_baseline(beam, well) + bw_excess_angle(
        beam, well, beam.entry_angle, t_res, gam)


def bw_excess_angle(beam: BeamState, well: StringPotential, theta0: float,
                    t_res: float, gam: float) -> float:
    """The Lorentzian excess (2/pi)(L/p) (Gamma^2/4)/((theta0-theta_res)^2 + Gamma^2/4)."""
    quarter = gam * gam / 4.0
    return (sigma_continuum_baseline(beam, well) * quarter
            / ((theta0 - t_res) ** 2 + quarter))


def e_res(well: StringPotential, theta0: float, n: int, m: int,
          paper_literal: bool = False) -> float:
    """Resonance energy at fixed entry angle, eV.

    Default: the positive root of theta0^2 E^2 + 2 V0 E = (pi^2n^2+m^2)/R^2,
    which closes the round trip theta_res(e_res(theta0)) = theta0.
    paper_literal=True instead evaluates the printed variant
    theta0^-2 [2 V0 + 2 sqrt(V0^2 + theta0^2 (pi^2n^2+m^2)/R^2)].
    """
    if theta0 <= 0:
        raise InvalidArgumentError("energy scan requires a positive entry angle")
    lam2_r2 = _lambda2(n, m) / well.radius ** 2
    root = math.sqrt(well.depth ** 2 + theta0 ** 2 * lam2_r2)
    if paper_literal:
        return (2.0 * well.depth + 2.0 * root) / theta0 ** 2
    return lam2_r2 / (well.depth + root)


def gamma_energy(well: StringPotential, e_res_value: float, n: int) -> float:
    """Energy width Gamma_bar = E_res exp(-|2 E_res V0 R^2 - pi^2 n^2|^1/2)."""
    if e_res_value <= 0:
        raise InvalidArgumentError("resonance energy must be positive")
    return e_res_value * _width_factor(well, e_res_value, n)


def sigma_bw_energy(beam: BeamState, well: StringPotential, energy: float,
                    e_res_value: float, gamma_bar: float) -> float:
    """Breit-Wigner cross section at scan energy, eV^-2.

    The baseline sigma0 and the peak-excess coefficient use the beam
    momentum at the resonance energy so the peak excess is exactly
    (2/pi) L/p by construction.
    """
    quarter = gamma_bar * gamma_bar / 4.0
    return sigma_continuum_baseline(beam, well) * (
        1.0 + quarter / ((energy - e_res_value) ** 2 + quarter))


@dataclass(frozen=True)
class ResonancePrediction:
    """All closed-form resonance numbers for one (n, m) at a given beam."""

    n: int
    m: int
    theta_res: float                 # rad
    gamma: float                     # rad
    e_res: Optional[float]           # eV; None when the beam has theta0 = 0
    gamma_bar: Optional[float]       # eV
    sigma_peak_excess: float         # eV^-2, = (2/pi) L/p

    def __post_init__(self):
        if self.theta_res > 0 and not self.gamma <= self.theta_res:
            raise InvalidArgumentError("width must not exceed the resonance angle")


def resonance_prediction(beam: BeamState, well: StringPotential,
                         n: int, m: int,
                         paper_literal: bool = False) -> ResonancePrediction:
    """Angle- and energy-scan predictions for the (n, m) level."""
    t_res = theta_res(well, beam.total_energy, n, m)
    gam = t_res * _width_factor(well, beam.total_energy, n)
    if beam.entry_angle > 0:
        er = e_res(well, beam.entry_angle, n, m, paper_literal=paper_literal)
        gbar = gamma_energy(well, er, n)
    else:
        er = None
        gbar = None
    return ResonancePrediction(
        n=n, m=m, theta_res=t_res, gamma=gam, e_res=er, gamma_bar=gbar,
        sigma_peak_excess=sigma_continuum_baseline(beam, well))
