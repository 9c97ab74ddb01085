"""Independent numerical cross-checks for the spectrum and resonance models.

Three oracles, none of which shares numerics with the code they check:

  * a finite-volume radial eigensolver (conservative discretization of
    the 2D radial operator, Sturm-sequence bisection for the negative
    eigenvalues) validating the wavefunction-matching bound states;
  * exact partial-wave phase shifts of the circular well with
    unwrapping and d delta/d eps, whose maxima locate true scattering
    resonances and widths, validating the closed-form Breit-Wigner
    predictions;
  * a Parseval (completeness) audit of the discretized state basis
    used by the optical-theorem sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .errors import AccuracyError, InvalidArgumentError
from .kinematics import StringPotential
from .scattering import StateBasis, parseval_deficit
from .spectrum import continuum_match


@dataclass(frozen=True)
class RadialMesh:
    """Uniform mesh for the radial eigensolver: rho_max >= 20 R, >= 1e4 points."""

    rho_max: float
    points: int = 10_000

    def __post_init__(self):
        if self.points < 10_000:
            raise InvalidArgumentError("radial mesh needs at least 1e4 points")
        if self.rho_max <= 0:
            raise InvalidArgumentError("rho_max must be positive")

    @property
    def spacing(self) -> float:
        return self.rho_max / self.points

    def refined(self, factor: int = 2) -> "RadialMesh":
        return RadialMesh(rho_max=self.rho_max, points=self.points * factor)


def default_mesh(well: StringPotential, points: int = 10_000) -> RadialMesh:
    return RadialMesh(rho_max=20.0 * well.radius, points=points)


def _fd_negative_eigenvalues(well: StringPotential, energy: float, m: int,
                             mesh: RadialMesh) -> np.ndarray:
    """Negative eigenvalues of the conservative finite-volume discretization.

    Cell-centered nodes rho_i = (i + 1/2) h; the flux through rho = 0
    vanishes (regular solution), Dirichlet at rho_max.  The rho-weighted
    operator is symmetrized with sqrt(rho_i), keeping it tridiagonal.
    """
    h = mesh.spacing
    i = np.arange(mesh.points)
    rho = (i + 0.5) * h
    face_l = i * h
    face_r = (i + 1.0) * h
    inv2m = 1.0 / (2.0 * energy)
    potential = np.where(rho <= well.radius, -well.depth, 0.0)
    main = inv2m * ((face_l + face_r) / h ** 2 + (m * m) / rho) + rho * potential
    off = -inv2m * face_r[:-1] / h ** 2
    s = np.sqrt(rho)
    main_t = main / rho
    off_t = off / (s[:-1] * s[1:])
    floor = max(1e-9 * well.depth, 1e-307)
    if well.depth <= 0:
        return np.array([])
    return eigh_tridiagonal(main_t, off_t, select="v",
                            select_range=(-well.depth * (1 + 1e-9), -floor),
                            eigvals_only=True)


def fd_bound_states(well: StringPotential, energy: float, m: int,
                    mesh: Optional[RadialMesh] = None,
                    drift_tolerance: Optional[float] = None) -> list[tuple[int, float]]:
    """Bound levels (n, eps) of azimuthal number m from the grid eigensolver.

    With drift_tolerance set, the solve is repeated on a 2x refined mesh
    and an AccuracyError is raised when any level moves by more than the
    tolerance (relative), surfacing an under-resolved mesh.
    """
    if energy <= 0:
        raise InvalidArgumentError("energy must be positive")
    mesh = mesh or default_mesh(well)
    if mesh.rho_max < 20.0 * well.radius:
        raise InvalidArgumentError("mesh must extend to at least 20 R")
    vals = _fd_negative_eigenvalues(well, energy, m, mesh)
    if drift_tolerance is not None and len(vals):
        refined = _fd_negative_eigenvalues(well, energy, m, mesh.refined())
        if len(refined) != len(vals):
            raise AccuracyError("bound-state count changed under mesh refinement")
        drift = np.max(np.abs(refined - vals) / np.abs(refined))
        if drift > drift_tolerance:
            raise AccuracyError(
                f"eigenvalue drift {drift:.2e} exceeds {drift_tolerance:.2e} "
                "under mesh refinement")
    return [(idx + 1, float(eps)) for idx, eps in enumerate(vals)]


def phase_shift(well: StringPotential, energy: float, m: int, eps: float) -> float:
    """Partial-wave phase shift delta_m at transverse energy eps > 0.

    Matches the interior J_m(k_in rho) to cos(d) J_m(k rho) - sin(d) Y_m(k rho)
    at rho = R with k = sqrt(2 E eps), k_in = sqrt(2 E (eps + V0)); the
    principal branch of one point (curves are unwrapped separately).
    """
    if eps <= 0:
        raise InvalidArgumentError("phase shift defined for eps > 0")
    k = math.sqrt(2.0 * energy * eps)
    cos_d, sin_d, _, _ = continuum_match(well, energy, m, np.array([k]))
    return math.atan2(float(sin_d[0]), float(cos_d[0]))


@dataclass(frozen=True)
class PhaseShiftCurve:
    """Unwrapped delta_m(eps) on a strictly increasing energy grid."""

    m: int
    eps: np.ndarray           # eV
    delta: np.ndarray         # rad, continuous
    ddelta_deps: np.ndarray   # rad/eV

    def __post_init__(self):
        if np.any(np.diff(self.eps) <= 0):
            raise InvalidArgumentError("phase curve grid must be strictly increasing")


def build_phase_curve(well: StringPotential, energy: float, m: int,
                      eps_grid) -> PhaseShiftCurve:
    """Evaluate, unwrap and differentiate delta_m along an energy grid."""
    eps = np.asarray(eps_grid, dtype=float)
    if np.any(eps <= 0):
        raise InvalidArgumentError("phase curve requires eps > 0")
    k = np.sqrt(2.0 * energy * eps)
    cos_d, sin_d, _, _ = continuum_match(well, energy, m, k)
    delta = np.arctan2(sin_d, cos_d)
    # unwrap: successive points never jump by more than pi/2 physically
    for i in range(1, len(delta)):
        while delta[i] - delta[i - 1] > math.pi / 2:
            delta[i] -= math.pi
        while delta[i] - delta[i - 1] < -math.pi / 2:
            delta[i] += math.pi
    deriv = np.gradient(delta, eps)
    return PhaseShiftCurve(m=m, eps=eps, delta=delta, ddelta_deps=deriv)


def resonance_from_phase(curve: PhaseShiftCurve,
                         min_points_per_ev: float = 200.0
                         ) -> Optional[tuple[float, float]]:
    """Locate a resonance as the interior maximum of d delta/d eps.

    Returns (eps_res, width) with width = 2 / (d delta/d eps) at the
    maximum, or None when no interior maximum exceeds twice the
    background slope (median over the curve).  Raises AccuracyError when
    the grid is too coarse around the candidate maximum to resolve it.
    """
    d = curve.ddelta_deps
    j = int(np.argmax(d))
    if j == 0 or j == len(d) - 1:
        return None
    background = float(np.median(d))
    if not d[j] > 2.0 * abs(background):
        return None
    width = 2.0 / float(d[j])
    lo = max(j - 1, 0)
    local_spacing = float(curve.eps[lo + 1] - curve.eps[lo])
    if local_spacing > 1.0 / min_points_per_ev and local_spacing > width / 10.0:
        raise AccuracyError(
            f"phase curve spacing {local_spacing:.3e} eV cannot resolve the "
            f"resonance near {curve.eps[j]:.3e} eV")
    return float(curve.eps[j]), width


def parseval_audit(basis: StateBasis, p_perp: float) -> float:
    """Completeness deficit of the discretized basis at transverse momentum p_perp."""
    if p_perp < 0:
        raise InvalidArgumentError("p_perp must be >= 0")
    return parseval_deficit(basis, p_perp)
