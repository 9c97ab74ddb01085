"""Transverse spectrum of the attractive string: a 2D circular well.

The transverse motion of a fast particle of total energy E in the
string potential is governed by a 2D Schroedinger problem with
effective mass E (the source equations carry 2E denominators):

    [ -(1/2E) (d^2/drho^2 + (1/rho) d/drho - m^2/rho^2) + U(rho) ] Rad = eps Rad,
    U(rho) = -V0 for rho <= R, 0 outside.

Three level sets are exposed:

  * bound-exact:      true bound states (-V0 < eps < 0) from matching
                      the interior J_m(k_in rho) to the decaying
                      exterior K_m(kappa rho) at rho = R,
  * quasi-bound-model:      eps = (pi^2 n^2 + m^2)/(2 E R^2) - V0,
                      the infinitely-high-barrier square-well estimate,
  * level-exact-infinite-well:  the same with pi^2 n^2 + m^2 replaced by
                      the exact circular-well eigenvalue j_{m,n}^2.

With x0 = sqrt(2 E V0) R the well supports, per azimuthal number m,
n_max = x0/pi quasi-bound levels; a second state per m appears only
above E = pi^2/(2 V0 R^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import special as _sp

from .errors import AccuracyError, InvalidArgumentError
from .kinematics import BeamState, StringPotential
from .special import bessel_j_zero, bracket_root, find_root

KIND_BOUND_EXACT = "bound-exact"
KIND_QUASI_BOUND_MODEL = "quasi-bound-model"
KIND_LEVEL_EXACT_INFINITE_WELL = "level-exact-infinite-well"


@dataclass(frozen=True)
class TransverseState:
    """One transverse level (n, m) with its classification and matching data.

    For bound-exact states interior_amplitude/exterior_amplitude are the
    coefficients of J_m(k_in rho) / K_m(kappa_out rho) after unit
    normalization of the full 2D state Z = Rad(rho) e^{i m phi}; norm is
    the L2 norm that was divided out; residual is the relative
    logarithmic-derivative mismatch at rho = R.
    """

    m: int
    n: int
    epsilon: float                 # eV
    kind: str
    k_in: float                    # interior wavenumber, eV
    kappa_out: Optional[float] = None   # exterior decay constant, eV (bound only)
    interior_amplitude: Optional[float] = None
    exterior_amplitude: Optional[float] = None
    norm: Optional[float] = None
    residual: Optional[float] = None
    well_radius: Optional[float] = None  # eV^-1; carried for overlap integrals

    def alpha(self, momentum: float) -> float:
        """The phase variable alpha = 2 p eps used by the scattering sums."""
        return 2.0 * momentum * self.epsilon


@dataclass(frozen=True)
class SpectrumConfig:
    """Numerical knobs of the spectrum search and its oracle mesh."""

    max_m: int = 2
    energy_tolerance: Optional[float] = None  # eV; default 1e-9 * V0
    grid_points: int = 10_000                 # oracle mesh points
    search_intervals: int = 512               # sign-change scan resolution in a

    def __post_init__(self):
        if self.energy_tolerance is not None and self.energy_tolerance <= 0:
            raise InvalidArgumentError("energy tolerance must be positive")
        if self.grid_points < 1000:
            raise InvalidArgumentError("oracle mesh needs at least 1000 points")


def _log_deriv_k(m: int, b: float) -> float:
    """b * K_m'(b) / K_m(b), the exterior logarithmic derivative."""
    return b * _sp.kvp(m, b) / _sp.kv(m, b)


def _matching_function(m: int, a: float, x0: float) -> float:
    """Pole-free matching function G(a); zeros are the bound states.

    G(a) = a J_m'(a) - [b K_m'(b)/K_m(b)] J_m(a),  b = sqrt(x0^2 - a^2).
    Dividing the raw log-derivative mismatch by K_m(b) and multiplying
    by J_m(a) removes the poles at J_m zeros without adding roots.
    """
    b2 = x0 * x0 - a * a
    b = math.sqrt(b2) if b2 > 0 else 0.0
    if b == 0.0:
        # threshold limit: x J_m'(x) + m J_m(x) = x J_{m-1}(x)
        return a * _sp.jvp(m, a) + m * _sp.jv(m, a)
    return a * _sp.jvp(m, a) - _log_deriv_k(m, b) * _sp.jv(m, a)


def bound_states_exact(well: StringPotential, energy: float, m: int,
                       config: SpectrumConfig | None = None) -> list[TransverseState]:
    """All exact bound states of azimuthal number m, sorted by eps ascending.

    Scans the interior variable a = k_in R over (0, x0) for sign changes
    of the matching function and bisects each to the configured energy
    tolerance (default 1e-9 V0).  Returns an empty list when the well
    binds no state of this m; states shallower than the tolerance
    (possible for m = 0 in extremely weak wells) are not resolved.
    """
    if energy <= 0:
        raise InvalidArgumentError("energy must be positive")
    if m < 0 or int(m) != m:
        raise InvalidArgumentError("m must be a nonnegative integer")
    cfg = config or SpectrumConfig()
    if well.depth <= 0:
        return []
    x0 = well.well_strength(energy)
    R = well.radius
    two_e_r2 = 2.0 * energy * R * R

    # binding threshold: the first m >= 1 state appears at J_{m-1}(x0) = 0,
    # so nothing exists below x0 = j_{m-1,1} (and j_{nu,1} > nu always)
    if m >= 1:
        if m - 1 >= x0:
            return []
        if m - 1 <= 20 and x0 <= bessel_j_zero(m - 1, 1):
            return []

    tol_eps = cfg.energy_tolerance if cfg.energy_tolerance is not None else 1e-9 * well.depth
    grid = np.linspace(x0 * 1e-9, x0 * (1.0 - 1e-12), cfg.search_intervals + 1)
    vals = np.array([_matching_function(m, a, x0) for a in grid])

    states = []
    for i in range(len(grid) - 1):
        if not (np.isfinite(vals[i]) and np.isfinite(vals[i + 1])):
            continue
        if vals[i] * vals[i + 1] < 0:
            # bisect a; da tolerance derived from the energy tolerance
            a_mid = 0.5 * (grid[i] + grid[i + 1])
            da_tol = max(tol_eps * energy * R * R / max(a_mid, 1e-6), 1e-14)
            bracket = bracket_root(lambda a: _matching_function(m, a, x0),
                                   float(grid[i]), float(grid[i + 1]))
            a_root = find_root(lambda a: _matching_function(m, a, x0), bracket,
                               tol=da_tol)
        elif vals[i] == 0.0 and 0 < i and vals[i - 1] * vals[i + 1] < 0:
            # exact zero on a grid point with a genuine sign change across it
            a_root = float(grid[i])
        else:
            continue
        states.append(_build_bound_state(well, energy, m, a_root, x0, two_e_r2))

    states.sort(key=lambda s: s.epsilon)
    return states


def _build_bound_state(well: StringPotential, energy: float, m: int,
                       a: float, x0: float, two_e_r2: float) -> TransverseState:
    R = well.radius
    b = math.sqrt(max(x0 * x0 - a * a, 0.0))
    eps = a * a / two_e_r2 - well.depth
    k_in = a / R
    kappa = b / R

    jm, jmp = _sp.jv(m, a), _sp.jvp(m, a)
    km, kmp = _sp.kv(m, b), _sp.kvp(m, b)
    # continuity A J_m(a) = B K_m(b); use derivative matching when J_m(a) is tiny
    A = 1.0
    if abs(jm) >= abs(a * jmp) * 1e-8:
        B = A * jm / km
    else:
        B = A * (a * jmp) / (b * kmp)

    # unit L2 norm over the plane via the closed-form Lommel integrals
    int_j = (R * R / 2.0) * (jmp * jmp + (1.0 - (m / a) ** 2) * jm * jm)
    int_k = (R * R / 2.0) * (kmp * kmp - (1.0 + (m / b) ** 2) * km * km)
    norm2 = 2.0 * math.pi * (A * A * int_j + B * B * int_k)
    if not norm2 > 0:
        raise AccuracyError(
            f"degenerate norm for candidate state (m={m}, a={a}, b={b}); "
            "state too shallow to normalize in double precision")
    norm = math.sqrt(norm2)
    A /= norm
    B /= norm

    # relative log-derivative mismatch at R (diagnostic)
    if abs(jm) > 1e-12:
        residual = abs(a * jmp / jm - b * kmp / km) / a
    else:
        residual = abs(_matching_function(m, a, x0)) / max(abs(a * jmp), 1e-300)

    n = _count_interior_nodes(m, a) + 1
    return TransverseState(m=m, n=n, epsilon=eps, kind=KIND_BOUND_EXACT,
                           k_in=k_in, kappa_out=kappa,
                           interior_amplitude=A, exterior_amplitude=B,
                           norm=norm, residual=residual, well_radius=R)


def _count_interior_nodes(m: int, a: float) -> int:
    """Number of zeros of J_m(k_in rho) strictly inside (0, R), i.e. j_{m,i} < a."""
    count = 0
    k = 1
    while True:
        if bessel_j_zero(m, k) < a:
            count += 1
            k += 1
        else:
            return count


def quasi_bound_level_model(well: StringPotential, energy: float,
                            n: int, m: int) -> TransverseState:
    """Square-well estimate eps = (pi^2 n^2 + m^2)/(2 E R^2) - V0."""
    _check_level_args(energy, n, m)
    lam2 = math.pi ** 2 * n * n + m * m
    eps = lam2 / (2.0 * energy * well.radius ** 2) - well.depth
    return TransverseState(m=m, n=n, epsilon=eps, kind=KIND_QUASI_BOUND_MODEL,
                           k_in=math.sqrt(lam2) / well.radius)


def level_exact_infinite_well(well: StringPotential, energy: float,
                              n: int, m: int) -> TransverseState:
    """Infinite-circular-well variant: pi^2 n^2 + m^2 replaced by j_{m,n}^2."""
    _check_level_args(energy, n, m)
    j = bessel_j_zero(m, n)
    eps = j * j / (2.0 * energy * well.radius ** 2) - well.depth
    return TransverseState(m=m, n=n, epsilon=eps,
                           kind=KIND_LEVEL_EXACT_INFINITE_WELL,
                           k_in=j / well.radius)


def _check_level_args(energy: float, n: int, m: int):
    if energy <= 0:
        raise InvalidArgumentError("energy must be positive")
    if n < 1 or int(n) != n:
        raise InvalidArgumentError("radial index n must be a positive integer")
    if m < 0 or int(m) != m:
        raise InvalidArgumentError("m must be a nonnegative integer")


@dataclass(frozen=True)
class QuasiBoundCount:
    """n_max = sqrt(2 E V0 R^2)/pi and its integer floor."""

    value: float
    floor: int


def n_max(well: StringPotential, energy: float) -> QuasiBoundCount:
    """Number of quasi-bound radial levels supported per azimuthal number."""
    if energy <= 0:
        raise InvalidArgumentError("energy must be positive")
    value = math.sqrt(2.0 * energy * well.depth) * well.radius / math.pi
    return QuasiBoundCount(value=value, floor=int(math.floor(value)))


def single_state_threshold(well: StringPotential) -> float:
    """Energy pi^2/(2 V0 R^2) below which only the n = 1 level exists per m."""
    if well.depth <= 0:
        raise InvalidArgumentError("threshold undefined for a free well (depth 0)")
    return math.pi ** 2 / (2.0 * well.depth * well.radius ** 2)


def resonance_condition_residual(beam: BeamState, well: StringPotential,
                                 n: int, m: int) -> float:
    """Transverse kinetic energy minus the (n, m) model level, in eV.

    Zero exactly at the resonance angle.  The transverse energy here is
    E theta0^2 / 2, the convention of the resonance equations (which are
    written throughout in the total energy E).
    """
    _check_level_args(beam.total_energy, n, m)
    eps_kin = beam.total_energy * beam.entry_angle ** 2 / 2.0
    level = quasi_bound_level_model(well, beam.total_energy, n, m)
    return eps_kin - level.epsilon


def continuum_match(well: StringPotential, mass_like: float, m: int, k):
    """Match interior J_m(k_in rho) to exterior cos(d) J_m - sin(d) Y_m at rho = R.

    Parameters
    ----------
    mass_like : float
        Effective mass of the transverse problem (total energy E for the
        spectrum convention, momentum p for the scattering sums).
    k : array_like
        Exterior wavenumber(s), eV, > 0.

    Returns
    -------
    cos_d, sin_d, interior_amplitude, k_in : ndarrays
        cos/sin of the phase shift delta_m and the interior coefficient
        of the delta-normalized-compatible radial solution whose
        exterior part is cos(d) J_m(k rho) - sin(d) Y_m(k rho).
    """
    k = np.asarray(k, dtype=float)
    if np.any(k <= 0):
        raise InvalidArgumentError("continuum matching requires k > 0")
    R = well.radius
    if well.depth == 0.0:
        ones = np.ones_like(k)
        return ones, np.zeros_like(k), ones, k
    k_in = np.sqrt(k * k + 2.0 * mass_like * well.depth)
    v = _sp.jv(m, k_in * R)
    d = k_in * _sp.jvp(m, k_in * R)
    det = 2.0 / (math.pi * R)   # Wronskian J_m Y_m' - J_m' Y_m = 2/(pi x) at x = kR
    alpha = (v * k * _sp.yvp(m, k * R) - d * _sp.yv(m, k * R)) / det
    beta = (d * _sp.jv(m, k * R) - v * k * _sp.jvp(m, k * R)) / det
    c = np.hypot(alpha, beta)
    return alpha / c, -beta / c, 1.0 / c, k_in
