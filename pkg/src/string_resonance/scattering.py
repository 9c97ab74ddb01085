"""Transition amplitudes and optical-theorem cross sections.

The scattering amplitude of a fast particle crossing the string is a
sum over transverse eigenstates:

    f = (p / 2 pi i) sum_s Q_i(s) Q_f(s)* [exp(i (alpha_s - p_perp^2) L / 2p) - 1],

with alpha_s = 2 p eps_s and Q the transition amplitude between the
incident plane wave and the eigenstate.  The optical theorem
sigma = (4 pi / p) Im f(forward) turns this into

    sigma = 4 sum_s |Q_i(s)|^2 sin^2( (alpha_s - p_perp_i^2) L / 4p ).

State-sum conventions (documented here once; see the decisions notes
for the numeric reconciliation):

  * Bound states enter with the bound-state-pole amplitude
        Q(q) = i^m e^{i m phi_q} (kappa/sqrt(pi)) (q/kappa)^m / (kappa^2 + q^2),
    kappa = sqrt(2 p |eps|).  For m = 0 this makes 4 |Q|^2 exactly the
    weight of the small-angle formula below, so the two routes agree
    identically.  The exact finite-well Fourier transform is exposed
    separately as overlap_q (it differs from the pole form by a smooth
    form factor; for the silicon well the factor is large because the
    state is deep).
  * The continuum is discretized on a disk of radius 50 rho_eff in
    delta-normalized radial states with free dispersion eps = k^2/2p,
    and enters through the interaction-induced excess weight
    |Q_V|^2 - |Q_free|^2 on a shared momentum grid.  The subtraction
    makes the free limit vanish identically and cancels
    disk-truncation error; individual excess weights are signed.

The m = 0 small-angle closed form (only the m = 0 wave scatters for
theta0 < 1/sqrt(pL)) is

    sigma = sigma0 + (2/pi) sum_n (|eps_n|/p) sin^2[(|eps_n| + p_perp^2/2p) L/2]
                                   / [|eps_n| + p_perp^2/2p]^2,
    sigma0 = (2/pi) L / p .
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import special as _sp
from scipy.integrate import quad
from scipy.special import gammaln

from .errors import AccuracyError, InvalidArgumentError
from .kinematics import BeamState, StringPotential, effective_scales
from .spectrum import (KIND_BOUND_EXACT, TransverseState, bound_states_exact,
                       continuum_match)

PARSEVAL_DEFICIT_LIMIT = 0.05


# ---------------------------------------------------------------------------
# closed-form radial integrals (Lommel cross products)

def _cyl(kind: str, m: int, x):
    return _sp.jv(m, x) if kind == "J" else _sp.yv(m, x)


def _cylp(kind: str, m: int, x):
    return _sp.jvp(m, x) if kind == "J" else _sp.yvp(m, x)


def _cross_antideriv(kind: str, m: int, k, q: float, rho):
    """Antiderivative of Z_m(k rho) J_m(q rho) rho at rho, for k != q."""
    return rho * (k * _cylp(kind, m, k * rho) * _sp.jv(m, q * rho)
                  - q * _cyl(kind, m, k * rho) * _sp.jvp(m, q * rho)) / (q * q - k * k)


def _diag_antideriv(kind: str, m: int, k, rho):
    """Antiderivative of Z_m(k rho) J_m(k rho) rho (equal wavenumbers)."""
    z = _cyl(kind, m, k * rho)
    zp = _cylp(kind, m, k * rho)
    j = _sp.jv(m, k * rho)
    jp = _sp.jvp(m, k * rho)
    return (rho * rho / 2.0) * (zp * jp + (1.0 - (m / (k * rho)) ** 2) * z * j)


def cross_integral(kind: str, m: int, k, q: float, lo: float, hi: float):
    """int_lo^hi Z_m(k rho) J_m(q rho) rho drho, vectorized over k.

    Z is J or Y; lo = 0 is allowed for Z = J.  Near-diagonal entries
    (k ~ q) switch to the equal-wavenumber form.
    """
    k = np.asarray(k, dtype=float)
    near = np.abs(k * k - q * q) <= 1e-9 * (k * k + q * q)
    ksafe = np.where(near, q * (1.0 + 1e-3) + 1.0, k)
    if lo == 0.0:
        out = _cross_antideriv(kind, m, ksafe, q, hi)
    else:
        out = (_cross_antideriv(kind, m, ksafe, q, hi)
               - _cross_antideriv(kind, m, ksafe, q, lo))
    if np.any(near):
        kd = np.where(near, k, 1.0)
        diag_hi = _diag_antideriv(kind, m, kd, hi)
        diag = diag_hi - (_diag_antideriv(kind, m, kd, lo) if lo > 0.0 else 0.0)
        out = np.where(near, diag, out)
    return out


# ---------------------------------------------------------------------------
# transition amplitudes

@dataclass(frozen=True)
class TransitionAmplitude:
    """Q for one state at transverse momentum p_perp and azimuth phi_p."""

    state: TransverseState
    p_perp: float
    phi_p: float
    value: complex


def _angular_factor(m: int, phi_p: float) -> complex:
    return (1j ** m) * complex(math.cos(m * phi_p), math.sin(m * phi_p))


def overlap_q(state: TransverseState, p_perp: float, phi_p: float = 0.0,
              method: str = "lommel") -> TransitionAmplitude:
    """Exact transition amplitude Q = int d2rho Z(rho) exp(i p_perp . rho).

    Evaluates 2 pi i^m e^{i m phi_p} int_0^inf Rad(rho) J_m(p_perp rho) rho drho
    for a unit-normalized bound state, either from the closed-form
    Lommel integrals of the two radial pieces (default) or by adaptive
    quadrature (cross-check path).
    """
    if state.kind != KIND_BOUND_EXACT or state.norm is None:
        raise InvalidArgumentError("overlap_q requires a normalized bound-exact state")
    if p_perp < 0:
        raise InvalidArgumentError("p_perp must be >= 0")
    m = state.m
    A = state.interior_amplitude
    B = state.exterior_amplitude
    k_in = state.k_in
    kappa = state.kappa_out
    radius = _state_radius(state)
    if p_perp == 0.0:
        if m >= 1:
            return TransitionAmplitude(state, p_perp, phi_p, 0.0 + 0.0j)
        radial = (A * radius * _sp.jv(1, k_in * radius) / k_in
                  + B * radius * _sp.kv(1, kappa * radius) / kappa)
    elif method == "lommel":
        i1 = float(cross_integral("J", m, k_in, p_perp, 0.0, radius))
        i2 = radius * (p_perp * _sp.kv(m, kappa * radius) * _sp.jvp(m, p_perp * radius)
                       - kappa * _sp.kvp(m, kappa * radius) * _sp.jv(m, p_perp * radius)
                       ) / (kappa ** 2 + p_perp ** 2)
        radial = A * i1 + B * i2
    elif method == "quadrature":
        i1 = quad(lambda r: _sp.jv(m, k_in * r) * _sp.jv(m, p_perp * r) * r,
                  0.0, radius, limit=500, epsabs=0.0, epsrel=1e-12)[0]
        i2 = quad(lambda r: _sp.kv(m, kappa * r) * _sp.jv(m, p_perp * r) * r,
                  radius, radius + 60.0 / kappa, limit=800, epsabs=0.0,
                  epsrel=1e-12)[0]
        radial = A * i1 + B * i2
    else:
        raise InvalidArgumentError(f"unknown method {method!r}")
    value = 2.0 * math.pi * _angular_factor(m, phi_p) * radial
    return TransitionAmplitude(state, p_perp, phi_p, value)


def _state_radius(state: TransverseState) -> float:
    if state.well_radius is None:
        raise InvalidArgumentError("state carries no well radius")
    return state.well_radius


def bound_pole_amplitude(state: TransverseState, momentum: float, p_perp: float,
                         phi_p: float = 0.0) -> complex:
    """Paper-normalized bound-state amplitude (pole / zero-range form).

    Q(q) = i^m e^{i m phi_q} (kappa/sqrt(pi)) (q/kappa)^m / (kappa^2 + q^2)
    with kappa = sqrt(2 p |eps|); 4 |Q|^2 reproduces the small-angle
    formula's per-state weight exactly for m = 0 and vanishes at q = 0
    for m >= 1.
    """
    if state.epsilon >= 0:
        raise InvalidArgumentError("pole amplitude defined for bound states only")
    kappa = math.sqrt(2.0 * momentum * abs(state.epsilon))
    radial = (kappa / math.sqrt(math.pi)) * (p_perp / kappa) ** state.m \
        / (kappa ** 2 + p_perp ** 2)
    return _angular_factor(state.m, phi_p) * radial


# ---------------------------------------------------------------------------
# discretized state basis

@dataclass(frozen=True)
class ContinuumChannel:
    """Momentum grid and matching data of one azimuthal channel.

    Bins where the centrifugal barrier makes the interaction negligible
    (Born-scale phase shift below e^-32; see _active_mask) are marked
    inactive and treated as exactly free: zero excess weight, free
    spectral weight in the completeness audit, and no evaluation of the
    overflow-prone large-order Y_m at small argument.
    """

    m: int
    k: np.ndarray          # bin centers, eV
    weight: np.ndarray     # bin widths, eV
    cos_d: np.ndarray
    sin_d: np.ndarray
    a_in: np.ndarray       # interior amplitude of the matched state
    k_in: np.ndarray
    active: np.ndarray     # bool: interaction resolved on this bin


@dataclass(frozen=True)
class BasisConfig:
    """Discretization of the continuum state sum."""

    disk_factor: float = 50.0      # disk radius D = disk_factor * rho_eff
    cutoff_factor: float = 10.0    # k_max = cutoff_factor / R
    dense_k_to: float = 4000.0     # fine grid below this k (resolves pi/D lobes)
    dense_dk: float = 2.0
    coarse_bins: int = 10_000
    m_cut: Optional[int] = None    # azimuthal truncation; None = auto from p_perp


@dataclass(frozen=True)
class StateBasis:
    """Bound states plus the discretized continuum for the state sums."""

    beam: BeamState
    well: StringPotential
    disk_radius: float
    bound: tuple                   # TransverseState, all m <= m_cut
    channels: tuple                # ContinuumChannel per m = 0..m_cut
    config: BasisConfig

    @property
    def m_cut(self) -> int:
        return len(self.channels) - 1

    def plane_wave_norm(self) -> float:
        """||exp(i q rho)||^2 on the disk = pi D^2 (q-independent)."""
        return math.pi * self.disk_radius ** 2


def auto_m_cut(p_perp: float, disk_radius: float) -> int:
    """Azimuthal truncation covering J_m(p_perp D) support."""
    x = p_perp * disk_radius
    return int(math.ceil(x + 8.0 * x ** (1.0 / 3.0) + 8.0)) if x > 0 else 8


def _active_mask(m: int, k: np.ndarray, radius: float, has_bound: bool) -> np.ndarray:
    """Bins where the m-channel interaction is numerically resolvable.

    Born scale of the hard-boundary phase shift,
    tan(delta_m) ~ (kR/2)^(2m) / (m! (m-1)!), compared against e^-32.
    Channels with bound states (and all m <= 2) stay fully active: their
    low-k phase is threshold-dominated and the estimate does not apply.
    """
    if m <= 2 or has_bound:
        return np.ones(k.shape, dtype=bool)
    z = k * radius
    with np.errstate(divide="ignore"):
        log_tan = 2.0 * m * np.log(z / 2.0) - gammaln(m + 1) - gammaln(m)
    return log_tan > -32.0


def build_basis(beam: BeamState, well: StringPotential,
                config: BasisConfig | None = None) -> StateBasis:
    """Assemble the production basis: bound states and continuum channels."""
    cfg = config or BasisConfig()
    scales = effective_scales(beam, well)
    disk = cfg.disk_factor * scales.rho_eff
    k_max = cfg.cutoff_factor / well.radius
    m_cut = cfg.m_cut if cfg.m_cut is not None else auto_m_cut(
        beam.transverse_momentum, disk)

    dense_to = min(cfg.dense_k_to, k_max)
    n_dense = int(round(dense_to / cfg.dense_dk))
    k_dense = (np.arange(n_dense) + 0.5) * (dense_to / n_dense)
    w_dense = np.full(n_dense, dense_to / n_dense)
    dk_coarse = (k_max - dense_to) / cfg.coarse_bins
    k_coarse = dense_to + (np.arange(cfg.coarse_bins) + 0.5) * dk_coarse
    w_coarse = np.full(cfg.coarse_bins, dk_coarse)
    k = np.concatenate([k_dense, k_coarse])
    w = np.concatenate([w_dense, w_coarse])

    channels = []
    bound = []
    for m in range(m_cut + 1):
        bound_m = (bound_states_exact(well, beam.total_energy, m)
                   if well.depth > 0 else [])
        bound.extend(bound_m)
        active = _active_mask(m, k, well.radius, bool(bound_m))
        cos_d = np.ones_like(k)
        sin_d = np.zeros_like(k)
        a_in = np.zeros_like(k)
        k_in = k.copy()
        if well.depth > 0 and active.any():
            cd, sd, ai, ki = continuum_match(well, beam.momentum, m, k[active])
            cos_d[active] = cd
            sin_d[active] = sd
            a_in[active] = ai
            k_in[active] = ki
        channels.append(ContinuumChannel(m=m, k=k, weight=w, cos_d=cos_d,
                                         sin_d=sin_d, a_in=a_in, k_in=k_in,
                                         active=active))
    return StateBasis(beam=beam, well=well, disk_radius=disk,
                      bound=tuple(bound), channels=tuple(channels), config=cfg)


def _channel_radial_overlaps(channel: ContinuumChannel, well: StringPotential,
                             disk: float, q: float):
    """(I_V, I_free): radial overlap integrals of the channel with J_m(q rho).

    I(k, q) = int_0^D Rad_k(rho) J_m(q rho) rho drho for the interacting
    and the free radial solutions on the shared grid.
    """
    m, k = channel.m, channel.k
    act = channel.active
    R = well.radius
    if q == 0.0:
        if m != 0:
            z = np.zeros_like(k)
            return z, z
        i_free = disk * _sp.jv(1, k * disk) / k
        if well.depth == 0.0:
            return i_free, i_free
        jj = (disk * _sp.jv(1, k * disk) - R * _sp.jv(1, k * R)) / k
        yj = (disk * _sp.yv(1, k * disk) - R * _sp.yv(1, k * R)) / k
        interior = channel.a_in * R * _sp.jv(1, channel.k_in * R) / channel.k_in
        i_v = interior + channel.cos_d * jj - channel.sin_d * yj
        return i_v, i_free
    i_free = cross_integral("J", m, k, q, 0.0, disk)
    if well.depth == 0.0 or not act.any():
        return i_free, i_free
    ka = k[act]
    jj = cross_integral("J", m, ka, q, R, disk)
    yj = cross_integral("Y", m, ka, q, R, disk)
    interior = channel.a_in[act] * cross_integral("J", m, channel.k_in[act], q, 0.0, R)
    i_v = i_free.copy()
    i_v[act] = interior + channel.cos_d[act] * jj - channel.sin_d[act] * yj
    return i_v, i_free


# ---------------------------------------------------------------------------
# cross sections and amplitude

@dataclass(frozen=True)
class PerStateContribution:
    """One state's share of the optical-theorem sum (continuum: one bin)."""

    n: int
    m: int
    epsilon: float
    contribution: float
    kind: str


@dataclass(frozen=True)
class CrossSectionBreakdown:
    """Total cross section split into continuum / bound / resonance parts."""

    sigma_total: float
    sigma_continuum: float
    sigma_bound: float
    sigma_resonance: float
    per_state: tuple = field(default_factory=tuple)


def sigma_continuum_baseline(beam: BeamState, well: StringPotential) -> float:
    """The m = 0 continuum cross section sigma0 = (2/pi) L / p."""
    return (2.0 / math.pi) * well.length / beam.momentum


def sigma_small_angle_m0(beam: BeamState, well: StringPotential,
                         states: Optional[Sequence[TransverseState]] = None,
                         warn: bool = True) -> CrossSectionBreakdown:
    """Small-angle (m = 0 only) cross section: sigma0 plus bound-state terms.

    Valid for theta0 below 1/sqrt(pL); computed (with a warning) outside
    that regime.  Bound energies default to the exact m = 0 spectrum.
    """
    scales = effective_scales(beam, well)
    if warn and beam.entry_angle >= scales.theta_eff:
        warnings.warn("entry angle exceeds 1/sqrt(pL); the m = 0 formula is "
                      "outside its regime", stacklevel=2)
    if states is None:
        states = bound_states_exact(well, beam.total_energy, 0) if well.depth > 0 else []
    p = beam.momentum
    L = well.length
    sigma0 = sigma_continuum_baseline(beam, well)
    kin = beam.transverse_momentum ** 2 / (2.0 * p)
    per_state = []
    bound_sum = 0.0
    for s in states:
        if s.m != 0 or s.epsilon >= 0:
            raise InvalidArgumentError("small-angle sum takes m = 0 bound states only")
        d = abs(s.epsilon) + kin
        term = (2.0 / math.pi) * (abs(s.epsilon) / p) * math.sin(d * L / 2.0) ** 2 / d ** 2
        bound_sum += term
        per_state.append(PerStateContribution(n=s.n, m=0, epsilon=s.epsilon,
                                              contribution=term, kind="bound"))
    return CrossSectionBreakdown(sigma_total=sigma0 + bound_sum,
                                 sigma_continuum=sigma0,
                                 sigma_bound=bound_sum,
                                 sigma_resonance=0.0,
                                 per_state=tuple(per_state))


def _bound_phase(state: TransverseState, beam: BeamState, well: StringPotential) -> float:
    """(alpha - p_perp_i^2) L / 4p = (eps - p_perp_i^2/2p) L / 2."""
    p = beam.momentum
    return (state.epsilon - beam.transverse_momentum ** 2 / (2.0 * p)) * well.length / 2.0


def sigma_total(beam: BeamState, well: StringPotential, basis: StateBasis,
                check_parseval: bool = True) -> CrossSectionBreakdown:
    """Optical-theorem total cross section from the discretized state sum.

    sigma = 4 sum_s eps_m |Q_i(s)|^2 sin^2((alpha_s - p_perp_i^2) L/4p),
    bound states with pole amplitudes, continuum with the subtracted
    excess weights.  Raises AccuracyError when the basis fails its
    Parseval completeness contract (deficit above 5%) at the beam's
    transverse momentum.
    """
    if not basis.channels:
        raise InvalidArgumentError("state basis is empty")
    p = beam.momentum
    L = well.length
    q_i = beam.transverse_momentum

    per_state = []
    bound_sum = 0.0
    for s in basis.bound:
        em = 1.0 if s.m == 0 else 2.0
        qb = abs(bound_pole_amplitude(s, p, q_i))
        term = 4.0 * em * qb * qb * math.sin(_bound_phase(s, beam, well)) ** 2
        bound_sum += term
        per_state.append(PerStateContribution(n=s.n, m=s.m, epsilon=s.epsilon,
                                              contribution=term, kind="bound"))

    cont_sum = 0.0
    parseval_weight = 0.0
    for ch in basis.channels:
        em = 1.0 if ch.m == 0 else 2.0
        i_v, i_free = _channel_radial_overlaps(ch, well, basis.disk_radius, q_i)
        weights = 2.0 * math.pi * ch.k * ch.weight
        phases = (ch.k ** 2 - q_i ** 2) * L / (4.0 * p)
        terms = 4.0 * em * weights * (i_v ** 2 - i_free ** 2) * np.sin(phases) ** 2
        cont_sum += float(terms.sum())
        parseval_weight += em * float((weights * i_v ** 2).sum())
        j = int(np.argmax(np.abs(terms)))
        per_state.append(PerStateContribution(
            n=j, m=ch.m, epsilon=float(ch.k[j] ** 2 / (2.0 * p)),
            contribution=float(terms[j]), kind="continuum"))

    if check_parseval and well.depth > 0:
        for s in basis.bound:
            em = 1.0 if s.m == 0 else 2.0
            parseval_weight += em * abs(overlap_q(s, q_i).value) ** 2
        deficit = 1.0 - parseval_weight / basis.plane_wave_norm()
        if abs(deficit) > PARSEVAL_DEFICIT_LIMIT:
            raise AccuracyError(
                f"continuum discretization too coarse: Parseval deficit {deficit:.3e}")

    return CrossSectionBreakdown(sigma_total=bound_sum + cont_sum,
                                 sigma_continuum=cont_sum,
                                 sigma_bound=bound_sum,
                                 sigma_resonance=0.0,
                                 per_state=tuple(per_state))


def amplitude_f(beam: BeamState, well: StringPotential, basis: StateBasis,
                theta: float, phi: float) -> complex:
    """Scattering amplitude f(theta, phi) from the discretized state sum.

    theta is the exit angle to the string axis (p_perp_f = p theta), phi
    the azimuth of the exit direction relative to the entry plane.  The
    forward direction is theta = theta0, phi = 0.
    """
    if not basis.channels:
        raise InvalidArgumentError("state basis is empty")
    if theta < 0:
        raise InvalidArgumentError("theta must be >= 0")
    p = beam.momentum
    L = well.length
    q_i = beam.transverse_momentum
    q_f = p * theta

    total = 0.0 + 0.0j
    for s in basis.bound:
        em = 1.0 if s.m == 0 else 2.0
        qi = abs(bound_pole_amplitude(s, p, q_i))
        qf = abs(bound_pole_amplitude(s, p, q_f))
        bracket = np.exp(2j * _bound_phase(s, beam, well)) - 1.0
        total += em * math.cos(s.m * phi) * qi * qf * bracket

    for ch in basis.channels:
        em = 1.0 if ch.m == 0 else 2.0
        iv_i, i0_i = _channel_radial_overlaps(ch, well, basis.disk_radius, q_i)
        if q_f == q_i:
            iv_f, i0_f = iv_i, i0_i
        else:
            iv_f, i0_f = _channel_radial_overlaps(ch, well, basis.disk_radius, q_f)
        weights = 2.0 * math.pi * ch.k * ch.weight
        phases = (ch.k ** 2 - q_i ** 2) * L / (4.0 * p)
        brackets = np.exp(2j * phases) - 1.0
        s_m = (weights * (iv_i * iv_f - i0_i * i0_f) * brackets).sum()
        total += em * math.cos(ch.m * phi) * s_m

    return p / (2.0j * math.pi) * total


def parseval_deficit(basis: StateBasis, p_perp: float) -> float:
    """1 - (sum of |Q|^2 spectral weights) / ||plane wave||^2 on the disk.

    Uses the true spectral weights: exact-FT bound overlaps plus the
    unsubtracted interacting continuum weights.
    """
    total = 0.0
    for s in basis.bound:
        em = 1.0 if s.m == 0 else 2.0
        total += em * abs(overlap_q(s, p_perp).value) ** 2
    for ch in basis.channels:
        em = 1.0 if ch.m == 0 else 2.0
        i_v, _ = _channel_radial_overlaps(ch, basis.well, basis.disk_radius, p_perp)
        total += em * float((2.0 * math.pi * ch.k * ch.weight * i_v ** 2).sum())
    return 1.0 - total / basis.plane_wave_norm()
