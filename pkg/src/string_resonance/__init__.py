"""Resonance scattering of fast charged particles on an extended string potential.

Transverse bound and quasi-bound spectra of the 2D circular well,
optical-theorem cross sections, closed-form Breit-Wigner resonance
scans, and an independent numerical oracle, with a CLI for the silicon
<111> scenario.
"""

from ._version import __version__
from .errors import (AccuracyError, BracketError, InvalidArgumentError,
                     NoResonanceError, StringResonanceError)
from .kinematics import (CONSTANTS, ELECTRON_MASS_EV, BeamState,
                         EffectiveScales, PhysicalConstants, RegimeCheck,
                         StringPotential, beam_from, effective_scales,
                         from_natural_length, regime_check, to_natural_length)
from .oracle import (PhaseShiftCurve, RadialMesh, build_phase_curve,
                     default_mesh, fd_bound_states, parseval_audit,
                     phase_shift, resonance_from_phase)
from .resonance import (ResonancePrediction, e_res, gamma_angle, gamma_energy,
                        resonance_prediction, sigma_bw_angle, sigma_bw_energy,
                        theta_res)
from .scattering import (BasisConfig, CrossSectionBreakdown, StateBasis,
                         TransitionAmplitude, amplitude_f, bound_pole_amplitude,
                         build_basis, overlap_q, parseval_deficit,
                         sigma_continuum_baseline, sigma_small_angle_m0,
                         sigma_total)
from .scenarios import (ScanResult, ScanSpec, Scenario, emit_csv, parse_config,
                        preset_si111, run_angle_scan, run_energy_scan)
from .special import (RootBracket, bessel_i, bessel_j, bessel_j_zero, bessel_k,
                      bessel_y, bracket_root, find_root)
from .spectrum import (SpectrumConfig, TransverseState, bound_states_exact,
                       continuum_match, level_exact_infinite_well, n_max,
                       quasi_bound_level_model, resonance_condition_residual,
                       single_state_threshold)

__all__ = [
    "__version__",
    "AccuracyError", "BracketError", "InvalidArgumentError", "NoResonanceError",
    "StringResonanceError",
    "CONSTANTS", "ELECTRON_MASS_EV", "BeamState", "EffectiveScales",
    "PhysicalConstants", "RegimeCheck", "StringPotential", "beam_from",
    "effective_scales", "from_natural_length", "regime_check", "to_natural_length",
    "PhaseShiftCurve", "RadialMesh", "build_phase_curve", "default_mesh",
    "fd_bound_states", "parseval_audit", "phase_shift", "resonance_from_phase",
    "ResonancePrediction", "e_res", "gamma_angle", "gamma_energy",
    "resonance_prediction", "sigma_bw_angle", "sigma_bw_energy", "theta_res",
    "BasisConfig", "CrossSectionBreakdown", "StateBasis", "TransitionAmplitude",
    "amplitude_f", "bound_pole_amplitude", "build_basis", "overlap_q",
    "parseval_deficit", "sigma_continuum_baseline", "sigma_small_angle_m0",
    "sigma_total",
    "ScanResult", "ScanSpec", "Scenario", "emit_csv", "parse_config",
    "preset_si111", "run_angle_scan", "run_energy_scan",
    "RootBracket", "bessel_i", "bessel_j", "bessel_j_zero", "bessel_k",
    "bessel_y", "bracket_root", "find_root",
    "SpectrumConfig", "TransverseState", "bound_states_exact", "continuum_match",
    "level_exact_infinite_well", "n_max", "quasi_bound_level_model",
    "resonance_condition_residual", "single_state_threshold",
]
