"""Scenario presets, scan drivers, config ingestion and CSV emission.

The bundled preset is the silicon <111> case: 15-MeV electrons on a
1.4-um crystal, string parameters 1/R = 9.7e3 eV, V0 = 23 eV.  An
angle scan composes the small-angle m = 0 cross section (central
structure) with the Breit-Wigner excesses of the selected quasi-bound
resonances (side structure); each (n, m) excess is included only at
entry angles where the m-th partial wave participates in the
scattering, theta0 >= m / sqrt(pL) (below that angle only the m = 0
wave is scattered).  An energy scan holds theta0 fixed and sweeps the
Lorentzian in E.

Config files are flat "section.key = value" text with '#' comments;
unknown keys are rejected.  The provenance hash is a SHA-256 over the
canonicalized (sorted, normalized) effective configuration, so
identical scenarios hash identically however they were spelled.
"""

from __future__ import annotations

import hashlib
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np

from ._version import __version__
from .errors import InvalidArgumentError, NoResonanceError
from .kinematics import (ELECTRON_MASS_EV, BeamState, StringPotential,
                         beam_from, effective_scales, to_natural_length)
from .resonance import (e_res, gamma_energy, resonance_prediction, theta_res)
from .scattering import sigma_continuum_baseline
from .special import bessel_j_zero
from .spectrum import bound_states_exact

LEVEL_VARIANTS = ("model", "exact-zero", "exact-matching")
SCAN_KINDS = ("angle", "energy")

CSV_HEADER = "x,sigma_total,sigma_continuum,sigma_bound,sigma_resonance"

_AUTO_M_CAP = 8
_AUTO_N_PAD = 1


@dataclass(frozen=True)
class ScanSpec:
    """Grid window: degrees for angle scans, MeV for energy scans."""

    kind: str
    minimum: float
    maximum: float
    points: int

    def __post_init__(self):
        if self.kind not in SCAN_KINDS:
            raise InvalidArgumentError(f"scan kind must be one of {SCAN_KINDS}")
        if not self.minimum < self.maximum:
            raise InvalidArgumentError("scan needs min < max")
        if self.points < 2:
            raise InvalidArgumentError("scan needs at least 2 points")


@dataclass(frozen=True)
class Scenario:
    """A fully specified run: beam, well, scan window and model flags."""

    name: str
    energy_ev: float
    mass_ev: float
    theta0_deg: float
    depth_ev: float
    inverse_radius_ev: float
    length_m: float
    scan: ScanSpec
    ultrarelativistic: bool = False
    paper_literal_eq13: bool = False
    level_variant: str = "model"
    resonances: Union[str, tuple] = ((1, 1),)   # tuple of (n, m) or "auto"

    def __post_init__(self):
        if self.level_variant not in LEVEL_VARIANTS:
            raise InvalidArgumentError(
                f"level variant must be one of {LEVEL_VARIANTS}")
        for value, label in ((self.energy_ev, "beam.energy_ev"),
                             (self.depth_ev, "well.depth_ev"),
                             (self.inverse_radius_ev, "well.inverse_radius_ev"),
                             (self.length_m, "well.length_m")):
            if value <= 0:
                raise InvalidArgumentError(f"{label} must be positive")
        if self.mass_ev < 0 or self.theta0_deg < 0:
            raise InvalidArgumentError("mass and entry angle must be nonnegative")

    def beam(self) -> BeamState:
        return beam_from(self.energy_ev, self.mass_ev,
                         math.radians(self.theta0_deg),
                         ultrarelativistic=self.ultrarelativistic)

    def well(self) -> StringPotential:
        return StringPotential(depth=self.depth_ev,
                               radius=1.0 / self.inverse_radius_ev,
                               length=to_natural_length(self.length_m))

    def canonical_lines(self) -> list[str]:
        pairs = {
            "scenario.name": self.name,
            "beam.energy_ev": repr(float(self.energy_ev)),
            "beam.mass_ev": repr(float(self.mass_ev)),
            "beam.theta0_deg": repr(float(self.theta0_deg)),
            "well.depth_ev": repr(float(self.depth_ev)),
            "well.inverse_radius_ev": repr(float(self.inverse_radius_ev)),
            "well.length_m": repr(float(self.length_m)),
            "scan.kind": self.scan.kind,
            "scan.min": repr(float(self.scan.minimum)),
            "scan.max": repr(float(self.scan.maximum)),
            "scan.points": str(self.scan.points),
            "model.ultrarelativistic": str(self.ultrarelativistic).lower(),
            "model.paper_literal_eq13": str(self.paper_literal_eq13).lower(),
            "model.level_variant": self.level_variant,
            "model.resonances": _format_resonances(self.resonances),
        }
        return [f"{k} = {pairs[k]}" for k in sorted(pairs)]

    def config_hash(self) -> str:
        text = "\n".join(self.canonical_lines()) + "\n"
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


def _format_resonances(res) -> str:
    if isinstance(res, str):
        return res
    return ";".join(f"{n},{m}" for n, m in res)


def preset_si111() -> Scenario:
    """The silicon <111> scenario: 15-MeV electrons, 1.4-um crystal."""
    return Scenario(
        name="si111",
        energy_ev=15e6,
        mass_ev=ELECTRON_MASS_EV,
        theta0_deg=0.1,
        depth_ev=23.0,
        inverse_radius_ev=9.7e3,
        length_m=1.4e-6,
        scan=ScanSpec(kind="angle", minimum=0.0, maximum=0.2, points=2001),
        resonances=((1, 1),),
    )


# ---------------------------------------------------------------------------
# scan results

@dataclass(frozen=True)
class ScanResult:
    """One row per grid point plus resonance annotations and provenance."""

    scenario: Scenario
    kind: str
    grid: np.ndarray              # degrees (angle) or MeV (energy)
    sigma_total: np.ndarray       # eV^-2
    sigma_continuum: np.ndarray
    sigma_bound: np.ndarray
    sigma_resonance: np.ndarray
    annotations: tuple = field(default_factory=tuple)  # ResonancePrediction

    @property
    def config_hash(self) -> str:
        return self.scenario.config_hash()


def _worker_count(workers: Optional[int]) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get("STRING_RESONANCE_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _chunked(total: int, workers: int) -> list[slice]:
    size = (total + workers - 1) // workers
    return [slice(i, min(i + size, total)) for i in range(0, total, size)]


def _level_eigenvalue(scenario: Scenario, n: int, m: int) -> Optional[float]:
    """lambda^2 for the resonance formulas under the scenario's level variant.

    "model" keeps the printed pi^2 n^2 + m^2 (None = no override);
    "exact-zero" substitutes the exact circular-well eigenvalue
    j_{m,n}^2; "exact-matching" has no positive levels and falls back to
    the model positions.
    """
    if scenario.level_variant == "exact-zero":
        return bessel_j_zero(m, n) ** 2
    return None


def _theta_res_variant(scenario: Scenario, well, n: int, m: int) -> float:
    lam2 = _level_eigenvalue(scenario, n, m)
    if lam2 is None:
        return theta_res(well, scenario.energy_ev, n, m)
    arg = lam2 / (scenario.energy_ev * well.radius) ** 2 \
        - 2.0 * well.depth / scenario.energy_ev
    if arg < 0:
        raise NoResonanceError(f"no resonance for (n={n}, m={m})")
    return math.sqrt(arg)


def _selected_resonances(scenario: Scenario, well) -> list[tuple[int, int]]:
    """The (n, m) pairs whose Breit-Wigner terms a scan includes."""
    if scenario.resonances != "auto":
        return [(int(n), int(m)) for n, m in scenario.resonances]
    pairs = []
    x0 = well.well_strength(scenario.energy_ev)
    n_cap = max(1, int(math.floor(x0 / math.pi)) + _AUTO_N_PAD)
    for n in range(1, n_cap + 1):
        for m in range(1, _AUTO_M_CAP + 1):   # m = 0 has no centrifugal barrier
            try:
                _theta_res_variant(scenario, well, n, m)
            except NoResonanceError:
                continue
            pairs.append((n, m))
    return pairs


def run_angle_scan(scenario: Scenario, workers: Optional[int] = None) -> ScanResult:
    """Cross section versus entry angle over the scenario's grid.

    Per grid point: the small-angle m = 0 breakdown (sigma0 baseline
    plus exact bound-state terms) plus the Breit-Wigner excess of every
    selected resonance whose theta_res lies inside the window, gated by
    the participating-m criterion theta0 >= m/sqrt(pL).
    """
    if scenario.scan.kind != "angle":
        raise InvalidArgumentError("scenario scan kind is not 'angle'")
    spec = scenario.scan
    well = scenario.well()
    beam0 = beam_from(scenario.energy_ev, scenario.mass_ev, 0.0,
                      ultrarelativistic=scenario.ultrarelativistic)
    p = beam0.momentum
    L = well.length
    sigma0 = sigma_continuum_baseline(beam0, well)
    states = bound_states_exact(well, scenario.energy_ev, 0)
    theta_eff = effective_scales(beam0, well).theta_eff

    grid_deg = np.linspace(spec.minimum, spec.maximum, spec.points)
    window_lo, window_hi = math.radians(spec.minimum), math.radians(spec.maximum)

    annotations = []
    bw_params = []   # (m, theta_res, gamma)
    for n, m in _selected_resonances(scenario, well):
        try:
            t_res = _theta_res_variant(scenario, well, n, m)
        except NoResonanceError:
            continue
        if not (window_lo <= t_res <= window_hi):
            continue
        pred = resonance_prediction(scenario.beam(), well, n, m,
                                    paper_literal=scenario.paper_literal_eq13)
        if scenario.level_variant == "exact-zero":
            pred = replace(pred, theta_res=t_res,
                           gamma=t_res * (pred.gamma / pred.theta_res))
        annotations.append(pred)
        bw_params.append((m, pred.theta_res, pred.gamma))

    def compute(sl: slice):
        th = np.radians(grid_deg[sl])
        bound = np.zeros_like(th)
        for s in states:
            d = abs(s.epsilon) + p * th ** 2 / 2.0
            bound += (2.0 / math.pi) * (abs(s.epsilon) / p) \
                * np.sin(d * L / 2.0) ** 2 / d ** 2
        res = np.zeros_like(th)
        for m, t_res, gam in bw_params:
            quarter = gam * gam / 4.0
            lorentz = sigma0 * quarter / ((th - t_res) ** 2 + quarter)
            res += np.where(th >= m * theta_eff, lorentz, 0.0)
        return bound, res

    nworkers = _worker_count(workers)
    slices = _chunked(spec.points, nworkers)
    if nworkers == 1:
        parts = [compute(sl) for sl in slices]
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            parts = list(pool.map(compute, slices))
    bound = np.concatenate([b for b, _ in parts])
    res = np.concatenate([r for _, r in parts])
    cont = np.full_like(bound, sigma0)
    return ScanResult(scenario=scenario, kind="angle", grid=grid_deg,
                      sigma_total=cont + bound + res,
                      sigma_continuum=cont, sigma_bound=bound,
                      sigma_resonance=res, annotations=tuple(annotations))


def run_energy_scan(scenario: Scenario, workers: Optional[int] = None) -> ScanResult:
    """Cross section versus beam energy at the scenario's fixed entry angle.

    Each selected resonance with E_res inside the window contributes its
    Lorentzian; the baseline and the peak-excess coefficient use the
    beam momentum at the (first) resonance energy, so the peak excess is
    exactly (2/pi) L/p there.
    """
    if scenario.scan.kind != "energy":
        raise InvalidArgumentError("scenario scan kind is not 'energy'")
    if scenario.theta0_deg <= 0:
        raise InvalidArgumentError("energy scan requires a positive entry angle")
    spec = scenario.scan
    well = scenario.well()
    theta0 = math.radians(scenario.theta0_deg)

    grid_mev = np.linspace(spec.minimum, spec.maximum, spec.points)
    window = (spec.minimum * 1e6, spec.maximum * 1e6)

    annotations = []
    terms = []    # (e_res, gamma_bar, coefficient sigma0_at_res)
    for n, m in _selected_resonances(scenario, well):
        lam2 = _level_eigenvalue(scenario, n, m)
        if lam2 is None:
            er = e_res(well, theta0, n, m,
                       paper_literal=scenario.paper_literal_eq13)
        else:
            root = math.sqrt(well.depth ** 2 + theta0 ** 2 * lam2 / well.radius ** 2)
            er = (lam2 / well.radius ** 2) / (well.depth + root)
            if scenario.paper_literal_eq13:
                er = (2.0 * well.depth + 2.0 * root) / theta0 ** 2
        if not (window[0] <= er <= window[1]):
            continue
        gbar = gamma_energy(well, er, n)
        beam_res = beam_from(er, scenario.mass_ev, theta0,
                             ultrarelativistic=scenario.ultrarelativistic)
        s0_res = sigma_continuum_baseline(beam_res, well)
        pred = resonance_prediction(beam_res, well, n, m,
                                    paper_literal=scenario.paper_literal_eq13)
        annotations.append(pred)
        terms.append((er, gbar, s0_res))

    if terms:
        sigma0 = terms[0][2]
    else:
        beam_mid = beam_from(0.5 * (window[0] + window[1]), scenario.mass_ev,
                             theta0, ultrarelativistic=scenario.ultrarelativistic)
        sigma0 = sigma_continuum_baseline(beam_mid, well)

    def compute(sl: slice):
        e_ev = grid_mev[sl] * 1e6
        res = np.zeros_like(e_ev)
        for er, gbar, s0_res in terms:
            quarter = gbar * gbar / 4.0
            res += s0_res * quarter / ((e_ev - er) ** 2 + quarter)
        return res

    nworkers = _worker_count(workers)
    slices = _chunked(spec.points, nworkers)
    if nworkers == 1:
        parts = [compute(sl) for sl in slices]
    else:
        with ThreadPoolExecutor(max_workers=nworkers) as pool:
            parts = list(pool.map(compute, slices))
    res = np.concatenate(parts)
    cont = np.full_like(res, sigma0)
    bound = np.zeros_like(res)
    return ScanResult(scenario=scenario, kind="energy", grid=grid_mev,
                      sigma_total=cont + bound + res,
                      sigma_continuum=cont, sigma_bound=bound,
                      sigma_resonance=res, annotations=tuple(annotations))


# ---------------------------------------------------------------------------
# CSV emission

def _fmt(value: float) -> str:
    """12 significant digits, locale-independent."""
    return f"{value:.11e}"


def emit_csv(result: ScanResult, destination) -> None:
    """Write the scan as UTF-8 CSV with provenance comments.

    destination is a path or a file-like object.  Output is
    deterministic: identical scenarios produce byte-identical files.
    """
    lines = [
        f"# string-resonance {__version__}",
        f"# scenario: {result.scenario.name}",
        f"# config-hash: {result.config_hash}",
        ("# flags: ultrarelativistic={} paper_literal_eq13={} level_variant={}"
         .format(str(result.scenario.ultrarelativistic).lower(),
                 str(result.scenario.paper_literal_eq13).lower(),
                 result.scenario.level_variant)),
        f"# x-unit: {'degree' if result.kind == 'angle' else 'MeV'}",
    ]
    for a in result.annotations:
        if result.kind == "angle":
            lines.append(f"# resonance: n={a.n} m={a.m} "
                         f"theta_res_deg={_fmt(math.degrees(a.theta_res))} "
                         f"gamma_deg={_fmt(math.degrees(a.gamma))}")
        else:
            lines.append(f"# resonance: n={a.n} m={a.m} "
                         f"e_res_mev={_fmt(a.e_res / 1e6)} "
                         f"gamma_bar_mev={_fmt(a.gamma_bar / 1e6)}")
    lines.append(CSV_HEADER)
    for i in range(len(result.grid)):
        lines.append(",".join((_fmt(result.grid[i]),
                               _fmt(result.sigma_total[i]),
                               _fmt(result.sigma_continuum[i]),
                               _fmt(result.sigma_bound[i]),
                               _fmt(result.sigma_resonance[i]))))
    text = "\n".join(lines) + "\n"
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        with open(destination, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# config ingestion

_CONFIG_KEYS = {
    "scenario.name": str,
    "beam.energy_ev": float,
    "beam.mass_ev": float,
    "beam.theta0_deg": float,
    "well.depth_ev": float,
    "well.inverse_radius_ev": float,
    "well.length_m": float,
    "scan.kind": str,
    "scan.min": float,
    "scan.max": float,
    "scan.points": int,
    "model.ultrarelativistic": bool,
    "model.paper_literal_eq13": bool,
    "model.level_variant": str,
    "model.resonances": str,
}


def _parse_bool(raw: str, key: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "1"):
        return True
    if low in ("false", "no", "0"):
        return False
    raise InvalidArgumentError(f"config key {key}: expected a boolean, got {raw!r}")


def _parse_resonances(raw: str):
    raw = raw.strip()
    if raw == "auto":
        return "auto"
    pairs = []
    for part in raw.split(";"):
        part = part.strip()
        if not part:
            continue
        bits = part.split(",")
        if len(bits) != 2:
            raise InvalidArgumentError(f"bad resonance entry {part!r}; expected n,m")
        pairs.append((int(bits[0]), int(bits[1])))
    if not pairs:
        raise InvalidArgumentError("empty resonance list")
    return tuple(pairs)


def parse_config(text: str, base: Optional[Scenario] = None) -> Scenario:
    """Parse 'section.key = value' lines into a Scenario.

    Keys not present keep the base scenario's values (default: the
    silicon preset).  Unknown keys are an error.
    """
    base = base or preset_si111()
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgumentError(f"config line {lineno}: expected key = value")
        key, _, rhs = line.partition("=")
        key = key.strip()
        rhs = rhs.strip()
        if key not in _CONFIG_KEYS:
            raise InvalidArgumentError(f"config line {lineno}: unknown key {key!r}")
        caster = _CONFIG_KEYS[key]
        if caster is bool:
            values[key] = _parse_bool(rhs, key)
        elif caster in (float, int):
            try:
                values[key] = caster(rhs)
            except ValueError as exc:
                raise InvalidArgumentError(
                    f"config line {lineno}: bad value for {key}: {rhs!r}") from exc
        else:
            values[key] = rhs

    scan = ScanSpec(
        kind=values.get("scan.kind", base.scan.kind),
        minimum=values.get("scan.min", base.scan.minimum),
        maximum=values.get("scan.max", base.scan.maximum),
        points=values.get("scan.points", base.scan.points),
    )
    resonances = (_parse_resonances(values["model.resonances"])
                  if "model.resonances" in values else base.resonances)
    return Scenario(
        name=values.get("scenario.name", base.name),
        energy_ev=values.get("beam.energy_ev", base.energy_ev),
        mass_ev=values.get("beam.mass_ev", base.mass_ev),
        theta0_deg=values.get("beam.theta0_deg", base.theta0_deg),
        depth_ev=values.get("well.depth_ev", base.depth_ev),
        inverse_radius_ev=values.get("well.inverse_radius_ev", base.inverse_radius_ev),
        length_m=values.get("well.length_m", base.length_m),
        scan=scan,
        ultrarelativistic=values.get("model.ultrarelativistic", base.ultrarelativistic),
        paper_literal_eq13=values.get("model.paper_literal_eq13", base.paper_literal_eq13),
        level_variant=values.get("model.level_variant", base.level_variant),
        resonances=resonances,
    )
