"""Constants, pulse/electron specifications, and probability scaling laws.

Everything downstream (field construction, perturbative amplitudes, the
momentum-ladder solver, the classical tracer) derives its parameters from
the small set of types defined here.  All quantities are SI unless a name
says otherwise.
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

import scipy.constants as sc

__all__ = [
    "Constants",
    "CONST",
    "LaserPulseSpec",
    "ElectronSpec",
    "ScalingLaw",
    "ScalingOverflowError",
    "ConfigError",
    "POLARIZATIONS",
    "DIRECTIONS",
    "SPINS",
    "TABLE_LAWS",
    "TABLE_BASELINES",
    "derived_quantities",
    "pulse_from_a0",
    "scaling_probability",
    "Scenario",
    "SolverSpec",
    "OutputSpec",
    "load_scenario",
    "scenario_from_dict",
    "scenario_hash",
]

POLARIZATIONS = ("linear_x", "linear_y", "circular_plus", "circular_minus")
DIRECTIONS = ("plus_z", "minus_z")
SPINS = ("up", "down")

_MAX_LOG10 = math.log10(sys.float_info.max)


class ConfigError(ValueError):
    """Raised for invalid or missing configuration input."""


class ScalingOverflowError(OverflowError):
    """Raised when a power-law probability overflows float range.

    The offending base-10 exponent is kept on the exception so callers can
    report how far out of range the request was.
    """

    def __init__(self, log10_value: float):
        self.log10_value = log10_value
        super().__init__(
            f"scaling law overflows float64 (log10 P = {log10_value:.1f})"
        )


@dataclass(frozen=True)
class Constants:
    """Electron and vacuum constants (CODATA values from scipy).

    The Bohr magneton must equal q*hbar/(2m) to 1e-6 relative; the spin
    coupling uses muB directly, so an inconsistent set would silently
    shift every spin-flip amplitude.
    """

    q: float = sc.elementary_charge
    m: float = sc.electron_mass
    hbar: float = sc.hbar
    c: float = sc.speed_of_light
    eps0: float = sc.epsilon_0
    muB: float = sc.physical_constants["Bohr magneton"][0]

    def __post_init__(self) -> None:
        for name in ("q", "m", "hbar", "c", "eps0", "muB"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"constant {name} must be positive")
        g_half = self.q * self.hbar / (2.0 * self.m)
        if abs(self.muB - g_half) > 1e-6 * self.muB:
            raise ValueError("muB inconsistent with q*hbar/(2m)")


CONST = Constants()


@dataclass(frozen=True)
class LaserPulseSpec:
    """One Gaussian laser pulse of the counter-propagating pair.

    Parameters
    ----------
    intensity : float
        Peak intensity in W/m^2 (>= 0).
    base_wavelength : float
        Wavelength of the fundamental in m; the pulse's own wavelength is
        base_wavelength / harmonic.
    harmonic : int
        1 for the fundamental, 2 for the frequency-doubled pulse.
    duration : float
        1/e half-width tau of the *field* envelope exp(-t^2/tau^2), seconds.
    focus_diameter : float
        Focal spot diameter in m (waist w0 = focus_diameter / 2).
    polarization : str
        One of linear_x | linear_y | circular_plus | circular_minus.
    direction : str
        Propagation axis sign, plus_z | minus_z.
    carrier_phase : float
        Carrier phase offset at the envelope peak (rad); 0 puts a field
        crest at the peak.
    """

    intensity: float
    base_wavelength: float
    harmonic: int = 1
    duration: float = 1e-11
    focus_diameter: float = 1e-4
    polarization: str = "linear_y"
    direction: str = "plus_z"
    carrier_phase: float = 0.0

    def __post_init__(self) -> None:
        if self.intensity < 0.0:
            raise ValueError("intensity must be >= 0")
        if self.base_wavelength <= 0.0:
            raise ValueError("base_wavelength must be > 0")
        if self.harmonic not in (1, 2):
            raise ValueError("harmonic must be 1 or 2")
        if self.duration <= 0.0:
            raise ValueError("duration must be > 0")
        if self.focus_diameter <= 0.0:
            raise ValueError("focus_diameter must be > 0")
        if self.polarization not in POLARIZATIONS:
            raise ValueError(f"unknown polarization {self.polarization!r}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")

    # -- derived quantities ------------------------------------------------

    @property
    def omega(self) -> float:
        """Angular frequency 2*pi*c*harmonic / base_wavelength."""
        return 2.0 * math.pi * CONST.c * self.harmonic / self.base_wavelength

    @property
    def k(self) -> float:
        return self.omega / CONST.c

    @property
    def a_peak(self) -> float:
        """Peak vector potential A0 = sqrt(2 I / (c eps0)) / omega.

        This is the amplitude of a plane wave carrying the pulse intensity:
        the cycle-averaged Poynting flux of A0*cos(kz - w t) is exactly I
        for linear polarization, and the same relation holds for the
        (x +/- i y)/sqrt(2) circular basis.
        """
        return math.sqrt(2.0 * self.intensity / (CONST.c * CONST.eps0)) / self.omega

    @property
    def e_peak(self) -> float:
        return self.omega * self.a_peak

    @property
    def b_peak(self) -> float:
        return self.k * self.a_peak

    @property
    def a0_dimensionless(self) -> float:
        """Normalized amplitude q A0 / (m c)."""
        return CONST.q * self.a_peak / (CONST.m * CONST.c)

    @property
    def waist(self) -> float:
        return 0.5 * self.focus_diameter


def derived_quantities(pulse: LaserPulseSpec) -> dict:
    """Return omega, k, A0, E0, B0 and the normalized amplitude a0."""
    return {
        "omega": pulse.omega,
        "k": pulse.k,
        "A0": pulse.a_peak,
        "E0": pulse.e_peak,
        "B0": pulse.b_peak,
        "a0": pulse.a0_dimensionless,
    }


def pulse_from_a0(a0: float, base_wavelength: float = 1e-6, harmonic: int = 1,
                  **kwargs) -> LaserPulseSpec:
    """Pulse whose normalized amplitude q A0 / (m c) equals ``a0`` exactly.

    Inverts the intensity relation I = c eps0 (omega A0)^2 / 2; keyword
    arguments pass through to :class:`LaserPulseSpec`.
    """
    if a0 <= 0.0:
        raise ValueError("a0 must be > 0")
    omega = 2.0 * math.pi * CONST.c * harmonic / base_wavelength
    a_peak = a0 * CONST.m * CONST.c / CONST.q
    intensity = 0.5 * CONST.c * CONST.eps0 * (omega * a_peak) ** 2
    return LaserPulseSpec(intensity=intensity, base_wavelength=base_wavelength,
                          harmonic=harmonic, **kwargs)


@dataclass(frozen=True)
class ElectronSpec:
    """Incident electron: transverse speed, ladder rung, and spin."""

    speed: float = 1e7
    initial_ladder_index: int = 2
    initial_spin: str = "up"

    def __post_init__(self) -> None:
        if not 0.0 <= self.speed < CONST.c:
            raise ValueError("speed must satisfy 0 <= v < c")
        if self.initial_spin not in SPINS:
            raise ValueError(f"unknown spin {self.initial_spin!r}")

    @property
    def p_x(self) -> float:
        """Nonrelativistic transverse momentum m*v (v << c throughout)."""
        return CONST.m * self.speed

    @property
    def k_x(self) -> float:
        return self.p_x / CONST.hbar


@dataclass(frozen=True)
class ScalingLaw:
    """Power law P = alpha * I^exp_I * v^exp_v * lambda^exp_lambda * tau^exp_tau."""

    process: str
    alpha: float
    exp_I: int
    exp_v: int
    exp_lambda: int
    exp_tau: int = 2

    def __post_init__(self) -> None:
        if self.alpha <= 0.0:
            raise ValueError("alpha must be > 0")


def scaling_probability(law: ScalingLaw, intensity: float, speed: float,
                        wavelength: float, duration: float) -> float:
    """Evaluate a scattering-probability power law.

    Evaluated in log space so that absurd inputs saturate into a
    ScalingOverflowError instead of silently returning inf.
    """
    if intensity < 0 or speed < 0 or wavelength <= 0 or duration < 0:
        raise ValueError("scaling inputs must be non-negative (wavelength > 0)")
    if (intensity == 0 and law.exp_I) or (speed == 0 and law.exp_v) \
            or (duration == 0 and law.exp_tau):
        return 0.0
    log10p = math.log10(law.alpha)
    log10p += law.exp_I * math.log10(intensity)
    if law.exp_v:
        log10p += law.exp_v * math.log10(speed)
    log10p += law.exp_lambda * math.log10(wavelength)
    log10p += law.exp_tau * math.log10(duration)
    if log10p > _MAX_LOG10:
        raise ScalingOverflowError(log10p)
    return 10.0 ** log10p


# Fitted power laws and the baseline operating points they reproduce.
TABLE_LAWS = {
    "depolarizer": ScalingLaw("depolarizer", 5.09e-21, 2, 2, 2),
    "skd": ScalingLaw("skd", 9.96e-14, 3, 0, 4),
    "two_color_kd": ScalingLaw("two_color_kd", 5.12e-7, 3, 2, 6),
}

# (intensity, speed, wavelength, duration) -> published probability
TABLE_BASELINES = {
    "depolarizer": ((1e18, 1e7, 1.064e-6, 1e-10), 0.00576),
    "skd": ((1e18, 1e7, 1.064e-6, 1e-10), 0.00128),
    "two_color_kd": ((1e15, 1e7, 1.064e-6, 1e-10), 7.4e-4),
}


# -- scenario configuration ----------------------------------------------


@dataclass(frozen=True)
class SolverSpec:
    """Momentum-ladder solver controls."""

    n_min: int = -12
    n_max: int = 12
    rel_tol: float = 1e-9
    window_tau: float = 5.0     # integrate over [-window_tau*tau, +window_tau*tau]
    k_z0: float = 0.0           # longitudinal momentum offset of the ladder, 1/m
    mu_b_scale: float = 1.0     # 0 switches the spin coupling off

    def __post_init__(self) -> None:
        if not self.n_min < 0 < self.n_max:
            raise ValueError("ladder must bracket n = 0 (n_min < 0 < n_max)")
        if not 0.0 < self.rel_tol <= 1e-6:
            raise ValueError("rel_tol must be in (0, 1e-6]")
        if self.window_tau <= 0.0:
            raise ValueError("window_tau must be > 0")


@dataclass(frozen=True)
class OutputSpec:
    out_dir: str = "out"
    stride: int = 50

    def __post_init__(self) -> None:
        if self.stride < 1:
            raise ValueError("stride must be >= 1")


@dataclass(frozen=True)
class Scenario:
    pulses: tuple
    electron: ElectronSpec = ElectronSpec()
    solver: SolverSpec = SolverSpec()
    output: OutputSpec = OutputSpec()

    def __post_init__(self) -> None:
        if len(self.pulses) != 2:
            raise ValueError("a scenario holds exactly two pulses")


def scenario_from_dict(raw: dict) -> Scenario:
    """Build a Scenario from parsed JSON, with strict key checking."""
    try:
        pulses_raw = raw["pulses"]
    except (KeyError, TypeError) as exc:
        raise ConfigError("scenario must contain a 'pulses' array") from exc
    if not isinstance(pulses_raw, (list, tuple)) or len(pulses_raw) != 2:
        raise ConfigError("'pulses' must be an array of exactly two entries")

    def _build(cls, entry, what):
        if not isinstance(entry, dict):
            raise ConfigError(f"{what} must be a JSON object")
        try:
            return cls(**entry)
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"invalid {what}: {exc}") from exc

    pulses = tuple(_build(LaserPulseSpec, p, "pulse") for p in pulses_raw)
    electron = _build(ElectronSpec, raw.get("electron", {}), "electron")
    solver = _build(SolverSpec, raw.get("solver", {}), "solver")
    output = _build(OutputSpec, raw.get("output", {}), "output")
    return Scenario(pulses=pulses, electron=electron, solver=solver, output=output)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"scenario file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario file is not valid JSON: {exc}") from exc
    return scenario_from_dict(raw)


def _scenario_to_jsonable(obj):
    from dataclasses import asdict, is_dataclass

    if is_dataclass(obj):
        return {k: _scenario_to_jsonable(v) for k, v in asdict(obj).items()}
    if isinstance(obj, (list, tuple)):
        return [_scenario_to_jsonable(v) for v in obj]
    return obj


def scenario_hash(scenario_or_dict) -> str:
    """Deterministic sha256 over the resolved configuration."""
    import hashlib

    payload = _scenario_to_jsonable(scenario_or_dict)
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
