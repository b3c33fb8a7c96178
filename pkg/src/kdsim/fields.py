"""Field models for counter-propagating laser pulse pairs.

Two representations of the same plane-wave model are kept deliberately
separate so they can cross-check each other:

- :func:`fourier_terms` decomposes A_x, A_y, A^2 and B into discrete
  travelling-wave components ``amp * exp(i(dn*k0*z - m*w0*t)) *
  exp(-p*t^2/tau^2)``, indexed by photon-momentum step ``dn`` and
  frequency multiple ``m``.  Both the perturbative amplitudes and the
  momentum-ladder solver are driven entirely by these terms.
- :func:`vector_potential` / :func:`electric_field` /
  :func:`magnetic_field` evaluate the same model directly from cosine
  closed forms, never touching the term lists.

The envelope is a function of time only (pulses much longer than the
interaction region), which is what makes the discrete decomposition
exact rather than approximate.

By default the frequency-doubled pulse of a two-color pair carries four
times the fundamental intensity so that both beams have the same peak
vector potential A0; all closed-form amplitudes assume this equal-A0
convention.

For the classical tracer, :class:`ParaxialPulse` and :func:`paraxial_EB`
provide a focused Gaussian beam (fundamental mode, y-polarized) with
spatial envelope, wavefront curvature, Gouy phase, and a travelling
temporal envelope.  Its E and B come from exact derivatives of the same
A_y expression, so div B vanishes identically.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .core import CONST, LaserPulseSpec

__all__ = [
    "FourierTerm",
    "FieldModel",
    "TwoColorField",
    "two_color_field",
    "standing_wave_pair",
    "fourier_terms",
    "term_dict",
    "term_sum",
    "vector_potential",
    "electric_field",
    "magnetic_field",
    "ParaxialPulse",
    "paraxial_params",
    "paraxial_fields",
    "paraxial_EB",
]

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class FourierTerm:
    """One travelling-wave component of a field quantity.

    Contributes ``amplitude * exp(i*(delta_n*k0*z - omega_multiple*w0*t))
    * exp(-envelope_power * t^2/tau^2)`` where k0, w0, tau belong to the
    owning field model.  Vector quantities put their amplitude in the
    matching component slot (A_x and B_x in ``amplitude_x``, A_y and B_y
    in ``amplitude_y``); the scalar A^2 uses ``amplitude_x``.  Term lists
    always contain the conjugate partner of every component, so their
    sum is real.
    """

    amplitude_x: complex
    amplitude_y: complex
    delta_n: int
    omega_multiple: int
    envelope_power: int = 1

    @property
    def amplitude(self) -> complex:
        """The populated component slot (exactly one is nonzero)."""
        return self.amplitude_y if self.amplitude_x == 0 else self.amplitude_x


@dataclass(frozen=True)
class FieldModel:
    """A set of pulses sharing one fundamental frequency and duration."""

    pulses: tuple

    def __post_init__(self) -> None:
        if not self.pulses:
            raise ValueError("FieldModel needs at least one pulse")
        wl0 = self.pulses[0].base_wavelength
        tau0 = self.pulses[0].duration
        for p in self.pulses:
            if not isinstance(p, LaserPulseSpec):
                raise TypeError("pulses must be LaserPulseSpec instances")
            if p.base_wavelength != wl0:
                raise ValueError("pulses must share one base wavelength")
            if p.duration != tau0:
                raise ValueError("pulses must share one duration")

    @property
    def base_omega(self) -> float:
        return 2.0 * math.pi * CONST.c / self.pulses[0].base_wavelength

    @property
    def base_k(self) -> float:
        return self.base_omega / CONST.c

    @property
    def tau(self) -> float:
        return self.pulses[0].duration


@dataclass(frozen=True)
class TwoColorField:
    """Counter-propagating fundamental (+z) and second harmonic (-z)."""

    pulse_lo: LaserPulseSpec
    pulse_hi: LaserPulseSpec

    def __post_init__(self) -> None:
        lo, hi = self.pulse_lo, self.pulse_hi
        if lo.harmonic != 1 or hi.harmonic != 2:
            raise ValueError("pulse_lo must be harmonic 1 and pulse_hi harmonic 2")
        if lo.direction != "plus_z" or hi.direction != "minus_z":
            raise ValueError("pulse_lo travels along +z, pulse_hi along -z")
        if lo.base_wavelength != hi.base_wavelength:
            raise ValueError("pulses must share one base wavelength")
        if lo.duration != hi.duration:
            raise ValueError("pulses must share one duration")

    @property
    def pulses(self) -> tuple:
        return (self.pulse_lo, self.pulse_hi)

    @property
    def lo(self) -> LaserPulseSpec:
        return self.pulse_lo

    @property
    def hi(self) -> LaserPulseSpec:
        return self.pulse_hi

    @property
    def base_omega(self) -> float:
        return 2.0 * math.pi * CONST.c / self.pulse_lo.base_wavelength

    @property
    def base_k(self) -> float:
        return self.base_omega / CONST.c

    @property
    def tau(self) -> float:
        return self.pulse_lo.duration


def two_color_field(intensity: float, base_wavelength: float = 1.064e-6,
                    duration: float = 1e-11, polarization: str = "linear_y",
                    intensity_hi: float | None = None,
                    carrier_phase_lo: float = 0.0,
                    carrier_phase_hi: float = 0.0) -> TwoColorField:
    """Standard two-color setup: fundamental along +z, doubled along -z.

    ``intensity`` is the fundamental's peak intensity; the doubled beam
    defaults to ``4 * intensity`` so that both pulses carry the same
    peak vector potential A0 (amplitude-matched pair).  Pass
    ``intensity_hi`` explicitly for an unbalanced pair.

    ``polarization='circular'`` selects co-rotating circular beams
    (both left-handed about +z in the lab frame), which is the
    configuration whose ponderomotive cross terms carry 3 units of
    photon momentum per frequency quantum.
    """
    if polarization == "circular":
        pol_lo = pol_hi = "circular_plus"
    else:
        pol_lo = pol_hi = polarization
    if intensity_hi is None:
        intensity_hi = 4.0 * intensity
    lo = LaserPulseSpec(intensity=intensity, base_wavelength=base_wavelength,
                        harmonic=1, duration=duration, polarization=pol_lo,
                        direction="plus_z", carrier_phase=carrier_phase_lo)
    hi = LaserPulseSpec(intensity=intensity_hi, base_wavelength=base_wavelength,
                        harmonic=2, duration=duration, polarization=pol_hi,
                        direction="minus_z", carrier_phase=carrier_phase_hi)
    return TwoColorField(pulse_lo=lo, pulse_hi=hi)


def standing_wave_pair(intensity: float, wavelength: float = 1.064e-6,
                       duration: float = 1e-11,
                       polarization: str = "linear_y") -> FieldModel:
    """Equal-frequency counter-propagating pair (ordinary standing wave)."""
    mk = lambda d: LaserPulseSpec(intensity=intensity, base_wavelength=wavelength,
                                  harmonic=1, duration=duration,
                                  polarization=polarization, direction=d)
    return FieldModel(pulses=(mk("plus_z"), mk("minus_z")))


# -- discrete decomposition -------------------------------------------------


def _polarization_vector(pulse: LaserPulseSpec) -> tuple[complex, complex]:
    """Complex (ex, ey) such that A = Re{ A0 (ex, ey) e^{i theta} }."""
    if pulse.polarization == "linear_x":
        return (1.0 + 0.0j, 0.0j)
    if pulse.polarization == "linear_y":
        return (0.0j, 1.0 + 0.0j)
    s = 1.0 if pulse.polarization == "circular_plus" else -1.0
    return (1.0 / _SQRT2 + 0.0j, 1j * s / _SQRT2)


def _component_raw(model, comp: int) -> list[tuple[int, int, complex]]:
    """(delta_n, m, amplitude) triples of A_x (comp 0) or A_y (comp 1)."""
    out = []
    for p in model.pulses:
        s = 1 if p.direction == "plus_z" else -1
        h = p.harmonic
        e_vec = _polarization_vector(p)
        amp = 0.5 * p.a_peak * e_vec[comp] * cmath.exp(1j * p.carrier_phase)
        if amp != 0:
            out.append((s * h, h, amp))
            out.append((-s * h, -h, amp.conjugate()))
    return out


def _merged(raw: list[tuple[int, int, complex]], slot: int,
            envelope_power: int) -> list[FourierTerm]:
    acc: dict[tuple[int, int], complex] = {}
    for dn, m, a in raw:
        acc[(dn, m)] = acc.get((dn, m), 0.0j) + a
    if not acc:
        return []
    cutoff = 1e-14 * max(abs(a) for a in acc.values())
    out = []
    for (dn, m), a in sorted(acc.items()):
        if abs(a) <= cutoff:
            continue
        ax, ay = (a, 0.0j) if slot == 0 else (0.0j, a)
        out.append(FourierTerm(amplitude_x=ax, amplitude_y=ay, delta_n=dn,
                               omega_multiple=m, envelope_power=envelope_power))
    return out


def fourier_terms(model, which: str) -> list[FourierTerm]:
    """Decompose a field quantity of the model into travelling waves.

    ``which`` is one of ``A_x``, ``A_y``, ``A_sq`` (= A_x^2 + A_y^2,
    envelope power 2), ``B_x`` or ``B_y``.
    """
    if which == "A_x":
        return _merged(_component_raw(model, 0), 0, 1)
    if which == "A_y":
        return _merged(_component_raw(model, 1), 1, 1)

    if which == "A_sq":
        prod = []
        for comp in (0, 1):
            raw = _component_raw(model, comp)
            for dn_i, m_i, a_i in raw:
                for dn_j, m_j, a_j in raw:
                    prod.append((dn_i + dn_j, m_i + m_j, a_i * a_j))
        return _merged(prod, 0, 2)

    if which in ("B_x", "B_y"):
        # B = curl(A) for A transverse to z:
        #   B_x = -dA_y/dz, B_y = +dA_x/dz
        comp = 1 if which == "B_x" else 0
        sign = -1.0 if which == "B_x" else 1.0
        k0 = model.base_k
        raw = [(dn, m, sign * 1j * dn * k0 * a)
               for dn, m, a in _component_raw(model, comp) if dn != 0]
        return _merged(raw, 0 if which == "B_x" else 1, 1)

    raise ValueError(f"unknown field quantity {which!r}")


def term_dict(terms: list[FourierTerm]) -> dict[tuple[int, int], complex]:
    """Map (delta_n, omega_multiple) -> amplitude; keys must be unique."""
    out: dict[tuple[int, int], complex] = {}
    for t in terms:
        key = (t.delta_n, t.omega_multiple)
        if key in out:
            raise ValueError(f"duplicate term {key}")
        out[key] = t.amplitude
    return out


def term_sum(terms: list[FourierTerm], model, z, t):
    """Evaluate a term list at (z, t); real up to roundoff by construction."""
    z = np.asarray(z, dtype=float)
    t = np.asarray(t, dtype=float)
    k0, w0, tau = model.base_k, model.base_omega, model.tau
    total = np.zeros(np.broadcast(z, t).shape, dtype=complex)
    for trm in terms:
        phase = np.exp(1j * (trm.delta_n * k0 * z - trm.omega_multiple * w0 * t))
        env = np.exp(-trm.envelope_power * (t / tau) ** 2)
        total = total + trm.amplitude * phase * env
    return total


# -- direct evaluation (independent of the decomposition) --------------------


def _direct_components(model, z, t):
    """Per-pulse cosine evaluation; yields (pulse, theta, env, s)."""
    z = np.asarray(z, dtype=float)
    t = np.asarray(t, dtype=float)
    for p in model.pulses:
        s = 1.0 if p.direction == "plus_z" else -1.0
        theta = s * p.k * z - p.omega * t + p.carrier_phase
        env = np.exp(-((t / p.duration) ** 2))
        yield p, theta, env, s


def vector_potential(model, z, t):
    """(A_x, A_y) of the plane-wave model at position z, time t."""
    shape = np.broadcast(np.asarray(z, float), np.asarray(t, float)).shape
    ax = np.zeros(shape)
    ay = np.zeros(shape)
    for p, theta, env, _s in _direct_components(model, z, t):
        a = p.a_peak
        if p.polarization == "linear_x":
            ax += a * np.cos(theta) * env
        elif p.polarization == "linear_y":
            ay += a * np.cos(theta) * env
        else:
            sc = 1.0 if p.polarization == "circular_plus" else -1.0
            ax += a / _SQRT2 * np.cos(theta) * env
            ay += -sc * a / _SQRT2 * np.sin(theta) * env
    return ax, ay


def electric_field(model, z, t):
    """(E_x, E_y) = -dA/dt, including the envelope derivative."""
    shape = np.broadcast(np.asarray(z, float), np.asarray(t, float)).shape
    ex = np.zeros(shape)
    ey = np.zeros(shape)
    t_arr = np.asarray(t, dtype=float)
    for p, theta, env, _s in _direct_components(model, z, t):
        a, w = p.a_peak, p.omega
        denv = -2.0 * t_arr / p.duration**2 * env
        if p.polarization == "linear_x":
            ex += -a * (w * np.sin(theta) * env + np.cos(theta) * denv)
        elif p.polarization == "linear_y":
            ey += -a * (w * np.sin(theta) * env + np.cos(theta) * denv)
        else:
            sc = 1.0 if p.polarization == "circular_plus" else -1.0
            b = a / _SQRT2
            ex += -b * (w * np.sin(theta) * env + np.cos(theta) * denv)
            ey += sc * b * (-w * np.cos(theta) * env + np.sin(theta) * denv)
    return ex, ey


def magnetic_field(model, z, t):
    """(B_x, B_y) = (-dA_y/dz, +dA_x/dz)."""
    shape = np.broadcast(np.asarray(z, float), np.asarray(t, float)).shape
    bx = np.zeros(shape)
    by = np.zeros(shape)
    for p, theta, env, s in _direct_components(model, z, t):
        a, kk = p.a_peak, s * p.k
        if p.polarization == "linear_x":
            by += -a * kk * np.sin(theta) * env
        elif p.polarization == "linear_y":
            bx += a * kk * np.sin(theta) * env
        else:
            sc = 1.0 if p.polarization == "circular_plus" else -1.0
            b = a / _SQRT2
            bx += sc * b * kk * np.cos(theta) * env
            by += -b * kk * np.sin(theta) * env
    return bx, by


# -- focused beam for the classical tracer -----------------------------------


@dataclass(frozen=True)
class ParaxialPulse:
    """Focused Gaussian beam built on a plane-wave pulse spec.

    The pulse must be y-polarized (the mode implemented here).  ``waist``
    defaults to the pulse's focal-spot radius.  The temporal envelope
    exp(-((zeta - c(t - focus_time))/(c tau))^2) travels with the pulse,
    where zeta is the distance past the focal plane ``focus_position``
    along the propagation direction.
    """

    pulse: LaserPulseSpec
    waist: float | None = None
    focus_time: float = 0.0
    focus_position: float = 0.0

    def __post_init__(self) -> None:
        if not isinstance(self.pulse, LaserPulseSpec):
            raise TypeError("pulse must be a LaserPulseSpec")
        if self.pulse.polarization != "linear_y":
            raise ValueError("focused beam model is y-polarized only")
        if self.waist is None:
            object.__setattr__(self, "waist", self.pulse.waist)
        if self.waist <= 0:
            raise ValueError("waist must be > 0")
        wavelength = self.pulse.base_wavelength / self.pulse.harmonic
        if self.waist < wavelength:
            raise ValueError("waist below one wavelength breaks the paraxial model")

    @property
    def k(self) -> float:
        return self.pulse.k

    @property
    def omega(self) -> float:
        return self.pulse.omega

    @property
    def a_peak(self) -> float:
        return self.pulse.a_peak

    @property
    def a0(self) -> float:
        return self.pulse.a0_dimensionless

    @property
    def duration(self) -> float:
        return self.pulse.duration

    @property
    def direction(self) -> str:
        return self.pulse.direction

    @property
    def carrier_phase(self) -> float:
        return self.pulse.carrier_phase

    @property
    def rayleigh_range(self) -> float:
        return 0.5 * self.k * self.waist**2


_P_K, _P_W, _P_A0, _P_ZR, _P_TAU, _P_TF, _P_ZF, _P_S, _P_CEP = range(9)


def paraxial_params(pulses) -> np.ndarray:
    """Pack ParaxialPulse parameters for the compiled field kernel."""
    out = np.empty((len(pulses), 9))
    for i, p in enumerate(pulses):
        out[i] = (p.k, p.omega, p.a_peak, p.rayleigh_range, p.duration,
                  p.focus_time, p.focus_position,
                  1.0 if p.direction == "plus_z" else -1.0, p.carrier_phase)
    return out


@njit(cache=True, nogil=True)
def _paraxial_eb(params, x, y, z, t):
    """Sum (E_y, B_x, B_z) of all pulses at one space-time point.

    A_y = Re{ u(rho, zeta) exp(i(k zeta - w (t-t_f) + cep)) } * env with
    the fundamental-mode complex profile
    u = A0 * g * exp(-k rho^2 g / (2 zR)),  g = 1/(1 + i zeta/zR),
    and env = exp(-((zeta - c (t-t_f)) / (c tau))^2).
    E = -dA/dt and B = curl A are exact derivatives of this expression.
    """
    c = 299792458.0
    ey = 0.0
    bx = 0.0
    bz = 0.0
    for i in range(params.shape[0]):
        k = params[i, _P_K]
        w = params[i, _P_W]
        a0 = params[i, _P_A0]
        zr = params[i, _P_ZR]
        tau = params[i, _P_TAU]
        tf = params[i, _P_TF]
        zf = params[i, _P_ZF]
        s = params[i, _P_S]
        cep = params[i, _P_CEP]

        tt = t - tf
        zeta = s * (z - zf)
        rho2 = x * x + y * y

        g = 1.0 / (1.0 + 1j * zeta / zr)
        u = a0 * g * np.exp(-0.5 * k * rho2 * g / zr)
        phase = np.exp(1j * (k * zeta - w * tt + cep))

        lag = zeta - c * tt
        env = math.exp(-(lag / (c * tau)) ** 2)
        core = u * phase * env

        # d/dzeta of u/u and of the envelope exponent
        du = (-1j * g / zr) * (1.0 - 0.5 * k * rho2 * g / zr)
        denv_dzeta = -2.0 * lag / (c * tau) ** 2
        denv_dt = 2.0 * lag / (c * tau * tau)

        ey += (core * (1j * w - denv_dt)).real
        bx += -s * (core * (du + 1j * k + denv_dzeta)).real
        bz += (core * (-k * g * x / zr)).real
    return ey, bx, bz


def paraxial_fields(pulses, x, y, z, t):
    """(E_y, B_x, B_z) of a set of focused pulses; scalar args, SI units."""
    return _paraxial_eb(paraxial_params(pulses), float(x), float(y),
                        float(z), float(t))


def paraxial_EB(pulses, r, t):
    """Full (E, B) 3-vectors of a set of focused pulses at point r, time t.

    E = (0, E_y, 0); B = (B_x, 0, B_z) where B_z is the leading-order
    longitudinal component required by div B = 0.
    """
    x, y, z = (float(v) for v in r)
    ey, bx, bz = _paraxial_eb(paraxial_params(pulses), x, y, z, float(t))
    return np.array([0.0, ey, 0.0]), np.array([bx, 0.0, bz])
