"""Perturbative scattering amplitudes for pulsed standing-wave fields.

First- and second-order transition amplitudes of an electron in the
discrete momentum ladder of counter-propagating pulse pairs.  The time
integrals over the Gaussian envelopes are available three ways:

- closed forms (leading order in the recoil-to-photon frequency ratio,
  exact resonance denominators),
- direct quadrature of the time-ordered double integral, built from
  :class:`Vertex` objects whose prefactors come straight from the
  field decomposition in :mod:`kdsim.fields`,
- the asymptotic (stationary-envelope) limit of the inner integral.

Keeping the routes separate lets each one certify the others; the
quadrature path carries an error estimate and refuses to return a
number it cannot back (:class:`AmplitudeAccuracyError`).

All second-order processes here share one structure: two vertices with
photon-momentum steps ``delta_n`` and frequency multiples
``omega_multiple``, summed over both time orderings.  The leading 1/w
parts of the two orderings cancel, leaving amplitudes proportional to
the recoil frequency w_R = hbar k^2 / 2m -- the small parameter that
makes these processes slow compared to ordinary diffraction.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from scipy.integrate import quad
from scipy.special import wofz

from .core import CONST
from .fields import fourier_terms, term_dict, two_color_field

__all__ = [
    "AmplitudeAccuracyError",
    "Vertex",
    "ProcessAmplitude",
    "OPERATOR_KINDS",
    "SPIN_ACTIONS",
    "gaussian_phase_integral",
    "incomplete_phase_integral",
    "double_phase_integral",
    "first_order_amplitude",
    "second_order_amplitude",
    "ladder_detuning",
    "recoil_frequency",
    "vertex_a_squared",
    "vertex_p_dot_a",
    "vertex_mu_dot_b",
    "regular_kd_amplitude",
    "skd_amplitude",
    "depolarizer_amplitude",
    "two_color_kd_amplitude",
    "estimate_first_order",
    "estimate_second_order",
    "interaction_norms",
    "spurious_ratios",
    "larmor_probability",
]

OPERATOR_KINDS = ("a_squared", "p_dot_a", "mu_dot_b")
SPIN_ACTIONS = ("none", "raise", "lower")

# quadrature error budget, relative to the assembled amplitude
_REL_ERR_TOL = 1e-6
# half-width of the outer integration window in units of tau
_WINDOW = 8.0


class AmplitudeAccuracyError(RuntimeError):
    """Quadrature error estimate exceeds the accuracy contract."""

    def __init__(self, process: str, relative_error: float, tol: float):
        self.process = process
        self.relative_error = relative_error
        self.tol = tol
        super().__init__(
            f"{process}: quadrature error estimate {relative_error:.2e} "
            f"exceeds tolerance {tol:.2e}"
        )


# -- phase integrals ----------------------------------------------------------


def gaussian_phase_integral(omega: float, tau: float, sigma: float = 1.0) -> complex:
    """Full-line integral of exp(i*omega*t) * exp(-sigma*t^2/tau^2).

    Equals tau*sqrt(pi/sigma)*exp(-omega^2 tau^2 / (4 sigma)); real and
    positive, returned as complex for uniformity with the incomplete
    integral.
    """
    if tau <= 0.0 or sigma <= 0.0:
        raise ValueError("tau and sigma must be > 0")
    return complex(tau * math.sqrt(math.pi / sigma)
                   * math.exp(-(omega * tau) ** 2 / (4.0 * sigma)))


def _erfcx_tail(omega: float, tau: float, sigma: float, t: float) -> complex:
    """exp(-x^2) * erfcx(-x + i beta) evaluated stably for t <= 0.

    This is F(t) * exp(-i omega t) / pref with pref = (tau/2) sqrt(pi/sigma);
    erfcx(z) = wofz(i z) keeps the argument in the upper half plane where
    the Faddeeva function is well conditioned.
    """
    rs = math.sqrt(sigma)
    x = rs * t / tau
    beta = omega * tau / (2.0 * rs)
    return math.exp(-x * x) * wofz(-beta - 1j * x)


def incomplete_phase_integral(omega: float, tau: float, sigma: float,
                              t_upper: float, method: str = "auto",
                              threshold: float = 50.0) -> complex:
    """Integral of exp(i*omega*t) exp(-sigma*t^2/tau^2) from -inf to t_upper.

    ``method='exact'`` evaluates the closed form through the scaled
    complementary error function; ``'asymptotic'`` uses the
    integration-by-parts limit (-i/omega) exp(i omega t) exp(-sigma t^2/tau^2),
    valid for |omega|*tau >> 1.  ``'auto'`` picks the asymptotic branch
    when |omega|*tau exceeds ``threshold``.
    """
    if tau <= 0.0 or sigma <= 0.0:
        raise ValueError("tau and sigma must be > 0")
    if method == "auto":
        method = "asymptotic" if abs(omega) * tau > threshold else "exact"
    if method == "asymptotic":
        if omega == 0.0:
            raise ValueError("asymptotic form undefined at omega = 0")
        return (-1j / omega) * cmath.exp(1j * omega * t_upper) \
            * math.exp(-sigma * t_upper ** 2 / tau ** 2)
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    pref = 0.5 * tau * math.sqrt(math.pi / sigma)
    if t_upper <= 0.0:
        return pref * cmath.exp(1j * omega * t_upper) \
            * _erfcx_tail(omega, tau, sigma, t_upper)
    # reflection: the tail from t_upper to +inf is the conjugate of the
    # head of the mirrored integral, so both branches stay well conditioned
    g = gaussian_phase_integral(omega, tau, sigma)
    tail = pref * cmath.exp(1j * omega * t_upper) \
        * _erfcx_tail(omega, tau, sigma, -t_upper).conjugate()
    return g - tail


def _osc_quad(f, a: float, b: float, freq: float) -> tuple[complex, float]:
    """Integrate exp(i*freq*t) * f(t) over [a, b] for smooth complex f."""
    if abs(freq) * (b - a) < 30.0:
        re, er = quad(lambda t: (cmath.exp(1j * freq * t) * f(t)).real,
                      a, b, limit=200, epsabs=1e-300, epsrel=1e-12,
                      full_output=False)
        im, ei = quad(lambda t: (cmath.exp(1j * freq * t) * f(t)).imag,
                      a, b, limit=200, epsabs=1e-300, epsrel=1e-12,
                      full_output=False)
        return re + 1j * im, er + ei
    out = []
    errs = 0.0
    for part in (lambda t: f(t).real, lambda t: f(t).imag):
        for w in ("cos", "sin"):
            res = quad(part, a, b, weight=w, wvar=freq, limit=300,
                       epsabs=1e-300, epsrel=1e-13, full_output=1)
            out.append(res[0])
            errs += res[1]
    rc, rs, ic, is_ = out
    return (rc - is_) + 1j * (rs + ic), errs


def _double_phase(omega_in: float, omega_out: float, tau: float,
                  power_in: int, power_out: int) -> tuple[complex, float]:
    """Time-ordered double envelope integral with phase frequencies.

    J = int dt2 exp(i w_out t2) env^p_out(t2)
            int_{-inf}^{t2} dt1 exp(i w_in t1) env^p_in(t1)
    with env(t) = exp(-t^2/tau^2).  The inner integral is exact; the
    outer integrand is split into a smooth part (oscillatory quadrature
    at the total detuning w_in + w_out) plus the saturated inner-integral
    plateau, which integrates in closed form.  Returns (value, error
    estimate).
    """
    s1, s2 = float(power_in), float(power_out)
    pref = 0.5 * tau * math.sqrt(math.pi / s1)
    rs1 = math.sqrt(s1)
    delta = omega_in + omega_out
    lim = _WINDOW * tau

    def f_left(t):
        # env^p_out * F_in(t) e^{-i w_in t}, smooth branch for t <= 0
        return math.exp(-s2 * (t / tau) ** 2) * pref \
            * _erfcx_tail(omega_in, tau, s1, t)

    def f_right(t):
        # same minus the saturation plateau G_in, smooth for t >= 0
        return -math.exp(-s2 * (t / tau) ** 2) * pref \
            * _erfcx_tail(omega_in, tau, s1, -t).conjugate()

    val_l, err_l = _osc_quad(f_left, -lim, 0.0, delta)
    val_r, err_r = _osc_quad(f_right, 0.0, lim, delta)
    total = val_l + val_r
    err = err_l + err_r

    g_in = gaussian_phase_integral(omega_in, tau, s1).real
    if g_in != 0.0:
        # plateau piece: G_in * int_0^inf e^{i w_out t} env^p_out dt
        tail = gaussian_phase_integral(omega_out, tau, s2) \
            - incomplete_phase_integral(omega_out, tau, s2, 0.0, method="exact")
        total += g_in * tail
        err += abs(g_in) * abs(tail) * 1e-15
    return total, err


def double_phase_integral(omega_in: float, omega_out: float, tau: float,
                          power_in: int = 1, power_out: int = 2) -> complex:
    """Public wrapper around the time-ordered double integral."""
    if tau <= 0.0:
        raise ValueError("tau must be > 0")
    if power_in < 1 or power_out < 1:
        raise ValueError("envelope powers must be >= 1")
    val, err = _double_phase(omega_in, omega_out, tau, power_in, power_out)
    # error must be small against the value, or -- for strongly suppressed
    # detunings, where the true integral is negligible -- against the
    # resonant scale tau^2 of the zero-detuning integral
    floor = tau * tau
    if err > _REL_ERR_TOL * max(abs(val), floor):
        raise AmplitudeAccuracyError("double_phase_integral",
                                     err / max(abs(val), floor), _REL_ERR_TOL)
    return val


# -- vertices -----------------------------------------------------------------


@dataclass(frozen=True)
class Vertex:
    """One interaction-picture coupling of the momentum ladder.

    ``amplitude_prefactor`` is the matrix element in joules; the
    time dependence it multiplies is
    exp(-i*omega_multiple*w0*t) * exp(-envelope_power*t^2/tau^2),
    and the spatial factor steps the ladder by ``delta_n`` photon
    momenta.  ``spin_action`` records what the vertex does to the spin.
    """

    operator_kind: str
    delta_n: int
    omega_multiple: int
    spin_action: str
    amplitude_prefactor: complex
    envelope_power: int

    def __post_init__(self) -> None:
        if self.operator_kind not in OPERATOR_KINDS:
            raise ValueError(f"unknown operator kind {self.operator_kind!r}")
        if self.spin_action not in SPIN_ACTIONS:
            raise ValueError(f"unknown spin action {self.spin_action!r}")
        if (self.operator_kind == "mu_dot_b") != (self.spin_action != "none"):
            raise ValueError("spin action is carried by mu_dot_b vertices only")
        expected = 2 if self.operator_kind == "a_squared" else 1
        if self.envelope_power != expected:
            raise ValueError(
                f"{self.operator_kind} vertex needs envelope power {expected}")


def recoil_frequency(k: float) -> float:
    """Single-photon recoil frequency hbar k^2 / 2m."""
    return CONST.hbar * k * k / (2.0 * CONST.m)


def ladder_detuning(n_from: int, n_to: int, omega_multiple: int,
                    omega: float, recoil: float) -> float:
    """Interaction-picture exponent frequency of one vertex.

    (kinetic energy change)/hbar minus the photon frequency carried by
    the vertex: (n_to^2 - n_from^2) * w_R - omega_multiple * w0.
    """
    return (n_to * n_to - n_from * n_from) * recoil - omega_multiple * omega


def _term_amplitude(field, which: str, delta_n: int, m: int) -> complex:
    d = term_dict(fourier_terms(field, which))
    try:
        return d[(delta_n, m)]
    except KeyError:
        raise ValueError(
            f"field has no {which} component at (delta_n={delta_n}, m={m})"
        ) from None


def vertex_a_squared(field, delta_n: int, omega_multiple: int) -> Vertex:
    """Ponderomotive vertex q^2 A^2 / 2m for one A^2 Fourier component."""
    amp = _term_amplitude(field, "A_sq", delta_n, omega_multiple)
    pref = CONST.q ** 2 / (2.0 * CONST.m) * amp
    return Vertex("a_squared", delta_n, omega_multiple, "none", pref, 2)


def vertex_p_dot_a(field, delta_n: int, omega_multiple: int,
                   p_x: float) -> Vertex:
    """Momentum coupling -(q/m) p_x A_x for one A_x Fourier component."""
    amp = _term_amplitude(field, "A_x", delta_n, omega_multiple)
    pref = -(CONST.q / CONST.m) * p_x * amp
    return Vertex("p_dot_a", delta_n, omega_multiple, "none", pref, 1)


def vertex_mu_dot_b(field, delta_n: int, omega_multiple: int,
                    spin_action: str) -> Vertex:
    """Spin-flip vertex -mu_B (B_x sigma_x + B_y sigma_y) for one component.

    The flip-down matrix element of one (delta_n, m) component is
    -mu_B (b_x + i b_y); flip-up conjugates the sigma_y part.
    """
    bx = dict(term_dict(fourier_terms(field, "B_x"))).get(
        (delta_n, omega_multiple), 0.0j)
    by = dict(term_dict(fourier_terms(field, "B_y"))).get(
        (delta_n, omega_multiple), 0.0j)
    if spin_action == "lower":
        pref = -CONST.muB * (bx + 1j * by)
    elif spin_action == "raise":
        pref = -CONST.muB * (bx - 1j * by)
    else:
        raise ValueError("mu_dot_b vertex must raise or lower the spin")
    if pref == 0:
        raise ValueError(
            f"field has no spin coupling at (delta_n={delta_n}, "
            f"m={omega_multiple})")
    return Vertex("mu_dot_b", delta_n, omega_multiple, spin_action, pref, 1)


def first_order_amplitude(vertex: Vertex, detuning: float, tau: float) -> complex:
    """Single-vertex transition amplitude -(i/hbar) * pref * G(detuning).

    The envelope integral uses sigma = envelope_power of the vertex, so
    an A^2 vertex (envelope squared) gets the correspondingly narrower
    Gaussian window.
    """
    g = gaussian_phase_integral(detuning, tau, sigma=float(vertex.envelope_power))
    return (-1j / CONST.hbar) * vertex.amplitude_prefactor * g


def second_order_amplitude(v1: Vertex, v2: Vertex, omega_mi: float,
                           omega_fm: float, tau: float) -> complex:
    """Second-order amplitude of the pathway v1 (inner) then v2 (outer).

    omega_mi and omega_fm are the full interaction-picture exponent
    frequencies of the inner and outer vertex (see ladder_detuning).
    Returns (-1/hbar^2) * pref2 * pref1 * J with J the time-ordered
    double envelope integral.
    """
    j = double_phase_integral(omega_mi, omega_fm, tau,
                              v1.envelope_power, v2.envelope_power)
    return -(v2.amplitude_prefactor * v1.amplitude_prefactor
             / CONST.hbar ** 2) * j


# -- pathway assembly ---------------------------------------------------------


def _both_orders(va: Vertex, vb: Vertex, n0: int, omega: float,
                 recoil: float) -> list[tuple]:
    """The two time orderings of a vertex pair acting on rung n0.

    Returns (inner, outer, omega_in, omega_out) tuples; the final rung
    is n0 + va.delta_n + vb.delta_n either way.
    """
    n_f = n0 + va.delta_n + vb.delta_n
    out = []
    for first, second in ((va, vb), (vb, va)):
        n_mid = n0 + first.delta_n
        w_in = ladder_detuning(n0, n_mid, first.omega_multiple, omega, recoil)
        w_out = ladder_detuning(n_mid, n_f, second.omega_multiple, omega,
                                recoil)
        out.append((first, second, w_in, w_out))
    return out


def _pathway_sum(pathways, tau: float, process: str) -> complex:
    """Coherent quadrature sum over (inner, outer, w_in, w_out) pathways."""
    total = 0.0j
    err = 0.0
    for v1, v2, w_in, w_out in pathways:
        j, ej = _double_phase(w_in, w_out, tau, v1.envelope_power,
                              v2.envelope_power)
        weight = (v2.amplitude_prefactor * v1.amplitude_prefactor
                  / CONST.hbar ** 2)
        total += -weight * j
        err += abs(weight) * ej
    if err > _REL_ERR_TOL * abs(total):
        raise AmplitudeAccuracyError(process, err / abs(total), _REL_ERR_TOL)
    return total


@dataclass(frozen=True)
class ProcessAmplitude:
    """Amplitude, probability, and validity flag of one process."""

    process: str
    amplitude: complex
    probability: float
    method: str
    breakdown: bool


def _result(process: str, amplitude: complex, method: str) -> ProcessAmplitude:
    prob = abs(amplitude) ** 2
    return ProcessAmplitude(process=process, amplitude=amplitude,
                            probability=prob, method=method,
                            breakdown=prob > 0.1)


def _check_args(intensity: float, wavelength: float, tau: float) -> None:
    if intensity < 0.0:
        raise ValueError("intensity must be >= 0")
    if wavelength <= 0.0:
        raise ValueError("wavelength must be > 0")
    if tau < 0.0:
        raise ValueError("tau must be >= 0")


def _classical_a0(intensity: float, omega: float) -> float:
    return math.sqrt(2.0 * intensity / (CONST.c * CONST.eps0)) / omega


# -- processes ----------------------------------------------------------------


def regular_kd_amplitude(intensity: float, wavelength: float = 1.064e-6,
                         tau: float = 1e-10,
                         method: str = "closed_form") -> ProcessAmplitude:
    """First-order two-photon diffraction in an equal-frequency pair.

    The stationary +/-2 hbar k grating of the ponderomotive potential
    transfers population at first order; the amplitude is
    -i sqrt(pi/2) q^2 I tau / (hbar m c eps0 w^2), growing linearly in
    intensity and duration.
    """
    _check_args(intensity, wavelength, tau)
    if method not in ("closed_form", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if tau == 0.0 or intensity == 0.0:
        return _result("regular_kd", 0.0j, method)
    omega = 2.0 * math.pi * CONST.c / wavelength
    if method == "closed_form":
        amp = -1j * math.sqrt(math.pi / 2.0) * CONST.q ** 2 * intensity \
            * tau / (CONST.hbar * CONST.m * CONST.c * CONST.eps0 * omega ** 2)
        return _result("regular_kd", amp, method)
    # quadrature: same grating vertex, numeric envelope integral
    a0 = _classical_a0(intensity, omega)
    vertex = CONST.q ** 2 * a0 ** 2 / (2.0 * CONST.m)
    env2, err = quad(lambda t: math.exp(-2.0 * (t / tau) ** 2),
                     -_WINDOW * tau, _WINDOW * tau,
                     limit=200, epsabs=1e-300, epsrel=1e-12)
    amp = (-1j / CONST.hbar) * vertex * env2
    if err > _REL_ERR_TOL * env2:
        raise AmplitudeAccuracyError("regular_kd", err / env2, _REL_ERR_TOL)
    return _result("regular_kd", amp, method)


def _skd_families(field, polarization: str) -> list[tuple[Vertex, Vertex]]:
    """Vertex pairs taking (n=+2, up) to (n=-2, down)."""
    fams = [(vertex_mu_dot_b(field, -1, -1, "lower"),
             vertex_a_squared(field, -3, 1))]
    if polarization == "linear_y":
        fams.append((vertex_mu_dot_b(field, -2, 2, "lower"),
                     vertex_a_squared(field, -2, -2)))
    return fams


def skd_amplitude(intensity: float, wavelength: float = 1.064e-6,
                  tau: float = 1e-10, method: str = "closed_form",
                  polarization: str = "circular") -> ProcessAmplitude:
    """Spin-flip diffraction (n=+2, up) -> (n=-2, down) in a two-color pair.

    One photon-spin exchange with the fundamental plus a three-momentum
    ponderomotive cross kick; the two time orderings nearly cancel,
    leaving an amplitude proportional to the recoil frequency.  In
    linear polarization a second family (spin exchange with the doubled
    beam) adds a 2 w_R / w^2 weight to the circular family's 6 w_R / w^2,
    scaling the probability by 8/9 relative to circular under the
    equal-A0 convention.
    """
    _check_args(intensity, wavelength, tau)
    if method not in ("closed_form", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if polarization not in ("circular", "linear_y"):
        raise ValueError("skd runs circular or linear_y")
    if tau == 0.0 or intensity == 0.0:
        return _result("skd", 0.0j, method)
    omega = 2.0 * math.pi * CONST.c / wavelength
    k = omega / CONST.c
    wr = recoil_frequency(k)
    a0 = _classical_a0(intensity, omega)

    if method == "quadrature":
        field = two_color_field(intensity, wavelength, tau, polarization)
        pathways = []
        for vm, va in _skd_families(field, polarization):
            pathways.extend(_both_orders(vm, va, 2, omega, wr))
        return _result("skd", _pathway_sum(pathways, tau, "skd"), method)

    g = tau * math.sqrt(math.pi / 3.0)
    if polarization == "circular":
        v_mu = -CONST.muB * k * a0 / math.sqrt(2.0)
        v_a = CONST.q ** 2 * a0 ** 2 / (4.0 * CONST.m)
        j_sum = -1j * g * 6.0 * wr / (omega ** 2 - 9.0 * wr ** 2)
        amp = -(v_mu * v_a / CONST.hbar ** 2) * j_sum
    else:
        pref = -1j * CONST.muB * CONST.q ** 2 * k * a0 ** 3 / (8.0 * CONST.m)
        j_sum = -1j * g * (6.0 * wr / (omega ** 2 - 9.0 * wr ** 2)
                           + 2.0 * wr / (omega ** 2 - 4.0 * wr ** 2))
        amp = -(pref / CONST.hbar ** 2) * j_sum
    return _result("skd", amp, method)


def depolarizer_amplitude(intensity: float, speed: float = 1e7,
                          wavelength: float = 1.064e-6, tau: float = 1e-10,
                          method: str = "closed_form") -> ProcessAmplitude:
    """Spin flip without net momentum transfer, (n, up) -> (n, down).

    Each beam contributes an emit/absorb pair of one spin exchange and
    one p.A kick; the doubled beam enters with twice the weight and the
    opposite sign, so the total equals minus the fundamental's own term
    under the equal-A0 convention.  Requires a transverse velocity
    component along the circular polarization plane (p_x).
    """
    _check_args(intensity, wavelength, tau)
    if speed < 0.0:
        raise ValueError("speed must be >= 0")
    if method not in ("closed_form", "quadrature"):
        raise ValueError(f"unknown method {method!r}")
    if tau == 0.0 or intensity == 0.0 or speed == 0.0:
        return _result("depolarizer", 0.0j, method)
    omega = 2.0 * math.pi * CONST.c / wavelength
    k = omega / CONST.c
    wr = recoil_frequency(k)
    p_x = CONST.m * speed
    n0 = 2

    if method == "quadrature":
        field = two_color_field(intensity, wavelength, tau, "circular")
        fam_lo = (vertex_mu_dot_b(field, -1, -1, "lower"),
                  vertex_p_dot_a(field, 1, 1, p_x))
        fam_hi = (vertex_mu_dot_b(field, 2, -2, "lower"),
                  vertex_p_dot_a(field, -2, 2, p_x))
        pathways = []
        for vm, vp in (fam_lo, fam_hi):
            pathways.extend(_both_orders(vm, vp, n0, omega, wr))
        return _result("depolarizer",
                       _pathway_sum(pathways, tau, "depolarizer"), method)

    a0 = _classical_a0(intensity, omega)
    g = tau * math.sqrt(math.pi / 2.0)
    base = CONST.muB * CONST.q * k * p_x * a0 ** 2 / CONST.m
    # fundamental: emit (delta_n=-1) then absorb (+1), both orders
    d_lo = (omega - (2 * n0 - 1) * wr) * (omega - (2 * n0 + 1) * wr)
    # doubled beam: absorb (+2) then emit (-2), both orders
    d_hi = (omega + (n0 + 1) * 2 * wr) * (omega + 2.0 * wr)
    amp = -(2j * wr * g / CONST.hbar ** 2) * base * (0.25 / d_lo - 0.5 / d_hi)
    return _result("depolarizer", amp, method)


def _two_color_families(field, p_x: float) -> list[tuple[Vertex, Vertex]]:
    """Vertex pairs taking (n=+2, up) to (n=-2, up) in linear_x fields."""
    return [
        (vertex_p_dot_a(field, -1, -1, p_x), vertex_a_squared(field, -3, 1)),
        (vertex_p_dot_a(field, -2, 2, p_x), vertex_a_squared(field, -2, -2)),
    ]


def two_color_kd_amplitude(intensity: float, speed: float = 1e7,
                           wavelength: float = 1.064e-6, tau: float = 1e-10,
                           method: str = "quadrature") -> ProcessAmplitude:
    """Spin-preserving diffraction (n=+2) -> (n=-2) in a two-color pair.

    Runs with polarization along the electron velocity: one p.A photon
    exchange plus one ponderomotive kick.  The two vertex families and
    their time orderings sum to an amplitude carrying the combined
    weight 14 w_R / w^2, linear in speed and cubic in field amplitude.
    """
    _check_args(intensity, wavelength, tau)
    if speed < 0.0:
        raise ValueError("speed must be >= 0")
    if method not in ("quadrature", "asymptotic"):
        raise ValueError(f"unknown method {method!r}")
    if tau == 0.0 or intensity == 0.0 or speed == 0.0:
        return _result("two_color_kd", 0.0j, method)
    omega = 2.0 * math.pi * CONST.c / wavelength
    k = omega / CONST.c
    wr = recoil_frequency(k)
    p_x = CONST.m * speed

    if method == "quadrature":
        field = two_color_field(intensity, wavelength, tau, "linear_x")
        pathways = []
        for vp, va in _two_color_families(field, p_x):
            pathways.extend(_both_orders(vp, va, 2, omega, wr))
        return _result("two_color_kd",
                       _pathway_sum(pathways, tau, "two_color_kd"), method)

    a0 = _classical_a0(intensity, omega)
    g = tau * math.sqrt(math.pi / 3.0)
    x = CONST.q ** 3 * p_x * a0 ** 3 / (16.0 * CONST.m ** 2 * CONST.hbar ** 2)
    amp = -1j * x * g * (12.0 * wr / (omega ** 2 - 9.0 * wr ** 2)
                         + 2.0 * wr / (omega ** 2 - 4.0 * wr ** 2))
    return _result("two_color_kd", amp, method)


# -- order-of-magnitude estimates and context numbers -------------------------


def estimate_first_order(h_norm: float, tau: float) -> float:
    """Dimensionless first-order amplitude scale ||H|| tau / hbar."""
    if h_norm < 0.0 or tau < 0.0:
        raise ValueError("h_norm and tau must be >= 0")
    return h_norm * tau / CONST.hbar


def estimate_second_order(h1_norm: float, h2_norm: float, omega: float,
                          tau: float, k: float) -> float:
    """Second-order amplitude scale with a recoil-graded resonance.

    ||H1|| ||H2|| tau / (w hbar^2) times the recoil fraction
    hbar k / (m c) left over after the two time orderings cancel.
    """
    if min(h1_norm, h2_norm, tau, k) < 0.0 or omega <= 0.0:
        raise ValueError("norms, tau, k must be >= 0 and omega > 0")
    return h1_norm * h2_norm * tau * k / (omega * CONST.hbar * CONST.m * CONST.c)


def interaction_norms(intensity: float, speed: float,
                      wavelength: float) -> dict:
    """Peak coupling scales: ponderomotive, momentum, and spin terms."""
    omega = 2.0 * math.pi * CONST.c / wavelength
    a0 = _classical_a0(intensity, omega)
    k = omega / CONST.c
    return {
        "ponderomotive": CONST.q ** 2 * a0 ** 2 / (2.0 * CONST.m),
        "momentum": CONST.q * speed * a0,
        "spin": CONST.muB * k * a0,
    }


def spurious_ratios(intensity: float, speed: float = 1e7,
                    wavelength: float = 1e-6, theta: float = 0.0) -> dict:
    """Competing-channel amplitude ratios for the spin-flip experiment.

    ``theta`` is the angle between the electron momentum and the
    polarization axis (0 = aligned, pi/2 = the spin-grating geometry).
    Reported values:

    - first_to_second: ordinary diffraction vs the spin channel when a
      standing-wave contamination at the same intensity is present
      (ponderomotive norm over the two-photon spin scale ||H3||^2/(hbar w)),
    - intensity_isolation: its inverse, the contamination intensity
      fraction that leaves the spurious channel at the spin channel's size,
    - two_color_to_skd: momentum-route vs spin-route amplitude,
      (q v A0 / ...) / (mu_B B0) projected on cos(theta),
    - max_misalignment: largest deviation of the polarization from
      perpendicular to the momentum keeping that ratio below one.
    """
    if intensity < 0 or speed <= 0 or wavelength <= 0:
        raise ValueError("intensity >= 0 and speed, wavelength > 0 required")
    omega = 2.0 * math.pi * CONST.c / wavelength
    k = omega / CONST.c
    norms = interaction_norms(intensity, speed, wavelength)
    h1, h3 = norms["ponderomotive"], norms["spin"]
    first_to_second = h1 * CONST.hbar * omega / h3 ** 2
    ratio0 = CONST.q * speed / (CONST.muB * k)
    return {
        "first_to_second": first_to_second,
        "intensity_isolation": 1.0 / first_to_second,
        "two_color_to_skd": ratio0 * abs(math.cos(theta)),
        "max_misalignment": math.asin(min(1.0, 1.0 / ratio0)),
    }


def larmor_probability(intensity: float, wavelength: float = 8e-7,
                       tau: float = 1e-11) -> float:
    """Photons radiated per pulse by the driven electron.

    Cycle-averaged Larmor power q^2 a^2 / (12 pi eps0 c^3) at the peak
    field acceleration a = q E0 / m, times the pulse duration, per
    photon energy hbar w.
    """
    if intensity < 0 or wavelength <= 0 or tau < 0:
        raise ValueError("invalid larmor inputs")
    omega = 2.0 * math.pi * CONST.c / wavelength
    e0 = math.sqrt(2.0 * intensity / (CONST.c * CONST.eps0))
    accel = CONST.q * e0 / CONST.m
    power = CONST.q ** 2 * accel ** 2 / (12.0 * math.pi * CONST.eps0
                                         * CONST.c ** 3)
    return power * tau / (CONST.hbar * omega)
