import math

import numpy as np
import pytest

from kdsim.core import CONST, LaserPulseSpec, pulse_from_a0
from kdsim.fields import (
    FieldModel,
    FourierTerm,
    ParaxialPulse,
    TwoColorField,
    electric_field,
    fourier_terms,
    magnetic_field,
    paraxial_EB,
    paraxial_fields,
    standing_wave_pair,
    term_dict,
    term_sum,
    two_color_field,
    vector_potential,
)

WL = 1.064e-6
TAU = 1e-11


def _models():
    return {
        "linear_y": two_color_field(1e18, WL, TAU, "linear_y"),
        "linear_x": two_color_field(1e18, WL, TAU, "linear_x"),
        "circular": two_color_field(1e18, WL, TAU, "circular"),
        "mixed_phase": two_color_field(3e17, WL, TAU, "linear_y",
                                       intensity_hi=8e17,
                                       carrier_phase_lo=0.3,
                                       carrier_phase_hi=-1.1),
        "standing": standing_wave_pair(1e17, WL, TAU, "linear_y"),
    }


def _sample_points(rng, n=40):
    z = rng.uniform(-3 * WL, 3 * WL, n)
    t = rng.uniform(-2 * TAU, 2 * TAU, n)
    return z, t


def test_model_invariants():
    lo = LaserPulseSpec(intensity=1e18, base_wavelength=WL, harmonic=1,
                        duration=TAU, direction="plus_z")
    hi = LaserPulseSpec(intensity=1e18, base_wavelength=WL, harmonic=2,
                        duration=TAU, direction="minus_z")
    TwoColorField(pulse_lo=lo, pulse_hi=hi)
    # doubled pulse must run along -z
    hi_bad = LaserPulseSpec(intensity=1e18, base_wavelength=WL, harmonic=2,
                            duration=TAU, direction="plus_z")
    with pytest.raises(ValueError):
        TwoColorField(pulse_lo=lo, pulse_hi=hi_bad)
    # both fundamentals
    lo2 = LaserPulseSpec(intensity=1e18, base_wavelength=WL, harmonic=1,
                         duration=TAU, direction="minus_z")
    with pytest.raises(ValueError):
        TwoColorField(pulse_lo=lo, pulse_hi=lo2)
    # mismatched durations
    hi_tau = LaserPulseSpec(intensity=1e18, base_wavelength=WL, harmonic=2,
                            duration=2 * TAU, direction="minus_z")
    with pytest.raises(ValueError):
        TwoColorField(pulse_lo=lo, pulse_hi=hi_tau)
    # mismatched base wavelengths
    hi_wl = LaserPulseSpec(intensity=1e18, base_wavelength=8e-7, harmonic=2,
                           duration=TAU, direction="minus_z")
    with pytest.raises(ValueError):
        FieldModel(pulses=(lo, hi_wl))
    with pytest.raises(ValueError):
        FieldModel(pulses=())


def test_two_color_accessors():
    f = two_color_field(1e18, WL, TAU, "linear_y")
    assert f.lo.harmonic == 1 and f.lo.direction == "plus_z"
    assert f.hi.harmonic == 2 and f.hi.direction == "minus_z"
    assert f.base_omega == pytest.approx(f.lo.omega, rel=1e-14)
    assert f.hi.omega == pytest.approx(2 * f.base_omega, rel=1e-14)


def test_two_color_default_is_amplitude_matched():
    # the doubled beam carries 4x the intensity so both have the same A0
    f = two_color_field(1e18, WL, TAU, "linear_y")
    assert f.hi.intensity == pytest.approx(4e18, rel=1e-14)
    assert f.hi.a_peak == pytest.approx(f.lo.a_peak, rel=1e-14)
    g = two_color_field(1e18, WL, TAU, "linear_y", intensity_hi=1e18)
    assert g.hi.a_peak == pytest.approx(0.5 * g.lo.a_peak, rel=1e-14)


def test_term_lists_are_real_sums():
    # every term list must carry its own conjugate partners
    for name, model in _models().items():
        for which in ("A_x", "A_y", "A_sq", "B_x", "B_y"):
            terms = fourier_terms(model, which)
            by_key = {(t.delta_n, t.omega_multiple, t.envelope_power):
                      t.amplitude for t in terms}
            for (dn, m, p), amp in by_key.items():
                partner = by_key.get((-dn, -m, p))
                assert partner is not None, (name, which, dn, m)
                assert partner == pytest.approx(amp.conjugate(), rel=1e-12)


def test_fourier_sum_matches_direct_evaluation():
    rng = np.random.default_rng(3)
    z, t = _sample_points(rng)
    for name, model in _models().items():
        ax, ay = vector_potential(model, z, t)
        bx, by = magnetic_field(model, z, t)
        scale_a = max(np.abs(ax).max(), np.abs(ay).max())
        scale_b = max(np.abs(bx).max(), np.abs(by).max())
        for which, ref, scale in (
            ("A_x", ax, scale_a), ("A_y", ay, scale_a),
            ("B_x", bx, scale_b), ("B_y", by, scale_b),
            ("A_sq", ax**2 + ay**2, scale_a**2),
        ):
            got = term_sum(fourier_terms(model, which), model, z, t)
            assert np.abs(got.imag).max() < 1e-12 * scale, (name, which)
            np.testing.assert_allclose(got.real, ref, atol=1e-12 * scale,
                                       err_msg=f"{name}/{which}")


def test_vector_potential_peaks():
    # at z=0, t=0 with zero carrier phase each linear pulse contributes A0
    f = two_color_field(1e18, WL, TAU, "linear_y")
    _, ay = vector_potential(f, 0.0, 0.0)
    assert ay == pytest.approx(f.lo.a_peak + f.hi.a_peak, rel=1e-12)
    ax, _ = vector_potential(f, 0.0, 0.0)
    assert ax == 0.0


def test_two_color_linear_y_potential_terms():
    f = two_color_field(1e18, WL, TAU, "linear_y")
    d = term_dict(fourier_terms(f, "A_y"))
    assert set(d) == {(1, 1), (-1, -1), (-2, 2), (2, -2)}
    assert d[(1, 1)] == pytest.approx(0.5 * f.lo.a_peak, rel=1e-12)
    assert d[(-2, 2)] == pytest.approx(0.5 * f.hi.a_peak, rel=1e-12)
    assert fourier_terms(f, "A_x") == []
    # B_x = -dA_y/dz brings a factor -i*delta_n*k0
    b = term_dict(fourier_terms(f, "B_x"))
    k0 = f.base_k
    assert b[(1, 1)] == pytest.approx(-1j * k0 * 0.5 * f.lo.a_peak, rel=1e-12)
    assert b[(-2, 2)] == pytest.approx(2j * k0 * 0.5 * f.hi.a_peak, rel=1e-12)


def test_circular_ponderomotive_support():
    # co-rotating circular pair: A^2 keeps only the dc part and the
    # three-momentum-unit cross terms at the difference frequency
    f = two_color_field(1e18, WL, TAU, "circular")
    d = term_dict(fourier_terms(f, "A_sq"))
    assert set(d) == {(0, 0), (3, -1), (-3, 1)}
    dc = 0.5 * (f.lo.a_peak**2 + f.hi.a_peak**2)
    assert d[(0, 0)] == pytest.approx(dc, rel=1e-12)
    assert d[(3, -1)] == pytest.approx(0.5 * f.lo.a_peak * f.hi.a_peak,
                                       rel=1e-12)


def test_linear_ponderomotive_support():
    f = two_color_field(1e18, WL, TAU, "linear_y")
    d = term_dict(fourier_terms(f, "A_sq"))
    momentum_to_frequency = {0: 0, 1: -3, -1: 3, 2: 2, -2: -2,
                             3: -1, -3: 1, 4: -4, -4: 4}
    assert set(d) == {(dn, m) for dn, m in momentum_to_frequency.items()}
    assert d[(3, -1)] == pytest.approx(0.5 * f.lo.a_peak * f.hi.a_peak,
                                       rel=1e-12)
    assert d[(2, 2)] == pytest.approx(0.25 * f.lo.a_peak**2, rel=1e-12)


def test_standing_wave_terms():
    f = standing_wave_pair(1e17, WL, TAU, "linear_y")
    d = term_dict(fourier_terms(f, "A_y"))
    assert set(d) == {(1, 1), (-1, -1), (-1, 1), (1, -1)}
    dsq = term_dict(fourier_terms(f, "A_sq"))
    # counter-propagating equal frequencies: +/-2 momentum at dc frequency
    assert (2, 0) in dsq and (-2, 0) in dsq and (0, 0) in dsq
    a0 = f.pulses[0].a_peak
    assert dsq[(2, 0)] == pytest.approx(0.5 * a0 * a0, rel=1e-12)


def test_magnetic_field_direct_against_plane_wave():
    # single +z linear_y pulse: B_x = A0 k sin(kz - wt) * envelope
    p = LaserPulseSpec(intensity=5e17, base_wavelength=WL, harmonic=1,
                       duration=TAU, polarization="linear_y",
                       direction="plus_z")
    f = FieldModel(pulses=(p,))
    rng = np.random.default_rng(5)
    z, t = _sample_points(rng, 25)
    bx, by = magnetic_field(f, z, t)
    ref = p.a_peak * p.k * np.sin(p.k * z - p.omega * t) * np.exp(-(t / TAU) ** 2)
    np.testing.assert_allclose(bx, ref, rtol=0, atol=1e-12 * p.b_peak)
    assert np.abs(by).max() == 0.0


def test_electric_field_envelope_derivative():
    # E = -dA/dt must include the envelope term: check against a
    # numerical time derivative of the vector potential
    f = two_color_field(1e18, WL, TAU, "circular")
    rng = np.random.default_rng(9)
    z, t = _sample_points(rng, 15)
    dt = 1e-22
    ex, ey = electric_field(f, z, t)
    for comp, e_comp in ((0, ex), (1, ey)):
        a_plus = vector_potential(f, z, t + dt)[comp]
        a_minus = vector_potential(f, z, t - dt)[comp]
        num = -(a_plus - a_minus) / (2 * dt)
        np.testing.assert_allclose(e_comp, num, rtol=0,
                                   atol=1e-5 * np.abs(ey).max())


def test_circular_intensity_split():
    # circular pulse: A_x^2 + A_y^2 is envelope-only (no carrier oscillation)
    p = LaserPulseSpec(intensity=1e18, base_wavelength=WL, harmonic=1,
                       duration=TAU, polarization="circular_plus")
    f = FieldModel(pulses=(p,))
    z = np.linspace(-WL, WL, 50)
    ax, ay = vector_potential(f, z, 0.0)
    asq = ax**2 + ay**2
    assert np.ptp(asq) < 1e-12 * asq.max()
    assert asq[0] == pytest.approx(0.5 * p.a_peak**2, rel=1e-12)


# -- focused beam -------------------------------------------------------------


def _focused(a0, harmonic=1, duration=1e-11, waist=25e-6, focus_time=0.0,
             direction="plus_z", carrier_phase=0.0):
    pulse = pulse_from_a0(a0, base_wavelength=1e-6, harmonic=harmonic,
                          duration=duration, direction=direction,
                          carrier_phase=carrier_phase)
    return ParaxialPulse(pulse=pulse, waist=waist, focus_time=focus_time)


def _pulse_pair_si():
    return (
        _focused(0.03, harmonic=1, direction="plus_z", focus_time=2.1e-12),
        _focused(0.02, harmonic=2, direction="minus_z", focus_time=2.1e-12),
    )


def test_paraxial_validation():
    with pytest.raises(ValueError):
        _focused(0.03, waist=0.0)
    with pytest.raises(ValueError):
        _focused(0.03, direction="sideways")
    # waist below one wavelength
    with pytest.raises(ValueError):
        _focused(0.03, waist=5e-7)
    # only y-polarized pulses are supported
    with pytest.raises(ValueError):
        ParaxialPulse(pulse=pulse_from_a0(0.03, polarization="linear_x"))
    p = _focused(0.03)
    assert p.rayleigh_range == pytest.approx(math.pi * 25e-6**2 / 1e-6, rel=1e-12)
    assert p.a_peak == pytest.approx(0.03 * CONST.m * CONST.c / CONST.q, rel=1e-12)
    assert p.a0 == pytest.approx(0.03, rel=1e-12)
    # waist defaults to the pulse's focal-spot radius
    d = ParaxialPulse(pulse=pulse_from_a0(0.03, focus_diameter=1e-4))
    assert d.waist == pytest.approx(5e-5, rel=1e-14)


def test_paraxial_peak_field_at_focus():
    p = _focused(0.03, carrier_phase=-math.pi / 2)
    ey, bx, bz = paraxial_fields([p], 0.0, 0.0, p.focus_position, p.focus_time)
    assert ey == pytest.approx(p.omega * p.a_peak, rel=1e-3)
    assert bz == 0.0
    # travelling wave: B_x in phase with E_y, opposite sign for +z motion
    assert bx == pytest.approx(-p.k * p.a_peak, rel=1e-3)
    assert ey * bx < 0.0
    # the 3-vector wrapper exposes the same numbers in the right slots
    e_vec, b_vec = paraxial_EB([p], (0.0, 0.0, p.focus_position), p.focus_time)
    assert e_vec[1] == ey and e_vec[0] == e_vec[2] == 0.0
    assert b_vec[0] == bx and b_vec[2] == bz and b_vec[1] == 0.0


def test_paraxial_transverse_profile():
    p = _focused(0.03, duration=1e-1, carrier_phase=-math.pi / 2)
    on_axis = paraxial_fields([p], 0.0, 0.0, 0.0, 0.0)[0]
    at_waist = paraxial_fields([p], p.waist, 0.0, 0.0, 0.0)[0]
    assert at_waist / on_axis == pytest.approx(math.exp(-1.0), rel=1e-6)
    far_out = paraxial_fields([p], 6 * p.waist, 0.0, 0.0, 0.0)[0]
    assert abs(far_out) < 1e-12 * abs(on_axis)


def test_paraxial_beam_expansion():
    # amplitude on axis drops by 1/sqrt(2) one Rayleigh range past focus
    p = _focused(0.03, duration=1e-1)
    zr = p.rayleigh_range

    def envelope_amp(z):
        # scan a carrier period for the max to remove phase dependence
        ts = z / CONST.c + np.linspace(0, 2 * math.pi / p.omega, 60)
        return max(abs(paraxial_fields([p], 0.0, 0.0, z, t)[0]) for t in ts)

    ratio = envelope_amp(zr) / envelope_amp(0.0)
    assert ratio == pytest.approx(1 / math.sqrt(2), rel=1e-3)


def test_paraxial_divergence_free():
    pulses = _pulse_pair_si()
    rng = np.random.default_rng(17)
    h = 2e-9
    for _ in range(12):
        x = rng.uniform(-30e-6, 30e-6)
        y = rng.uniform(-30e-6, 30e-6)
        z = rng.uniform(-40e-6, 40e-6)
        t = rng.uniform(0.0, 4e-12)
        dbx = (paraxial_fields(pulses, x + h, y, z, t)[1]
               - paraxial_fields(pulses, x - h, y, z, t)[1]) / (2 * h)
        dbz = (paraxial_fields(pulses, x, y, z + h, t)[2]
               - paraxial_fields(pulses, x, y, z - h, t)[2]) / (2 * h)
        b_scale = max(abs(paraxial_fields(pulses, x, y, z, t)[1]), 1e-30)
        k_max = max(p.k for p in pulses)
        assert abs(dbx + dbz) < 1e-4 * b_scale * k_max + 1e-12


def test_paraxial_electric_divergence_is_paraxial_small():
    # div E = dEy/dy only; it is O(1/(k w0)) relative to k E, vanishing
    # at paraxial order
    pulses = _pulse_pair_si()
    rng = np.random.default_rng(29)
    h = 2e-9
    e_max = max(p.omega * p.a_peak for p in pulses)
    k_max = max(p.k for p in pulses)
    for _ in range(10):
        x = rng.uniform(-6e-6, 6e-6)
        y = rng.uniform(-6e-6, 6e-6)
        z = rng.uniform(-20e-6, 20e-6)
        t = rng.uniform(0.5e-12, 3.5e-12)
        dey = (paraxial_fields(pulses, x, y + h, z, t)[0]
               - paraxial_fields(pulses, x, y - h, z, t)[0]) / (2 * h)
        assert abs(dey) < 5e-3 * k_max * e_max


def test_paraxial_faraday_law():
    # curl E = -dB/dt holds exactly for fields derived from one A_y
    pulses = _pulse_pair_si()
    rng = np.random.default_rng(23)
    h = 2e-9
    ht = 2e-18
    for _ in range(8):
        x = rng.uniform(-20e-6, 20e-6)
        y = rng.uniform(-20e-6, 20e-6)
        z = rng.uniform(-30e-6, 30e-6)
        t = rng.uniform(0.5e-12, 3e-12)
        dey_dz = (paraxial_fields(pulses, x, y, z + h, t)[0]
                  - paraxial_fields(pulses, x, y, z - h, t)[0]) / (2 * h)
        dey_dx = (paraxial_fields(pulses, x + h, y, z, t)[0]
                  - paraxial_fields(pulses, x - h, y, z, t)[0]) / (2 * h)
        dbx_dt = (paraxial_fields(pulses, x, y, z, t + ht)[1]
                  - paraxial_fields(pulses, x, y, z, t - ht)[1]) / (2 * ht)
        dbz_dt = (paraxial_fields(pulses, x, y, z, t + ht)[2]
                  - paraxial_fields(pulses, x, y, z, t - ht)[2]) / (2 * ht)
        e_max = max(p.omega * p.a_peak for p in pulses)
        k_scale = max(p.k for p in pulses) * e_max
        # (curl E)_x = -dEy/dz, (curl E)_z = +dEy/dx
        assert abs(-dey_dz + dbx_dt) < 5e-4 * k_scale
        assert abs(dey_dx + dbz_dt) < 5e-4 * k_scale


def test_paraxial_wide_waist_matches_plane_wave():
    # huge waist on axis -> plane-wave pulse with travelling envelope
    tau = 1e-12
    p = _focused(0.01, duration=tau, waist=2e-3)
    a_si = p.a_peak
    for zt in [(0.0, 0.0), (3e-7, 1e-13), (-2e-7, -4e-13), (1e-6, 8e-13)]:
        z, t = zt
        ey, bx, _ = paraxial_fields([p], 0.0, 0.0, z, t)
        th = p.k * z - p.omega * t
        env = math.exp(-(((z - CONST.c * t) / (CONST.c * tau)) ** 2))
        # A_y = A cos(th) env(z - ct): E = -dA/dt, B_x = -dA/dz
        e_ref = -p.omega * a_si * math.sin(th) * env \
            - a_si * math.cos(th) * 2 * (z - CONST.c * t) / (CONST.c * tau**2) * env
        b_ref = p.k * a_si * math.sin(th) * env \
            + a_si * math.cos(th) * 2 * (z - CONST.c * t) / (CONST.c**2 * tau**2) * env
        assert ey == pytest.approx(e_ref, rel=2e-4, abs=1e-6 * p.omega * a_si)
        assert bx == pytest.approx(b_ref, rel=2e-4, abs=1e-6 * p.k * a_si)


def test_paraxial_counter_propagating_envelopes_separate():
    # long before the focus time the two pulses sit on opposite sides
    pulses = (
        _focused(0.03, harmonic=1, duration=1e-12, direction="plus_z"),
        _focused(0.02, harmonic=2, duration=1e-12, direction="minus_z"),
    )
    t = pulses[0].focus_time - 6e-12
    dz = CONST.c * 6e-12
    here_plus = abs(paraxial_fields([pulses[0]], 0, 0, -dz, t)[0])
    there_plus = abs(paraxial_fields([pulses[0]], 0, 0, +dz, t)[0])
    assert here_plus > 1e3 * there_plus
    here_minus = abs(paraxial_fields([pulses[1]], 0, 0, +dz, t)[0])
    there_minus = abs(paraxial_fields([pulses[1]], 0, 0, -dz, t)[0])
    assert here_minus > 1e3 * there_minus
