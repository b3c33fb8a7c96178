"""Spinor dynamics on a discrete momentum ladder in counter-propagating fields.

The electron is expanded over longitudinal plane waves spaced by one
photon momentum (``k_z = k_z0 + n*k0``) with a two-component spinor per
rung.  The couplings come straight from the field's Fourier terms
(:func:`kdsim.fields.fourier_terms`): ``A_x`` drives spin-preserving
``p_x A_x`` transitions, ``A^2`` drives spin-preserving two-photon
gratings, and the ``B`` components drive spin flips through sigma_x and
sigma_y.  Amplitudes are integrated in the interaction picture (kinetic
phases ``exp(i w_n t)`` folded into the couplings) with a hand-rolled
adaptive Dormand-Prince 4(5) stepper compiled by numba.

Spatially uniform pieces of ``A^2`` (``delta_n = 0``) multiply every
rung by the same time-dependent phase.  They cannot change any
population, so the coupling pack drops them; this removes the large
ponderomotive global phase from the stiffness budget.  The slow
reference :func:`coupling_element` keeps them by default because they
are part of the literal interaction Hamiltonian.

Guards on every accepted run: norm drift bounded by the step tolerance,
and a boundary-hygiene check that rejects runs whose outermost ladder
rungs acquire population (a truncation artifact, not physics).  The
stepper also aborts early when the boundary population exceeds an
abort threshold while the pulse is still on, so hopeless ladders fail
in seconds instead of minutes.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numba import njit

from .core import CONST, ElectronSpec, Scenario, SolverSpec
from .fields import (
    FieldModel,
    FourierTerm,
    TwoColorField,
    fourier_terms,
    standing_wave_pair,
    two_color_field,
)
from . import perturbation

__all__ = [
    "SolverError",
    "NormDriftError",
    "BoundaryLeakError",
    "StepSizeError",
    "LadderBasis",
    "LadderSystem",
    "EvolveResult",
    "build_system",
    "field_from_scenario",
    "coupling_element",
    "evolve",
    "probabilities",
    "population",
    "suggested_ladder",
    "process_setup",
    "process_reference",
    "run_process",
    "process_scan",
    "skd_scan",
    "convergence_check",
    "ConvergenceReport",
    "PROCESS_NAMES",
]

SPIN_INDEX = {"up": 0, "down": 1}
SPIN_NAME = ("up", "down")

_BOUNDARY_TOL = 1e-8      # final population allowed in the outer two rungs
_BOUNDARY_ABORT = 1e-6    # in-flight boundary population that aborts a run
_MAX_STEPS = 50_000_000
_ATOL_FACTOR = 1e-6       # absolute error floor relative to rel_tol


class SolverError(RuntimeError):
    """A ladder evolution violated one of its accuracy contracts."""


class NormDriftError(SolverError):
    """Norm drifted beyond 100x the requested relative tolerance.

    Carries the completed :class:`EvolveResult` as ``.result`` for
    forensics: the drift lives in the fast quiver sidebands and leaves
    the slow resonant channels intact (they stay put while the drift
    varies by an order of magnitude under tolerance changes), so the
    populations are still meaningful even though the accuracy contract
    failed.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class BoundaryLeakError(SolverError):
    """Population reached the outermost ladder rungs (truncation leak)."""


class StepSizeError(SolverError):
    """The adaptive stepper underflowed or exceeded its step budget."""


# -- basis -------------------------------------------------------------------


class LadderBasis:
    """Discrete longitudinal momenta ``hbar*(k_z0 + n*k0)`` with spin.

    State index layout: ``2*rung + spin`` with spin 0 = up, 1 = down.
    ``omega[r]`` holds the kinetic phase rate of rung ``r``; the uniform
    transverse part ``hbar*k_x^2/2m`` is the same for every state and
    dropped (a global phase).
    """

    def __init__(self, n_min: int, n_max: int, k0: float,
                 k_z0: float = 0.0, k_x: float = 0.0):
        if n_min >= n_max:
            raise ValueError("need n_min < n_max")
        if k0 <= 0.0:
            raise ValueError("photon wavenumber k0 must be > 0")
        self.n_min = int(n_min)
        self.n_max = int(n_max)
        self.k0 = float(k0)
        self.k_z0 = float(k_z0)
        self.k_x = float(k_x)
        self.n_values = np.arange(self.n_min, self.n_max + 1, dtype=np.int64)
        k_z = self.k_z0 + self.n_values * self.k0
        self.omega = CONST.hbar * k_z * k_z / (2.0 * CONST.m)
        self.n_rungs = self.n_values.size
        self.size = 2 * self.n_rungs

    def rung_index(self, n: int) -> int:
        if not self.n_min <= n <= self.n_max:
            raise ValueError(f"rung {n} outside [{self.n_min}, {self.n_max}]")
        return int(n - self.n_min)

    def state_index(self, n: int, spin: str) -> int:
        return 2 * self.rung_index(n) + SPIN_INDEX[spin]


# -- couplings ---------------------------------------------------------------


@dataclass(eq=False)
class CouplingPack:
    """Flattened directed edges of the interaction Hamiltonian.

    Spin-diagonal components (``p_x A_x`` and ``A^2``) are stored as
    rung-level edges that act on both spinor components at once; the
    ``B`` components are spin-flip edges carrying their source spin.
    ``coef`` holds the half-amplitude of each travelling-wave component
    in joules; its full time dependence is ``coef * exp(-i m w0 t) *
    env^p``.  Hermiticity is carried by the term lists themselves (every
    component appears with its conjugate partner at ``-delta_n, -m``).
    """

    d_src: np.ndarray      # diagonal edges: source rung, int32
    d_dst: np.ndarray      # diagonal edges: destination rung, int32
    d_m: np.ndarray        # drive harmonic, int8
    d_env: np.ndarray      # envelope exponent 0/1/2, int8
    d_coef: np.ndarray     # complex128, joules
    f_src: np.ndarray      # flip edges: source rung, int32
    f_dst: np.ndarray      # flip edges: destination rung, int32
    f_spin: np.ndarray     # flip edges: source spin 0/1, int8
    f_m: np.ndarray        # drive harmonic, int8
    f_env: np.ndarray      # envelope exponent 0/1/2, int8
    f_coef: np.ndarray     # complex128, joules

    @property
    def n_edges(self) -> int:
        return 2 * self.d_src.size + self.f_src.size


def _iter_edges(basis: LadderBasis, delta_n: int):
    """(src_rung, dst_rung) pairs with both ends inside the ladder."""
    for r_src in range(basis.n_rungs):
        r_dst = r_src + delta_n
        if 0 <= r_dst < basis.n_rungs:
            yield r_src, r_dst


def build_couplings(basis: LadderBasis, terms: dict, p_x: float,
                    mu_b_scale: float = 1.0) -> CouplingPack:
    """Assemble the directed edge arrays from per-component term lists.

    ``terms`` maps component names (``A_x``, ``A_y``, ``A_sq``, ``B_x``,
    ``B_y``) to :class:`FourierTerm` lists.  ``A_y`` never couples (the
    transverse momentum is a conserved plane-wave label); it is accepted
    so callers can pass the full decomposition.
    """
    diag, flip = [], []

    for t in terms.get("A_x", ()):
        amp = -(CONST.q / CONST.m) * p_x * t.amplitude_x
        if amp == 0:
            continue
        for r_src, r_dst in _iter_edges(basis, t.delta_n):
            diag.append((r_src, r_dst, t.omega_multiple, t.envelope_power, amp))

    for t in terms.get("A_sq", ()):
        if t.delta_n == 0:
            continue  # uniform piece: global phase only
        amp = (CONST.q ** 2 / (2.0 * CONST.m)) * t.amplitude_x
        for r_src, r_dst in _iter_edges(basis, t.delta_n):
            diag.append((r_src, r_dst, t.omega_multiple, t.envelope_power, amp))

    if mu_b_scale != 0.0:
        for t in terms.get("B_x", ()):
            amp = -CONST.muB * mu_b_scale * t.amplitude_x
            for r_src, r_dst in _iter_edges(basis, t.delta_n):
                flip.append((r_src, r_dst, 0, t.omega_multiple,
                             t.envelope_power, amp))
                flip.append((r_src, r_dst, 1, t.omega_multiple,
                             t.envelope_power, amp))
        for t in terms.get("B_y", ()):
            base = -CONST.muB * mu_b_scale * t.amplitude_y
            for r_src, r_dst in _iter_edges(basis, t.delta_n):
                flip.append((r_src, r_dst, 0, t.omega_multiple,
                             t.envelope_power, 1j * base))
                flip.append((r_src, r_dst, 1, t.omega_multiple,
                             t.envelope_power, -1j * base))

    def cols(rows, types):
        if not rows:
            return [np.zeros(0, dtype=tp) for tp in types]
        return [np.asarray(col, dtype=tp) for col, tp in zip(zip(*rows), types)]

    d_src, d_dst, d_m, d_env, d_coef = cols(
        diag, (np.int32, np.int32, np.int8, np.int8, np.complex128))
    f_src, f_dst, f_spin, f_m, f_env, f_coef = cols(
        flip, (np.int32, np.int32, np.int8, np.int8, np.int8, np.complex128))
    return CouplingPack(d_src=d_src, d_dst=d_dst, d_m=d_m, d_env=d_env,
                        d_coef=d_coef, f_src=f_src, f_dst=f_dst,
                        f_spin=f_spin, f_m=f_m, f_env=f_env, f_coef=f_coef)


class LadderSystem:
    """A basis plus the couplings and drive parameters of one field setup."""

    def __init__(self, basis: LadderBasis, terms: dict, base_omega: float,
                 tau: float, p_x: float = 0.0, mu_b_scale: float = 1.0):
        if base_omega <= 0.0:
            raise ValueError("base_omega must be > 0")
        if tau <= 0.0:
            raise ValueError("tau must be > 0")
        self.basis = basis
        self.terms = {key: tuple(val) for key, val in terms.items()}
        self.base_omega = float(base_omega)
        self.tau = float(tau)
        self.p_x = float(p_x)
        self.mu_b_scale = float(mu_b_scale)
        self.pack = build_couplings(basis, terms, self.p_x, self.mu_b_scale)


def field_from_scenario(scenario: Scenario):
    """Rebuild the field model described by a scenario's two pulses."""
    lo, hi = scenario.pulses
    harmonics = (lo.harmonic, hi.harmonic)
    if harmonics == (1, 2):
        return TwoColorField(pulse_lo=lo, pulse_hi=hi)
    if harmonics == (1, 1):
        return FieldModel(pulses=(lo, hi))
    raise ValueError(f"unsupported harmonic pair {harmonics}")


def build_system(field, electron: ElectronSpec | None = None,
                 solver: SolverSpec | None = None) -> LadderSystem:
    """Decompose ``field`` and wire up the ladder declared by ``solver``."""
    electron = electron if electron is not None else ElectronSpec()
    solver = solver if solver is not None else SolverSpec()
    terms = {comp: fourier_terms(field, comp)
             for comp in ("A_x", "A_y", "A_sq", "B_x", "B_y")}
    basis = LadderBasis(solver.n_min, solver.n_max, field.base_k,
                        k_z0=solver.k_z0, k_x=electron.k_x)
    return LadderSystem(basis, terms, field.base_omega, field.tau,
                        p_x=electron.p_x, mu_b_scale=solver.mu_b_scale)


def coupling_element(system: LadderSystem, m_idx: int, i_spin: int,
                     n_idx: int, j_spin: int, t: float,
                     include_uniform: bool = True) -> complex:
    """Interaction matrix element ``<m_idx, i| H'(t) |n_idx, j>`` in joules.

    Slow reference implementation summed directly over the raw term
    lists; plane-wave orthogonality selects ``delta_n = m_idx - n_idx``.
    Used as the oracle for the packed right-hand side.
    """
    delta = m_idx - n_idx
    w0, tau = system.base_omega, system.tau
    total = 0.0 + 0.0j

    def drive(term):
        env = math.exp(-term.envelope_power * (t / tau) ** 2)
        return cmath.exp(-1j * term.omega_multiple * w0 * t) * env

    if i_spin == j_spin:
        for term in system.terms["A_x"]:
            if term.delta_n == delta:
                total += (-(CONST.q / CONST.m) * system.p_x
                          * term.amplitude_x * drive(term))
        for term in system.terms["A_sq"]:
            if term.delta_n != delta:
                continue
            if delta == 0 and not include_uniform:
                continue
            total += (CONST.q ** 2 / (2.0 * CONST.m)) * term.amplitude_x * drive(term)
    else:
        sy = 1j if i_spin == 1 else -1j  # <down|sy|up> = +i, <up|sy|down> = -i
        for term in system.terms["B_x"]:
            if term.delta_n == delta:
                total += -CONST.muB * system.mu_b_scale * term.amplitude_x * drive(term)
        for term in system.terms["B_y"]:
            if term.delta_n == delta:
                total += -CONST.muB * system.mu_b_scale * sy * term.amplitude_y * drive(term)
    return total


# -- compiled stepper ---------------------------------------------------------


@njit(cache=True, nogil=True, fastmath=True)
def _rhs(t, y, dy, rung_omega, base_omega, tau,
         d_src, d_dst, d_m, d_env, d_coef,
         f_src, f_dst, f_spin, f_m, f_env, f_coef,
         ph, mtab, envs):
    """dy = -(i/hbar) H'(t) y in the interaction picture.

    ``d_coef``/``f_coef`` arrive with -i/hbar already folded in, so this
    routine only assembles phases: per-rung kinetic factors
    exp(i w_r t), the drive harmonics exp(-i m w0 t) tabulated from one
    cexp, and the envelope powers.  Diagonal edges act on both spinor
    components with one phase evaluation.
    """
    n_rungs = rung_omega.size
    for r in range(n_rungs):
        ph[r] = cmath.exp(1j * rung_omega[r] * t)
    z = cmath.exp(-1j * base_omega * t)
    mtab[4] = 1.0 + 0.0j
    mtab[5] = z
    mtab[6] = z * z
    mtab[7] = mtab[6] * z
    mtab[8] = mtab[6] * mtab[6]
    mtab[3] = z.conjugate()
    mtab[2] = mtab[6].conjugate()
    mtab[1] = mtab[7].conjugate()
    mtab[0] = mtab[8].conjugate()
    x = t / tau
    envs[0] = 1.0
    envs[1] = math.exp(-x * x)
    envs[2] = envs[1] * envs[1]
    for i in range(y.size):
        dy[i] = 0.0 + 0.0j
    for e in range(d_src.size):
        rs = d_src[e]
        rd = d_dst[e]
        amp = (d_coef[e] * mtab[d_m[e] + 4] * envs[d_env[e]]
               * ph[rd] * ph[rs].conjugate())
        dy[2 * rd] += amp * y[2 * rs]
        dy[2 * rd + 1] += amp * y[2 * rs + 1]
    for e in range(f_src.size):
        rs = f_src[e]
        rd = f_dst[e]
        s = f_spin[e]
        amp = (f_coef[e] * mtab[f_m[e] + 4] * envs[f_env[e]]
               * ph[rd] * ph[rs].conjugate())
        dy[2 * rd + (1 - s)] += amp * y[2 * rs + s]


@njit(cache=True, nogil=True)
def _boundary_pop(y, n_rungs):
    total = 0.0
    if n_rungs <= 4:
        for r in range(n_rungs):
            total += abs(y[2 * r]) ** 2 + abs(y[2 * r + 1]) ** 2
    else:
        for r in (0, 1, n_rungs - 2, n_rungs - 1):
            total += abs(y[2 * r]) ** 2 + abs(y[2 * r + 1]) ** 2
    return total


@njit(cache=True, nogil=True)
def _integrate(y, t0, t1, rtol, atol, rung_omega, base_omega, tau,
               d_src, d_dst, d_m, d_env, d_coef,
               f_src, f_dst, f_spin, f_m, f_env, f_coef,
               max_steps, boundary_abort):
    """Adaptive Dormand-Prince 4(5) with PI step control and FSAL.

    Returns (status, n_accepted, n_rejected, max_boundary_population):
    status 0 ok, 1 step budget exceeded, 2 step underflow, 3 boundary
    population crossed the abort threshold.
    """
    n = y.size
    n_rungs = rung_omega.size
    ph = np.empty(n_rungs, dtype=np.complex128)
    mtab = np.empty(9, dtype=np.complex128)
    envs = np.empty(3, dtype=np.float64)
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    k5 = np.empty(n, dtype=np.complex128)
    k6 = np.empty(n, dtype=np.complex128)
    k7 = np.empty(n, dtype=np.complex128)
    yt = np.empty(n, dtype=np.complex128)
    y5 = np.empty(n, dtype=np.complex128)

    t = t0
    h = (t1 - t0) * 1e-8
    h_min = (t1 - t0) * 1e-15
    err_prev = 1.0
    n_acc = 0
    n_rej = 0
    max_bpop = 0.0
    first = True

    while t < t1:
        if h < h_min:
            return 2, n_acc, n_rej, max_bpop
        if n_acc + n_rej >= max_steps:
            return 1, n_acc, n_rej, max_bpop
        if t + h > t1:
            h = t1 - t

        if first:
            _rhs(t, y, k1, rung_omega, base_omega, tau,
                 d_src, d_dst, d_m, d_env, d_coef,
                 f_src, f_dst, f_spin, f_m, f_env, f_coef, ph, mtab, envs)
            first = False

        for i in range(n):
            yt[i] = y[i] + h * 0.2 * k1[i]
        _rhs(t + 0.2 * h, yt, k2, rung_omega, base_omega, tau,
             d_src, d_dst, d_m, d_env, d_coef,
             f_src, f_dst, f_spin, f_m, f_env, f_coef, ph, mtab, envs)
        for i in range(n):
            yt[i] = y[i] + h * (0.075 * k1[i] + 0.225 * k2[i])
        _rhs(t + 0.3 * h, yt, k3, rung_omega, base_omega, tau,
             d_src, d_dst, d_m, d_env, d_coef,
             f_src, f_dst, f_spin, f_m, f_env, f_coef, ph, mtab, envs)
        for i in range(n):
            yt[i] = y[i] + h * ((44.0 / 45.0) * k1[i] - (56.0 / 15.0) * k2[i]
                                + (32.0 / 9.0) * k3[i])
        _rhs(t + 0.8 * h, yt, k4, rung_omega, base_omega, tau,
             d_src, d_dst, d_m, d_env, d_coef,
             f_src, f_dst, f_spin, f_m, f_env, f_coef, ph, mtab, envs)
        for i in range(n):
            yt[i] = y[i] + h * ((19372.0 / 6561.0) * k1[i]
                                - (25360.0 / 2187.0) * k2[i]
                                + (64448.0 / 6561.0) * k3[i]
                                - (212.0 / 729.0) * k4[i])
        _rhs(t + (8.0 / 9.0) * h, yt, k5, rung_omega, base_omega, tau,
             d_src, d_dst, d_m, d_env, d_coef,
             f_src, f_dst, f_spin, f_m, f_env, f_coef, ph, mtab, envs)
        for i in range(n):
            yt[i] = y[i] + h * ((9017.0 / 3168.0) * k1[i]
                                - (355.0 / 33.0) * k2[i]
                                + (46732.0 / 5247.0) * k3[i]
                                + (49.0 / 176.0) * k4[i]
                                - (5103.0 / 18656.0) * k5[i])
        _rhs(t + h, yt, k6, rung_omega, base_omega, tau,
             d_src, d_dst, d_m, d_env, d_coef,
             f_src, f_dst, f_spin, f_m, f_env, f_coef, ph, mtab, envs)
        for i in range(n):
            y5[i] = y[i] + h * ((35.0 / 384.0) * k1[i]
                                + (500.0 / 1113.0) * k3[i]
                                + (125.0 / 192.0) * k4[i]
                                - (2187.0 / 6784.0) * k5[i]
                                + (11.0 / 84.0) * k6[i])
        _rhs(t + h, y5, k7, rung_omega, base_omega, tau,
             d_src, d_dst, d_m, d_env, d_coef,
             f_src, f_dst, f_spin, f_m, f_env, f_coef, ph, mtab, envs)

        err = 0.0
        for i in range(n):
            e_i = h * ((71.0 / 57600.0) * k1[i]
                       - (71.0 / 16695.0) * k3[i]
                       + (71.0 / 1920.0) * k4[i]
                       - (17253.0 / 339200.0) * k5[i]
                       + (22.0 / 525.0) * k6[i]
                       - (1.0 / 40.0) * k7[i])
            ay = abs(y[i])
            ay5 = abs(y5[i])
            big = ay if ay > ay5 else ay5
            sc = atol + rtol * big
            q = abs(e_i) / sc
            err += q * q
        err = math.sqrt(err / n)

        if err <= 1.0:
            t += h
            for i in range(n):
                y[i] = y5[i]
                k1[i] = k7[i]
            n_acc += 1
            bpop = _boundary_pop(y, n_rungs)
            if bpop > max_bpop:
                max_bpop = bpop
            if bpop > boundary_abort:
                return 3, n_acc, n_rej, max_bpop
            if err < 1e-30:
                err = 1e-30
            fac = 0.9 * err ** -0.14 * err_prev ** 0.08
            if fac > 5.0:
                fac = 5.0
            elif fac < 0.2:
                fac = 0.2
            h *= fac
            err_prev = err
        else:
            n_rej += 1
            fac = 0.9 * err ** -0.2
            if fac < 0.2:
                fac = 0.2
            h *= fac

    return 0, n_acc, n_rej, max_bpop


# -- evolution ----------------------------------------------------------------


@dataclass(eq=False)
class EvolveResult:
    """Final interaction-picture amplitudes plus run diagnostics."""

    basis: LadderBasis
    amplitudes: np.ndarray          # (n_rungs, 2) complex
    t_start: float
    t_end: float
    norm: float
    norm_drift: float
    n_accepted: int
    n_rejected: int
    max_boundary_population: float
    boundary_population: float


def evolve(system: LadderSystem, psi0: np.ndarray | None = None,
           t_start: float | None = None, t_end: float | None = None,
           rel_tol: float = 1e-9, window_tau: float = 5.0,
           initial_state: tuple | None = None,
           check_boundary: bool = True,
           boundary_abort: float = _BOUNDARY_ABORT,
           max_steps: int = _MAX_STEPS) -> EvolveResult:
    """Propagate the spinor amplitudes across the pulse window.

    ``psi0`` is a flat state vector (length ``basis.size``); when None,
    ``initial_state=(n, spin)`` selects a single basis state, defaulting
    to rung 0 with spin up.  The window defaults to
    ``[-window_tau*tau, +window_tau*tau]``.

    Raises :class:`StepSizeError`, :class:`BoundaryLeakError` or
    :class:`NormDriftError` when the corresponding contract fails.
    """
    basis = system.basis
    if psi0 is None:
        if initial_state is None:
            initial_state = (0, "up")
        n0, spin0 = initial_state
        psi = np.zeros(basis.size, dtype=np.complex128)
        psi[basis.state_index(n0, spin0)] = 1.0
    else:
        psi = np.array(psi0, dtype=np.complex128)
        if psi.shape != (basis.size,):
            raise ValueError(f"psi0 must have shape ({basis.size},)")
        norm0 = float(np.sum(np.abs(psi) ** 2))
        if abs(norm0 - 1.0) > 1e-6:
            raise ValueError("psi0 must be normalized")
    if t_start is None:
        t_start = -window_tau * system.tau
    if t_end is None:
        t_end = +window_tau * system.tau
    if not t_start < t_end:
        raise ValueError("need t_start < t_end")

    pack = system.pack
    d_coef = pack.d_coef * (-1j / CONST.hbar)
    f_coef = pack.f_coef * (-1j / CONST.hbar)
    atol = rel_tol * _ATOL_FACTOR
    status, n_acc, n_rej, max_bpop = _integrate(
        psi, float(t_start), float(t_end), rel_tol, atol,
        basis.omega, system.base_omega, system.tau,
        pack.d_src, pack.d_dst, pack.d_m, pack.d_env, d_coef,
        pack.f_src, pack.f_dst, pack.f_spin, pack.f_m, pack.f_env, f_coef,
        max_steps, boundary_abort if check_boundary else 2.0,
    )
    if status == 1:
        raise StepSizeError(f"step budget {max_steps} exhausted")
    if status == 2:
        raise StepSizeError("step size underflow (configuration too stiff)")
    if status == 3:
        raise BoundaryLeakError(
            f"boundary population {max_bpop:.3e} crossed the abort "
            f"threshold {boundary_abort:.1e}; enlarge the ladder")

    norm = float(np.sum(np.abs(psi) ** 2))
    drift = abs(norm - 1.0)
    bpop = float(_boundary_pop(psi, basis.n_rungs))
    result = EvolveResult(
        basis=basis,
        amplitudes=psi.reshape(basis.n_rungs, 2),
        t_start=float(t_start),
        t_end=float(t_end),
        norm=norm,
        norm_drift=drift,
        n_accepted=n_acc,
        n_rejected=n_rej,
        max_boundary_population=float(max_bpop),
        boundary_population=bpop,
    )
    if drift > 100.0 * rel_tol:
        raise NormDriftError(f"norm drift {drift:.3e} > 100*rel_tol",
                             result=result)
    if check_boundary and bpop > _BOUNDARY_TOL:
        raise BoundaryLeakError(
            f"final boundary population {bpop:.3e} > {_BOUNDARY_TOL:.1e}; "
            "enlarge the ladder")

    return result


def probabilities(result: EvolveResult) -> dict:
    """Map ``(n, 'up'|'down') -> |C|^2`` over the whole ladder."""
    out = {}
    pops = np.abs(result.amplitudes) ** 2
    for r, n in enumerate(result.basis.n_values):
        out[(int(n), "up")] = float(pops[r, 0])
        out[(int(n), "down")] = float(pops[r, 1])
    return out


def population(result: EvolveResult, n: int, spin: str) -> float:
    """Single-state population |C_{n,spin}|^2."""
    idx = result.basis.state_index(n, spin)
    return float(abs(result.amplitudes.reshape(-1)[idx]) ** 2)


# -- ladder sizing -------------------------------------------------------------


def suggested_ladder(field, n0: int = 2, margin: int = 8,
                     p_x: float = 0.0) -> int:
    """Symmetric ladder half-width that holds the intra-pulse spread.

    Each travelling grating (the ``A^2`` components and, for an electron
    with transverse momentum ``p_x``, the ``p_x A_x`` components)
    phase-modulates the state with index ``chi = 2|V| / (hbar |m| w0)``
    (or the integrated ``|V| tau sqrt(pi/2) / hbar`` for a static
    grating), spreading population over roughly
    ``chi + 2.5 chi^(1/3)`` sidebands of ``delta_n`` each.  The
    per-grating extents add in quadrature (independent modulations),
    plus a flat margin for the diffraction channels themselves.
    """
    w0, tau = field.base_omega, field.tau
    gratings = []
    for t in fourier_terms(field, "A_sq"):
        if t.delta_n != 0:
            v = (CONST.q ** 2 / (2.0 * CONST.m)) * abs(t.amplitude_x)
            gratings.append((v, t.delta_n, t.omega_multiple))
    if p_x != 0.0:
        for t in fourier_terms(field, "A_x"):
            if t.delta_n != 0:
                v = (CONST.q / CONST.m) * abs(p_x) * abs(t.amplitude_x)
                gratings.append((v, t.delta_n, t.omega_multiple))
    ext_sq = 0.0
    for v, delta_n, mult in gratings:
        if mult == 0:
            chi = v * tau * math.sqrt(math.pi / 2.0) / CONST.hbar
        else:
            chi = 2.0 * v / (CONST.hbar * abs(mult) * w0)
        sidebands = chi + 2.5 * chi ** (1.0 / 3.0)
        ext_sq += (abs(delta_n) * sidebands) ** 2
    return int(abs(n0) + margin + math.ceil(math.sqrt(ext_sq)))


# -- process scans -------------------------------------------------------------

PROCESS_NAMES = ("skd", "depolarizer", "two_color_kd", "regular_kd")


def process_setup(process: str, intensity: float, wavelength: float,
                   tau: float, speed: float):
    """Field, initial state and extraction target for one process run."""
    if process == "skd":
        field = two_color_field(intensity, wavelength, tau, "linear_y")
        return field, (2, "up"), (-2, "down")
    if process == "depolarizer":
        field = two_color_field(intensity, wavelength, tau, "circular")
        return field, (2, "up"), (2, "down")
    if process == "two_color_kd":
        field = two_color_field(intensity, wavelength, tau, "linear_x")
        return field, (2, "up"), (-2, "up")
    if process == "regular_kd":
        field = standing_wave_pair(intensity, wavelength, tau, "linear_y")
        return field, (0, "up"), (2, "up")
    raise ValueError(f"unknown process {process!r}")


def process_reference(process: str, intensity: float, wavelength: float,
                       tau: float, speed: float) -> float:
    """Matching second-route (perturbative) probability."""
    if process == "skd":
        return perturbation.skd_amplitude(
            intensity, wavelength=wavelength, tau=tau,
            polarization="linear_y").probability
    if process == "depolarizer":
        return perturbation.depolarizer_amplitude(
            intensity, speed=speed, wavelength=wavelength, tau=tau).probability
    if process == "two_color_kd":
        return perturbation.two_color_kd_amplitude(
            intensity, speed=speed, wavelength=wavelength, tau=tau,
            method="asymptotic").probability
    if process == "regular_kd":
        field = standing_wave_pair(intensity, wavelength, tau, "linear_y")
        vertex = perturbation.vertex_a_squared(field, 2, 0)
        omega0 = field.base_omega
        recoil = perturbation.recoil_frequency(field.base_k)
        detuning = perturbation.ladder_detuning(0, 2, 0, omega0, recoil)
        amp = perturbation.first_order_amplitude(vertex, detuning, tau)
        return abs(amp) ** 2
    raise ValueError(f"unknown process {process!r}")


def run_process(process: str, intensity: float, *, wavelength: float = 1.064e-6,
                tau: float = 1e-12, speed: float = 1e7,
                rel_tol: float = 1e-6, n_max: int | None = None,
                window_tau: float = 4.0, mu_b_scale: float = 1.0) -> dict:
    """One ladder evolution configured for a named scattering process."""
    field, start, target = process_setup(process, intensity, wavelength, tau, speed)
    if n_max is None:
        n_max = max(12, suggested_ladder(field, n0=start[0],
                                         p_x=CONST.m * speed))
    electron = ElectronSpec(speed=speed, initial_ladder_index=start[0],
                            initial_spin=start[1])
    solver = SolverSpec(n_min=-n_max, n_max=n_max, rel_tol=min(rel_tol, 1e-6),
                        window_tau=window_tau, mu_b_scale=mu_b_scale)
    system = build_system(field, electron, solver)
    result = evolve(system, initial_state=start, rel_tol=rel_tol,
                    window_tau=window_tau)
    return {
        "process": process,
        "intensity": intensity,
        "p_pauli": population(result, *target),
        "p_perturbation": process_reference(process, intensity, wavelength,
                                             tau, speed),
        "n_max": n_max,
        "result": result,
    }


def process_scan(process: str, intensities, *, wavelength: float = 1.064e-6,
                 tau: float = 1e-12, speed: float = 1e7,
                 rel_tol: float = 1e-6, n_max: int | None = None,
                 window_tau: float = 4.0, threads: int = 1) -> list:
    """Ladder and perturbative probabilities over an intensity grid.

    Failures are per-point: a row whose evolution violates a contract
    carries ``status`` with the error text and NaN for ``p_pauli``.
    """
    def one(intensity):
        try:
            row = run_process(process, intensity, wavelength=wavelength,
                              tau=tau, speed=speed, rel_tol=rel_tol,
                              n_max=n_max, window_tau=window_tau)
            row.pop("result")
            row["status"] = "ok"
        except SolverError as exc:
            row = {
                "process": process,
                "intensity": intensity,
                "p_pauli": math.nan,
                "p_perturbation": process_reference(
                    process, intensity, wavelength, tau, speed),
                "n_max": n_max,
                "status": f"{type(exc).__name__}: {exc}",
            }
        return row

    intensities = list(intensities)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, intensities))
    return [one(value) for value in intensities]


def skd_scan(intensity_list, scenario: Scenario, threads: int = 1) -> list:
    """Per-intensity final-state probabilities for the four processes.

    Follows the scenario for wavelength, pulse duration, electron speed
    and solver settings; each process runs with its own field
    configuration and extraction state.  Rows carry per-process status
    so a failure at one intensity or process leaves a partial table.
    """
    lo = scenario.pulses[0]
    wavelength = lo.base_wavelength
    tau = lo.duration
    speed = scenario.electron.speed
    solver = scenario.solver
    columns = {"skd": "p_skd", "depolarizer": "p_depol",
               "two_color_kd": "p_two_color", "regular_kd": "p_regular"}

    def one(intensity):
        row = {"intensity": intensity, "status": {}}
        for process, col in columns.items():
            field, start, target = process_setup(
                process, intensity, wavelength, tau, speed)
            electron = ElectronSpec(speed=speed,
                                    initial_ladder_index=start[0],
                                    initial_spin=start[1])
            try:
                system = build_system(field, electron, solver)
                result = evolve(system, initial_state=start,
                                rel_tol=solver.rel_tol,
                                window_tau=solver.window_tau)
                row[col] = population(result, *target)
                row["status"][process] = "ok"
            except SolverError as exc:
                row[col] = math.nan
                row["status"][process] = f"{type(exc).__name__}: {exc}"
        return row

    intensity_list = list(intensity_list)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, intensity_list))
    return [one(value) for value in intensity_list]


# -- convergence ---------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceReport:
    passed: bool
    max_relative_change: float
    status: str
    baseline: dict
    refined: dict


def convergence_check(scenario: Scenario) -> ConvergenceReport:
    """Re-run with a doubled ladder span and rel_tol/10, compare populations.

    The comparison covers every baseline probability above 1e-12; the
    check passes when the largest relative change stays below 1%.  A
    baseline that already violates a solver contract fails the check
    outright (with the error text in ``status``).
    """
    field = field_from_scenario(scenario)
    electron = scenario.electron
    start = (electron.initial_ladder_index, electron.initial_spin)

    def run(solver):
        system = build_system(field, electron, solver)
        result = evolve(system, initial_state=start, rel_tol=solver.rel_tol,
                        window_tau=solver.window_tau)
        return probabilities(result)

    try:
        base = run(scenario.solver)
    except SolverError as exc:
        return ConvergenceReport(False, math.inf,
                                 f"baseline failed - {type(exc).__name__}: {exc}",
                                 {}, {})
    refined_solver = replace(scenario.solver,
                             n_min=2 * scenario.solver.n_min,
                             n_max=2 * scenario.solver.n_max,
                             rel_tol=scenario.solver.rel_tol / 10.0)
    try:
        fine = run(refined_solver)
    except SolverError as exc:
        return ConvergenceReport(False, math.inf,
                                 f"refinement failed - {type(exc).__name__}: {exc}",
                                 base, {})

    worst = 0.0
    for key, p in base.items():
        if p > 1e-12:
            change = abs(fine[key] - p) / p
            if change > worst:
                worst = change
    return ConvergenceReport(worst < 0.01, worst, "ok", base, fine)
