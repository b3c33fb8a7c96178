"""Relativistic classical electron tracer for focused counter-propagating pulses.

Integrates dp/dt = q(E + v x B) with a volume-preserving Boris-type push:
a symmetric half-drift, then the classic half-electric-kick / magnetic
rotation / half-electric-kick momentum update with fields evaluated at
the midpoint time, then the second half-drift.  The scheme is second
order, exactly norm-preserving under the magnetic rotation, and
time-reversible in static fields.

Everything runs in dimensionless variables: positions carry k0, times
w0, momenta mc, where w0 and k0 = w0/c belong to the fundamental pulse.
Dimensionless fields are e = q_s E/(m c w0) and b = q_s B/(m w0) with
q_s the signed charge (electron: -q).  The gamma factor is always
derived from the momentum, never integrated separately.

The stock scenario is a 1 um fundamental (a0 = 0.03) against a
counter-propagating second harmonic (a0 = 0.02), both y-polarized with
50 um waist and 10 ps Gaussian envelopes reaching their shared focus at
w0 t = 4000, crossed by an electron moving along +x at c/30.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .core import CONST, pulse_from_a0
from .fields import ParaxialPulse, _paraxial_eb, paraxial_params

__all__ = [
    "TracerError",
    "NonFiniteFieldError",
    "ParticleState",
    "Trajectory",
    "default_pulses",
    "ic_grid",
    "step",
    "run_trajectory",
    "run_grid",
    "diagnostics",
    "trajectory_rows",
    "DT_DEFAULT",
    "STRIDE_DEFAULT",
]

#: default step: 1/200 of the second-harmonic optical period, in w0 t units.
DT_DEFAULT = math.pi / 200.0
#: default output stride in steps.
STRIDE_DEFAULT = 50
#: hard ceiling from the step contract: T0/100 of the fundamental.
_DT_MAX = 2.0 * math.pi / 100.0

_BETA0 = 1.0 / 30.0
_X0 = 4000.0 * _BETA0
_DX = 100.0
_DZ = math.pi / 4.0
_FOCUS_THETA = 4000.0


class TracerError(RuntimeError):
    """Base class for trajectory-integration failures."""


class NonFiniteFieldError(TracerError):
    """A field evaluation returned NaN or infinity."""


@dataclass(frozen=True)
class ParticleState:
    """Dimensionless phase-space point: k0*r, p/(mc), w0*t.

    gamma is always computed from the momentum (gamma^2 = 1 + |p|^2),
    never stored, so it cannot drift out of sync.
    """

    r: np.ndarray
    p: np.ndarray
    t: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "r", np.asarray(self.r, dtype=float).copy())
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float).copy())
        if self.r.shape != (3,) or self.p.shape != (3,):
            raise ValueError("r and p must be 3-vectors")
        if not (np.all(np.isfinite(self.r)) and np.all(np.isfinite(self.p))
                and math.isfinite(self.t)):
            raise ValueError("state components must be finite")

    @property
    def gamma(self) -> float:
        return math.sqrt(1.0 + float(self.p @ self.p))


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Uniformly strided samples of one integrated trajectory."""

    times: np.ndarray
    positions: np.ndarray
    momenta: np.ndarray
    gamma_minus_1: np.ndarray = field(default=None)

    def __post_init__(self) -> None:
        n = len(self.times)
        if self.positions.shape != (n, 3) or self.momenta.shape != (n, 3):
            raise ValueError("positions and momenta must be (n, 3)")
        dt = np.diff(self.times)
        if n > 1 and not np.all(dt > 0.0):
            raise ValueError("sample times must be strictly increasing")
        if n > 2 and not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
            raise ValueError("sample times must be uniformly strided")
        if self.gamma_minus_1 is None:
            g = np.sqrt(1.0 + np.sum(self.momenta**2, axis=1)) - 1.0
            object.__setattr__(self, "gamma_minus_1", g)

    def __len__(self) -> int:
        return len(self.times)

    def state(self, i: int) -> ParticleState:
        return ParticleState(self.positions[i], self.momenta[i],
                             float(self.times[i]))


def default_pulses(spot: str = "diameter",
                   focus_theta: float = _FOCUS_THETA) -> tuple:
    """Stock pulse pair: a0 = 0.03 at w0 and 0.02 at 2 w0, 1 um base.

    ``spot`` selects how the 100 um focal spot is read: "diameter"
    (waist w0 = 50 um, the default) or "radius" (w0 = 100 um).  Both
    pulses share a 10 ps envelope and reach the z = 0 focus at
    w0 t = focus_theta.
    """
    if spot == "diameter":
        d = 1.0e-4
    elif spot == "radius":
        d = 2.0e-4
    else:
        raise ValueError("spot must be 'diameter' or 'radius'")
    common = dict(base_wavelength=1.0e-6, duration=1.0e-11,
                  polarization="linear_y", focus_diameter=d)
    lo = pulse_from_a0(0.03, harmonic=1, direction="plus_z", **common)
    hi = pulse_from_a0(0.02, harmonic=2, direction="minus_z", **common)
    t_f = focus_theta / lo.omega
    return (ParaxialPulse(lo, focus_time=t_f),
            ParaxialPulse(hi, focus_time=t_f))


def ic_grid(x_center: float = _X0, dx: float = _DX, dz: float = _DZ,
            beta0: float = _BETA0) -> list:
    """Nine launch states: y = 0, (x, z) on a 3 x 3 grid, p along +x.

    x spans [x_center - dx, x_center, x_center + dx] and z spans
    [-dz, 0, dz] in k0 units; every state shares the momentum of a
    beta0 = v0/c electron, p_x/mc = gamma0 beta0.
    """
    if not 0.0 < beta0 < 1.0:
        raise ValueError("beta0 must lie in (0, 1)")
    u0 = beta0 / math.sqrt(1.0 - beta0 * beta0)
    states = []
    for x in (x_center - dx, x_center, x_center + dx):
        for z in (-dz, 0.0, dz):
            states.append(ParticleState(r=np.array([x, 0.0, z]),
                                        p=np.array([u0, 0.0, 0.0]),
                                        t=0.0))
    return states


@njit(cache=True, nogil=True)
def _advance(params, r, p, t0, h, n_steps, stride, k0, w0, fe, fb,
             e_uni, b_uni, out_t, out_r, out_p):
    """March n_steps symmetric Boris steps, sampling every ``stride``.

    Fields are the paraxial pulses in ``params`` (scaled by fe, fb into
    dimensionless form) plus the already-dimensionless uniform fields
    e_uni, b_uni.  Samples include the initial state; out arrays must
    hold n_steps // stride + 1 entries.  Returns 0 on success, 1 on a
    non-finite field evaluation.
    """
    x, y, z = r[0], r[1], r[2]
    ux, uy, uz = p[0], p[1], p[2]
    t = t0

    out_t[0] = t
    out_r[0, 0] = x
    out_r[0, 1] = y
    out_r[0, 2] = z
    out_p[0, 0] = ux
    out_p[0, 1] = uy
    out_p[0, 2] = uz
    j = 1

    half = 0.5 * h
    for istep in range(n_steps):
        # half drift
        inv_g = 1.0 / math.sqrt(1.0 + ux * ux + uy * uy + uz * uz)
        x += half * ux * inv_g
        y += half * uy * inv_g
        z += half * uz * inv_g

        # fields at the midpoint time and drifted position
        tm = t + half
        if params.shape[0] > 0:
            ey_si, bx_si, bz_si = _paraxial_eb(params, x / k0, y / k0,
                                               z / k0, tm / w0)
        else:
            ey_si = 0.0
            bx_si = 0.0
            bz_si = 0.0
        ex = e_uni[0]
        ey = e_uni[1] + fe * ey_si
        ez = e_uni[2]
        bx = b_uni[0] + fb * bx_si
        by = b_uni[1]
        bz = b_uni[2] + fb * bz_si
        if not (math.isfinite(ex) and math.isfinite(ey)
                and math.isfinite(ez) and math.isfinite(bx)
                and math.isfinite(by) and math.isfinite(bz)):
            return 1, j

        # half electric kick
        ux += half * ex
        uy += half * ey
        uz += half * ez
        # magnetic rotation
        inv_g = 1.0 / math.sqrt(1.0 + ux * ux + uy * uy + uz * uz)
        tx = half * bx * inv_g
        ty = half * by * inv_g
        tz = half * bz * inv_g
        upx = ux + uy * tz - uz * ty
        upy = uy + uz * tx - ux * tz
        upz = uz + ux * ty - uy * tx
        sfac = 2.0 / (1.0 + tx * tx + ty * ty + tz * tz)
        ux += sfac * (upy * tz - upz * ty)
        uy += sfac * (upz * tx - upx * tz)
        uz += sfac * (upx * ty - upy * tx)
        # half electric kick
        ux += half * ex
        uy += half * ey
        uz += half * ez

        # half drift
        inv_g = 1.0 / math.sqrt(1.0 + ux * ux + uy * uy + uz * uz)
        x += half * ux * inv_g
        y += half * uy * inv_g
        z += half * uz * inv_g
        t = t0 + (istep + 1) * h

        if (istep + 1) % stride == 0:
            out_t[j] = t
            out_r[j, 0] = x
            out_r[j, 1] = y
            out_r[j, 2] = z
            out_p[j, 0] = ux
            out_p[j, 1] = uy
            out_p[j, 2] = uz
            j += 1

    r[0], r[1], r[2] = x, y, z
    p[0], p[1], p[2] = ux, uy, uz
    return 0, j


def _field_scales(pulses, charge_sign):
    if pulses:
        w0 = min(p.omega for p in pulses)
        k0 = w0 / CONST.c
        params = paraxial_params(pulses)
    else:
        w0 = 1.0
        k0 = 1.0
        params = np.empty((0, 9))
    fe = charge_sign * CONST.q / (CONST.m * CONST.c * w0)
    fb = charge_sign * CONST.q / (CONST.m * w0)
    return params, k0, w0, fe, fb


def _as_uniform(v) -> np.ndarray:
    if v is None:
        return np.zeros(3)
    out = np.asarray(v, dtype=float)
    if out.shape != (3,):
        raise ValueError("uniform field must be a 3-vector")
    return out


def step(state: ParticleState, dt: float, pulses=(), e=None, b=None,
         charge_sign: float = -1.0) -> ParticleState:
    """One Boris push; ``e`` and ``b`` are extra uniform dimensionless fields.

    dt is in w0 t units and may not exceed 1/100 of the fundamental
    optical period.  Negative dt steps backward.
    """
    if abs(dt) > _DT_MAX:
        raise ValueError(f"|dt| must be <= {_DT_MAX:.4f} (T0/100)")
    params, k0, w0, fe, fb = _field_scales(tuple(pulses), charge_sign)
    r = state.r.copy()
    p = state.p.copy()
    out_t = np.empty(2)
    out_r = np.empty((2, 3))
    out_p = np.empty((2, 3))
    status, _ = _advance(params, r, p, state.t, dt, 1, 1, k0, w0, fe, fb,
                         _as_uniform(e), _as_uniform(b), out_t, out_r, out_p)
    if status != 0:
        raise NonFiniteFieldError(
            f"non-finite field at w0 t = {state.t + 0.5 * dt:.6g}")
    return ParticleState(r, p, state.t + dt)


def run_trajectory(ic: ParticleState, t_end: float | None = None,
                   dt: float = DT_DEFAULT, stride: int = STRIDE_DEFAULT,
                   pulses=None, e=None, b=None,
                   charge_sign: float = -1.0) -> Trajectory:
    """Integrate one electron from ``ic`` to t_end (w0 t units).

    ``pulses`` defaults to the stock pair; pass an empty tuple for free
    flight.  t_end defaults to the focus time plus three envelope
    widths, long enough for the stock pulses to pass completely.  The
    step count is rounded up to a whole number of strides so the output
    grid stays uniform; the actual final time may exceed t_end by less
    than one stride.
    """
    if pulses is None:
        pulses = default_pulses()
    pulses = tuple(pulses)
    if dt <= 0.0:
        raise ValueError("dt must be > 0")
    if dt > _DT_MAX:
        raise ValueError(f"dt must be <= {_DT_MAX:.4f} (T0/100)")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    params, k0, w0, fe, fb = _field_scales(pulses, charge_sign)
    if t_end is None:
        if not pulses:
            raise ValueError("t_end is required for a free run")
        t_end = max(p.focus_time * w0 + 3.0 * p.duration * w0 for p in pulses)
    if t_end <= ic.t:
        raise ValueError("t_end must exceed the initial time")

    n_steps = int(math.ceil((t_end - ic.t) / dt))
    n_steps = int(math.ceil(n_steps / stride)) * stride
    n_out = n_steps // stride + 1
    r = ic.r.copy()
    p = ic.p.copy()
    out_t = np.empty(n_out)
    out_r = np.empty((n_out, 3))
    out_p = np.empty((n_out, 3))
    status, _ = _advance(params, r, p, ic.t, dt, n_steps, stride, k0, w0,
                         fe, fb, _as_uniform(e), _as_uniform(b),
                         out_t, out_r, out_p)
    if status != 0:
        raise NonFiniteFieldError("non-finite field during trajectory run")
    return Trajectory(out_t, out_r, out_p)


def run_grid(ics=None, threads: int = 1, **kwargs) -> list:
    """Integrate every launch state (default: the stock 3 x 3 grid).

    Trajectories are independent; with threads > 1 they run in a thread
    pool (the compiled stepper releases the GIL).
    """
    if ics is None:
        ics = ic_grid()
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda s: run_trajectory(s, **kwargs), ics))
    return [run_trajectory(s, **kwargs) for s in ics]


def _hbar_k0_over_mc(wavelength: float = 1.0e-6) -> float:
    k0 = 2.0 * math.pi / wavelength
    return CONST.hbar * k0 / (CONST.m * CONST.c)


def diagnostics(trajectories, wavelength: float = 1.0e-6) -> dict:
    """Per-trajectory and aggregate health report.

    For each trajectory: the peak gamma - 1, whether v_x ever changed
    sign (a reflection), the net longitudinal momentum change in photon
    recoil units hbar k0, and the peak |p_y| (quiver amplitude).
    """
    trajectories = list(trajectories)
    if not trajectories:
        raise ValueError("need at least one trajectory")
    recoil = _hbar_k0_over_mc(wavelength)
    per = []
    for traj in trajectories:
        ux = traj.momenta[:, 0]
        uz = traj.momenta[:, 2]
        delta_pz = float(uz[-1] - uz[0])
        per.append({
            "max_gamma_minus_1": float(np.max(traj.gamma_minus_1)),
            "reflected": bool(np.any(np.sign(ux) != np.sign(ux[0]))),
            "final_delta_pz_mc": delta_pz,
            "final_delta_pz_recoils": delta_pz / recoil,
            "quiver_py_max": float(np.max(np.abs(traj.momenta[:, 1]))),
            "peak_pz_excursion": float(np.max(np.abs(uz - uz[0]))),
        })
    return {
        "trajectories": per,
        "max_gamma_minus_1": max(d["max_gamma_minus_1"] for d in per),
        "any_reflected": any(d["reflected"] for d in per),
        "max_final_delta_pz_mc": max(abs(d["final_delta_pz_mc"])
                                     for d in per),
        "max_final_delta_pz_recoils": max(abs(d["final_delta_pz_recoils"])
                                          for d in per),
    }


def trajectory_rows(traj: Trajectory):
    """Yield (w0t, k0x, k0y, k0z, px_mc, py_mc, pz_mc, gamma_minus_1) rows."""
    for i in range(len(traj)):
        yield (float(traj.times[i]),
               float(traj.positions[i, 0]), float(traj.positions[i, 1]),
               float(traj.positions[i, 2]),
               float(traj.momenta[i, 0]), float(traj.momenta[i, 1]),
               float(traj.momenta[i, 2]), float(traj.gamma_minus_1[i]))
