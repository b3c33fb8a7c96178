"""Electron spin-flip and diffraction in bichromatic standing light waves.

Three cross-checking routes to the same observables:

- :mod:`kdsim.perturbation` -- time-dependent perturbation theory with
  exact Gaussian-pulse phase integrals,
- :mod:`kdsim.pauli` -- direct integration of the Pauli equation on a
  photon-momentum ladder,
- :mod:`kdsim.classical` -- a relativistic classical tracer for the
  spin-averaged deflection background.

:mod:`kdsim.core` holds constants, pulse/electron specifications and the
fitted probability scaling laws; :mod:`kdsim.fields` builds the field
Fourier decompositions both solvers consume; :mod:`kdsim.cli` exposes the
batch entry points.
"""

from .core import (
    CONST,
    Constants,
    ElectronSpec,
    LaserPulseSpec,
    Scenario,
    ScalingLaw,
    ScalingOverflowError,
    ConfigError,
    TABLE_BASELINES,
    TABLE_LAWS,
    derived_quantities,
    load_scenario,
    pulse_from_a0,
    scaling_probability,
)
from .perturbation import (
    AmplitudeAccuracyError,
    ProcessAmplitude,
    Vertex,
    depolarizer_amplitude,
    regular_kd_amplitude,
    skd_amplitude,
    two_color_kd_amplitude,
)
from .pauli import (
    BoundaryLeakError,
    NormDriftError,
    SolverError,
    StepSizeError,
    build_system,
    convergence_check,
    evolve,
    probabilities,
    run_process,
    suggested_ladder,
)
from .classical import (
    ParticleState,
    TracerError,
    Trajectory,
    default_pulses,
    diagnostics,
    ic_grid,
    run_grid,
    run_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "CONST",
    "Constants",
    "ElectronSpec",
    "LaserPulseSpec",
    "Scenario",
    "ScalingLaw",
    "ScalingOverflowError",
    "ConfigError",
    "AmplitudeAccuracyError",
    "ProcessAmplitude",
    "Vertex",
    "TABLE_BASELINES",
    "TABLE_LAWS",
    "depolarizer_amplitude",
    "derived_quantities",
    "load_scenario",
    "pulse_from_a0",
    "regular_kd_amplitude",
    "scaling_probability",
    "skd_amplitude",
    "two_color_kd_amplitude",
    "SolverError",
    "NormDriftError",
    "BoundaryLeakError",
    "StepSizeError",
    "build_system",
    "evolve",
    "probabilities",
    "run_process",
    "suggested_ladder",
    "convergence_check",
    "TracerError",
    "ParticleState",
    "Trajectory",
    "default_pulses",
    "ic_grid",
    "run_trajectory",
    "run_grid",
    "diagnostics",
    "__version__",
]
