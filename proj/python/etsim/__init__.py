"""Energy-time entangled photon pairs versus classical light.

Units are dimensionless: frequencies in units of a reference bandwidth,
times in its inverse. Bandwidths are 1/e spectral amplitude half-widths.
"""

import json

from ._core import (
    DispersiveMedium,
    EtsimError,
    InterferometerSetup,
    InvalidArgument,
    NumericalGuardError,
    PhaseModulator,
    classical_visibility_bound,
    delta_squared_classical,
    delta_squared_monte_carlo,
    identical_dispersion_experiment,
    ou_mandel_simulate,
    quantum_chsh,
    quantum_coincidence_rate,
    quantum_modulation,
    quantum_timing_width,
    quantum_visibility,
    sigma_C_closed_form,
    sigma_C_gaussian_pulses,
    sigma_T_closed_form,
    simulate_pulse_train,
)
from . import _core

__all__ = [
    "DispersiveMedium",
    "EtsimError",
    "InterferometerSetup",
    "InvalidArgument",
    "NumericalGuardError",
    "PhaseModulator",
    "RunResult",
    "classical_visibility_bound",
    "delta_squared_classical",
    "delta_squared_monte_carlo",
    "identical_dispersion_experiment",
    "ou_mandel_simulate",
    "quantum_chsh",
    "quantum_coincidence_rate",
    "quantum_modulation",
    "quantum_timing_width",
    "quantum_visibility",
    "run",
    "sigma_C_closed_form",
    "sigma_C_gaussian_pulses",
    "sigma_T_closed_form",
    "simulate_pulse_train",
]


class RunResult:
    """Output of one CLI-equivalent experiment run."""

    def __init__(self, data, sidecars, summary):
        self.data = data
        self.sidecars = dict(sidecars)
        self.summary = summary

    def json(self):
        return json.loads(self.data)


def run(experiment, parameters=None, *, seed=1, trials=None, threads=1, format="csv"):
    """Run an experiment exactly as `etsim <experiment>` would."""
    data, sidecars, summary = _core._run(
        experiment, json.dumps(parameters or {}), seed, trials, threads, format
    )
    return RunResult(data, sidecars, summary)
