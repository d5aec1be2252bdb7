"""Gravitationally induced decoherence of stationary matter superpositions.

Library layout:

* units       -- constants (CODATA 2018) and the SI <-> natural boundary
* bath        -- Ohmic spectral density and thermal occupation
* dephasing   -- number-basis dephasing: closed form plus numerical checks
* kernels     -- thermal graviton noise/dissipation kernels
* matter      -- Gaussian matter-ball coherent states
* decoherence -- decoherence rates and the preset scenarios
* cli         -- the ``gravidec`` command-line frontend
"""

from .bath import OhmicBath, bose_occupation, spectral_density
from .decoherence import (
    RateFlags,
    RateResult,
    SCENARIO_NAMES,
    Scenario,
    ScenarioResult,
    decoherence_rate,
    dimensional_estimate,
    rate_from_balls,
    scenario,
)
from .dephasing import (
    DEPHASING_EXPONENT_PREFACTOR,
    DephasingRun,
    FockDensityMatrix,
    analytic_propagate,
    exact_dephasing_exponent,
    numeric_propagate,
    purity,
)
from .errors import (
    GridCoverageError,
    IntegratorFailure,
    NumericalError,
    QuadratureNotConverged,
    SeriesNotConverged,
)
from .kernels import (
    KernelParams,
    KernelValue,
    dissipation_kernel,
    noise_kernel,
    time_integrated_limit,
    time_integrated_noise,
)
from .matter import (
    BallSuperposition,
    FieldConfiguration,
    GaussianBall,
    ball_profile_configuration,
    coherent_amplitude,
    coordinate_wavefunctional_exponent,
    energy_density,
    field_expectation,
    field_velocity_expectation,
    markov_time,
    rest_energy,
    rest_energy_si,
)
from .units import (
    CODATA2018,
    PhysicalConstants,
    UnitMode,
    convert_energy,
    from_natural,
    gravitational_coupling,
    planck_energy,
    planck_length,
    thermal_rate_scale,
    to_natural,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # units
    "PhysicalConstants", "CODATA2018", "UnitMode", "planck_energy", "planck_length",
    "gravitational_coupling", "thermal_rate_scale", "convert_energy",
    "to_natural", "from_natural",
    # bath
    "OhmicBath", "spectral_density", "bose_occupation",
    # dephasing
    "DEPHASING_EXPONENT_PREFACTOR", "FockDensityMatrix", "DephasingRun",
    "analytic_propagate", "exact_dephasing_exponent", "numeric_propagate", "purity",
    # kernels
    "KernelParams", "KernelValue", "noise_kernel", "dissipation_kernel",
    "time_integrated_noise", "time_integrated_limit",
    # matter
    "GaussianBall", "BallSuperposition", "FieldConfiguration",
    "field_expectation", "field_velocity_expectation", "coherent_amplitude",
    "rest_energy", "rest_energy_si", "energy_density", "markov_time",
    "coordinate_wavefunctional_exponent", "ball_profile_configuration",
    # decoherence
    "RateFlags", "RateResult", "Scenario", "ScenarioResult", "SCENARIO_NAMES",
    "decoherence_rate", "dimensional_estimate", "rate_from_balls", "scenario",
    # errors
    "NumericalError", "SeriesNotConverged", "QuadratureNotConverged",
    "IntegratorFailure", "GridCoverageError",
]
