"""Gravitationally induced decoherence rates for stationary matter.

A superposition of two stationary configurations with rest energies E and
E' exposed to a thermal graviton background at temperature T loses coherence
at

    Gamma = (k_B T / hbar) ((E - E') / E_P)^2,

with E_P the Planck energy.  The same rate follows from the matter-ball
route: in natural units the interference term decays with prefactor
(T / 2 pi) (kappa/4)^2 (Delta E)^2, and with kappa^2 = 32 pi G the two
expressions are algebraically identical.  Superpositions of equal-energy
configurations do not decohere, regardless of their spatial separation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kernels import KernelParams
from .matter import BallSuperposition, markov_time, rest_energy
from .units import (
    CODATA2018,
    PhysicalConstants,
    from_natural,
    planck_energy,
    thermal_rate_scale,
    to_natural,
)

__all__ = [
    "RateFlags",
    "RateResult",
    "Scenario",
    "ScenarioResult",
    "SCENARIOS",
    "SCENARIO_NAMES",
    "decoherence_rate",
    "dimensional_estimate",
    "rate_from_balls",
    "scenario",
]

# k_B T / (hbar Gamma) >= HIGH_T_MARGIN marks the high-temperature regime
# over a coherence time 1/Gamma.
HIGH_T_MARGIN = 10.0


@dataclass(frozen=True)
class RateFlags:
    """Validity diagnostics; None where the needed input was not supplied."""

    high_T_ok: bool | None = None
    markov_ok: bool | None = None
    compton_ok: bool | None = None

    def to_json_dict(self) -> dict:
        return {
            "high_T_ok": self.high_T_ok,
            "markov_ok": self.markov_ok,
            "compton_ok": self.compton_ok,
        }


@dataclass(frozen=True)
class RateResult:
    """A decoherence rate with its inputs and validity diagnostics."""

    rate: float          # 1/s
    delta_E: float       # J
    temperature: float   # K
    coherence_time: float  # s; inf when the rate vanishes
    markov_time: float | None = None  # s
    flags: RateFlags = RateFlags()

    def to_json_dict(self) -> dict:
        # infinite coherence times serialize as the string "inf" so the JSON
        # stays standard and round-trips byte-identically
        coherence = self.coherence_time if math.isfinite(self.coherence_time) else "inf"
        return {
            "rate_per_s": self.rate,
            "delta_E_J": self.delta_E,
            "T_K": self.temperature,
            "coherence_time_s": coherence,
            "markov_time_s": self.markov_time,
            "flags": self.flags.to_json_dict(),
        }


def _build_result(
    rate: float,
    delta_E: float,
    T: float,
    constants: PhysicalConstants,
    markov: float | None,
    compton_ok: bool | None,
) -> RateResult:
    coherence_time = math.inf if rate == 0.0 else 1.0 / rate
    if rate == 0.0:
        high_T = T > 0.0
    else:
        high_T = constants.k_B * T >= HIGH_T_MARGIN * constants.hbar * rate
    markov_ok = None if markov is None else coherence_time >= markov
    return RateResult(
        rate=rate,
        delta_E=delta_E,
        temperature=T,
        coherence_time=coherence_time,
        markov_time=markov,
        flags=RateFlags(high_T_ok=high_T, markov_ok=markov_ok, compton_ok=compton_ok),
    )


def decoherence_rate(
    delta_E: float,
    T: float,
    constants: PhysicalConstants = CODATA2018,
    markov_time_s: float | None = None,
    compton_ok: bool | None = None,
) -> RateResult:
    """(k_B T / hbar) (delta_E / E_P)^2 with validity diagnostics.

    delta_E in joules, T in kelvin.  Vanishes exactly when delta_E = 0 or
    T = 0: equal-energy superpositions keep their coherence.
    """
    if T < 0.0:
        raise ValueError(f"temperature must be non-negative, got {T}")
    ratio = delta_E / planck_energy(constants)
    rate = thermal_rate_scale(T, constants) * ratio * ratio
    return _build_result(rate, abs(delta_E), T, constants, markov_time_s, compton_ok)


def dimensional_estimate(
    delta_E: float, T: float, constants: PhysicalConstants = CODATA2018
) -> RateResult:
    """Order-of-magnitude estimate (k_B T/hbar)(delta_E/E_P)^2.

    Kept as a named alias of decoherence_rate: the derived rate fixes the
    dimensionless factor of the estimate at exactly one.
    """
    return decoherence_rate(delta_E, T, constants)


def rate_from_balls(
    sup: BallSuperposition,
    T: float,
    params: KernelParams | None = None,
    constants: PhysicalConstants = CODATA2018,
) -> RateResult:
    """Decoherence rate of a two-ball superposition via the field route.

    Computes Delta E from the ball rest energies and applies the natural-unit
    decay prefactor (T/2 pi)(kappa/4)^2 (Delta E)^2, converted to 1/s.  With
    the physical coupling kappa^2 = 32 pi G (the default) this equals
    decoherence_rate(|Delta E|, T) identically; a custom kappa in params
    deliberately moves off that point.
    """
    if T < 0.0:
        raise ValueError(f"temperature must be non-negative, got {T}")
    if params is not None:
        kappa = params.kappa
    else:
        kappa = KernelParams.from_constants(T, epsilon=1e-3, constants=constants).kappa
    delta_e_nat = rest_energy(sup.a) - rest_energy(sup.b)  # 1/m
    t_nat = to_natural(T, "temperature", constants)  # 1/m
    rate_nat = (t_nat / (2.0 * math.pi)) * (kappa / 4.0) ** 2 * delta_e_nat**2  # 1/m
    rate = from_natural(rate_nat, "rate", constants)
    delta_e_si = from_natural(abs(delta_e_nat), "energy", constants)
    compton_ok = sup.a.compton_ok and sup.b.compton_ok
    return _build_result(rate, delta_e_si, T, constants, markov_time(sup, constants), compton_ok)


@dataclass(frozen=True)
class Scenario:
    """A preset: an energy gap described in eV-count form at temperature T."""

    name: str
    delta_E_eV: float
    temperature: float  # K
    expected_order: float  # claimed order of magnitude of the rate, 1/s
    description: str


# The cosmic gravitational-wave background sits near 1 K.  Many-atom systems
# are modelled as all atoms jointly in the ground or the excited state, so
# the gap is the atom count times the 1 eV single-atom gap.
_AVOGADRO = 6.02214076e23

SCENARIOS = {
    "atom_1eV": Scenario(
        name="atom_1eV",
        delta_E_eV=1.0,
        temperature=1.0,
        expected_order=1e-45,
        description="single two-level atom, 1 eV gap",
    ),
    "gram_avogadro": Scenario(
        name="gram_avogadro",
        delta_E_eV=_AVOGADRO,
        temperature=1.0,
        expected_order=1e2,
        description="an Avogadro number of atoms (~1 g), all excited jointly",
    ),
    "kilogram": Scenario(
        name="kilogram",
        delta_E_eV=_AVOGADRO * 1e3,
        temperature=1.0,
        expected_order=1e8,
        description="a kilogram of such atoms, all excited jointly",
    ),
}

SCENARIO_NAMES = tuple(SCENARIOS)


@dataclass(frozen=True)
class ScenarioResult:
    """A preset evaluation with its order-of-magnitude comparison."""

    scenario: Scenario
    result: RateResult

    @property
    def within_order(self) -> bool:
        """Rate within one decade of the claimed order of magnitude."""
        if self.result.rate <= 0.0:
            return False
        return abs(math.log10(self.result.rate) - math.log10(self.scenario.expected_order)) <= 1.0

    def to_json_dict(self) -> dict:
        return {
            "name": self.scenario.name,
            "delta_E_J": self.result.delta_E,
            "T_K": self.result.temperature,
            "rate_per_s": self.result.rate,
            "expected_order": self.scenario.expected_order,
            "within_order": self.within_order,
        }


def scenario(name: str, constants: PhysicalConstants = CODATA2018) -> ScenarioResult:
    """Evaluate one of the preset scenarios by name."""
    try:
        preset = SCENARIOS[name]
    except KeyError:
        raise ValueError(
            f"unknown scenario {name!r}; expected one of {SCENARIO_NAMES}"
        ) from None
    delta_e = preset.delta_E_eV * constants.eV
    result = decoherence_rate(delta_e, preset.temperature, constants)
    return ScenarioResult(scenario=preset, result=result)
