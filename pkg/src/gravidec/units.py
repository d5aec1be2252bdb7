"""Physical constants and the SI <-> natural-unit boundary.

All public operations of this package take and return SI quantities.  The
kernel and matter modules work internally in natural units (hbar = c = 1,
with the metre kept as the base length), and cross the boundary only through
the converters defined here.  In that system energies, temperatures and
rates are inverse metres, and times are metres.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "PhysicalConstants",
    "CODATA2018",
    "UnitMode",
    "ENERGY_UNITS",
    "NATURAL_KINDS",
    "planck_energy",
    "planck_length",
    "gravitational_coupling",
    "gravitational_constant_natural",
    "thermal_rate_scale",
    "convert_energy",
    "to_natural",
    "from_natural",
]


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants, SI units.

    Defaults are CODATA 2018: hbar (via h), c, k_B and eV are exact SI
    definitions; G is the recommended value.
    """

    hbar: float = 1.054571817e-34  # J s   (h = 6.62607015e-34 J s exact, hbar = h/2pi)
    c: float = 299792458.0         # m/s   (exact)
    G: float = 6.67430e-11         # m^3 kg^-1 s^-2  (CODATA 2018 recommended)
    k_B: float = 1.380649e-23      # J/K   (exact)
    eV: float = 1.602176634e-19    # J     (exact)

    def __post_init__(self):
        for name in ("hbar", "c", "G", "k_B", "eV"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"constant {name} must be strictly positive")

    @classmethod
    def natural(cls) -> "PhysicalConstants":
        """All constants set to one (dimensionless working units)."""
        return cls(hbar=1.0, c=1.0, G=1.0, k_B=1.0, eV=1.0)


CODATA2018 = PhysicalConstants()


class UnitMode(enum.Enum):
    """Unit system selector: SI, or natural units with hbar = c = 1."""

    SI = "SI"
    NATURAL = "natural"


def planck_energy(constants: PhysicalConstants = CODATA2018) -> float:
    """sqrt(hbar c^5 / G) in joules (about 1.956e9 J)."""
    return math.sqrt(constants.hbar * constants.c**5 / constants.G)


def planck_length(constants: PhysicalConstants = CODATA2018) -> float:
    """sqrt(hbar G / c^3) in metres."""
    return math.sqrt(constants.hbar * constants.G / constants.c**3)


def gravitational_constant_natural(constants: PhysicalConstants = CODATA2018) -> float:
    """G in natural units (hbar = c = 1, metre base): hbar G / c^3, in m^2."""
    return constants.hbar * constants.G / constants.c**3


def gravitational_coupling(constants: PhysicalConstants = CODATA2018) -> float:
    """Metric-perturbation coupling sqrt(32 pi G) in natural units (metres).

    With hbar = c = 1 the gravitational constant carries dimension length^2,
    so the coupling is a length: sqrt(32 pi) times the Planck length.
    """
    return math.sqrt(32.0 * math.pi * gravitational_constant_natural(constants))


def thermal_rate_scale(T: float, constants: PhysicalConstants = CODATA2018) -> float:
    """k_B T / hbar in 1/s: the rate unit set by a thermal environment."""
    if T < 0.0:
        raise ValueError(f"temperature must be non-negative, got {T}")
    return constants.k_B * T / constants.hbar


# Energy unit tags accepted by convert_energy.  "kg" is a mass expressed as
# its rest energy (times c^2); "atoms" is a count of 1 eV excitation quanta.
ENERGY_UNITS = ("J", "eV", "GeV", "kg", "atoms")


def _to_joules(x: float, unit: str, constants: PhysicalConstants) -> float:
    if unit == "J":
        return x
    if unit == "eV":
        return x * constants.eV
    if unit == "GeV":
        return x * 1e9 * constants.eV
    if unit == "kg":
        return x * constants.c**2
    if unit == "atoms":
        return x * constants.eV
    raise ValueError(f"unknown energy unit {unit!r}; expected one of {ENERGY_UNITS}")


def convert_energy(
    x: float,
    from_unit: str,
    to_unit: str,
    constants: PhysicalConstants = CODATA2018,
) -> float:
    """Convert an energy between the tags in ENERGY_UNITS (exact factors)."""
    joules = _to_joules(x, from_unit, constants)
    if to_unit == "J":
        return joules
    return joules / _to_joules(1.0, to_unit, constants)


# Quantity kinds understood by the natural-unit converters.
NATURAL_KINDS = ("energy", "temperature", "time", "rate", "length")


def to_natural(
    value: float, kind: str, constants: PhysicalConstants = CODATA2018
) -> float:
    """SI value -> natural units (hbar = c = 1, metre base).

    energy [J] -> 1/m, temperature [K] -> 1/m, time [s] -> m,
    rate [1/s] -> 1/m, length [m] -> m.
    """
    if kind == "energy":
        return value / (constants.hbar * constants.c)
    if kind == "temperature":
        return constants.k_B * value / (constants.hbar * constants.c)
    if kind == "time":
        return constants.c * value
    if kind == "rate":
        return value / constants.c
    if kind == "length":
        return value
    raise ValueError(f"unknown quantity kind {kind!r}; expected one of {NATURAL_KINDS}")


def from_natural(
    value: float, kind: str, constants: PhysicalConstants = CODATA2018
) -> float:
    """Inverse of to_natural."""
    if kind == "energy":
        return value * constants.hbar * constants.c
    if kind == "temperature":
        return value * constants.hbar * constants.c / constants.k_B
    if kind == "time":
        return value / constants.c
    if kind == "rate":
        return value * constants.c
    if kind == "length":
        return value
    raise ValueError(f"unknown quantity kind {kind!r}; expected one of {NATURAL_KINDS}")
