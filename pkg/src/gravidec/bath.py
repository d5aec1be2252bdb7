"""Ohmic bath spectral density and thermal occupation numbers."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .units import CODATA2018, PhysicalConstants

__all__ = ["OhmicBath", "spectral_density", "bose_occupation"]


@dataclass(frozen=True)
class OhmicBath:
    """Ohmic environment: coupling density linear in frequency.

    coupling is the dimensionless strength C, omega0 the reference angular
    frequency (rad/s).  cutoff, when set, is the angular frequency of an
    exponential UV suppression exp(-omega/cutoff); it is a numerical
    regulator knob, not part of the physical model.
    """

    coupling: float
    omega0: float
    cutoff: float | None = None

    def __post_init__(self):
        if self.coupling < 0.0:
            raise ValueError(f"coupling must be non-negative, got {self.coupling}")
        if not self.omega0 > 0.0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        if self.cutoff is not None and not self.cutoff > 0.0:
            raise ValueError(f"cutoff must be positive when given, got {self.cutoff}")


def spectral_density(bath: OhmicBath, omega: float) -> float:
    """Coupling density C * omega / omega0^2, optionally cut off.

    Linear in omega below the cutoff; multiplied by exp(-omega/cutoff) when
    an exponential cutoff is active.
    """
    if omega < 0.0:
        raise ValueError(f"omega must be non-negative, got {omega}")
    j = bath.coupling * omega / bath.omega0**2
    if bath.cutoff is not None:
        j *= math.exp(-omega / bath.cutoff)
    return j


def bose_occupation(
    omega: float, T: float, constants: PhysicalConstants = CODATA2018
) -> float:
    """Thermal occupation 1/(exp(hbar omega / k_B T) - 1).

    Returns 0 at T = 0.  omega = 0 with T > 0 is rejected: the occupation
    diverges there and callers must handle the k -> 0 region analytically.
    """
    if T < 0.0:
        raise ValueError(f"temperature must be non-negative, got {T}")
    if omega <= 0.0:
        raise ValueError(
            f"omega must be positive, got {omega} (occupation diverges at omega = 0)"
        )
    if T == 0.0:
        return 0.0
    x = constants.hbar * omega / (constants.k_B * T)
    if x > 700.0:
        return 0.0
    return 1.0 / math.expm1(x)
