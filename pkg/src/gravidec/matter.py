"""Gaussian matter-ball coherent states.

A ball is a static Gaussian field expectation profile

    <phi(r)> = phi0 exp(-(r - r0)^2 / (2 R^2)),    <phi_dot(r)> = 0,

built from the coherent mode amplitude

    alpha(k) = phi0 R^3 sqrt(omega_m(k)/2) exp(-i k.r0 - (k R)^2 / 2),

with omega_m(k) = sqrt(m^2 + k^2).  Natural units throughout (hbar = c = 1,
metre base): lengths in metres, the mass parameter m an inverse length, and
energies inverse lengths; SI wrappers convert at the boundary.  Profiles are
taken as static (spatial spreading neglected), matching the stationary
regime the decoherence-rate formula addresses.

In the non-relativistic, stationary limit the energy density is dominated
by (1/2) m^2 phi^2, so the rest energy has the closed form

    E = (1/2) m^2 phi0^2 pi^(3/2) R^3.

The prefactor pi^(3/2) is fixed by direct 3-D quadrature of the energy
density (see the test suite), which is the value this module adopts.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import GridCoverageError
from .units import CODATA2018, PhysicalConstants, from_natural

__all__ = [
    "GaussianBall",
    "BallSuperposition",
    "FieldConfiguration",
    "field_expectation",
    "field_velocity_expectation",
    "coherent_amplitude",
    "rest_energy",
    "rest_energy_si",
    "energy_density",
    "markov_time",
    "coordinate_wavefunctional_exponent",
    "ball_profile_configuration",
    "profile_rows",
]

# R m >= COMPTON_MARGIN marks the radius as safely larger than the reduced
# Compton wavelength 1/m, the regime where the rest energy dominates.
COMPTON_MARGIN = 100.0

MARKOV_SAFETY_FACTOR = 10.0


@dataclass(frozen=True)
class GaussianBall:
    """Parameters of one Gaussian matter ball, natural units.

    phi0: field amplitude; r0: centre position (length units);
    radius: profile width R; mass: field mass parameter (inverse length).
    """

    phi0: float
    radius: float
    mass: float
    r0: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        if not self.phi0 > 0.0:
            raise ValueError(f"phi0 must be positive, got {self.phi0}")
        if not self.radius > 0.0:
            raise ValueError(f"radius must be positive, got {self.radius}")
        if not self.mass > 0.0:
            raise ValueError(f"mass must be positive, got {self.mass}")
        if len(self.r0) != 3:
            raise ValueError(f"r0 must have three components, got {self.r0!r}")
        object.__setattr__(self, "r0", tuple(float(x) for x in self.r0))

    @property
    def compton_product(self) -> float:
        """R m: ball radius in units of the reduced Compton wavelength."""
        return self.radius * self.mass

    @property
    def compton_ok(self) -> bool:
        return self.compton_product >= COMPTON_MARGIN


@dataclass(frozen=True)
class BallSuperposition:
    """Two ball states of the same field species prepared in superposition."""

    a: GaussianBall
    b: GaussianBall

    def __post_init__(self):
        if self.a.mass != self.b.mass:
            raise ValueError(
                "superposed balls must share the same mass parameter, got "
                f"{self.a.mass} and {self.b.mass}"
            )


@dataclass(frozen=True, eq=False)
class FieldConfiguration:
    """A field configuration sampled on a uniform Cartesian grid.

    x, y, z are the 1-D axis coordinates (uniform spacing), values the
    sampled field with shape (len(x), len(y), len(z)).
    """

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("x", "y", "z"):
            ax = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, ax)
            if ax.ndim != 1 or ax.size < 2:
                raise ValueError(f"axis {name} must be 1-D with at least 2 points")
            steps = np.diff(ax)
            if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
                raise ValueError(f"axis {name} must be uniformly spaced")
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        expected = (self.x.size, self.y.size, self.z.size)
        if vals.shape != expected:
            raise ValueError(f"values shape {vals.shape} != grid shape {expected}")

    @property
    def spacing(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def voxel_volume(self) -> float:
        return float((self.x[1] - self.x[0]) * (self.y[1] - self.y[0]) * (self.z[1] - self.z[0]))


def field_expectation(ball: GaussianBall, r) -> np.ndarray | float:
    """Mean field phi0 exp(-(r - r0)^2 / (2 R^2)); r has shape (..., 3)."""
    r = np.asarray(r, dtype=float)
    d2 = np.sum((r - np.array(ball.r0)) ** 2, axis=-1)
    out = ball.phi0 * np.exp(-d2 / (2.0 * ball.radius**2))
    return float(out) if out.ndim == 0 else out


def field_velocity_expectation(ball: GaussianBall, r) -> np.ndarray | float:
    """Mean field velocity: identically zero for these static profiles."""
    r = np.asarray(r, dtype=float)
    out = np.zeros(r.shape[:-1])
    return float(out) if out.ndim == 0 else out


def coherent_amplitude(ball: GaussianBall, k) -> np.ndarray | complex:
    """Mode amplitude alpha(k); k has shape (..., 3).

    The modulus is independent of the centre r0, which enters only through
    the translation phase.
    """
    k = np.asarray(k, dtype=float)
    k2 = np.sum(k * k, axis=-1)
    omega = np.sqrt(ball.mass**2 + k2)
    phase = np.exp(-1j * np.sum(k * np.array(ball.r0), axis=-1))
    out = ball.phi0 * ball.radius**3 * np.sqrt(omega / 2.0) * phase * np.exp(
        -k2 * ball.radius**2 / 2.0
    )
    return complex(out) if out.ndim == 0 else out


def rest_energy(ball: GaussianBall) -> float:
    """Rest energy (1/2) m^2 phi0^2 pi^(3/2) R^3, natural units (1/length).

    Valid in the regime R m >> 1, where the mass term dominates the energy
    density; warns when the ball is outside that regime.
    """
    if not ball.compton_ok:
        warnings.warn(
            f"ball radius is not large against the Compton wavelength "
            f"(R m = {ball.compton_product:g} < {COMPTON_MARGIN:g}); the rest-energy "
            "formula assumes the mass term dominates",
            stacklevel=2,
        )
    return 0.5 * ball.mass**2 * ball.phi0**2 * math.pi**1.5 * ball.radius**3


def rest_energy_si(ball: GaussianBall, constants: PhysicalConstants = CODATA2018) -> float:
    """Rest energy in joules (natural lengths interpreted as metres)."""
    return from_natural(rest_energy(ball), "energy", constants)


def energy_density(ball: GaussianBall, r) -> np.ndarray | float:
    """Dominant (non-relativistic, stationary) energy density (1/2) m^2 phi^2."""
    phi = field_expectation(ball, r)
    return 0.5 * ball.mass**2 * phi**2


def markov_time(
    sup: BallSuperposition, constants: PhysicalConstants = CODATA2018
) -> float:
    """Time (s) after which memory of the initial transient is negligible.

    A signal crossing the superposition's spatial extent sets the scale:
    safety_factor * max(|r0_a - r0_b|, R_a, R_b) / c.
    """
    dr = np.array(sup.a.r0) - np.array(sup.b.r0)
    extent = max(float(np.linalg.norm(dr)), sup.a.radius, sup.b.radius)
    return MARKOV_SAFETY_FACTOR * extent / constants.c


def ball_profile_configuration(
    ball: GaussianBall,
    half_extent: float | None = None,
    spacing: float | None = None,
) -> FieldConfiguration:
    """Sample the ball's own profile on a grid suitable for overlap integrals.

    Defaults: half extent 3R on each side of the centre, spacing R/8.
    """
    if half_extent is None:
        half_extent = 3.0 * ball.radius
    if spacing is None:
        spacing = ball.radius / 8.0
    n = int(math.ceil(2.0 * half_extent / spacing)) + 1
    axes = [np.linspace(c - half_extent, c + half_extent, n) for c in ball.r0]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    return FieldConfiguration(axes[0], axes[1], axes[2], field_expectation(ball, grid))


def _check_grid_coverage(ball: GaussianBall, config: FieldConfiguration) -> None:
    R = ball.radius
    for name, ax, c in (("x", config.x, ball.r0[0]), ("y", config.y, ball.r0[1]), ("z", config.z, ball.r0[2])):
        if ax[0] > c - 3.0 * R + 1e-12 * R or ax[-1] < c + 3.0 * R - 1e-12 * R:
            raise GridCoverageError(
                f"grid axis {name} spans [{ax[0]:g}, {ax[-1]:g}] but must cover at "
                f"least 3R = {3.0 * R:g} on both sides of the ball centre {c:g}"
            )
    if config.spacing > R / 8.0 + 1e-12 * R:
        raise GridCoverageError(
            f"grid spacing {config.spacing:g} exceeds R/8 = {R / 8.0:g}; the profile "
            "is under-resolved"
        )


def profile_rows(ball: GaussianBall, config: FieldConfiguration | None = None):
    """Yield (x, y, z, phi, t00) over a grid for plotting/export.

    Uses the ball's default profile grid when none is given.
    """
    if config is None:
        config = ball_profile_configuration(ball)
    grid = np.stack(np.meshgrid(config.x, config.y, config.z, indexing="ij"), axis=-1)
    phi = field_expectation(ball, grid)
    t00 = 0.5 * ball.mass**2 * phi**2
    for ix in range(config.x.size):
        for iy in range(config.y.size):
            for iz in range(config.z.size):
                yield (
                    float(config.x[ix]),
                    float(config.y[iy]),
                    float(config.z[iz]),
                    float(phi[ix, iy, iz]),
                    float(t00[ix, iy, iz]),
                )


def coordinate_wavefunctional_exponent(
    ball: GaussianBall, phi_config: FieldConfiguration
) -> float:
    """Exponent of the field-coordinate overlap with the ball state.

    In the R m >> 1 regime the overlap is exp of

        -(m/2) Int d^3r (phi(r) - phi0 exp(-(r - r0)^2/(2 R^2)))^2,

    evaluated by plain quadrature on the configuration's grid.  Zero exactly
    when the configuration equals the ball's own profile; strictly negative
    otherwise.
    """
    _check_grid_coverage(ball, phi_config)
    if not ball.compton_ok:
        warnings.warn(
            f"overlap exponent outside its validity regime (R m = "
            f"{ball.compton_product:g} < {COMPTON_MARGIN:g})",
            stacklevel=2,
        )
    grid = np.stack(
        np.meshgrid(phi_config.x, phi_config.y, phi_config.z, indexing="ij"), axis=-1
    )
    diff = phi_config.values - field_expectation(ball, grid)
    integral = float(np.sum(diff * diff)) * phi_config.voxel_volume
    return -0.5 * ball.mass * integral
