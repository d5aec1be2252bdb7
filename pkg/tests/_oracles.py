"""Independent reference computations for the test suite.

These deliberately avoid the code paths used by the library: kernels are
integrated by direct cell-summed quadrature of the radial integrand (the
library uses closed forms and shifted-regulator series), dephasing exponents
come from closed-form product formulas (the library uses adaptive
quadrature), and rest energies from adaptive 3-D quadrature (the library
uses the closed form).
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import tplquad


def _occupation(k: np.ndarray, T: float) -> np.ndarray:
    """1 + 2 n(k) at natural-unit temperature T, stable for all k > 0."""
    if T == 0.0:
        return np.ones_like(k)
    x = k / T
    out = np.ones_like(k)
    small = x < 700.0
    out[small] += 2.0 * np.exp(-x[small]) / (-np.expm1(-x[small]))
    return out


def _cell_sum(a: float, eps: float, T: float, trig, kmax_factor: float = 40.0) -> float:
    """Int_0^inf e^{-eps k} [1 + 2 n(k)] trig(a k) dk by panelled Gauss quadrature.

    Panels resolve both the oscillation (width <= half period) and the
    envelope structure (regulator decay scale 1/eps and thermal scale T);
    truncating at kmax_factor/eps (and past the thermal decay scale) bounds
    the remainder at the e^-40 level.
    """
    sign = 1.0
    if a < 0.0:
        a = -a
        if trig is np.sin:
            sign = -1.0
    if a == 0.0 and trig is np.sin:
        return 0.0
    k_hi = kmax_factor * max(1.0 / eps, T, 1.0)
    envelope_scale = min(1.0 / eps, T) if T > 0.0 else 1.0 / eps
    h = envelope_scale / 4.0
    if a > 0.0:
        h = min(h, np.pi / a)
    n_cells = int(np.ceil(k_hi / h)) + 1
    edges = np.linspace(0.0, n_cells * h, n_cells + 1)
    x, w = leggauss(24)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * np.diff(edges)
    k = mid[:, None] + half[:, None] * x[None, :]
    f = np.exp(-eps * k) * _occupation(k, T)
    if a > 0.0:
        f = f * trig(a * k)
    elif trig is np.cos:
        pass  # trig(0) = 1: bare envelope
    return sign * float(np.sum(f * w[None, :] * half[:, None]))


def noise_radial_quadrature(r: float, t: float, T: float, eps: float) -> float:
    """Int_0^inf e^{-eps k} sin(kr) cos(kt) [1 + 2 n(k)] dk."""
    return 0.5 * (_cell_sum(r + t, eps, T, np.sin) + _cell_sum(r - t, eps, T, np.sin))


def dissipation_radial_quadrature(r: float, t: float, eps: float) -> float:
    """Int_0^inf e^{-eps k} sin(kr) sin(kt) dk."""
    return 0.5 * (_cell_sum(r - t, eps, 0.0, np.cos) - _cell_sum(r + t, eps, 0.0, np.cos))


def noise_kernel_quadrature(r: float, t: float, T: float, eps: float, kappa: float) -> float:
    return (kappa / 4.0) ** 2 / (2.0 * math.pi**2 * r) * noise_radial_quadrature(r, t, T, eps)


def dissipation_kernel_quadrature(r: float, t: float, eps: float, kappa: float) -> float:
    return (kappa / 4.0) ** 2 / (2.0 * math.pi**2 * r) * dissipation_radial_quadrature(r, t, eps)


def mc_mode_integral(
    r: float, t: float, eps: float, n_samples: int, seed: int
) -> tuple[float, float]:
    """Monte-Carlo estimate of Int d^3k/(2pi)^3 e^{i k.r} e^{-eps k} cos(kt)/k.

    Importance-samples |k| from the Gamma(3, 1/eps) density matching the
    d^3k measure times the regulator, directions uniformly.  Returns the
    estimate and its standard error.
    """
    rng = np.random.default_rng(seed)
    k = rng.gamma(3.0, 1.0 / eps, size=n_samples)
    mu = rng.uniform(-1.0, 1.0, size=n_samples)  # cosine of the angle to r
    const = (2.0 / eps**3) * 4.0 * np.pi / (2.0 * np.pi) ** 3
    vals = const * np.cos(k * r * mu) * np.cos(k * t) / k
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n_samples))


def rest_energy_quadrature(
    m: float, phi0: float, R: float, center=(0.0, 0.0, 0.0), epsrel: float = 1e-12
) -> float:
    """Adaptive 3-D quadrature of (1/2) m^2 phi(r)^2 over a +-7.5R box."""
    cx, cy, cz = center
    L = 7.5 * R

    def integrand(z, y, x):
        d2 = (x - cx) ** 2 + (y - cy) ** 2 + (z - cz) ** 2
        return 0.5 * m**2 * phi0**2 * math.exp(-d2 / R**2)

    val, _ = tplquad(
        integrand, cx - L, cx + L, cy - L, cy + L, cz - L, cz + L,
        epsabs=1e-14, epsrel=epsrel,
    )
    return val


def log_sinh(x: float) -> float:
    """ln(sinh x) for x > 0 without overflow."""
    if x > 30.0:
        return x - math.log(2.0) + math.log1p(-math.exp(-2.0 * x))
    return math.log(math.sinh(x))


def thermal_exponent_closed(C: float, thermal_freq: float, t: float, dn: int) -> float:
    """Closed form of the thermal dephasing exponent.

    (C/pi) dn^2 ln(sinh(pi t/beta) / (pi t/beta)) with beta = 1/thermal_freq,
    from the product representation of sinh applied to the mode sum.
    """
    if t == 0.0:
        return 0.0
    x = math.pi * t * thermal_freq
    return (C / math.pi) * dn**2 * (log_sinh(x) - math.log(x))


def vacuum_exponent_closed(C: float, cutoff: float, t: float, dn: int) -> float:
    """(C/(2 pi)) dn^2 ln(1 + (w_c t)^2): the cutoff-regulated vacuum part."""
    return (C / (2.0 * math.pi)) * dn**2 * math.log1p((cutoff * t) ** 2)


def dephasing_coefficient_closed(C: float, thermal_freq: float, t: float) -> float:
    """(C/pi) [pi/beta coth(pi t/beta) - 1/t], the thermal time-local rate."""
    if t == 0.0:
        return 0.0
    beta = 1.0 / thermal_freq
    return (C / math.pi) * (math.pi / beta / math.tanh(math.pi * t / beta) - 1.0 / t)
