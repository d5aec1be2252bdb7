"""Thermal graviton noise and dissipation kernels.

Everything in this module is expressed in natural units (hbar = c = 1):
separations r, times t and the UV regulator epsilon share one length unit,
and the temperature is an inverse length.  SI inputs cross the boundary
through KernelParams.from_constants.

The two kernels are isotropic mode integrals of the form

    N(r, t) = (kappa/4)^2 (2 pi^2 r)^-1 Int_0^inf dk e^{-eps k} sin(kr) cos(kt) [1 + 2 n(k)]
    D(r, t) = (kappa/4)^2 (2 pi^2 r)^-1 Int_0^inf dk e^{-eps k} sin(kr) sin(kt)

where n(k) = 1/(e^{k/T} - 1) and the angular part of the 3-D mode integral
has been done analytically (verified against a Monte-Carlo 3-D oracle in the
test suite), so only 1-D integrals are ever evaluated.  The vacuum piece is
a regulated closed form; the thermal piece expands the occupation in the
geometric series 1/(e^{k/T}-1) = sum_{m>=1} e^{-m k/T}, which turns every
term into the vacuum closed form with shifted regulator eps + m/T.  The
truncated series is completed with a midpoint-rule integral tail estimate,
and convergence is judged on the stability of the completed sum.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericalError, SeriesNotConverged
from .units import (
    CODATA2018,
    PhysicalConstants,
    gravitational_constant_natural,
    gravitational_coupling,
    to_natural,
)

__all__ = [
    "KernelParams",
    "KernelValue",
    "noise_kernel",
    "dissipation_kernel",
    "time_integrated_noise",
    "time_integrated_limit",
]

_SERIES_BLOCK_MAX = 1 << 16


@dataclass(frozen=True)
class KernelParams:
    """Evaluation parameters, natural units.

    kappa: metric-perturbation coupling sqrt(32 pi G) (a length here);
    temperature: inverse length; epsilon: UV regulator length, required
    because the unregulated vacuum kernel exists only as a distribution;
    tol: absolute tolerance on returned kernel values; n_terms: cap on the
    thermal series length.
    """

    kappa: float
    temperature: float
    epsilon: float
    tol: float = 1e-10
    n_terms: int = 1 << 22

    def __post_init__(self):
        if self.kappa < 0.0:
            raise ValueError(f"kappa must be non-negative, got {self.kappa}")
        if self.temperature < 0.0:
            raise ValueError(f"temperature must be non-negative, got {self.temperature}")
        if not self.epsilon > 0.0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not self.tol > 0.0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.n_terms < 1:
            raise ValueError(f"n_terms must be at least 1, got {self.n_terms}")

    @classmethod
    def from_constants(
        cls,
        T_kelvin: float,
        epsilon: float,
        constants: PhysicalConstants = CODATA2018,
        tol: float = 1e-10,
        n_terms: int = 1 << 22,
    ) -> "KernelParams":
        """Physical parameters: kappa from G, temperature from kelvin."""
        return cls(
            kappa=gravitational_coupling(constants),
            temperature=to_natural(T_kelvin, "temperature", constants),
            epsilon=epsilon,
            tol=tol,
            n_terms=n_terms,
        )

    @property
    def coupling_squared_over_32pi(self) -> float:
        """kappa^2 / (32 pi); equals G when built from physical constants."""
        return self.kappa**2 / (32.0 * math.pi)


@dataclass(frozen=True)
class KernelValue:
    """A kernel amplitude with an absolute error bound and the method used."""

    value: float
    err_estimate: float
    method: str  # "closed_form" | "series" | "quadrature"


def _sum_with_tail(
    term: Callable[[np.ndarray], np.ndarray],
    tail: Callable[[float], float],
    tol: float,
    n_terms: int,
    context: str,
) -> tuple[float, float]:
    """Sum term(m) for m = 1, 2, ... plus a tail estimate past the truncation.

    Stops when the tail-completed sum is stable to tol between blocks.
    """
    total = 0.0
    prev = None
    m_done = 0
    block = 256
    while m_done < n_terms:
        hi = min(m_done + block, n_terms)
        m = np.arange(m_done + 1, hi + 1, dtype=float)
        total += float(np.sum(term(m)))
        m_done = hi
        est = total + tail(m_done + 0.5)
        if prev is not None and abs(est - prev) <= tol:
            return est, abs(est - prev)
        prev = est
        block = min(2 * block, _SERIES_BLOCK_MAX)
    raise SeriesNotConverged(
        f"{context}: thermal series not converged within {n_terms} terms "
        f"(partial sum {prev!r}, last change {abs(est - prev):.3e})",
        partial=prev if prev is not None else total,
        err_bound=abs(est - prev) if prev is not None else math.inf,
    )


def _lorentzian_pair(a_plus: float, a_minus: float, eps: float) -> float:
    # Int_0^inf e^{-eps k} sin(kr) cos(kt) dk with a_plus = r+t, a_minus = r-t
    return 0.5 * (
        a_plus / (eps * eps + a_plus * a_plus)
        + a_minus / (eps * eps + a_minus * a_minus)
    )


def noise_kernel(r: float, t: float, params: KernelParams) -> KernelValue:
    """Symmetric field correlation at separation r and time lag t.

    Even in t.  The vacuum part is the regulated closed form; at T > 0 the
    thermal part is the shifted-regulator series.  r = 0 is evaluated from
    the r -> 0 limit of the radial reduction.
    """
    if r < 0.0:
        raise ValueError(f"separation must be non-negative, got {r}")
    if params.kappa == 0.0:
        return KernelValue(0.0, 0.0, "closed_form")
    eps = params.epsilon
    T = params.temperature

    if r == 0.0:
        # lim_{r->0} (2 pi^2 r)^-1 Int e^{-eps k} sin(kr) cos(kt) [...] dk
        prefactor = (params.kappa / 4.0) ** 2 / (2.0 * math.pi**2)

        def vac0(e: float) -> float:
            return (e * e - t * t) / (e * e + t * t) ** 2

        vacuum = vac0(eps)
        if T == 0.0:
            value = prefactor * vacuum
            err = 32.0 * np.finfo(float).eps * abs(value)
            _check_err(err, params.tol, "noise_kernel")
            return KernelValue(value, err, "closed_form")

        def term(m: np.ndarray) -> np.ndarray:
            em = eps + m / T
            return 2.0 * (em * em - t * t) / (em * em + t * t) ** 2

        def tail(m_edge: float) -> float:
            u0 = eps + m_edge / T
            return 2.0 * T * u0 / (u0 * u0 + t * t)

        inner_tol = params.tol / prefactor
        thermal, therm_err = _sum_with_tail(term, tail, inner_tol, params.n_terms, "noise_kernel")
        value = prefactor * (vacuum + thermal)
        err = prefactor * therm_err + 32.0 * np.finfo(float).eps * abs(value)
        _check_err(err, params.tol, "noise_kernel")
        return KernelValue(value, err, "series")

    prefactor = (params.kappa / 4.0) ** 2 / (2.0 * math.pi**2 * r)
    a_plus, a_minus = r + t, r - t
    vacuum = _lorentzian_pair(a_plus, a_minus, eps)
    if T == 0.0:
        value = prefactor * vacuum
        err = 32.0 * np.finfo(float).eps * abs(value)
        _check_err(err, params.tol, "noise_kernel")
        return KernelValue(value, err, "closed_form")

    def term(m: np.ndarray) -> np.ndarray:
        em = eps + m / T
        return a_plus / (em * em + a_plus * a_plus) + a_minus / (
            em * em + a_minus * a_minus
        )

    def tail(m_edge: float) -> float:
        u0 = eps + m_edge / T
        return T * (math.atan2(a_plus, u0) + math.atan2(a_minus, u0))

    inner_tol = params.tol / prefactor
    thermal, therm_err = _sum_with_tail(term, tail, inner_tol, params.n_terms, "noise_kernel")
    value = prefactor * (vacuum + thermal)
    err = prefactor * therm_err + 32.0 * np.finfo(float).eps * abs(value)
    _check_err(err, params.tol, "noise_kernel")
    return KernelValue(value, err, "series")


def dissipation_kernel(r: float, t: float, params: KernelParams) -> KernelValue:
    """Antisymmetric field correlation; temperature independent.

    Odd in t, sharply peaked near the light cone r = |t| with peak height
    scaling as 1/epsilon.
    """
    if not r > 0.0:
        raise ValueError(f"separation must be positive, got {r}")
    eps = params.epsilon
    prefactor = (params.kappa / 4.0) ** 2 / (2.0 * math.pi**2 * r)
    # Int_0^inf e^{-eps k} sin(kr) sin(kt) dk
    inner = 0.5 * (
        eps / (eps * eps + (r - t) * (r - t)) - eps / (eps * eps + (r + t) * (r + t))
    )
    value = prefactor * inner
    err = 32.0 * np.finfo(float).eps * abs(value)
    _check_err(err, params.tol, "dissipation_kernel")
    return KernelValue(value, err, "closed_form")


def time_integrated_noise(r: float, t_max: float, params: KernelParams) -> KernelValue:
    """Int_0^{t_max} N(r, tau) d tau, term-wise in closed form.

    For k_B T t_max >> 1 and t_max >> r this converges to the r-independent
    long-time limit (kappa/4)^2 T / (2 pi); the vacuum piece is a pure
    transient there.  Emits a warning (not a failure) when t_max is still in
    the transient regime.
    """
    if not r > 0.0:
        raise ValueError(f"separation must be positive, got {r}")
    if t_max < 0.0:
        raise ValueError(f"t_max must be non-negative, got {t_max}")
    if t_max == 0.0 or params.kappa == 0.0:
        return KernelValue(0.0, 0.0, "closed_form")
    eps = params.epsilon
    T = params.temperature
    prefactor = (params.kappa / 4.0) ** 2 / (2.0 * math.pi**2 * r)
    a_plus, a_minus = r + t_max, r - t_max

    vacuum = 0.25 * math.log(
        (eps * eps + a_plus * a_plus) / (eps * eps + a_minus * a_minus)
    )
    if T == 0.0:
        value = prefactor * vacuum
        err = 32.0 * np.finfo(float).eps * abs(value)
        _check_err(err, params.tol, "time_integrated_noise")
        return KernelValue(value, err, "closed_form")

    if t_max < 10.0 * max(r, 1.0 / T):
        warnings.warn(
            "time_integrated_noise: t_max is still in the transient regime "
            f"(t_max = {t_max:g} < 10 max(r, 1/T) = {10.0 * max(r, 1.0 / T):g}); "
            "the long-time limit is not reached",
            stacklevel=2,
        )

    p, q = abs(a_plus), abs(a_minus)

    def term(m: np.ndarray) -> np.ndarray:
        em = eps + m / T
        return 0.5 * np.log((em * em + p * p) / (em * em + q * q))

    def tail(m_edge: float) -> float:
        # T/2 Int_{u0}^inf ln((u^2+p^2)/(u^2+q^2)) du, in closed form
        u0 = eps + m_edge / T
        out = math.pi * (p - q) - u0 * math.log((u0 * u0 + p * p) / (u0 * u0 + q * q))
        out -= 2.0 * p * math.atan2(u0, p)
        if q > 0.0:
            out += 2.0 * q * math.atan2(u0, q)
        return 0.5 * T * out

    inner_tol = params.tol / prefactor
    thermal, therm_err = _sum_with_tail(
        term, tail, inner_tol, params.n_terms, "time_integrated_noise"
    )
    value = prefactor * (vacuum + thermal)
    err = prefactor * therm_err + 32.0 * np.finfo(float).eps * abs(value)
    _check_err(err, params.tol, "time_integrated_noise")
    return KernelValue(value, err, "series")


def time_integrated_limit(params: KernelParams) -> float:
    """Long-time asymptote of time_integrated_noise: (kappa/4)^2 T / (2 pi)."""
    return (params.kappa / 4.0) ** 2 * params.temperature / (2.0 * math.pi)


def _check_err(err: float, tol: float, context: str) -> None:
    if err > tol:
        raise NumericalError(
            f"{context}: achieved error bound {err:.3e} exceeds tolerance {tol:.3e}"
        )
