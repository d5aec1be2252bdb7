"""Energy-coupled oscillator dephasing on a truncated number basis.

An oscillator whose occupation number couples linearly to an Ohmic thermal
bath loses coherence between number states without exchanging energy: the
populations rho_nn are exact constants of motion while each coherence decays.
In the weak-coupling, high-temperature, long-time regime the decay is a pure
exponential,

    rho_{n,m}(t) = exp(-i omega0 (n-m) t) exp(-C (k_B T/hbar) (n-m)^2 t) rho_{n,m}(0),

which analytic_propagate applies directly.  Two independent numerical routes
check it:

* exact_dephasing_exponent evaluates the finite-time decay exponent

      Lambda(t) = a (dn)^2 Int_0^inf dw j(w) (w0^2/w^2) coth(hbar w / 2 k_B T) (1 - cos wt)

  by adaptive quadrature, where j is the bath's coupling density.  The
  order-unity prefactor a depends on spectral-density bookkeeping
  conventions and cannot be read off reliably from rate statements alone;
  it is pinned once against numeric_propagate (see below) and frozen as
  DEPHASING_EXPONENT_PREFACTOR = 1/pi, with a test locking it.  With that
  value Lambda(t) -> C (k_B T/hbar) (dn)^2 t at high temperature and long
  times, so the exponential rate carries prefactor exactly one.

* numeric_propagate integrates the second-order time-local generator

      d rho/dt = -gamma(t) [N, [N, rho]]        (interaction picture)

  with N the number operator and gamma(t) the running integral of the real
  part of the bath correlation function, evaluated from the geometric-series
  expansion of the thermal occupation with an integral tail estimate.

For a cutoff-free Ohmic bath the vacuum (zero-temperature) part of the
exponent is UV log-divergent, so both numerical routes include it only when
the bath carries an explicit exponential cutoff; without one they evaluate
the thermal part, which is what the high-temperature rate probes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad, solve_ivp

from .bath import OhmicBath
from .errors import IntegratorFailure, QuadratureNotConverged
from .units import CODATA2018, PhysicalConstants

__all__ = [
    "DEPHASING_EXPONENT_PREFACTOR",
    "DEFAULT_N_MAX",
    "FockDensityMatrix",
    "DephasingRun",
    "analytic_propagate",
    "analytic_decay_rate",
    "exact_dephasing_exponent",
    "numeric_propagate",
    "purity",
    "fit_decay_rate",
    "evolution_rows",
]

# Convention constant of the dephasing exponent, pinned once against the
# time-local numerical propagator and frozen; a locking test guards it.
DEPHASING_EXPONENT_PREFACTOR = 1.0 / math.pi

DEFAULT_N_MAX = 16

# k_B T >= HIGH_T_MARGIN * hbar * omega0 marks the high-temperature regime.
HIGH_T_MARGIN = 10.0

_HERMITICITY_TOL = 1e-12
_TRACE_TOL = 1e-12
_EIGMIN_TOL = -1e-10
_TAIL_MASS_TOL = 1e-8


class FockDensityMatrix:
    """Density matrix on the truncated number basis {|0>, ..., |N_max>}.

    Validates hermiticity, unit trace and positivity on construction.
    """

    def __init__(self, matrix: np.ndarray):
        m = np.asarray(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > _HERMITICITY_TOL:
            raise ValueError("density matrix is not hermitian")
        if abs(np.trace(m).real - 1.0) > _TRACE_TOL or abs(np.trace(m).imag) > _TRACE_TOL:
            raise ValueError(f"density matrix trace {np.trace(m)} is not 1")
        eigmin = float(np.min(np.linalg.eigvalsh(m)))
        if eigmin < _EIGMIN_TOL:
            raise ValueError(f"density matrix is not positive semidefinite (min eig {eigmin:g})")
        self.matrix = m
        self.matrix.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_pure(cls, amplitudes: dict[int, complex], dim: int | None = None) -> "FockDensityMatrix":
        """Pure state from {n: amplitude}; amplitudes are normalized."""
        if not amplitudes:
            raise ValueError("amplitudes must be non-empty")
        n_top = max(amplitudes)
        if min(amplitudes) < 0:
            raise ValueError("number-state labels must be non-negative")
        if dim is None:
            dim = max(n_top + 1, DEFAULT_N_MAX + 1)
        if n_top >= dim:
            raise ValueError(f"state occupies |{n_top}> but dim is {dim}")
        psi = np.zeros(dim, dtype=complex)
        for n, amp in amplitudes.items():
            psi[n] = amp
        norm = np.linalg.norm(psi)
        if norm == 0.0:
            raise ValueError("state vector has zero norm")
        psi /= norm
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def diagonal(cls, populations) -> "FockDensityMatrix":
        p = np.asarray(populations, dtype=float)
        return cls(np.diag(p / np.sum(p)).astype(complex))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "FockDensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)


@dataclass(frozen=True)
class DephasingRun:
    """One dephasing evolution: bath, temperature, system frequency, times."""

    bath: OhmicBath
    temperature: float  # K
    omega0: float       # system angular frequency, rad/s
    t_grid: tuple[float, ...]
    constants: PhysicalConstants = CODATA2018

    def __post_init__(self):
        if self.temperature < 0.0:
            raise ValueError(f"temperature must be non-negative, got {self.temperature}")
        if not self.omega0 > 0.0:
            raise ValueError(f"omega0 must be positive, got {self.omega0}")
        grid = tuple(float(t) for t in self.t_grid)
        if len(grid) == 0:
            raise ValueError("t_grid must be non-empty")
        if grid[0] < 0.0 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ValueError("t_grid must be strictly increasing and non-negative")
        object.__setattr__(self, "t_grid", grid)

    @property
    def high_T(self) -> bool:
        return (
            self.constants.k_B * self.temperature
            >= HIGH_T_MARGIN * self.constants.hbar * self.omega0
        )

    @property
    def thermal_frequency(self) -> float:
        """k_B T / hbar in 1/s."""
        return self.constants.k_B * self.temperature / self.constants.hbar


def analytic_decay_rate(run: DephasingRun, n: int, ntilde: int) -> float:
    """High-temperature coherence decay rate C (k_B T/hbar) (n - ntilde)^2."""
    return run.bath.coupling * run.thermal_frequency * (n - ntilde) ** 2


def analytic_propagate(
    rho0: FockDensityMatrix, run: DephasingRun, t: float
) -> FockDensityMatrix:
    """High-temperature propagation: free phase times exponential decay.

    Diagonal entries are exactly unchanged; the coherence (n, m) picks up
    exp(-i omega0 (n-m) t) exp(-C (k_B T/hbar) (n-m)^2 t).
    """
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t}")
    n = np.arange(rho0.dim)
    dn = n[:, None] - n[None, :]
    phase = np.exp(-1j * run.omega0 * dn * t)
    decay = np.exp(-run.bath.coupling * run.thermal_frequency * dn.astype(float) ** 2 * t)
    return FockDensityMatrix(rho0.matrix * phase * decay)


def _thermal_exponent_quad(tau: float) -> tuple[float, float]:
    """Int_0^inf dx 2/(e^x - 1) (1 - cos(tau x))/x by adaptive quadrature.

    x is frequency in thermal units (hbar w / k_B T) and tau = t k_B T/hbar.
    Splits at the first oscillation period; the oscillatory remainder uses
    cycle-accelerated Fourier quadrature.
    """
    if tau == 0.0:
        return 0.0, 0.0

    def occ2(x: float) -> float:
        # 2/(e^x - 1), stable for large x
        if x > 700.0:
            return 0.0
        return 2.0 * math.exp(-x) / (-math.expm1(-x))

    def head(x: float) -> float:
        if x == 0.0:
            return tau * tau  # x -> 0 limit of the integrand
        s = math.sin(0.5 * tau * x)
        return occ2(x) * 2.0 * s * s / x

    x1 = min(2.0 * math.pi / tau, 40.0)
    a_val, a_err = quad(head, 0.0, x1, limit=400, epsabs=1e-14, epsrel=1e-12)

    def smooth(x: float) -> float:
        return occ2(x) / x

    if x1 < 1.0:
        b1, e1 = quad(smooth, x1, 1.0, limit=400, epsabs=1e-14, epsrel=1e-12)
        b2, e2 = quad(smooth, 1.0, 60.0, limit=200, epsabs=1e-14, epsrel=1e-12)
        b_val, b_err = b1 + b2, e1 + e2
    else:
        b_val, b_err = quad(smooth, x1, 60.0, limit=200, epsabs=1e-14, epsrel=1e-12)
    with warnings.catch_warnings():
        # the returned error estimate is checked against the tolerance
        # contract; the per-cycle behaviour warning adds nothing
        warnings.simplefilter("ignore", IntegrationWarning)
        c_val, c_err = quad(smooth, x1, np.inf, weight="cos", wvar=tau, limit=800, epsabs=1e-14, epsrel=1e-12)
    return a_val + b_val - c_val, a_err + b_err + c_err


def _vacuum_exponent_quad(theta: float) -> tuple[float, float]:
    """Int_0^inf dy e^{-y} (1 - cos(theta y))/y, with y = w/w_c, theta = w_c t."""
    if theta == 0.0:
        return 0.0, 0.0

    def head(y: float) -> float:
        if y == 0.0:
            return theta * theta
        s = math.sin(0.5 * theta * y)
        return math.exp(-y) * 2.0 * s * s / y

    y1 = min(2.0 * math.pi / theta, 40.0)
    a_val, a_err = quad(head, 0.0, y1, limit=400, epsabs=1e-14, epsrel=1e-12)

    def smooth(y: float) -> float:
        return math.exp(-y) / y

    if y1 < 1.0:
        b1, e1 = quad(smooth, y1, 1.0, limit=400, epsabs=1e-14, epsrel=1e-12)
        b2, e2 = quad(smooth, 1.0, 60.0, limit=200, epsabs=1e-14, epsrel=1e-12)
        b_val, b_err = b1 + b2, e1 + e2
    else:
        b_val, b_err = quad(smooth, y1, 60.0, limit=200, epsabs=1e-14, epsrel=1e-12)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        c_val, c_err = quad(smooth, y1, np.inf, weight="cos", wvar=theta, limit=800, epsabs=1e-14, epsrel=1e-12)
    return a_val + b_val - c_val, a_err + b_err + c_err


def exact_dephasing_exponent(
    run: DephasingRun,
    delta_n: int,
    t: float,
    include_vacuum: bool | None = None,
    tol: float | None = None,
) -> float:
    """Finite-time decay exponent Lambda(t) of the coherence (n, n + delta_n).

    Lambda(0) = 0, Lambda is non-decreasing, and at high temperature and
    long times Lambda(t)/t approaches C (k_B T/hbar) (delta_n)^2.

    include_vacuum: None includes the zero-temperature part exactly when the
    bath has an exponential cutoff (without one that part is UV divergent
    and requesting it raises).  tol defaults to 1e-10 * max(1, Lambda);
    failing to meet it raises QuadratureNotConverged with the achieved
    error estimate.
    """
    if t < 0.0:
        raise ValueError(f"t must be non-negative, got {t}")
    if include_vacuum is None:
        include_vacuum = run.bath.cutoff is not None
    if include_vacuum and run.bath.cutoff is None:
        raise ValueError(
            "the vacuum part of the dephasing exponent is UV divergent for a "
            "cutoff-free Ohmic bath; set an exponential cutoff to include it"
        )
    if delta_n == 0 or t == 0.0:
        return 0.0

    pref = DEPHASING_EXPONENT_PREFACTOR * run.bath.coupling * delta_n**2
    value = 0.0
    err = 0.0

    if run.temperature > 0.0:
        tau = t * run.thermal_frequency
        v, e = _thermal_exponent_quad(tau)
        value += pref * v
        err += pref * e

    if include_vacuum:
        theta = run.bath.cutoff * t
        v, e = _vacuum_exponent_quad(theta)
        value += pref * v
        err += pref * e

    tol_eff = tol if tol is not None else 1e-10 * max(1.0, abs(value))
    if err > tol_eff:
        raise QuadratureNotConverged(
            f"dephasing exponent quadrature achieved error {err:.3e} "
            f"> tolerance {tol_eff:.3e}",
            value=value,
            err_estimate=err,
        )
    return value


def _dephasing_coefficient(run: DephasingRun, t: float) -> float:
    """Time-local decay coefficient gamma(t), 1/s.

    Running integral of the real part of the bath correlation function:
    the thermal part is the geometric series (2C/pi) sum_m t/(t^2 + (m beta)^2)
    completed with its integral tail; the vacuum part, present only with a
    cutoff, is (C/pi) t/(t^2 + 1/w_c^2).
    """
    if t == 0.0:
        return 0.0
    C = run.bath.coupling
    gamma = 0.0
    if run.temperature > 0.0:
        beta = 1.0 / run.thermal_frequency  # hbar/(k_B T), seconds
        total = 0.0
        prev = None
        m_done = 0
        block = 256
        while True:
            m = np.arange(m_done + 1, m_done + block + 1, dtype=float)
            total += float(np.sum(t / (t * t + (m * beta) ** 2)))
            m_done += block
            tail = (1.0 / beta) * math.atan2(t, (m_done + 0.5) * beta)
            est = total + tail
            if prev is not None and abs(est - prev) <= 1e-13 * max(1.0, abs(est)):
                break
            prev = est
            block = min(2 * block, 1 << 16)
            if m_done > (1 << 24):
                raise IntegratorFailure("dephasing coefficient series did not converge")
        gamma += (2.0 * C / math.pi) * est
    if run.bath.cutoff is not None:
        wc = run.bath.cutoff
        gamma += (C / math.pi) * t / (t * t + 1.0 / (wc * wc))
    return gamma


def numeric_propagate(
    rho0: FockDensityMatrix, run: DephasingRun, rtol: float = 1e-10
) -> list[FockDensityMatrix]:
    """Integrate the second-order time-local generator over run.t_grid.

    The system coupling operator is the number operator, so in the
    interaction picture d rho/dt = -gamma(t) [N, [N, rho]]; the free phase
    is applied afterwards.  Populations, trace and hermiticity are preserved
    to integrator accuracy and checked to 1e-10.
    """
    dim = rho0.dim
    pops = np.real(np.diag(rho0.matrix))
    tail_mass = float(np.sum(pops[max(dim - 2, 0):]))
    if tail_mass > _TAIL_MASS_TOL:
        warnings.warn(
            f"initial state has weight {tail_mass:.2e} in the top two number "
            "states; truncation artefacts may be non-negligible",
            stacklevel=2,
        )

    n = np.arange(dim, dtype=float)
    n_op = np.diag(n)

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        rho = y.view(complex).reshape(dim, dim)
        g = _dephasing_coefficient(run, t)
        comm2 = n_op @ (n_op @ rho) - 2.0 * (n_op @ rho @ n_op) + (rho @ n_op) @ n_op
        return (-g * comm2).ravel().view(float)

    t_grid = np.asarray(run.t_grid)
    t0 = 0.0 if t_grid[0] > 0.0 else float(t_grid[0])
    sol = solve_ivp(
        rhs,
        (t0, float(t_grid[-1])),
        rho0.matrix.ravel().view(float).copy(),
        t_eval=t_grid,
        method="DOP853",
        rtol=rtol,
        atol=rtol * 1e-2,
    )
    if not sol.success:
        raise IntegratorFailure(f"time integration failed: {sol.message}")

    out = []
    dn = n[:, None] - n[None, :]
    for i, t in enumerate(t_grid):
        rho = sol.y[:, i].view(complex).reshape(dim, dim)
        herm_drift = float(np.max(np.abs(rho - rho.conj().T)))
        trace_drift = abs(np.trace(rho) - 1.0)
        pop_drift = float(np.max(np.abs(np.real(np.diag(rho)) - pops)))
        if herm_drift > 1e-10 or trace_drift > 1e-10 or pop_drift > 1e-10:
            raise IntegratorFailure(
                f"conservation drift beyond 1e-10 at t = {t:g}: hermiticity "
                f"{herm_drift:.2e}, trace {trace_drift:.2e}, populations {pop_drift:.2e}"
            )
        rho = 0.5 * (rho + rho.conj().T)
        rho = rho * np.exp(-1j * run.omega0 * dn * t)
        out.append(FockDensityMatrix(rho))
    return out


def purity(rho: FockDensityMatrix) -> float:
    """Tr(rho^2), in (0, 1]."""
    return float(np.real(np.trace(rho.matrix @ rho.matrix)))


def fit_decay_rate(t: np.ndarray, moduli: np.ndarray) -> float:
    """Exponential decay rate fitted over the last decade of the time grid."""
    t = np.asarray(t, dtype=float)
    moduli = np.asarray(moduli, dtype=float)
    mask = (t >= t[-1] / 10.0) & (moduli > 0.0)
    if np.count_nonzero(mask) < 2:
        raise ValueError("not enough points in the last decade to fit a rate")
    slope = np.polyfit(t[mask], np.log(moduli[mask]), 1)[0]
    return -float(slope)


def evolution_rows(t_grid, states: list[FockDensityMatrix]):
    """Yield (t, n, ntilde, re, im, abs) for every matrix entry and time."""
    for t, state in zip(t_grid, states):
        m = state.matrix
        for i in range(state.dim):
            for j in range(state.dim):
                z = m[i, j]
                yield (float(t), i, j, z.real, z.imag, abs(z))
