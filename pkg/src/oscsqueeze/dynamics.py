"""Mode-function evolution and squeezing diagnostics.

The oscillator is described by a complex mode function g(t) obeying

    g'' + omega^2(t) g = 0,

normalized so that m * Im(conj(g) g') = -1/2 at all times.  From g and
its derivative we build the coefficients of the quadratic dynamical
invariant, the squeezing factor S, its growth rate (the nonadiabaticity
A_slash), and the invariant-eigenstate phase theta.

All diagnostics refer to a fixed reference frequency omega_I, the
physical frequency at the initial time for the standard positive-mode
start.  Custom initial conditions may choose omega_I freely as long as
the normalization holds.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from .dopri import IntegrationError, IntegratorStats, integrate_dopri54

__all__ = [
    "ModeInitialCondition",
    "ModeTrajectory",
    "SqueezeRecord",
    "positive_mode_ic",
    "integrate_mode",
    "invariant_coeffs",
    "squeezing_factor",
    "nonadiabaticity",
    "squeezing_factor_integral",
    "theta_phase",
    "wronskian_drift",
    "terminal_average",
    "squeeze_record",
]

_NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class ModeInitialCondition:
    """Initial data (g, g') for the mode equation at time t0.

    The pair must satisfy the normalization m * Im(conj(g0) gdot0) = -1/2
    to within 1e-12 relative; omega_I is the reference frequency used by
    every squeezing diagnostic derived from the trajectory.
    """

    t0: float
    g0: complex
    gdot0: complex
    mass: float = 1.0
    omega_I: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.mass) and self.mass > 0):
            raise ValueError(f"mass must be positive and finite, got {self.mass}")
        if not (np.isfinite(self.omega_I) and self.omega_I > 0):
            raise ValueError(f"omega_I must be positive and finite, got {self.omega_I}")
        w = self.mass * np.imag(np.conj(self.g0) * self.gdot0)
        if abs(w + 0.5) > _NORMALIZATION_TOL * 0.5:
            raise ValueError(
                "initial condition violates the normalization "
                f"m*Im(conj(g)*g') = -1/2: got {w!r}"
            )


def positive_mode_ic(profile, t0: float, mass: float = 1.0) -> ModeInitialCondition:
    """Positive-frequency start: g = 1/sqrt(2 m omega), g' = -i omega g at t0."""
    omega_sq = profile.omega_squared(t0)
    if omega_sq <= 0:
        raise ValueError(f"omega^2(t0) must be positive, got {omega_sq} at t0={t0}")
    omega_i = float(np.sqrt(omega_sq))
    g0 = 1.0 / np.sqrt(2.0 * mass * omega_i)
    return ModeInitialCondition(
        t0=t0, g0=complex(g0), gdot0=complex(-1j * omega_i * g0),
        mass=mass, omega_I=omega_i,
    )


@dataclass(frozen=True)
class ModeTrajectory:
    """Sampled mode function with its conserved-normalization drift."""

    t: np.ndarray
    g: np.ndarray
    gdot: np.ndarray
    mass: float
    omega_I: float
    wronskian_drift: float
    stats: IntegratorStats = field(repr=False)

    def __post_init__(self):
        for arr in (self.t, self.g, self.gdot):
            arr.setflags(write=False)


def _default_grid(profile, t0: float, t_end: float, points_per_period: int) -> np.ndarray:
    probe = np.linspace(t0, t_end, 1025)
    omega_sq = np.asarray(profile.omega_squared(probe), dtype=float)
    omega_max = float(np.sqrt(np.max(omega_sq)))
    if not omega_max > 0:
        raise ValueError("profile has no positive frequency on the requested span")
    spacing = 2.0 * np.pi / omega_max / points_per_period
    n = max(int(np.ceil((t_end - t0) / spacing)) + 1, 9)
    return np.linspace(t0, t_end, n)


def integrate_mode(
    profile,
    ic: ModeInitialCondition,
    t_end: float,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    points_per_period: int = 64,
    max_drift: float | None = 1e-6,
    grid: np.ndarray | None = None,
) -> ModeTrajectory:
    """Evolve the mode equation from ic.t0 to t_end on a uniform output grid.

    The default grid resolves the fastest sampled frequency with
    points_per_period samples per cycle.  After the run the conserved
    normalization m*Im(conj(g) g') is checked on the whole grid; relative
    drift beyond max_drift aborts with IntegrationError (pass None to
    disable the abort and only record the drift).
    """
    if grid is None:
        grid = _default_grid(profile, ic.t0, t_end, points_per_period)
    else:
        grid = np.asarray(grid, dtype=float)
        probe = np.linspace(ic.t0, t_end, 1025)
        omega_max = float(np.sqrt(np.max(profile.omega_squared(probe))))
        if grid.size > 1:
            period = 2.0 * np.pi / omega_max
            if np.max(np.diff(grid)) > period / 8:
                warnings.warn(
                    "output grid is coarser than 8 points per shortest period; "
                    "sampled diagnostics may alias",
                    stacklevel=2,
                )

    def rhs(t, y):
        return np.array([y[1], -profile.omega_squared(t) * y[0]], dtype=complex)

    y0 = np.array([ic.g0, ic.gdot0], dtype=complex)
    out, stats = integrate_dopri54(rhs, (ic.t0, t_end), y0, grid, rtol=rtol, atol=atol)
    g, gdot = out[:, 0], out[:, 1]

    w = ic.mass * np.imag(np.conj(g) * gdot)
    drift_series = np.abs(w + 0.5) / 0.5
    drift = float(np.max(drift_series))
    if max_drift is not None and drift > max_drift:
        i_bad = int(np.argmax(drift_series > max_drift))
        raise IntegrationError(
            f"normalization drift {drift:.3e} exceeds {max_drift:.3e} "
            f"(first at t={grid[i_bad]})",
            t=float(grid[i_bad]),
        )
    return ModeTrajectory(
        t=grid, g=g.copy(), gdot=gdot.copy(), mass=ic.mass,
        omega_I=ic.omega_I, wronskian_drift=drift, stats=stats,
    )


def wronskian_drift(traj: ModeTrajectory) -> float:
    """Max relative drift of m*Im(conj(g) g') from -1/2 along the trajectory."""
    w = traj.mass * np.imag(np.conj(traj.g) * traj.gdot)
    return float(np.max(np.abs(w + 0.5) / 0.5))


def invariant_coeffs(traj: ModeTrajectory) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Coefficients (g_minus, g_zero, g_plus) of the quadratic invariant.

    g_minus = 2 m omega_I |g|^2 multiplies p^2, g_plus multiplies x^2 and
    g_zero the symmetrized cross term; they satisfy
    g_plus g_minus - g_zero^2 = omega_I^2 identically.
    """
    m, wi = traj.mass, traj.omega_I
    g_minus = 2.0 * m * wi * np.abs(traj.g) ** 2
    dg_minus = 4.0 * m * wi * np.real(np.conj(traj.g) * traj.gdot)
    g_zero = -0.5 * dg_minus
    g_plus = (wi**2 / g_minus) * (1.0 + dg_minus**2 / (4.0 * wi**2))
    return g_minus, g_zero, g_plus


def _g_minus_pair(traj: ModeTrajectory) -> tuple[np.ndarray, np.ndarray]:
    m, wi = traj.mass, traj.omega_I
    g_minus = 2.0 * m * wi * np.abs(traj.g) ** 2
    dg_minus = 4.0 * m * wi * np.real(np.conj(traj.g) * traj.gdot)
    return g_minus, dg_minus


def squeezing_factor(traj: ModeTrajectory, profile) -> np.ndarray:
    """Pointwise squeezing factor S(t) relative to omega_I.

    S = hdot^2 / (2 omega_I^2) + (1/h - omega h / omega_I)^2 / 2 with
    h = sqrt(g_minus); S vanishes iff the state is the instantaneous
    vacuum of a constant-frequency oscillator at omega = omega_I.
    """
    wi = traj.omega_I
    g_minus, dg_minus = _g_minus_pair(traj)
    omega = np.sqrt(np.asarray(profile.omega_squared(traj.t), dtype=float))
    h = np.sqrt(g_minus)
    hdot = dg_minus / (2.0 * h)
    return hdot**2 / (2.0 * wi**2) + 0.5 * (1.0 / h - omega * h / wi) ** 2


def nonadiabaticity(traj: ModeTrajectory, profile) -> np.ndarray:
    """Growth rate A_slash = dS/dt = (g_minus - omega_I/omega) domega^2/dt / (2 omega_I^2)."""
    wi = traj.omega_I
    g_minus, _ = _g_minus_pair(traj)
    omega = np.sqrt(np.asarray(profile.omega_squared(traj.t), dtype=float))
    domega2 = np.asarray(profile.domega2_dt(traj.t), dtype=float)
    return (g_minus - wi / omega) * domega2 / (2.0 * wi**2)


def squeezing_factor_integral(traj: ModeTrajectory, profile) -> np.ndarray:
    """S(t) reconstructed by accumulating the nonadiabaticity from t0.

    Equals the pointwise squeezing_factor up to quadrature error; the
    offset S(t0) is evaluated pointwise.
    """
    rate = nonadiabaticity(traj, profile)
    s0 = float(squeezing_factor(traj, profile)[0])
    return s0 + cumulative_simpson(rate, x=traj.t, initial=0.0)


def theta_phase(traj: ModeTrajectory) -> np.ndarray:
    """Invariant-eigenstate phase theta(t) = omega_I * integral dt / g_minus.

    Strictly increasing; grows by pi per half-oscillation of g_minus in a
    settled constant-frequency epoch.
    """
    g_minus, _ = _g_minus_pair(traj)
    return cumulative_simpson(traj.omega_I / g_minus, x=traj.t, initial=0.0)


def terminal_average(t: np.ndarray, values: np.ndarray, period: float,
                     n_periods: int = 4) -> float:
    """Time-average of a sampled series over the trailing n_periods periods.

    The window covers exactly n_periods * period up to the last sample,
    so a bounded oscillation with that period integrates to zero and the
    mean converges to the settled value.  Quadrature is exact for the
    cubic spline through the samples, which keeps the window edges off
    the sample grid from costing accuracy.
    """
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    if not (np.isfinite(period) and period > 0):
        raise ValueError(f"period must be positive, got {period}")
    t_end = t[-1]
    t_start = t_end - n_periods * period
    slack = 1e-9 * max(abs(t_end), abs(t[0]), 1.0)
    if t_start < t[0] - slack:
        raise ValueError(
            f"averaging window [{t_start}, {t_end}] extends before the first sample"
        )
    t_start = max(t_start, t[0])
    if np.count_nonzero(t >= t_start) < 8:
        raise ValueError("too few samples in the terminal averaging window")
    lead = max(int(np.searchsorted(t, t_start)) - 4, 0)
    spline = CubicSpline(t[lead:], values[lead:])
    return float(spline.integrate(t_start, t_end) / (t_end - t_start))


@dataclass(frozen=True)
class SqueezeRecord:
    """Bundle of squeezing diagnostics sampled on the trajectory grid."""

    t: np.ndarray
    g_minus: np.ndarray
    dg_minus: np.ndarray
    S: np.ndarray
    A_slash: np.ndarray
    theta: np.ndarray
    omega: np.ndarray
    omega_I: float

    def __post_init__(self):
        for arr in (self.t, self.g_minus, self.dg_minus, self.S,
                    self.A_slash, self.theta, self.omega):
            arr.setflags(write=False)

    @property
    def Omega(self) -> np.ndarray:
        """Frequency shift Omega = omega_I * S, so omega_eff = omega + Omega."""
        return self.omega_I * self.S

    @property
    def omega_eff(self) -> np.ndarray:
        return self.omega + self.Omega


def squeeze_record(traj: ModeTrajectory, profile) -> SqueezeRecord:
    """Evaluate every squeezing diagnostic on the trajectory grid."""
    g_minus, dg_minus = _g_minus_pair(traj)
    omega = np.sqrt(np.asarray(profile.omega_squared(traj.t), dtype=float))
    return SqueezeRecord(
        t=traj.t.copy(),
        g_minus=g_minus,
        dg_minus=dg_minus,
        S=squeezing_factor(traj, profile),
        A_slash=nonadiabaticity(traj, profile),
        theta=theta_phase(traj),
        omega=omega,
        omega_I=traj.omega_I,
    )
