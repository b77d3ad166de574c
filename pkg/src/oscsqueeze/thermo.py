"""Thermodynamics of the invariant-referenced thermal state.

Units: hbar = k_B = 1 throughout, so frequencies, energies, and
temperatures share one unit and entropy is dimensionless.

The state is a Gibbs weight over the dynamical-invariant ladder with a
fixed spectral parameter epsilon = omega_I / T0.  Unitary evolution
preserves epsilon, hence the entropy; all time dependence of the energy,
temperature, and force enters through the effective frequency
omega_eff = omega + Omega with Omega = omega_I * S.

The module also inverts the squeezing-schedule constraint: given a
target Omega(t), it reconstructs the frequency profile omega(t) and the
scale function g_minus(t) that realize it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

__all__ = [
    "entropy_from_eps",
    "eps_from_entropy",
    "entropy_slope",
    "force",
    "energy",
    "temperature",
    "squeezing_parameter",
    "husimi_q",
    "ThermalState",
    "thermal_state_at",
    "FirstLawCheck",
    "first_law_residual",
    "ConstraintViolationError",
    "ReconstructionResult",
    "reconstruct_from_omega_prime",
]

_S_FLOOR = -1e-12  # numerical floor for squeezing factors fed in from trajectories


def _check_eps(eps: float) -> float:
    eps = float(eps)
    if not (np.isfinite(eps) and eps > 0):
        raise ValueError(f"epsilon must be positive and finite, got {eps}")
    return eps


def entropy_from_eps(eps: float) -> float:
    """Entropy S_ent(eps) = eps/(e^eps - 1) - ln(1 - e^{-eps}).

    Strictly decreasing from +inf at eps -> 0 to 0 at eps -> inf.  Below
    eps = 0.7 the log term is written as eps - ln(expm1(eps)): forming
    1 - e^{-eps} directly loses half the digits there.  Past eps = 30
    the two-term asymptotic (1+eps)e^{-eps} + (eps+1/2)e^{-2eps} takes
    over (relative error below e^{-2 eps}).
    """
    eps = _check_eps(eps)
    if eps > 30.0:
        e1 = math.exp(-eps)
        return (1.0 + eps) * e1 + (eps + 0.5) * e1 * e1
    lead = eps / math.expm1(eps)
    if eps < 0.7:
        return lead + eps - math.log(math.expm1(eps))
    return lead - math.log1p(-math.exp(-eps))


def entropy_slope(eps: float) -> float:
    """dS_ent/deps = -eps / (4 sinh^2(eps/2)); always negative."""
    eps = _check_eps(eps)
    if eps > 60.0:
        e1 = math.exp(-eps)
        return -eps * e1 * (1.0 + 2.0 * e1)
    sh = math.sinh(0.5 * eps)
    return -eps / (4.0 * sh * sh)


def eps_from_entropy(s_ent: float) -> float:
    """Invert entropy_from_eps by bracketed root-finding (monotone bisection
    refinement to ~1e-15 relative)."""
    s_ent = float(s_ent)
    if not (np.isfinite(s_ent) and s_ent > 0):
        raise ValueError(f"S_ent must be positive and finite, got {s_ent}")
    lo = min(1e-12, 0.5 * math.exp(1.0 - s_ent))
    if lo == 0.0:
        raise ValueError(f"S_ent={s_ent} too large to invert in double precision")
    hi = max(50.0, -2.0 * math.log(s_ent) if s_ent < 1 else 50.0)
    return float(brentq(
        lambda e: entropy_from_eps(e) - s_ent, lo, hi,
        rtol=4 * np.finfo(float).eps, xtol=1e-300, maxiter=200,
    ))


def force(eps: float) -> float:
    """Conjugate force F_omega = -coth(eps/2)/2 (the dE/domega_eff slope)."""
    eps = _check_eps(eps)
    return -0.5 / math.tanh(0.5 * eps)


def energy(omega_eff: float, eps: float) -> float:
    """Mean energy E = (omega_eff/2) coth(eps/2) = -F_omega * omega_eff."""
    return -force(eps) * float(omega_eff)


def temperature(omega_eff: float, eps: float) -> float:
    """Temperature T = omega_eff / eps."""
    return float(omega_eff) / _check_eps(eps)


def _clamp_sfactor(s: float) -> float:
    if s < 0.0:
        if s < _S_FLOOR:
            raise ValueError(f"squeezing factor must be >= 0, got {s}")
        return 0.0
    return float(s)


def squeezing_parameter(s: float, omega: float, omega_i: float) -> float:
    """Squeezing parameter r with S = (2 omega / omega_I) sinh^2 r."""
    s = _clamp_sfactor(s)
    if omega <= 0 or omega_i <= 0:
        raise ValueError("omega and omega_I must be positive")
    return math.asinh(math.sqrt(0.5 * s * omega_i / omega))


def husimi_q(s: float, omega: float, omega_i: float) -> float:
    """Adiabaticity Q-factor: Q = 1 + S omega_I / omega; Q = 1 means adiabatic."""
    s = _clamp_sfactor(s)
    if omega <= 0 or omega_i <= 0:
        raise ValueError("omega and omega_I must be positive")
    return 1.0 + s * omega_i / omega


@dataclass(frozen=True)
class ThermalState:
    """Instantaneous thermal state (omega, Omega, omega_I, epsilon).

    Everything else is derived: omega_eff = omega + Omega, T0 = omega_I/epsilon,
    entropy, energy, temperature, force, squeezing parameter, Q-factor.
    """

    omega: float
    Omega: float
    omega_I: float
    epsilon: float

    def __post_init__(self):
        if self.omega <= 0 or self.omega_I <= 0:
            raise ValueError("omega and omega_I must be positive")
        _check_eps(self.epsilon)
        object.__setattr__(self, "Omega", _clamp_sfactor(self.Omega))

    @property
    def omega_eff(self) -> float:
        return self.omega + self.Omega

    @property
    def T0(self) -> float:
        return self.omega_I / self.epsilon

    @property
    def S_factor(self) -> float:
        return self.Omega / self.omega_I

    @property
    def S_ent(self) -> float:
        return entropy_from_eps(self.epsilon)

    @property
    def E(self) -> float:
        return energy(self.omega_eff, self.epsilon)

    @property
    def T(self) -> float:
        return temperature(self.omega_eff, self.epsilon)

    @property
    def F_omega(self) -> float:
        return force(self.epsilon)

    @property
    def r(self) -> float:
        return squeezing_parameter(self.S_factor, self.omega, self.omega_I)

    @property
    def Q(self) -> float:
        return husimi_q(self.S_factor, self.omega, self.omega_I)


def thermal_state_at(record, epsilon: float, index: int) -> ThermalState:
    """ThermalState at one grid index of a SqueezeRecord."""
    return ThermalState(
        omega=float(record.omega[index]),
        Omega=float(record.Omega[index]),
        omega_I=record.omega_I,
        epsilon=epsilon,
    )


@dataclass(frozen=True)
class FirstLawCheck:
    """Energy balance of a small (d omega_eff, d S_ent) step."""

    delta_E: float
    work_term: float   # -F_omega * d omega_eff
    heat_term: float   # T * d S_ent

    @property
    def residual(self) -> float:
        return self.delta_E - self.work_term - self.heat_term


def first_law_residual(state: ThermalState, d_omega_eff: float,
                       d_s_ent: float) -> FirstLawCheck:
    """Exact energy change of a perturbed state minus its first-order budget.

    The perturbed entropy is inverted back to epsilon exactly, so the
    residual is purely the second-order Taylor remainder: it must shrink
    by a factor ~4 when both perturbations are halved.
    """
    omega_eff_new = state.omega_eff + d_omega_eff
    if omega_eff_new <= 0:
        raise ValueError("perturbed omega_eff must stay positive")
    s_new = state.S_ent + d_s_ent
    eps_new = state.epsilon if d_s_ent == 0.0 else eps_from_entropy(s_new)
    delta_e = energy(omega_eff_new, eps_new) - state.E
    return FirstLawCheck(
        delta_E=delta_e,
        work_term=-state.F_omega * d_omega_eff,
        heat_term=state.T * d_s_ent,
    )


class ConstraintViolationError(RuntimeError):
    """The requested Omega schedule is not realizable; carries the failing time."""

    def __init__(self, message: str, t: float):
        super().__init__(message)
        self.t = t


@dataclass(frozen=True)
class ReconstructionResult:
    """Frequency profile and scale function realizing an Omega schedule."""

    t: np.ndarray
    omega: np.ndarray
    g_minus: np.ndarray
    dg_minus: np.ndarray
    omega_I: float

    def __post_init__(self):
        for arr in (self.t, self.omega, self.g_minus, self.dg_minus):
            arr.setflags(write=False)


# Relative floor below which the slope-consistency right-hand side counts
# as a genuine violation rather than sampling noise: on a consistent
# protocol the quantity touches zero quadratically wherever dg_minus
# vanishes, so small negative excursions there reflect grid resolution,
# while an inconsistent protocol overshoots at O(1) of the local scale.
_RHS_TOL = 1e-3


def reconstruct_from_omega_prime(
    t: np.ndarray,
    big_omega: np.ndarray,
    omega_prime: np.ndarray,
    omega_i: float,
    omega_start: float,
) -> ReconstructionResult:
    """Rebuild omega(t) and the scale function from a stored-squeezing protocol.

    The protocol is the sampled pair Omega(t), Omega'(t), where
    Omega' = dOmega/domega is the slope of the stored squeezing with
    respect to the frequency.  That slope acts as an equation of state
    tying the two variations together, so the frequency advances by

        d(omega)/dt = (dOmega/dt) / Omega',

    the scale function is read off pointwise as

        g_minus = (omega_I / omega) (1 + Omega'),

    and the slope of the scale function satisfies

        (dg_minus/dt)^2 / (8 omega_I^2) = (1 + Omega') Omega/omega - Omega'^2 / 2,

    whose right-hand side must stay non-negative for the protocol to be
    consistent; the square root carries the sign of the sampled g_minus
    trend (taken as + where that trend is flat).  Where Omega' passes
    through zero, dOmega/dt vanishes with it and the frequency slope is
    filled in from the neighboring well-conditioned samples; a protocol
    with Omega' identically zero keeps omega constant (the quasi-static
    branch).

    Raises ValueError for malformed input (non-monotone t, negative
    Omega, Omega' <= -1, bad shapes) and ConstraintViolationError, with
    the failing time, when the consistency right-hand side dips below
    the noise floor or the advanced frequency stops being positive.
    """
    t = np.asarray(t, dtype=float)
    big_omega = np.asarray(big_omega, dtype=float)
    omega_prime = np.asarray(omega_prime, dtype=float)
    if (t.ndim != 1 or t.size < 4 or big_omega.shape != t.shape
            or omega_prime.shape != t.shape):
        raise ValueError(
            "protocol needs matching 1-d t, Omega, and omega_prime arrays, "
            ">= 4 samples"
        )
    if np.any(np.diff(t) <= 0):
        raise ValueError("protocol times must be strictly increasing")
    if omega_i <= 0 or omega_start <= 0:
        raise ValueError("omega_I and omega_start must be positive")
    if np.min(big_omega) < _S_FLOOR * omega_i:
        i_bad = int(np.argmin(big_omega))
        raise ValueError(
            f"Omega must be non-negative, got {big_omega[i_bad]} at t={t[i_bad]}"
        )
    if np.min(omega_prime) <= -1.0:
        i_bad = int(np.argmin(omega_prime))
        raise ValueError(
            f"omega_prime must stay above -1 (g_minus positivity), got "
            f"{omega_prime[i_bad]} at t={t[i_bad]}"
        )
    big_omega = np.maximum(big_omega, 0.0)

    # frequency slope dOmega/dt / Omega'; where Omega' ~ 0 the numerator
    # vanishes with it on a consistent protocol, so the 0/0 samples are
    # filled from the well-conditioned neighbors
    d_omega_dt = CubicSpline(t, big_omega).derivative()(t)
    op_scale = float(np.max(np.abs(omega_prime)))
    slope = np.zeros_like(t)
    if op_scale > 0.0:
        good = np.abs(omega_prime) > 1e-12 * op_scale
        slope[good] = d_omega_dt[good] / omega_prime[good]
        if not good.all() and good.any():
            slope[~good] = np.interp(t[~good], t[good], slope[good])

    omega = omega_start + CubicSpline(t, slope).antiderivative()(t)
    if np.any(omega <= 0.0):
        i_bad = int(np.argmax(omega <= 0.0))
        raise ConstraintViolationError(
            f"reconstructed frequency is not positive at t={t[i_bad]}",
            t=float(t[i_bad]),
        )

    g_minus = (omega_i / omega) * (1.0 + omega_prime)

    lead = (1.0 + omega_prime) * big_omega / omega
    rhs = lead - 0.5 * omega_prime**2
    scale = 1.0 + np.abs(lead) + 0.5 * omega_prime**2
    bad = rhs < -_RHS_TOL * scale
    if np.any(bad):
        i_bad = int(np.argmax(bad))
        raise ConstraintViolationError(
            f"inconsistent protocol at t={t[i_bad]}: slope constraint "
            f"right-hand side {rhs[i_bad]:.3e} < 0", t=float(t[i_bad]),
        )
    rhs = np.maximum(rhs, 0.0)

    trend = np.sign(CubicSpline(t, g_minus)(t, 1))
    trend = np.where(trend == 0.0, 1.0, trend)
    dg_minus = trend * omega_i * np.sqrt(8.0 * rhs)

    return ReconstructionResult(
        t=t.copy(), omega=omega, g_minus=g_minus, dg_minus=dg_minus,
        omega_I=omega_i,
    )
