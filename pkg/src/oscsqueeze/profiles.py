"""Frequency profiles omega^2(t) driving the oscillator mode equation.

Three variants are provided: a constant frequency, the smooth tanh ramp

    omega^2(t) = omega0^2 - eps(t)^2,
    eps(t) = eps_minus * (1 - tanh(t/d))/2 + eps_plus * (1 + tanh(t/d))/2,

which interpolates between asymptotic frequencies omega_minus and
omega_plus over a switching time d, and a tabulated profile interpolated
from (t, omega^2) samples.  All profiles expose omega_squared(t) and its
time derivative domega2_dt(t); both accept scalars or numpy arrays.

Profiles are immutable and safe to share across worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.interpolate import CubicSpline

__all__ = [
    "ConstantProfile",
    "TanhProfile",
    "TabulatedProfile",
    "Violation",
    "validate",
    "validate_table",
]


def _match_shape(t, values):
    """Return values shaped like the input t (float for scalar input)."""
    if np.ndim(t) == 0:
        return float(values)
    return np.asarray(values, dtype=float)


@dataclass(frozen=True)
class ConstantProfile:
    """Time-independent frequency omega_c > 0."""

    omega: float  # constant angular frequency

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise ValueError(f"omega must be positive and finite, got {self.omega}")

    def omega_squared(self, t):
        t = np.asarray(t, dtype=float)
        return _match_shape(t, np.full(t.shape, self.omega * self.omega))

    def domega2_dt(self, t):
        t = np.asarray(t, dtype=float)
        return _match_shape(t, np.zeros(t.shape))


@dataclass(frozen=True)
class TanhProfile:
    """Smooth switch between two constant asymptotic frequencies.

    The modulation amplitude eps(t) moves monotonically from eps_minus
    (t -> -inf) to eps_plus (t -> +inf) on the timescale d, so omega^2(t)
    stays between the asymptotic values omega_minus^2 = omega0^2 - eps_minus^2
    and omega_plus^2 = omega0^2 - eps_plus^2 and never vanishes.
    """

    omega0: float      # carrier frequency, upper bound of omega(t)
    eps_minus: float   # modulation amplitude at early times, 0 <= eps_minus < omega0
    eps_plus: float    # modulation amplitude at late times, 0 <= eps_plus < omega0
    d: float           # switching timescale, d > 0

    def __post_init__(self):
        if not (self.omega0 > 0 and math.isfinite(self.omega0)):
            raise ValueError(f"omega0 must be positive and finite, got {self.omega0}")
        if not (self.d > 0 and math.isfinite(self.d)):
            raise ValueError(f"d must be positive and finite, got {self.d}")
        for name in ("eps_minus", "eps_plus"):
            val = getattr(self, name)
            if not (0 <= val < self.omega0):
                raise ValueError(
                    f"{name} must satisfy 0 <= {name} < omega0, got {val} (omega0={self.omega0})"
                )

    @classmethod
    def from_omegas(cls, omega_minus: float, omega_plus: float, omega0: float, d: float) -> "TanhProfile":
        """Build from asymptotic frequencies instead of modulation amplitudes."""
        for name, val in (("omega_minus", omega_minus), ("omega_plus", omega_plus)):
            if not (0 < val <= omega0):
                raise ValueError(f"{name} must satisfy 0 < {name} <= omega0, got {val}")
        em = math.sqrt(omega0 * omega0 - omega_minus * omega_minus)
        ep = math.sqrt(omega0 * omega0 - omega_plus * omega_plus)
        return cls(omega0=omega0, eps_minus=em, eps_plus=ep, d=d)

    @property
    def omega_minus(self) -> float:
        """Asymptotic frequency as t -> -inf."""
        return math.sqrt(self.omega0 * self.omega0 - self.eps_minus * self.eps_minus)

    @property
    def omega_plus(self) -> float:
        """Asymptotic frequency as t -> +inf."""
        return math.sqrt(self.omega0 * self.omega0 - self.eps_plus * self.eps_plus)

    def epsilon(self, t):
        th = np.tanh(np.asarray(t, dtype=float) / self.d)
        return self.eps_minus * (1 - th) / 2 + self.eps_plus * (1 + th) / 2

    def omega_squared(self, t):
        eps = self.epsilon(t)
        return _match_shape(t, self.omega0 * self.omega0 - eps * eps)

    def domega2_dt(self, t):
        t_arr = np.asarray(t, dtype=float)
        th = np.tanh(t_arr / self.d)
        eps = self.eps_minus * (1 - th) / 2 + self.eps_plus * (1 + th) / 2
        # sech^2 written as 1 - tanh^2 so large |t|/d cannot overflow
        deps = (self.eps_plus - self.eps_minus) / (2 * self.d) * (1 - th * th)
        return _match_shape(t, -2.0 * eps * deps)


@dataclass(frozen=True)
class TabulatedProfile:
    """Profile interpolated from (t, omega^2) samples.

    Cubic interpolation (the default) gives the smoothness the adaptive
    integrator expects; linear interpolation is available for strictly
    local behavior at the price of a discontinuous derivative at nodes.
    """

    times: np.ndarray      # strictly increasing sample times
    omega_sq: np.ndarray   # omega^2 at the sample times, all > 0
    interpolation: str = "cubic"  # "cubic" or "linear"
    _spline: object = field(init=False, repr=False, compare=False, default=None)
    _dspline: object = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        vals = np.asarray(self.omega_sq, dtype=float)
        if times.ndim != 1 or vals.shape != times.shape:
            raise ValueError("times and omega_sq must be 1-d arrays of equal length")
        if times.size < 2:
            raise ValueError(f"tabulated profile needs at least 2 samples, got {times.size}")
        if not np.all(np.diff(times) > 0):
            raise ValueError("tabulated times must be strictly increasing")
        if not np.all(vals > 0):
            k = int(np.argmax(~(vals > 0)))
            raise ValueError(f"omega_sq samples must be positive, got {vals[k]} at t={times[k]}")
        if self.interpolation not in ("cubic", "linear"):
            raise ValueError(f"interpolation must be 'cubic' or 'linear', got {self.interpolation!r}")
        times.flags.writeable = False
        vals.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "omega_sq", vals)
        if self.interpolation == "cubic":
            spl = CubicSpline(times, vals)
            object.__setattr__(self, "_spline", spl)
            object.__setattr__(self, "_dspline", spl.derivative())

    @property
    def t_span(self) -> tuple[float, float]:
        return float(self.times[0]), float(self.times[-1])

    def _check_domain(self, t_arr):
        lo, hi = self.t_span
        slack = 1e-12 * max(abs(lo), abs(hi), 1.0)
        if np.any(t_arr < lo - slack) or np.any(t_arr > hi + slack):
            bad = t_arr[(t_arr < lo - slack) | (t_arr > hi + slack)]
            t_bad = float(np.atleast_1d(bad)[0])
            raise ValueError(f"t={t_bad} outside tabulated span [{lo}, {hi}]")

    def omega_squared(self, t):
        t_arr = np.asarray(t, dtype=float)
        self._check_domain(t_arr)
        if self.interpolation == "cubic":
            vals = self._spline(t_arr)
        else:
            vals = np.interp(t_arr, self.times, self.omega_sq)
        if np.any(np.asarray(vals) <= 0):
            bad = np.atleast_1d(t_arr)[np.atleast_1d(np.asarray(vals) <= 0)]
            raise ValueError(f"interpolated omega^2 is not positive at t={float(bad[0])}")
        return _match_shape(t, vals)

    def domega2_dt(self, t):
        t_arr = np.asarray(t, dtype=float)
        self._check_domain(t_arr)
        if self.interpolation == "cubic":
            vals = self._dspline(t_arr)
        else:
            slopes = np.diff(self.omega_sq) / np.diff(self.times)
            idx = np.clip(np.searchsorted(self.times, t_arr, side="right") - 1, 0, slopes.size - 1)
            vals = slopes[idx]
        return _match_shape(t, vals)


@dataclass(frozen=True)
class Violation:
    """One problem found while validating a profile."""

    message: str
    t: float | None = None


def validate(profile, t_span: tuple[float, float], n_samples: int = 257) -> list[Violation]:
    """Sample omega^2 over a span and report problems without raising.

    Returns an empty list when the profile is usable on the span.  The
    first time where omega^2 fails to be positive (or where evaluation
    itself fails, e.g. outside a tabulated domain) is reported.
    """
    out: list[Violation] = []
    t0, t1 = float(t_span[0]), float(t_span[1])
    if not t1 > t0:
        return [Violation(f"empty time span [{t0}, {t1}]")]
    ts = np.linspace(t0, t1, int(n_samples))
    for t in ts:
        try:
            w2 = profile.omega_squared(float(t))
        except ValueError as exc:
            out.append(Violation(str(exc), t=float(t)))
            return out
        if not w2 > 0:
            out.append(Violation(f"omega^2 = {w2} is not positive", t=float(t)))
            return out
    return out


def validate_table(times: Sequence[float], omega_sq: Sequence[float]) -> list[Violation]:
    """Check raw (t, omega^2) samples before building a TabulatedProfile."""
    out: list[Violation] = []
    times = np.asarray(times, dtype=float)
    vals = np.asarray(omega_sq, dtype=float)
    if times.ndim != 1 or vals.shape != times.shape:
        return [Violation("times and omega_sq must be 1-d arrays of equal length")]
    if times.size < 2:
        out.append(Violation(f"too few samples ({times.size}), need at least 2"))
        return out
    diffs = np.diff(times)
    if not np.all(diffs > 0):
        k = int(np.argmax(~(diffs > 0)))
        out.append(Violation("sample times are not strictly increasing", t=float(times[k + 1])))
    bad = ~(vals > 0)
    if np.any(bad):
        k = int(np.argmax(bad))
        out.append(Violation(f"omega^2 sample {vals[k]} is not positive", t=float(times[k])))
    return out
