"""Adaptive Dormand-Prince 5(4) integrator with dense output.

Explicit embedded Runge-Kutta pair of orders 5 and 4 with the classic
7-stage tableau (first-same-as-last, so 6 right-hand-side evaluations per
accepted step) and the quartic interpolant for dense output.  The state
may be real or complex; error control uses componentwise magnitudes with
an RMS norm.

The integrator reports accepted steps, rejected steps, the largest
normalized local error estimate among accepted steps, and the number of
right-hand-side evaluations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = ["IntegrationError", "IntegratorStats", "integrate_dopri54"]

# Butcher tableau, nodes and stage coefficients
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
# 5th-order weights coincide with the last tableau row (FSAL)
_B = _A[6]
# difference between 5th- and 4th-order weights, used for the error estimate
_E = np.array(
    [71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40]
)
# dense-output interpolant: y(t + theta*h) = y + h * K^T P (theta, theta^2, theta^3, theta^4)
_P = np.array(
    [
        [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
        [0.0, 0.0, 0.0, 0.0],
        [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
        [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
        [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
        [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
        [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
    ]
)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0


class IntegrationError(RuntimeError):
    """Numerical failure during integration; carries the failing time."""

    def __init__(self, message: str, t: float | None = None):
        super().__init__(message)
        self.t = t


@dataclass
class IntegratorStats:
    steps: int = 0                    # accepted steps
    rejected: int = 0                 # rejected step attempts
    max_error_estimate: float = 0.0   # largest accepted normalized local error (<= 1)
    rhs_evaluations: int = 0


def _error_norm(diff, scale) -> float:
    q = np.abs(diff) / scale
    return float(np.sqrt(np.mean(q * q)))


def _initial_step(rhs, t0, y0, f0, t_end, rtol, atol):
    """Start-step heuristic based on the size of the state and its derivatives."""
    scale = atol + rtol * np.abs(y0)
    d0 = _error_norm(y0, scale)
    d1 = _error_norm(f0, scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, abs(t_end - t0))
    y1 = y0 + h0 * f0
    f1 = rhs(t0 + h0, y1)
    d2 = _error_norm(f1 - f0, scale) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, abs(t_end - t0))


def integrate_dopri54(
    rhs: Callable,
    t_span: tuple[float, float],
    y0: np.ndarray,
    grid: np.ndarray,
    rtol: float = 1e-10,
    atol: float = 1e-12,
    max_steps: int = 5_000_000,
) -> tuple[np.ndarray, IntegratorStats]:
    """Integrate y' = rhs(t, y) forward over t_span, sampling on grid.

    grid must be sorted ascending and contained in t_span.  Returns the
    dense-output samples, shape (len(grid), len(y0)), and the step
    statistics.  Raises IntegrationError on step-size underflow.
    """
    t0, t_end = float(t_span[0]), float(t_span[1])
    if not t_end > t0:
        raise ValueError(f"t_span must be increasing, got {t_span}")
    grid = np.asarray(grid, dtype=float)
    slack = 1e-9 * max(abs(t0), abs(t_end), 1.0)
    if grid.size and (grid[0] < t0 - slack or grid[-1] > t_end + slack):
        raise ValueError("output grid must lie inside t_span")
    if np.any(np.diff(grid) < 0):
        raise ValueError("output grid must be sorted ascending")

    y0 = np.asarray(y0, dtype=complex)
    n = y0.size
    out = np.empty((grid.size, n), dtype=complex)
    stats = IntegratorStats()

    gi = 0
    while gi < grid.size and grid[gi] <= t0 + slack:
        out[gi] = y0
        gi += 1

    t, y = t0, y0.copy()
    f = rhs(t, y)
    stats.rhs_evaluations += 2  # includes the probe inside _initial_step
    h = _initial_step(rhs, t, y, f, t_end, rtol, atol)
    K = np.empty((7, n), dtype=complex)

    while t < t_end:
        if stats.steps + stats.rejected >= max_steps:
            raise IntegrationError(f"step limit {max_steps} exceeded at t={t}", t=t)
        h = min(h, t_end - t)
        if h <= 16 * np.finfo(float).eps * max(abs(t), 1.0):
            raise IntegrationError(f"step size underflow at t={t}", t=t)

        K[0] = f
        for i in range(1, 6):
            K[i] = rhs(t + _C[i] * h, y + h * (_A[i] @ K[:i]))
        y_new = y + h * (_A[6] @ K[:6])
        K[6] = rhs(t + h, y_new)
        stats.rhs_evaluations += 6

        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = _error_norm(h * (_E @ K), scale)

        if err <= 1.0:
            t_new = t + h
            # emit dense-output samples covered by this step
            while gi < grid.size and grid[gi] <= t_new + slack:
                theta = min(max((grid[gi] - t) / h, 0.0), 1.0)
                tv = np.array([theta, theta**2, theta**3, theta**4])
                out[gi] = y + h * (K.T @ (_P @ tv))
                gi += 1
            stats.steps += 1
            stats.max_error_estimate = max(stats.max_error_estimate, err)
            t, y, f = t_new, y_new, K[6].copy()
            factor = _MAX_FACTOR if err == 0 else min(_MAX_FACTOR, _SAFETY * err**-0.2)
            h *= factor
        else:
            stats.rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err**-0.2)

    while gi < grid.size:  # numerical slack at the right endpoint
        out[gi] = y
        gi += 1
    return out, stats
