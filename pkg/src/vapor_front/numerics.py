"""Shared numerical kernels: complementary error function, adaptive Simpson
quadrature and a fixed-step fourth-order Runge-Kutta integrator.

Everything here is pure and reentrant; no module-level mutable state.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, OdeError, QuadratureError

_TWO_OVER_SQRT_PI = 2.0 / math.sqrt(math.pi)
_INV_SQRT_PI = 1.0 / math.sqrt(math.pi)

# switch from the series to the continued fraction
_SERIES_LIMIT = 3.0
# number of continued-fraction levels; 1e-16 relative at x = 3
_CF_TERMS = 60
# erfc(x) < 1e-300 beyond this point
_UNDERFLOW = 26.6


def _erf_series(x: float) -> float:
    # erf(x) = 2/sqrt(pi) exp(-x^2) sum_n (2x^2)^n x / (1*3*...*(2n+1));
    # every term positive, so no cancellation.
    x2 = x * x
    term = x
    total = x
    n = 0
    while term > 1e-17 * total:
        n += 1
        term *= 2.0 * x2 / (2 * n + 1)
        total += term
    return _TWO_OVER_SQRT_PI * math.exp(-x2) * total


def _erfc_cfrac(x: float) -> float:
    # erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
    tail = x
    for k in range(_CF_TERMS, 0, -1):
        tail = x + 0.5 * k / tail
    return _INV_SQRT_PI * math.exp(-x * x) / tail


def erfc(x: float) -> float:
    """Complementary error function, absolute error below 1e-12 on [0, 6].

    Negative arguments use erfc(-x) = 2 - erfc(x).
    """
    if not math.isfinite(x):
        raise DomainError(f"erfc needs a finite argument, got {x!r}")
    if x < 0.0:
        return 2.0 - erfc(-x)
    if x == 0.0:
        return 1.0
    if x <= _SERIES_LIMIT:
        return 1.0 - _erf_series(x)
    if x >= _UNDERFLOW:
        return 0.0
    return _erfc_cfrac(x)


def erf(x: float) -> float:
    if not math.isfinite(x):
        raise DomainError(f"erf needs a finite argument, got {x!r}")
    if x < 0.0:
        return -erf(-x)
    if x <= _SERIES_LIMIT:
        return _erf_series(x)
    return 1.0 - erfc(x)


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    err_estimate: float
    evaluations: int


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float = 1e-9,
    max_intervals: int = 2**20,
) -> QuadratureResult:
    """Adaptive Simpson quadrature of ``f`` over ``[a, b]``.

    A panel is accepted once the two-half Simpson sum differs from the
    whole-panel sum by at most 15 times its share of ``tol``; the accepted
    value carries the Richardson correction, so cubics are integrated
    exactly on every panel.

    Args:
        f: Integrand, finite on ``[a, b]``.
        a: Lower limit.
        b: Upper limit, ``b >= a``.
        tol: Absolute tolerance on the integral.
        max_intervals: Cap on the number of live panels.

    Returns:
        QuadratureResult with ``err_estimate <= tol``.

    Raises:
        DomainError: If ``b < a`` or ``tol <= 0``.
        QuadratureError: If the panel cap is hit before convergence.
    """
    if not (b >= a):
        raise DomainError(f"integrate needs a <= b, got [{a}, {b}]")
    if not tol > 0.0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)

    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    evaluations = 3
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    # stack entries: (a, b, fa, fm, fb, simpson over [a, b], tolerance share)
    stack = [(a, b, fa, fm, fb, whole, tol)]
    value = 0.0
    err = 0.0
    live = 1
    while stack:
        lo, hi, flo, fmid, fhi, s_whole, share = stack.pop()
        mid = 0.5 * (lo + hi)
        fl = f(0.5 * (lo + mid))
        fr = f(0.5 * (mid + hi))
        evaluations += 2
        h6 = (hi - lo) / 12.0
        s_left = h6 * (flo + 4.0 * fl + fmid)
        s_right = h6 * (fmid + 4.0 * fr + fhi)
        diff = s_left + s_right - s_whole
        if abs(diff) <= 15.0 * share or mid <= lo or mid >= hi:
            value += s_left + s_right + diff / 15.0
            err += abs(diff) / 15.0
            live -= 1
            continue
        live += 1
        if live > max_intervals:
            best = value + sum(s[5] for s in stack) + s_left + s_right
            raise QuadratureError(
                f"adaptive Simpson hit {max_intervals} panels on [{a}, {b}]",
                value=best,
                err_estimate=err + abs(diff) / 15.0,
            )
        half = 0.5 * share
        stack.append((mid, hi, fmid, fr, fhi, s_right, half))
        stack.append((lo, mid, flo, fl, fmid, s_left, half))
    return QuadratureResult(value, err, evaluations)


@dataclass(frozen=True)
class OdeStepperConfig:
    """Fixed-step RK4 settings; ``rel_tol`` drives step-halving checks."""

    dt: float
    rel_tol: float = 1e-6
    max_steps: int = 1_000_000

    def __post_init__(self) -> None:
        if not self.dt > 0.0:
            raise DomainError(f"dt > 0 violated: dt = {self.dt}")
        if not self.rel_tol > 0.0:
            raise DomainError(f"rel_tol > 0 violated: rel_tol = {self.rel_tol}")
        if self.max_steps < 1:
            raise DomainError(f"max_steps >= 1 violated: max_steps = {self.max_steps}")


@dataclass(frozen=True)
class OdeSolution:
    t: np.ndarray
    x: np.ndarray

    @property
    def step(self) -> float:
        return float(self.t[1] - self.t[0]) if len(self.t) > 1 else 0.0


def rk4_step(rhs: Callable[[float, float], float], t: float, x: float, h: float) -> float:
    k1 = rhs(t, x)
    k2 = rhs(t + 0.5 * h, x + 0.5 * h * k1)
    k3 = rhs(t + 0.5 * h, x + 0.5 * h * k2)
    k4 = rhs(t + h, x + h * k3)
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def ode_solve(
    rhs: Callable[[float, float], float],
    x0: float,
    t0: float,
    t_end: float,
    cfg: OdeStepperConfig,
    lo: float = -math.inf,
    hi: float = math.inf,
) -> OdeSolution:
    """Integrate the scalar ODE ``dx/dt = rhs(t, x)`` with classical RK4.

    The step is shrunk to ``(t_end - t0) / n`` with ``n = ceil((t_end - t0) / cfg.dt)``
    so that the last sample lands on ``t_end``; samples sit at ``t0 + k * step``.
    The state is clipped into ``[lo, hi]`` after every step.
    """
    if t_end < t0:
        raise DomainError(f"t_end must be >= t0, got [{t0}, {t_end}]")
    span = t_end - t0
    n = max(1, math.ceil(span / cfg.dt - 1e-9)) if span > 0 else 0
    if n > cfg.max_steps:
        raise OdeError(
            f"{n} steps needed on [{t0}, {t_end}] at dt = {cfg.dt}, max_steps = {cfg.max_steps}"
        )
    h = span / n if n else 0.0
    ts = np.empty(n + 1)
    xs = np.empty(n + 1)
    ts[0] = t0
    x = min(max(x0, lo), hi)
    xs[0] = x
    for k in range(n):
        t = t0 + k * h
        x = rk4_step(rhs, t, x, h)
        if not math.isfinite(x):
            raise OdeError(f"non-finite state at t = {t + h}")
        x = min(max(x, lo), hi)
        ts[k + 1] = t0 + (k + 1) * h
        xs[k + 1] = x
    if n:
        ts[n] = t_end
    return OdeSolution(ts, xs)


class QuadratureLog:
    """Caller-owned tally of quadrature calls, for convergence reporting."""

    def __init__(self) -> None:
        self.calls = 0
        self.evaluations = 0
        self.max_err_estimate = 0.0
        self.max_err_ratio = 0.0

    def record(self, result: QuadratureResult, tol: float) -> None:
        self.calls += 1
        self.evaluations += result.evaluations
        self.max_err_estimate = max(self.max_err_estimate, result.err_estimate)
        self.max_err_ratio = max(self.max_err_ratio, result.err_estimate / tol)

    def merge(self, other: QuadratureLog) -> None:
        self.calls += other.calls
        self.evaluations += other.evaluations
        self.max_err_estimate = max(self.max_err_estimate, other.max_err_estimate)
        self.max_err_ratio = max(self.max_err_ratio, other.max_err_ratio)
