"""Slow reference computations, independent of the package's own kernels."""

from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy import special


def erfc_hp(x: float, dps: int = 60) -> float:
    """erfc by a high-precision Maclaurin series (x <= 5) or continued fraction."""
    with mpmath.workdps(dps):
        v = mpmath.mpf(x)
        if v <= 5:
            total = mpmath.mpf(0)
            n = 0
            while True:
                term = (-1) ** n * v ** (2 * n + 1) / (mpmath.factorial(n) * (2 * n + 1))
                total += term
                if abs(term) < mpmath.mpf(10) ** (-dps + 5):
                    break
                n += 1
            return float(1 - 2 / mpmath.sqrt(mpmath.pi) * total)
        tail = v
        for k in range(400, 0, -1):
            tail = v + mpmath.mpf(k) / 2 / tail
        return float(mpmath.exp(-v * v) / mpmath.sqrt(mpmath.pi) / tail)


def temperature_hp(theta_S, theta_E, K, x2, t) -> float:
    if x2 == 0.0:
        return theta_E
    if t == 0.0:
        return theta_S
    return theta_S + (theta_E - theta_S) * erfc_hp(x2 / (2.0 * math.sqrt(K * t)))


def simpson_fixed(f, a: float, b: float, panels: int = 10**6) -> float:
    """Composite Simpson with a fixed panel count; ``f`` must accept arrays."""
    if b == a:
        return 0.0
    n = 2 * panels
    x = np.linspace(a, b, n + 1)
    y = f(x)
    h = (b - a) / n
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def viscosity_vec(m, f, bc, x, t):
    theta = bc.theta_S + (bc.theta_E - bc.theta_S) * special.erfc(x / (2.0 * np.sqrt(m.K * t)))
    return f.eta_E * (theta / bc.theta_E) ** 1.5 * (bc.theta_E + f.psi) / (theta + f.psi)


def euler_front(w0: float, k0, t_end: float, dt: float, L: float) -> float:
    """Explicit Euler for dx/dt = w0 - k0(x), clipped to [0, L]."""
    n = round(t_end / dt)
    x = 0.0
    for _ in range(n):
        x = min(max(x + dt * (w0 - k0(x)), 0.0), L)
    return x
