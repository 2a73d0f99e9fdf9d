"""Order-zero pressure and velocity fields in the slit pore.

The transverse profile is the Hele-Shaw parabola ``q (z - z^2)`` shifted by
the recession speed; the pressure gradient is ``-2 q eta(x2, t)`` and the
pressure is clamped below at the outlet value ``p_S``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .numerics import QuadratureLog, QuadratureResult, integrate
from .physics import (
    BoundaryConditions,
    FluidParams,
    MediumParams,
    temperature,
    viscosity,
)

# relative slack on x2 <= L for grid points produced by floating arithmetic
_EDGE_SLACK = 1e-12


@dataclass(frozen=True)
class PressureProfile:
    x2_grid: np.ndarray
    p_values: np.ndarray
    t: float


@dataclass(frozen=True)
class VelocitySample:
    x2: float
    z: float
    v2: float


def default_pressure_tol(bc: BoundaryConditions) -> float:
    return 1e-9 * bc.p_E


def _check_x2(m: MediumParams, x2: float) -> float:
    if not (0.0 <= x2 <= m.L * (1.0 + _EDGE_SLACK)):
        raise DomainError(f"x2 must lie in [0, L = {m.L}], got {x2}")
    return min(x2, m.L)


def _check_z(z: float) -> None:
    if not (0.0 <= z <= 1.0):
        raise DomainError(f"z must lie in [0, 1], got {z}")


def transverse_profile(bc: BoundaryConditions, z: float) -> float:
    """Condensation-free speed ``w0(z) = q (z - z^2)`` of the streamline at height ``z``."""
    _check_z(z)
    return bc.q * (z - z * z)


def velocity(bc: BoundaryConditions, z: float, k0: float) -> float:
    if not k0 >= 0.0:
        raise DomainError(f"k0 must be >= 0, got {k0}")
    return transverse_profile(bc, z) - k0


def velocity_sample(bc: BoundaryConditions, x2: float, z: float, k0: float) -> VelocitySample:
    return VelocitySample(x2=x2, z=z, v2=velocity(bc, z, k0))


def viscosity_integral(
    m: MediumParams,
    f: FluidParams,
    bc: BoundaryConditions,
    a: float,
    b: float,
    t: float,
    tol: float,
) -> QuadratureResult:
    """Integral of ``eta(Theta(x, t))`` over ``x`` in ``[a, b]``."""
    return integrate(lambda x: viscosity(f, bc, temperature(m, bc, x, t)), a, b, tol)


def pressure(
    m: MediumParams,
    f: FluidParams,
    bc: BoundaryConditions,
    x2: float,
    t: float,
    tol: float | None = None,
    log: QuadratureLog | None = None,
) -> float:
    """Injected-vapour pressure ``max(p_S, p_E - 2 q int_0^x2 eta dx)``.

    ``tol`` bounds the absolute error of the pressure, so the viscosity
    integral is computed to ``tol / (2 q)``.
    """
    x2 = _check_x2(m, x2)
    if not t >= 0.0:
        raise DomainError(f"pressure needs t >= 0, got {t}")
    if x2 == 0.0:
        return bc.p_E
    if tol is None:
        tol = default_pressure_tol(bc)
    itol = tol / (2.0 * bc.q)
    res = viscosity_integral(m, f, bc, 0.0, x2, t, itol)
    if log is not None:
        log.record(res, itol)
    return max(bc.p_S, bc.p_E - 2.0 * bc.q * res.value)


def pressure_profile(
    m: MediumParams,
    f: FluidParams,
    bc: BoundaryConditions,
    x2_grid,
    t: float,
    tol: float | None = None,
    log: QuadratureLog | None = None,
) -> PressureProfile:
    """Pressure on an ordered grid, accumulating the integral panel by panel."""
    grid = np.asarray(x2_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) < 0):
        raise DomainError("x2_grid must be a non-empty ordered 1-D sequence")
    for x in (grid[0], grid[-1]):
        _check_x2(m, float(x))
    if tol is None:
        tol = default_pressure_tol(bc)
    itol = tol / (2.0 * bc.q) / max(1, grid.size - 1)
    values = np.empty_like(grid)
    acc = 0.0
    prev = 0.0
    for i, x in enumerate(grid):
        x = min(float(x), m.L)
        if x > prev:
            res = viscosity_integral(m, f, bc, prev, x, t, itol)
            if log is not None:
                log.record(res, itol)
            acc += res.value
        prev = x
        values[i] = bc.p_E if x == 0.0 else max(bc.p_S, bc.p_E - 2.0 * bc.q * acc)
    return PressureProfile(x2_grid=grid, p_values=values, t=t)


def pressure_breakpoint(f: FluidParams, bc: BoundaryConditions) -> float:
    """Depth at which the asymptotic pressure line reaches ``p_S``."""
    return (bc.p_E - bc.p_S) / (2.0 * bc.q * f.eta_E)


def asymptotic_pressure(m: MediumParams, f: FluidParams, bc: BoundaryConditions, x2: float) -> float:
    """Large-time pressure: affine with slope ``-2 q eta_E`` down to ``p_S``, then flat."""
    x2 = _check_x2(m, x2)
    if x2 <= pressure_breakpoint(f, bc):
        return max(bc.p_S, bc.p_E - 2.0 * bc.q * f.eta_E * x2)
    return bc.p_S


def momentum_residual(
    m: MediumParams,
    f: FluidParams,
    bc: BoundaryConditions,
    x2: float,
    z: float,
    t: float,
    h_z: float,
    k0: float = 0.0,
    h_x: float | None = None,
) -> float:
    """Centered-difference value of ``-d/dz(eta dv/dz) + dp/dx2`` at an interior point.

    The horizontal step defaults to ``h_z * L`` so a single knob refines both
    directions. The pressure difference across ``[x2 - h_x, x2 + h_x]`` is
    taken as the viscosity integral over that cell rather than as the
    difference of two pressures near ``p_E``, which would cancel
    catastrophically; the result matches the plain centered difference of
    the unclamped pressure.
    """
    if h_x is None:
        h_x = h_z * m.L
    if not (h_z > 0.0 and h_x > 0.0):
        raise DomainError("finite-difference steps must be positive")
    if not (h_z <= z <= 1.0 - h_z):
        raise DomainError(f"z = {z} is not interior for h_z = {h_z}")
    if not (h_x <= x2 <= m.L - h_x):
        raise DomainError(f"x2 = {x2} is not interior for h_x = {h_x}")
    if h_z < 1e-5 or h_x < 1e-5 * m.L:
        warnings.warn(
            "finite-difference step this small is dominated by round-off",
            RuntimeWarning,
            stacklevel=2,
        )
    eta = viscosity(f, bc, temperature(m, bc, x2, t))
    v_lo = velocity(bc, z - h_z, k0)
    v_mid = velocity(bc, z, k0)
    v_hi = velocity(bc, z + h_z, k0)
    # eta does not depend on z, so the flux difference factors
    shear = eta * ((v_hi - v_mid) - (v_mid - v_lo)) / (h_z * h_z)
    cell = viscosity_integral(m, f, bc, x2 - h_x, x2 + h_x, t, 1e-14 * f.eta_E * h_x)
    dp_dx = -2.0 * bc.q * cell.value / (2.0 * h_x)
    return -shear + dp_dx

