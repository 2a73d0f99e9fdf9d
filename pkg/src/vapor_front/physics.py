"""Closed-form physical fields of the slit-pore injection model.

Temperature comes from the semi-infinite conduction problem with the inlet
held at ``theta_E`` from ``t = 0`` on; saturation pressure follows the
Clapeyron law referenced to ``(theta_S, pi_S)``; viscosity follows
Sutherland's law referenced to ``(theta_E, eta_E)``.

All quantities are SI: K, Pa, Pa.s, m, s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .numerics import erfc


def _require(condition: bool, invariant: str, detail: str) -> None:
    if not condition:
        raise DomainError(f"{invariant} violated: {detail}")


@dataclass(frozen=True)
class MediumParams:
    """Pore length ``L`` (m) and thermal diffusivity ``K`` (m^2/s)."""

    L: float
    K: float

    def __post_init__(self) -> None:
        _require(self.L > 0.0, "L > 0", f"L = {self.L}")
        _require(self.K > 0.0, "K > 0", f"K = {self.K}")


@dataclass(frozen=True)
class FluidParams:
    """Condensable-fluid constants.

    Attributes:
        lambda_i: Clapeyron constant (K).
        pi_S: Boiling pressure at the reference temperature theta_S (Pa).
        eta_E: Viscosity at the inlet temperature theta_E (Pa.s).
        psi: Sutherland constant (K).
    """

    lambda_i: float
    pi_S: float
    eta_E: float
    psi: float

    def __post_init__(self) -> None:
        _require(self.lambda_i > 0.0, "lambda_i > 0", f"lambda_i = {self.lambda_i}")
        _require(self.pi_S > 0.0, "pi_S > 0", f"pi_S = {self.pi_S}")
        _require(self.eta_E > 0.0, "eta_E > 0", f"eta_E = {self.eta_E}")
        _require(self.psi >= 0.0, "psi >= 0", f"psi = {self.psi}")


@dataclass(frozen=True)
class BoundaryConditions:
    """Inlet/outlet driving data; ``q`` scales the transverse velocity profile."""

    theta_E: float
    theta_S: float
    p_E: float
    p_S: float
    q: float

    def __post_init__(self) -> None:
        _require(self.theta_S > 0.0, "theta_S > 0", f"theta_S = {self.theta_S}")
        _require(
            self.theta_E > self.theta_S,
            "theta_E > theta_S",
            f"theta_E = {self.theta_E}, theta_S = {self.theta_S}",
        )
        _require(self.p_S > 0.0, "p_S > 0", f"p_S = {self.p_S}")
        _require(self.p_E > self.p_S, "p_E > p_S", f"p_E = {self.p_E}, p_S = {self.p_S}")
        _require(self.q > 0.0, "q > 0", f"q = {self.q}")


def temperature(m: MediumParams, bc: BoundaryConditions, x2: float, t: float) -> float:
    """Temperature at depth ``x2`` and time ``t``.

    At ``(0, 0)`` the inlet value wins: the inlet is held at ``theta_E`` from
    the initial instant on.
    """
    if not (x2 >= 0.0 and t >= 0.0):
        raise DomainError(f"temperature needs x2 >= 0 and t >= 0, got x2 = {x2}, t = {t}")
    if x2 == 0.0:
        return bc.theta_E
    width = 2.0 * math.sqrt(m.K * t)
    if width == 0.0:
        return bc.theta_S
    theta = bc.theta_S + (bc.theta_E - bc.theta_S) * erfc(x2 / width)
    return min(max(theta, bc.theta_S), bc.theta_E)


def temperature_limit(bc: BoundaryConditions) -> float:
    """Pointwise ``t -> inf`` limit of :func:`temperature` on ``[0, L]``."""
    return bc.theta_E


def saturation_pressure(f: FluidParams, bc: BoundaryConditions, theta: float) -> float:
    if not theta > 0.0:
        raise DomainError(f"saturation_pressure needs theta > 0, got {theta}")
    return f.pi_S * math.exp(f.lambda_i * (1.0 / bc.theta_S - 1.0 / theta))


def saturation_pressure_limit(f: FluidParams, bc: BoundaryConditions) -> float:
    return saturation_pressure(f, bc, bc.theta_E)


def viscosity(f: FluidParams, bc: BoundaryConditions, theta: float) -> float:
    """Sutherland viscosity at ``theta``, equal to ``eta_E`` at the inlet temperature.

    Depends on position and time only through the temperature, never on the
    transverse coordinate.
    """
    if not theta > 0.0:
        raise DomainError(f"viscosity needs theta > 0, got {theta}")
    if theta == bc.theta_E:
        return f.eta_E
    ratio = theta / bc.theta_E
    return f.eta_E * ratio**1.5 * (bc.theta_E + f.psi) / (theta + f.psi)
