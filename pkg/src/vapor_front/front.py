"""Condensation function, recession speed and the moving injection front.

Along the streamline at height ``z`` the front obeys

    dx2/dt = w0(z) - k0(z, t),    k0(z, t) = int_0^{x2(z, t)} delta(x, t) dx,

starting from ``x2 = 0``. Once ``delta`` is bounded below by the plateau
constant ``c = 1 - p_vs_inf / p_S > 0`` the front is dominated by the
solution of ``dxi/dt = w0 - c xi`` and cannot pass ``w0 / c``.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericError, SimulationError
from .fields import asymptotic_pressure, pressure, transverse_profile
from .numerics import OdeStepperConfig, QuadratureLog, integrate, ode_solve
from .physics import (
    BoundaryConditions,
    FluidParams,
    MediumParams,
    saturation_pressure,
    saturation_pressure_limit,
    temperature,
)

DeltaFn = Callable[[float, float], float]


@dataclass(frozen=True)
class SimConfig:
    """Grids, steps and tolerances for a simulation run.

    ``quad_tol`` is relative: pressures are integrated to ``quad_tol * p_E``
    and recession speeds to ``quad_tol * q / 4`` (the peak of ``w0``).
    """

    z_levels: tuple[float, ...] = (0.5,)
    n_grid: int = 21
    output_times: tuple[float, ...] = ()
    t_end: float = 10.0
    dt: float = 0.02
    ode_rel_tol: float = 1e-6
    max_steps: int = 1_000_000
    max_halvings: int = 6
    quad_tol: float = 1e-9
    burn_in_factor: float = 5.0
    tol_bound: float = 1e-6

    def __post_init__(self) -> None:
        object.__setattr__(self, "z_levels", tuple(float(z) for z in self.z_levels))
        object.__setattr__(self, "output_times", tuple(float(t) for t in self.output_times))
        checks = [
            (len(self.z_levels) > 0, "z_levels non-empty"),
            (all(0.0 <= z <= 1.0 for z in self.z_levels), "0 <= z <= 1"),
            (self.n_grid >= 2, "n_grid >= 2"),
            (self.t_end > 0.0, "t_end > 0"),
            (list(self.output_times) == sorted(self.output_times), "output_times sorted"),
            (all(0.0 < t <= self.t_end for t in self.output_times), "0 < output_times <= t_end"),
            (self.dt > 0.0, "dt > 0"),
            (self.ode_rel_tol > 0.0, "ode_rel_tol > 0"),
            (self.max_steps >= 1, "max_steps >= 1"),
            (self.max_halvings >= 1, "max_halvings >= 1"),
            (self.quad_tol > 0.0, "quad_tol > 0"),
            (self.burn_in_factor >= 0.0, "burn_in_factor >= 0"),
            (self.tol_bound >= 0.0, "tol_bound >= 0"),
        ]
        for ok, invariant in checks:
            if not ok:
                raise DomainError(f"{invariant} violated")

    def pressure_tol(self, bc: BoundaryConditions) -> float:
        return self.quad_tol * bc.p_E

    def speed_tol(self, bc: BoundaryConditions) -> float:
        return self.quad_tol * bc.q / 4.0

    def burn_in_time(self, m: MediumParams) -> float:
        return self.burn_in_factor * m.L**2 / m.K


@dataclass(frozen=True)
class FrontState:
    t: float
    x2_front: float
    k0: float


@dataclass
class FrontTrajectory:
    """Sampled front history for one streamline height ``z``.

    Attributes:
        z: Streamline height.
        w0: Condensation-free speed at ``z``.
        samples: States at every accepted step of the finest run.
        bound: Asymptotic bound ``w0 / c``, ``inf`` when not applicable.
        bound_applicable: Whether the plateau constant ``c`` is positive.
        dt: Step of the run the samples come from.
        halving_delta: Relative change of the end position under the last halving.
        converged: Whether ``halving_delta`` fell below the configured tolerance.
    """

    z: float
    w0: float
    samples: list[FrontState] = field(default_factory=list)
    bound: float = math.inf
    bound_applicable: bool = False
    dt: float = math.nan
    halving_delta: float = math.nan
    converged: bool = False

    @property
    def t(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def x2(self) -> np.ndarray:
        return np.array([s.x2_front for s in self.samples])

    @property
    def k0(self) -> np.ndarray:
        return np.array([s.k0 for s in self.samples])

    @property
    def velocity(self) -> np.ndarray:
        """Front speed ``w0 - k0`` at each sample."""
        return self.w0 - self.k0

    @property
    def final(self) -> FrontState:
        return self.samples[-1]

    def at(self, t: float) -> FrontState:
        """Sample recorded at time ``t`` (must lie on the step grid)."""
        times = self.t
        i = int(np.argmin(np.abs(times - t)))
        if not math.isclose(times[i], t, rel_tol=1e-9, abs_tol=1e-12):
            raise KeyError(f"no sample at t = {t}")
        return self.samples[i]


def delta(
    m: MediumParams,
    f: FluidParams,
    bc: BoundaryConditions,
    x2: float,
    t: float,
    tol: float | None = None,
    log: QuadratureLog | None = None,
) -> float:
    """Fraction of the vapour condensing at ``(x2, t)``, ``max(0, 1 - p_vs / p_i)``."""
    p_i = pressure(m, f, bc, x2, t, tol, log)
    p_vs = saturation_pressure(f, bc, temperature(m, bc, x2, t))
    return max(0.0, (p_i - p_vs) / p_i)


def plateau_constant(f: FluidParams, bc: BoundaryConditions) -> float:
    """``c = 1 - p_vs_inf / p_S``; may be negative."""
    return 1.0 - saturation_pressure_limit(f, bc) / bc.p_S


def delta_infinity(m: MediumParams, f: FluidParams, bc: BoundaryConditions, x2: float) -> float:
    """Large-time condensation fraction, clamped below at zero."""
    return max(0.0, 1.0 - saturation_pressure_limit(f, bc) / asymptotic_pressure(m, f, bc, x2))


def recession_speed(
    m: MediumParams,
    f: FluidParams,
    bc: BoundaryConditions,
    x2_front: float,
    t: float,
    tol: float | None = None,
    delta_fn: DeltaFn | None = None,
    pressure_tol: float | None = None,
    log: QuadratureLog | None = None,
) -> float:
    """Recession speed ``k0 = int_0^x2_front delta(x, t) dx``.

    Only the wetted region ``[0, x2_front]`` is sampled. ``delta_fn(x, t)``
    replaces the model condensation function when given.

    Raises:
        DomainError: If ``x2_front`` is outside ``[0, L]``.
        QuadratureError: If either quadrature fails to converge.
    """
    if not (0.0 <= x2_front <= m.L * (1.0 + 1e-12)):
        raise DomainError(f"x2_front must lie in [0, L = {m.L}], got {x2_front}")
    if x2_front == 0.0:
        return 0.0
    x2_front = min(x2_front, m.L)
    if tol is None:
        tol = 1e-9 * bc.q / 4.0
    if delta_fn is None:
        def delta_fn(x: float, tau: float) -> float:
            return delta(m, f, bc, x, tau, pressure_tol, log)
    res = integrate(lambda x: delta_fn(x, t), 0.0, x2_front, tol)
    if log is not None:
        log.record(res, tol)
    return max(0.0, res.value)


def asymptotic_bound(f: FluidParams, bc: BoundaryConditions, z: float) -> tuple[float, bool]:
    """Upper bound ``w0(z) / c`` on the large-time front position.

    Returns ``(inf, False)`` when ``c <= 0``: the saturation pressure at the
    inlet temperature reaches ``p_S`` and the domination argument fails.
    """
    w0 = transverse_profile(bc, z)
    c = plateau_constant(f, bc)
    if c > 0.0:
        return w0 / c, True
    return math.inf, False


def majorant_trajectory(f: FluidParams, bc: BoundaryConditions, z: float, t: float) -> float:
    """Solution ``(w0 / c)(1 - exp(-c t))`` of ``xi = w0 t - c int_0^t xi``."""
    if not t >= 0.0:
        raise DomainError(f"majorant needs t >= 0, got {t}")
    c = plateau_constant(f, bc)
    if not c > 0.0:
        raise DomainError(f"majorant needs a positive plateau constant, got c = {c}")
    return _majorant(transverse_profile(bc, z), c, t)


def _majorant(w0: float, c: float, t: float) -> float:
    # -expm1(-ct)/c -> t as c -> 0
    return w0 * t if c * t < 1e-300 else w0 * (-math.expm1(-c * t)) / c


def _segment_ends(cfg: SimConfig, t_end: float) -> list[float]:
    ends = sorted({t for t in cfg.output_times if 0.0 < t < t_end} | {t_end})
    return ends


def advance_front(
    m: MediumParams,
    f: FluidParams,
    bc: BoundaryConditions,
    cfg: SimConfig,
    z: float,
    t_end: float,
    delta_fn: DeltaFn | None = None,
    log: QuadratureLog | None = None,
) -> FrontTrajectory:
    """Integrate the front at height ``z`` from ``x2 = 0`` to ``t_end``.

    RK4 at ``cfg.dt`` is repeated with the step halved until the end position
    moves by less than ``cfg.ode_rel_tol`` (relative), or ``cfg.max_halvings``
    is exhausted; the samples of the finest run are kept. Every configured
    output time lands exactly on a step.

    Raises:
        SimulationError: On a numeric failure; ``partial`` holds the samples
            of the failing run up to the last completed output segment.
    """
    if not t_end > 0.0:
        raise DomainError(f"t_end must be positive, got {t_end}")
    w0 = transverse_profile(bc, z)
    bound, applicable = asymptotic_bound(f, bc, z)
    k_tol = cfg.speed_tol(bc)
    p_tol = cfg.pressure_tol(bc)
    run_log = log if log is not None else QuadratureLog()

    def k0_at(x: float, t: float) -> float:
        return recession_speed(m, f, bc, min(max(x, 0.0), m.L), t, k_tol, delta_fn, p_tol, run_log)

    def rhs(t: float, x: float) -> float:
        return w0 - k0_at(x, t)

    ends = _segment_ends(cfg, t_end)

    def run(dt: float) -> tuple[list[float], list[float]]:
        ts, xs = [0.0], [0.0]
        step = OdeStepperConfig(dt=dt, rel_tol=cfg.ode_rel_tol, max_steps=cfg.max_steps)
        start = 0.0
        try:
            for end in ends:
                sol = ode_solve(rhs, xs[-1], start, end, step, lo=0.0, hi=m.L)
                ts.extend(sol.t[1:].tolist())
                xs.extend(sol.x[1:].tolist())
                start = end
        except NumericError as exc:
            partial = FrontTrajectory(z=z, w0=w0, bound=bound, bound_applicable=applicable, dt=dt)
            partial.samples = [FrontState(t, x, math.nan) for t, x in zip(ts, xs)]
            raise SimulationError(f"front integration failed at z = {z}: {exc}", partial) from exc
        return ts, xs

    dt = cfg.dt
    ts, xs = run(dt)
    rel_change = math.nan
    converged = False
    for _ in range(cfg.max_halvings):
        dt *= 0.5
        if dt < 1e-12 * t_end:
            raise SimulationError(f"step size underflow at z = {z} (dt = {dt})")
        fine_ts, fine_xs = run(dt)
        scale = max(abs(fine_xs[-1]), abs(xs[-1]))
        rel_change = abs(fine_xs[-1] - xs[-1]) / scale if scale > 0.0 else 0.0
        ts, xs = fine_ts, fine_xs
        if rel_change < cfg.ode_rel_tol:
            converged = True
            break

    traj = FrontTrajectory(
        z=z,
        w0=w0,
        bound=bound,
        bound_applicable=applicable,
        dt=dt,
        halving_delta=rel_change,
        converged=converged,
    )
    traj.samples = [FrontState(t, x, k0_at(x, t)) for t, x in zip(ts, xs)]
    return traj


@dataclass(frozen=True)
class DominationCheck:
    """Outcome of comparing a trajectory against the majorant and the bound.

    ``checked`` is False when the bound does not apply or no sample lies past
    the burn-in time; ``passed`` is then None.
    """

    checked: bool
    passed: bool | None
    t_burn: float
    samples_checked: int
    max_ratio: float
    all_below_bound: bool | None
    reason: str = ""


def check_domination(
    m: MediumParams,
    f: FluidParams,
    bc: BoundaryConditions,
    cfg: SimConfig,
    traj: FrontTrajectory,
    rtol: float = 1e-6,
) -> DominationCheck:
    """Majorant domination after burn-in; every sample against the bound."""
    t_burn = cfg.burn_in_time(m)
    if not traj.bound_applicable:
        return DominationCheck(False, None, t_burn, 0, math.nan, None, "bound not applicable")
    c = plateau_constant(f, bc)
    late = [s for s in traj.samples if s.t >= t_burn]
    if not late:
        return DominationCheck(False, None, t_burn, 0, math.nan, None, "burn-in not reached")
    max_ratio = 0.0
    ok = True
    for s in late:
        maj = _majorant(traj.w0, c, s.t)
        if s.x2_front > maj * (1.0 + rtol):
            ok = False
        if maj > 0.0:
            max_ratio = max(max_ratio, s.x2_front / maj)
    cap = traj.bound * (1.0 + cfg.tol_bound)
    below = all(s.x2_front <= cap for s in traj.samples)
    return DominationCheck(True, ok and below, t_burn, len(late), max_ratio, below)


def delta_profile(
    m: MediumParams, f: FluidParams, bc: BoundaryConditions, x2_grid: Sequence[float], t: float
) -> np.ndarray:
    return np.array([delta(m, f, bc, float(x), t) for x in x2_grid])
