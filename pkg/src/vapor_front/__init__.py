"""Non-isothermal injection of a condensable vapour into a slit-pore medium:
closed-form temperature, viscosity, pressure and condensation fields, and the
moving injection front with its asymptotic arrest bound."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DomainError,
    NumericError,
    OdeError,
    QuadratureError,
    ScenarioError,
    ScenarioParseError,
    ScenarioValidationError,
    SimulationError,
)
from .fields import (  # noqa: E402
    PressureProfile,
    VelocitySample,
    asymptotic_pressure,
    momentum_residual,
    pressure,
    pressure_profile,
    velocity,
)
from .front import (  # noqa: E402
    FrontState,
    FrontTrajectory,
    SimConfig,
    advance_front,
    asymptotic_bound,
    delta,
    delta_infinity,
    majorant_trajectory,
    recession_speed,
)
from .numerics import OdeStepperConfig, QuadratureResult, erfc, integrate, ode_solve  # noqa: E402
from .physics import (  # noqa: E402
    BoundaryConditions,
    FluidParams,
    MediumParams,
    saturation_pressure,
    saturation_pressure_limit,
    temperature,
    temperature_limit,
    viscosity,
)
from .scenario import Scenario, load_scenario, reference_scenario, write_scenario  # noqa: E402
