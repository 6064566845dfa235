"""Spectral mild-solution solver and estimate checks for viscous heat-conducting flow on (0, pi)^2."""
from .errors import *  # noqa: F401,F403
from .forcing import ForcingLaw, make_law, register_law
from .rhs import buoyancy, convection_temperature, convection_velocity, dissipation, rhs_full
from .solver import (
    MildTrajectory,
    TimeGrid,
    etd_march,
    picard_solve,
    residual_strong,
    restart_consistency,
)
from .expint import phi_functions
from .spectral import (
    GridField,
    Operator,
    ScalarField,
    VelocityField,
    apply_fractional_power,
    apply_semigroup,
    from_grid,
    leray_project,
    make_operator,
    norm_fractional,
    norm_lp,
    to_grid,
)

__version__ = "0.1.0"
