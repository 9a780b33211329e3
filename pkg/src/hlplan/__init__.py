"""Grid-free minimal-time path planning via a primal-dual Hopf-Lax solver.

Plans isotropic-motion trajectories by solving a saddle-point discretization
of the travel-time equation with a splitting iteration, and simulates
en-route obstacle discovery with halt-and-replan.
"""

from .fields import (
    FREE_SPACE_DISTANCE,
    CircleObstacle,
    ConstantField,
    ObstacleSet,
    SinusoidField,
    goal_indicator,
    obstacle_indicator,
    signed_distance,
    signed_distance_gradient,
    velocity_eval,
    velocity_gradient,
)
from .hamiltonian import GoalSpec, SmoothedHamiltonian
from .solver import (
    NonFiniteIterateError,
    PathIterate,
    SolveResult,
    SolverParams,
    convergence_residual,
    p_update,
    relaxation_update,
    solve,
    value_from_path,
    x0_update,
    x_update_step,
)
from .replan import (
    GOAL_TOLERANCE,
    DiscoveryEvent,
    ReplanTrace,
    ScenarioSpec,
    replan,
    run_simulation,
    scan,
)
from .fastmarch import GridSpec, TravelTimeGrid, fast_march
from .scenario import (
    ScenarioError,
    load_scenario,
    save_scenario,
    scenario_from_dict,
    scenario_to_dict,
)
from .outputs import emit_outputs

__version__ = "0.1.0"

__all__ = [
    "FREE_SPACE_DISTANCE",
    "GOAL_TOLERANCE",
    "CircleObstacle",
    "ConstantField",
    "DiscoveryEvent",
    "GoalSpec",
    "GridSpec",
    "NonFiniteIterateError",
    "ObstacleSet",
    "PathIterate",
    "ReplanTrace",
    "ScenarioError",
    "ScenarioSpec",
    "SinusoidField",
    "SmoothedHamiltonian",
    "SolveResult",
    "SolverParams",
    "TravelTimeGrid",
    "convergence_residual",
    "emit_outputs",
    "fast_march",
    "goal_indicator",
    "load_scenario",
    "obstacle_indicator",
    "p_update",
    "relaxation_update",
    "replan",
    "run_simulation",
    "save_scenario",
    "scan",
    "scenario_from_dict",
    "scenario_to_dict",
    "signed_distance",
    "signed_distance_gradient",
    "solve",
    "value_from_path",
    "velocity_eval",
    "velocity_gradient",
    "x0_update",
    "x_update_step",
]
