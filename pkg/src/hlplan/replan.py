"""Obstacle-discovery simulation: travel, scan, halt, re-solve, repeat.

The vehicle plans with whatever obstacles it currently knows (none at first),
advances one path node at a time, and scans at each position before moving.
Any unknown obstacle within the discovery radius halts travel and triggers a
fresh solve from the current position.
"""

from __future__ import annotations

import dataclasses
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .fields import ObstacleSet, as_point, signed_distance
from .hamiltonian import GoalSpec, SmoothedHamiltonian
from .solver import SolveResult, SolverParams, solve

# The smoothed goal indicator never lets the final node land exactly on the
# goal; within this radius counts as arrived.
GOAL_TOLERANCE = 1e-2


@dataclasses.dataclass(frozen=True, eq=False)
class ScenarioSpec:
    """Everything needed to run one simulation."""

    start: np.ndarray
    goal: GoalSpec
    field: object
    true_obstacles: ObstacleSet
    discovery_radius: float = 0.1
    solver: SolverParams = dataclasses.field(default_factory=SolverParams)
    sharpness_b: float = 100.0
    max_replans: int = 20
    plot_bounds: Tuple[Tuple[float, float], Tuple[float, float]] = ((-1.5, -1.5),
                                                                   (1.5, 1.5))

    def __post_init__(self):
        object.__setattr__(self, "start", as_point(self.start))
        if not self.discovery_radius > 0:
            raise ValueError("discovery_radius must be positive")
        if not self.max_replans >= 1:
            raise ValueError("max_replans must be a positive integer")
        d_start, _ = signed_distance(self.true_obstacles, self.start)
        if d_start <= 0:
            raise ValueError("start point lies inside an obstacle")
        d_goal, _ = signed_distance(self.true_obstacles, self.goal.position)
        if d_goal <= 0:
            raise ValueError("goal point lies inside an obstacle")

    def hamiltonian(self, known_indices: Sequence[int] = ()) -> SmoothedHamiltonian:
        """Hamiltonian restricted to the obstacles the vehicle knows about."""
        return SmoothedHamiltonian(
            self.field,
            self.true_obstacles.subset(known_indices),
            self.goal,
            self.sharpness_b,
        )


@dataclasses.dataclass(eq=False)
class DiscoveryEvent:
    """One planning event: where it happened and what the solve reported.

    ``discovered`` is empty only for the initial plan.
    """

    position: np.ndarray
    node_index: int
    discovered: Tuple[int, ...]
    iterations: int
    converged: bool
    value: float
    planned_path: np.ndarray


@dataclasses.dataclass(eq=False)
class ReplanTrace:
    traveled: np.ndarray
    events: List[DiscoveryEvent]
    reached_goal: bool
    total_nodes_traveled: int
    failure: Optional[str] = None


def scan(known: Sequence[int], truth: ObstacleSet, x, rho: float) -> List[int]:
    """Indices of unknown obstacles whose boundary is within ``rho`` of x."""
    x = as_point(x)
    known_set = set(known)
    found = []
    for i, circle in enumerate(truth):
        if i in known_set:
            continue
        if np.linalg.norm(x - circle.center) - circle.radius <= rho:
            found.append(i)
    return found


def replan(ham: SmoothedHamiltonian, current, params: SolverParams,
           initial_path=None) -> SolveResult:
    """A fresh solve from the current position with current knowledge."""
    return solve(ham, current, params, initial_path=initial_path)


def _event(position, node_index, discovered, result: SolveResult) -> DiscoveryEvent:
    return DiscoveryEvent(
        position=np.array(position, dtype=float),
        node_index=node_index,
        discovered=tuple(discovered),
        iterations=result.iterations,
        converged=result.converged,
        value=result.value,
        planned_path=result.path.copy(),
    )


def run_simulation(spec: ScenarioSpec) -> ReplanTrace:
    """Run the travel/scan/replan loop until arrival or failure.

    The knowledge set only grows; the solver never sees an obstacle the
    vehicle has not scanned.  Each replan reseeds deterministically from the
    scenario seed plus the replan count.
    """
    x_f = spec.goal.position
    known: List[int] = []
    pos = spec.start.copy()
    traveled = [pos.copy()]
    events: List[DiscoveryEvent] = []
    replans = 0
    failure = None
    reached = False

    def solve_from(position):
        params = dataclasses.replace(spec.solver, seed=spec.solver.seed + replans)
        return replan(spec.hamiltonian(known), position, params)

    result = solve_from(pos)
    events.append(_event(pos, 0, (), result))
    if not result.converged:
        return ReplanTrace(np.array(traveled), events, False, len(traveled),
                           failure="initial solve did not converge")
    plan = result.path
    next_idx = plan.shape[0] - 1  # vehicle sits at plan[J]

    while True:
        if np.linalg.norm(pos - x_f) < GOAL_TOLERANCE:
            reached = True
            break

        new = scan(known, spec.true_obstacles, pos, spec.discovery_radius)
        if new:
            known.extend(new)
            replans += 1
            if replans > spec.max_replans:
                failure = f"replan budget {spec.max_replans} exhausted"
                break
            result = solve_from(pos)
            events.append(_event(pos, len(traveled) - 1, new, result))
            if not result.converged:
                failure = f"replan {replans} did not converge"
                break
            plan = result.path
            next_idx = plan.shape[0] - 1
            continue

        if next_idx == 0:
            failure = "plan exhausted before reaching the goal"
            break
        next_idx -= 1
        pos = plan[next_idx].copy()
        traveled.append(pos.copy())

    return ReplanTrace(
        traveled=np.array(traveled),
        events=events,
        reached_goal=reached,
        total_nodes_traveled=len(traveled),
        failure=failure,
    )
