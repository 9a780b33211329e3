"""Scan geometry and the travel/scan/replan simulation loop."""

import dataclasses

import numpy as np
import pytest

from hlplan import (
    GOAL_TOLERANCE,
    CircleObstacle,
    ConstantField,
    GoalSpec,
    ObstacleSet,
    ScenarioSpec,
    SolverParams,
    run_simulation,
    scan,
    solve,
)

TRUTH = ObstacleSet([
    CircleObstacle(np.array([0.0, 0.0]), 0.3),
    CircleObstacle(np.array([1.0, 0.0]), 0.2),
])


def test_scan_finds_obstacles_within_radius():
    # boundary of circle 0 is 0.09 away; circle 1 is far
    assert scan([], TRUTH, [0.39, 0.0], rho=0.1) == [0]
    assert scan([], TRUTH, [0.5, 0.0], rho=0.1) == []
    # distance is to the boundary, not the center
    assert scan([], TRUTH, [0.0, 0.39], rho=0.1) == [0]


def test_scan_skips_known_obstacles():
    assert scan([0], TRUTH, [0.4, 0.0], rho=0.1) == []
    assert scan([0], TRUTH, [0.7, 0.0], rho=0.5) == [1]
    assert scan([], TRUTH, [0.6, 0.0], rho=0.5) == [0, 1]


def test_scenario_spec_validation():
    goal = GoalSpec(np.array([1.0, 1.0]))
    with pytest.raises(ValueError, match="start"):
        ScenarioSpec(start=np.array([0.0, 0.0]), goal=goal,
                     field=ConstantField(1.0), true_obstacles=TRUTH)
    with pytest.raises(ValueError, match="goal"):
        ScenarioSpec(start=np.array([-1.0, -1.0]),
                     goal=GoalSpec(np.array([1.0, 0.0])),
                     field=ConstantField(1.0), true_obstacles=TRUTH)
    with pytest.raises(ValueError, match="discovery_radius"):
        ScenarioSpec(start=np.array([-1.0, -1.0]), goal=goal,
                     field=ConstantField(1.0), true_obstacles=ObstacleSet(),
                     discovery_radius=0.0)
    with pytest.raises(ValueError, match="max_replans"):
        ScenarioSpec(start=np.array([-1.0, -1.0]), goal=goal,
                     field=ConstantField(1.0), true_obstacles=ObstacleSet(),
                     max_replans=0)


def test_hamiltonian_restricted_to_known_obstacles():
    spec = ScenarioSpec(start=np.array([-1.0, -1.0]),
                        goal=GoalSpec(np.array([1.0, 1.0])),
                        field=ConstantField(1.0), true_obstacles=TRUTH)
    assert len(spec.hamiltonian(()).obstacles) == 0
    assert len(spec.hamiltonian([1]).obstacles) == 1
    assert spec.hamiltonian([1]).obstacles.circles[0] is TRUTH.circles[1]


def test_obstacle_free_simulation_travels_the_plan(free_spec, free_solve):
    trace = run_simulation(free_spec)
    assert trace.reached_goal
    assert trace.failure is None
    assert len(trace.events) == 1
    assert trace.events[0].discovered == ()
    result, _ = free_solve
    # with nothing to discover, travel replays the single plan in reverse
    # until the goal tolerance triggers
    plan = result.path
    assert np.array_equal(trace.events[0].planned_path, plan)
    n = trace.traveled.shape[0]
    assert np.array_equal(trace.traveled, plan[::-1][:n])
    assert np.linalg.norm(trace.traveled[-1] - free_spec.goal.position) \
        < GOAL_TOLERANCE


def test_simulation_discovers_and_replans(fig1_spec, fig1_trace):
    trace = fig1_trace
    assert trace.reached_goal
    assert trace.failure is None
    discoveries = [ev for ev in trace.events if ev.discovered]
    assert len(discoveries) >= 1
    # knowledge only grows and never repeats
    seen = []
    for ev in discoveries:
        assert not set(ev.discovered) & set(seen)
        seen.extend(ev.discovered)
    assert set(seen) <= set(range(len(fig1_spec.true_obstacles)))
    # every plan is pinned: node 0 on the goal, node J at the event position
    for ev in trace.events:
        assert np.allclose(ev.planned_path[0], fig1_spec.goal.position)
        assert np.allclose(ev.planned_path[-1], ev.position)
        assert ev.converged
    # traveled nodes stay clear of every true obstacle
    dists, _ = fig1_spec.true_obstacles.distances(trace.traveled)
    assert dists.min() >= -0.02


def test_per_replan_seeds_are_deterministic(fig1_spec, fig1_trace):
    """Re-solving a discovery event by hand reproduces its plan exactly."""
    ev = [e for e in fig1_trace.events if e.discovered][0]
    known = []
    for prior in fig1_trace.events:
        known.extend(prior.discovered)
        if prior is ev:
            break
    params = dataclasses.replace(fig1_spec.solver,
                                 seed=fig1_spec.solver.seed + 1)
    result = solve(fig1_spec.hamiltonian(known), ev.position, params)
    assert np.array_equal(result.path, ev.planned_path)
    assert result.iterations == ev.iterations


def test_replan_budget_failure():
    spec = ScenarioSpec(
        start=np.array([-1.0, -1.0]),
        goal=GoalSpec(np.array([1.0, 1.0])),
        field=ConstantField(1.0),
        true_obstacles=ObstacleSet([
            CircleObstacle(np.array([-0.5, -0.5]), 0.25),
            CircleObstacle(np.array([0.1, 0.2]), 0.3),
        ]),
        solver=SolverParams(horizon_t=4.0),
        max_replans=1,
    )
    trace = run_simulation(spec)
    if not trace.reached_goal:  # both obstacles block the straight line
        assert "budget" in trace.failure
