"""Acceptance gate: one test per criterion, each reporting a pass/fail line.

Reference values: the obstacle-free constant-speed diagonal has exact travel
time 2*sqrt(2); the single blocking circle has the analytic tangent-arc-tangent
length; everything else is checked against the independent fast-marching grid
oracle or by direct property verification.
"""

import dataclasses
import math
import time

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from hlplan import (
    CircleObstacle,
    ConstantField,
    GoalSpec,
    GridSpec,
    ObstacleSet,
    SinusoidField,
    SmoothedHamiltonian,
    emit_outputs,
    fast_march,
    p_update,
    run_simulation,
    solve,
)
from hlplan.selfcheck import gradcheck_max_error

from conftest import ACCEPTANCE_LINES

EXACT_DIAGONAL = 2 * math.sqrt(2)


def report(n, name, ok, details, warn_only=False):
    status = "PASS" if ok else ("WARN" if warn_only else "FAIL")
    line = f"[{status}] criterion {n} ({name}): {details}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    if not warn_only:
        assert ok, line


@pytest.fixture(scope="module")
def free_oracle(free_spec):
    grid = GridSpec(lower=np.array([-1.5, -1.5]), upper=np.array([1.5, 1.5]),
                    resolution=(201, 201))
    tt = fast_march(free_spec.field, free_spec.true_obstacles,
                    free_spec.goal.position, grid)
    return tt.query(free_spec.start)


def test_criterion_1_geodesic_anchor(free_solve, free_oracle):
    result, _ = free_solve
    err_exact = abs(result.value - EXACT_DIAGONAL) / EXACT_DIAGONAL
    err_oracle = abs(result.value - free_oracle) / free_oracle
    ok = result.converged and err_exact < 0.02 and err_oracle < 0.03
    report(1, "geodesic anchor", ok,
           f"value {result.value:.4f} vs exact {EXACT_DIAGONAL:.4f} "
           f"({100 * err_exact:.2f}% < 2%) and oracle {free_oracle:.4f} "
           f"({100 * err_oracle:.2f}% < 3%)")


def test_criterion_2_horizon_invariance(free_spec, free_solve):
    result8, _ = free_solve
    params4 = dataclasses.replace(free_spec.solver, horizon_t=4.0)
    result4 = solve(free_spec.hamiltonian(()), free_spec.start, params4)
    rel = abs(result8.value - result4.value) / result8.value
    ok = result4.converged and rel < 0.02
    report(2, "horizon invariance", ok,
           f"t=8 value {result8.value:.4f} vs t=4 value {result4.value:.4f} "
           f"({100 * rel:.3f}% < 2%)")


def test_criterion_3_iteration_budget(fig1_trace, fig2_trace):
    counts1 = [ev.iterations for ev in fig1_trace.events]
    counts2 = [ev.iterations for ev in fig2_trace.events]
    conv = all(ev.converged for ev in fig1_trace.events + fig2_trace.events)
    ok = conv and max(counts1 + counts2) <= 40000
    report(3, "iteration budget", ok,
           f"constant-field solves {counts1}, oscillatory-field solves "
           f"{counts2}, all converged <= 40000")


def test_criterion_4_throughput(free_solve):
    result, seconds = free_solve
    rate = result.iterations / seconds
    report(4, "throughput sanity", rate >= 2500,
           f"{rate:.0f} iterations/s for J=80, d=2 (soft threshold 2500)",
           warn_only=True)


def test_criterion_5_prox_oracle():
    ham = SmoothedHamiltonian(
        SinusoidField(base=0.75, amplitude=0.25, shift1=0.2),
        ObstacleSet([CircleObstacle(np.array([-0.4, -0.4]), 0.25)]),
        GoalSpec(np.array([1.0, 1.0]), 100.0), 100.0,
    )
    rng = np.random.default_rng(11)
    sigma, delta = 1.0, 0.1
    worst = 0.0
    checked = 0
    while checked < 1000:
        x = rng.uniform(-1.5, 1.5, size=2)
        beta = rng.uniform(-3.0, 3.0, size=2)
        bn = np.linalg.norm(beta)
        if bn == 0:
            continue
        c = sigma * delta * ham.shrink_scale(x)
        res = minimize_scalar(
            lambda s: c * s + (s - bn) ** 2 / (2 * sigma),
            bounds=(0.0, bn + 1.0), method="bounded",
            options={"xatol": 1e-12},
        )
        want = res.x * beta / bn
        got = p_update(ham, x, beta, sigma, delta)
        worst = max(worst, float(np.linalg.norm(got - want)))
        checked += 1
    report(5, "proximal oracle equivalence", worst < 1e-8,
           f"max deviation {worst:.2e} < 1e-8 over {checked} instances")


def test_criterion_6_gradient_suite():
    ham = SmoothedHamiltonian(
        SinusoidField(base=0.75, amplitude=0.25, shift1=0.2),
        ObstacleSet([
            CircleObstacle(np.array([-0.4, -0.4]), 0.25),
            CircleObstacle(np.array([0.5, 0.3]), 0.3),
        ]),
        GoalSpec(np.array([1.0, 1.0]), 100.0), 100.0,
    )
    err_x = gradcheck_max_error(ham, ((-1.5, -1.5), (1.5, 1.5)), 200)

    rng = np.random.default_rng(6)
    err_p = 0.0
    err_l = 0.0
    checked = 0
    while checked < 200:
        x = rng.uniform(-1.5, 1.5, size=2)
        p = rng.uniform(-2.0, 2.0, size=2)
        if np.linalg.norm(p) < 0.1:  # stay away from the |p| kink
            continue
        h = 1e-6
        fd = np.array([
            (ham.value(x, p + [h, 0]) - ham.value(x, p - [h, 0])) / (2 * h),
            (ham.value(x, p + [0, h]) - ham.value(x, p - [0, h])) / (2 * h),
        ])
        exact = ham.grad_p(x, p)
        scale = max(np.linalg.norm(exact), 1.0)
        err_p = max(err_p, float(np.linalg.norm(exact - fd)) / scale)
        err_l = max(err_l, abs(ham.lagrangian(x, p) - ham.chi(x)))
        checked += 1

    ok = err_x < 1e-5 and err_p < 1e-5 and err_l < 1e-12
    report(6, "gradient suite", ok,
           f"grad_x err {err_x:.2e} < 1e-5, grad_p err {err_p:.2e} < 1e-5, "
           f"Lagrangian identity err {err_l:.2e} < 1e-12")


def _check_trace(spec, trace):
    problems = []
    if not trace.reached_goal:
        problems.append(f"did not reach goal ({trace.failure})")
    discoveries = [ev for ev in trace.events if ev.discovered]
    if not discoveries:
        problems.append("no discovery events")
    dists, _ = spec.true_obstacles.distances(trace.traveled)
    if dists.min() < -0.02:
        problems.append(f"obstacle penetration {dists.min():.4f}")
    seen = set()
    for ev in trace.events:
        if set(ev.discovered) & seen:
            problems.append("re-discovered a known obstacle")
        seen.update(ev.discovered)
        if not np.allclose(ev.planned_path[0], spec.goal.position):
            problems.append("plan not pinned to goal")
        if not np.allclose(ev.planned_path[-1], ev.position):
            problems.append("plan not pinned to the event position")
    return problems, len(discoveries), float(dists.min())


def test_criterion_7_replanning_end_to_end(fig1_spec, fig1_trace,
                                           fig2_spec, fig2_trace):
    p1, n1, d1 = _check_trace(fig1_spec, fig1_trace)
    p2, n2, d2 = _check_trace(fig2_spec, fig2_trace)
    ok = not p1 and not p2
    details = (f"constant field: {n1} discoveries, clearance {d1:.4f}; "
               f"oscillatory field: {n2} discoveries, clearance {d2:.4f}")
    if not ok:
        details += f"; problems: {p1 + p2}"
    report(7, "replanning end-to-end", ok, details)


def test_criterion_8_determinism(tmp_path, fig1_spec, fig1_trace):
    second = run_simulation(fig1_spec)
    dir1, dir2 = tmp_path / "run1", tmp_path / "run2"
    emit_outputs(fig1_trace, fig1_spec, dir1)
    emit_outputs(second, fig1_spec, dir2)
    csv1 = (dir1 / "trajectory.csv").read_bytes()
    csv2 = (dir2 / "trajectory.csv").read_bytes()
    report(8, "determinism", csv1 == csv2,
           f"two same-seed simulations wrote byte-identical trajectory.csv "
           f"({len(csv1)} bytes)")


def test_criterion_9_oracle_self_check(free_spec):
    goal = free_spec.goal.position
    start = free_spec.start
    field = ConstantField(1.0)

    def run(n, obstacles=ObstacleSet()):
        grid = GridSpec(lower=np.array([-1.5, -1.5]),
                        upper=np.array([1.5, 1.5]), resolution=(n, n))
        return fast_march(field, obstacles, goal, grid).query(start)

    u_coarse, u_fine = run(101), run(201)
    refine_ok = abs(u_fine - u_coarse) < abs(u_coarse - EXACT_DIAGONAL)

    blocking = ObstacleSet([CircleObstacle(np.array([0.0, 0.0]), 0.5)])
    d, r = math.sqrt(2), 0.5
    exact = 2 * math.sqrt(d * d - r * r) + r * (math.pi - 2 * math.acos(r / d))
    u_blocked = run(201, blocking)
    arc_err = abs(u_blocked - exact) / exact
    ok = refine_ok and arc_err < 0.03
    report(9, "oracle self-check", ok,
           f"refinement delta {abs(u_fine - u_coarse):.4f} < coarse error "
           f"{abs(u_coarse - EXACT_DIAGONAL):.4f}; tangent-arc-tangent "
           f"{u_blocked:.4f} vs {exact:.4f} ({100 * arc_err:.2f}% < 3%)")
