"""Command-line entry points.

Subcommands:
  plan <scenario> [--out DIR]     single solve with every obstacle known
  simulate <scenario> [--out DIR] travel/scan/replan simulation loop
  oracle <scenario> [--grid N]    fast-marching reference value at the start
  gradcheck <scenario> [--samples N]  finite-difference report for grad_x H
  selftest                        quick property checks, exit nonzero on failure
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import selfcheck
from .fastmarch import GridSpec, fast_march
from .outputs import emit_outputs
from .replan import DiscoveryEvent, ReplanTrace, run_simulation
from .scenario import ScenarioError, load_scenario
from .solver import solve


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hlplan",
        description="Grid-free minimal-time path planning with obstacle "
                    "discovery and replanning.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_plan = sub.add_parser("plan", help="single solve, all obstacles known")
    p_plan.add_argument("scenario")
    p_plan.add_argument("--out", default=None, help="output directory")

    p_sim = sub.add_parser("simulate", help="replanning simulation loop")
    p_sim.add_argument("scenario")
    p_sim.add_argument("--out", default=None, help="output directory")

    p_orc = sub.add_parser("oracle", help="fast-marching reference value")
    p_orc.add_argument("scenario")
    p_orc.add_argument("--grid", type=int, default=201,
                       help="grid nodes per axis (default 201)")

    p_grad = sub.add_parser("gradcheck", help="finite-difference gradient report")
    p_grad.add_argument("scenario")
    p_grad.add_argument("--samples", type=int, default=200)

    sub.add_parser("selftest", help="run the built-in property checks")
    return parser


def _cmd_plan(args) -> int:
    spec = load_scenario(args.scenario)
    ham = spec.hamiltonian(range(len(spec.true_obstacles)))
    result = solve(ham, spec.start, spec.solver)
    print(f"value: {result.value:.6f}")
    print(f"iterations: {result.iterations}  converged: {result.converged}")
    if args.out:
        # a plan is a degenerate trace: one planning event, no travel
        event = DiscoveryEvent(
            position=spec.start.copy(), node_index=0,
            discovered=tuple(range(len(spec.true_obstacles))),
            iterations=result.iterations, converged=result.converged,
            value=result.value, planned_path=result.path.copy(),
        )
        trace = ReplanTrace(traveled=spec.start[None, :].copy(), events=[event],
                            reached_goal=False, total_nodes_traveled=1)
        emit_outputs(trace, spec, args.out)
        print(f"outputs written to {args.out}")
    return 0 if result.converged else 1


def _cmd_simulate(args) -> int:
    spec = load_scenario(args.scenario)
    trace = run_simulation(spec)
    print(f"reached_goal: {trace.reached_goal}")
    print(f"nodes traveled: {trace.total_nodes_traveled}  "
          f"discoveries: {sum(1 for e in trace.events if e.discovered)}")
    if trace.failure:
        print(f"failure: {trace.failure}")
    if args.out:
        emit_outputs(trace, spec, args.out)
        print(f"outputs written to {args.out}")
    return 0 if trace.reached_goal else 1


def _cmd_oracle(args) -> int:
    spec = load_scenario(args.scenario)
    grid = GridSpec(
        lower=np.asarray(spec.plot_bounds[0], dtype=float),
        upper=np.asarray(spec.plot_bounds[1], dtype=float),
        resolution=(args.grid, args.grid),
    )
    tt = fast_march(spec.field, spec.true_obstacles, spec.goal.position, grid)
    value = tt.query(spec.start)
    print(f"oracle value at start: {value:.6f}  (grid {args.grid}x{args.grid})")
    return 0


def _cmd_gradcheck(args) -> int:
    spec = load_scenario(args.scenario)
    ham = spec.hamiltonian(range(len(spec.true_obstacles)))
    err = selfcheck.gradcheck_max_error(ham, spec.plot_bounds, args.samples,
                                        seed=spec.solver.seed)
    print(f"max relative grad_x error over {args.samples} samples: {err:.3e}")
    return 0 if err < 1e-5 else 1


def _cmd_selftest(_args) -> int:
    ok = selfcheck.run_all(verbose=True)
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handler = {
        "plan": _cmd_plan,
        "simulate": _cmd_simulate,
        "oracle": _cmd_oracle,
        "gradcheck": _cmd_gradcheck,
        "selftest": _cmd_selftest,
    }[args.command]
    try:
        return handler(args)
    except (ScenarioError, ValueError, OSError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}),
              file=sys.stderr)
        return 1


def entrypoint():  # console_scripts hook
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
