"""Scenario file loading, validation, and serialization.

Scenario files are JSON with strict unknown-key rejection: a typo fails
loudly instead of silently falling back to a default.  Defaults reproduce
the reference experiment settings documented on SolverParams.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .fields import CircleObstacle, ConstantField, ObstacleSet, SinusoidField
from .hamiltonian import GoalSpec
from .replan import ScenarioSpec
from .solver import SolverParams


class ScenarioError(ValueError):
    """A scenario file violated the schema or an invariant."""

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"scenario key '{key}': {message}")


_TOP_KEYS = {
    "start", "goal", "horizon_t", "delta", "velocity", "obstacles",
    "discovery_radius", "solver", "smoothing", "max_replans", "plot_bounds",
}
_SOLVER_KEYS = {
    "sigma", "tau", "kappa", "tol", "k_max", "gamma0", "gamma_warmup",
    "gamma_halve_every", "gamma_floor", "seed", "init_box",
}
_SMOOTHING_KEYS = {"A", "B"}
_VELOCITY_KEYS = {"type", "params"}
_CONSTANT_PARAMS = {"speed"}
_SINUSOID_PARAMS = {"base", "amplitude", "shift1", "shift2"}

SOLVER_DEFAULTS = dict(
    sigma=1.0, tau=0.2, kappa=1.0, tol=1e-3, k_max=40000,
    gamma0=0.2, gamma_warmup=5000, gamma_halve_every=1000, gamma_floor=1e-4,
    seed=0, init_box=[[-1.5, -1.5], [1.5, 1.5]],
)
TOP_DEFAULTS = dict(
    horizon_t=8.0, delta=0.1, discovery_radius=0.1, max_replans=20,
    plot_bounds=[[-1.5, -1.5], [1.5, 1.5]],
)
SMOOTHING_DEFAULTS = dict(A=100.0, B=100.0)


def _reject_unknown(data: dict, allowed: set, context: str):
    for key in data:
        if key not in allowed:
            raise ScenarioError(f"{context}{key}", "unknown key")


def _point(data, key: str) -> np.ndarray:
    try:
        pt = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        raise ScenarioError(key, "not a coordinate list") from None
    if pt.ndim != 1 or pt.size != 2 or not np.all(np.isfinite(pt)):
        raise ScenarioError(key, f"expected two finite coordinates, got {data!r}")
    return pt


def _field_from(data: dict):
    _reject_unknown(data, _VELOCITY_KEYS, "velocity.")
    vtype = data.get("type", "constant")
    params = dict(data.get("params", {}))
    if vtype == "constant":
        _reject_unknown(params, _CONSTANT_PARAMS, "velocity.params.")
        try:
            return ConstantField(params.get("speed", 1.0))
        except ValueError as exc:
            raise ScenarioError("velocity.params.speed", str(exc)) from None
    if vtype == "sinusoid":
        _reject_unknown(params, _SINUSOID_PARAMS, "velocity.params.")
        try:
            return SinusoidField(
                base=params.get("base", 0.75),
                amplitude=params.get("amplitude", 0.25),
                shift1=params.get("shift1", 0.0),
                shift2=params.get("shift2", 0.0),
            )
        except ValueError as exc:
            raise ScenarioError("velocity.params", str(exc)) from None
    raise ScenarioError("velocity.type", f"unknown field type {vtype!r}")


def scenario_from_dict(data: dict) -> ScenarioSpec:
    """Validate a parsed scenario document and apply defaults."""
    if not isinstance(data, dict):
        raise ScenarioError("", "scenario document must be a JSON object")
    _reject_unknown(data, _TOP_KEYS, "")
    for key in ("start", "goal"):
        if key not in data:
            raise ScenarioError(key, "required key missing")

    start = _point(data["start"], "start")
    goal_pt = _point(data["goal"], "goal")

    smoothing = dict(SMOOTHING_DEFAULTS)
    smoothing.update(data.get("smoothing", {}))
    _reject_unknown(smoothing, _SMOOTHING_KEYS, "smoothing.")

    field = _field_from(data.get("velocity", {"type": "constant"}))

    circles = []
    for i, entry in enumerate(data.get("obstacles", [])):
        _reject_unknown(entry, {"center", "radius"}, f"obstacles[{i}].")
        try:
            circles.append(CircleObstacle(
                center=_point(entry.get("center"), f"obstacles[{i}].center"),
                radius=float(entry.get("radius", 0.0)),
            ))
        except ValueError as exc:
            raise ScenarioError(f"obstacles[{i}]", str(exc)) from None
    try:
        obstacles = ObstacleSet(circles)
    except ValueError as exc:
        raise ScenarioError("obstacles", str(exc)) from None

    solver_data = dict(SOLVER_DEFAULTS)
    solver_data.update(data.get("solver", {}))
    _reject_unknown(solver_data, _SOLVER_KEYS, "solver.")
    top = dict(TOP_DEFAULTS)
    for key in ("horizon_t", "delta", "discovery_radius", "max_replans",
                "plot_bounds"):
        if key in data:
            top[key] = data[key]

    init_box = solver_data.pop("init_box")
    try:
        params = SolverParams(
            horizon_t=float(top["horizon_t"]),
            delta=float(top["delta"]),
            init_box=(tuple(init_box[0]), tuple(init_box[1])),
            **{k: (int(v) if k in ("k_max", "gamma_warmup", "gamma_halve_every",
                                   "seed") else float(v))
               for k, v in solver_data.items()},
        )
    except ValueError as exc:
        raise ScenarioError("solver", str(exc)) from None

    try:
        goal = GoalSpec(position=goal_pt, sharpness=float(smoothing["A"]))
        return ScenarioSpec(
            start=start,
            goal=goal,
            field=field,
            true_obstacles=obstacles,
            discovery_radius=float(top["discovery_radius"]),
            solver=params,
            sharpness_b=float(smoothing["B"]),
            max_replans=int(top["max_replans"]),
            plot_bounds=(tuple(top["plot_bounds"][0]), tuple(top["plot_bounds"][1])),
        )
    except ValueError as exc:
        raise ScenarioError("scenario", str(exc)) from None


def load_scenario(path) -> ScenarioSpec:
    """Read and validate a scenario JSON file."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ScenarioError(str(path), f"malformed JSON: {exc}") from None
    return scenario_from_dict(data)


def scenario_to_dict(spec: ScenarioSpec) -> dict:
    """Full round-trippable document for a scenario (all keys explicit)."""
    field = spec.field
    if isinstance(field, ConstantField):
        velocity = {"type": "constant", "params": {"speed": field.speed}}
    elif isinstance(field, SinusoidField):
        velocity = {"type": "sinusoid", "params": {
            "base": field.base, "amplitude": field.amplitude,
            "shift1": field.shift1, "shift2": field.shift2,
        }}
    else:
        raise TypeError(f"unserializable field type {type(field).__name__}")
    s = spec.solver
    return {
        "start": list(spec.start),
        "goal": list(spec.goal.position),
        "horizon_t": s.horizon_t,
        "delta": s.delta,
        "velocity": velocity,
        "obstacles": [
            {"center": list(c.center), "radius": c.radius}
            for c in spec.true_obstacles
        ],
        "discovery_radius": spec.discovery_radius,
        "solver": {
            "sigma": s.sigma, "tau": s.tau, "kappa": s.kappa, "tol": s.tol,
            "k_max": s.k_max, "gamma0": s.gamma0,
            "gamma_warmup": s.gamma_warmup,
            "gamma_halve_every": s.gamma_halve_every,
            "gamma_floor": s.gamma_floor, "seed": s.seed,
            "init_box": [list(s.init_box[0]), list(s.init_box[1])],
        },
        "smoothing": {"A": spec.goal.sharpness, "B": spec.sharpness_b},
        "max_replans": spec.max_replans,
        "plot_bounds": [list(spec.plot_bounds[0]), list(spec.plot_bounds[1])],
    }


def save_scenario(spec: ScenarioSpec, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(spec), indent=2) + "\n")
