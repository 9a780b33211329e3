"""Result serialization: trajectory CSV, events JSON, and SVG frames.

Frame legend: start green, goal red, undiscovered obstacles dark red,
discovered obstacles blue, traveled path black, current plan dashed magenta,
vehicle and past replan positions cyan.  One frame per discovery event plus
a final frame; a sinusoidal speed field gets a 32x32 colored-cell underlay.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import List

import numpy as np

from .fields import SinusoidField
from .replan import ReplanTrace, ScenarioSpec

CSV_HEADER = ["node_index", "time", "x", "y", "phase", "replan_id"]

_SIZE = 600
_MARGIN = 30


def _fmt(v: float) -> str:
    return format(float(v), ".12g")


def write_trajectory_csv(trace: ReplanTrace, spec: ScenarioSpec, path: Path):
    """Planned rows (all J+1 nodes per plan) then traveled rows, per replan."""
    delta = spec.solver.delta
    # traveled nodes are partitioned by the plan that produced them
    boundaries = [ev.node_index for ev in trace.events] + [len(trace.traveled) - 1]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rid, event in enumerate(trace.events):
            for j, node in enumerate(event.planned_path):
                writer.writerow([j, _fmt(j * delta), _fmt(node[0]),
                                 _fmt(node[1]), "planned", rid])
            seg = trace.traveled[boundaries[rid]:boundaries[rid + 1] + 1]
            for j, node in enumerate(seg):
                writer.writerow([j, _fmt(j * delta), _fmt(node[0]),
                                 _fmt(node[1]), "traveled", rid])


def write_events_json(trace: ReplanTrace, path: Path):
    """Discovery events only (the initial plan is not a discovery)."""
    records = []
    for event in trace.events:
        if not event.discovered:
            continue
        records.append({
            "position": [float(c) for c in event.position],
            "node_index": event.node_index,
            "discovered": list(event.discovered),
            "solve_stats": {
                "iterations": event.iterations,
                "converged": event.converged,
                "value": event.value,
            },
        })
    payload = {"reached_goal": trace.reached_goal,
               "total_nodes_traveled": trace.total_nodes_traveled,
               "failure": trace.failure,
               "events": records}
    path.write_text(json.dumps(payload, indent=2) + "\n")


class _Canvas:
    """Minimal SVG builder mapping scenario coordinates to pixels."""

    def __init__(self, bounds):
        self.lo = np.asarray(bounds[0], dtype=float)
        self.hi = np.asarray(bounds[1], dtype=float)
        self.parts: List[str] = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" '
            f'height="{_SIZE}" viewBox="0 0 {_SIZE} {_SIZE}">',
            f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>',
        ]

    def px(self, pt):
        span = self.hi - self.lo
        u = (np.asarray(pt, dtype=float) - self.lo) / span
        x = _MARGIN + u[0] * (_SIZE - 2 * _MARGIN)
        y = _SIZE - _MARGIN - u[1] * (_SIZE - 2 * _MARGIN)  # y up
        return x, y

    def scale(self, length: float) -> float:
        return length / (self.hi[0] - self.lo[0]) * (_SIZE - 2 * _MARGIN)

    def circle(self, center, radius, fill, opacity=1.0):
        cx, cy = self.px(center)
        self.parts.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{self.scale(radius):.2f}" '
            f'fill="{fill}" fill-opacity="{opacity}"/>'
        )

    def dot(self, center, fill, r_px=6.0):
        cx, cy = self.px(center)
        self.parts.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{r_px}" fill="{fill}"/>'
        )

    def polyline(self, pts, stroke, dashed=False, width=2.5):
        if len(pts) < 2:
            return
        coords = " ".join(f"{x:.2f},{y:.2f}" for x, y in (self.px(p) for p in pts))
        dash = ' stroke-dasharray="8,6"' if dashed else ""
        self.parts.append(
            f'<polyline points="{coords}" fill="none" stroke="{stroke}" '
            f'stroke-width="{width}"{dash}/>'
        )

    def cell(self, lo_pt, hi_pt, fill):
        x0, y0 = self.px(lo_pt)
        x1, y1 = self.px(hi_pt)
        self.parts.append(
            f'<rect x="{min(x0, x1):.2f}" y="{min(y0, y1):.2f}" '
            f'width="{abs(x1 - x0):.2f}" height="{abs(y1 - y0):.2f}" '
            f'fill="{fill}"/>'
        )

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


def _speed_color(t: float) -> str:
    """Lerp blue (slow) to yellow (fast)."""
    t = min(max(t, 0.0), 1.0)
    r = int(40 + t * (250 - 40))
    g = int(60 + t * (220 - 60))
    b = int(180 - t * (180 - 60))
    return f"rgb({r},{g},{b})"


def _field_underlay(canvas: _Canvas, spec: ScenarioSpec, cells=32):
    field = spec.field
    if not isinstance(field, SinusoidField):
        return
    lo, hi = canvas.lo, canvas.hi
    xs = np.linspace(lo[0], hi[0], cells + 1)
    ys = np.linspace(lo[1], hi[1], cells + 1)
    centers = np.array([[0.5 * (xs[i] + xs[i + 1]), 0.5 * (ys[j] + ys[j + 1])]
                        for i in range(cells) for j in range(cells)])
    vals = field.value(centers)
    vmin, vmax = field.base - abs(field.amplitude), field.base + abs(field.amplitude)
    k = 0
    for i in range(cells):
        for j in range(cells):
            t = (vals[k] - vmin) / (vmax - vmin) if vmax > vmin else 0.5
            canvas.cell((xs[i], ys[j]), (xs[i + 1], ys[j + 1]), _speed_color(t))
            k += 1


def render_frame(spec: ScenarioSpec, traveled, plan, known, replan_marks,
                 vehicle) -> str:
    """One SVG frame of the simulation state."""
    canvas = _Canvas(spec.plot_bounds)
    _field_underlay(canvas, spec)
    known = set(known)
    for i, circle in enumerate(spec.true_obstacles):
        color = "blue" if i in known else "darkred"
        canvas.circle(circle.center, circle.radius, color, opacity=0.85)
    if plan is not None and len(plan) >= 2:
        canvas.polyline(plan, "magenta", dashed=True)
    if traveled is not None and len(traveled) >= 2:
        canvas.polyline(traveled, "black")
    canvas.dot(spec.start, "green")
    canvas.dot(spec.goal.position, "red")
    for mark in replan_marks:
        canvas.dot(mark, "cyan", r_px=5.0)
    if vehicle is not None:
        canvas.dot(vehicle, "cyan")
    return canvas.render()


def write_frames(trace: ReplanTrace, spec: ScenarioSpec, outdir: Path):
    """frame_<k>.svg per discovery event, plus a final frame."""
    discoveries = [ev for ev in trace.events if ev.discovered]
    known: List[int] = []
    marks: List[np.ndarray] = []
    for k, event in enumerate(discoveries):
        known.extend(event.discovered)
        marks.append(event.position)
        traveled = trace.traveled[:event.node_index + 1]
        frame = render_frame(spec, traveled, event.planned_path, known,
                             marks, event.position)
        (outdir / f"frame_{k}.svg").write_text(frame)
    final = render_frame(spec, trace.traveled, None, known, marks,
                         trace.traveled[-1])
    (outdir / f"frame_{len(discoveries)}.svg").write_text(final)


def emit_outputs(trace: ReplanTrace, spec: ScenarioSpec, outdir) -> List[Path]:
    """Write trajectory.csv, events.json, and SVG frames into ``outdir``."""
    outdir = Path(outdir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        csv_path = outdir / "trajectory.csv"
        write_trajectory_csv(trace, spec, csv_path)
        events_path = outdir / "events.json"
        write_events_json(trace, events_path)
        write_frames(trace, spec, outdir)
    except OSError as exc:
        raise OSError(f"failed writing outputs under {outdir}: {exc}") from exc
    return sorted(outdir.iterdir())
