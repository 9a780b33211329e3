"""First-order fast-marching eikonal solver on a regular 2-D grid.

Used only as an independent validation oracle for the grid-free solver:
|grad u| = 1/v with u = 0 at the goal, obstacles rasterized sharply as
unreachable cells.
"""

from __future__ import annotations

import dataclasses
import heapq
import math
from typing import Tuple

import numpy as np

from .fields import ObstacleSet, as_point

UNREACHABLE = math.inf


@dataclasses.dataclass(frozen=True, eq=False)
class GridSpec:
    """Axis-aligned rectangular grid: node counts per axis, inclusive bounds."""

    lower: np.ndarray
    upper: np.ndarray
    resolution: Tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "lower", as_point(self.lower))
        object.__setattr__(self, "upper", as_point(self.upper))
        res = self.resolution
        if isinstance(res, int):
            res = (res,) * self.lower.size
        object.__setattr__(self, "resolution", tuple(int(r) for r in res))
        if self.lower.size != 2 or self.upper.size != 2:
            raise ValueError("fast marching oracle is two-dimensional")
        if not np.all(self.lower < self.upper):
            raise ValueError("grid lower bound must be strictly below upper")
        if any(r < 16 for r in self.resolution):
            raise ValueError("grid resolution must be at least 16 per axis")

    @property
    def spacing(self) -> np.ndarray:
        return (self.upper - self.lower) / (np.array(self.resolution) - 1)

    def axes(self):
        return tuple(
            np.linspace(self.lower[k], self.upper[k], self.resolution[k])
            for k in range(2)
        )


class TravelTimeGrid:
    """Fast-marching result: travel times on grid nodes plus interpolation."""

    def __init__(self, grid: GridSpec, values: np.ndarray):
        self.grid = grid
        self.values = values

    def query(self, x) -> float:
        """Bilinear interpolation; unreachable propagates from any corner."""
        x = as_point(x)
        lo, hi = self.grid.lower, self.grid.upper
        if np.any(x < lo - 1e-12) or np.any(x > hi + 1e-12):
            raise ValueError(f"query point {x} outside grid bounds")
        h = self.grid.spacing
        frac = np.clip((x - lo) / h, 0, np.array(self.grid.resolution) - 1)
        i0 = np.minimum(frac.astype(int), np.array(self.grid.resolution) - 2)
        t = frac - i0
        c = self.values[i0[0]:i0[0] + 2, i0[1]:i0[1] + 2]
        if not np.all(np.isfinite(c)):
            return UNREACHABLE
        top = c[0, 0] * (1 - t[1]) + c[0, 1] * t[1]
        bot = c[1, 0] * (1 - t[1]) + c[1, 1] * t[1]
        return float(top * (1 - t[0]) + bot * t[0])


def _solve_update(ua: float, ub: float, ha: float, hb: float, f: float) -> float:
    """Upwind quadratic for one node given the best neighbor in each axis."""
    candidates = []
    if math.isfinite(ua) and math.isfinite(ub):
        # two-sided: ((u-ua)/ha)^2 + ((u-ub)/hb)^2 = f^2
        a = 1.0 / ha ** 2 + 1.0 / hb ** 2
        b = -2.0 * (ua / ha ** 2 + ub / hb ** 2)
        c = ua ** 2 / ha ** 2 + ub ** 2 / hb ** 2 - f ** 2
        disc = b * b - 4 * a * c
        if disc >= 0:
            u = (-b + math.sqrt(disc)) / (2 * a)
            if u >= max(ua, ub):  # causality: both neighbors are upwind
                candidates.append(u)
    if math.isfinite(ua):
        candidates.append(ua + ha * f)
    if math.isfinite(ub):
        candidates.append(ub + hb * f)
    return min(candidates) if candidates else UNREACHABLE


def fast_march(field, obstacles: ObstacleSet, goal, grid: GridSpec) -> TravelTimeGrid:
    """Monotone front expansion of travel time outward from the goal node."""
    goal = as_point(goal)
    lo, hi = grid.lower, grid.upper
    if np.any(goal < lo) or np.any(goal > hi):
        raise ValueError("goal outside grid bounds")
    gd, _ = obstacles.distances(goal[None, :])
    if gd[0] < 0:
        raise ValueError("goal lies inside an obstacle")

    nx, ny = grid.resolution
    hx, hy = grid.spacing
    ax, ay = grid.axes()
    X, Y = np.meshgrid(ax, ay, indexing="ij")
    pts = np.column_stack([X.ravel(), Y.ravel()])
    speed = np.asarray(field.value(pts), dtype=float).reshape(nx, ny)
    dist, _ = obstacles.distances(pts)
    blocked = (dist < 0).reshape(nx, ny)

    u = np.full((nx, ny), UNREACHABLE)
    accepted = np.zeros((nx, ny), dtype=bool)

    gi = int(round((goal[0] - lo[0]) / hx))
    gj = int(round((goal[1] - lo[1]) / hy))
    if blocked[gi, gj]:
        raise ValueError("goal cell rasterizes inside an obstacle")
    u[gi, gj] = 0.0
    heap = [(0.0, gi, gj)]

    while heap:
        val, i, j = heapq.heappop(heap)
        if accepted[i, j] or val > u[i, j]:
            continue
        accepted[i, j] = True
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            ni, nj = i + di, j + dj
            if not (0 <= ni < nx and 0 <= nj < ny):
                continue
            if accepted[ni, nj] or blocked[ni, nj]:
                continue
            ua = min(
                u[ni - 1, nj] if ni > 0 else UNREACHABLE,
                u[ni + 1, nj] if ni < nx - 1 else UNREACHABLE,
            )
            ub = min(
                u[ni, nj - 1] if nj > 0 else UNREACHABLE,
                u[ni, nj + 1] if nj < ny - 1 else UNREACHABLE,
            )
            cand = _solve_update(ua, ub, hx, hy, 1.0 / speed[ni, nj])
            if cand < u[ni, nj]:
                u[ni, nj] = cand
                heapq.heappush(heap, (cand, ni, nj))

    return TravelTimeGrid(grid, u)
