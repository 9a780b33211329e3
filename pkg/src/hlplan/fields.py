"""Velocity fields, circle-union obstacles, signed distances, and smooth indicators.

All geometric types are immutable after construction and all operations are
pure, so they can be shared freely between threads.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Optional, Sequence, Tuple

import numpy as np

# Distance reported for an empty obstacle set.  Finite (rather than inf) so
# that tanh(B * d) saturates to exactly 1.0 without Inf leaking into gradients.
FREE_SPACE_DISTANCE = 1e9

TWO_PI = 2.0 * math.pi


def as_point(x) -> np.ndarray:
    """Coerce to a finite 1-D float array (a point in state space)."""
    pt = np.asarray(x, dtype=float)
    if pt.ndim != 1 or pt.size < 1:
        raise ValueError(f"expected a 1-D point, got shape {pt.shape}")
    if not np.all(np.isfinite(pt)):
        raise ValueError(f"point has non-finite coordinates: {pt!r}")
    return pt


def _as_batch(x) -> Tuple[np.ndarray, bool]:
    """Return (points as (n, d) array, was_single_point)."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        return arr[None, :], True
    if arr.ndim != 2:
        raise ValueError(f"expected point or batch of points, got shape {arr.shape}")
    return arr, False


@dataclasses.dataclass(frozen=True, eq=False)
class CircleObstacle:
    """A single circular obstacle."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        if not self.radius > 0:
            raise ValueError(f"obstacle radius must be positive, got {self.radius}")


class ObstacleSet:
    """An ordered collection of pairwise-disjoint circular obstacles."""

    def __init__(self, circles: Sequence[CircleObstacle] = ()):
        self.circles: Tuple[CircleObstacle, ...] = tuple(circles)
        if self.circles:
            self._centers = np.array([c.center for c in self.circles], dtype=float)
            self._radii = np.array([c.radius for c in self.circles], dtype=float)
            self._check_disjoint()
        else:
            self._centers = np.zeros((0, 0))
            self._radii = np.zeros(0)

    def _check_disjoint(self):
        m = len(self.circles)
        for i in range(m):
            for j in range(i + 1, m):
                gap = np.linalg.norm(self._centers[i] - self._centers[j])
                if gap <= self._radii[i] + self._radii[j]:
                    raise ValueError(
                        f"obstacles {i} and {j} overlap "
                        f"(center gap {gap:.6g} <= radii sum "
                        f"{self._radii[i] + self._radii[j]:.6g})"
                    )

    def __len__(self):
        return len(self.circles)

    def __iter__(self):
        return iter(self.circles)

    def subset(self, indices: Sequence[int]) -> "ObstacleSet":
        """The obstacles with the given indices, preserving order."""
        return ObstacleSet([self.circles[i] for i in sorted(indices)])

    def distances(self, pts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Signed distance and nearest-obstacle index for a (n, d) batch.

        Index is -1 where the set is empty.  Ties pick the lowest index.
        """
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        n = pts.shape[0]
        if not self.circles:
            return np.full(n, FREE_SPACE_DISTANCE), np.full(n, -1, dtype=int)
        diff = pts[:, None, :] - self._centers[None, :, :]
        dist = np.linalg.norm(diff, axis=2) - self._radii[None, :]
        idx = np.argmin(dist, axis=1)
        return dist[np.arange(n), idx], idx

    def distance_gradients(self, pts: np.ndarray) -> np.ndarray:
        """Gradient of the signed distance at each point of a (n, d) batch.

        Zero vector for an empty set or at an exact circle center.
        """
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if not self.circles:
            return np.zeros_like(pts)
        _, idx = self.distances(pts)
        rel = pts - self._centers[idx]
        norms = np.linalg.norm(rel, axis=1)
        grad = np.zeros_like(pts)
        ok = norms > 0
        grad[ok] = rel[ok] / norms[ok, None]
        return grad


def signed_distance(obs: ObstacleSet, x) -> Tuple[float, Optional[int]]:
    """Signed distance from ``x`` to the nearest obstacle boundary.

    Negative strictly inside an obstacle.  Returns ``(FREE_SPACE_DISTANCE,
    None)`` for an empty set.
    """
    pts, _ = _as_batch(as_point(x))
    vals, idx = obs.distances(pts)
    nearest = None if idx[0] < 0 else int(idx[0])
    return float(vals[0]), nearest


def signed_distance_gradient(obs: ObstacleSet, x) -> np.ndarray:
    """Unit radial direction away from the nearest obstacle center.

    Zero vector at an exact center or for an empty set; ties resolve to the
    lowest obstacle index.
    """
    pts, _ = _as_batch(as_point(x))
    return obs.distance_gradients(pts)[0]


def obstacle_indicator(obs: ObstacleSet, sharpness: float, x) -> float:
    """Smoothed free-space indicator: 1/2 + 1/2 tanh(B * d(x))."""
    d, _ = signed_distance(obs, x)
    return 0.5 + 0.5 * math.tanh(sharpness * d)


def goal_indicator(x_f, sharpness: float, x) -> float:
    """Smoothed away-from-goal indicator: 1 - exp(-A |x - x_f|^2)."""
    r2 = float(np.sum((as_point(x) - as_point(x_f)) ** 2))
    return 1.0 - math.exp(-sharpness * r2)


class ConstantField:
    """Spatially constant speed field."""

    def __init__(self, speed: float):
        if not speed > 0:
            raise ValueError(f"speed must be positive, got {speed}")
        self.speed = float(speed)

    def value(self, x):
        pts, single = _as_batch(x)
        out = np.full(pts.shape[0], self.speed)
        return float(out[0]) if single else out

    def gradient(self, x):
        pts, single = _as_batch(x)
        out = np.zeros_like(pts)
        return out[0] if single else out

    def min_speed(self) -> float:
        return self.speed


class SinusoidField:
    """Separable sinusoidal speed field in two dimensions.

    v(x) = base - amplitude * sin(2 pi (x1 + shift1)) * sin(2 pi (x2 + shift2))
    """

    def __init__(self, base: float, amplitude: float, shift1: float = 0.0,
                 shift2: float = 0.0):
        if not base - abs(amplitude) > 0:
            raise ValueError(
                f"field not strictly positive: base {base} - |amplitude| "
                f"{abs(amplitude)} <= 0"
            )
        self.base = float(base)
        self.amplitude = float(amplitude)
        self.shift1 = float(shift1)
        self.shift2 = float(shift2)

    def _phases(self, pts):
        if pts.shape[1] != 2:
            raise ValueError("sinusoid field is two-dimensional")
        return TWO_PI * (pts[:, 0] + self.shift1), TWO_PI * (pts[:, 1] + self.shift2)

    def value(self, x):
        pts, single = _as_batch(x)
        a1, a2 = self._phases(pts)
        out = self.base - self.amplitude * np.sin(a1) * np.sin(a2)
        return float(out[0]) if single else out

    def gradient(self, x):
        pts, single = _as_batch(x)
        a1, a2 = self._phases(pts)
        g = np.empty_like(pts)
        g[:, 0] = -self.amplitude * TWO_PI * np.cos(a1) * np.sin(a2)
        g[:, 1] = -self.amplitude * TWO_PI * np.sin(a1) * np.cos(a2)
        return g[0] if single else g

    def min_speed(self) -> float:
        return self.base - abs(self.amplitude)


def velocity_eval(field, x) -> float:
    """Pointwise field speed (always positive)."""
    return field.value(as_point(x))


def velocity_gradient(field, x) -> np.ndarray:
    """Exact spatial gradient of the field's closed form."""
    return field.gradient(as_point(x))
