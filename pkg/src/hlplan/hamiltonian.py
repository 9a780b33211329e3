"""The smoothed isotropic travel-time Hamiltonian and its gradients.

H(x, p) = chi(x) * (v(x) * O(x) * |p| - 1)

where chi is the smoothed away-from-goal indicator, v the speed field, and O
the smoothed free-space indicator.  The Lagrangian pairing
<p, grad_p H> - H collapses to chi(x) for p != 0, which makes a convenient
diagnostic.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .fields import ObstacleSet, as_point, _as_batch


@dataclasses.dataclass(frozen=True, eq=False)
class GoalSpec:
    """Target point plus the sharpness of its smoothed indicator."""

    position: np.ndarray
    sharpness: float = 100.0

    def __post_init__(self):
        object.__setattr__(self, "position", as_point(self.position))
        if not self.sharpness > 0:
            raise ValueError(f"goal sharpness must be positive, got {self.sharpness}")


class SmoothedHamiltonian:
    """Bundles field, obstacles, goal, and smoothing sharpness.

    All evaluation methods accept a single point ``(d,)`` or a batch
    ``(n, d)`` and return matching shapes.  Instances are immutable.
    """

    def __init__(self, field, obstacles: ObstacleSet, goal: GoalSpec,
                 obstacle_sharpness: float = 100.0):
        if not obstacle_sharpness > 0:
            raise ValueError(
                f"obstacle sharpness must be positive, got {obstacle_sharpness}"
            )
        self.field = field
        self.obstacles = obstacles
        self.goal = goal
        self.obstacle_sharpness = float(obstacle_sharpness)

    def with_obstacles(self, obstacles: ObstacleSet) -> "SmoothedHamiltonian":
        return SmoothedHamiltonian(self.field, obstacles, self.goal,
                                   self.obstacle_sharpness)

    # -- smoothed indicator factors -------------------------------------

    def chi(self, x):
        """Away-from-goal factor 1 - exp(-A |x - x_f|^2), in [0, 1)."""
        pts, single = _as_batch(x)
        r2 = np.sum((pts - self.goal.position) ** 2, axis=1)
        out = 1.0 - np.exp(-self.goal.sharpness * r2)
        return float(out[0]) if single else out

    def chi_grad(self, x):
        pts, single = _as_batch(x)
        rel = pts - self.goal.position
        r2 = np.sum(rel ** 2, axis=1)
        out = 2.0 * self.goal.sharpness * rel * np.exp(
            -self.goal.sharpness * r2)[:, None]
        return out[0] if single else out

    def free_factor(self, x):
        """Obstacle factor O(x) = 1/2 + 1/2 tanh(B d(x)), in (0, 1]."""
        pts, single = _as_batch(x)
        d, _ = self.obstacles.distances(pts)
        out = 0.5 + 0.5 * np.tanh(self.obstacle_sharpness * d)
        return float(out[0]) if single else out

    def free_factor_grad(self, x):
        pts, single = _as_batch(x)
        d, _ = self.obstacles.distances(pts)
        dgrad = self.obstacles.distance_gradients(pts)
        sech2 = 1.0 / np.cosh(np.clip(self.obstacle_sharpness * d, -350, 350)) ** 2
        out = 0.5 * self.obstacle_sharpness * sech2[:, None] * dgrad
        return out[0] if single else out

    def shrink_scale(self, x):
        """Co-state prox shrinkage scale per unit sigma*delta.

        Uses the crisp away-from-goal indicator, i.e. v(x) * O(x) except
        exactly at the goal where it is 0.  The smoothed chi cannot be used
        here: nodes parked on (but never exactly at) the goal would see a
        near-zero shrink and their co-states would integrate positional
        noise without bound, which keeps the residual from ever settling.
        """
        pts, single = _as_batch(x)
        away = np.any(pts != self.goal.position, axis=1).astype(float)
        out = away * self.field.value(pts) * self.free_factor(pts)
        return float(out[0]) if single else out

    # -- Hamiltonian, gradients, Lagrangian ------------------------------

    def value(self, x, p):
        """H(x, p) = chi (v O |p| - 1)."""
        xs, single = _as_batch(x)
        ps, _ = _as_batch(p)
        pnorm = np.linalg.norm(ps, axis=1)
        out = self.chi(xs) * (self.field.value(xs) * self.free_factor(xs) * pnorm - 1.0)
        return float(out[0]) if single else out

    def grad_x(self, x, p):
        """Spatial gradient of H.

        grad_chi * (v O |p| - 1) + chi |p| (grad_v O + v grad_O)
        """
        xs, single = _as_batch(x)
        ps, _ = _as_batch(p)
        pnorm = np.linalg.norm(ps, axis=1)
        v = self.field.value(xs)
        free = self.free_factor(xs)
        chi = self.chi(xs)
        speed_grad = (self.field.gradient(xs) * free[:, None]
                      + v[:, None] * self.free_factor_grad(xs))
        out = (self.chi_grad(xs) * (v * free * pnorm - 1.0)[:, None]
               + (chi * pnorm)[:, None] * speed_grad)
        return out[0] if single else out

    def grad_p(self, x, p):
        """Co-state gradient chi v O p/|p|; zero vector at p = 0."""
        xs, single = _as_batch(x)
        ps, _ = _as_batch(p)
        pnorm = np.linalg.norm(ps, axis=1)
        scale = np.zeros_like(pnorm)
        ok = pnorm > 0
        coeff = self.chi(xs) * self.field.value(xs) * self.free_factor(xs)
        scale[ok] = coeff[ok] / pnorm[ok]
        out = scale[:, None] * ps
        return out[0] if single else out

    def lagrangian(self, x, p):
        """<p, grad_p H> - H.  Equals chi(x) exactly for p != 0."""
        xs, single = _as_batch(x)
        ps, _ = _as_batch(p)
        pairing = np.sum(ps * np.atleast_2d(self.grad_p(xs, ps)), axis=1)
        out = pairing - np.atleast_1d(self.value(xs, ps))
        return float(out[0]) if single else out
