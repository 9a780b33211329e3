"""Built-in property checks backing the `selftest` and `gradcheck` commands.

These reuse the same invariants the test suite pins down, packaged so a
deployed install can sanity-check itself without pytest.
"""

from __future__ import annotations

import numpy as np

from .fields import (CircleObstacle, ConstantField, ObstacleSet, SinusoidField,
                     signed_distance)
from .hamiltonian import GoalSpec, SmoothedHamiltonian
from .solver import p_update

FD_STEP = 1e-5


def _fd_grad_x(ham, x, p):
    g = np.zeros_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = FD_STEP
        g[k] = (ham.value(x + e, p) - ham.value(x - e, p)) / (2 * FD_STEP)
    return g


def _sample_ham() -> SmoothedHamiltonian:
    obstacles = ObstacleSet([
        CircleObstacle(center=np.array([-0.4, -0.4]), radius=0.25),
        CircleObstacle(center=np.array([0.5, 0.3]), radius=0.3),
    ])
    field = SinusoidField(base=0.75, amplitude=0.25, shift1=0.2)
    return SmoothedHamiltonian(field, obstacles,
                               GoalSpec(np.array([1.0, 1.0]), 100.0), 100.0)


def _safe_samples(ham, bounds, n, rng, margin=1e-3):
    """Random points away from circle centers (FD singular set)."""
    lo = np.asarray(bounds[0], dtype=float)
    hi = np.asarray(bounds[1], dtype=float)
    pts = []
    while len(pts) < n:
        x = rng.uniform(lo, hi)
        if ham.obstacles.circles:
            gaps = [np.linalg.norm(x - c.center) for c in ham.obstacles.circles]
            if min(gaps) < margin:
                continue
        pts.append(x)
    return pts


def gradcheck_max_error(ham, bounds, samples: int, seed: int = 0) -> float:
    """Max relative error of grad_x H vs central finite differences."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for x in _safe_samples(ham, bounds, samples, rng):
        p = rng.uniform(-2.0, 2.0, size=x.size)
        exact = ham.grad_x(x, p)
        approx = _fd_grad_x(ham, x, p)
        scale = max(np.linalg.norm(exact), 1.0)
        worst = max(worst, np.linalg.norm(exact - approx) / scale)
    return worst


def check_gradients(verbose=False) -> bool:
    ham = _sample_ham()
    err = gradcheck_max_error(ham, ((-1.5, -1.5), (1.5, 1.5)), 200)
    ok = err < 1e-5
    if verbose:
        print(f"[{'PASS' if ok else 'FAIL'}] grad_x finite differences "
              f"(max rel err {err:.3e})")
    return ok


def check_lagrangian_identity(verbose=False) -> bool:
    ham = _sample_ham()
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(200):
        x = rng.uniform(-1.5, 1.5, size=2)
        p = rng.uniform(-2.0, 2.0, size=2)
        if np.linalg.norm(p) == 0:
            continue
        worst = max(worst, abs(ham.lagrangian(x, p) - ham.chi(x)))
    ok = worst < 1e-12
    if verbose:
        print(f"[{'PASS' if ok else 'FAIL'}] Lagrangian pairing equals goal "
              f"indicator (max err {worst:.3e})")
    return ok


def check_prox_shrinkage(verbose=False) -> bool:
    """Closed-form co-state update vs direct scalar minimization."""
    from scipy.optimize import minimize_scalar

    ham = _sample_ham()
    rng = np.random.default_rng(2)
    sigma, delta = 1.0, 0.1
    worst = 0.0
    for _ in range(200):
        x = rng.uniform(-1.5, 1.5, size=2)
        beta = rng.uniform(-3.0, 3.0, size=2)
        got = p_update(ham, x, beta, sigma, delta)
        bn = np.linalg.norm(beta)
        if bn == 0:
            worst = max(worst, np.linalg.norm(got))
            continue
        # objective is radial around beta's direction, so minimize magnitude
        coeff = delta * ham.shrink_scale(x)

        def objective(s):
            return coeff * s + (s - bn) ** 2 / (2 * sigma)

        res = minimize_scalar(objective, bounds=(0.0, bn + 1.0),
                              method="bounded",
                              options={"xatol": 1e-12})
        want = res.x * beta / bn
        worst = max(worst, np.linalg.norm(got - want))
    ok = worst < 1e-7
    if verbose:
        print(f"[{'PASS' if ok else 'FAIL'}] co-state prox vs numerical "
              f"minimization (max err {worst:.3e})")
    return ok


def check_distance_lipschitz(verbose=False) -> bool:
    obstacles = _sample_ham().obstacles
    rng = np.random.default_rng(3)
    ok = True
    for _ in range(500):
        a = rng.uniform(-2.0, 2.0, size=2)
        b = rng.uniform(-2.0, 2.0, size=2)
        da, _ = signed_distance(obstacles, a)
        db, _ = signed_distance(obstacles, b)
        if abs(da - db) > np.linalg.norm(a - b) + 1e-12:
            ok = False
            break
    if verbose:
        print(f"[{'PASS' if ok else 'FAIL'}] signed distance is 1-Lipschitz")
    return ok


def check_homogeneity(verbose=False) -> bool:
    """H(x, lam p) + chi = lam (H(x, p) + chi) for lam > 0."""
    ham = _sample_ham()
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(200):
        x = rng.uniform(-1.5, 1.5, size=2)
        p = rng.uniform(-2.0, 2.0, size=2)
        lam = rng.uniform(0.1, 5.0)
        chi = ham.chi(x)
        lhs = ham.value(x, lam * p) + chi
        rhs = lam * (ham.value(x, p) + chi)
        worst = max(worst, abs(lhs - rhs))
    ok = worst < 1e-10
    if verbose:
        print(f"[{'PASS' if ok else 'FAIL'}] degree-1 homogeneity in the "
              f"co-state (max err {worst:.3e})")
    return ok


def run_all(verbose=False) -> bool:
    checks = [check_gradients, check_lagrangian_identity, check_prox_shrinkage,
              check_distance_lipschitz, check_homogeneity]
    results = [check(verbose=verbose) for check in checks]
    if verbose:
        print("all checks passed" if all(results) else "SOME CHECKS FAILED")
    return all(results)
