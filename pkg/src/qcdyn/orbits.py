"""Critical orbits, periodic orbits and inverse-branch leaf pullbacks."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchDegenerate, DomainError, NoConvergence
from .fixed_points import Polyline, classify_eigenvalues
from .maps import MapParams, apply_map, jacobian
from .render import escape_radius

__all__ = [
    "OrbitTrace",
    "PeriodicOrbit",
    "SmoothnessExponent",
    "critical_orbit",
    "find_periodic_orbit",
    "pullback_leaf",
    "smoothness_exponent",
]

TOL_FP = 1e-9


@dataclass(frozen=True)
class OrbitTrace:
    """Forward orbit of the critical point; escaped marks early truncation."""

    points: tuple[complex, ...]
    escaped: bool


@dataclass(frozen=True)
class PeriodicOrbit:
    """A periodic cycle with the eigenvalues of its cyclic Jacobian product."""

    points: tuple[complex, ...]
    period: int
    multipliers: tuple[complex, complex]
    cls: str


@dataclass(frozen=True)
class SmoothnessExponent:
    """Normal-hyperbolicity exponent m = ln(2a)/ln 2 of the invariant circle at c = 0.

    Circular leaf pullbacks converge in C^k for k <= m; for m < 1 the
    convergence is merely uniform.
    """

    m: float


def critical_orbit(p: MapParams, n: int) -> OrbitTrace:
    """[f(0), f^2(0), ..., f^n(0)], truncated at the first escape-radius crossing."""
    if n < 1:
        raise DomainError("orbit length must be >= 1")
    radius = escape_radius(p)
    pts: list[complex] = []
    z = 0j
    for _ in range(n):
        z = apply_map(p, z)
        pts.append(z)
        if abs(z) > radius:
            return OrbitTrace(tuple(pts), True)
    return OrbitTrace(tuple(pts), False)


def _deriv_matrix(p: MapParams, z: complex) -> np.ndarray:
    if z == 0:
        return np.zeros((2, 2))  # the derivative vanishes at the branch point
    return jacobian(p, z).m


def _orbit_and_jacobian(p: MapParams, z: complex, q: int) -> tuple[complex, np.ndarray]:
    """f^q(z) and the chained derivative, accumulated in orbit order."""
    j = np.eye(2)
    w = z
    for _ in range(q):
        j = _deriv_matrix(p, w) @ j
        w = apply_map(p, w)
    return w, j


def _matrix_eigenvalues(m: np.ndarray) -> tuple[complex, complex]:
    tr = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    disc = cmath.sqrt(complex(tr * tr - 4.0 * det))
    return ((tr + disc) / 2.0, (tr - disc) / 2.0)


def find_periodic_orbit(p: MapParams, q: int, seed: complex) -> PeriodicOrbit:
    """Newton on f^q(z) = z with forward-accumulated Jacobians.

    Steps are halved while they increase the residual (f^q is stiff near
    multipliers close to 1).  The returned orbit carries its minimal period
    (a divisor of q) and the eigenvalues of the Jacobian product over one
    minimal cycle.  Raises NoConvergence if the seed does not lead to a root.
    """
    if q < 1:
        raise DomainError("period must be >= 1")
    z = complex(seed)
    resid = None
    for _ in range(100):
        if abs(z) > 1e6 or not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise NoConvergence(f"orbit search diverged from seed {seed}")
        w, j = _orbit_and_jacobian(p, z, q)
        fval = w - z
        resid = abs(fval)
        if resid < 1e-12:
            break
        a = j - np.eye(2)
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        if abs(det) < 1e-300:
            raise NoConvergence("singular Newton step (multiplier 1?)")
        bx, by = -fval.real, -fval.imag
        dx = (bx * a[1, 1] - by * a[0, 1]) / det
        dy = (by * a[0, 0] - bx * a[1, 0]) / det
        step = complex(dx, dy)
        for _ in range(30):
            trial = z + step
            wt, _ = _orbit_and_jacobian(p, trial, q)
            if abs(wt - trial) <= resid or abs(step) < 1e-16:
                break
            step *= 0.5
        z = z + step
    else:
        raise NoConvergence(f"no period-{q} orbit reached from seed {seed}")
    if not resid < 1e-12:
        raise NoConvergence(f"no period-{q} orbit reached from seed {seed}")

    cycle = [z]
    for _ in range(q - 1):
        cycle.append(apply_map(p, cycle[-1]))
    period = q
    for d in range(1, q):
        if q % d == 0 and abs(cycle[d % q] - z) < TOL_FP:
            period = d
            break
    cycle = cycle[:period]
    j = np.eye(2)
    for w in cycle:
        j = _deriv_matrix(p, w) @ j
    eigs = _matrix_eigenvalues(j)
    return PeriodicOrbit(tuple(cycle), period, eigs, classify_eigenvalues(eigs))


def pullback_leaf(p: MapParams, leaf: Polyline, branch_word: list[int]) -> Polyline:
    """Apply inverse branches pointwise, one per entry of branch_word.

    Branch 0 is the half-argument branch (preimage with nonnegative real
    part), branch 1 its negation.  With c = 0 a round circle of radius rho
    pulls back to the round circle of radius rho^{(1/2a)^k} after k steps.
    Raises BranchDegenerate if a vertex comes within 1e-12 of the critical
    value c, where the branches collide.
    """
    pts = np.asarray(leaf.points, dtype=np.complex128)
    inv_exp = 1.0 / (2.0 * p.alpha)
    for bit in branch_word:
        if bit not in (0, 1):
            raise DomainError("branch word entries must be 0 or 1")
        w = pts - p.c
        if np.min(np.abs(w)) < 1e-12:
            raise BranchDegenerate("leaf passes through the critical value")
        z = np.abs(w) ** inv_exp * np.exp(0.5j * np.angle(w))
        pts = -z if bit else z
    return Polyline(tuple(pts.tolist()), closed=leaf.closed)


def smoothness_exponent(alpha: float) -> SmoothnessExponent:
    """m = ln(2a)/ln 2; equals 1 at alpha = 1 and 2 at alpha = 2."""
    if not alpha > 0.5:
        raise DomainError("exponent defined for alpha > 1/2")
    return SmoothnessExponent(math.log(2.0 * alpha) / math.log(2.0))
