"""Independent reference computations the test suite checks the library against.

Everything here deliberately avoids the code paths it verifies: derivatives
come from finite differences of the plain map evaluation, Taylor coefficients
from circle sampling and Fourier separation, and fixed-point censuses from an
exhaustive residual grid scan.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy import ndimage

from qcdyn.fixed_points import _newton_fixed_point, _record
from qcdyn.maps import MapParams, apply_map


def fd_jacobian(p: MapParams, z: complex, h: float | None = None) -> np.ndarray:
    """Central-difference 2x2 Jacobian of f at z.

    The additive constant (zero derivative) is dropped before differencing:
    near the branch point the map value is dominated by c while the local
    variation is tiny, and adding c first would round the signal away.
    """
    if h is None:
        h = 1e-6 * max(1.0, abs(z))
    p0 = MapParams(p.alpha, 0)
    g = lambda w: apply_map(p0, w)  # noqa: E731
    fxp, fxm = g(z + h), g(z - h)
    fyp, fym = g(z + 1j * h), g(z - 1j * h)
    return np.array(
        [
            [(fxp.real - fxm.real) / (2 * h), (fyp.real - fym.real) / (2 * h)],
            [(fxp.imag - fxm.imag) / (2 * h), (fyp.imag - fym.imag) / (2 * h)],
        ]
    )


def fd_jet(alpha: float, z0: complex, m: int = 64, degmax: int = 9) -> np.ndarray:
    """Degree-3 Taylor coefficients of f(z0 + .) - f(z0) in (dz, conj dz).

    Samples the map on circles around z0 and separates monomials by their
    Fourier mode j - k; radii and nuisance powers up to degmax absorb the
    higher-order terms that alias into each mode.
    """
    p = MapParams(alpha, 0)
    base = apply_map(p, z0)
    radii = [abs(z0) * s for s in (0.02, 0.03, 0.045, 0.0675, 0.1, 0.15)]
    four = []
    for rho in radii:
        samp = np.array(
            [apply_map(p, z0 + rho * cmath.exp(2j * math.pi * t / m)) - base for t in range(m)]
        )
        four.append(np.fft.fft(samp) / m)
    out = np.zeros((4, 4), np.complex128)
    groups: dict[int, list[tuple[int, int]]] = {}
    for j in range(4):
        for k in range(4 - j):
            if j + k:
                groups.setdefault(j - k, []).append((j, k))
    for nu, jks in groups.items():
        degs = [d for d in range(max(1, abs(nu)), degmax + 1) if (d - abs(nu)) % 2 == 0]
        a = np.array([[rho**d for d in degs] for rho in radii], dtype=np.complex128)
        rhs = np.array([f[nu % m] for f in four])
        sol, *_ = np.linalg.lstsq(a, rhs, rcond=None)
        for j, k in jks:
            out[j, k] = sol[degs.index(j + k)]
    return out


def _search_box(p: MapParams) -> float:
    # no fixed point can satisfy |z|^{2a} - |z| > |c|
    b = 1.5
    while b ** (2 * p.alpha) - b <= abs(p.c) + 0.1:
        b *= 1.25
    return b


def brute_force_fixed_points(p: MapParams, n: int = 2000):
    """Exhaustive census: scan |f(z) - z| on an n x n grid over the search box,
    cluster sub-threshold pixels, add strict local minima as safety seeds, and
    polish every candidate by Newton.  Returns records like find_fixed_points.
    """
    b = _search_box(p)
    xs = np.linspace(-b, b, n)
    grid = xs[None, :] + 1j * xs[:, None]
    r = np.abs(grid)
    rs = np.where(r == 0, 1.0, r)
    fval = rs ** (2 * p.alpha - 2) * grid * grid + p.c
    fval[r == 0] = p.c
    resid = np.abs(fval - grid)

    seeds: list[complex] = []
    mask = resid < 1e-3
    if mask.any():
        labels, nlab = ndimage.label(mask)
        for pos in ndimage.minimum_position(resid, labels, range(1, nlab + 1)):
            seeds.append(complex(grid[pos]))
    core = resid[1:-1, 1:-1]
    local_min = np.ones_like(core, dtype=bool)
    for dj in (-1, 0, 1):
        for di in (-1, 0, 1):
            if dj == di == 0:
                continue
            local_min &= core <= resid[1 + dj : n - 1 + dj, 1 + di : n - 1 + di]
    for j, i in np.argwhere(local_min & (core < 0.05)):
        seeds.append(complex(grid[j + 1, i + 1]))

    roots: list[complex] = []
    for s in seeds:
        z, _ = _newton_fixed_point(p, s)
        if z is None:
            continue
        if all(abs(z - other) > 1e-8 for other in roots):
            roots.append(z)
    roots.sort(key=lambda w: (w.real, w.imag))
    return [_record(p, z) for z in roots]


def census_signature(records, digits: int = 7):
    return sorted((round(r.z.real, digits), round(r.z.imag, digits), r.cls) for r in records)


def _segments_cross(a1, a2, b1, b2) -> bool:
    def orient(p, q, r):
        return (q.real - p.real) * (r.imag - p.imag) - (q.imag - p.imag) * (r.real - p.real)

    d1, d2 = orient(a1, a2, b1), orient(a1, a2, b2)
    d3, d4 = orient(b1, b2, a1), orient(b1, b2, a2)
    return d1 * d2 < 0 and d3 * d4 < 0


def count_self_intersections(points) -> int:
    """Number of transversal crossings between non-adjacent closed-polyline edges."""
    n = len(points)
    edges = [(points[i], points[(i + 1) % n]) for i in range(n)]
    count = 0
    for i in range(n):
        for j in range(i + 2, n):
            if i == 0 and j == n - 1:
                continue
            if _segments_cross(*edges[i], *edges[j]):
                count += 1
    return count


def classify_reference(p: MapParams, z0: complex, max_iter: int, mode: str):
    """Plain-Python re-implementation of the classification loop (same contract)."""
    from qcdyn.render import ATTRACTOR_DETECT, CYCLE_RUNS, CYCLE_WINDOW, MAX_PERIOD, TOL_CYCLE
    from qcdyn.render import escape_radius

    radius = escape_radius(p)
    detect = mode == ATTRACTOR_DETECT
    warmup = max(200, max_iter // 4)
    total = max(max_iter, warmup + CYCLE_WINDOW) if detect else max_iter
    window: list[complex] = []
    z = z0
    n = 0
    while True:
        if abs(z) > radius:
            if n <= max_iter:
                return ("escaped", n, abs(z))
            return ("bounded", 0, abs(z))
        if detect and warmup <= n < warmup + CYCLE_WINDOW:
            window.append(z)
        if n == total:
            break
        z = apply_map(p, z)
        n += 1
    if detect and len(window) == CYCLE_WINDOW:
        for q in range(1, MAX_PERIOD + 1):
            m0 = CYCLE_WINDOW - q - CYCLE_RUNS
            if m0 < 0:
                break
            if all(abs(window[m + q] - window[m]) < TOL_CYCLE for m in range(m0, m0 + CYCLE_RUNS)):
                return ("attracted", q, abs(z))
    return ("bounded", 0, abs(z))
