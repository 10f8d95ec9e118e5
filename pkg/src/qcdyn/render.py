"""Escape-time and attractor classification, and raster rendering.

Dynamical-plane rasters fix (alpha, c) and vary the starting point; parameter
rasters fix alpha, start at the critical point 0 and vary c.  Every cell is
classified independently by the same kernel, so renders are deterministic:
identical inputs give bit-identical rasters regardless of chunking or the
thread count (workers only split the grid into fixed row blocks).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import IntEnum
from typing import IO, Iterable

import numpy as np

from .errors import DomainError
from .maps import MapParams

__all__ = [
    "PointClass",
    "CellResult",
    "GridSpec",
    "Raster",
    "escape_radius",
    "classify_point",
    "render_julia",
    "render_locus",
    "write_pgm",
    "write_cells_csv",
]

# cycle-detection constants: tail window recorded after the warm-up phase,
# smallest period <= MAX_PERIOD accepted when the last CYCLE_RUNS aligned
# pairs of window entries agree within TOL_CYCLE.
TOL_CYCLE = 1e-6
CYCLE_WINDOW = 200
MAX_PERIOD = 100
CYCLE_RUNS = 3

ESCAPE_ONLY = "escape"
ATTRACTOR_DETECT = "attractor"


class PointClass(IntEnum):
    BOUNDED = 0
    ESCAPED = 1
    ATTRACTED = 2


@dataclass(frozen=True)
class CellResult:
    """Classification of one orbit: status, iteration count or period, |z| at the end."""

    status: PointClass
    value: int
    final_modulus: float


@dataclass(frozen=True)
class GridSpec:
    """Axis-aligned pixel grid over a rectangle in the plane.

    Pixel (i, j) (column i in [0, nx), row j in [0, ny)) samples the cell
    center

        re = center.re + ((i + 0.5)/nx - 0.5) * width
        im = center.im + (0.5 - (j + 0.5)/ny) * height

    so row j = 0 is the top of the image, matching raster output order.
    """

    center: complex
    width: float
    height: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.width > 0 and self.height > 0):
            raise DomainError("grid width and height must be positive")
        if self.nx < 1 or self.ny < 1:
            raise DomainError("grid needs at least one pixel per axis")
        object.__setattr__(self, "center", complex(self.center))

    @property
    def pixel_diag(self) -> float:
        return float(np.hypot(self.width / self.nx, self.height / self.ny))

    def sample(self, i: int, j: int) -> complex:
        re = self.center.real + ((i + 0.5) / self.nx - 0.5) * self.width
        im = self.center.imag + (0.5 - (j + 0.5) / self.ny) * self.height
        return complex(re, im)

    def samples(self) -> np.ndarray:
        """All cell centers as a (ny, nx) complex array."""
        i = np.arange(self.nx)
        j = np.arange(self.ny)
        re = self.center.real + ((i + 0.5) / self.nx - 0.5) * self.width
        im = self.center.imag + (0.5 - (j + 0.5) / self.ny) * self.height
        return re[None, :] + 1j * im[:, None]


@dataclass(frozen=True, eq=False)
class Raster:
    """Grid of classified cells stored as parallel (ny, nx) arrays."""

    grid: GridSpec
    status: np.ndarray
    value: np.ndarray
    final_modulus: np.ndarray
    max_iter: int
    mode: str

    def cell(self, i: int, j: int) -> CellResult:
        return CellResult(
            PointClass(int(self.status[j, i])),
            int(self.value[j, i]),
            float(self.final_modulus[j, i]),
        )


def escape_radius(p: MapParams) -> float:
    """R = max(|c|, 2^{1/(2a-1)}); any |z| > R has |f(z)| >= 2|z| - |c| > |z|.

    At the boundary exponent alpha = 1/2 no modulus bound forces escape (the
    radial factor is an isometry), so the radius degenerates to infinity.
    """
    if p.alpha == 0.5:
        return float("inf")
    return max(abs(p.c), 2.0 ** (1.0 / (2.0 * p.alpha - 1.0)))


def _classify_block(
    alpha: float,
    c: np.ndarray | complex,
    z0: np.ndarray,
    max_iter: int,
    mode: str,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Classify a flat block of starting points; c is a scalar or per-point array.

    Returns (status, value, final_modulus) arrays of z0's shape.
    """
    z0 = np.asarray(z0, dtype=np.complex128)
    n_pts = z0.size
    z = z0.ravel().copy()
    carr = np.asarray(c, dtype=np.complex128)
    if carr.ndim == 0:
        carr = np.full(z.shape, complex(carr))
    else:
        carr = carr.astype(np.complex128).ravel().copy()
    if alpha == 0.5:
        radius = np.full(z.shape, np.inf)
    else:
        radius = np.maximum(np.abs(carr), 2.0 ** (1.0 / (2.0 * alpha - 1.0)))

    status = np.zeros(n_pts, dtype=np.int8)
    value = np.zeros(n_pts, dtype=np.int32)
    finalmod = np.zeros(n_pts, dtype=np.float64)

    detect = mode == ATTRACTOR_DETECT
    warmup = max(200, max_iter // 4)
    total = max(max_iter, warmup + CYCLE_WINDOW) if detect else max_iter

    idx = np.arange(n_pts)
    s = alpha - 1.0
    window = None

    n = 0
    while True:
        mod = np.abs(z)
        esc = mod > radius
        if esc.any():
            hit = idx[esc]
            if n <= max_iter:
                status[hit] = PointClass.ESCAPED
                value[hit] = n
            # past the escape budget the point merely leaves the disk; it
            # stays BOUNDED but is dropped from further iteration
            finalmod[hit] = mod[esc]
            keep = ~esc
            idx, z, carr, radius = idx[keep], z[keep], carr[keep], radius[keep]
            if window is not None:
                window = window[keep]
            if idx.size == 0:
                break
        if detect and n == warmup:
            window = np.empty((idx.size, CYCLE_WINDOW), dtype=np.complex128)
        if detect and warmup <= n < warmup + CYCLE_WINDOW:
            window[:, n - warmup] = z
        if n == total:
            break
        zero = z == 0
        zsafe = np.where(zero, 1.0, z)
        u = np.abs(zsafe) ** s * zsafe  # same evaluation order as apply_map
        z = u * u + carr
        np.copyto(z, carr, where=zero)
        n += 1

    if idx.size:
        finalmod[idx] = np.abs(z)
        if detect and window is not None:
            qfound = np.zeros(idx.size, dtype=np.int32)
            for q in range(1, MAX_PERIOD + 1):
                m0 = CYCLE_WINDOW - q - CYCLE_RUNS
                if m0 < 0:
                    break
                delta = window[:, m0 + q : m0 + q + CYCLE_RUNS] - window[:, m0 : m0 + CYCLE_RUNS]
                close = (np.abs(delta) < TOL_CYCLE).all(axis=1)
                fresh = close & (qfound == 0)
                qfound[fresh] = q
            att = qfound > 0
            status[idx[att]] = PointClass.ATTRACTED
            value[idx[att]] = qfound[att]

    return (
        status.reshape(z0.shape),
        value.reshape(z0.shape),
        finalmod.reshape(z0.shape),
    )


def classify_point(
    p: MapParams, z0: complex, max_iter: int, mode: str = ESCAPE_ONLY
) -> CellResult:
    """Classify the orbit of z0 under f.

    ESCAPED(n) when |f^n(z0)| first exceeds escape_radius at step n <= max_iter
    (escape is checked before anything else each step).  In attractor mode the
    orbit is additionally run through a warm-up of max(200, max_iter // 4)
    steps and a 200-point window; ATTRACTED(q) reports the smallest period
    q <= 100 for which the last CYCLE_RUNS aligned window pairs agree within
    TOL_CYCLE.  Everything else is BOUNDED.
    """
    if max_iter < 1:
        raise DomainError("max_iter must be >= 1")
    if mode not in (ESCAPE_ONLY, ATTRACTOR_DETECT):
        raise DomainError(f"unknown mode {mode!r}")
    status, value, finalmod = _classify_block(
        p.alpha, p.c, np.array([z0], dtype=np.complex128), max_iter, mode
    )
    return CellResult(PointClass(int(status[0])), int(value[0]), float(finalmod[0]))


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("QCDYN_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return min(8, os.cpu_count() or 1)


def _render(
    alpha: float,
    c,
    z0,
    grid: GridSpec,
    max_iter: int,
    mode: str,
    threads: int | None,
) -> Raster:
    if max_iter < 1:
        raise DomainError("max_iter must be >= 1")
    if mode not in (ESCAPE_ONLY, ATTRACTOR_DETECT):
        raise DomainError(f"unknown mode {mode!r}")
    status = np.empty((grid.ny, grid.nx), dtype=np.int8)
    value = np.empty((grid.ny, grid.nx), dtype=np.int32)
    finalmod = np.empty((grid.ny, grid.nx), dtype=np.float64)
    samples = grid.samples()

    block_rows = max(1, (8192 if mode == ATTRACTOR_DETECT else 65536) // grid.nx)
    blocks = [(j, min(j + block_rows, grid.ny)) for j in range(0, grid.ny, block_rows)]

    def run(block):
        j0, j1 = block
        cblk = c[j0:j1] if isinstance(c, np.ndarray) else c
        zblk = z0[j0:j1] if isinstance(z0, np.ndarray) else np.broadcast_to(z0, samples[j0:j1].shape)
        s, v, fm = _classify_block(alpha, cblk, zblk, max_iter, mode)
        status[j0:j1] = s
        value[j0:j1] = v
        finalmod[j0:j1] = fm

    workers = _thread_count(threads)
    if workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run, blocks))
    else:
        for b in blocks:
            run(b)
    return Raster(grid, status, value, finalmod, max_iter, mode)


def render_julia(
    p: MapParams,
    grid: GridSpec,
    max_iter: int = 1000,
    mode: str = ESCAPE_ONLY,
    threads: int | None = None,
) -> Raster:
    """Classify every grid sample as a starting point of f_{alpha,c}."""
    return _render(p.alpha, p.c, grid.samples(), grid, max_iter, mode, threads)


def render_locus(
    alpha: float,
    grid: GridSpec,
    max_iter: int = 256,
    mode: str = ESCAPE_ONLY,
    threads: int | None = None,
) -> Raster:
    """Classify the critical orbit of f_{alpha,c} for c at every grid sample.

    A cell is in the connectedness locus exactly when its orbit stays bounded.
    """
    return _render(alpha, grid.samples(), 0j, grid, max_iter, mode, threads)


def gray_levels(raster: Raster) -> np.ndarray:
    """Status -> 8-bit gray: escaped floor(255 n / max_iter) clamped to [0, 254],
    bounded 0, attracted 128."""
    g = np.zeros(raster.status.shape, dtype=np.uint8)
    esc = raster.status == PointClass.ESCAPED
    lev = (255 * raster.value[esc]) // raster.max_iter
    g[esc] = np.clip(lev, 0, 254).astype(np.uint8)
    g[raster.status == PointClass.ATTRACTED] = 128
    return g


def write_pgm(raster: Raster, out: str | os.PathLike | IO[bytes]) -> None:
    """Write the raster as an 8-bit binary PGM (P5), rows top to bottom."""
    g = gray_levels(raster)
    header = f"P5\n{raster.grid.nx} {raster.grid.ny}\n255\n".encode("ascii")
    if hasattr(out, "write"):
        out.write(header)
        out.write(g.tobytes())
    else:
        with open(out, "wb") as fh:
            fh.write(header)
            fh.write(g.tobytes())


def write_cells_csv(raster: Raster, out: str | os.PathLike | IO[str]) -> None:
    """Raw per-cell dump: i, j, re, im, status, value.

    value is the escape iteration count for escaped cells, the detected
    period for attracted cells and 0 for bounded cells.
    """
    samples = raster.grid.samples()

    def emit(fh):
        fh.write("i,j,re,im,status,value\n")
        for j in range(raster.grid.ny):
            for i in range(raster.grid.nx):
                s = complex(samples[j, i])
                fh.write(
                    f"{i},{j},{s.real!r},{s.imag!r},"
                    f"{PointClass(int(raster.status[j, i])).name.lower()},"
                    f"{int(raster.value[j, i])}\n"
                )

    if hasattr(out, "write"):
        emit(out)
    else:
        with open(out, "w") as fh:
            emit(fh)


def iter_cells(raster: Raster) -> Iterable[tuple[int, int, complex, CellResult]]:
    """Yield (i, j, sample, CellResult) over all cells in row-major order."""
    samples = raster.grid.samples()
    for j in range(raster.grid.ny):
        for i in range(raster.grid.nx):
            yield i, j, complex(samples[j, i]), raster.cell(i, j)
