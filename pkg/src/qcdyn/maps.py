"""The degree-two planar family f(r e^{it}) = r^{2a} e^{2it} + c.

Written in (z, zbar) coordinates the map is z^{a+1} zbar^{a-1} + c, and all
fractional powers here are evaluated in polar form r**p * exp(i*p*Arg z) with
the principal argument in (-pi, pi].  That branch makes f itself, and every
derivative formula below, single valued and continuous away from the origin.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "MapParams",
    "WirtingerPair",
    "Jacobian2",
    "q_alpha",
    "apply_map",
    "wirtinger",
    "jacobian",
    "inverse_branches",
    "lambda_min",
    "tip_parameter",
    "rho_expansion_ratio",
    "scaling_identity_check",
]


@dataclass(frozen=True)
class MapParams:
    """One member of the family: the exponent alpha and the added constant c.

    alpha = 1 is the quadratic family z**2 + c.  Exponents below 1/2 change
    the character of the dynamics near infinity and are rejected; the boundary
    value alpha = 1/2 itself is accepted (f(z) = |z| e^{2i arg z} + c is still
    a well-defined continuous map, used by the scaling checks).
    """

    alpha: float
    c: complex = 0j

    def __post_init__(self):
        if not self.alpha >= 0.5:
            raise DomainError(f"alpha must be >= 1/2, got {self.alpha!r}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "c", complex(self.c))


@dataclass(frozen=True)
class WirtingerPair:
    """First derivative of f at a point: complex-linear and anti-linear parts."""

    fz: complex
    fzbar: complex

    @property
    def det(self) -> float:
        """Determinant of the real Jacobian, |fz|^2 - |fzbar|^2."""
        return abs(self.fz) ** 2 - abs(self.fzbar) ** 2


@dataclass(frozen=True, eq=False)
class Jacobian2:
    """The real 2x2 derivative acting on (x, y) tangent vectors."""

    m: np.ndarray
    trace: float
    det: float
    eigenvalues: tuple[complex, complex]


def q_alpha(alpha: float, z: complex) -> complex:
    """The radial stretch Q_a(r e^{it}) = r^a e^{it}; Q_a o Q_b = Q_{ab}."""
    if z == 0:
        return 0j
    return abs(z) ** (alpha - 1.0) * z


def apply_map(p: MapParams, z: complex) -> complex:
    """Evaluate f(z) = |z|^{2a-2} z^2 + c; f(0) = c.

    Computed as (|z|^{a-1} z)^2 + c, which keeps intermediates in range even
    for tiny |z| at small exponents.  For alpha = 1 the prefactor is exactly
    1.0, so the value agrees with z*z + c to the last bit.
    """
    if z == 0:
        return p.c
    u = abs(z) ** (p.alpha - 1.0) * z
    return u * u + p.c


def wirtinger(p: MapParams, z: complex) -> WirtingerPair:
    """Wirtinger derivatives f_z = (a+1) z^a zbar^{a-1}, f_zbar = (a-1) z^{a+1} zbar^{a-2}.

    In polar form these are (a+1) r^{2a-1} e^{it} and (a-1) r^{2a-1} e^{3it},
    which is how they are computed (branch-consistent and continuous off 0).
    At the branch point z = 0 the derivative exists only as a limit; it is 0
    for alpha > 1 and singular otherwise.
    """
    if z == 0:
        if p.alpha <= 1.0:
            raise DomainError("derivative at the branch point requires alpha > 1")
        return WirtingerPair(0j, 0j)
    u = z / abs(z)
    s = abs(z) ** (2.0 * p.alpha - 1.0)
    return WirtingerPair((p.alpha + 1.0) * s * u, (p.alpha - 1.0) * s * (u * u * u))


def _eig_from_parts(fz: complex, fzbar: complex) -> tuple[complex, complex]:
    # eigenvalues of [[Re fz + Re fb, -Im fz + Im fb], [Im fz + Im fb, Re fz - Re fb]]
    disc = abs(fzbar) ** 2 - fz.imag**2
    if disc >= 0.0:
        s = math.sqrt(disc)
        return complex(fz.real + s), complex(fz.real - s)
    s = math.sqrt(-disc)
    return complex(fz.real, s), complex(fz.real, -s)


def jacobian(p: MapParams, z: complex) -> Jacobian2:
    """Real 2x2 derivative of f at z, with trace, det and eigenvalue pair.

    The eigenvalues are real when |f_zbar|^2 >= (Im f_z)^2 and form a
    complex-conjugate pair otherwise.
    """
    w = wirtinger(p, z)
    fz, fb = w.fz, w.fzbar
    m = np.array(
        [
            [fz.real + fb.real, -fz.imag + fb.imag],
            [fz.imag + fb.imag, fz.real - fb.real],
        ]
    )
    return Jacobian2(
        m=m,
        trace=2.0 * fz.real,
        det=w.det,
        eigenvalues=_eig_from_parts(fz, fb),
    )


def inverse_branches(p: MapParams, y: complex) -> tuple[complex, complex]:
    """Both preimages of y under f: moduli |y-c|^{1/(2a)}, arguments arg(y-c)/2 and +pi.

    The first branch carries the half-argument in (-pi/2, pi/2] (nonnegative
    real part), the second is its negation.  y = c returns the double root 0.
    """
    w = y - p.c
    if w == 0:
        return (0j, 0j)
    r = abs(w) ** (1.0 / (2.0 * p.alpha))
    u = cmath.exp(0.5j * cmath.phase(w))
    z = r * u
    return (z, -z)


def lambda_min(p: MapParams, z: complex) -> float:
    """Smallest eigenvalue of (Df)^T Df at z: (|f_z| - |f_zbar|)^2.

    Equals 4 |z|^{4a-2} for alpha >= 1 and 4 a^2 |z|^{4a-2} for alpha < 1.
    """
    if z == 0:
        raise DomainError("lambda_min is undefined at the branch point")
    return 4.0 * min(p.alpha, 1.0) ** 2 * abs(z) ** (4.0 * p.alpha - 2.0)


def tip_parameter(alpha: float) -> float:
    """The real parameter c = -2^{1/(2a-1)} whose critical value lands on the
    repelling fixed point |c| after one step (the analogue of c = -2)."""
    if not alpha > 0.5:
        raise DomainError("tip parameter requires alpha > 1/2")
    return -(2.0 ** (1.0 / (2.0 * alpha - 1.0)))


def rho_expansion_ratio(alpha: float, z: complex) -> float:
    """Worst-case expansion of the singular metric |dz| / |c^2 - z^2|^{(2a-1)/(2a)}
    under f at z, with c fixed to tip_parameter(alpha).

    Minimising |(a+1) + (a-1)(z/zbar) e^{i phi}| over directions phi gives the
    closed form

        (a + 1 - |a - 1|) * (|c^2 - z^2| / ||c|^{2a} - |z|^{2a-2} z^2|)^{(2a-1)/(2a)}

    computed here in coordinates scaled by |c| for stability.  At alpha = 1/2
    the tip parameter diverges; the scaled formula degenerates to the constant
    2 (its limit as alpha decreases to 1/2), which is what is returned.
    """
    if not alpha >= 0.5:
        raise DomainError(f"alpha must be >= 1/2, got {alpha!r}")
    factor = (alpha + 1.0 - abs(alpha - 1.0)) * 2.0 ** ((1.0 - alpha) / alpha)
    if alpha == 0.5:
        return factor
    radius = 2.0 ** (1.0 / (2.0 * alpha - 1.0))
    w = z / radius
    if abs(w - 1.0) < 1e-12 or abs(w + 1.0) < 1e-12:
        raise DomainError("metric is singular at z = +/-c")
    x = abs(w)
    num = abs(1.0 - w * w)
    den = abs(1.0 - (x ** (2.0 * alpha - 2.0)) * w * w) if x > 0 else 1.0
    if den == 0.0:
        return math.inf
    return factor * (num / den) ** ((2.0 * alpha - 1.0) / (2.0 * alpha))


def scaling_identity_check(c: complex, z: complex, k: float) -> float:
    """|f_{kc}(kz) - k f_c(z)| for the boundary exponent alpha = 1/2.

    Exact scale invariance of the alpha = 1/2 family makes this vanish up to
    rounding for any k > 0.
    """
    if not k > 0:
        raise DomainError("scale factor k must be positive")
    left = apply_map(MapParams(0.5, k * c), k * z)
    right = k * apply_map(MapParams(0.5, c), z)
    return abs(left - right)
