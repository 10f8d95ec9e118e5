"""Degree-3 truncated jets in (z, w = zbar) and the Hopf normal-form number.

A jet stores the coefficients of sum_{j+k<=3} c_{jk} z^j w^k.  Composition,
conjugation and chopping close over this space, which is enough to normalise
the 3-jet of the map at a fixed point with unit-circle eigenvalues

    F(z) = u z + b2 z^2 w + (removable terms) + O(|z|^4)

and read off the bifurcation direction Re(b2 / u): positive means the
invariant circle appears on the repelling side, negative on the attracting
side, zero (the conformal case) is degenerate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import IO, Iterable, Sequence

import numpy as np

from .errors import ContractError, DomainError, EigenvalueError, ResonanceError

__all__ = [
    "Jet3",
    "jet_of_map",
    "chop_jet3",
    "conj_jet",
    "compose_jets",
    "coord_change1",
    "normal_form3",
    "hopf_number",
    "hopf_sweep",
    "write_sweep_csv",
]

DEG = 3
TOL_RES = 1e-3  # exclusion radius (in angle) around 1st..4th roots of unity

# angles of all roots of unity of order <= 4
_RESONANT_ANGLES = (
    0.0,
    math.pi,
    2.0 * math.pi / 3.0,
    4.0 * math.pi / 3.0,
    math.pi / 2.0,
    3.0 * math.pi / 2.0,
)


@dataclass(frozen=True, eq=False)
class Jet3:
    """Coefficients c[j, k] of z^j w^k for j + k <= 3 (4x4 array, rest zero)."""

    coeff: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeff, dtype=np.complex128)
        if c.shape != (4, 4):
            raise ContractError("jet coefficients must form a 4x4 array")
        object.__setattr__(self, "coeff", c)

    @classmethod
    def zero(cls) -> "Jet3":
        return cls(np.zeros((4, 4), dtype=np.complex128))

    @classmethod
    def from_terms(cls, terms: dict[tuple[int, int], complex]) -> "Jet3":
        c = np.zeros((4, 4), dtype=np.complex128)
        for (j, k), val in terms.items():
            if j < 0 or k < 0 or j + k > DEG:
                raise ContractError(f"monomial z^{j} w^{k} outside the degree-3 jet")
            c[j, k] = val
        return cls(c)

    @classmethod
    def identity(cls) -> "Jet3":
        return cls.from_terms({(1, 0): 1.0})

    def __getitem__(self, jk: tuple[int, int]) -> complex:
        return complex(self.coeff[jk])

    def terms(self) -> dict[tuple[int, int], complex]:
        out = {}
        for j in range(4):
            for k in range(4 - j):
                if self.coeff[j, k] != 0:
                    out[(j, k)] = complex(self.coeff[j, k])
        return out

    def __add__(self, other: "Jet3") -> "Jet3":
        return Jet3(self.coeff + other.coeff)

    def __sub__(self, other: "Jet3") -> "Jet3":
        return Jet3(self.coeff - other.coeff)

    def scale(self, s: complex) -> "Jet3":
        return Jet3(self.coeff * s)

    def evaluate(self, z: complex) -> complex:
        """Evaluate the jet at (z, conj z)."""
        w = z.conjugate()
        total = 0j
        for j in range(4):
            for k in range(4 - j):
                c = self.coeff[j, k]
                if c != 0:
                    total += c * z**j * w**k
        return total


def _mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of coefficient arrays, truncated to total degree 3."""
    out = np.zeros((4, 4), dtype=np.complex128)
    for j1 in range(4):
        for k1 in range(4 - j1):
            c1 = a[j1, k1]
            if c1 == 0:
                continue
            for j2 in range(4 - j1):
                for k2 in range(4 - j1 - k1 - j2):
                    c2 = b[j2, k2]
                    if c2 != 0:
                        out[j1 + j2, k1 + k2] += c1 * c2
    return out


def _binom(p: float, n: int) -> float:
    """Generalised binomial p (p-1) ... (p-n+1) / n!."""
    out = 1.0
    for i in range(n):
        out *= (p - i) / (i + 1)
    return out


def jet_of_map(alpha: float, z0: complex) -> Jet3:
    """Degree-3 expansion of z^{a+1} w^{a-1} about z0 (constant term dropped).

    coeff(j, k) = B(a+1, j) B(a-1, k) r^{2a-j-k} e^{i (2-j+k) t} with
    z0 = r e^{it}; the constant Q^2(z0) is absorbed into the additive
    parameter and excluded.  The linear part reproduces the Wirtinger
    derivatives.
    """
    if z0 == 0:
        raise DomainError("jets are undefined at the branch point")
    r = abs(z0)
    t = cmath.phase(z0)
    c = np.zeros((4, 4), dtype=np.complex128)
    for j in range(4):
        for k in range(4 - j):
            if j + k == 0:
                continue
            c[j, k] = (
                _binom(alpha + 1.0, j)
                * _binom(alpha - 1.0, k)
                * r ** (2.0 * alpha - j - k)
                * cmath.exp(1j * (2.0 - j + k) * t)
            )
    return Jet3(c)


def chop_jet3(raw) -> Jet3:
    """Truncate a raw expansion (dict of (j,k) -> coeff, array, or Jet3) to degree 3."""
    if isinstance(raw, Jet3):
        return Jet3(raw.coeff.copy())
    if isinstance(raw, dict):
        c = np.zeros((4, 4), dtype=np.complex128)
        for (j, k), val in raw.items():
            if j + k <= DEG:
                c[j, k] = val
        return Jet3(c)
    arr = np.asarray(raw, dtype=np.complex128)
    c = np.zeros((4, 4), dtype=np.complex128)
    for j in range(min(4, arr.shape[0])):
        for k in range(min(4 - j, arr.shape[1])):
            c[j, k] = arr[j, k]
    return Jet3(c)


def conj_jet(jet: Jet3) -> Jet3:
    """Conjugate every coefficient and swap z with w; an involution."""
    return Jet3(np.conj(jet.coeff).T.copy())


def compose_jets(outer: Jet3, inner: Jet3) -> Jet3:
    """Substitute inner for z and conj_jet(inner) for w in outer, then chop.

    The inner jet must have zero constant term, otherwise the truncation
    would not commute with substitution.
    """
    if inner[0, 0] != 0:
        raise ContractError("inner jet must have zero constant term")
    ic = inner.coeff
    cc = conj_jet(inner).coeff
    one = np.zeros((4, 4), dtype=np.complex128)
    one[0, 0] = 1.0
    # powers[j][k] = inner^j * conj^k truncated
    pows_i = [one]
    for _ in range(DEG):
        pows_i.append(_mul(pows_i[-1], ic))
    out = np.zeros((4, 4), dtype=np.complex128)
    for j in range(4):
        base = pows_i[j]
        term = base
        for k in range(4 - j):
            if k > 0:
                term = _mul(term, cc)
            c = outer.coeff[j, k]
            if c != 0:
                out += c * term
    return Jet3(out)


def coord_change1(jet: Jet3) -> Jet3:
    """Linear change z = C zeta + conj(zeta) removing the anti-linear term.

    With linear part a z + b w, C solves conj(b) C^2 + (conj(a) - a) C - b = 0
    (principal square root, + branch); the change exists when the linear part
    has complex-conjugate eigenvalues, i.e. |b| < |Im a|.  Jets with |b| below
    1e-14 are returned unchanged.
    """
    a = jet[1, 0]
    b = jet[0, 1]
    if abs(b) < 1e-14:
        return Jet3(jet.coeff.copy())
    if abs(b) >= abs(a.imag):
        raise ResonanceError(
            "linear part has real eigenvalues (|b| >= |Im a|); no conjugate pair"
        )
    temp = a - a.conjugate()
    croot = (temp + cmath.sqrt(temp * temp + 4.0 * b * b.conjugate())) / (
        2.0 * b.conjugate()
    )
    if abs(abs(croot) - 1.0) < 1e-10:
        raise ResonanceError("coordinate change lies on the unit circle; not invertible")
    lin = Jet3.from_terms({(1, 0): croot, (0, 1): 1.0})
    new = compose_jets(jet, lin)
    new = (new.scale(croot.conjugate()) - conj_jet(new)).scale(
        1.0 / (croot * croot.conjugate() - 1.0)
    )
    return chop_jet3(new)


def _check_nonresonant(u: complex) -> None:
    ang = cmath.phase(u)
    for res in _RESONANT_ANGLES:
        d = abs((ang - res + math.pi) % (2.0 * math.pi) - math.pi)
        if d < TOL_RES:
            raise ResonanceError(
                f"eigenvalue angle {ang:.6f} within {TOL_RES} of a root of unity of order <= 4"
            )


def _quad_cubic_residual(
    rjet: Jet3, u: complex, avec: Sequence[complex], b2: complex
) -> Jet3:
    """The homological mismatch rjet o L1 - L1 o N for the candidate changes.

    L1 = 2z + a1 z^2 + a2 z w + a3 w^2 and N = u z + b2 z^2 w; the quadratic
    coefficients of the mismatch vanish exactly when (a1, a2, a3) solve the
    conjugation equations, and the z^2 w coefficient then determines b2.
    """
    a1, a2, a3 = avec
    l1 = Jet3.from_terms({(1, 0): 2.0, (2, 0): a1, (1, 1): a2, (0, 2): a3})
    normal = Jet3.from_terms({(1, 0): u, (2, 1): b2})
    return compose_jets(rjet, l1) - compose_jets(l1, normal)


def _normal_form3_full(jet: Jet3) -> tuple[complex, tuple[complex, complex, complex], complex, Jet3]:
    """Resolve the degree-3 normal form; returns (u, (a1,a2,a3), b2, reduced jet)."""
    rjet = coord_change1(chop_jet3(jet))
    u = rjet[1, 0]
    _check_nonresonant(u)

    def quad_parts(avec) -> np.ndarray:
        big = _quad_cubic_residual(rjet, u, avec, 0.0)
        vals = (big[2, 0], big[1, 1], big[0, 2])
        return np.array(
            [vals[0].real, vals[0].imag, vals[1].real, vals[1].imag, vals[2].real, vals[2].imag]
        )

    base = quad_parts((0.0, 0.0, 0.0))
    cols = []
    for i in range(3):
        for part in (1.0, 1.0j):
            avec = [0.0, 0.0, 0.0]
            avec[i] = part
            cols.append(quad_parts(avec) - base)
    m = np.column_stack(cols)
    try:
        sol = np.linalg.solve(m, -base)
    except np.linalg.LinAlgError as exc:
        raise ResonanceError(f"quadratic elimination is singular: {exc}") from exc
    if not np.all(np.isfinite(sol)):
        raise ResonanceError("quadratic elimination produced non-finite coefficients")
    avec = (
        complex(sol[0], sol[1]),
        complex(sol[2], sol[3]),
        complex(sol[4], sol[5]),
    )
    e0 = _quad_cubic_residual(rjet, u, avec, 0.0)[2, 1]
    e1 = _quad_cubic_residual(rjet, u, avec, 1.0)[2, 1]
    slope = e1 - e0  # always -2: the z^2 w term of L1 o N is 2 b2
    b2 = -e0 / slope
    return u, avec, b2, rjet


def normal_form3(jet: Jet3) -> complex:
    """Normal-form cubic coefficient ratio b2 / u of the jet.

    The jet is first reduced by coord_change1; the eigenvalue u must stay
    clear of 1st..4th roots of unity (ResonanceError otherwise).  Quadratic
    terms are removed by a conjugation L1 = 2z + a1 z^2 + a2 zw + a3 w^2 whose
    coefficients solve a real-linear 6x6 system (conjugated unknowns enter
    through conj_jet, so the system is honestly real-linear); the z^2 w
    coefficient of the remaining mismatch yields b2.
    """
    u, _, b2, _ = _normal_form3_full(jet)
    return b2 / u


def _delta_point(alpha: float, theta: float) -> complex:
    """The det = 1 circle point whose trace matches the sweep angle theta."""
    r = (4.0 * alpha) ** (1.0 / (2.0 - 4.0 * alpha))
    x = math.cos(theta) * (4.0 * alpha) ** ((alpha - 1.0) / (2.0 * alpha - 1.0)) / (
        alpha + 1.0
    )
    if abs(x) > 1.0:
        raise EigenvalueError(f"eigenvalues for theta = {theta} are not complex conjugates")
    return r * cmath.exp(1j * math.acos(x))


def hopf_number(alpha: float, theta: float) -> float:
    """Re(b2/u) for the fixed point on the det = 1 circle selected by theta.

    Positive for alpha < 1, zero at alpha = 1, negative for alpha > 1 on
    nonresonant angles.  Raises ResonanceError within TOL_RES of a low-order
    root of unity (for theta itself and for the actual multiplier angle) and
    EigenvalueError when no conjugate-pair point exists for theta.
    """
    if not alpha > 0.5:
        raise DomainError("hopf number requires alpha > 1/2")
    for res in _RESONANT_ANGLES:
        d = abs((theta - res + math.pi) % (2.0 * math.pi) - math.pi)
        if d < TOL_RES:
            raise ResonanceError(f"theta = {theta} is within {TOL_RES} of a resonant angle")
    z0 = _delta_point(alpha, theta)
    return normal_form3(jet_of_map(alpha, z0)).real


def hopf_sweep(
    alpha_grid: Iterable[float], theta_grid: Iterable[float]
) -> list[tuple[float, float, float, float, str]]:
    """Tabulate hopf_number over the grid product, row-major in (alpha, theta).

    Rows are (alpha, beta, theta, value, status) with beta = 1 - 1/alpha; the
    value is nan and the status names the failure for excluded points.
    """
    rows = []
    for alpha in alpha_grid:
        beta = 1.0 - 1.0 / alpha
        for theta in theta_grid:
            try:
                val = hopf_number(alpha, theta)
                status = "ok"
            except ResonanceError:
                val, status = math.nan, "resonance"
            except EigenvalueError:
                val, status = math.nan, "eigenvalue"
            rows.append((alpha, beta, theta, val, status))
    return rows


def write_sweep_csv(rows, out: IO[str] | str) -> None:
    """CSV dump of hopf_sweep rows: alpha, beta, theta, hopf_number, status."""

    def emit(fh):
        fh.write("alpha,beta,theta,hopf_number,status\n")
        for alpha, beta, theta, val, status in rows:
            sval = "" if math.isnan(val) else repr(val)
            fh.write(f"{alpha!r},{beta!r},{theta!r},{sval},{status}\n")

    if hasattr(out, "write"):
        emit(out)
    else:
        with open(out, "w") as fh:
            emit(fh)
