"""Three particles in a 1D harmonic trap with a hard-core three-body contact.

Units: hbar * omega = 1 and oscillator length 1.  In Jacobi polar coordinates
(rho, phi) the relative Hamiltonian is the 2D isotropic oscillator

    H = 1/2 [ -(1/rho) d/drho (rho d/drho) - (1/rho^2) d^2/dphi^2 + rho^2 ]

with the origin removed.  The two-body coincidence rays phi = j pi/3 split the
plane into six sectors.  Walls with even j are t2-type, odd j are t1-type
(phi = 0 is x1 = x2 > x3, the upper pair of the ordering).  An abelian rep
imposes Neumann conditions on walls whose generator maps to +1 and Dirichlet
conditions where it maps to -1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np
from scipy.linalg import eigh_tridiagonal
from scipy.special import eval_genlaguerre, gammaln

from .representations import AbelianRep, Statistics, classify_abelian

SECTOR = math.pi / 3
Rational = Union[int, Fraction]


class StateError(ValueError):
    pass


@dataclass(frozen=True)
class PolarPoint:
    rho: float
    phi: float

    def __post_init__(self):
        if not self.rho >= 0:
            raise ValueError(f"rho must be non-negative, got {self.rho}")
        object.__setattr__(self, "phi", float(self.phi) % (2 * math.pi))

    @property
    def xy(self) -> tuple[float, float]:
        return self.rho * math.cos(self.phi), self.rho * math.sin(self.phi)


def jacobi_coords(x1: float, x2: float, x3: float) -> PolarPoint:
    """Hyperradius and hyperangle; phi = 0 by convention at the triple point."""
    rho2 = (2.0 / 3.0) * (x1 * x1 + x2 * x2 + x3 * x3 - x1 * x2 - x2 * x3 - x3 * x1)
    num = math.sqrt(3.0) * (x1 - x2)
    den = x1 + x2 - 2.0 * x3
    if num == 0 and den == 0:
        return PolarPoint(0.0, 0.0)
    return PolarPoint(math.sqrt(max(rho2, 0.0)), math.atan2(num, den))


def _check_rep(rep: AbelianRep):
    if rep.n_strands != 3:
        raise StateError(f"the trapped model has three particles, rep is for N={rep.n_strands}")


def wall_generator(j: int) -> int:
    """Generator index (1 or 2) of the wall at phi = j pi/3."""
    return 2 if j % 2 == 0 else 1


def wall_conditions(rep: AbelianRep) -> tuple[str, str]:
    """(condition at phi=0, condition at phi=pi/3) for the first sector."""
    _check_rep(rep)
    kind = {1: "neumann", -1: "dirichlet"}
    return kind[rep.signs[wall_generator(0) - 1]], kind[rep.signs[wall_generator(1) - 1]]


def allowed_lambdas(rep: AbelianRep, count: int) -> list[Fraction]:
    """Smallest ``count`` angular momenta compatible with ``rep``.

    Eigenvalues lambda^2 of -d^2/dphi^2 on one sector of opening pi/3: equal
    wall types give lambda = 3k, mixed give lambda = 3k + 3/2.  lambda = 0
    (the constant Neumann mode) is excluded by the hard core.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    left, right = wall_conditions(rep)
    step = Fraction(3)  # pi / (pi/3)
    if left == right:
        return [step * k for k in range(1, count + 1)]
    return [step * k + step / 2 for k in range(count)]


def sector_eigenvalues_numeric(left: str, right: str, count: int, n_grid: int = 4000) -> np.ndarray:
    """Finite-difference lambda values for -u'' = lambda^2 u on [0, pi/3].

    Independent check of :func:`allowed_lambdas`.  Neumann ends use a
    half-cell ghost point, Dirichlet ends a vanishing boundary value.
    """
    h = SECTOR / n_grid
    # cell-centred grid: u_k at (k + 1/2) h
    diag = np.full(n_grid, 2.0)
    diag[0] += 1.0 if left == "dirichlet" else -1.0
    diag[-1] += 1.0 if right == "dirichlet" else -1.0
    off = np.full(n_grid - 1, -1.0)
    vals = eigh_tridiagonal(diag / h**2, off / h**2, eigvals_only=True,
                            select="i", select_range=(0, count))
    vals = vals[vals > 1e-6]  # drop the constant Neumann mode
    return np.sqrt(vals[:count])


def energy(nu: int, lam: Rational) -> Fraction:
    """Relative energy 2 nu + lambda + 1, exact."""
    if nu < 0 or int(nu) != nu:
        raise StateError(f"nu must be a non-negative integer, got {nu}")
    lam = Fraction(lam)
    if lam <= 0:
        raise StateError(f"lambda must be positive, got {lam}")
    return 2 * int(nu) + lam + 1


@dataclass(frozen=True)
class EigenState:
    nu: int
    lam: Fraction
    rep: AbelianRep

    def __post_init__(self):
        _check_rep(self.rep)
        object.__setattr__(self, "lam", Fraction(self.lam))
        energy(self.nu, self.lam)  # domain check
        allowed = set(allowed_lambdas(self.rep, int(self.lam // 3) + 2))
        if self.lam not in allowed:
            raise StateError(f"lambda={self.lam} is not allowed for rep {self.rep}")

    @property
    def energy(self) -> Fraction:
        return energy(self.nu, self.lam)

    @property
    def angular_kind(self) -> str:
        """'cos' when phi = 0 is a Neumann wall, 'sin' when it is Dirichlet."""
        return "cos" if self.rep.signs[wall_generator(0) - 1] == 1 else "sin"


@dataclass(frozen=True)
class Level:
    energy: Fraction
    degeneracy: int
    states: tuple[EigenState, ...]


def spectrum(rep: AbelianRep, e_max: float, orientations: int = 1) -> list[Level]:
    """Levels with E <= e_max, ascending.

    The wall conditions fix the angular factor completely, so within a given
    rep each (nu, lambda) is one state.  ``orientations=2`` counts the
    e^{+i lambda phi}, e^{-i lambda phi} pair separately instead.
    """
    if orientations not in (1, 2):
        raise ValueError(f"orientations must be 1 or 2, got {orientations}")
    _check_rep(rep)
    e_max = Fraction(e_max) if not isinstance(e_max, float) else Fraction(e_max).limit_denominator(10**9)
    levels: dict[Fraction, list[EigenState]] = {}
    lams = allowed_lambdas(rep, 1)
    while lams[-1] + 1 <= e_max:
        lams = allowed_lambdas(rep, len(lams) + 1)
    for lam in lams:
        nu = 0
        while energy(nu, lam) <= e_max:
            levels.setdefault(energy(nu, lam), []).append(EigenState(nu, lam, rep))
            nu += 1
    return [Level(E, orientations * len(states), tuple(states)) for E, states in sorted(levels.items())]


def normalization(nu: int, lam: Rational) -> float:
    """C with int |psi|^2 rho drho dphi = 1 over the plane (phi in [0, 2 pi))."""
    lam = float(lam)
    # radial: 1/2 Gamma(nu+lam+1)/nu!;  angular: pi for every allowed lambda
    log_radial = gammaln(nu + lam + 1) - gammaln(nu + 1) - math.log(2.0)
    return math.exp(-0.5 * (log_radial + math.log(math.pi)))


def radial_part(nu: int, lam: Rational, rho):
    lam = float(lam)
    rho = np.asarray(rho, dtype=float)
    return rho**lam * np.exp(-rho**2 / 2) * eval_genlaguerre(nu, lam, rho**2)


def angular_factor(state: EigenState, phi):
    """Angular factor on the double cover: ``phi`` may be any real angle.

    cos(lambda phi) or sin(lambda phi); on every sector this is the shifted
    cosine meeting that sector's wall conditions.  For half-integer lambda
    it changes sign under phi -> phi + 2 pi.
    """
    lam = float(state.lam)
    phi = np.asarray(phi, dtype=float)
    return np.cos(lam * phi) if state.angular_kind == "cos" else np.sin(lam * phi)


def wavefunction(state: EigenState, p: PolarPoint, sheet: int = 0) -> complex:
    """psi(rho, phi); ``sheet`` selects the branch of the double cover (phi + 2 pi sheet).

    Sheet 0 is the principal branch, phi in [0, 2 pi), with the cut along
    the positive x-axis.
    """
    return complex(wavefunction_array(state, p.rho, p.phi + 2 * math.pi * sheet))


def wavefunction_array(state: EigenState, rho, phi) -> np.ndarray:
    """Vectorized psi for real arrays ``rho``, ``phi`` (phi read on the double cover)."""
    C = normalization(state.nu, state.lam)
    return C * radial_part(state.nu, state.lam, rho) * angular_factor(state, phi)


def field_grid(state: EigenState, half_width: float, resolution: int) -> np.ndarray:
    """psi on the principal branch over [-hw, hw]^2; rows run in y, columns in x."""
    if resolution < 16:
        raise ValueError("resolution must be >= 16")
    axis = np.linspace(-half_width, half_width, resolution)
    X, Y = np.meshgrid(axis, axis)
    rho = np.hypot(X, Y)
    phi = np.mod(np.arctan2(Y, X), 2 * math.pi)
    return np.real(wavefunction_array(state, rho, phi))


def apply_hamiltonian_fd(state: EigenState, rho, phi, h_rho: float = 1e-4, h_phi: float = 1e-4):
    """Relative Hamiltonian applied to psi by central finite differences."""
    rho = np.asarray(rho, dtype=float)
    phi = np.asarray(phi, dtype=float)

    def f(r, a):
        return wavefunction_array(state, r, a)

    f0 = f(rho, phi)
    d_rr = (f(rho + h_rho, phi) - 2 * f0 + f(rho - h_rho, phi)) / h_rho**2
    d_r = (f(rho + h_rho, phi) - f(rho - h_rho, phi)) / (2 * h_rho)
    d_aa = (f(rho, phi + h_phi) - 2 * f0 + f(rho, phi - h_phi)) / h_phi**2
    return 0.5 * (-(d_rr + d_r / rho) - d_aa / rho**2 + rho**2 * f0)


def statistics_of(rep: AbelianRep) -> Statistics:
    _check_rep(rep)
    return classify_abelian(rep)
