"""The pure traid group: PT_3 winding, PT_4 generators and winding vectors.

Winding vectors live on the reduced configuration space of four particles:
subtract the centre of mass, scale to the unit sphere of the 3-dimensional
relative space, and the eight triple coincidences become eight punctures.
One puncture is sent to infinity by stereographic projection; a pure loop is
then recorded by its winding numbers around the remaining seven.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .core import Permutation, Word, inverse, is_pure, make_word, multiply, normal_form, perm_image
from .worldlines import trajectory_to_word, word_to_choreography


class PurityError(ValueError):
    """The word permutes the strands but a pure word was required."""


class NonIntegerHolonomy(RuntimeError):
    pass


def _require_pure(w: Word):
    if not is_pure(w):
        raise PurityError(f"word {w} induces {perm_image(w).images}, not the identity")


# --- PT_3 ---------------------------------------------------------------------


def pt3_generator() -> Word:
    """(t2 t1)^3, the generator of PT_3."""
    return make_word([2, 1] * 3, 3)


def pt3_winding(w: Word) -> int:
    """The integer n with w = ((t2 t1)^3)^n.

    T_3 is infinite dihedral, so the normal form of a pure word alternates
    t1, t2 with length 6|n|; the sign is + when it ends in t1.
    """
    if w.n_strands != 3:
        raise ValueError(f"pt3_winding needs a T_3 word, got N={w.n_strands}")
    _require_pure(w)
    nf = normal_form(w).letters
    if not nf:
        return 0
    n, r = divmod(len(nf), 6)
    assert r == 0, nf
    return n if nf[-1] == 1 else -n


# --- PT_4 ---------------------------------------------------------------------

_GAMMA = {
    1: [2, 1] * 3,
    2: [2, 1] + [3, 2] * 3 + [1, 2],
    3: [2, 3] + [2, 1] * 3 + [3, 2],
    4: [3, 2] * 3,
    5: [3, 2, 1] + [2, 3] * 3 + [1, 2, 3],
    6: [3] + [1, 2] * 3 + [3],
    7: [1] + [2, 3] * 3 + [1],
    8: [1, 2, 3] + [1, 2] * 3 + [3, 2, 1],
}


def pt4_gamma(k: int) -> Word:
    """Generator gamma_k of PT_4 as a T_4 word (letters left to right, unreduced)."""
    if k not in _GAMMA:
        raise ValueError(f"gamma index must be in 1..8, got {k}")
    return make_word(_GAMMA[k], 4)


def pt4_relation_product() -> Word:
    """gamma_8 gamma_7 ... gamma_1 under the left-to-right convention, normalized."""
    letters: list[int] = []
    for k in range(8, 0, -1):
        letters += _GAMMA[k]
    return normal_form(make_word(letters, 4))


def verify_pt4_relation() -> bool:
    """True iff gamma_8 ... gamma_1 = 1 in T_4 and every gamma_k is pure."""
    return pt4_relation_product().is_identity and all(is_pure(pt4_gamma(k)) for k in _GAMMA)


def betti_lower_bound(n: int) -> int:
    """First Betti number 2^(N-3) (N^2 - 5N + 8) - 1 of the N-particle space."""
    if n < 3:
        raise ValueError(f"need N >= 3, got {n}")
    return 2 ** (n - 3) * (n * n - 5 * n + 8) - 1


# --- semidirect decomposition -----------------------------------------------


@dataclass(frozen=True)
class PureDecomposition:
    pure_part: Word
    perm_part: Permutation
    transversal_word: Word


def transversal_word(perm: Permutation) -> Word:
    """Reduced word realizing ``perm``; at each step the smallest useful swap is taken."""
    target = perm.arrangement()
    rank = {particle: pos for pos, particle in enumerate(target)}
    current = list(range(1, perm.n + 1))
    letters = []
    while True:
        for i in range(perm.n - 1):
            if rank[current[i]] > rank[current[i + 1]]:
                current[i], current[i + 1] = current[i + 1], current[i]
                letters.append(i + 1)
                break
        else:
            break
    return make_word(letters, perm.n)


def transversal_decompose(w: Word) -> PureDecomposition:
    """Split ``w`` as (pure part) * (canonical lift of its permutation)."""
    perm = perm_image(w)
    lift = transversal_word(perm)
    return PureDecomposition(multiply(w, inverse(lift)), perm, lift)


# --- punctures and winding vectors ------------------------------------------

# Ordered orthonormal basis of the centre-of-mass-free subspace of R^4.
RELATIVE_BASIS = np.array([
    [1.0, -1.0, 0.0, 0.0],
    [1.0, 1.0, -2.0, 0.0],
    [1.0, 1.0, 1.0, -3.0],
]) / np.sqrt([[2.0], [6.0], [12.0]])


@dataclass(frozen=True)
class Puncture:
    """Triple coincidence x_i = x_j = x_k with the fourth particle on ``side``."""

    triple: tuple[int, int, int]
    side: str  # "left" or "right": where the remaining particle sits

    @property
    def other(self) -> int:
        return ({1, 2, 3, 4} - set(self.triple)).pop()

    @property
    def configuration(self) -> np.ndarray:
        tau = 1.0 if self.side == "left" else -1.0
        x = np.full(4, -3.0 * tau)
        x[[p - 1 for p in self.triple]] = tau
        return x

    @property
    def label(self) -> str:
        t = "".join(map(str, self.triple))
        return f"{self.other}<{t}" if self.side == "left" else f"{t}<{self.other}"

    def __str__(self):
        return self.label


def all_punctures() -> list[Puncture]:
    """The eight triple coincidences: triples in lexicographic order, left before right."""
    return [Puncture(tri, side)
            for tri in itertools.combinations((1, 2, 3, 4), 3)
            for side in ("left", "right")]


def puncture_directions() -> np.ndarray:
    """(8, 4) array of unit vectors for :func:`all_punctures`, orthogonal to (1,1,1,1)."""
    out = []
    for p in all_punctures():
        x = p.configuration
        x = x - x.mean()
        out.append(x / np.linalg.norm(x))
    return np.array(out)


# Puncture encircled by gamma_k; the eighth is sent to infinity.
GAMMA_PUNCTURES = (
    Puncture((1, 2, 3), "right"),
    Puncture((1, 2, 4), "left"),
    Puncture((1, 3, 4), "right"),
    Puncture((2, 3, 4), "left"),
    Puncture((1, 2, 3), "left"),
    Puncture((1, 2, 4), "right"),
    Puncture((1, 3, 4), "left"),
    Puncture((2, 3, 4), "right"),
)
INFINITE_PUNCTURE = GAMMA_PUNCTURES[7]

_MAX_ANGLE = np.pi / 16
_MAX_SAMPLES = 1 << 16
_INTEGER_TOL = 1e-6


def _unit(x):
    return x / np.linalg.norm(x, axis=-1, keepdims=True)


class _Chart:
    """Stereographic chart from the infinite puncture.

    Counterclockwise in the chart is counterclockwise on the sphere as seen
    from outside, i.e. the in-plane frame (e1, e2) together with the outward
    normal at the antipode of the pole is right-handed.
    """

    def __init__(self):
        self.pole = _unit(RELATIVE_BASIS @ INFINITE_PUNCTURE.configuration)
        normal = -self.pole
        a = np.array([1.0, 0.0, 0.0])
        e1 = _unit(a - (a @ self.pole) * self.pole)
        self.e1 = e1
        self.e2 = np.cross(normal, e1)
        self.finite = self.project(_unit((RELATIVE_BASIS @ np.array(
            [p.configuration for p in GAMMA_PUNCTURES[:7]]).T).T))

    def project(self, u: np.ndarray) -> np.ndarray:
        return (u @ self.e1 + 1j * (u @ self.e2)) / (1.0 - u @ self.pole)

    def configurations(self, x: np.ndarray) -> np.ndarray:
        """Chart points of configurations ``x`` (..., 4)."""
        rel = x @ RELATIVE_BASIS.T  # drops the centre of mass
        return self.project(_unit(rel))


_CHART = None


def _chart() -> _Chart:
    global _CHART
    if _CHART is None:
        _CHART = _Chart()
    return _CHART


def _segment_angles(chart: _Chart, x0: np.ndarray, x1: np.ndarray) -> np.ndarray:
    """Total signed angle swept around each finite puncture along one linear segment."""
    n = 16
    while True:
        s = np.linspace(0.0, 1.0, n + 1)[:, None]
        z = chart.configurations(x0 + s * (x1 - x0))
        rel = z[:, None] - chart.finite[None, :]
        dtheta = np.angle(rel[1:] / rel[:-1])
        if np.max(np.abs(dtheta)) < _MAX_ANGLE:
            return dtheta.sum(axis=0)
        n *= 2
        if n > _MAX_SAMPLES:
            raise NonIntegerHolonomy("path sampling did not resolve: path passes through a puncture")


@dataclass(frozen=True)
class WindingVector:
    entries: tuple[int, ...]
    puncture_labels: tuple[str, ...] = tuple(p.label for p in GAMMA_PUNCTURES)
    infinite_puncture: str = INFINITE_PUNCTURE.label

    @property
    def at_infinity(self) -> int:
        """Winding around the infinite puncture; all eight sum to zero."""
        return -sum(self.entries)

    def __add__(self, other: WindingVector) -> WindingVector:
        return WindingVector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> WindingVector:
        return WindingVector(tuple(-a for a in self.entries))

    def to_json(self) -> dict:
        return {
            "entries": list(self.entries),
            "puncture_labels": list(self.puncture_labels[:7]),
            "infinite_puncture": self.infinite_puncture,
        }


def winding_holonomies(w: Word) -> np.ndarray:
    """Unrounded winding numbers of the loop of a pure T_4 word around the 7 finite punctures."""
    if w.n_strands != 4:
        raise ValueError(f"winding vectors are defined for T_4, got N={w.n_strands}")
    _require_pure(w)
    chart = _chart()
    x = word_to_choreography(w).positions
    total = np.zeros(7)
    for k in range(len(x) - 1):
        if not np.array_equal(x[k], x[k + 1]):
            total += _segment_angles(chart, x[k], x[k + 1])
    return total / (2 * np.pi)


def winding_vector(w: Word) -> WindingVector:
    """Integer first-homology class of a pure T_4 word.

    gamma_1 .. gamma_7 map to the standard basis vectors, gamma_8 to minus
    their sum.
    """
    h = winding_holonomies(w)
    n = np.rint(h)
    if np.max(np.abs(h - n), initial=0.0) > _INTEGER_TOL:
        raise NonIntegerHolonomy(f"holonomies {h} are not integers")
    return WindingVector(tuple(int(v) for v in n))


def restrict_to_strands(w: Word, keep: Iterable[int]) -> Word:
    """Word traced by three kept strands of a pure word once the others are erased."""
    keep = sorted(set(keep))
    if len(keep) != 3 or not all(1 <= p <= w.n_strands for p in keep):
        raise ValueError(f"keep must be three strand labels in 1..{w.n_strands}, got {keep}")
    _require_pure(w)
    return trajectory_to_word(word_to_choreography(w).restrict(keep))
