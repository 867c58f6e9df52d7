"""Abelian and Coxeter-quotient representations of T_N, phase representations of PT_4.

Matrix representations act on row vectors from the right, so the matrix of a
word is the product of generator matrices in letter order and the leftmost
letter acts first.  ``eval_matrix(a + b) == eval_matrix(a) @ eval_matrix(b)``.
"""
from __future__ import annotations

import cmath
import enum
import itertools
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import Word
from .pure import WindingVector

INF = math.inf


class RepresentationError(ValueError):
    pass


class InvalidRep(RepresentationError):
    pass


class Statistics(enum.Enum):
    BOSONIC = "bosonic"
    FERMIONIC = "fermionic"
    MIXED = "mixed"


@dataclass(frozen=True)
class AbelianRep:
    """rho(t_i) = signs[i-1] in {+1, -1}."""

    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if not signs or any(s not in (1, -1) for s in signs):
            raise RepresentationError(f"signs must be a non-empty sequence of +1/-1, got {self.signs}")
        object.__setattr__(self, "signs", signs)

    @property
    def n_strands(self) -> int:
        return len(self.signs) + 1

    @classmethod
    def parse(cls, text: str) -> AbelianRep:
        """From ``"+-"`` style strings; ``p``/``m`` may stand for ``+``/``-``."""
        table = {"+": 1, "-": -1, "p": 1, "m": -1}
        try:
            return cls(tuple(table[c] for c in text.strip()))
        except KeyError:
            raise RepresentationError(f"sign string must use only '+'/'-' (or 'p'/'m'): {text!r}") from None

    def __str__(self):
        return "".join("+" if s > 0 else "-" for s in self.signs)


def all_abelian_reps(n: int) -> list[AbelianRep]:
    if n < 2:
        raise ValueError(f"need N >= 2, got {n}")
    return [AbelianRep(s) for s in itertools.product((1, -1), repeat=n - 1)]


def eval_abelian(rep: AbelianRep, w: Word) -> int:
    if rep.n_strands != w.n_strands:
        raise RepresentationError(f"rep is for N={rep.n_strands}, word has N={w.n_strands}")
    value = 1
    for i in w.letters:
        value *= rep.signs[i - 1]
    return value


def classify_abelian(rep: AbelianRep) -> Statistics:
    if all(s == 1 for s in rep.signs):
        return Statistics.BOSONIC
    if all(s == -1 for s in rep.signs):
        return Statistics.FERMIONIC
    return Statistics.MIXED


# --- Coxeter quotients ------------------------------------------------------


@dataclass(frozen=True)
class CoxeterLabels:
    """Labels m_i of the edge between t_i and t_{i+1}; ``INF`` imposes nothing."""

    labels: tuple[float, ...]

    def __post_init__(self):
        out = []
        for m in self.labels:
            if m == INF or (isinstance(m, str) and m.strip().lower() in ("inf", "infinity", "∞")):
                out.append(INF)
                continue
            if isinstance(m, float) and not m.is_integer():
                raise RepresentationError(f"Coxeter label must be an integer >= 2 or INF, got {m}")
            m = int(m)
            if m < 2:
                raise RepresentationError(f"Coxeter label must be an integer >= 2 or INF, got {m}")
            out.append(m)
        object.__setattr__(self, "labels", tuple(out))

    @property
    def n_strands(self) -> int:
        return len(self.labels) + 2

    @classmethod
    def parse(cls, text: str) -> CoxeterLabels:
        parts = [p for p in text.replace(" ", "").split(",") if p]
        try:
            return cls(tuple(p if p.lower() in ("inf", "infinity", "∞") else int(p) for p in parts))
        except ValueError:
            raise RepresentationError(f"malformed Coxeter labels: {text!r}") from None

    def __str__(self):
        return "[" + ",".join("inf" if m == INF else str(m) for m in self.labels) + "]"


def _as_labels(labels) -> CoxeterLabels:
    return labels if isinstance(labels, CoxeterLabels) else CoxeterLabels(tuple(labels))


def gram_matrix(labels) -> np.ndarray:
    """B(e_i, e_j) = -cos(pi / m_ij); an INF label gives -1."""
    labels = _as_labels(labels)
    r = len(labels.labels) + 1
    B = np.eye(r)
    for i, m in enumerate(labels.labels):
        B[i, i + 1] = B[i + 1, i] = -1.0 if m == INF else -math.cos(math.pi / m)
    return B


def coxeter_generators(labels) -> list[np.ndarray]:
    """Geometric reflection representation: t_i acts by v -> v - 2 B(e_i, v) e_i."""
    B = gram_matrix(labels)
    r = B.shape[0]
    mats = []
    for i in range(r):
        # column-vector form I - 2 e_i e_i^T B, transposed for the row-vector action
        M = np.eye(r)
        M[i, :] -= 2 * B[i, :]
        mats.append(M.T.copy())
    return mats


def eval_matrix(labels, w: Word) -> np.ndarray:
    labels = _as_labels(labels)
    if labels.n_strands != w.n_strands:
        raise RepresentationError(
            f"{len(labels.labels)} labels need N={labels.n_strands}, word has N={w.n_strands}")
    gens = coxeter_generators(labels)
    out = np.eye(len(gens))
    for i in w.letters:
        out = out @ gens[i - 1]
    return out


def matrix_group_closure(generators: Sequence[np.ndarray], tol: float = 1e-9,
                         max_elements: int = 10_000) -> list[np.ndarray]:
    """All products of ``generators``, two matrices being equal within ``tol`` (max norm).

    Breadth-first from the identity, so the returned order is deterministic.
    Raises ``RuntimeError`` beyond ``max_elements`` (infinite or too large).
    """
    r = generators[0].shape[0]
    found = np.eye(r)[None]
    frontier = [np.eye(r)]
    while frontier:
        nxt = []
        for A in frontier:
            for G in generators:
                C = A @ G
                if np.any(np.max(np.abs(found - C), axis=(1, 2)) <= tol):
                    continue
                found = np.concatenate([found, C[None]])
                nxt.append(C)
                if len(found) > max_elements:
                    raise RuntimeError(f"group has more than {max_elements} elements")
        frontier = nxt
    return list(found)


def power_order(M: np.ndarray, max_power: int, tol: float = 1e-9) -> int | None:
    """Smallest k <= max_power with M^k = I within ``tol``, else None."""
    I = np.eye(M.shape[0])
    P = I.copy()
    for k in range(1, max_power + 1):
        P = P @ M
        if np.max(np.abs(P - I)) <= tol:
            return k
    return None


# --- phase representations of PT_4 ------------------------------------------

_PHASE_TOL = 1e-12


@dataclass(frozen=True)
class PureAbelianRep:
    """rho(gamma_k) = exp(i theta_k) with theta_1 + ... + theta_8 = 0 mod 2 pi."""

    thetas: tuple[float, ...]

    def __post_init__(self):
        thetas = tuple(float(t) for t in self.thetas)
        if len(thetas) != 8:
            raise InvalidRep(f"need 8 phases, got {len(thetas)}")
        total = math.remainder(math.fsum(thetas), 2 * math.pi)
        if abs(total) > _PHASE_TOL:
            raise InvalidRep(f"phases sum to {math.fsum(thetas)!r}, not 0 mod 2 pi")
        object.__setattr__(self, "thetas", thetas)

    @classmethod
    def from_seven(cls, thetas7: Sequence[float]) -> PureAbelianRep:
        """Fix theta_1..theta_7 and let the relation determine theta_8."""
        t = [float(x) for x in thetas7]
        return cls(tuple(t) + (-math.fsum(t),))


def eval_pure_abelian(rep: PureAbelianRep, wv: WindingVector) -> complex:
    """exp(i sum_k n_k theta_k) over the seven finite punctures.

    Entry k of a winding vector is the winding around the puncture encircled
    by gamma_k, so theta_k pairs with entry k; the relation makes the
    infinite puncture's share implicit.
    """
    if not isinstance(rep, PureAbelianRep):
        raise InvalidRep("expected a PureAbelianRep")
    phase = math.fsum(n * t for n, t in zip(wv.entries, rep.thetas[:7]))
    return cmath.exp(1j * phase)
