"""Piecewise-linear world-lines of particles on a line, and strand diagrams.

A trajectory is a path in the configuration space of N particles on a line
with all three-body coincidences removed.  Words map to trajectories by
letting each letter swap the two particles currently in the corresponding
adjacent positions; trajectories map back to words by reading off the
two-body crossings in time order.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import Word

# Relative contact tolerance, scaled by the coordinate scale of the trajectory.
CONTACT_TOL = 1e-9


class TrajectoryError(ValueError):
    pass


class TripleCoincidence(TrajectoryError):
    def __init__(self, time: float, particles: Sequence[int]):
        self.time = time
        self.particles = tuple(particles)
        super().__init__(f"three-body contact of particles {self.particles} at t={time:.12g}")


class Tangency(TrajectoryError):
    def __init__(self, time: float, pair: Sequence[int]):
        self.time = time
        self.pair = tuple(pair)
        super().__init__(f"particles {self.pair} touch without crossing at t={time:.12g}")


class AmbiguousOrdering(TrajectoryError):
    def __init__(self, time: float, pairs):
        self.time = time
        self.pairs = tuple(tuple(p) for p in pairs)
        super().__init__(f"overlapping pairs {self.pairs} cross simultaneously at t={time:.12g}")


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Breakpoints ``times`` (M+1,) and coordinates ``positions`` (M+1, N).

    Particle p (1-based) is column p-1.  Motion is linear between breakpoints.
    """

    times: np.ndarray
    positions: np.ndarray

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        pos = np.array(self.positions, dtype=float)
        if times.ndim != 1 or len(times) < 2:
            raise TrajectoryError("need at least two breakpoints")
        if pos.ndim != 2 or pos.shape[0] != len(times):
            raise TrajectoryError(f"positions shape {pos.shape} does not match {len(times)} breakpoints")
        if pos.shape[1] < 2:
            raise TrajectoryError("need at least two particles")
        if not np.all(np.isfinite(pos)) or not np.all(np.isfinite(times)):
            raise TrajectoryError("non-finite coordinates")
        if np.any(np.diff(times) <= 0):
            raise TrajectoryError("breakpoint times must be strictly increasing")
        for row, label in ((pos[0], "initial"), (pos[-1], "final")):
            if len(np.unique(row)) != len(row):
                raise TrajectoryError(f"{label} coordinates are not pairwise distinct")
        times.flags.writeable = False
        pos.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "positions", pos)

    @property
    def n_particles(self) -> int:
        return self.positions.shape[1]

    @property
    def scale(self) -> float:
        return max(1.0, float(np.max(np.abs(self.positions))))

    def at(self, t: float) -> np.ndarray:
        """Coordinates at time ``t`` (linear interpolation)."""
        return np.array([np.interp(t, self.times, self.positions[:, p]) for p in range(self.n_particles)])

    def restrict(self, particles: Sequence[int]) -> Trajectory:
        """Keep only the given (1-based) particles, in ascending label order."""
        cols = [p - 1 for p in sorted(particles)]
        return Trajectory(self.times, self.positions[:, cols])

    def to_json(self) -> dict:
        return {
            "n": self.n_particles,
            "times": [float(t) for t in self.times],
            "positions": [[float(x) for x in row] for row in self.positions],
        }

    @classmethod
    def from_json(cls, data: dict) -> Trajectory:
        tr = cls(data["times"], data["positions"])
        if "n" in data and int(data["n"]) != tr.n_particles:
            raise TrajectoryError(f"n={data['n']} but positions have {tr.n_particles} columns")
        return tr

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_json(), sort_keys=True) + "\n")

    @classmethod
    def load(cls, path) -> Trajectory:
        return cls.from_json(json.loads(Path(path).read_text()))


def word_to_choreography(w: Word) -> Trajectory:
    """Particles rest at 1..N; letter t_i swaps the occupants of positions i, i+1 in unit time."""
    n = w.n_strands
    rest = np.arange(1, n + 1, dtype=float)
    occupant = list(range(n))  # occupant[pos] = particle column at that position
    rows = [rest.copy()]
    current = rest.copy()
    for i in w.letters:
        a, b = occupant[i - 1], occupant[i]
        occupant[i - 1], occupant[i] = b, a
        current = current.copy()
        current[a], current[b] = current[b], current[a]
        rows.append(current)
    if len(rows) == 1:
        rows.append(rest.copy())
    return Trajectory(np.arange(len(rows), dtype=float), np.array(rows))


def _pair_events(tr: Trajectory, tol: float):
    """All instants where two particles meet: (time, p, q, crossing?) with p < q columns."""
    times, pos = tr.times, tr.positions
    n = tr.n_particles
    events = []
    for p in range(n):
        for q in range(p + 1, n):
            d = pos[:, q] - pos[:, p]
            zero = np.abs(d) <= tol
            sign = np.where(zero, 0, np.sign(d)).astype(int)
            k = 0
            m = len(d)
            while k < m - 1:
                if sign[k] != 0 and sign[k + 1] != 0:
                    if sign[k] != sign[k + 1]:
                        s = d[k] / (d[k] - d[k + 1])
                        events.append((times[k] + s * (times[k + 1] - times[k]), p, q, True))
                    k += 1
                    continue
                if sign[k + 1] == 0:
                    # run of zeros starting at k+1
                    j = k + 1
                    while j < m and sign[j] == 0:
                        j += 1
                    t0 = times[k + 1]
                    if j - (k + 1) > 1:
                        events.append((t0, p, q, False))
                    else:
                        events.append((t0, p, q, sign[k] != sign[j]))
                    k = j
                    continue
                k += 1
    return events


def _triple_at(tr: Trajectory, t: float, tol: float):
    x = tr.at(t)
    order = np.argsort(x, kind="stable")
    xs = x[order]
    gaps = np.diff(xs)
    for k in range(len(gaps) - 1):
        if gaps[k] < tol and gaps[k + 1] < tol:
            return tuple(int(c) + 1 for c in sorted(order[k:k + 3]))
    return None


def check_no_triple_contact(tr: Trajectory) -> None:
    """Raise :class:`TripleCoincidence` if three particles ever share a coordinate.

    A triple contact is also a two-body contact of every pair involved, so it
    suffices to inspect the instants where some pair meets.
    """
    tol = CONTACT_TOL * tr.scale
    for t, *_ in _pair_events(tr, tol):
        triple = _triple_at(tr, t, tol)
        if triple:
            raise TripleCoincidence(t, triple)


def trajectory_to_word(tr: Trajectory) -> Word:
    """Letters of the adjacent-rank swaps of ``tr``, in time order."""
    tol = CONTACT_TOL * tr.scale
    events = sorted(_pair_events(tr, tol))
    for t, *_ in events:
        triple = _triple_at(tr, t, tol)
        if triple:
            raise TripleCoincidence(t, triple)
    for t, p, q, crossing in events:
        if not crossing:
            raise Tangency(t, (p + 1, q + 1))

    order = list(np.argsort(tr.positions[0], kind="stable"))  # order[rank] = column
    letters: list[int] = []
    k = 0
    time_tol = 1e-12 * max(1.0, float(np.max(np.abs(tr.times))))
    while k < len(events):
        group = [events[k]]
        while k + len(group) < len(events) and events[k + len(group)][0] - group[0][0] <= time_tol:
            group.append(events[k + len(group)])
        k += len(group)
        used: set[int] = set()
        for _, p, q, _ in group:
            if p in used or q in used:
                raise AmbiguousOrdering(group[0][0], [(e[1] + 1, e[2] + 1) for e in group])
            used.update((p, q))
        swaps = []
        for _, p, q, _ in group:
            rp, rq = order.index(p), order.index(q)
            if abs(rp - rq) != 1:
                raise TripleCoincidence(group[0][0], (p + 1, q + 1))
            swaps.append(min(rp, rq) + 1)
        for i in sorted(swaps):
            order[i - 1], order[i] = order[i], order[i - 1]
            letters.append(i)
    return Word(tr.n_particles, tuple(letters))


def returns_to_start(tr: Trajectory) -> bool:
    return bool(np.allclose(tr.positions[0], tr.positions[-1]))


# --- strand diagrams ------------------------------------------------------------

DEFAULT_COLORS = ("#d62728", "#2ca02c", "#1f77b4", "#ff7f0e", "#9467bd", "#8c564b",
                  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def render_strand_diagram(
    w: Word,
    *,
    step: float = 40.0,
    spacing: float = 30.0,
    margin: float = 20.0,
    stroke_width: float = 3.0,
    colors: Sequence[str] | None = None,
    color_strands: bool = True,
    labels: bool = False,
    width: float | None = None,
    height: float | None = None,
) -> str:
    """SVG strand diagram of ``w``: time runs left to right, position 1 at the top.

    Crossings are flat (no over/under information).  The output depends only
    on the arguments.
    """
    n = w.n_strands
    L = max(len(w), 1)
    vb_width = 2 * margin + step * L
    vb_height = 2 * margin + spacing * (n - 1)
    width = vb_width if width is None else width
    height = vb_height if height is None else height
    palette = tuple(colors) if colors else DEFAULT_COLORS

    def y(pos):
        return margin + spacing * (pos - 1)

    slot = list(range(1, n + 1))  # slot[particle-1] = current position
    paths = [[(margin, y(p))] for p in range(1, n + 1)]
    for k in range(L):
        x1 = margin + step * (k + 1)
        if k < len(w):
            i = w.letters[k]
            for particle in range(n):
                if slot[particle] == i:
                    slot[particle] = i + 1
                elif slot[particle] == i + 1:
                    slot[particle] = i
        for particle in range(n):
            paths[particle].append((x1, y(slot[particle])))

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:g}" height="{height:g}" '
        f'viewBox="0 0 {vb_width:g} {vb_height:g}">',
        f'<rect x="0" y="0" width="{vb_width:g}" height="{vb_height:g}" fill="white"/>',
    ]
    for particle, pts in enumerate(paths):
        color = palette[particle % len(palette)] if color_strands else "black"
        coords = " ".join(f"{px:g},{py:g}" for px, py in pts)
        out.append(
            f'<polyline class="strand" data-strand="{particle + 1}" points="{coords}" fill="none" '
            f'stroke="{color}" stroke-width="{stroke_width:g}" stroke-linejoin="round"/>'
        )
    if labels:
        for k, i in enumerate(w.letters):
            cx = margin + step * (k + 0.5)
            out.append(
                f'<text x="{cx:g}" y="{vb_height - 4:g}" font-size="10" text-anchor="middle">t{i}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"
