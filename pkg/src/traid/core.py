"""Words in the traid group T_N and the symmetric-group quotient.

T_N has generators t_1, ..., t_{N-1} with t_i^2 = 1 and t_i t_j = t_j t_i
whenever |i - j| > 1.  It is a right-angled Coxeter group, so every element
has a unique shortlex-minimal geodesic word, which serves as the normal form.

Composition convention: a word is read left to right as a strand diagram,
the leftmost letter acting first.  ``multiply(a, b)`` applies ``a`` and then
``b``, i.e. it is the normal form of the concatenation ``a + b``.
"""
from __future__ import annotations

import enum
import functools
import itertools
import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class WordError(ValueError):
    """Invalid word: bad letter, bad strand count or mismatched operands."""


@dataclass(frozen=True)
class Word:
    n_strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.n_strands, (int, np.integer)) or self.n_strands < 2:
            raise WordError(f"n_strands must be an integer >= 2, got {self.n_strands!r}")
        letters = tuple(int(x) for x in self.letters)
        for pos, x in enumerate(letters):
            if not 1 <= x <= self.n_strands - 1:
                raise WordError(
                    f"letter t{x} at position {pos} is out of range "
                    f"[1, {self.n_strands - 1}] for N={self.n_strands}"
                )
        object.__setattr__(self, "n_strands", int(self.n_strands))
        object.__setattr__(self, "letters", letters)

    def __len__(self):
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __mul__(self, other: Word) -> Word:
        return multiply(self, other)

    def __pow__(self, k: int) -> Word:
        if k < 0:
            return inverse(self) ** (-k)
        return normal_form(Word(self.n_strands, self.letters * k))

    def __str__(self):
        return format_word(self)

    @property
    def is_identity(self) -> bool:
        return not self.letters


@dataclass(frozen=True)
class Permutation:
    """A permutation in one-line form.

    ``images[k-1]`` is the final position of the particle that started at
    position ``k``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(x) for x in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a permutation of 1..{len(images)}: {images}")
        object.__setattr__(self, "images", images)

    @property
    def n(self) -> int:
        return len(self.images)

    @property
    def is_identity(self) -> bool:
        return all(x == k for k, x in enumerate(self.images, start=1))

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def compose(self, other: Permutation) -> Permutation:
        """Return ``self ∘ other`` (apply ``other`` first)."""
        return Permutation(tuple(self(other(k)) for k in range(1, other.n + 1)))

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for k, x in enumerate(self.images, start=1):
            inv[x - 1] = k
        return Permutation(tuple(inv))

    def arrangement(self) -> tuple[int, ...]:
        """Particle labels listed by final position."""
        return self.inverse().images

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(tuple(range(1, n + 1)))


def make_word(tokens: Iterable[int], n_strands: int) -> Word:
    """Validate ``tokens`` as a word over t_1..t_{N-1}; letters are kept verbatim."""
    return Word(n_strands, tuple(tokens))


def identity(n_strands: int) -> Word:
    return Word(n_strands, ())


def commute(i: int, j: int) -> bool:
    """True for distinct generators far enough apart to commute."""
    return abs(i - j) > 1


def _reduce(letters: Sequence[int]) -> list[int]:
    # Append letters one at a time, keeping the prefix geodesic.  A new letter
    # a cancels against the last earlier a iff every letter after it commutes
    # with a; it can cancel nothing else.
    out: list[int] = []
    for a in letters:
        for pos in range(len(out) - 1, -1, -1):
            b = out[pos]
            if b == a:
                del out[pos]
                break
            if abs(b - a) == 1:
                out.append(a)
                break
        else:
            out.append(a)
    return out


def _shortlex(letters: Sequence[int]) -> list[int]:
    # Lexicographically least linear extension of the heap of a geodesic:
    # repeatedly take the smallest letter with no non-commuting letter before it.
    rest = list(letters)
    out: list[int] = []
    while rest:
        best = None
        blocked: set[int] = set()
        for pos, a in enumerate(rest):
            if a not in blocked and (best is None or a < rest[best]):
                best = pos
            blocked.update((a - 1, a, a + 1))
        out.append(rest.pop(best))
    return out


@functools.lru_cache(maxsize=65536)
def _normal_letters(letters: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(_shortlex(_reduce(letters)))


def normal_form(w: Word) -> Word:
    """Unique shortlex-minimal geodesic representative of ``w``."""
    return Word(w.n_strands, _normal_letters(w.letters))


def _check_same(a: Word, b: Word):
    if a.n_strands != b.n_strands:
        raise WordError(f"strand-count mismatch: {a.n_strands} vs {b.n_strands}")


def multiply(a: Word, b: Word) -> Word:
    """Apply ``a`` then ``b``; returns the normal form of the concatenation."""
    _check_same(a, b)
    return Word(a.n_strands, _normal_letters(a.letters + b.letters))


def inverse(w: Word) -> Word:
    return Word(w.n_strands, _normal_letters(w.letters[::-1]))


def equals(a: Word, b: Word) -> bool:
    _check_same(a, b)
    return _normal_letters(a.letters) == _normal_letters(b.letters)


def geodesic_length(w: Word) -> int:
    return len(_normal_letters(w.letters))


def perm_image(w: Word) -> Permutation:
    """Image of ``w`` under t_i -> s_i = (i, i+1), letters applied left to right."""
    arrangement = list(range(1, w.n_strands + 1))
    for i in w.letters:
        arrangement[i - 1], arrangement[i] = arrangement[i], arrangement[i - 1]
    images = [0] * w.n_strands
    for pos, particle in enumerate(arrangement, start=1):
        images[particle - 1] = pos
    return Permutation(tuple(images))


def is_pure(w: Word) -> bool:
    return perm_image(w).is_identity


def codimension(d: int, k: int) -> int:
    """Number of equations cutting out a k-body coincidence in d dimensions."""
    if d < 1 or k < 2:
        raise ValueError(f"need d >= 1 and k >= 2, got d={d}, k={k}")
    return d * (k - 1)


# --- independent oracle -----------------------------------------------------


class Verdict(enum.Enum):
    EQUAL = "equal"
    UNEQUAL = "unequal"
    INCONCLUSIVE = "inconclusive"

    def __bool__(self):
        if self is Verdict.INCONCLUSIVE:
            raise ValueError("inconclusive verdict has no truth value")
        return self is Verdict.EQUAL


def _moves(word: tuple[int, ...], n_gens: int, max_length: int):
    n = len(word)
    for k in range(n - 1):
        a, b = word[k], word[k + 1]
        if a == b:
            yield word[:k] + word[k + 2:]
        elif abs(a - b) > 1:
            yield word[:k] + (b, a) + word[k + 2:]
    if n + 2 <= max_length:
        for k in range(n + 1):
            for g in range(1, n_gens + 1):
                yield word[:k] + (g, g) + word[k:]


def _bfs_verdict(a, b, n_gens, max_length, max_nodes) -> Verdict:
    if a == b:
        return Verdict.EQUAL
    seen = {a}
    queue = deque([a])
    while queue:
        for nxt in _moves(queue.popleft(), n_gens, max_length):
            if nxt in seen:
                continue
            if nxt == b:
                return Verdict.EQUAL
            if len(seen) >= max_nodes:
                return Verdict.INCONCLUSIVE
            seen.add(nxt)
            queue.append(nxt)
    return Verdict.UNEQUAL


# Above this many words the component table is not built and plain BFS runs.
_TABLE_LIMIT = 2_000_000


def _word_count(n_gens: int, max_length: int) -> int:
    return sum(n_gens**L for L in range(max_length + 1))


@functools.lru_cache(maxsize=8)
def _component_table(n_gens: int, max_length: int) -> np.ndarray:
    """Connected components of the move graph on all words of length <= max_length.

    Words of length L are coded as ``offset[L] + sum(d_k * g**k)`` with digits
    d_k = letter - 1.  Edges: deleting an adjacent equal pair (the reverse of
    an insertion) and swapping an adjacent commuting pair.
    """
    from scipy.sparse import coo_matrix
    from scipy.sparse.csgraph import connected_components

    g = n_gens
    offsets = np.cumsum([0] + [g**L for L in range(max_length + 1)])
    rows, cols = [], []
    for L in range(2, max_length + 1):
        codes = np.arange(g**L, dtype=np.int64)
        powers = g ** np.arange(L, dtype=np.int64)
        digits = (codes[:, None] // powers[None, :]) % g
        for k in range(L - 1):
            dk, dk1 = digits[:, k], digits[:, k + 1]
            equal = dk == dk1
            if equal.any():
                src = codes[equal]
                low = src % powers[k]
                high = src // (powers[k] * g * g)
                rows.append(offsets[L] + src)
                cols.append(offsets[L - 2] + low + high * powers[k])
            swap = np.abs(dk - dk1) > 1
            if swap.any():
                src = codes[swap]
                dst = src + (dk1[swap] - dk[swap]) * powers[k] + (dk[swap] - dk1[swap]) * powers[k + 1]
                rows.append(offsets[L] + src)
                cols.append(offsets[L] + dst)
    total = int(offsets[-1])
    if rows:
        r = np.concatenate(rows)
        c = np.concatenate(cols)
    else:
        r = c = np.zeros(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(r), dtype=np.int8), (r, c)), shape=(total, total))
    _, labels = connected_components(graph, directed=False)
    return labels


def _code(word: tuple[int, ...], n_gens: int) -> int:
    offset = sum(n_gens**L for L in range(len(word)))
    return offset + sum((x - 1) * n_gens**k for k, x in enumerate(word))


def brute_force_equals(a: Word, b: Word, max_length: int, max_nodes: int = 2_000_000) -> Verdict:
    """Decide a == b by exhaustive search over relation moves.

    Explores every word of length <= ``max_length`` reachable from ``a`` by
    inserting or deleting a pair t_i t_i and by swapping adjacent commuting
    letters.  Exhausting that space without meeting ``b`` gives UNEQUAL; if
    either word is longer than ``max_length`` or more than ``max_nodes``
    words would be visited, the answer is INCONCLUSIVE.

    Never consults :func:`normal_form`.
    """
    _check_same(a, b)
    n_gens = a.n_strands - 1
    if max(len(a), len(b)) > max_length:
        return Verdict.INCONCLUSIVE
    if n_gens == 1:
        # single involution: words are equal iff lengths have equal parity
        return Verdict.EQUAL if (len(a) - len(b)) % 2 == 0 else Verdict.UNEQUAL
    if _word_count(n_gens, max_length) <= min(_TABLE_LIMIT, max_nodes):
        labels = _component_table(n_gens, max_length)
        same = labels[_code(a.letters, n_gens)] == labels[_code(b.letters, n_gens)]
        return Verdict.EQUAL if same else Verdict.UNEQUAL
    return _bfs_verdict(a.letters, b.letters, n_gens, max_length, max_nodes)


# --- text format --------------------------------------------------------------

_TOKEN = re.compile(r"t(\d+)")


def parse_word(text: str, n_strands: int) -> Word:
    """Parse ``"t1 t2 t1"``, ``"1 2 1"`` or compact ``"121"``; ``"e"`` or ``""`` is the identity."""
    s = text.strip()
    if s in ("", "e"):
        return identity(n_strands)
    tokens = s.replace(",", " ").split()
    if all(_TOKEN.fullmatch(tok) for tok in tokens):
        return make_word([int(_TOKEN.fullmatch(tok).group(1)) for tok in tokens], n_strands)
    if len(tokens) > 1 and all(tok.isdigit() for tok in tokens):
        return make_word([int(tok) for tok in tokens], n_strands)
    if len(tokens) == 1 and tokens[0].isdigit():
        if n_strands > 10:
            raise WordError("compact digit form is only valid for N <= 10")
        return make_word([int(ch) for ch in tokens[0]], n_strands)
    raise WordError(f"malformed word string: {text!r}")


def format_word(w: Word) -> str:
    """Serialize as ``"t1 t2 t1"``; the identity is ``"e"``."""
    if not w.letters:
        return "e"
    return " ".join(f"t{x}" for x in w.letters)


def all_words(n_strands: int, max_length: int):
    """Every letter sequence of length <= max_length, shortest first."""
    gens = range(1, n_strands)
    for L in range(max_length + 1):
        for letters in itertools.product(gens, repeat=L):
            yield Word(n_strands, letters)
