"""Arithmetic for the supported groups and Folner window generation.

Three concrete countable amenable groups are supported: the integers,
integer lattices Z^d, and the discrete Heisenberg group H3(Z) with the
multiplication (a,b,c)*(a',b',c') = (a+a', b+b', c+c'+a*b').  Elements are
plain ints (Z) or tuples of ints (Z^d, H3).  All counting is exact integer
arithmetic; ratios are `fractions.Fraction`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence, Tuple, Union

import numpy as np

from .errors import GroupMismatchError

Element = Union[int, Tuple[int, ...]]

INT_Z = "Z"
INT_ZD = "Zd"
HEISENBERG3 = "H3"

_KINDS = (INT_Z, INT_ZD, HEISENBERG3)


@dataclass(frozen=True)
class GroupSpec:
    """One of the supported groups; `d` only matters for the lattice kind."""

    kind: str
    d: int = 1

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown group kind {self.kind!r}")
        if self.kind == INT_ZD and self.d < 1:
            raise ValueError("lattice dimension must be >= 1")
        if self.kind == HEISENBERG3 and self.d != 1:
            object.__setattr__(self, "d", 1)

    # -- element structure ------------------------------------------------

    @property
    def ncoords(self) -> int:
        """Number of integer coordinates in one element."""
        if self.kind == INT_Z:
            return 1
        if self.kind == INT_ZD:
            return self.d
        return 3

    def identity(self) -> Element:
        if self.kind == INT_Z:
            return 0
        return (0,) * self.ncoords

    def contains(self, g: Element) -> bool:
        if self.kind == INT_Z:
            return isinstance(g, int) and not isinstance(g, bool)
        return (
            isinstance(g, tuple)
            and len(g) == self.ncoords
            and all(isinstance(c, int) and not isinstance(c, bool) for c in g)
        )

    def check(self, g: Element) -> None:
        if not self.contains(g):
            raise GroupMismatchError(f"group mismatch: {g!r} is not an element of {self}")

    # -- group law --------------------------------------------------------

    def mul(self, g: Element, h: Element) -> Element:
        self.check(g)
        self.check(h)
        if self.kind == INT_Z:
            return g + h
        if self.kind == INT_ZD:
            return tuple(x + y for x, y in zip(g, h))
        a, b, c = g
        ap, bp, cp = h
        return (a + ap, b + bp, c + cp + a * bp)

    def inv(self, g: Element) -> Element:
        self.check(g)
        if self.kind == INT_Z:
            return -g
        if self.kind == INT_ZD:
            return tuple(-x for x in g)
        a, b, c = g
        return (-a, -b, -c + a * b)

    def element_key(self, g: Element):
        """Canonical total order: plain value for Z, lexicographic tuples."""
        if self.kind == INT_Z:
            return (g,)
        return tuple(g)

    # -- vectorized translation -------------------------------------------
    #
    # coords arrays have shape (ncoords, n), one column per element, in the
    # canonical enumeration order of whatever produced them.

    def coords_of(self, elems: Sequence[Element]) -> np.ndarray:
        if self.kind == INT_Z:
            return np.asarray(elems, dtype=np.int64).reshape(1, -1)
        return np.asarray(elems, dtype=np.int64).T.reshape(self.ncoords, -1)

    def translate_left(self, g: Element, coords: np.ndarray) -> np.ndarray:
        """Columns g*x for the fixed element g."""
        self.check(g)
        if self.kind == INT_Z:
            return coords + g
        if self.kind == INT_ZD:
            return coords + np.asarray(g, dtype=np.int64).reshape(-1, 1)
        a0, b0, c0 = g
        a, b, c = coords
        return np.stack([a + a0, b + b0, c + c0 + a0 * b])

    def translate_right(self, coords: np.ndarray, h: Element) -> np.ndarray:
        """Columns x*h for the fixed element h."""
        self.check(h)
        if self.kind != HEISENBERG3:
            return self.translate_left(h, coords)
        a0, b0, c0 = h
        a, b, c = coords
        return np.stack([a + a0, b + b0, c + c0 + a * b0])

    def word_ball(self, radius: int) -> list:
        """Elements of word length <= radius in the standard generators.

        Z and Z^d use the coordinate generators (sup-norm box would be the
        radius-R box; the word-length ball for Z^d is the l1 ball, but
        consumers want the sup-norm ball there, so lattices return the box).
        H3 uses BFS over {x, y, x^-1, y^-1} with x=(1,0,0), y=(0,1,0).
        """
        if self.kind == INT_Z:
            return list(range(-radius, radius + 1))
        if self.kind == INT_ZD:
            return [tuple(v) for v in itertools.product(range(-radius, radius + 1), repeat=self.d)]
        gens = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]
        seen = {self.identity()}
        frontier = [self.identity()]
        for _ in range(radius):
            nxt = []
            for g in frontier:
                for s in gens:
                    h = self.mul(g, s)
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
            frontier = nxt
        return sorted(seen, key=self.element_key)


# ---------------------------------------------------------------------------
# Folner shapes

SHAPE_INTERVAL = "interval"
SHAPE_BOX = "box"
SHAPE_HEISENBERG_BOX = "heisenberg_box"


@dataclass(frozen=True)
class FolnerSpec:
    """Rule producing the finite averaging window F_N for each index N.

    * interval:       F_N = [start, start+N) in Z
    * box:            the side-N box at `anchor` in Z^d
    * heisenberg_box: {(a,b,c) : 0 <= a,b < N, 0 <= c < N^2}
    """

    group: GroupSpec
    shape: str
    start: int = 0
    anchor: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.shape == SHAPE_INTERVAL:
            if self.group.kind != INT_Z:
                raise ValueError("interval shape requires the integer group")
        elif self.shape == SHAPE_BOX:
            if self.group.kind != INT_ZD:
                raise ValueError("box shape requires a lattice group")
            if len(self.anchor) != self.group.d:
                raise ValueError("anchor dimension does not match the group")
        elif self.shape == SHAPE_HEISENBERG_BOX:
            if self.group.kind != HEISENBERG3:
                raise ValueError("heisenberg_box shape requires the Heisenberg group")
        else:
            raise ValueError(f"unknown Folner shape {self.shape!r}")

    def size(self, N: int) -> int:
        self._check_index(N)
        if self.shape == SHAPE_INTERVAL:
            return N
        if self.shape == SHAPE_BOX:
            return N ** self.group.d
        return N ** 4

    def elements(self, N: int) -> Iterator[Element]:
        """F_N in canonical (ascending / lexicographic) order, no duplicates."""
        self._check_index(N)
        if self.shape == SHAPE_INTERVAL:
            yield from range(self.start, self.start + N)
        elif self.shape == SHAPE_BOX:
            ranges = [range(a, a + N) for a in self.anchor]
            for v in itertools.product(*ranges):
                yield v
        else:
            for a in range(N):
                for b in range(N):
                    for c in range(N * N):
                        yield (a, b, c)

    def set(self, N: int) -> list:
        return list(self.elements(N))

    def coords(self, N: int) -> np.ndarray:
        """(ncoords, |F_N|) int64 array in canonical order."""
        self._check_index(N)
        if self.shape == SHAPE_INTERVAL:
            return np.arange(self.start, self.start + N, dtype=np.int64).reshape(1, -1)
        if self.shape == SHAPE_BOX:
            axes = [np.arange(a, a + N, dtype=np.int64) for a in self.anchor]
            grids = np.meshgrid(*axes, indexing="ij")
            return np.stack([g.ravel() for g in grids])
        a, b, c = np.meshgrid(
            np.arange(N, dtype=np.int64),
            np.arange(N, dtype=np.int64),
            np.arange(N * N, dtype=np.int64),
            indexing="ij",
        )
        return np.stack([a.ravel(), b.ravel(), c.ravel()])

    # -- defects ----------------------------------------------------------

    def defect(self, N: int, g: Element) -> Fraction:
        """Exact |F_N symdiff g*F_N| / |F_N| (left translation)."""
        self._check_index(N)
        self.group.check(g)
        size = self.size(N)
        return Fraction(2 * (size - self._left_overlap(N, g)), size)

    def right_defect(self, N: int, g: Element) -> Fraction:
        """Exact |F_N symdiff F_N*g| / |F_N| (right translation)."""
        self._check_index(N)
        self.group.check(g)
        size = self.size(N)
        return Fraction(2 * (size - self._right_overlap(N, g)), size)

    def _left_overlap(self, N: int, g: Element) -> int:
        if self.shape == SHAPE_INTERVAL:
            return max(0, N - abs(g))
        if self.shape == SHAPE_BOX:
            out = 1
            for t in g:
                out *= max(0, N - abs(t))
            return out
        # g*F shifts (a,b) by (a0,b0) and, on the column over b' = b0+b,
        # shifts the c-range by c0 + a0*b.
        a0, b0, c0 = g
        ab = max(0, N - abs(a0))
        if ab == 0 or abs(b0) >= N:
            return 0
        total = 0
        for b in range(max(0, -b0), min(N, N - b0)):
            total += max(0, N * N - abs(c0 + a0 * b))
        return ab * total

    def _right_overlap(self, N: int, g: Element) -> int:
        if self.shape != SHAPE_HEISENBERG_BOX:
            return self._left_overlap(N, g)  # abelian
        # F*g shifts (a,b) by (a0,b0) and, on the column over a' = a+a0,
        # shifts the c-range by c0 + a*b0.
        a0, b0, c0 = g
        bb = max(0, N - abs(b0))
        if bb == 0 or abs(a0) >= N:
            return 0
        total = 0
        for a in range(max(0, -a0), min(N, N - a0)):
            total += max(0, N * N - abs(c0 + a * b0))
        return bb * total

    def _check_index(self, N: int) -> None:
        if N < 1:
            raise ValueError("empty Folner index")


def folner_set(f: FolnerSpec, N: int) -> list:
    """F_N as an explicit list of elements."""
    return f.set(N)


def folner_defect(f: FolnerSpec, N: int, g: Element) -> Fraction:
    """Exact symmetric-difference ratio |F_N symdiff gF_N| / |F_N|."""
    return f.defect(N, g)
