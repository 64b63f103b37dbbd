"""Membership rules for subsets of the supported groups.

Every set spec can answer membership for any element inside a bounded
window.  Integer-group sets additionally expose ``bits(lo, hi)``, a cached
boolean window used by the counting kernels.

Rotation sets are evaluated in 128-bit fixed point: the circle [0,1) is
scaled to [0, 2^128) and all fractional parts are exact integer residues,
so no point near an interval endpoint is ever misclassified relative to
the stored approximation of alpha.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import WindowExceededError
from .groups import GroupSpec, Element, INT_Z, INT_ZD, HEISENBERG3

FRAC_BITS = 128
SCALE = 1 << FRAC_BITS


def to_fixed(value: Union[int, float, str, Fraction]) -> int:
    """Scale a circle coordinate to the 2^128 fixed-point grid.

    Accepts exact rationals, floats, or the symbolic names "golden"
    ((sqrt5-1)/2) and "sqrt2" (sqrt2-1), which are computed with integer
    square roots so the full 128 bits are meaningful.
    """
    if isinstance(value, str):
        if value == "golden":
            return (math.isqrt(5 << (2 * FRAC_BITS)) - SCALE) // 2
        if value == "sqrt2":
            return math.isqrt(2 << (2 * FRAC_BITS)) - SCALE
        value = Fraction(value)
    frac = Fraction(value)
    return round(frac * SCALE)


class SetSpec:
    """Base: an evaluatable membership predicate on a group."""

    group: GroupSpec

    def member(self, g: Element) -> bool:
        raise NotImplementedError

    def member_coords(self, coords: np.ndarray) -> np.ndarray:
        """Vectorized membership for an (ncoords, n) array of elements."""
        cols = [tuple(int(x) for x in coords[:, j]) for j in range(coords.shape[1])]
        if self.group.kind == INT_Z:
            return np.fromiter((self.member(c[0]) for c in cols), dtype=bool, count=len(cols))
        return np.fromiter((self.member(c) for c in cols), dtype=bool, count=len(cols))

    def complement(self) -> "SetSpec":
        return Complement(self)

    def describe(self) -> str:
        return repr(self)


class ZSetSpec(SetSpec):
    """Integer-group set with a cached boolean window."""

    def __init__(self):
        self.group = GroupSpec(INT_Z)
        self._cache_lo = 0
        self._cache: Optional[np.ndarray] = None

    def bits(self, lo: int, hi: int) -> np.ndarray:
        """Boolean membership over [lo, hi), cached and grown as needed."""
        if hi <= lo:
            return np.zeros(0, dtype=bool)
        if self._cache is None or lo < self._cache_lo or hi > self._cache_lo + len(self._cache):
            new_lo = lo if self._cache is None else min(lo, self._cache_lo)
            new_hi = hi if self._cache is None else max(hi, self._cache_lo + len(self._cache))
            self._cache = self._compute_bits(new_lo, new_hi)
            self._cache_lo = new_lo
        off = lo - self._cache_lo
        return self._cache[off:off + (hi - lo)]

    def _compute_bits(self, lo: int, hi: int) -> np.ndarray:
        raise NotImplementedError

    def member(self, g: int) -> bool:
        self.group.check(g)
        return bool(self.bits(g, g + 1)[0])

    def member_coords(self, coords: np.ndarray) -> np.ndarray:
        n = coords.reshape(-1)
        lo = int(n.min())
        hi = int(n.max()) + 1
        # windows in practice are contiguous or nearly so
        return self.bits(lo, hi)[n - lo]


class Congruence(ZSetSpec):
    """E = {n : n = a (mod m)}."""

    def __init__(self, a: int, m: int):
        super().__init__()
        if m < 1:
            raise ValueError("modulus must be positive")
        self.a = a % m
        self.m = m

    def _compute_bits(self, lo, hi):
        n = np.arange(lo, hi, dtype=np.int64)
        return (n % self.m) == self.a

    def member(self, g):
        self.group.check(g)
        return g % self.m == self.a

    def complement(self):
        if self.m == 2:
            return Congruence(1 - self.a, 2)
        return Complement(self)

    def describe(self):
        return f"congruence(a={self.a}, m={self.m})"


class RotationSet(ZSetSpec):
    """E = {n : frac(x0 + n*alpha) in [0, beta)} for the circle rotation."""

    def __init__(self, alpha, beta, x0=0):
        super().__init__()
        self.alpha_fp = to_fixed(alpha) % SCALE
        self.beta_fp = to_fixed(beta)
        self.x0_fp = to_fixed(x0) % SCALE
        if not (0 < self.beta_fp <= SCALE):
            raise ValueError("beta must lie in (0, 1]")
        self.alpha_label = alpha if isinstance(alpha, str) else None

    def _compute_bits(self, lo, hi):
        out = np.empty(hi - lo, dtype=bool)
        r = (self.x0_fp + lo * self.alpha_fp) % SCALE
        a, b = self.alpha_fp, self.beta_fp
        for i in range(hi - lo):
            out[i] = r < b
            r += a
            if r >= SCALE:
                r -= SCALE
        return out

    def member(self, g):
        self.group.check(g)
        return (self.x0_fp + g * self.alpha_fp) % SCALE < self.beta_fp

    def describe(self):
        return f"rotation(alpha_fp={self.alpha_fp}, beta_fp={self.beta_fp}, x0_fp={self.x0_fp})"


class DyadicBlocks(ZSetSpec):
    """E = union of [2^(2n), 2^(2n+1)); membership iff bit_length(n) is odd."""

    def _compute_bits(self, lo, hi):
        n = np.arange(lo, hi, dtype=np.int64)
        _, exp = np.frexp(n.astype(np.float64))  # exact below 2^53
        return (n >= 1) & (exp % 2 == 1)

    def member(self, g):
        self.group.check(g)
        return g >= 1 and g.bit_length() % 2 == 1

    def describe(self):
        return "dyadic_blocks"


class Bitmask(ZSetSpec):
    """Explicit membership on a half-open window [lo, lo+len(bits))."""

    def __init__(self, lo: int, bits: Sequence[int]):
        super().__init__()
        self.lo = lo
        self.mask = np.asarray(bits, dtype=bool)

    @property
    def hi(self) -> int:
        return self.lo + len(self.mask)

    def _compute_bits(self, lo, hi):
        if lo < self.lo or hi > self.hi:
            raise WindowExceededError(
                f"window exceeded: [{lo},{hi}) outside [{self.lo},{self.hi})")
        return self.mask[lo - self.lo:hi - self.lo].copy()

    def member(self, g):
        self.group.check(g)
        if not self.lo <= g < self.hi:
            raise WindowExceededError(f"window exceeded: {g} outside [{self.lo},{self.hi})")
        return bool(self.mask[g - self.lo])

    def describe(self):
        return f"bitmask(lo={self.lo}, n={len(self.mask)})"


class OrbitSet(Bitmask):
    """Bitmask realized from an oracle-system orbit; see `oracles.orbit_set`."""

    def __init__(self, lo, bits, system_label: str, start_label: str):
        super().__init__(lo, bits)
        self.system_label = system_label
        self.start_label = start_label

    def describe(self):
        return f"orbit({self.system_label}, start={self.start_label}, lo={self.lo}, n={len(self.mask)})"


class ComponentCongruence(SetSpec):
    """Componentwise congruences on Z^d or H3; None leaves a coordinate free."""

    def __init__(self, group: GroupSpec, rules: Sequence[Optional[Tuple[int, int]]]):
        if group.kind not in (INT_ZD, HEISENBERG3):
            raise ValueError("componentwise rules are for lattice or Heisenberg groups")
        if len(rules) != group.ncoords:
            raise ValueError("one rule (or None) per coordinate required")
        self.group = group
        self.rules = tuple(None if r is None else (r[0] % r[1], r[1]) for r in rules)

    def member(self, g):
        self.group.check(g)
        return all(r is None or c % r[1] == r[0] for c, r in zip(g, self.rules))

    def member_coords(self, coords):
        out = np.ones(coords.shape[1], dtype=bool)
        for row, r in zip(coords, self.rules):
            if r is not None:
                out &= (row % r[1]) == r[0]
        return out

    def describe(self):
        return f"component_congruence({self.group.kind}, {self.rules})"


class Complement(SetSpec):
    def __init__(self, inner: SetSpec):
        self.inner = inner
        self.group = inner.group

    def member(self, g):
        return not self.inner.member(g)

    def member_coords(self, coords):
        return ~self.inner.member_coords(coords)

    def bits(self, lo, hi):
        return ~self.inner.bits(lo, hi)

    def complement(self):
        return self.inner

    def describe(self):
        return f"complement({self.inner.describe()})"


# ---------------------------------------------------------------------------


def indicator_bits(E: SetSpec, lo: int, hi: int) -> np.ndarray:
    """Boolean window of 1_E over [lo, hi) on the integer group."""
    if E.group.kind != INT_Z:
        raise ValueError("integer windows require a Z set")
    if isinstance(E, ZSetSpec) or hasattr(E, "bits"):
        return np.asarray(E.bits(lo, hi), dtype=bool)
    n = np.arange(lo, hi, dtype=np.int64).reshape(1, -1)
    return E.member_coords(n)


def indicator_window(E: SetSpec, lo: int, hi: int) -> np.ndarray:
    """Packed little-endian bits of 1_E over [lo, hi): bit i is element lo+i."""
    return np.packbits(indicator_bits(E, lo, hi), bitorder="little")
