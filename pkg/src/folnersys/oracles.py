"""Exactly solvable measure-preserving systems used as ground truth.

Each system exposes the closed-form measure of an intersection of shifted
copies of its distinguished set A, and can realize the visit set
E(x) = {n : T^n x in A} of an orbit as a window bitmask.  The empirical
densities of E(x) must then reproduce the closed-form measures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .groups import FolnerSpec, GroupSpec, INT_Z
from .sets import OrbitSet, FRAC_BITS, SCALE, to_fixed
from .density import density_at


class OracleSystem:
    """Base for the closed-form systems; all act by Z."""

    def exact_measure(self, shifts: Sequence[int]) -> Fraction:
        raise NotImplementedError

    def orbit_set(self, lo: int, hi: int, **kw) -> OrbitSet:
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError


class RotationSystem(OracleSystem):
    """x -> x + alpha on the circle with A = [0, beta).

    Works on the 2^128 fixed-point circle; intersections of translated arcs
    are computed by an exact endpoint sweep, so `exact_measure` is a true
    rational with denominator 2^128.
    """

    def __init__(self, alpha, beta):
        self.alpha_fp = to_fixed(alpha) % SCALE
        self.beta_fp = to_fixed(beta)
        if not (0 < self.beta_fp <= SCALE):
            raise ValueError("beta must lie in (0, 1]")
        self.alpha_label = alpha if isinstance(alpha, str) else None

    def _arcs(self, h: int) -> List[Tuple[int, int]]:
        """[0,beta) - h*alpha as one or two half-open arcs in [0, SCALE)."""
        lo = (-h * self.alpha_fp) % SCALE
        hi = lo + self.beta_fp
        if self.beta_fp == SCALE:
            return [(0, SCALE)]
        if hi <= SCALE:
            return [(lo, hi)]
        return [(lo, SCALE), (0, hi - SCALE)]

    def exact_measure(self, shifts: Sequence[int]) -> Fraction:
        if not shifts:
            raise ValueError("shift list must be nonempty")
        arc_sets = [self._arcs(h) for h in shifts]
        endpoints = {0, SCALE}
        for arcs in arc_sets:
            for a, b in arcs:
                endpoints.add(a)
                endpoints.add(b)
        pts = sorted(endpoints)
        total = 0
        for a, b in zip(pts, pts[1:]):
            mid = a + (b - a) // 2
            if all(any(lo <= mid < hi for lo, hi in arcs) for arcs in arc_sets):
                total += b - a
        return Fraction(total, SCALE)

    def orbit_set(self, lo: int, hi: int, x0=0) -> OrbitSet:
        x0_fp = to_fixed(x0) % SCALE
        bits = np.empty(hi - lo, dtype=bool)
        r = (x0_fp + lo * self.alpha_fp) % SCALE
        for i in range(hi - lo):
            bits[i] = r < self.beta_fp
            r += self.alpha_fp
            if r >= SCALE:
                r -= SCALE
        return OrbitSet(lo, bits, self.label(), f"x0_fp={x0_fp}")

    def label(self) -> str:
        return f"rotation(alpha_fp={self.alpha_fp}, beta_fp={self.beta_fp})"


class PeriodicSystem(OracleSystem):
    """Rotation on Z/pZ with A read off a 0/1 pattern of length p."""

    def __init__(self, pattern: Sequence[int]):
        self.pattern = tuple(int(b) for b in pattern)
        if not self.pattern or any(b not in (0, 1) for b in self.pattern):
            raise ValueError("pattern must be a nonempty 0/1 vector")
        self.p = len(self.pattern)

    def exact_measure(self, shifts: Sequence[int]) -> Fraction:
        if not shifts:
            raise ValueError("shift list must be nonempty")
        hits = sum(
            1 for j in range(self.p)
            if all(self.pattern[(j + h) % self.p] for h in shifts)
        )
        return Fraction(hits, self.p)

    def orbit_set(self, lo: int, hi: int, x0: int = 0) -> OrbitSet:
        n = np.arange(lo, hi)
        bits = np.asarray(self.pattern)[(x0 + n) % self.p].astype(bool)
        return OrbitSet(lo, bits, self.label(), f"x0={x0}")

    def label(self) -> str:
        return f"periodic({''.join(map(str, self.pattern))})"


class MarkovSystem(OracleSystem):
    """Stationary Markov shift; A = {sequences whose 0th state is accepted}."""

    def __init__(self, P: Sequence[Sequence[float]], accept: Sequence[int],
                 pi: Optional[Sequence[float]] = None):
        self.P = np.asarray(P, dtype=np.float64)
        k = self.P.shape[0]
        if self.P.shape != (k, k):
            raise ValueError("transition matrix must be square")
        if not np.allclose(self.P.sum(axis=1), 1.0, atol=1e-10):
            raise ValueError("rows of P must sum to 1")
        self.accept = frozenset(int(s) for s in accept)
        if not self.accept or not all(0 <= s < k for s in self.accept):
            raise ValueError("accept states out of range")
        self.pi = self._stationary() if pi is None else np.asarray(pi, dtype=np.float64)
        if np.max(np.abs(self.pi @ self.P - self.pi)) > 1e-12:
            raise ValueError("pi is not stationary for P")
        if np.any(self.pi <= 0):
            raise ValueError("stationary vector must be strictly positive")

    def _stationary(self) -> np.ndarray:
        k = self.P.shape[0]
        A = np.vstack([self.P.T - np.eye(k), np.ones(k)])
        b = np.zeros(k + 1)
        b[-1] = 1.0
        pi, *_ = np.linalg.lstsq(A, b, rcond=None)
        return pi

    def exact_measure(self, shifts: Sequence[int]) -> float:
        """P(X_h in accept for all h in shifts) under stationarity.

        Dynamic programming over the sorted shift gaps with matrix powers
        bridging the gaps; returns a float (transition entries are floats).
        """
        if not shifts:
            raise ValueError("shift list must be nonempty")
        hs = sorted(set(int(h) for h in shifts))
        k = self.P.shape[0]
        mask = np.zeros(k)
        for s in self.accept:
            mask[s] = 1.0
        v = self.pi * mask
        for prev, nxt in zip(hs, hs[1:]):
            v = (v @ np.linalg.matrix_power(self.P, nxt - prev)) * mask
        return float(v.sum())

    def orbit_set(self, lo: int, hi: int, seed: int = 0) -> OrbitSet:
        """Sample a stationary trajectory over [lo, hi); deterministic per seed."""
        rng = np.random.default_rng(seed)
        n = hi - lo
        k = self.P.shape[0]
        cum_pi = np.cumsum(self.pi)
        cum_P = np.cumsum(self.P, axis=1)
        u = rng.random(n)
        states = np.empty(n, dtype=np.int64)
        s = int(np.searchsorted(cum_pi, u[0]))
        states[0] = s
        for i in range(1, n):
            s = int(np.searchsorted(cum_P[s], u[i]))
            states[i] = s
        accept = np.zeros(k, dtype=bool)
        for a in self.accept:
            accept[a] = True
        return OrbitSet(lo, accept[states], self.label(), f"seed={seed}")

    def sigma_bound(self, orbit: OrbitSet, shifts: Sequence[int], nbatches: int = 32) -> float:
        """Batch-means standard error for the empirical product frequency."""
        hs = sorted(set(int(h) for h in shifts))
        span = hs[-1] - hs[0]
        usable = len(orbit.mask) - span
        vals = np.ones(usable, dtype=bool)
        for h in hs:
            vals &= orbit.mask[h - hs[0]: h - hs[0] + usable]
        x = vals.astype(np.float64)
        bs = usable // nbatches
        means = x[: bs * nbatches].reshape(nbatches, bs).mean(axis=1)
        return float(means.std(ddof=1) / math.sqrt(nbatches))

    def label(self) -> str:
        return f"markov(k={self.P.shape[0]}, accept={sorted(self.accept)})"


# ---------------------------------------------------------------------------


@dataclass
class CorrespondenceRow:
    query: Tuple[int, ...]
    exact: Union[Fraction, float]
    empirical: Dict[int, Fraction]
    deviation: float
    tolerance: float
    passed: bool


@dataclass
class CorrespondenceReport:
    system: str
    rows: List[CorrespondenceRow]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "passed": self.passed,
            "rows": [
                {
                    "query": list(r.query),
                    "exact": float(r.exact),
                    "empirical": {
                        str(N): {"num": v.numerator, "den": v.denominator}
                        for N, v in r.empirical.items()
                    },
                    "deviation": r.deviation,
                    "tolerance": r.tolerance,
                    "passed": r.passed,
                }
                for r in self.rows
            ],
        }


ROTATION_TOL = 5e-3
MARKOV_SIGMA_FACTOR = 4.0


def verify_correspondence(
    sys: OracleSystem,
    queries: Sequence[Sequence[int]],
    f: FolnerSpec,
    schedule: Sequence[int],
    x0=0,
    seed: int = 0,
) -> CorrespondenceReport:
    """Check empirical orbit densities against the closed-form measures.

    Tolerances per system: rotations must land within ROTATION_TOL at the
    final index; Markov orbits within a 4-sigma batch-means band; periodic
    orbits must agree exactly once N is a multiple of the period.
    """
    if f.group.kind != INT_Z:
        raise ValueError("oracle systems act by Z only")
    final = max(schedule)
    span = max(max(q) for q in queries) - min(min(q) for q in queries)
    lo = f.start + min(min(q) for q in queries)
    hi = f.start + final + max(max(q) for q in queries) + 1
    if isinstance(sys, MarkovSystem):
        orbit = sys.orbit_set(lo, hi, seed=seed)
    else:
        orbit = sys.orbit_set(lo, hi, x0=x0)
    rows = []
    for q in queries:
        q = tuple(int(g) for g in q)
        exact = sys.exact_measure(q)
        emp = {N: density_at(orbit, q, f, N) for N in schedule}
        dev = abs(float(emp[final]) - float(exact))
        if isinstance(sys, PeriodicSystem):
            tol = 0.0 if final % sys.p == 0 else float(Fraction(sys.p, final))
            passed = dev <= tol
        elif isinstance(sys, MarkovSystem):
            tol = MARKOV_SIGMA_FACTOR * sys.sigma_bound(orbit, q)
            passed = dev <= tol
        else:
            tol = ROTATION_TOL
            passed = dev <= tol
        rows.append(CorrespondenceRow(q, exact, emp, dev, tol, passed))
    return CorrespondenceReport(sys.label(), rows)
