"""Empirical cylinder measures on the symbolic space {0,1}^G.

For a source set E with indicator sequence omega = (1_E(g)) and a cylinder
C = {x : x(h_i) = eps_i}, the empirical measure at window F_N is

    nu_N(C) = |{g in F_N : 1_E(g * h_i) = eps_i for all i}| / |F_N|

which is exactly the fraction of g in F_N whose shifted sequence S_g omega
lies in C.  All values are exact rationals; additivity over polarity splits
is an integer counting identity and must hold with residual exactly zero.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import CapExceededError
from .groups import FolnerSpec, GroupSpec, Element, INT_Z, SHAPE_INTERVAL
from .sets import SetSpec, indicator_bits
from .density import density_at, extract_subsequence, upper_density


@dataclass(frozen=True)
class CylinderSpec:
    """Finite map {h_i -> eps_i}; the empty map denotes the full space."""

    constraints: Tuple[Tuple[Element, int], ...]

    @staticmethod
    def make(group: GroupSpec, constraints: Dict[Element, int]) -> "CylinderSpec":
        items = []
        for h, eps in constraints.items():
            group.check(h)
            if eps not in (0, 1):
                raise ValueError("polarity must be 0 or 1")
            items.append((h, eps))
        items.sort(key=lambda it: group.element_key(it[0]))
        return CylinderSpec(tuple(items))

    def elements(self) -> Tuple[Element, ...]:
        return tuple(h for h, _ in self.constraints)

    def with_constraint(self, group: GroupSpec, h: Element, eps: int) -> "CylinderSpec":
        if h in self.elements():
            raise ValueError("constraint clash")
        d = dict(self.constraints)
        d[h] = eps
        return CylinderSpec.make(group, d)

    def shifted(self, group: GroupSpec, g: Element) -> "CylinderSpec":
        """S_g^{-1} C: constraints {g*h_i -> eps_i}."""
        return CylinderSpec.make(group, {group.mul(g, h): eps for h, eps in self.constraints})

    def flipped(self) -> "CylinderSpec":
        return CylinderSpec(tuple((h, 1 - eps) for h, eps in self.constraints))


def cylinder_count(E: SetSpec, C: CylinderSpec, f: FolnerSpec, N: int) -> int:
    """Exact |{g in F_N : 1_E(g*h_i) = eps_i for all i}|."""
    if f.group != E.group:
        raise ValueError("group mismatch between set and Folner spec")
    if not C.constraints:
        return f.size(N)
    if E.group.kind == INT_Z and f.shape == SHAPE_INTERVAL:
        s = f.start
        hs = [h for h, _ in C.constraints]
        lo = s + min(hs)
        hi = s + N + max(hs)
        window = indicator_bits(E, lo, hi)
        acc = np.ones(N, dtype=bool)
        for h, eps in C.constraints:
            off = s + h - lo
            seg = window[off:off + N]
            acc &= seg if eps else ~seg
        return int(np.count_nonzero(acc))
    coords = f.coords(N)
    acc = np.ones(coords.shape[1], dtype=bool)
    for h, eps in C.constraints:
        hit = E.member_coords(E.group.translate_right(coords, h))
        acc &= hit if eps else ~hit
    return int(np.count_nonzero(acc))


def cylinder_measure(E: SetSpec, C: CylinderSpec, f: FolnerSpec, N: int) -> Fraction:
    """nu_N(C) as an exact rational."""
    return Fraction(cylinder_count(E, C, f, N), f.size(N))


def additivity_check(
    E: SetSpec, C: CylinderSpec, h: Element, f: FolnerSpec, N: int,
) -> Tuple[bool, Fraction]:
    """Verify nu_N(C) = nu_N(C + {h->0}) + nu_N(C + {h->1}) exactly.

    Returns (ok, residual); the residual is an exact rational and must be 0.
    """
    if h in C.elements():
        raise ValueError("constraint clash")
    whole = cylinder_measure(E, C, f, N)
    parts = sum(
        cylinder_measure(E, C.with_constraint(E.group, h, eps), f, N) for eps in (0, 1)
    )
    residual = whole - parts
    return residual == 0, residual


def invariance_defect(
    E: SetSpec, C: CylinderSpec, g: Element, f: FolnerSpec, N: int,
) -> Fraction:
    """|nu_N(S_g^{-1} C) - nu_N(C)|, guaranteed <= the Folner defect of g.

    The counts of the two cylinders coincide off F_N symdiff F_N g, which
    keeps the difference below the window defect; the bound is asserted.
    """
    base = cylinder_measure(E, C, f, N)
    moved = cylinder_measure(E, C.shifted(E.group, g), f, N)
    value = abs(moved - base)
    bound = f.defect(N, g)
    if value > bound:
        raise AssertionError(
            f"invariance defect {value} exceeded Folner defect {bound} for g={g}")
    return value


# ---------------------------------------------------------------------------
# report generation


@dataclass
class MeasureRow:
    cylinder: CylinderSpec
    counts: Dict[int, int]
    values: Dict[int, Fraction]
    oscillation: Fraction


@dataclass
class MeasureTable:
    source: str
    folner: FolnerSpec
    schedule: List[int]
    rows: List[MeasureRow]
    density_estimate: Fraction
    nu_of_A: Fraction
    subsequence: Optional[List[int]]
    observed_patterns: Optional[List[Tuple[int, ...]]] = None

    def to_dict(self) -> dict:
        def frac(x: Fraction):
            return {"num": x.numerator, "den": x.denominator, "dec": f"{float(x):.12g}"}

        return {
            "source": self.source,
            "schedule": list(self.schedule),
            "density_estimate": frac(self.density_estimate),
            "nu_of_A": frac(self.nu_of_A),
            "subsequence": self.subsequence,
            "rows": [
                {
                    "cylinder": [[list(h) if isinstance(h, tuple) else h, eps]
                                 for h, eps in r.cylinder.constraints],
                    "counts": {str(N): c for N, c in r.counts.items()},
                    "values": {str(N): frac(v) for N, v in r.values.items()},
                    "oscillation": frac(r.oscillation),
                }
                for r in self.rows
            ],
            "observed_patterns": (
                None if self.observed_patterns is None
                else ["".join(map(str, p)) for p in self.observed_patterns]
            ),
        }


def enumerate_cylinders(
    group: GroupSpec, support_radius: int, max_depth: int, cap: int = 20000,
) -> List[CylinderSpec]:
    """All cylinders with support in the radius ball and <= max_depth constraints.

    Canonical order: supports in lexicographic element order, polarities
    enumerated 0 before 1.
    """
    ball = group.word_ball(support_radius)
    total = sum(
        _ncr(len(ball), r) * (2 ** r) for r in range(1, max_depth + 1)
    )
    if total > cap:
        raise CapExceededError(f"cylinder count {total} exceeds cap {cap}")
    out = []
    for r in range(1, max_depth + 1):
        for support in itertools.combinations(ball, r):
            for pol in itertools.product((0, 1), repeat=r):
                out.append(CylinderSpec.make(group, dict(zip(support, pol))))
    return out


def _ncr(n, r):
    import math
    return math.comb(n, r)


def furstenberg_report(
    E: SetSpec,
    f: FolnerSpec,
    support_radius: int,
    max_depth: int,
    schedule: Sequence[int],
    cylinder_cap: int = 20000,
    subsequence_eps: float = 0.05,
    collect_patterns: bool = False,
) -> MeasureTable:
    """Tabulate nu_N over the cylinder algebra of a support ball.

    Reports per-cylinder convergence oscillation over the schedule, the
    density estimate for the defining set against nu(A) (A the one-point
    cylinder at the identity), and the convergent subsequence for A when one
    exists at `subsequence_eps`.
    """
    if support_radius < 1 or max_depth < 1:
        raise ValueError("support radius and depth must be >= 1")
    cyls = enumerate_cylinders(E.group, support_radius, max_depth, cap=cylinder_cap)
    rows = []
    for C in cyls:
        counts = {N: cylinder_count(E, C, f, N) for N in schedule}
        values = {N: Fraction(c, f.size(N)) for N, c in counts.items()}
        osc = max(values.values()) - min(values.values())
        rows.append(MeasureRow(C, counts, values, osc))
    est, _ = upper_density(E, f, list(schedule))
    e = E.group.identity()
    A = CylinderSpec.make(E.group, {e: 1})
    nu_A = cylinder_measure(E, A, f, max(schedule))
    try:
        sub = extract_subsequence(E, [(e,)], f, list(schedule), subsequence_eps)
    except Exception:
        sub = None
    patterns = None
    if collect_patterns:
        patterns = _observed_patterns(E, f, support_radius, max(schedule))
    return MeasureTable(
        source=E.describe(),
        folner=f,
        schedule=list(schedule),
        rows=rows,
        density_estimate=est,
        nu_of_A=nu_A,
        subsequence=sub,
        observed_patterns=patterns,
    )


def _observed_patterns(E, f, radius, N):
    """Distinct words of S_g omega over the radius ball, g in F_N (opt-in)."""
    ball = E.group.word_ball(radius)
    coords = f.coords(N)
    cols = []
    for h in ball:
        cols.append(E.member_coords(E.group.translate_right(coords, h)).astype(np.int8))
    words = np.stack(cols, axis=1)
    uniq = np.unique(words, axis=0)
    return [tuple(int(v) for v in row) for row in uniq]
