"""Correlation spectra and the finite isomorphism-consistency check.

The correlation spectrum of a pair (E, (F_N)) is the family of densities
of r-fold shifted intersections, indexed by canonical shift tuples (sorted,
duplicates removed, since permuting or repeating shifts does not change the
intersection).  Two pairs whose spectra agree to a chosen depth and radius
are CONSISTENT with having isomorphic symbolic systems at that scale; a
witnessed disagreement is conclusive and reported as DISTINGUISHED.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .groups import FolnerSpec, GroupSpec, INT_Z, Element
from .sets import SetSpec
from .density import density_at

CanonicalTuple = Tuple[Element, ...]

CONSISTENT = "CONSISTENT"
DISTINGUISHED = "DISTINGUISHED"


def canonical_tuple(group: GroupSpec, shifts: Sequence[Element]) -> CanonicalTuple:
    """Sorted distinct form; intersection is permutation- and repeat-invariant."""
    uniq = {group.element_key(g): g for g in shifts}
    return tuple(uniq[k] for k in sorted(uniq))


def shift_ball(group: GroupSpec, radius: int) -> List[Element]:
    """Shift alphabet for spectra: [0, radius] on Z (diagonal translation
    makes negative representatives redundant there), the word ball otherwise."""
    if group.kind == INT_Z:
        return list(range(radius + 1))
    return group.word_ball(radius)


def canonical_tuples(group: GroupSpec, r_max: int, radius: int) -> List[CanonicalTuple]:
    ball = sorted(shift_ball(group, radius), key=group.element_key)
    out: List[CanonicalTuple] = []
    for r in range(1, r_max + 1):
        out.extend(itertools.combinations(ball, r))
    return out


@dataclass
class CorrelationSpectrum:
    group: GroupSpec
    r_max: int
    radius: int
    final_N: int
    densities: Dict[CanonicalTuple, Fraction]
    oscillations: Dict[CanonicalTuple, Fraction]

    def density(self, shifts: Sequence[Element]) -> Fraction:
        return self.densities[canonical_tuple(self.group, shifts)]

    def to_rows(self) -> List[dict]:
        return [
            {
                "tuple": [list(g) if isinstance(g, tuple) else g for g in t],
                "num": d.numerator,
                "den": d.denominator,
                "oscillation": float(self.oscillations[t]),
            }
            for t, d in self.densities.items()
        ]


def correlation_spectrum(
    E: SetSpec,
    f: FolnerSpec,
    r_max: int,
    radius: int,
    schedule: Sequence[int],
    cap: int = 200000,
) -> CorrelationSpectrum:
    """Densities of every canonical tuple at the final schedule index,
    with per-tuple oscillation over the whole schedule."""
    tuples = canonical_tuples(E.group, r_max, radius)
    if len(tuples) > cap:
        raise RuntimeError(f"tuple count {len(tuples)} exceeds cap {cap}")
    final = max(schedule)
    densities = {}
    oscillations = {}
    for t in tuples:
        vals = {N: density_at(E, t, f, N) for N in schedule}
        densities[t] = vals[final]
        oscillations[t] = max(vals.values()) - min(vals.values())
    return CorrelationSpectrum(E.group, r_max, radius, final, densities, oscillations)


@dataclass
class CompareVerdict:
    verdict: str
    max_discrepancy: Fraction
    witness: Optional[CanonicalTuple]
    witness_discrepancy: Optional[Fraction]
    inconclusive: List[CanonicalTuple]
    depth: int
    radius: int

    def to_dict(self) -> dict:
        def tup(t):
            return None if t is None else [list(g) if isinstance(g, tuple) else g for g in t]

        return {
            "verdict": self.verdict,
            "max_discrepancy": float(self.max_discrepancy),
            "witness": tup(self.witness),
            "witness_discrepancy": (
                None if self.witness_discrepancy is None else float(self.witness_discrepancy)
            ),
            "inconclusive": [tup(t) for t in self.inconclusive],
            "depth": self.depth,
            "radius": self.radius,
        }


def compare_pairs(
    pair1: Tuple[SetSpec, FolnerSpec],
    pair2: Tuple[SetSpec, FolnerSpec],
    r_max: int,
    radius: int,
    schedule: Sequence[int],
    eps: float,
) -> CompareVerdict:
    """Finite fragment of the spectrum-equality criterion.

    DISTINGUISHED is conclusive at this scale (a tuple's densities differ by
    more than eps); CONSISTENT only certifies agreement to depth r_max and
    radius `radius`.  Tuples whose own oscillation exceeds eps under either
    pair are flagged inconclusive and excluded: the criterion presumes the
    densities converge, so run extract_subsequence first for those.
    The witness is the earliest canonical tuple that distinguishes.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    E1, f1 = pair1
    E2, f2 = pair2
    if E1.group != E2.group:
        raise ValueError("pairs must live on the same group")
    s1 = correlation_spectrum(E1, f1, r_max, radius, schedule)
    s2 = correlation_spectrum(E2, f2, r_max, radius, schedule)
    tuples = canonical_tuples(E1.group, r_max, radius)
    inconclusive = [
        t for t in tuples
        if s1.oscillations[t] > eps or s2.oscillations[t] > eps
    ]
    skip = set(inconclusive)
    max_disc = Fraction(0)
    witness = None
    witness_disc = None
    for t in tuples:
        if t in skip:
            continue
        disc = abs(s1.densities[t] - s2.densities[t])
        if disc > max_disc:
            max_disc = disc
        if witness is None and disc > eps:
            witness = t
            witness_disc = disc
    verdict = DISTINGUISHED if witness is not None else CONSISTENT
    return CompareVerdict(verdict, max_disc, witness, witness_disc, inconclusive, r_max, radius)
