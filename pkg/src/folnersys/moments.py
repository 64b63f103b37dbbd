"""Weighted correlation moments of disk-valued function families.

An averaging scheme is a Folner sequence with a nonnegative weight a(g)
and a normalizer b(N) whose combination (1/(b(N)|F_N|)) sum a(g) tends to
one.  The moment of a query [(i, conj, g_i), ...] against a family
(f_1,...,f_l) is the finite-N value of

    (1/(b(N)|F_N|)) sum_{g in F_N} a(g) prod_i f~_i(g_i g)

with f~ the function or its conjugate.  All-indicator unweighted moments
bypass floating point and reduce exactly to intersection densities.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .groups import FolnerSpec, GroupSpec, INT_Z, SHAPE_INTERVAL, Element
from .sets import SetSpec, indicator_bits

Factor = Tuple[int, bool, Element]  # (1-based function index, conjugate?, shift)


# ---------------------------------------------------------------------------
# weights and normalizers


@dataclass(frozen=True)
class WeightRule:
    """Named catalog: one, linear (a(n)=n), exp_decay(rate), or a custom table."""

    kind: str
    rate: float = 0.0
    table: Optional[tuple] = None

    def values(self, coords: np.ndarray) -> Union[np.ndarray, None]:
        n = coords.reshape(-1)
        if self.kind == "one":
            return np.ones(len(n))
        if self.kind == "linear":
            if np.any(n < 0):
                raise ValueError("linear weight needs a nonnegative window")
            return n.astype(np.float64)
        if self.kind == "exp_decay":
            return np.exp(-self.rate * np.abs(n).astype(np.float64))
        if self.kind == "custom":
            lookup = dict(self.table)
            return np.array([lookup[int(v)] for v in n], dtype=np.float64)
        raise ValueError(f"unknown weight rule {self.kind!r}")

    def exact_values(self, coords: np.ndarray) -> Optional[List[Fraction]]:
        n = coords.reshape(-1)
        if self.kind == "one":
            return [Fraction(1)] * len(n)
        if self.kind == "linear":
            return [Fraction(int(v)) for v in n]
        if self.kind == "custom" and all(
            isinstance(v, (int, Fraction)) for _, v in self.table
        ):
            lookup = dict(self.table)
            return [Fraction(lookup[int(v)]) for v in n]
        return None

    @property
    def is_unit(self) -> bool:
        return self.kind == "one"


@dataclass(frozen=True)
class NormalizerRule:
    """Named catalog: one, const(c), linear_mean (b(N)=(N+1)/2), custom table."""

    kind: str
    c: Union[int, float, Fraction] = 1
    table: Optional[tuple] = None

    def value(self, N: int) -> Union[Fraction, float]:
        if self.kind == "one":
            return Fraction(1)
        if self.kind == "const":
            return Fraction(self.c) if isinstance(self.c, (int, Fraction)) else self.c
        if self.kind == "linear_mean":
            return Fraction(N + 1, 2)
        if self.kind == "custom":
            return dict(self.table)[N]
        raise ValueError(f"unknown normalizer rule {self.kind!r}")

    @property
    def is_unit(self) -> bool:
        return self.kind == "one"


@dataclass(frozen=True)
class AveragingScheme:
    folner: FolnerSpec
    weight: WeightRule = WeightRule("one")
    normalizer: NormalizerRule = NormalizerRule("one")


def scheme_normalization(s: AveragingScheme, N: int) -> Union[Fraction, float]:
    """(1/(b(N)|F_N|)) sum_{g in F_N} a(g); exact when both rules are rational."""
    b = s.normalizer.value(N)
    if b == 0:
        raise ValueError("degenerate normalizer")
    coords = s.folner.coords(N)
    exact = s.weight.exact_values(coords)
    size = s.folner.size(N)
    if exact is not None and isinstance(b, Fraction):
        return sum(exact, Fraction(0)) / (b * size)
    return float(np.sum(s.weight.values(coords))) / (float(b) * size)


# ---------------------------------------------------------------------------
# function specs


class FunctionSpec:
    """A function G -> closed unit disk, evaluatable on windows."""

    def eval_range(self, lo: int, hi: int) -> np.ndarray:
        raise NotImplementedError

    def eval_coords(self, group: GroupSpec, coords: np.ndarray) -> np.ndarray:
        if group.kind != INT_Z:
            raise ValueError(f"{type(self).__name__} is defined on Z only")
        n = coords.reshape(-1)
        lo, hi = int(n.min()), int(n.max()) + 1
        return self.eval_range(lo, hi)[n - lo]

    def conj(self) -> "FunctionSpec":
        return ConjFn(self)


class ExponentialFn(FunctionSpec):
    """f(n) = exp(2 pi i theta n)."""

    def __init__(self, theta: float):
        self.theta = float(theta)

    def eval_range(self, lo, hi):
        n = np.arange(lo, hi, dtype=np.float64)
        return np.exp(2j * np.pi * self.theta * n)


class IndicatorFn(FunctionSpec):
    def __init__(self, E: SetSpec):
        self.E = E

    def eval_range(self, lo, hi):
        return indicator_bits(self.E, lo, hi).astype(np.complex128)

    def eval_coords(self, group, coords):
        return self.E.member_coords(coords).astype(np.complex128)


class RandomDiskFn(FunctionSpec):
    """Deterministic pseudo-random disk values, hashed per integer point."""

    def __init__(self, seed: int):
        self.seed = int(seed)

    def eval_range(self, lo, hi):
        # int64 first so negative points wrap into the hash domain
        n = np.arange(lo, hi, dtype=np.int64).astype(np.uint64) + np.uint64(0x9E3779B97F4A7C15)
        x = n * np.uint64(self.seed * 2 + 1)
        # splitmix64 finalizer
        x ^= x >> np.uint64(30)
        x *= np.uint64(0xBF58476D1CE4E5B9)
        x ^= x >> np.uint64(27)
        x *= np.uint64(0x94D049BB133111EB)
        x ^= x >> np.uint64(31)
        r = (x >> np.uint64(11)).astype(np.float64) / float(1 << 53)
        phase = ((x & np.uint64((1 << 53) - 1)).astype(np.float64) / float(1 << 53))
        return np.sqrt(r) * np.exp(2j * np.pi * phase)


class ConjFn(FunctionSpec):
    def __init__(self, inner: FunctionSpec):
        self.inner = inner

    def eval_range(self, lo, hi):
        return np.conj(self.inner.eval_range(lo, hi))

    def eval_coords(self, group, coords):
        return np.conj(self.inner.eval_coords(group, coords))

    def conj(self):
        return self.inner


class ProductFn(FunctionSpec):
    def __init__(self, a: FunctionSpec, b: FunctionSpec):
        self.a, self.b = a, b

    def eval_range(self, lo, hi):
        return self.a.eval_range(lo, hi) * self.b.eval_range(lo, hi)

    def eval_coords(self, group, coords):
        return self.a.eval_coords(group, coords) * self.b.eval_coords(group, coords)


# ---------------------------------------------------------------------------
# moments


def _check_query(family: Sequence[FunctionSpec], query: Sequence[Factor]) -> None:
    if not query:
        raise ValueError("moment query must be nonempty")
    for idx, _, _ in query:
        if not 1 <= idx <= len(family):
            raise IndexError(f"function index {idx} out of range for family of {len(family)}")


def moment_exact(
    family: Sequence[FunctionSpec],
    query: Sequence[Factor],
    s: AveragingScheme,
    N: int,
) -> Optional[Fraction]:
    """Exact rational value for all-indicator unconjugated unweighted moments.

    Returns None when the query does not admit the exact counting path.
    """
    _check_query(family, query)
    if not (s.weight.is_unit and s.normalizer.is_unit):
        return None
    group = s.folner.group
    if any(conj or not isinstance(family[i - 1], IndicatorFn) for i, conj, _ in query):
        return None
    if group.kind == INT_Z and s.folner.shape == SHAPE_INTERVAL:
        st = s.folner.start
        shifts = [g for _, _, g in query]
        lo = st + min(shifts)
        hi = st + N + max(shifts)
        acc = np.ones(N, dtype=bool)
        for i, _, g in query:
            bits = indicator_bits(family[i - 1].E, lo, hi)
            off = st + g - lo
            acc &= bits[off:off + N]
        return Fraction(int(np.count_nonzero(acc)), N)
    coords = s.folner.coords(N)
    acc = np.ones(coords.shape[1], dtype=bool)
    for i, _, g in query:
        acc &= family[i - 1].E.member_coords(group.translate_left(g, coords))
    return Fraction(int(np.count_nonzero(acc)), s.folner.size(N))


def weighted_moment(
    family: Sequence[FunctionSpec],
    query: Sequence[Factor],
    s: AveragingScheme,
    N: int,
) -> complex:
    """Finite-N weighted moment; exact counting path taken when available."""
    exact = moment_exact(family, query, s, N)
    if exact is not None:
        return complex(exact)
    _check_query(family, query)
    group = s.folner.group
    coords = s.folner.coords(N)
    prod = None
    for i, conj, g in query:
        fn = family[i - 1].conj() if conj else family[i - 1]
        vals = fn.eval_coords(group, group.translate_left(g, coords))
        prod = vals if prod is None else prod * vals
    weights = s.weight.values(coords)
    if s.weight.kind != "one":
        prod = prod * weights
    total = complex(np.sum(prod))  # numpy pairwise summation keeps error tiny
    b = float(s.normalizer.value(N))
    if b == 0:
        raise ValueError("degenerate normalizer")
    return total / (b * s.folner.size(N))


@dataclass
class AccordanceRow:
    query: Tuple[Factor, ...]
    oscillations: Dict[Tuple[bool, ...], float]
    accordant: bool


def accordance_check(
    family: Sequence[FunctionSpec],
    queries: Sequence[Sequence[Factor]],
    s: AveragingScheme,
    schedule: Sequence[int],
    eps: float,
    conj_depth: int = 3,
) -> List[AccordanceRow]:
    """Cauchy oscillation of each query over the schedule tail.

    For queries with at most `conj_depth` factors every conjugation pattern
    is tried (the definition quantifies over all of them); deeper queries
    keep their stated pattern only.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    rows = []
    for q in queries:
        q = tuple((int(i), bool(c), g) for i, c, g in q)
        r = len(q)
        if r <= conj_depth:
            patterns = list(itertools.product((False, True), repeat=r))
        else:
            patterns = [tuple(c for _, c, _ in q)]
        oscs: Dict[Tuple[bool, ...], float] = {}
        ok = True
        for pat in patterns:
            variant = tuple((i, c, g) for (i, _, g), c in zip(q, pat))
            vals = [weighted_moment(family, variant, s, N) for N in schedule]
            osc = max(
                abs(a - b) for a, b in itertools.combinations(vals, 2)
            ) if len(vals) > 1 else 0.0
            oscs[pat] = float(osc)
            if osc > eps:
                ok = False
        rows.append(AccordanceRow(q, oscs, ok))
    return rows


def exponential_oracle(
    thetas: Sequence[float],
    query: Sequence[Factor],
    s: AveragingScheme,
) -> complex:
    """Closed-form limit for pure exponential families under the unit scheme.

    With signs sigma_i = -1 for conjugated factors, Theta = sum sigma_i
    theta_i: the limit is exp(2 pi i sum sigma_i theta_i g_i) when Theta is
    an integer and 0 otherwise (equidistribution of the geometric sum).
    """
    if not (s.weight.is_unit and s.normalizer.is_unit
            and s.folner.shape == SHAPE_INTERVAL):
        raise ValueError("oracle undefined")
    for idx, _, _ in query:
        if not 1 <= idx <= len(thetas):
            raise IndexError("function index out of range")
    theta_total = 0.0
    phase = 0.0
    for i, conj, g in query:
        sigma = -1.0 if conj else 1.0
        theta_total += sigma * thetas[i - 1]
        phase += sigma * thetas[i - 1] * g
    if abs(theta_total - round(theta_total)) < 1e-12:
        return cmath.exp(2j * math.pi * (phase % 1.0))
    return 0j
