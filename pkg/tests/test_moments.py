import cmath
import math
from fractions import Fraction

import numpy as np
import pytest

from folnersys import (
    AveragingScheme, Congruence, DyadicBlocks, ExponentialFn, FolnerSpec,
    GroupSpec, IndicatorFn, NormalizerRule, ProductFn, RandomDiskFn,
    WeightRule, accordance_check, density_at, exponential_oracle,
    scheme_normalization, weighted_moment,
)
from folnersys.moments import moment_exact

Z = GroupSpec("Z")
FZ1 = FolnerSpec(Z, "interval", start=1)
UNIT = AveragingScheme(FZ1)


def test_scheme_normalization_trivial():
    assert scheme_normalization(UNIT, 123) == 1
    s = AveragingScheme(FZ1, WeightRule("custom", table=tuple(
        (n, 2) for n in range(1, 51))), NormalizerRule("const", c=2))
    assert scheme_normalization(s, 50) == 1


def test_scheme_normalization_linear():
    s = AveragingScheme(FZ1, WeightRule("linear"), NormalizerRule("linear_mean"))
    for N in (1, 2, 7, 100, 12345):
        assert scheme_normalization(s, N) == 1


def test_scheme_normalization_degenerate():
    s = AveragingScheme(FZ1, WeightRule("one"), NormalizerRule("const", c=0))
    with pytest.raises(ValueError, match="degenerate normalizer"):
        scheme_normalization(s, 10)


def test_indicator_reduction_exact():
    evens = Congruence(0, 2)
    family = [IndicatorFn(evens)]
    q = [(1, False, 0)]
    assert weighted_moment(family, q, UNIT, 1000) == 0.5
    assert moment_exact(family, q, UNIT, 1000) == density_at(evens, (0,), FZ1, 1000)
    q2 = [(1, False, 0), (1, False, 3)]
    assert moment_exact(family, q2, UNIT, 777) == density_at(evens, (0, 3), FZ1, 777)


def test_indicator_reduction_skips_weighted():
    evens = Congruence(0, 2)
    s = AveragingScheme(FZ1, WeightRule("linear"), NormalizerRule("linear_mean"))
    assert moment_exact([IndicatorFn(evens)], [(1, False, 0)], s, 100) is None


def test_exponential_cancellation():
    theta = 0.2137
    f = ExponentialFn(theta)
    q = [(1, False, 0), (1, True, 3)]
    v = weighted_moment([f], q, UNIT, 10**5)
    assert abs(v - cmath.exp(-2j * math.pi * theta * 3)) < 1e-10


def test_exponential_equidistribution():
    theta = math.sqrt(2) - 1
    N = 10**5
    v = weighted_moment([ExponentialFn(theta)], [(1, False, 0)], UNIT, N)
    bound = 2 / (N * abs(1 - cmath.exp(2j * math.pi * theta)))
    assert abs(v) <= bound + 1e-12


def test_modulus_bound():
    rng = np.random.default_rng(3)
    fam = [RandomDiskFn(1), ExponentialFn(0.31), IndicatorFn(Congruence(1, 4))]
    for _ in range(10):
        q = [
            (int(rng.integers(1, 4)), bool(rng.integers(2)), int(rng.integers(0, 9)))
            for _ in range(int(rng.integers(1, 4)))
        ]
        v = weighted_moment(fam, q, UNIT, 512)
        assert abs(v) <= float(scheme_normalization(UNIT, 512)) + 1e-12


def test_conjugation_symmetry():
    fam = [RandomDiskFn(9), ExponentialFn(0.77)]
    q = [(1, False, 0), (2, True, 2), (1, False, 5)]
    qbar = [(i, not c, g) for i, c, g in q]
    a = weighted_moment(fam, q, UNIT, 2048)
    b = weighted_moment(fam, qbar, UNIT, 2048)
    assert abs(a.conjugate() - b) < 1e-12


def test_disk_constraint():
    for fn in (RandomDiskFn(4), ExponentialFn(0.123),
               ProductFn(RandomDiskFn(4), ExponentialFn(0.5))):
        vals = fn.eval_range(-100, 100)
        assert np.all(np.abs(vals) <= 1 + 1e-12)


def test_query_validation():
    fam = [ExponentialFn(0.1)]
    with pytest.raises(ValueError):
        weighted_moment(fam, [], UNIT, 10)
    with pytest.raises(IndexError):
        weighted_moment(fam, [(2, False, 0)], UNIT, 10)


def test_exponential_oracle_branches():
    theta = 0.3941
    q = [(1, False, 0), (1, True, 4)]
    assert abs(exponential_oracle([theta], q, UNIT)
               - cmath.exp(-2j * math.pi * theta * 4)) < 1e-12
    assert exponential_oracle([1.0], [(1, False, 7)], UNIT) == 1
    assert exponential_oracle([math.sqrt(2) - 1], [(1, False, 0)], UNIT) == 0


def test_exponential_oracle_requires_unit_scheme():
    s = AveragingScheme(FZ1, WeightRule("linear"), NormalizerRule("linear_mean"))
    with pytest.raises(ValueError, match="oracle undefined"):
        exponential_oracle([0.5], [(1, False, 0)], s)


def test_accordance_exponential():
    rows = accordance_check(
        [ExponentialFn(0.137)], [[(1, False, 0), (1, True, 2)]],
        UNIT, [10**3, 10**4, 10**5], eps=0.01)
    assert all(r.accordant for r in rows)
    # every conjugation pattern of the pair was checked
    assert set(rows[0].oscillations) == {
        (False, False), (False, True), (True, False), (True, True)}


def test_accordance_dyadic_fails():
    rows = accordance_check(
        [IndicatorFn(DyadicBlocks())], [[(1, False, 0)]],
        UNIT, [1 << k for k in range(6, 15)], eps=0.05)
    assert not rows[0].accordant
    assert max(rows[0].oscillations.values()) > 0.25


def test_accordance_constant_function():
    rows = accordance_check(
        [ExponentialFn(0.0)], [[(1, False, 0)]], UNIT, [100, 1000], eps=1e-9)
    assert rows[0].accordant
