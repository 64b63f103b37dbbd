"""Multi-shift intersection densities along Folner sequences.

The central count is, for shifts (g_1,...,g_r) and the window F_N,

    |{h in F_N : g_i * h in E for all i}|

i.e. the window count of the intersection of the left-translated sets
g_i^{-1} E.  Counts are exact integers, ratios exact `Fraction`s.  A fast
FFT / bit-parallel kernel covers the abelian pair-correlation case and is
required to agree with the naive count bit for bit.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .errors import NoConvergentSubsequenceError
from .groups import FolnerSpec, Element, INT_Z, SHAPE_INTERVAL, SHAPE_BOX
from .sets import SetSpec, indicator_bits

Query = Tuple[Element, ...]


def intersection_count(E: SetSpec, shifts: Sequence[Element], f: FolnerSpec, N: int) -> int:
    """Exact |{h in F_N : g*h in E for all g in shifts}|."""
    if not shifts:
        raise ValueError("query must contain at least one shift")
    for g in shifts:
        E.group.check(g)
    if f.group != E.group:
        raise ValueError("group mismatch between set and Folner spec")
    if E.group.kind == INT_Z and f.shape == SHAPE_INTERVAL:
        s = f.start
        lo = s + min(shifts)
        hi = s + N + max(shifts)
        window = indicator_bits(E, lo, hi)
        acc = np.ones(N, dtype=bool)
        for g in shifts:
            off = s + g - lo
            acc &= window[off:off + N]
        return int(np.count_nonzero(acc))
    coords = f.coords(N)
    acc = np.ones(coords.shape[1], dtype=bool)
    for g in shifts:
        acc &= E.member_coords(E.group.translate_left(g, coords))
    return int(np.count_nonzero(acc))


def density_at(E: SetSpec, shifts: Sequence[Element], f: FolnerSpec, N: int) -> Fraction:
    """intersection_count / |F_N| as an exact rational."""
    return Fraction(intersection_count(E, shifts, f, N), f.size(N))


def upper_density(
    E: SetSpec,
    f: FolnerSpec,
    schedule: Sequence[int],
    tol: Fraction = Fraction(1, 1000),
) -> Tuple[Fraction, List[int]]:
    """Finite-scale limsup surrogate over the schedule.

    Returns the maximal single-shift density and every index whose density
    is within `tol` of that maximum (the attaining subsequence).
    """
    if not schedule:
        raise ValueError("schedule must be nonempty")
    if list(schedule) != sorted(set(schedule)):
        raise ValueError("schedule must be strictly increasing")
    e = E.group.identity()
    dens = {N: density_at(E, (e,), f, N) for N in schedule}
    est = max(dens.values())
    attaining = [N for N in schedule if est - dens[N] <= tol]
    return est, attaining


def extract_subsequence(
    E: SetSpec,
    queries: Sequence[Query],
    f: FolnerSpec,
    schedule: Sequence[int],
    eps: float,
) -> List[int]:
    """Greedy finite surrogate of the diagonal subsequence argument.

    Selects, earliest index first, a subset S of the schedule on which every
    query's density oscillates by at most `eps`, and on which the first
    query's density stays within `eps` of its limsup estimate over the full
    schedule.  Raises when no S with at least two indices exists.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not queries:
        raise ValueError("at least one query required")
    dens = {q: {N: density_at(E, q, f, N) for N in schedule} for q in queries}
    first = queries[0]
    est = max(dens[first].values())
    chosen: List[int] = []
    for N in schedule:
        if abs(dens[first][N] - est) > eps:
            continue
        ok = True
        for q in queries:
            for M in chosen:
                if abs(dens[q][N] - dens[q][M]) > eps:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            chosen.append(N)
    if len(chosen) < 2:
        raise NoConvergentSubsequenceError(
            f"no convergent subsequence at tolerance {eps}")
    return chosen


# ---------------------------------------------------------------------------
# pair-correlation kernels (abelian only)


def _z_windows(E, f, N, H):
    s = f.start
    x = indicator_bits(E, s, s + N)
    y = indicator_bits(E, s - H, s + N + H)
    return x, y


def pair_correlation_naive(E: SetSpec, f: FolnerSpec, N: int, H: int) -> Dict[Element, int]:
    """Reference double loop; the oracle the fast kernels must match."""
    _require_abelian(f)
    if f.shape == SHAPE_INTERVAL:
        x, y = _z_windows(E, f, N, H)
        out = {}
        for h in range(-H, H + 1):
            c = 0
            for n in range(N):
                if x[n] and y[n + h + H]:
                    c += 1
            out[h] = c
        return out
    return _box_pair_correlation(E, f, N, H, naive=True)


def pair_correlation_popcount(E: SetSpec, f: FolnerSpec, N: int, H: int) -> Dict[Element, int]:
    """Bit-parallel kernel: big-int AND plus popcount per shift."""
    _require_abelian(f)
    if f.shape != SHAPE_INTERVAL:
        return _box_pair_correlation(E, f, N, H, naive=False)
    x, y = _z_windows(E, f, N, H)
    X = _bits_to_int(x)
    Y = _bits_to_int(y)
    return {h: (X & (Y >> (h + H))).bit_count() for h in range(-H, H + 1)}


def pair_correlation_fft(
    E: SetSpec, f: FolnerSpec, N: int, H: int, verify_samples: int = 8,
) -> Dict[Element, int]:
    """FFT cross-correlation kernel, rounded to exact integer counts.

    A random subsample of shifts is re-checked against the popcount kernel;
    disagreement means the float FFT lost exactness and is a hard error.
    """
    _require_abelian(f)
    if f.shape != SHAPE_INTERVAL:
        return _box_pair_correlation(E, f, N, H, naive=False)
    x, y = _z_windows(E, f, N, H)
    L = len(y)
    nfft = 1 << (2 * L - 1).bit_length()
    fx = np.fft.rfft(x.astype(np.float64), nfft)
    fy = np.fft.rfft(y.astype(np.float64), nfft)
    corr = np.fft.irfft(np.conj(fx) * fy, nfft)  # corr[k] = sum_n x[n] y[n+k]
    out = {h: int(round(corr[h + H])) for h in range(-H, H + 1)}
    check = pair_correlation_popcount(E, f, N, H)
    rng = np.random.default_rng(len(x) * 2654435761 % (1 << 32))
    sample = rng.choice(np.arange(-H, H + 1), size=min(verify_samples, 2 * H + 1), replace=False)
    for h in sample:
        h = int(h)
        if out[h] != check[h]:
            raise ArithmeticError("FFT correlation lost exactness; popcount disagreed")
    return out


def _box_pair_correlation(E, f, N, H, naive: bool) -> Dict[Element, int]:
    d = f.group.d
    anchor = f.anchor
    axes_x = [np.arange(a, a + N, dtype=np.int64) for a in anchor]
    axes_y = [np.arange(a - H, a + N + H, dtype=np.int64) for a in anchor]

    def grid(axes):
        grids = np.meshgrid(*axes, indexing="ij")
        coords = np.stack([g.ravel() for g in grids])
        return E.member_coords(coords).reshape([len(ax) for ax in axes])

    x = grid(axes_x)
    y = grid(axes_y)
    shifts = list(itertools.product(range(-H, H + 1), repeat=d))
    out = {}
    if naive:
        for h in shifts:
            sl = tuple(slice(H + t, H + t + N) for t in h)
            out[h] = int(np.count_nonzero(x & y[sl]))
        return out
    nfft = [1 << (2 * (N + 2 * H) - 1).bit_length()] * d
    axes = list(range(d))
    fx = np.fft.rfftn(x.astype(np.float64), nfft, axes=axes)
    fy = np.fft.rfftn(y.astype(np.float64), nfft, axes=axes)
    corr = np.fft.irfftn(np.conj(fx) * fy, nfft, axes=axes)
    for h in shifts:
        idx = tuple((H + t) % nfft[0] for t in h)
        out[h] = int(round(corr[idx]))
    # spot check against direct slicing
    for h in shifts[:: max(1, len(shifts) // 8)]:
        sl = tuple(slice(H + t, H + t + N) for t in h)
        if out[h] != int(np.count_nonzero(x & y[sl])):
            raise ArithmeticError("FFT correlation lost exactness on box kernel")
    return out


def _require_abelian(f: FolnerSpec) -> None:
    if f.shape not in (SHAPE_INTERVAL, SHAPE_BOX):
        raise ValueError("FFT path unsupported")


def _bits_to_int(bits: np.ndarray) -> int:
    return int.from_bytes(np.packbits(bits, bitorder="little").tobytes(), "little")
