"""Local statistics of points on the circle: pair and k-level correlation,
discrepancy, additive energy, and the gap distribution.

Counting conventions (deliberate, measure-zero for randomized inputs): the
pair statistic uses a strict < threshold on circle distance; k-level windows
are half-open [lo, hi); the energy count uses strict |.| < gamma over ordered
quadruples; discrepancy uses closed intervals including degenerate ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .seqcore import RealSequence, TorusPoints, frac_part, frac_reduce, scale_by_alpha

ENERGY_DEFAULT_CAP = 8192


# ---------------------------------------------------------------------------
# pair correlation


def pair_correlation(pts: TorusPoints, s: float) -> float:
    """(1/N) * #{ordered pairs m != n with circle distance |x_m - x_n| < s/N}.

    Sorted sliding window over the extended circle, O(N log N).
    """
    if s <= 0:
        raise ValueError("need s > 0")
    n = pts.n
    w = s / n
    if w >= 0.5:
        raise ValueError("window s/N must be smaller than half the circle")
    y = pts.points
    y2 = np.concatenate([y, y + 1.0])
    # for each i, forward neighbours j with y2[j] - y[i] < w; each unordered
    # pair is seen exactly once because w < 1/2
    hi = np.searchsorted(y2, y + w, side="left")
    unordered = int(np.sum(np.maximum(hi - np.arange(1, n + 1), 0)))
    return 2.0 * unordered / n


def pair_correlation_count(pts: TorusPoints, s: float) -> int:
    """Exact ordered-pair count (the statistic before division by N)."""
    n = pts.n
    return round(pair_correlation(pts, s) * n)


# ---------------------------------------------------------------------------
# k-level correlation


@dataclass(frozen=True)
class CorrelationWindow:
    """Difference windows for the k-tuple statistic: k-1 intervals, each
    applied to x_{a_1} - x_{a_j} at scale 1/N, taken modulo 1."""

    k: int
    intervals: tuple

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("need k >= 2")
        ivs = tuple((float(lo), float(hi)) for lo, hi in self.intervals)
        if len(ivs) != self.k - 1:
            raise ValueError(f"expected {self.k - 1} intervals, got {len(ivs)}")
        for lo, hi in ivs:
            if not lo < hi:
                raise ValueError("each window needs lo < hi")
        object.__setattr__(self, "intervals", ivs)

    @classmethod
    def pair(cls, s: float) -> "CorrelationWindow":
        if s <= 0:
            raise ValueError("need s > 0")
        return cls(k=2, intervals=((-s, s),))

    @property
    def poisson_target(self) -> float:
        """Limit value for i.i.d. uniform points: the product of window lengths."""
        out = 1.0
        for lo, hi in self.intervals:
            out *= hi - lo
        return out

    def describe(self) -> str:
        return f"k={self.k}:" + ",".join(f"{lo:g}:{hi:g}" for lo, hi in self.intervals)


def _arc_counts(y2: np.ndarray, centers: np.ndarray,
                lo: float, hi: float, n: int):
    """Counts of points in the half-open difference window [lo/N, hi/N) pulled
    back around each center: x in (v - hi/N, v - lo/N] on the circle."""
    width = (hi - lo) / n
    start = np.mod(centers - hi / n, 1.0)
    lo_idx = np.searchsorted(y2, start, side="right")
    hi_idx = np.searchsorted(y2, start + width, side="right")
    return lo_idx, hi_idx


def _window_contains_zero(lo: float, hi: float) -> bool:
    # frac(0) = 0 lies in [lo/N, hi/N) mod 1 iff lo <= 0 < hi (widths < N/2)
    return lo <= 0.0 < hi


def k_level_correlation(pts: TorusPoints, window: CorrelationWindow) -> float:
    """(1/N) * #{k-tuples of distinct indices whose differences from the first
    coordinate fall in the prescribed windows modulo 1}.

    k = 3 runs fully vectorized (per-anchor counts with the diagonal pairs
    removed); larger k backtracks over the per-coordinate candidate sets.
    """
    n = pts.n
    k = window.k
    if n < k:
        raise ValueError(f"need at least k={k} points")
    for lo, hi in window.intervals:
        if (hi - lo) / n >= 0.5:
            raise ValueError("window width per coordinate must stay below half the circle")
    y = pts.points
    y2 = np.concatenate([y, y + 1.0])

    if k == 2:
        lo, hi = window.intervals[0]
        lo_idx, hi_idx = _arc_counts(y2, y, lo, hi, n)
        counts = hi_idx - lo_idx
        if _window_contains_zero(lo, hi):
            counts = counts - 1
        return float(np.sum(counts)) / n

    if k == 3:
        (lo1, hi1), (lo2, hi2) = window.intervals
        lo_a, hi_a = _arc_counts(y2, y, lo1, hi1, n)
        lo_b, hi_b = _arc_counts(y2, y, lo2, hi2, n)
        c1 = (hi_a - lo_a) - (1 if _window_contains_zero(lo1, hi1) else 0)
        c2 = (hi_b - lo_b) - (1 if _window_contains_zero(lo2, hi2) else 0)
        # overlap of the two difference windows, for the diagonal a_2 = a_3
        olo, ohi = max(lo1, lo2), min(hi1, hi2)
        if olo < ohi:
            lo_c, hi_c = _arc_counts(y2, y, olo, ohi, n)
            c12 = (hi_c - lo_c) - (1 if _window_contains_zero(olo, ohi) else 0)
        else:
            c12 = np.zeros(n, dtype=np.int64)
        total = int(np.sum(c1.astype(np.int64) * c2.astype(np.int64) - c12))
        return total / n

    # generic k: candidate index lists per coordinate, then a distinctness
    # backtrack; candidate sets are O(1) for Poissonian data
    slot_ranges = []
    for lo, hi in window.intervals:
        lo_idx, hi_idx = _arc_counts(y2, y, lo, hi, n)
        slot_ranges.append((lo_idx, hi_idx, _window_contains_zero(lo, hi)))

    total = 0
    for a1 in range(n):
        cand = []
        ok = True
        for lo_idx, hi_idx, selfhit in slot_ranges:
            idx = [int(j % n) for j in range(lo_idx[a1], hi_idx[a1])]
            if selfhit:
                idx = [j for j in idx if j != a1]
            if not idx:
                ok = False
                break
            cand.append(idx)
        if not ok:
            continue
        total += _count_distinct_assignments(cand, a1)
    return total / n


def _count_distinct_assignments(cand: list, anchor: int) -> int:
    used = {anchor}
    km1 = len(cand)

    def rec(slot: int) -> int:
        if slot == km1:
            return 1
        acc = 0
        for j in cand[slot]:
            if j in used:
                continue
            used.add(j)
            acc += rec(slot + 1)
            used.remove(j)
        return acc

    return rec(0)


# ---------------------------------------------------------------------------
# discrepancy


def discrepancy(pts: TorusPoints) -> tuple[float, float]:
    """Exact (D_N, D*_N) from the sorted-order formulas, closed-interval
    convention (degenerate intervals allowed, so D_N >= 1/N)."""
    y = pts.points
    n = pts.n
    i = np.arange(1, n + 1, dtype=np.float64)
    over = np.max(i / n - y)          # interval ending just below a point
    under = np.max(y - (i - 1.0) / n)  # interval starting just above one
    d_star = float(max(np.max(np.maximum(i / n - y, y - (i - 1.0) / n)), 0.0))
    d = float(max(over, 0.0) + max(under, 0.0))
    return d, d_star


@dataclass(frozen=True)
class DiscrepancyProfile:
    """Per-prefix discrepancy of a raw sequence reduced modulo 1."""

    n_grid: np.ndarray
    d_values: np.ndarray
    star_values: np.ndarray
    m_value: float    # max over the grid of n * D_n
    exact: bool       # True when the grid visited every prefix

    def running_max_nd(self) -> np.ndarray:
        return np.maximum.accumulate(self.n_grid * self.d_values)


def _geometric_grid(n: int, ratio: float) -> np.ndarray:
    if ratio <= 1.0:
        raise ValueError("need ratio > 1")
    pts = []
    x = 1.0
    while True:
        v = int(math.ceil(x))
        if v > n:
            break
        if not pts or v != pts[-1]:
            pts.append(v)
        x *= ratio
    if pts[-1] != n:
        pts.append(n)
    return np.asarray(pts, dtype=np.int64)


def discrepancy_profile(seq: RealSequence, grid: str = "full",
                        ratio: float = 1.25) -> DiscrepancyProfile:
    """D_n and D*_n for prefixes of the sequence (fractional parts).

    grid="full" visits every prefix via incremental sorted insertion (O(N^2)
    total); grid="geometric" visits n = ceil(ratio^j) plus N itself, and the
    resulting max of n*D_n is then only a lower envelope (exact=False).
    """
    n = seq.n
    fracs = frac_part(seq.values)
    if grid == "full":
        n_grid = np.arange(1, n + 1, dtype=np.int64)
        d_vals = np.empty(n, dtype=np.float64)
        s_vals = np.empty(n, dtype=np.float64)
        y = np.empty(0, dtype=np.float64)
        for m in range(1, n + 1):
            pos = int(np.searchsorted(y, fracs[m - 1]))
            y = np.insert(y, pos, fracs[m - 1])
            i = np.arange(1, m + 1, dtype=np.float64)
            over = np.max(i / m - y)
            under = np.max(y - (i - 1.0) / m)
            d_vals[m - 1] = max(over, 0.0) + max(under, 0.0)
            s_vals[m - 1] = max(np.max(np.maximum(i / m - y, y - (i - 1.0) / m)), 0.0)
    elif grid == "geometric":
        n_grid = _geometric_grid(n, ratio)
        d_vals = np.empty(n_grid.size, dtype=np.float64)
        s_vals = np.empty(n_grid.size, dtype=np.float64)
        for j, m in enumerate(n_grid):
            pts = TorusPoints(np.sort(fracs[:m]))
            d_vals[j], s_vals[j] = discrepancy(pts)
    else:
        raise ValueError("grid must be 'full' or 'geometric'")
    m_value = float(np.max(n_grid * d_vals))
    return DiscrepancyProfile(n_grid=n_grid, d_values=d_vals, star_values=s_vals,
                              m_value=m_value, exact=(grid == "full"))


# ---------------------------------------------------------------------------
# additive energy


@dataclass(frozen=True)
class EnergyResult:
    count: int
    gamma: float
    n: int

    @property
    def normalized(self) -> float:
        return self.count / self.n**3


def additive_energy(seq: RealSequence, gamma: float,
                    cap: int = ENERGY_DEFAULT_CAP) -> EnergyResult:
    """#{ordered quadruples (a,b,c,d) with |x_a + x_b - x_c - x_d| < gamma}.

    Materializes the N^2 pairwise sums, sorts them, and counts close pairs of
    sums with a two-sided sorted scan; the diagonal (c,d) = (a,b) makes the
    count at least N^2 automatically.
    """
    if gamma <= 0:
        raise ValueError("need gamma > 0")
    n = seq.n
    if n > cap:
        raise ValueError(
            f"additive_energy holds all N^2 pairwise sums in memory; N={n} exceeds "
            f"the cap {cap} (pass a larger cap explicitly to override)")
    sums = np.add.outer(seq.values, seq.values).ravel()
    sums.sort()
    count = 0
    block = 1 << 20
    for start in range(0, sums.size, block):
        chunk = sums[start : start + block]
        hi = np.searchsorted(sums, chunk + gamma, side="left")
        lo = np.searchsorted(sums, chunk - gamma, side="right")
        count += int(np.sum(hi.astype(np.int64) - lo.astype(np.int64)))
    return EnergyResult(count=count, gamma=float(gamma), n=n)


# ---------------------------------------------------------------------------
# gap distribution


@dataclass(frozen=True)
class GapDistribution:
    """Circular neighbour gaps scaled by N, with the exact KS distance of
    their empirical law from the unit exponential."""

    scaled_gaps: np.ndarray   # sorted ascending, length N, sums to N
    ks_vs_exponential: float

    @property
    def n(self) -> int:
        return int(self.scaled_gaps.size)

    def ecdf(self, x) -> np.ndarray | float:
        pos = np.searchsorted(self.scaled_gaps, np.asarray(x), side="right")
        out = pos / self.n
        if np.ndim(x) == 0:
            return float(out)
        return out


def gap_distribution(pts: TorusPoints) -> GapDistribution:
    """All N circular gaps (including the wrap-around one), scaled by N."""
    n = pts.n
    if n < 2:
        raise ValueError("need at least 2 points for gaps")
    y = pts.points
    gaps = np.empty(n, dtype=np.float64)
    gaps[:-1] = np.diff(y)
    gaps[-1] = 1.0 - y[-1] + y[0]
    scaled = np.sort(gaps * n)
    # exact sup |ECDF - (1 - e^-x)| over the jump points
    cdf = 1.0 - np.exp(-scaled)
    i = np.arange(1, n + 1, dtype=np.float64)
    ks = float(np.max(np.maximum(np.abs(i / n - cdf), np.abs((i - 1.0) / n - cdf))))
    return GapDistribution(scaled_gaps=scaled, ks_vs_exponential=ks)


# ---------------------------------------------------------------------------


def reduce_scaled(seq: RealSequence, alpha: float = 1.0) -> TorusPoints:
    """Convenience: dilate by alpha and reduce modulo 1."""
    if alpha == 1.0:
        return frac_reduce(seq)
    return frac_reduce(scale_by_alpha(seq, alpha))
