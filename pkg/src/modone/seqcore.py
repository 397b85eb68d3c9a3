"""Core representations: raw real sequences and their fractional parts on the circle."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _as_float_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError("sequence values must be one-dimensional")
    if arr.size < 1:
        raise ValueError("sequence must contain at least one value")
    return arr


@dataclass(frozen=True)
class RealSequence:
    """Raw real values x_1..x_N, before any reduction modulo 1.

    Indexing is 1-based in the mathematical sense: values[0] is x_1.
    """

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _as_float_array(self.values))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def is_well_spaced(self) -> bool:
        """Exact check that consecutive values differ by at least 1."""
        if self.n == 1:
            return True
        return bool(np.all(np.diff(self.values) >= 1.0))

    def prefix(self, n: int) -> "RealSequence":
        if not 1 <= n <= self.n:
            raise ValueError(f"prefix length {n} out of range 1..{self.n}")
        return RealSequence(self.values[:n])


@dataclass(frozen=True)
class TorusPoints:
    """Fractional parts sorted ascending on [0, 1); the substrate of every statistic."""

    points: np.ndarray = field(repr=False)

    def __post_init__(self):
        arr = _as_float_array(self.points)
        if arr.size > 1 and np.any(np.diff(arr) < 0):
            raise ValueError("torus points must be sorted ascending")
        if arr[0] < 0.0 or arr[-1] >= 1.0:
            raise ValueError("torus points must lie in [0, 1)")
        object.__setattr__(self, "points", arr)

    @property
    def n(self) -> int:
        return int(self.points.size)


def frac_part(values) -> np.ndarray:
    """Fractional part mapping into [0, 1), mathematical mod (negative inputs wrap up).

    Values whose fractional part rounds to 1.0 in binary64 are mapped to 0.0 so
    the half-open invariant holds exactly.
    """
    r = np.mod(np.asarray(values, dtype=np.float64), 1.0)
    r = np.where(r >= 1.0, 0.0, r)
    return r


def frac_reduce(seq: RealSequence) -> TorusPoints:
    """Reduce a raw sequence modulo 1 and sort; ties are kept as duplicates."""
    return TorusPoints(np.sort(frac_part(seq.values)))


def circ_dist(u, v):
    """Distance on the circle: min({u-v}, 1-{u-v}), in [0, 1/2]. Vectorized."""
    d = np.mod(np.asarray(u, dtype=np.float64) - np.asarray(v, dtype=np.float64), 1.0)
    out = np.minimum(d, 1.0 - d)
    if np.ndim(out) == 0:
        return float(out)
    return out


def scale_by_alpha(seq: RealSequence, alpha: float) -> RealSequence:
    """Dilate a raw sequence by a nonzero real, as used by the metric experiments."""
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    return RealSequence(alpha * seq.values)
