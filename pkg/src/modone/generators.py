"""Sequence families: base sequences, seeded random perturbations, and
continued-fraction machinery for the dilation experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .seqcore import RealSequence

# Width functions are clamped below this index: log log n is undefined or
# negative up to e^e ~ 15.15, and the asymptotic hypotheses only constrain the tail.
DEFAULT_N_MIN = 16

# Hard cap on any evaluated width, so that the step-2 construction keeps
# consecutive gaps >= 2 - 2*0.45 = 1.1 and stays well spaced.
WIDTH_CAP = 0.45


@dataclass(frozen=True)
class ScaleFunction:
    """Perturbation half-width g(n), as a named family with one parameter.

    Families (natural logarithms throughout):
      beck:      g(n) = log n * (log log n)^(1+c) / n
      power_log: g(n) = (log n)^c / n
      constant:  g(n) = g0
      table:     g(n) = table[n-1]  (explicit per-index widths)

    Evaluation clamps the index at n_min and caps the value at WIDTH_CAP.
    """

    family: str
    c: float = 0.0
    g0: float = 0.0
    values: Optional[tuple] = None
    n_min: int = DEFAULT_N_MIN

    @classmethod
    def beck(cls, c: float, n_min: int = DEFAULT_N_MIN) -> "ScaleFunction":
        if c <= 0:
            raise ValueError("beck family needs c > 0")
        return cls(family="beck", c=c, n_min=n_min)

    @classmethod
    def power_log(cls, c: float, n_min: int = DEFAULT_N_MIN) -> "ScaleFunction":
        if c <= 0:
            raise ValueError("power_log family needs c > 0")
        return cls(family="power_log", c=c, n_min=n_min)

    @classmethod
    def constant(cls, g0: float) -> "ScaleFunction":
        if g0 < 0:
            raise ValueError("constant family needs g0 >= 0")
        return cls(family="constant", g0=g0, n_min=1)

    @classmethod
    def table(cls, values) -> "ScaleFunction":
        vals = tuple(float(v) for v in values)
        if any(v < 0 for v in vals):
            raise ValueError("table widths must be nonnegative")
        return cls(family="table", values=vals, n_min=1)

    def _formula(self, n: np.ndarray) -> np.ndarray:
        if self.family == "beck":
            ln = np.log(n)
            return ln * np.log(ln) ** (1.0 + self.c) / n
        if self.family == "power_log":
            return np.log(n) ** self.c / n
        if self.family == "constant":
            return np.full_like(n, self.g0, dtype=np.float64)
        raise ValueError(f"unknown scale family {self.family!r}")

    def eval(self, n) -> np.ndarray | float:
        """g evaluated at natural indices (vectorized); caps and clamps applied."""
        idx = np.asarray(n)
        if np.any(idx < 1):
            raise ValueError("scale function indices start at 1")
        if self.family == "table":
            assert self.values is not None
            if np.any(idx > len(self.values)):
                raise ValueError("index beyond the"
                                 f" table of length {len(self.values)}")
            out = np.asarray(self.values, dtype=np.float64)[idx - 1]
        else:
            clamped = np.maximum(np.asarray(idx, dtype=np.float64), float(self.n_min))
            out = self._formula(clamped)
        out = np.minimum(out, WIDTH_CAP)
        if np.ndim(n) == 0:
            return float(out)
        return out

    def eval_real(self, x: float) -> float:
        """Formula families extended to real arguments >= 1 (used by the
        regularity-condition checker); table rounds to the nearest index."""
        if self.family == "table":
            return float(self.eval(int(round(x))))
        xc = max(float(x), float(self.n_min))
        return float(min(self._formula(np.asarray(xc)), WIDTH_CAP))

    def __call__(self, n):
        return self.eval(n)


def eval_scale(g: ScaleFunction, n) -> float | np.ndarray:
    return g.eval(n)


@dataclass(frozen=True)
class PerturbationSpec:
    """Seeded i.i.d. shifts z_n ~ Unif[-g(n), g(n)].

    The stream is produced by a counter-based generator keyed by the seed, so
    z_n depends on (seed, n) only: prefixes agree for every N >= n, matching a
    single infinite random sequence.
    """

    seed: int
    scale: ScaleFunction

    def draw(self, n: int) -> np.ndarray:
        rng = np.random.Generator(np.random.Philox(key=self.seed))
        u = rng.random(n)
        g = np.asarray(self.scale.eval(np.arange(1, n + 1)), dtype=np.float64)
        return u * (2.0 * g) - g


def perturb(base: RealSequence, spec: PerturbationSpec) -> RealSequence:
    """x_n + z_n with z_n ~ Unif[-g(n), g(n)], determined by (seed, n)."""
    z = spec.draw(base.n)
    return RealSequence(base.values + z)


def arithmetic_sequence(alpha: float, n: int) -> RealSequence:
    if alpha == 0:
        raise ValueError("alpha must be nonzero")
    if n < 1:
        raise ValueError("need n >= 1")
    return RealSequence(alpha * np.arange(1, n + 1, dtype=np.float64))


def power_sequence(theta: float, n: int) -> RealSequence:
    if theta <= 0:
        raise ValueError("need theta > 0")
    if n < 1:
        raise ValueError("need n >= 1")
    return RealSequence(np.arange(1, n + 1, dtype=np.float64) ** theta)


def van_der_corput(base: int, n: int) -> RealSequence:
    """Radical-inverse sequence in the given base, already inside [0, 1)."""
    if base < 2:
        raise ValueError("need base >= 2")
    if n < 1:
        raise ValueError("need n >= 1")
    out = np.empty(n, dtype=np.float64)
    for i in range(1, n + 1):
        x = 0.0
        denom = 1.0
        k = i
        while k > 0:
            denom *= base
            x += (k % base) / denom
            k //= base
        out[i - 1] = x
    return RealSequence(out)


def gen_base(kind: str, n: int, *, alpha: float = None, theta: float = None,
             base: int = None) -> RealSequence:
    """Dispatcher over the named base families."""
    if kind == "arithmetic":
        return arithmetic_sequence(alpha, n)
    if kind == "power":
        return power_sequence(theta, n)
    if kind == "van_der_corput":
        return van_der_corput(base, n)
    raise ValueError(f"unknown base kind {kind!r}")


def gen_theorem1(c: float, n: int, seed: int,
                 scale: Optional[ScaleFunction] = None) -> RealSequence:
    """Well-spaced construction: x_n = 2n + z_n with the beck width family.

    The width cap guarantees gaps of at least 2 - 2*0.45 = 1.1, so the output
    is well spaced for every seed. `scale` overrides the width family (used by
    degenerate-width tests).
    """
    base = RealSequence(2.0 * np.arange(1, n + 1, dtype=np.float64))
    g = scale if scale is not None else ScaleFunction.beck(c)
    return perturb(base, PerturbationSpec(seed=seed, scale=g))


def gen_converse(c: float, n: int, seed: int,
                 scale: Optional[ScaleFunction] = None) -> RealSequence:
    """Counterexample construction: x_n = n + z_n with power_log widths, 0 < c <= 1/2."""
    if not 0 < c <= 0.5:
        raise ValueError("need 0 < c <= 1/2")
    base = RealSequence(np.arange(1, n + 1, dtype=np.float64))
    g = scale if scale is not None else ScaleFunction.power_log(c)
    return perturb(base, PerturbationSpec(seed=seed, scale=g))


@dataclass(frozen=True)
class Convergent:
    p: int
    q: int
    error: float


def convergents(alpha: float, q_max: int, tol: float = 1e-12) -> list[Convergent]:
    """Continued-fraction convergents p/q of alpha with q <= q_max, q increasing.

    Quotients within `tol` of an integer are snapped to it and the expansion
    stops there (remainder treated as 0); a binary64 input that merely sits a
    few ulps away from a small rational therefore expands like that rational.
    """
    if q_max < 1:
        raise ValueError("need q_max >= 1")
    alpha = float(alpha)
    p_prev, q_prev = 1, 0
    x = alpha
    ai = math.floor(x)
    rem = x - ai
    if rem > 1.0 - tol:
        ai += 1
        rem = 0.0
    p_cur, q_cur = ai, 1
    out = [Convergent(p_cur, q_cur, abs(alpha - p_cur / q_cur))]
    while rem > tol:
        x = 1.0 / rem
        ai = math.floor(x)
        rem = x - ai
        if rem > 1.0 - tol:
            ai += 1
            rem = 0.0
        p_nxt = ai * p_cur + p_prev
        q_nxt = ai * q_cur + q_prev
        if q_nxt > q_max:
            break
        out.append(Convergent(p_nxt, q_nxt, abs(alpha - p_nxt / q_nxt)))
        p_prev, q_prev, p_cur, q_cur = p_cur, q_cur, p_nxt, q_nxt
    return out


def _cf_value(quotients) -> float:
    x = Fraction(quotients[-1])
    for a in reversed(quotients[:-1]):
        x = a + 1 / x
    return float(x)


# Default dilation value for the counterexample experiments. Built from an
# explicit continued fraction with two engineered large partial quotients
# (29 and 40), so the convergents q = 22661 and q = 670226 both satisfy the
# quality bound |alpha - p/q| <= 1/(q^2 log q log log q) that the
# rational-cluster mechanism needs, at denominators small enough to simulate;
# the multiples k*q of each stay resonant inside the window at its schedule
# size because the following quotient exceeds log q * (log log q)^(2/3). The
# small leading value keeps the dilated perturbation widths below the cluster
# spacing at those sizes, which is what makes the excess visible against the
# self-pair deficit.
LIOUVILLE_ALPHA = _cf_value(
    [0, 11, 9, 1, 2, 1, 1, 3, 1, 2, 1, 1, 29, 40, 2, 1, 1, 3, 1, 2, 1, 1, 4]
)

GOLDEN_ALPHA = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class ConverseSchedule:
    """Evaluation sizes N = floor(q sqrt(log q) (log log q)^(1/3)) for the
    largest usable convergent denominators of alpha."""

    n_values: tuple
    q_values: tuple
    complete: bool  # False when fewer than the requested count were available


def schedule_size(q: int) -> int:
    if q < 16:
        raise ValueError("schedule needs q >= 16")
    return math.floor(q * math.sqrt(math.log(q)) * (math.log(math.log(q))) ** (1.0 / 3.0))


def converse_schedule(alpha: float, count: int, q_max: int = 1_000_000) -> ConverseSchedule:
    """Sizes at which the counterexample statistic is evaluated.

    Takes the `count` largest convergent denominators q >= 16 with q <= q_max;
    if fewer exist the schedule is returned incomplete rather than failing.
    """
    if count < 1:
        raise ValueError("need count >= 1")
    qs = [cv.q for cv in convergents(alpha, q_max) if cv.q >= 16]
    chosen = sorted(qs)[-count:]
    return ConverseSchedule(
        n_values=tuple(schedule_size(q) for q in chosen),
        q_values=tuple(chosen),
        complete=len(chosen) == count,
    )
