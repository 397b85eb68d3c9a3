"""Density of the perturbed point process and the expected window-count
function, with exact sweep integration over their breakpoints.

For a base sequence x_n (taken modulo 1) and width function g, the density is

    rho(x) = (1/N) sum_n (1/(2 g(n))) * 1(circ_dist(x, {x_n}) <= g(n))

a piecewise-constant function on the circle with at most 2N breakpoints, and

    h_s(x) = sum_n |arc(x_n, g(n)) inter arc(x, s/N)| / (2 g(n))

is continuous piecewise linear with at most 4N breakpoints. Arcs wrap around
the circle throughout, which is the only convention making the sweep integral
of rho exactly 1 for points near 0. Both integrands are piecewise polynomial
of degree <= 1 between breakpoints, so every integral here is computed
exactly (up to rounding) rather than by quadrature.

Sweep detail: event positions are mapped into (0, 1] (an event at exactly 0
is the same circle point as 1), and the value of a piecewise-constant
quantity on the first segment is taken at the segment midpoint; evaluating
at a breakpoint itself would pick up the closed-boundary convention and
corrupt lattice configurations whose box edges land exactly on 0.
"""

from __future__ import annotations

import numpy as np

from .generators import ScaleFunction
from .seqcore import RealSequence, circ_dist, frac_part


def _boxes(base: RealSequence, scale: ScaleFunction):
    centers = frac_part(base.values)
    widths = np.asarray(scale.eval(np.arange(1, base.n + 1)), dtype=np.float64)
    if np.any(widths <= 0):
        raise ValueError("density machinery needs strictly positive widths")
    return centers, widths


def perturbation_density(base: RealSequence, scale: ScaleFunction, x) -> np.ndarray | float:
    """rho evaluated pointwise (vectorized over x); arc membership is closed."""
    centers, widths = _boxes(base, scale)
    n = base.n
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    heights = 1.0 / (2.0 * widths * n)
    out = np.empty(xs.size, dtype=np.float64)
    for i, xi in enumerate(xs):
        d = circ_dist(xi, centers)
        out[i] = float(np.sum(heights[d <= widths]))
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def _window_slope(centers, widths, rates, x: float, w: float) -> float:
    # dh/dx = sum_n rate_n * ([x + w in A_n] - [x - w in A_n])
    in_plus = circ_dist(x + w, centers) <= widths
    in_minus = circ_dist(x - w, centers) <= widths
    return float(np.sum(rates[in_plus]) - np.sum(rates[in_minus]))


def expected_window_count(base: RealSequence, scale: ScaleFunction,
                          s: float, x) -> np.ndarray | float:
    """h_s evaluated pointwise: summed overlap of each perturbation arc with
    the window arc of half-width s/N around x, weighted by 1/(2 g(n))."""
    if s <= 0:
        raise ValueError("need s > 0")
    n = base.n
    w = s / n
    if w >= 0.5:
        raise ValueError("window s/N must stay below half the circle")
    centers, widths = _boxes(base, scale)
    xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
    out = np.empty(xs.size, dtype=np.float64)
    for i, xi in enumerate(xs):
        d = circ_dist(xi, centers)
        near = np.maximum(0.0, np.minimum(np.minimum(2.0 * widths, 2.0 * w),
                                          widths + w - d))
        # reaching around the far side of the circle; never saturates because
        # g + w + d < 1 + min(g, w) for g <= 0.45, w < 0.5
        far = np.maximum(0.0, widths + w - (1.0 - d))
        out[i] = float(np.sum((near + far) / (2.0 * widths)))
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def _event_positions(raw: np.ndarray) -> np.ndarray:
    pos = frac_part(raw)
    return np.where(pos == 0.0, 1.0, pos)


def _first_midpoint(pos_sorted: np.ndarray) -> float:
    return 0.5 * float(pos_sorted[0]) if pos_sorted.size else 0.5


def sweep_density_integrals(base: RealSequence, scale: ScaleFunction):
    """Exact (integral of rho, integral of rho^2) over the circle."""
    centers, widths = _boxes(base, scale)
    n = base.n
    heights = 1.0 / (2.0 * widths * n)
    pos = np.concatenate([_event_positions(centers - widths),
                          _event_positions(centers + widths)])
    delta = np.concatenate([heights, -heights])
    order = np.argsort(pos, kind="stable")
    pos, delta = pos[order], delta[order]

    rho0 = float(perturbation_density(base, scale, _first_midpoint(pos)))
    edges = np.concatenate([[0.0], pos])
    lens = np.diff(np.concatenate([edges, [1.0]]))
    vals = rho0 + np.concatenate([[0.0], np.cumsum(delta)])
    total = float(np.sum(vals * lens))
    total_sq = float(np.sum(vals * vals * lens))
    return total, total_sq


def density_l2(base: RealSequence, scale: ScaleFunction) -> float:
    """Exact integral of rho^2; always >= 1 by Cauchy-Schwarz with
    integral(rho) = 1."""
    return sweep_density_integrals(base, scale)[1]


def expected_pair_correlation(base: RealSequence, scale: ScaleFunction,
                              s: float) -> tuple[float, float]:
    """Exact integral of h_s * rho over the circle, plus the analytic bound
    s/(N g(N)) on the self-pair correction that separates this integral from
    the true expectation of the pair statistic.

    rho is piecewise constant and h_s continuous piecewise linear, so on each
    segment between breakpoints the product integrates exactly as
    rho * (h_left + h_right)/2 * length.
    """
    if s <= 0:
        raise ValueError("need s > 0")
    n = base.n
    w = s / n
    if w >= 0.5:
        raise ValueError("window s/N must stay below half the circle")
    centers, widths = _boxes(base, scale)
    heights = 1.0 / (2.0 * widths * n)
    rates = 1.0 / (2.0 * widths)

    rho_pos = np.concatenate([_event_positions(centers - widths),
                              _event_positions(centers + widths)])
    rho_delta = np.concatenate([heights, -heights])
    h_pos = np.concatenate([
        _event_positions(centers - widths - w),
        _event_positions(centers - widths + w),
        _event_positions(centers + widths - w),
        _event_positions(centers + widths + w),
    ])
    h_delta = np.concatenate([rates, -rates, -rates, rates])

    pos = np.concatenate([rho_pos, h_pos])
    is_rho = np.concatenate([np.ones(rho_pos.size, bool), np.zeros(h_pos.size, bool)])
    deltas = np.concatenate([rho_delta, h_delta])
    order = np.argsort(pos, kind="stable")
    pos, is_rho, deltas = pos[order], is_rho[order], deltas[order]

    mid0 = _first_midpoint(pos)
    rho_cur = float(perturbation_density(base, scale, mid0))
    slope_cur = _window_slope(centers, widths, rates, mid0, w)
    h_cur = float(expected_window_count(base, scale, s, 0.0))  # h is continuous

    integral = 0.0
    x_prev = 0.0
    for i in range(pos.size):
        seg = float(pos[i]) - x_prev
        if seg > 0:
            h_next = h_cur + slope_cur * seg
            integral += rho_cur * 0.5 * (h_cur + h_next) * seg
            h_cur = h_next
            x_prev = float(pos[i])
        if is_rho[i]:
            rho_cur += deltas[i]
        else:
            slope_cur += deltas[i]
    seg = 1.0 - x_prev
    if seg > 0:
        integral += rho_cur * (h_cur + 0.5 * slope_cur * seg) * seg

    g_n = float(scale.eval(n))
    error_bound = s / (n * g_n)
    return float(integral), error_bound
