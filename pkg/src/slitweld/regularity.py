"""Boundary regularity functionals for circle functions and weldings.

Double integrals against the chordal kernel |z1 - z2|^2 use midpoint tensor
quadrature at three dyadic levels with Richardson extrapolation; disagreement
between the two extrapolants signals an unconverged (possibly divergent)
integral and raises AccuracyError in strict mode.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .arcfun import ArcFunction, ArcHomeomorphism
from .circle import TWO_PI, CirclePoint, MobiusCircleMap, OrientedArc, arc, mobius_from_triple
from .errors import AccuracyError, ValidationError
from .loewner import DrivingTerm
from .welding import Welding, welding_log_derivative

__all__ = [
    "h_half_seminorm",
    "h_half_seminorm_detail",
    "wp_cross_condition",
    "vmo_modulus",
    "bmo_norm",
    "qs_constant",
    "mr_constant",
    "loewner_energy",
    "lip_half_norm",
]

# agreement is measured against max(|value|, floor): energies this small are
# noise-dominated (sampled data carries ~1e-6 node error) and already below
# every threshold of interest, so relative refinement cannot and need not hold
_AGREE_FLOOR = 1e-8


def _resolve(u):
    """Evaluation callable and natural domain of a sampled or closed-form u."""
    if isinstance(u, ArcFunction):
        return u.eval_angle, u.arc
    if callable(u):
        return (lambda th: np.asarray(u(th), dtype=float)), None
    raise ValidationError("u must be an ArcFunction or a callable of angles")


def _same_arc(a: OrientedArc | None, b: OrientedArc | None) -> bool:
    if a is None or b is None:
        return a is b or (a is None and b is None)
    return (abs(a.start.angle - b.start.angle) < 1e-12
            and abs(a.end.angle - b.end.angle) < 1e-12)


def _midpoints(a: OrientedArc | None, m: int):
    if a is None:
        start, span = 0.0, TWO_PI
    else:
        start, span = a.start.angle, a.length
    h = span / m
    return start + (np.arange(m) + 0.5) * h, h


def _tensor_sum(f, I, J, m, same, exclude=None) -> float:
    th1, h1 = _midpoints(I, m)
    th2, h2 = _midpoints(J, m)
    u1 = f(th1)
    u2 = u1 if same else f(th2)
    diff = u1[:, None] - u2[None, :]
    kern = 4.0 * np.sin(0.5 * (th1[:, None] - th2[None, :])) ** 2
    mask = np.ones((m, m))
    if same:
        np.fill_diagonal(mask, 0.0)   # the only colliding midpoints
    if exclude is not None:
        mask *= exclude(th1, th2)
    with np.errstate(divide="ignore", invalid="ignore"):
        cells = np.where(mask > 0.0, diff * diff / kern, 0.0)
    return float(np.sum(cells) * h1 * h2)


def _richardson(q, m: int, agree_tol: float, strict: bool):
    levels = (q(m), q(2 * m), q(4 * m))
    r12 = 2.0 * levels[1] - levels[0]
    r23 = 2.0 * levels[2] - levels[1]
    agreement = abs(r23 - r12) / max(abs(r23), _AGREE_FLOOR)
    if strict and agreement > agree_tol:
        raise AccuracyError(r12, r23)
    return r23, levels, (r12, r23), agreement


def h_half_seminorm_detail(u, I: OrientedArc | None = None, J: OrientedArc | None = None,
                           normalization: str = "two_pi", m: int = 256,
                           agree_tol: float = 0.01, strict: bool = True) -> dict:
    """Chordal-kernel energy of u over I x J with full convergence data.

    With I == J the reported value is the squared seminorm; h_half_seminorm
    takes the square root in that case.
    """
    if normalization not in ("two_pi", "raw"):
        raise ValidationError("normalization must be 'two_pi' or 'raw'")
    if m < 8:
        raise ValidationError("base quadrature level must be at least 8")
    f, dom = _resolve(u)
    I = dom if I is None else I
    J = I if J is None else J
    same = _same_arc(I, J)
    value, levels, extrap, agreement = _richardson(
        lambda mm: _tensor_sum(f, I, J, mm, same), m, agree_tol, strict)
    scale = 1.0 / (TWO_PI * TWO_PI) if normalization == "two_pi" else 1.0
    return {
        "value": value * scale,
        "levels": tuple(x * scale for x in levels),
        "extrapolants": tuple(x * scale for x in extrap),
        "agreement": agreement,
        "same_arc": same,
        "normalization": normalization,
        "base_level": m,
    }


def h_half_seminorm(u, I: OrientedArc | None = None, J: OrientedArc | None = None,
                    normalization: str = "two_pi", m: int = 256,
                    agree_tol: float = 0.01, strict: bool = True) -> float:
    """Half-order seminorm of u on I (I == J), or the cross energy over I x J.

    With the two_pi normalization on the full circle the squared seminorm of
    sum a_n e^{i n theta} equals sum |n| |a_n|^2.
    """
    d = h_half_seminorm_detail(u, I, J, normalization, m, agree_tol, strict)
    if d["same_arc"]:
        return math.sqrt(max(d["value"], 0.0))
    return d["value"]


def wp_cross_condition(w: Welding, tau: MobiusCircleMap | None = None,
                       m: int = 256, include_alpha_cells: bool = False,
                       agree_tol: float = 0.02, strict: bool = False) -> dict:
    """Cross energy of log |(tau^-1 phi tau)'| between its domain and image arcs.

    The conjugated welding chi = tau^-1 phi tau carries the quarter arc from 1
    to i onto the quarter arc from -i to 1; the integral couples log |chi'| on
    the first arc to the second through the chordal kernel and is finite only
    when log |chi'| vanishes fast enough at the shared endpoint 1.  Cells next
    to i and -i rest on one-sided derivative data and are excluded unless
    include_alpha_cells is set; their contribution is reported separately.
    """
    if tau is None:
        tau = mobius_from_triple(
            (CirclePoint(-0.5 * math.pi), CirclePoint(0.0), CirclePoint(0.5 * math.pi)),
            (w.alpha_minus, CirclePoint(0.0), w.alpha_plus))
    tau_inv = tau.inverse()
    phi_ld = welding_log_derivative(w)

    def log_chi_deriv(th):
        a = tau.apply_angle(th)
        b = w.apply_angle(a)
        return tau.log_deriv_angle(th) + phi_ld.eval_angle(a) + tau_inv.log_deriv_angle(b)

    A1 = arc(0.0, 0.5 * math.pi)
    A2 = arc(-0.5 * math.pi, 0.0)
    delta = 0.5 * math.pi / m   # one base-level cell at each alpha endpoint

    def q_all(mm):
        th1, h1 = _midpoints(A1, mm)
        th2, h2 = _midpoints(A2, mm)
        u = log_chi_deriv(th1)
        kern = 4.0 * np.sin(0.5 * (th1[:, None] - th2[None, :])) ** 2
        cells = (u * u)[:, None] / kern * (h1 * h2)
        near1 = th1 > 0.5 * math.pi - delta
        near2 = th2 < -0.5 * math.pi + delta
        total = float(np.sum(cells))
        alpha_mass = float(np.sum(cells[near1, :]) + np.sum(cells[:, near2])
                           - np.sum(cells[np.ix_(near1, near2)]))
        return total, alpha_mass

    def q(mm):
        total, alpha_mass = q_all(mm)
        return total if include_alpha_cells else total - alpha_mass

    value, levels, extrap, agreement = _richardson(q, m, agree_tol, strict)
    _, alpha_mass = q_all(4 * m)
    return {
        "value": value,
        "levels": levels,
        "extrapolants": extrap,
        "agreement": agreement,
        "converged": agreement <= agree_tol,
        "alpha_cell_mass": alpha_mass,
        "alpha_cells_included": include_alpha_cells,
        "base_level": m,
    }


def _window_setup(u, samples: int):
    f, dom = _resolve(u)
    if dom is None:
        span = TWO_PI
        start = 0.0
    else:
        span = dom.length
        start = dom.start.angle
    h = span / samples
    vals = f(start + (np.arange(samples) + 0.5) * h)
    return vals, span, h, dom is None


def vmo_modulus(u, scale: float, samples: int = 2048) -> float:
    """Largest mean oscillation over windows of the given arc length."""
    vals, span, h, periodic = _window_setup(u, samples)
    if not 0.0 < scale <= span + 1e-12:
        raise ValidationError("window scale must lie in (0, span]")
    wlen = int(np.clip(round(scale / h), 2, samples))
    if periodic:
        vals = np.concatenate((vals, vals[: wlen - 1]))
    windows = sliding_window_view(vals, wlen)
    means = windows.mean(axis=1)
    osc = np.abs(windows - means[:, None]).mean(axis=1)
    return float(osc.max())


def bmo_norm(u, samples: int = 2048, min_window: int = 8) -> float:
    """Supremum of vmo_modulus over dyadic window scales."""
    _, span, h, _ = _window_setup(u, samples)
    best = 0.0
    scale = span
    while scale / h >= min_window:
        best = max(best, vmo_modulus(u, scale, samples))
        scale *= 0.5
    return best


def qs_constant(h: ArcHomeomorphism, max_depth: int = 9, positions: int = 256) -> float:
    """Quasisymmetry constant over symmetric triples at dyadic separations.

    Compares chordal image lengths of adjacent equal-length arcs; a degenerate
    image chord yields inf.
    """
    L = h.domain.length
    worst = 1.0
    for j in range(1, max_depth + 1):
        delta = L / 2.0 ** j
        inner = L - 2.0 * delta
        if inner < 0.0:
            continue
        ys = np.linspace(delta, L - delta, positions) if inner > 0 else np.array([delta])
        left = h.eval_offset(ys - delta)
        mid = h.eval_offset(ys)
        right = h.eval_offset(ys + delta)
        c1 = 2.0 * np.abs(np.sin(0.5 * (right - mid)))
        c2 = 2.0 * np.abs(np.sin(0.5 * (mid - left)))
        if np.any(c1 <= 0.0) or np.any(c2 <= 0.0):
            return math.inf
        r = c1 / c2
        worst = max(worst, float(r.max()), float((1.0 / r).max()))
    return worst


def mr_constant(w: Welding) -> float:
    """Worst chordal imbalance of welded pairs around the base point."""
    tp = w.theta_plus[1:]
    tm = w.theta_minus[1:]
    cp = np.sin(0.5 * tp)
    cm = np.sin(0.5 * np.abs(tm))
    if np.any(cp <= 0.0) or np.any(cm <= 0.0):
        return math.inf
    r = cm / cp
    return max(float(r.max()), float((1.0 / r).max()))


def loewner_energy(d: DrivingTerm) -> float:
    """Dirichlet energy of the driving term, exact for its linear pieces."""
    dt = np.diff(d.grid)
    ds = np.diff(d.sigma)
    return float(0.5 * np.sum(ds * ds / dt))


def lip_half_norm(d: DrivingTerm, dense_limit: int = 4096) -> float:
    """Largest chordal increment of e^{i sigma} against the square-root gap.

    All node gaps are scanned when the grid is small; larger grids fall back
    to dyadic index gaps.
    """
    t = d.grid
    s = d.sigma
    n = t.size
    if n < 2:
        return 0.0
    gaps = range(1, n) if n <= dense_limit else _dyadic_gaps(n)
    best = 0.0
    for g in gaps:
        chord = 2.0 * np.abs(np.sin(0.5 * (s[g:] - s[:-g])))
        best = max(best, float(np.max(chord / np.sqrt(t[g:] - t[:-g]))))
    return best


def _dyadic_gaps(n: int):
    g = 1
    while g < n:
        yield g
        g *= 2
