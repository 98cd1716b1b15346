"""Independent oracles for the test suite.

Everything here is computed without touching library internals: closed forms
for the centered radial slit, Fourier-side seminorm identities, brute-force
quadrature with a different scheme, finite-difference Wirtinger quotients,
and a scipy integrator for the flow equations.  Written first, then frozen;
tests import expected values from here instead of inventing them.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from scipy.integrate import solve_ivp

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------- radial slit

def radial_alpha(T: float) -> float:
    """Endpoint angle of the plus-side preimage arc for the constant driver."""
    return 2.0 * math.acos(math.exp(-0.5 * T))


def radial_hitting_time(theta: float) -> float:
    """tau(theta) for the constant driver at 1: -2 log cos(theta / 2)."""
    return -2.0 * math.log(math.cos(0.5 * theta))


def radial_theta_of_time(t: float) -> float:
    """Inverse of radial_hitting_time on the plus side."""
    return 2.0 * math.acos(math.exp(-0.5 * t))

def radial_tip(T: float) -> float:
    """gamma(T) for the constant driver: the inner end of the radial slit.

    Inverts T = log((1+t)^2 / (4t)) on t in (0, 1): with s = sqrt(1 - e^{-T})
    this gives t = (1-s)/(1+s).  Beware s = e^{-T/2} only at T = log 2, where
    e^{-T} = 1/2; an earlier draft used that and agreed only at the anchor.
    """
    s = math.sqrt(1.0 - math.exp(-T))
    return (1.0 - s) / (1.0 + s)


def radial_T_of_tslit(t_slit: float) -> float:
    return math.log((1.0 + t_slit) ** 2 / (4.0 * t_slit))


# ------------------------------------------------------- Fourier-side identity

def trig_poly(rng, degree: int):
    """Random real trig polynomial and its squared half-order seminorm.

    u(theta) = sum a_n cos(n theta) + b_n sin(n theta); on the Fourier side the
    two_pi-normalized squared seminorm is sum_n n (a_n^2 + b_n^2) / 2 * 2
    = sum over signed modes |n| |c_n|^2 with c_{+-n} = (a_n -+ i b_n)/2.
    """
    a = rng.uniform(-1.0, 1.0, degree + 1)
    b = rng.uniform(-1.0, 1.0, degree + 1)
    b[0] = 0.0

    def u(theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full_like(theta, a[0])
        for n in range(1, degree + 1):
            out = out + a[n] * np.cos(n * theta) + b[n] * np.sin(n * theta)
        return out

    seminorm_sq = 0.5 * sum(n * (a[n] ** 2 + b[n] ** 2) for n in range(1, degree + 1))
    return u, float(seminorm_sq)


def brute_h_half_sq(u, n: int = 1200) -> float:
    """Trapezoid-grid double sum of the chordal energy on the full circle.

    Deliberately a different scheme from the library (node grid with the exact
    diagonal dropped, trapezoid weights), for cross-checks at the few-percent
    level; two_pi normalization.
    """
    th = np.linspace(0.0, TWO_PI, n, endpoint=False)
    vals = np.asarray(u(th), dtype=float)
    diff = vals[:, None] - vals[None, :]
    chord = 4.0 * np.sin(0.5 * (th[:, None] - th[None, :])) ** 2
    np.fill_diagonal(chord, 1.0)
    integrand = diff * diff / chord
    np.fill_diagonal(integrand, 0.0)
    h = TWO_PI / n
    return float(np.sum(integrand) * h * h / TWO_PI ** 2)


# ---------------------------------------------------------- Wirtinger by FD

def fd_wirtinger(f, z: complex, h: float = 1e-6):
    """(f_z, f_zbar) by central differences along the two real axes."""
    fx = (f(z + h) - f(z - h)) / (2.0 * h)
    fy = (f(z + 1j * h) - f(z - 1j * h)) / (2.0 * h)
    return 0.5 * (fx - 1j * fy), 0.5 * (fx + 1j * fy)


def fd_mu(f, z: complex, h: float = 1e-6) -> complex:
    fz, fzb = fd_wirtinger(f, z, h)
    return fzb / fz


# --------------------------------------------------- scipy flow cross-checks

def scipy_upward(sigma_fn, z0: complex, t: float, rtol=1e-11, atol=1e-13) -> complex:
    """Independent integration of g' = -g (xi + g) / (xi - g)."""

    def rhs(s, y):
        g = complex(y[0], y[1])
        xi = cmath.exp(1j * sigma_fn(s))
        v = -g * (xi + g) / (xi - g)
        return [v.real, v.imag]

    sol = solve_ivp(rhs, (0.0, t), [z0.real, z0.imag], rtol=rtol, atol=atol,
                    dense_output=False, method="DOP853")
    if not sol.success:
        raise RuntimeError(f"scipy integration failed: {sol.message}")
    return complex(sol.y[0, -1], sol.y[1, -1])


def scipy_boundary_angle(sigma_fn, theta0: float, t: float,
                         rtol=1e-11, atol=1e-13) -> float:
    """Angle flow d theta/dt = cot((sigma - theta)/2) in the lifted chart."""

    def rhs(s, y):
        return [1.0 / math.tan(0.5 * (sigma_fn(s) - y[0]))]

    sol = solve_ivp(rhs, (0.0, t), [theta0], rtol=rtol, atol=atol, method="DOP853")
    if not sol.success:
        raise RuntimeError(f"scipy integration failed: {sol.message}")
    return float(sol.y[0, -1])


# ------------------------------------------------------------- random drivers

def random_lip_half_nodes(rng, n: int = 64, T: float = 1.0, const: float = 0.5):
    """Piecewise-linear driver nodes with |d sigma| <= const sqrt(dt) per gap."""
    grid = np.linspace(0.0, T, n + 1)
    dt = np.diff(grid)
    steps = rng.uniform(-1.0, 1.0, n) * const * np.sqrt(dt)
    sigma = np.concatenate([[0.0], np.cumsum(steps)])
    return grid, sigma


# ----------------------------------------------------------- sector shear mu

def sector_mu_abs(argp: float, upper: bool) -> float:
    """|mu| of the piecewise angular shear with corner ray at argument argp.

    The shear multiplies arguments by a1 = (pi/2)/argp below the ray and by
    a2 = (pi/2)/(pi - argp) above it; for w = r e^{i phi} -> r e^{i a phi} the
    dilatation magnitude is |1 - a| / (1 + a).
    """
    a = (0.5 * math.pi / argp) if not upper else (0.5 * math.pi / (math.pi - argp))
    return abs(1.0 - a) / (1.0 + a)


# ------------------------------------------------------ dilatation closed form

def const_mu_subdisk_integral(k: float, r: float) -> float:
    """Closed form of the squared-dilatation Poincare integral for |mu| = k
    constant on |z| < r inside the unit disk:
    k^2 * 2 pi * [1/(2(1-s^2))]_0^r = k^2 pi (1/(1-r^2) - 1)."""
    return k * k * math.pi * (1.0 / (1.0 - r * r) - 1.0)
