"""Weierstrass and theta functions on the lattice generated by 1 and tau.

Two independent routes are kept for the p-function: a trigonometric
(Fourier) expansion on the reduced period cell, and a quotient of Jacobi
theta functions.  The first is returned; the second is the oracle.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels, BACKEND
from .config import DEFAULT_TOL, Tolerances
from .errors import DegenerateLattice, InvalidInput, PoleError

PI = math.pi
_ID = ((1, 0), (0, 1))


@dataclass(frozen=True)
class Tau:
    value: complex
    in_fundamental_domain: bool = False
    matrix: tuple = _ID

    def __post_init__(self):
        if not self.value.imag > 0:
            raise InvalidInput(f"tau must lie in the upper half-plane, got {self.value}")


def _as_tau(tau) -> Tau:
    if isinstance(tau, Tau):
        return tau
    t = complex(tau)
    if not t.imag > 0:
        raise InvalidInput(f"tau must lie in the upper half-plane, got {t}")
    return Tau(t, _in_F(t))


def _in_F(t: complex, slack: float = 1e-12) -> bool:
    return abs(t) >= 1 - slack and -0.5 - slack <= t.real <= 0.5 + slack


def apply_sl2(matrix, tau: complex) -> complex:
    (a, b), (c, d) = matrix
    return (a * tau + b) / (c * tau + d)


def _matmul(x, y):
    (a, b), (c, d) = x
    (e, f), (g, h) = y
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def reduce_to_fundamental_domain(tau_raw, max_steps: int = 10_000) -> Tau:
    """Move tau into F = {|tau| >= 1, |Re tau| <= 1/2} by translations and inversions.

    The returned Tau carries the matrix M with value = M . tau_raw.
    """
    t = complex(tau_raw)
    if not t.imag > 0:
        raise InvalidInput(f"tau must lie in the upper half-plane, got {t}")
    m = _ID
    for _ in range(max_steps):
        n = math.floor(t.real + 0.5)
        if n:
            t = t - n
            m = _matmul(((1, -n), (0, 1)), m)
        if abs(t) < 1 - 1e-15:
            t = -1 / t
            m = _matmul(((0, -1), (1, 0)), m)
            continue
        break
    # boundary identifications: prefer Re = +1/2 and the right half of the arc
    if abs(t.real + 0.5) < 1e-12:
        t = t + 1
        m = _matmul(((1, 1), (0, 1)), m)
    if abs(abs(t) - 1) < 1e-12 and t.real < -1e-15:
        t = -1 / t
        m = _matmul(((0, -1), (1, 0)), m)
    return Tau(t, True, m)


def boundary_arc_image(theta: float) -> complex:
    """Image of e^{i theta} under tau -> tau/(tau+1): 1/2 + (i/2) tan(theta/2)."""
    return apply_sl2(((1, 0), (1, 1)), cmath.exp(1j * theta))


@dataclass(frozen=True)
class ThetaConstants:
    theta2: complex
    theta3: complex
    theta4: complex
    nome_q: complex
    jacobi_residual: float
    terms: int = 0


def theta_constants(tau, tol: Tolerances = DEFAULT_TOL) -> ThetaConstants:
    t = _as_tau(tau).value
    q = cmath.exp(1j * PI * t)
    if abs(q) >= 1:
        raise InvalidInput("nome has modulus >= 1")
    s2, t3, t4, n = kernels.theta_nullwerte(q, tol.series_rel, tol.series_cap)
    t2 = 2 * cmath.exp(1j * PI * t / 4) * s2
    res = abs(t2 ** 4 + t4 ** 4 - t3 ** 4) / max(1.0, abs(t3) ** 4)
    return ThetaConstants(complex(t2), complex(t3), complex(t4), q, res, int(n))


def e2_eisenstein(tau, tol: Tolerances = DEFAULT_TOL) -> complex:
    t = _as_tau(tau).value
    q2 = cmath.exp(2j * PI * t)
    s, _ = kernels.lambert_e2(q2, tol.series_rel, tol.series_cap)
    return 1 - 24 * complex(s)


@dataclass(frozen=True)
class EllipticContext:
    tau: Tau
    e1: complex
    e2: complex
    e3: complex
    g2: complex
    g3: complex
    j: complex
    mu: complex
    theta: ThetaConstants
    disc: complex = 0j
    tol: Tolerances = field(default=DEFAULT_TOL, repr=False, compare=False)

    @property
    def q(self) -> complex:
        return self.theta.nome_q

    @property
    def q2(self) -> complex:
        return self.theta.nome_q ** 2

    @property
    def e(self):
        return (self.e1, self.e2, self.e3)

    def half_period_value(self, h: complex) -> complex:
        """e_k for h in {1/2, tau/2, (1+tau)/2} (mod the lattice)."""
        return self.e[half_period_index(h, self.tau.value)]

    def invariant_residuals(self) -> dict:
        e1, e2, e3 = self.e
        return {
            "sum": abs(e1 + e2 + e3),
            "g2": abs(self.g2 + 4 * (e1 * e2 + e1 * e3 + e2 * e3)),
            "g3": abs(self.g3 - 4 * e1 * e2 * e3),
            "disc": abs(self.g2 ** 3 - 27 * self.g3 ** 2 - self.disc)
            / max(1.0, abs(self.g2) ** 3, 27 * abs(self.g3) ** 2),
        }


def half_period_index(h: complex, tau: complex) -> int:
    for k, c in enumerate((0.5, tau / 2, (1 + tau) / 2)):
        d = h - c
        n = round(d.imag / tau.imag)
        d -= n * tau
        if abs(d - round(d.real)) < 1e-9:
            return k
    raise InvalidInput(f"{h} is not a half-period")


def elliptic_context(tau, tol: Tolerances = DEFAULT_TOL) -> EllipticContext:
    """Lattice constants for Lambda(1, tau).

    The discriminant is formed as 16 prod (e_i - e_j)^2 with each difference
    written as a single theta power, so no cancellation occurs for large Im tau.
    """
    t = _as_tau(tau)
    th = theta_constants(t, tol)
    p2 = PI * PI
    a2, a3, a4 = th.theta2 ** 4, th.theta3 ** 4, th.theta4 ** 4
    e1 = p2 * (a3 + a4) / 3
    e2 = -p2 * (a2 + a3) / 3
    e3 = p2 * (a2 - a4) / 3
    g2 = -4 * (e1 * e2 + e1 * e3 + e2 * e3)
    g3 = 4 * e1 * e2 * e3
    # e1-e2 = pi^2 t3^4, e1-e3 = pi^2 t4^4, e2-e3 = -pi^2 t2^4
    disc = 16 * p2 ** 6 * (a2 * a3 * a4) ** 2
    # disc carries no cancellation, so only an exact zero (underflow) is degenerate;
    # a ratio test against g2^3 would wrongly reject large Im tau, where j is huge
    if disc == 0 or not cmath.isfinite(disc):
        raise DegenerateLattice(f"discriminant vanishes at tau={t.value}")
    j = 1728 * g2 ** 3 / disc
    mu = -(p2 / 3) * e2_eisenstein(t, tol)
    return EllipticContext(t, e1, e2, e3, g2, g3, j, mu, th, disc, tol)


def q_series_differences(ctx: EllipticContext):
    """(-mu+e1, -mu+e2, -mu+e3) from their Lambert-type q-expansions."""
    q = ctx.q
    eps, cap = ctx.tol.series_rel, ctx.tol.series_cap
    s1 = s2 = s3 = 0j
    qn = 1 + 0j
    p2 = PI * PI
    for n in range(1, cap + 1):
        qn *= q
        q2n = qn * qn
        d = 1 - q2n
        t1 = (-1) ** n * n * q2n / (1 - q2n)
        t2 = n * qn / d
        t3 = (-1) ** (n + 1) * n * qn / d
        s1 += t1
        s2 += t2
        s3 += t3
        if abs(t2) < eps * max(abs(s2), 1e-300) and abs(t1) <= eps * max(abs(s1), 1.0):
            break
    else:
        raise ArithmeticError("q-series did not converge")
    return (p2 - 8 * p2 * s1, -8 * p2 * s2, 8 * p2 * s3)


def e2_minus_e3(ctx: EllipticContext) -> complex:
    """e2 - e3 = -16 pi^2 sum_{n odd} n q^n / (1 - q^{2n}), summed without cancellation."""
    q = ctx.q
    s = 0j
    for n in range(1, 2 * ctx.tol.series_cap, 2):
        t = n * q ** n / (1 - q ** (2 * n))
        s += t
        if abs(t) < ctx.tol.series_rel * abs(s):
            return -16 * PI * PI * s
    raise ArithmeticError("series did not converge")


# -- p-function ---------------------------------------------------------------

_NEIGHBOURS = [(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)]


def reduce_to_cell(z, tau: complex):
    """Split z = z0 + m + n tau with z0 in the centred period parallelogram."""
    z = np.asarray(z, dtype=complex)
    n = np.round(z.imag / tau.imag)
    z1 = z - n * tau
    m = np.round(z1.real)
    return z1 - m, m, n


def _pole_guard(z, z0, m, n, tau, radius):
    z0a = np.atleast_1d(z0)
    for a, b in _NEIGHBOURS:
        d = np.abs(z0a - (a + b * tau))
        if np.any(d < radius):
            k = int(np.argmax(d < radius))
            ma = np.atleast_1d(m)[k] + a
            na = np.atleast_1d(n)[k] + b
            raise PoleError(complex(np.atleast_1d(z)[k]), complex(ma + na * tau))


def _fourier_parts(z, ctx: EllipticContext):
    tau = ctx.tau.value
    z0, m, n = reduce_to_cell(z, tau)
    _pole_guard(z, z0, m, n, tau, ctx.tol.pole_radius)
    c1, c2, c3 = kernels.fourier_tails(z0, ctx.q2, ctx.tol.series_rel, ctx.tol.series_cap)
    return z0, m, n, np.asarray(c1), np.asarray(c2), np.asarray(c3)


def _out(x, z):
    return complex(x) if np.ndim(z) == 0 else x


def wp(z, ctx: EllipticContext):
    """p(z) via the trigonometric expansion on the reduced cell."""
    z0, _, _, c1, _, _ = _fourier_parts(z, ctx)
    s = np.sin(PI * z0)
    val = ctx.mu + PI ** 2 / (s * s) - 8 * PI ** 2 * c1
    return _out(val, z)


def wp_prime(z, ctx: EllipticContext):
    z0, _, _, _, c2, _ = _fourier_parts(z, ctx)
    s = np.sin(PI * z0)
    val = -2 * PI ** 3 * np.cos(PI * z0) / s ** 3 + 16 * PI ** 3 * c2
    return _out(val, z)


def weierstrass_zeta(z, ctx: EllipticContext):
    """zeta(z) with zeta(z+1) = zeta(z) - mu and zeta(z+tau) = zeta(z) - tau*mu - 2 pi i."""
    z0, m, n, _, _, c3 = _fourier_parts(z, ctx)
    mu, tau = ctx.mu, ctx.tau.value
    base = -mu * z0 + PI / np.tan(PI * z0) + 4 * PI * c3
    val = base - m * mu - n * (tau * mu + 2j * PI)
    return _out(val, z)


def _theta_args(ctx):
    tau = ctx.tau.value
    return ctx.q, cmath.exp(1j * PI * tau / 4), ctx.tol.series_rel, ctx.tol.series_cap


def wp_theta(z, ctx: EllipticContext):
    """p(z) = e1 + (pi t3 t4 theta2(pi z)/theta1(pi z))^2."""
    tau = ctx.tau.value
    z0, m, n = reduce_to_cell(z, tau)
    _pole_guard(z, z0, m, n, tau, ctx.tol.pole_radius)
    th1, _, th2 = kernels.theta12(PI * z0, *_theta_args(ctx))
    r = PI * ctx.theta.theta3 * ctx.theta.theta4 * np.asarray(th2) / np.asarray(th1)
    return _out(ctx.e1 + r * r, z)


def zeta_theta(z, ctx: EllipticContext):
    """zeta(z) = -mu z + pi theta1'(pi z)/theta1(pi z), evaluated without reduction."""
    tau = ctx.tau.value
    z = np.asarray(z, dtype=complex)
    z0, m, n = reduce_to_cell(z, tau)
    _pole_guard(z, z0, m, n, tau, ctx.tol.pole_radius)
    th1, th1p, _ = kernels.theta12(PI * z, *_theta_args(ctx))
    return _out(-ctx.mu * z + PI * np.asarray(th1p) / np.asarray(th1), z)


def two_route_gap(z, ctx: EllipticContext) -> float:
    """Largest relative gap between the Fourier and theta routes."""
    a = np.atleast_1d(wp(z, ctx))
    b = np.atleast_1d(wp_theta(z, ctx))
    return float(np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))))


def ode_residual(z, ctx: EllipticContext) -> float:
    p = np.atleast_1d(wp(z, ctx))
    dp = np.atleast_1d(wp_prime(z, ctx))
    r = dp ** 2 - 4 * (p - ctx.e1) * (p - ctx.e2) * (p - ctx.e3)
    return float(np.max(np.abs(r) / np.maximum(1.0, np.abs(p) ** 3)))


def mu_from_zeta(ctx: EllipticContext, v0: float) -> complex:
    tau = ctx.tau.value
    return weierstrass_zeta(v0 * tau, ctx) - weierstrass_zeta(1 + v0 * tau, ctx)


def legendre_residual(ctx: EllipticContext, u0: float) -> float:
    """|zeta(u0) - zeta(u0+tau) - (tau mu + 2 pi i)| using the unreduced theta route."""
    tau = ctx.tau.value
    lhs = zeta_theta(u0, ctx) - zeta_theta(u0 + tau, ctx)
    return abs(lhs - (tau * ctx.mu + 2j * PI))


def abs_equal_pairs(ctx: EllipticContext, rel: float = 1e-9):
    """Index pairs (i, k) with |e_i| = |e_k| to relative tolerance."""
    e = ctx.e
    out = []
    for i in range(3):
        for k in range(i + 1, 3):
            if abs(abs(e[i]) - abs(e[k])) <= rel * max(abs(e[i]), abs(e[k])):
                out.append((i + 1, k + 1))
    return out


def context_json(ctx: EllipticContext) -> dict:
    from .reporting import fmt_complex

    return {
        "tau": fmt_complex(ctx.tau.value),
        "e": [fmt_complex(x) for x in ctx.e],
        "g2": fmt_complex(ctx.g2),
        "g3": fmt_complex(ctx.g3),
        "j": fmt_complex(ctx.j),
        "mu": fmt_complex(ctx.mu),
    }


__all__ = [
    "BACKEND", "Tau", "ThetaConstants", "EllipticContext", "apply_sl2",
    "reduce_to_fundamental_domain", "boundary_arc_image", "theta_constants",
    "elliptic_context", "q_series_differences", "wp", "wp_prime", "weierstrass_zeta",
    "wp_theta", "zeta_theta", "two_route_gap", "ode_residual", "e2_minus_e3",
    "legendre_residual", "mu_from_zeta", "abs_equal_pairs", "reduce_to_cell",
]
