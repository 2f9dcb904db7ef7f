"""Genus-one engine: torus 1-forms, the four-form data family, the
squared-sum case analysis and the real-period matrix.

All forms are written in the basis dz, p(z)dz, H_j dz, D_j dz where
H_j = 1/(p - p(q_j)) for a half-period q_j and D_j is the order-two form
with vanishing residue at a general point q_j.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate

from . import elliptic_kernel as ek
from .config import DEFAULT_TOL, RunConfig, Tolerances, thread_cap
from .errors import InvalidInput, PreconditionError
from .identity import IdentityVerdict, decompose, solve_identity
from .reporting import VerificationReport, fmt_complex

PI = math.pi
U0 = V0 = 0.37


def half_periods(tau: complex):
    return (0.5 + 0j, tau / 2, (1 + tau) / 2)


def in_IH(q: complex, tau: complex) -> bool:
    try:
        ek.half_period_index(q, tau)
        return True
    except InvalidInput:
        return False


# -- forms ------------------------------------------------------------------

@dataclass
class TorusForm:
    """c_dz dz + c_wp p dz + sum c H_q dz + sum c D_q dz."""

    ctx: ek.EllipticContext
    c_dz: complex = 0j
    c_wp: complex = 0j
    H: list = field(default_factory=list)  # (q, coeff)
    D: list = field(default_factory=list)

    def __post_init__(self):
        tau = self.ctx.tau.value
        for q, _ in self.H:
            if not in_IH(q, tau):
                raise InvalidInput(f"H-form needs a half-period, got {q}")
        for q, _ in self.D:
            if in_IH(q, tau):
                raise InvalidInput(f"D-form needs a non-half-period, got {q}")

    @property
    def poles(self):
        return [q for q, _ in self.H] + [q for q, _ in self.D]

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        p = np.asarray(ek.wp(z, self.ctx))
        out = self.c_dz + self.c_wp * p
        for q, c in self.H:
            out = out + c * H_value(p, q, self.ctx)
        if self.D:
            dp = np.asarray(ek.wp_prime(z, self.ctx))
            for q, c in self.D:
                out = out + c * D_value(p, dp, q, self.ctx)
        return out

    def scaled(self, s):
        return TorusForm(self.ctx, s * self.c_dz, s * self.c_wp,
                         [(q, s * c) for q, c in self.H], [(q, s * c) for q, c in self.D])

    def __add__(self, other: "TorusForm"):
        return TorusForm(self.ctx, self.c_dz + other.c_dz, self.c_wp + other.c_wp,
                         _merge(self.H, other.H), _merge(self.D, other.D))


def _merge(a, b):
    d: dict = {}
    for q, c in list(a) + list(b):
        d[q] = d.get(q, 0j) + c
    return [(q, c) for q, c in d.items() if c != 0]


def H_value(p, q, ctx):
    return 1.0 / (p - ctx.half_period_value(q))


def D_value(p, dp, q, ctx):
    pq = ek.wp(q, ctx)
    dpq = ek.wp_prime(q, ctx)
    ddpq = 6 * pq * pq - ctx.g2 / 2
    num = dp + dpq + (ddpq / dpq) * (p - pq)
    return num / (p - pq) ** 2


def eta_form(qj, ctx: ek.EllipticContext) -> TorusForm:
    """The order-two, residue-free form with its only pole at qj."""
    tau = ctx.tau.value
    qj = complex(qj)
    z0, _, _ = ek.reduce_to_cell(qj, tau)
    if abs(complex(z0)) < ctx.tol.pole_radius:
        raise InvalidInput("qj must not be a lattice point")
    if in_IH(qj, tau):
        return TorusForm(ctx, H=[(qj, 1 + 0j)])
    return TorusForm(ctx, D=[(qj, 1 + 0j)])


def wp_form(ctx) -> TorusForm:
    return TorusForm(ctx, c_wp=1 + 0j)


def form_residue(form: TorusForm, q, radius: float = 1e-3):
    from .weierstrass_rep import contour_residue

    return complex(contour_residue(form, complex(q), radius))


def form_pole_order(form: TorusForm, q) -> float:
    from .weierstrass_rep import estimate_orders

    return estimate_orders(lambda z: np.asarray(form(z))[None, ...], complex(q))[0]


# -- the data family ----------------------------------------------------------

@dataclass
class Genus1Data:
    a0: complex
    b0: complex
    c0: complex
    d0: complex
    alpha: complex
    beta: complex
    gamma: complex
    sigma2: int
    sigma3: int
    q1: complex
    q3: complex
    ctx: ek.EllipticContext

    def __post_init__(self):
        if 0 in (self.alpha, self.beta, self.gamma):
            raise InvalidInput("alpha, beta, gamma must be nonzero")
        if self.sigma2 not in (1, -1) or self.sigma3 not in (1, -1):
            raise InvalidInput("sigma values must be +1 or -1")
        self.eta1 = eta_form(self.q1, self.ctx)
        self.eta2 = wp_form(self.ctx)
        self.eta3 = eta_form(self.q3, self.ctx)

    @property
    def constants(self):
        return np.array([self.a0, self.b0, self.c0, self.d0], dtype=complex)

    def with_constants(self, p):
        return Genus1Data(*[complex(x) for x in p], self.alpha, self.beta, self.gamma,
                          self.sigma2, self.sigma3, self.q1, self.q3, self.ctx)

    def scaled(self, lam):
        return Genus1Data(*(lam * self.constants), lam * self.alpha, lam * self.beta,
                          lam * self.gamma, self.sigma2, self.sigma3, self.q1, self.q3, self.ctx)

    def eta_coefficients(self):
        """4x3 matrix: coefficient of (eta1, eta2, eta3) in each phi_j."""
        a, b, g, s2, s3 = self.alpha, self.beta, self.gamma, self.sigma2, self.sigma3
        return np.array([[a, b, 0],
                         [1j * a, 1j * s2 * b, 0],
                         [0, b, g],
                         [0, -1j * s2 * b, -1j * s3 * g]], dtype=complex)

    def phi(self, z, constants=None):
        p = self.constants if constants is None else constants
        e = np.stack([np.asarray(self.eta1(z)), np.asarray(self.eta2(z)), np.asarray(self.eta3(z))])
        return p[:, None] + self.eta_coefficients() @ e.reshape(3, -1)

    def gauss_image(self, which: int):
        """Projective Gauss image at q1 (1), q2 = 0 (2) or q3 (3), from the eta coefficients."""
        col = self.eta_coefficients()[:, which - 1]
        k = int(np.argmax(np.abs(col) > 0))
        return col / col[k]

    def gauss_image_numeric(self, which: int, eps: float = 1e-5):
        q = {1: self.q1, 2: 0j, 3: self.q3}[which]
        v = self.phi(np.array([q + eps * np.exp(0.3j)]))[:, 0]
        return v / v[int(np.argmax(np.abs(v)))]


def projective_gap(u, v) -> float:
    """Sine of the angle between the complex lines through u and v."""
    u = np.asarray(u, dtype=complex) / np.linalg.norm(u)
    v = np.asarray(v, dtype=complex) / np.linalg.norm(v)
    return float(math.sqrt(max(0.0, 1 - abs(np.vdot(u, v)) ** 2)))


def case2_constants(ctx, q1, q3, alpha, beta, gamma):
    """a0..d0 forced when q1, q3 are half-periods and (sigma2, sigma3) = (-1, 1)."""
    p1 = ctx.half_period_value(q1)
    p3 = ctx.half_period_value(q3)
    B = p3 - p1
    s = (alpha + gamma) / B
    return np.array([-beta * p1 - s, 1j * beta * p1 - 1j * s,
                     -beta * p3 + s, -1j * beta * p3 - 1j * s], dtype=complex)


def case2_data(ctx, q1, q3, alpha=1, beta=2, gamma=3) -> Genus1Data:
    c = case2_constants(ctx, q1, q3, alpha, beta, gamma)
    return Genus1Data(*c, alpha, beta, gamma, -1, 1, q1, q3, ctx)


def holomorphic_data(ctx, q1, q3, alpha=1, beta=2, gamma=3, a0=0.4 - 0.2j, c0=-1.1 + 0.5j) -> Genus1Data:
    return Genus1Data(a0, 1j * a0, c0, -1j * c0, alpha, beta, gamma, 1, 1, q1, q3, ctx)


def sample_points(ctx, n: int = 12, seed: int = 7):
    """n generic torus points, away from the poles 0, q1, q3 handled by the caller."""
    rng = np.random.default_rng(seed)
    tau = ctx.tau.value
    u = rng.uniform(0.08, 0.92, n)
    v = rng.uniform(0.08, 0.92, n)
    return u + v * tau


CONFIG_NAMES = {(False, False): "a", (True, False): "b", (False, True): "c", (True, True): "d"}


@dataclass
class Genus1Verdict:
    family: str  # Holomorphic | NonholoCase2 | Infeasible | Unclassified
    config: str
    data_residual: float
    data_in_family: bool
    identity: IdentityVerdict
    formula_gap: Optional[float] = None

    def as_dict(self):
        return {"family": self.family, "config": self.config,
                "data_residual": self.data_residual, "data_in_family": self.data_in_family,
                "linear_residual": self.identity.linear_residual,
                "reason": self.identity.reason, "formula_gap": self.formula_gap}


_QMAT = np.eye(4, dtype=complex)


def sum_of_squares(data: Genus1Data, zs, constants=None):
    f = data.phi(zs, constants)
    return np.sum(f * f, axis=0), np.sum(np.abs(f) ** 2, axis=0)


def squared_sum_classify(data: Genus1Data, n_samples: int = 12, tol: float = 1e-9) -> Genus1Verdict:
    """Decide which family (if any) makes sum phi_j^2 vanish for the given eta part,
    and whether the supplied constants a0..d0 belong to it."""
    ctx = data.ctx
    tau = ctx.tau.value
    zs = _clear_samples(data, n_samples)
    rng = np.random.default_rng(11)

    def S(p):
        return sum_of_squares(data, zs, p)[0]

    c, F, h = decompose(S, 4, _QMAT, rng)
    ver = solve_identity(c, F, h, _QMAT, tol)
    val, mag = sum_of_squares(data, zs)
    resid = float(np.max(np.abs(val)) / max(1.0, float(np.max(mag))))
    config = CONFIG_NAMES[(in_IH(data.q1, tau), in_IH(data.q3, tau))]
    if not ver.feasible:
        return Genus1Verdict("Infeasible", config, resid, False, ver)
    L = np.array([[1, 1j, 0, 0], [0, 0, 1, -1j]], dtype=complex)
    P0, Np = ver.particular[:4], ver.nullspace[:4]
    scale = max(1.0, float(np.max(np.abs(P0))))
    holo = (data.sigma2, data.sigma3) == (1, 1) and np.max(np.abs(L @ P0)) <= tol * scale and (
        Np.shape[1] == 0 or np.max(np.abs(L @ Np)) <= tol)
    if holo:
        inside = resid <= tol and np.max(np.abs(L @ data.constants)) <= tol * max(1.0, np.max(np.abs(data.constants)))
        return Genus1Verdict("Holomorphic", config, resid, bool(inside), ver)
    if config == "d" and (data.sigma2, data.sigma3) == (-1, 1) and ver.solutions:
        ref = case2_constants(ctx, data.q1, data.q3, data.alpha, data.beta, data.gamma)
        gap = min(float(np.max(np.abs(s - ref))) for s in ver.solutions) / max(1.0, float(np.max(np.abs(ref))))
        if gap <= 1e-7:
            inside = resid <= tol and float(np.max(np.abs(data.constants - ref))) <= 1e-7 * max(1.0, float(np.max(np.abs(ref))))
            return Genus1Verdict("NonholoCase2", config, resid, bool(inside), ver, gap)
    return Genus1Verdict("Unclassified", config, resid, resid <= tol, ver)


def _clear_samples(data, n):
    tau = data.ctx.tau.value
    zs = sample_points(data.ctx, 3 * n)
    poles = [0j, 1, tau, 1 + tau, data.q1, data.q3]
    keep = []
    for z in zs:
        z0, _, _ = ek.reduce_to_cell(z, tau)
        z0 = complex(z0)
        if all(abs(z0 - (complex(ek.reduce_to_cell(p, tau)[0]) + a + b * tau)) > 0.05
               for p in poles for a in (-1, 0, 1) for b in (-1, 0, 1)):
            keep.append(z)
        if len(keep) == n:
            break
    return np.array(keep)


# -- real periods ---------------------------------------------------------------

def elementary_periods(ctx, q1, q3):
    """Closed forms of (int dz, int p, int H1, int H3) over C1 and C2."""
    tau, mu = ctx.tau.value, ctx.mu
    out = {}
    for name, (L, W) in {"C1": (1.0 + 0j, mu), "C2": (tau, tau * mu + 2j * PI)}.items():
        row = [L, W]
        for q in (q1, q3):
            k = ek.half_period_index(q, tau)
            ek_ = ctx.e[k]
            others = [ctx.e[i] for i in range(3) if i != k]
            row.append((W - L * ek_) / ((others[0] - ek_) * (others[1] - ek_)))
        out[name] = np.array(row, dtype=complex)
    return out


def elementary_periods_quad(ctx, q1, q3, eps: float = 1e-10):
    tau = ctx.tau.value
    p1, p3 = ctx.half_period_value(q1), ctx.half_period_value(q3)
    paths = {"C1": (lambda t: t + V0 * tau, 1.0 + 0j), "C2": (lambda t: U0 + t * tau, tau)}
    out = {}
    for name, (path, dz) in paths.items():
        def f(t):
            p = ek.wp(path(t), ctx)
            v = np.array([1.0, p, 1 / (p - p1), 1 / (p - p3)]) * dz
            return np.concatenate([v.real, v.imag])

        val, err = integrate.quad_vec(f, 0.0, 1.0, epsabs=eps, epsrel=eps)
        out[name] = val[:4] + 1j * val[4:]
    return out


def matrix_from_periods(P, wp1, wp3):
    """Rows encode Re-period conditions for (phi1, phi2) and (phi3, phi4) over C1, C2
    acting on (conj beta, alpha, gamma)."""
    B = wp3 - wp1
    rows = []
    for name in ("C1", "C2"):
        L, W, I1, I3 = P[name]
        rows.append([np.conj(wp1 * L - W), -I1 + L / B, L / B])
        rows.append([np.conj(wp3 * L - W), -L / B, -I3 - L / B])
    return np.array(rows, dtype=complex)


def matrix_template(tau, wp1, wp3, wp4, mu):
    """The 4x3 matrix written directly in p1, p3, p4, mu and tau."""
    B = wp3 - wp1
    d1 = (wp4 - wp1) * (wp3 - wp1)
    d3 = (wp4 - wp3) * (wp1 - wp3)
    return np.array([
        [np.conj(wp1 - mu), -(mu - wp1) / d1 + 1 / B, 1 / B],
        [np.conj(wp3 - mu), -1 / B, -(mu - wp3) / d3 - 1 / B],
        [np.conj(wp1 * tau - tau * mu - 2j * PI), -(tau * (mu - wp1) + 2j * PI) / d1 + tau / B, tau / B],
        [np.conj(wp3 * tau - tau * mu - 2j * PI), -tau / B, -(tau * (mu - wp3) + 2j * PI) / d3 - tau / B],
    ], dtype=complex)


def singular_ratios(M) -> np.ndarray:
    """s_k/s_max after row and column equilibration (diagonal scalings keep the rank)."""
    A = np.array(M, dtype=complex)
    for _ in range(3):
        A = A / np.maximum(np.linalg.norm(A, axis=1, keepdims=True), 1e-300)
        A = A / np.maximum(np.linalg.norm(A, axis=0, keepdims=True), 1e-300)
    s = np.linalg.svd(A, compute_uv=False)
    return s / s[0] if s[0] > 0 else s


def numerical_rank(M, rel: float = 1e-8) -> int:
    return int(np.sum(singular_ratios(M) > rel))


def stable_form(tau, A, B, C):
    """A matrix with the same rank as the period matrix, free of cancellation.

    Rows: r1, r1 + r2, r3 - tau r1, (r3 + r4) - tau (r1 + r2).  The 1/B terms
    then survive only in the first row and the Legendre relation turns the
    remaining C2 entries into closed forms.  Inputs are A = p1 - mu,
    B = p3 - p1, C = p4 - p1.
    """
    A3 = A + B
    d1 = C * B
    d3 = (C - B) * (-B)
    y = tau.imag
    Ac, A3c = np.conj(A), np.conj(A3)
    return np.array([
        [Ac, A / d1 + 1 / B, 1 / B],
        [Ac + A3c, A / d1, A3 / d3],
        [2j * (PI - y * Ac), -2j * PI / d1, 0],
        [2j * (2 * PI - y * (Ac + A3c)), -2j * PI / d1, -2j * PI / d3],
    ], dtype=complex)


def lattice_differences(ctx, q1, q3):
    """(p1 - mu, p3 - p1, p4 - p1) from q-series and theta powers, without subtraction."""
    tau = ctx.tau.value
    q4 = _third_half_period(q1, q3, tau)
    k1, k3, k4 = (ek.half_period_index(q, tau) for q in (q1, q3, q4))
    amu = ek.q_series_differences(ctx)
    p2 = PI * PI
    t2, t3, t4 = ctx.theta.theta2 ** 4, ctx.theta.theta3 ** 4, ctx.theta.theta4 ** 4
    diff = {(0, 1): p2 * t3, (0, 2): p2 * t4, (1, 2): -p2 * t2}

    def d(i, k):  # e_i - e_k
        return diff[(i, k)] if (i, k) in diff else -diff[(k, i)]

    return amu[k1], d(k3, k1), d(k4, k1)


@dataclass
class PeriodMatrix:
    entries: np.ndarray
    wp1: complex
    wp3: complex
    wp4: complex
    mu: complex
    tau: complex
    rank: int
    quad_gap: Optional[float] = None
    kernel_vector: Optional[np.ndarray] = None


def _third_half_period(q1, q3, tau):
    k1, k3 = ek.half_period_index(q1, tau), ek.half_period_index(q3, tau)
    if k1 == k3:
        raise InvalidInput("q1 and q3 must be distinct half-periods")
    return half_periods(tau)[3 - k1 - k3]


def period_matrix(ctx, q1, q3, quad: bool = False, tol: Tolerances = DEFAULT_TOL) -> PeriodMatrix:
    tau = ctx.tau.value
    q4 = _third_half_period(q1, q3, tau)
    wp1, wp3, wp4 = (ctx.half_period_value(q) for q in (q1, q3, q4))
    if abs(wp3 - wp1) <= tol.degenerate_disc * max(1.0, abs(wp1)):
        raise InvalidInput("p(q1) and p(q3) coincide")
    M = matrix_from_periods(elementary_periods(ctx, q1, q3), wp1, wp3)
    gap = None
    if quad:
        Mq = matrix_from_periods(elementary_periods_quad(ctx, q1, q3), wp1, wp3)
        gap = float(np.max(np.abs(M - Mq) / np.maximum(1.0, np.abs(M))))
    rank = numerical_rank(stable_form(tau, *lattice_differences(ctx, q1, q3)), tol.rank_rel)
    return PeriodMatrix(M, wp1, wp3, wp4, ctx.mu, tau, rank, gap)


@dataclass
class Rank2Report:
    bool_abs: bool
    bool_affine: bool
    rank2: bool
    numerical_rank: int
    consistent: bool
    abs_gap: float
    affine_gap: float
    min_ratio: float = 1.0


def rank2_from_differences(tau, A, B, C, wp1, wp3, rel: float = 1e-9, rank_rel: float = 1e-8) -> Rank2Report:
    k = tau.imag / PI
    abs_gap = abs(abs(wp1) - abs(wp3)) / max(abs(wp1), abs(wp3), 1e-300)
    lhs = A + np.conj(A) + np.conj(B)
    rhs = k * (abs(A) ** 2 + A * np.conj(B) + C * np.conj(B))
    aff_gap = float(abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs)))
    b1, b2 = abs_gap <= rel, aff_gap <= rel
    ratios = singular_ratios(stable_form(tau, A, B, C))
    nr = int(np.sum(ratios > rank_rel))
    r2 = b1 and b2
    return Rank2Report(b1, b2, r2, nr, r2 == (nr == 2), float(abs_gap), aff_gap, float(ratios[-1]))


def rank2_from_values(tau, wp1, wp3, wp4, mu, rel: float = 1e-9, rank_rel: float = 1e-8) -> Rank2Report:
    return rank2_from_differences(tau, wp1 - mu, wp3 - wp1, wp4 - wp1, wp1, wp3, rel, rank_rel)


def rank2_conditions(ctx, q1, q3, rel: float = 1e-9) -> Rank2Report:
    A, B, C = lattice_differences(ctx, q1, q3)
    wp1, wp3 = ctx.half_period_value(q1), ctx.half_period_value(q3)
    return rank2_from_differences(ctx.tau.value, A, B, C, wp1, wp3, rel, ctx.tol.rank_rel)


def _affine_solutions(tau, wp1, wp3, wp4):
    """All A = p1 - mu solving the affine rank condition.

    Its imaginary part is linear in (Re A, Im A); substituting the line into
    the real part leaves a real quadratic.
    """
    B, C = wp3 - wp1, wp4 - wp1
    k = tau.imag / PI
    b, cb = np.conj(B), C * np.conj(B)
    # imag:  k(x Im b + y Re b) = Im b - k Im cb
    a1, a2, r = k * b.imag, k * b.real, b.imag - k * cb.imag
    if abs(a2) > abs(a1):
        x0, y0, dx, dy = 0.0, r / a2, 1.0, -a1 / a2
    else:
        x0, y0, dx, dy = r / a1, 0.0, -a2 / a1, 1.0

    def real_part(x, y):
        return k * (x * x + y * y + x * b.real - y * b.imag + cb.real) - 2 * x - b.real

    # real_part(x0 + t dx, y0 + t dy) is quadratic in t
    f0, f1, fm = real_part(x0, y0), real_part(x0 + dx, y0 + dy), real_part(x0 - dx, y0 - dy)
    c2, c1 = (f1 + fm - 2 * f0) / 2, (f1 - fm) / 2
    disc = c1 * c1 - 4 * c2 * f0
    if disc < 0:
        return []
    ts = [(-c1 + sgn * math.sqrt(disc)) / (2 * c2) for sgn in (1, -1)]
    return [complex(x0 + t * dx, y0 + t * dy) for t in ts]


def synthetic_rank2(tau=0.3 + 1.1j, wp1=2 + 1j, phases=np.linspace(0.5, 6.0, 23)):
    """Template values satisfying both rank-two conditions: |p1| = |p3| by
    construction and mu taken from the affine identity."""
    for ph in phases:
        wp3 = abs(wp1) * np.exp(1j * ph)
        wp4 = -wp1 - wp3
        sols = _affine_solutions(tau, wp1, wp3, wp4)
        if sols:
            mu = wp1 - sols[0]
            M = matrix_template(tau, wp1, wp3, wp4, mu)
            rank = numerical_rank(stable_form(tau, wp1 - mu, wp3 - wp1, wp4 - wp1))
            return PeriodMatrix(M, wp1, complex(wp3), complex(wp4), mu, tau, rank)
    raise ArithmeticError("no parameters satisfy the affine condition")


@dataclass
class KernelReport:
    kernel: np.ndarray  # (conj beta, alpha, gamma)
    residual: float
    alpha: complex
    beta: complex
    gamma: complex
    zero_component: bool
    verdict: str


def kernel_analysis(M: PeriodMatrix, rel: float = 1e-8) -> KernelReport:
    if M.rank != 2:
        raise PreconditionError(f"kernel analysis needs rank 2, got {M.rank}")
    A = np.asarray(M.entries)
    _, _, Vh = np.linalg.svd(A)
    k = Vh[-1].conj()
    k = k / k[np.argmax(np.abs(k))]
    res = kernel_residual(A, k)
    zero = bool(np.min(np.abs(k)) <= rel * np.max(np.abs(k)))
    return KernelReport(k, res, k[1], np.conj(k[0]), k[2], zero, "anomaly" if zero else "pass")


def kernel_residual(M, k) -> float:
    A = np.asarray(M, dtype=complex)
    k = np.asarray(k, dtype=complex)
    return float(np.linalg.norm(A @ k) / (np.linalg.norm(A) * np.linalg.norm(k)))


# -- the end-to-end scan ----------------------------------------------------------

def _pairs(tau):
    hp = half_periods(tau)
    return [(hp[i], hp[k]) for i in range(3) for k in range(3) if i != k]


def _scan_point(tau, tol, gap_floor):
    ctx = ek.elliptic_context(tau, tol)
    d23 = ek.e2_minus_e3(ctx)
    s1, _, _ = ek.q_series_differences(ctx)
    c = tau.imag
    margin = c * s1.real - 2 * PI
    hits, ranks, ill, contra, ratios = 0, [], 0, 0, []
    for q1, q3 in _pairs(tau):
        r = rank2_conditions(ctx, q1, q3)
        hits += r.rank2
        ranks.append(r.numerical_rank)
        ratios.append(r.min_ratio)
        if not r.consistent:
            # conditions fail but s3/s1 is under the threshold: conditioning, not a contradiction
            if not r.rank2 and r.numerical_rank == 2:
                ill += 1
            else:
                contra += 1
    return {"tau": tau, "e2_minus_e3": abs(d23), "gap_ok": abs(d23) > gap_floor,
            "margin": margin, "rank2_hits": hits, "ranks": ranks, "ill_conditioned": ill,
            "contradictions": contra, "min_ratio": min(ratios), "mu": ctx.mu, "e1": ctx.e1}


def verify_holomorphicity(cfg: RunConfig = RunConfig(), gap_floor: float = 1e-6) -> VerificationReport:
    c0, c1, step = cfg.c_min, cfg.c_max, cfg.c_step
    if c0 < math.sqrt(3) / 2 - 1e-12:
        raise InvalidInput("scan must start at c >= sqrt(3)/2")
    n = int(round((c1 - c0) / step))
    taus1 = [0.5 + 1j * (c0 + i * step) for i in range(n + 1)]
    m = int(round((cfg.case2_c_max - cfg.case2_c_min) / cfg.case2_c_step))
    taus2 = [1j] + [1j * (cfg.case2_c_min + i * cfg.case2_c_step) for i in range(m + 1)]
    rep = VerificationReport("genus1", config=cfg.echo())
    with ThreadPoolExecutor(max_workers=thread_cap()) as ex:
        rows1 = list(ex.map(lambda t: _scan_point(t, cfg.tol, gap_floor), taus1))
        rows2 = list(ex.map(lambda t: _scan_point(t, cfg.tol, gap_floor), taus2))
    hits = sum(r["rank2_hits"] for r in rows1 + rows2)
    bad_rank = sum(1 for r in rows1 + rows2 for k in r["ranks"] if k < 2)
    rows = rows1 + rows2
    contra = sum(r["contradictions"] for r in rows)
    ill = [r for r in rows if r["ill_conditioned"]]

    gap_fail = [r for r in rows1 if not r["gap_ok"]]
    worst = min(rows1, key=lambda r: r["e2_minus_e3"])
    rep.check("case1.e2_ne_e3", not gap_fail,
              inputs={"c_range": [c0, c1], "step": step, "floor": gap_floor},
              values={"n_tau": len(rows1), "n_below_floor": len(gap_fail),
                      "first_c_below_floor": gap_fail[0]["tau"].imag if gap_fail else None,
                      "min_abs": worst["e2_minus_e3"], "min_at_c": worst["tau"].imag},
              margins={"min_abs_minus_floor": worst["e2_minus_e3"] - gap_floor})
    mworst = min(rows1, key=lambda r: r["margin"])
    rep.check("case1.period_margin", mworst["margin"] > 0,
              values={"n_tau": len(rows1)},
              margins={"min_margin": mworst["margin"], "min_at_c": mworst["tau"].imag})
    ctx_i = ek.elliptic_context(1j, cfg.tol)
    rep.check("case2.tau_i", abs(ctx_i.e1 - PI) > 1 and abs(ctx_i.e3) < 1e-12,
              values={"e1": ctx_i.e1, "e3": ctx_i.e3}, margins={"e1_minus_pi": ctx_i.e1.real - PI})
    rho = ek.elliptic_context(0.5 + 0.5j * math.sqrt(3), cfg.tol)
    rep.check("case1ab.e1_positive", rho.e1.real > 0 and abs(rho.e1.imag) < 1e-12,
              values={"e1": rho.e1, "mu": rho.mu},
              margins={"e1": rho.e1.real, "mu_gap": abs(rho.mu + 2 * math.sqrt(3) * PI / 3)})
    rep.check("rank2.no_hits", hits == 0 and bad_rank == 0,
              values={"pairs_checked": 6 * len(rows1 + rows2), "both_conditions": hits,
                      "rank_below_2": bad_rank},
              anomaly=contra > 0)
    rep.check("rank2.numerical_rank_agrees", not ill and not contra,
              inputs={"rank_rel": cfg.tol.rank_rel},
              values={"ill_conditioned_pairs": sum(r["ill_conditioned"] for r in ill),
                      "first_c_ill_conditioned": ill[0]["tau"].imag if ill else None,
                      "smallest_sv_ratio": min(r["min_ratio"] for r in rows),
                      "contradictions": contra},
              anomaly=contra > 0, inconclusive=bool(ill))
    return rep


def scan_rows(cfg: RunConfig = RunConfig()):
    """Per-tau rows of the Case-1 scan (for reports and plots)."""
    n = int(round((cfg.c_max - cfg.c_min) / cfg.c_step))
    return [_scan_point(0.5 + 1j * (cfg.c_min + i * cfg.c_step), cfg.tol, 1e-6) for i in range(n + 1)]


def row_json(r):
    return {"tau": fmt_complex(r["tau"]), "e2_minus_e3": r["e2_minus_e3"], "margin": r["margin"],
            "rank2_hits": r["rank2_hits"], "ranks": r["ranks"]}
