"""Cyclic covers w^{g+1} = z^N0 (z+1)^N3 (z-1) and the higher-genus
nonexistence pipeline: differentials, symmetry-reduced data, the squared-sum
identity, collapsed period integrals and the Gauss-map degree count.

Forms are monomials z^a (z+1)^b (z-1)^c w^d dz, so their divisors are exact
integer arithmetic; numerical order estimation is kept as a cross-check.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

from mpmath.ctx_mp import MPContext
import numpy as np
from scipy import integrate, special

from .errors import InvalidInput, NonIntegral, QuadratureError
from .identity import decompose, solve_identity
from .reporting import VerificationReport


# -- branch data ----------------------------------------------------------------

def rh_order(g: int, n: int) -> int:
    """|H| = 1 + 2g/(n-2) for a quotient to the sphere with n branch points."""
    if g < 1 or n not in (3, 4):
        raise InvalidInput("need g >= 1 and n in {3, 4}")
    num = 2 * g
    if num % (n - 2):
        raise NonIntegral(f"2g/(n-2) = {num}/{n - 2} is not an integer")
    return 1 + num // (n - 2)


def branch_exponent_triples(g: int):
    """(N_q0, N_q2, N_q3) with entries = +-1 mod g+1 and N_q0 + 1 + N_q2 + N_q3 = 0 mod g+1."""
    if g < 2:
        raise InvalidInput("g >= 2 required")
    m = g + 1
    choices = sorted({1 % m, (-1) % m})
    out = []
    for a in choices:
        for b in choices:
            for c in choices:
                if (a + 1 + b + c) % m == 0:
                    out.append((a, b, c))
    return out


def dim_h0_helper(g: int, j: int) -> int:
    """dim H^0(K + 2 q_1 + ... + 2 q_j) = g + 2j - 1."""
    if g < 0 or j < 1:
        raise InvalidInput("need g >= 0 and j >= 1")
    return g + 2 * j - 1


CASE_EXPONENTS = {1: lambda g: (g, g), 2: lambda g: (1, g), 3: lambda g: (g, 1), 4: lambda g: (1, 1)}


@dataclass(frozen=True)
class CoverSpec:
    g: int
    case_id: int

    def __post_init__(self):
        if self.g < 2:
            raise InvalidInput("g >= 2 required")
        if self.case_id not in CASE_EXPONENTS:
            raise InvalidInput("case must be 1..4")
        if self.case_id == 4 and self.g != 3:
            raise InvalidInput("case 4 exists only for g = 3")

    @property
    def m(self) -> int:
        return self.g + 1

    @property
    def N0(self) -> int:
        return CASE_EXPONENTS[self.case_id](self.g)[0]

    @property
    def N3(self) -> int:
        return CASE_EXPONENTS[self.case_id](self.g)[1]

    @property
    def D(self) -> int:
        """Degree in z of the right-hand side."""
        return self.N0 + self.N3 + 1

    @property
    def exponents(self) -> dict:
        """N_q at q0 = (0,0), q1 = (1,0), q2 = inf, q3 = (-1,0)."""
        return {"q0": self.N0, "q1": 1, "q2": (-self.D) % self.m, "q3": self.N3}

    def congruences_hold(self) -> bool:
        e = self.exponents
        pm = {1 % self.m, (-1) % self.m}
        return e["q1"] == 1 and all(v % self.m in pm for v in e.values()) and sum(e.values()) % self.m == 0

    def rhs(self, z):
        z = np.asarray(z, dtype=complex)
        return z ** self.N0 * (z + 1) ** self.N3 * (z - 1)

    @property
    def rho(self) -> complex:
        return cmath.exp(2j * math.pi / self.m)

    def points(self, rng, n: int, radius: float = 2.5):
        """n points (z, w) on random sheets, z away from the branch values."""
        zs = []
        while len(zs) < n:
            z = complex(*rng.uniform(-radius, radius, 2))
            if min(abs(z), abs(z - 1), abs(z + 1)) > 0.15:
                zs.append(z)
        z = np.array(zs)
        w = self.rhs(z) ** (1.0 / self.m) * self.rho ** rng.integers(0, self.m, n)
        return z, w


# -- forms ------------------------------------------------------------------------

BRANCH_POINTS = ("q0", "q1", "q3", "q2")  # (0,0), (1,0), (-1,0), inf
_CENTER = {"q0": 0.0, "q1": 1.0, "q3": -1.0}


@dataclass(frozen=True)
class CoverForm:
    """z^a (z+1)^b (z-1)^c w^d dz."""

    spec: CoverSpec
    a: int
    b: int
    c: int
    d: int
    name: str = ""

    def __call__(self, z, w):
        z = np.asarray(z, dtype=complex)
        return self.from_factors(z, z + 1, z - 1, w)

    def from_factors(self, z, zp, zm, w):
        w = np.asarray(w, dtype=complex)
        return z ** self.a * zp ** self.b * zm ** self.c * w ** self.d

    def order_at(self, p: str) -> int:
        """Exact order at a branch point in the local parameter s."""
        s = self.spec
        if p == "q2":
            return -s.m * (self.a + self.b + self.c) - self.d * s.D - (s.m + 1)
        e = {"q0": self.a, "q1": self.c, "q3": self.b}[p]
        N = s.exponents[p]
        return s.m * e + self.d * N + s.g

    @property
    def divisor(self) -> dict:
        return {p: self.order_at(p) for p in BRANCH_POINTS}

    def degree(self) -> int:
        return sum(self.divisor.values())

    def local(self, p: str):
        """The form as a function of the local parameter s at a branch point.

        Factors are built from s directly; z - c = s^(g+1) underflows quickly
        and recomputing it from z would cancel.  The root of the unit factor is
        normalised at s = 0 so it is analytic on the small circle.
        """
        sp = self.spec
        if p == "q2":
            def f(s):
                s = np.asarray(s, dtype=complex)
                u = s ** sp.m  # 1/z
                z = 1 / u
                w = s ** (-sp.D) * ((1 + u) ** sp.N3 * (1 - u)) ** (1.0 / sp.m)
                return self.from_factors(z, z * (1 + u), z * (1 - u), w) * (-sp.m) * s ** (-sp.m - 1)
            return f
        c = _CENTER[p]
        N = sp.exponents[p]

        def f(s):
            s = np.asarray(s, dtype=complex)
            u = s ** sp.m
            fac = {0.0: (u, 1 + u, u - 1), 1.0: (1 + u, 2 + u, u), -1.0: (u - 1, u, u - 2)}[c]
            pw = (sp.N0, sp.N3, 1)
            rest = np.ones_like(u)
            rest0 = 1.0
            for k, (x, e) in enumerate(zip(fac, pw)):
                if (0.0, -1.0, 1.0)[k] != c:
                    rest = rest * x ** e
                    rest0 *= (c - (0.0, -1.0, 1.0)[k]) ** e
            w = s ** N * complex(rest0) ** (1.0 / sp.m) * (rest / rest0) ** (1.0 / sp.m)
            return self.from_factors(*fac, w) * sp.m * s ** sp.g
        return f

    def numeric_order(self, p: str) -> float:
        from .weierstrass_rep import estimate_orders

        f = self.local(p)
        return estimate_orders(lambda s: f(s)[None, ...], 0j, radii=[0.05 / 2 ** k for k in range(5)])[0]

    def residue_at(self, p: str) -> complex:
        from .weierstrass_rep import contour_residue

        return complex(contour_residue(self.local(p), 0j, radius=0.05, n=256))

    def pullback(self, z, w, zmap, wmap, dz_factor):
        """Coefficient of dz of the pullback under (z, w) -> (zmap(z), wmap(w))."""
        return self(zmap(z), wmap(w)) * dz_factor


def holomorphic_basis(spec: CoverSpec):
    g = spec.g
    if spec.case_id == 4:
        return [CoverForm(spec, 0, 0, 0, -3, "dz/w^3"), CoverForm(spec, 1, 0, 0, -3, "z dz/w^3"),
                CoverForm(spec, 0, 0, 0, -2, "w dz/w^3")]
    # t^l dz/w with t = z(z+1)/w, (z+1)/w or z/w
    ta, tb = {1: (1, 1), 2: (0, 1), 3: (1, 0)}[spec.case_id]
    return [CoverForm(spec, ta * l, tb * l, 0, -l - 1, f"t^{l} dz/w") for l in range(g)]


def eta_forms_cover(spec: CoverSpec):
    table = {
        1: [(0, 0, -1, -1), (0, 0, 1, -1), (0, -2, -1, 1)],
        2: [(0, 0, -1, -1), (-1, 0, -1, 1), (-1, -2, -1, 1)],
        3: [(0, 0, -1, -1), (0, -1, -1, 1), (0, -1, 0, -1)],
        4: [(0, 0, -1, -1), (0, 0, 0, -1), (0, -1, 0, -1)],
    }[spec.case_id]
    return tuple(CoverForm(spec, *e, name=f"eta{k + 1}") for k, e in enumerate(table))


ETA_POLES = ("q1", "q2", "q3")


def check_forms(spec: CoverSpec) -> dict:
    """Exact and estimated divisors of the basis and the eta forms."""
    out = {"holomorphic": [], "eta": []}
    for f in holomorphic_basis(spec):
        est = {p: f.numeric_order(p) for p in BRANCH_POINTS}
        out["holomorphic"].append({"name": f.name, "divisor": f.divisor, "estimated": est,
                                   "degree": f.degree(),
                                   "holomorphic": all(v >= 0 for v in f.divisor.values())})
    for k, f in enumerate(eta_forms_cover(spec)):
        pole = ETA_POLES[k]
        est = {p: f.numeric_order(p) for p in BRANCH_POINTS}
        out["eta"].append({"name": f.name, "divisor": f.divisor, "estimated": est,
                           "degree": f.degree(), "pole": pole,
                           "residue": abs(f.residue_at(pole))})
    return out


def forms_independent(forms, rng, n: int = 12) -> bool:
    z, w = forms[0].spec.points(rng, n)
    A = np.stack([f(z, w) for f in forms], axis=1)
    s = np.linalg.svd(A, compute_uv=False)
    return bool(s[-1] > 1e-10 * s[0])


# -- Weierstrass data ---------------------------------------------------------------

def _eta_matrix(spec: CoverSpec, alpha, beta, gamma):
    """Coefficients of (eta1, eta2, eta3) in phi_1..phi_4."""
    s2, s4b, s4g = {1: (1, -1, 1), 2: (-1, 1, 1), 3: (-1, 1, -1), 4: (1, -1, -1)}[spec.case_id]
    return np.array([[alpha, beta, 0],
                     [1j * alpha, 1j * s2 * beta, 0],
                     [0, beta, gamma],
                     [0, 1j * s4b * beta, 1j * s4g * gamma]], dtype=complex)


@dataclass
class CoverData:
    spec: CoverSpec
    H: np.ndarray  # (4, len(basis)) holomorphic coefficients
    alpha: complex
    beta: complex
    gamma: complex
    params: tuple = ()

    def __post_init__(self):
        if 0 in (self.alpha, self.beta, self.gamma):
            raise InvalidInput("alpha, beta, gamma must be nonzero")
        self.basis = holomorphic_basis(self.spec)
        self.etas = eta_forms_cover(self.spec)
        self.E = _eta_matrix(self.spec, self.alpha, self.beta, self.gamma)

    def phi(self, z, w, H=None):
        H = self.H if H is None else H
        B = np.stack([f(z, w) for f in self.basis])
        Et = np.stack([f(z, w) for f in self.etas])
        return H @ B + self.E @ Et

    def equivariance_residual(self, z, w) -> float:
        sp = self.spec
        th = 2 * math.pi / sp.m
        c, s = math.cos(th), math.sin(th)
        A = np.array([[c, -s, 0, 0], [s, c, 0, 0], [0, 0, c, s], [0, 0, -s, c]])
        lhs = self.phi(z, sp.rho * w)
        rhs = A @ self.phi(z, w)
        return float(np.max(np.abs(lhs - rhs)) / max(1.0, float(np.max(np.abs(rhs)))))


def _h_matrix(spec: CoverSpec, p):
    """Reduced holomorphic part from the four free coefficients."""
    p = np.asarray(p, dtype=complex)
    if spec.case_id == 4:
        h10, h11, h30, h31 = p
        return np.array([[h10, h11, 0], [-1j * h10, -1j * h11, 0],
                         [h30, h31, 0], [1j * h30, 1j * h31, 0]], dtype=complex)
    a0, a1, b0, b1 = p
    H = np.zeros((4, spec.g), dtype=complex)
    top = spec.g - 1
    H[0, 0], H[0, top] = a0, a1
    H[1, 0], H[1, top] = 1j * a0, -1j * a1
    H[2, 0], H[2, top] = b0, b1
    H[3, 0], H[3, top] = -1j * b0, 1j * b1
    return H


def reduced_data(spec: CoverSpec, coefficients, alpha, beta, gamma) -> CoverData:
    """(a0, a1, b0, b1) for cases 1-3, (h10, h11, h30, h31) for case 4."""
    return CoverData(spec, _h_matrix(spec, coefficients), complex(alpha), complex(beta),
                     complex(gamma), tuple(complex(c) for c in coefficients))


def case3_family(alpha, beta, gamma):
    s = (alpha + gamma) / 2
    return np.array([s, -beta, -s, beta], dtype=complex)


# q(p) multiplying the single quadratic function: a0 a1 + b0 b1 (cases 1-3), none in case 4
_Q13 = 0.5 * np.array([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


@dataclass
class CoverSquaredSum:
    verdict: str  # Infeasible | SolutionFamily
    system_feasible: bool
    data_residual: float
    particular: np.ndarray
    nullspace: np.ndarray
    solutions: list = field(default_factory=list)
    family_gap: Optional[float] = None
    reason: str = ""
    linear_residual: float = 0.0
    constraint_constant: Optional[complex] = None


def squared_sum_cover(data: CoverData, n_samples: int = 12, seed: int = 5, tol: float = 1e-9) -> CoverSquaredSum:
    spec = data.spec
    rng = np.random.default_rng(seed)
    z, w = spec.points(rng, n_samples)
    qmat = None if spec.case_id == 4 else _Q13

    def S(p):
        f = data.phi(z, w, _h_matrix(spec, p))
        return np.sum(f * f, axis=0)

    c, F, h = decompose(S, 4, qmat, rng)
    ver = solve_identity(c, F, h, qmat, tol)
    f = data.phi(z, w)
    resid = float(np.max(np.abs(np.sum(f * f, axis=0))) / max(1.0, float(np.max(np.sum(np.abs(f) ** 2, axis=0)))))
    P0 = ver.particular[:4]
    N = ver.nullspace[:4] if ver.nullspace.size else np.zeros((4, 0))
    sols = [np.asarray(s) for s in ver.solutions] or ([P0] if ver.feasible and N.shape[1] == 0 else [])
    gap = None
    if spec.case_id == 3 and sols:
        ref = case3_family(data.alpha, data.beta, data.gamma)
        gap = min(float(np.max(np.abs(s - ref))) for s in sols) / max(1.0, float(np.max(np.abs(ref))))
    ok = ver.feasible and resid <= tol
    return CoverSquaredSum("SolutionFamily" if ok else "Infeasible", ver.feasible, resid, P0, N,
                           sols, gap, ver.reason, ver.linear_residual, ver.g_constant)


# -- periods on the case-3 cover ---------------------------------------------------

def _s(x, g):
    return (x ** g * (1 - x * x)) ** (1.0 / (g + 1))


COLLAPSED_NAMES = ("xi1", "xi2", "eta1", "eta2", "eta3")


# exponents (a, b, c) of x^a (1-x)^b (1+x)^c for each integrand
def _exponents(g, ctx):
    e = 1 / ctx.mpf(g + 1)
    return {
        "xi1": (-g * e, -e, -e),
        "xi2": (g * e - 1, e - 1, e - 1),
        "eta1": (1 - g * e, -e, -e - 1),
        "eta2": (g * e, e - 1, e - 1),
        "eta3": (-g * e, -e, -e - 1),
    }


def collapsed_integrals(g: int, dps: int = 30) -> dict:
    """The five real integrals over [0, 1] by tanh-sinh quadrature.

    Split at 1/2 and substitute x = u^(g+1) (resp. 1 - x = v^(g+1)); every
    endpoint exponent times g+1 is an integer, so both pieces become smooth.
    """
    if g < 2:
        raise InvalidInput("g >= 2 required")
    m = g + 1
    out = {}
    ctx = MPContext()  # private precision, safe under threads
    ctx.dps = dps
    top = ctx.mpf(0.5) ** (ctx.mpf(1) / m)
    for k, (a, b, c) in _exponents(g, ctx).items():
        def left(u):
            x = u ** m
            return m * u ** (m - 1) * x ** a * (1 - x) ** b * (1 + x) ** c

        def right(v):
            y = v ** m
            return m * v ** (m - 1) * (1 - y) ** a * y ** b * (2 - y) ** c

        l, el = ctx.quad(left, [0, top], method="tanh-sinh", maxdegree=12, error=True)
        r, er = ctx.quad(right, [0, top], method="tanh-sinh", maxdegree=12, error=True)
        if not el + er < ctx.mpf(10) ** (-20):
            raise QuadratureError(f"{k}: tanh-sinh error estimate {el + er}")
        out[k] = float(l + r)
    return out


def collapsed_integrals_oracle(g: int) -> dict:
    """Same integrals via QUADPACK algebraic-weight rules and Beta closed forms."""
    m = g + 1
    ex = 1.0 / m

    def alg(f, a_exp, b_exp):
        v, _ = integrate.quad(f, 0, 1, weight="alg", wvar=(a_exp, b_exp), epsabs=1e-14, epsrel=1e-13)
        return v

    # (1 - x^2) = (1 - x)(1 + x)
    out = {
        "xi1": alg(lambda x: (1 + x) ** (-ex), -g * ex, -ex),
        "xi2": alg(lambda x: (1 + x) ** (ex - 1), g * ex - 1, ex - 1),
        "eta1": alg(lambda x: (1 + x) ** (-ex - 1), 1 - g * ex, -ex),
        "eta2": alg(lambda x: (1 + x) ** (ex - 1), g * ex, ex - 1),
        "eta3": alg(lambda x: (1 + x) ** (-ex - 1), -g * ex, -ex),
    }
    beta = {
        "xi1": 0.5 * special.beta(1 / (2 * m), g / m),
        "xi2": 0.5 * special.beta(g / (2 * m), 1 / m),
        "eta2": 0.5 * special.beta((2 * g + 1) / (2 * m), 1 / m),
    }
    return {"quadpack": out, "beta": beta}


def collapsed_factor(g: int) -> complex:
    return 2j * math.sin(math.pi / (g + 1))


def closed_periods(g: int) -> dict:
    """Periods over the lifted circle as 2i sin(pi/(g+1)) times the real integrals."""
    I = collapsed_integrals(g)
    k = collapsed_factor(g)
    return {n: (-k if n == "eta1" else k) * v for n, v in I.items()}


def w0_branch_on_circle(g: int, n: int = 4096):
    """Continuous branch of (z^g (z+1)(z-1))^{1/(g+1)} on z = 1/2 + e^{it}.

    Starts from the pinned value just below 1/2 and follows a vertical segment
    to 1/2 - i, then the circle; nearest-root tracking keeps continuity.
    """
    m = g + 1
    spec = CoverSpec(g, 3)
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    eps = 1e-9
    w = (3 / 2 ** (g + 2)) ** (1 / m) * cmath.exp(-1j * math.pi / m)

    def step(zk, prev):
        base = complex(spec.rhs(zk)) ** (1.0 / m)
        cand = base * roots
        return cand[np.argmin(np.abs(cand - prev))]

    for y in np.linspace(-eps, -1.0, 400)[1:]:
        w = step(0.5 + 1j * y, w)
    t = 1.5 * math.pi + 2 * np.pi * np.arange(n) / n
    z = 0.5 + np.exp(1j * t)
    ws = np.empty(n, dtype=complex)
    for k in range(n):
        w = step(z[k], w)
        ws[k] = w
    closes = abs(step(z[0], w) - ws[0]) < 1e-9 * abs(ws[0])
    return t, z, ws, closes


def contour_periods(g: int, n: int = 4096) -> dict:
    """Direct trapezoid integration of the case-3 forms around the lifted circle."""
    spec = CoverSpec(g, 3)
    t, z, w, closes = w0_branch_on_circle(g, n)
    if not closes:
        raise QuadratureError("branch did not close around the circle")
    dz = 1j * np.exp(1j * t) * (2 * np.pi / n)
    xi1 = CoverForm(spec, 0, 0, 0, -1)
    xi2 = CoverForm(spec, -1, -1, -1, 1)
    e1, e2, e3 = eta_forms_cover(spec)
    forms = {"xi1": xi1, "xi2": xi2, "eta1": e1, "eta2": e2, "eta3": e3}
    out = {k: complex(np.sum(f(z, w) * dz)) for k, f in forms.items()}
    k0 = int(np.argmin(np.abs(z - 1.5)))
    out["_w_at_3/2"] = complex(w[k0])
    return out


def pullback_checks(g: int, rng, n: int = 10) -> dict:
    """lambda(z, w) = (-z, delta w): lambda^* xi1 = -xi1/delta, lambda^* xi2 = delta xi2,
    lambda^* eta2 = -delta eta2, lambda^* eta3 = eta1/delta."""
    spec = CoverSpec(g, 3)
    delta = cmath.exp(1j * g * math.pi / (g + 1))
    z, w = spec.points(rng, n)
    zl, wl = -z, delta * w
    on_curve = float(np.max(np.abs(wl ** spec.m - spec.rhs(zl)) / np.maximum(1.0, np.abs(spec.rhs(zl)))))
    xi1 = CoverForm(spec, 0, 0, 0, -1)
    xi2 = CoverForm(spec, -1, -1, -1, 1)
    e1, e2, e3 = eta_forms_cover(spec)

    def pb(f):
        return -f(zl, wl)  # d(-z) = -dz

    def rel(a, b):
        return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))

    return {"on_curve": on_curve,
            "xi1": rel(pb(xi1), -xi1(z, w) / delta),
            "xi2": rel(pb(xi2), delta * xi2(z, w)),
            "eta2": rel(pb(e2), -delta * e2(z, w)),
            "eta3": rel(pb(e3), e1(z, w) / delta)}


def period_contradiction(g: int, seed: int = 42) -> VerificationReport:
    I = collapsed_integrals(g)
    s_plus = I["xi2"] - I["eta2"]   # = int s/(x(1+x))
    s_minus = I["xi2"] + I["eta2"]  # = int s/(x(1-x))
    r1 = I["eta1"] / s_plus
    r2 = -I["eta3"] / s_minus
    rep = VerificationReport(f"periods.g{g}", config={"g": g, "seed": seed})
    rep.check("integrals_positive", all(v > 0 for v in I.values()), values=I,
              margins={"min": min(I.values())})
    rep.check("xi1_plus_eta1_nonzero", I["xi1"] - I["eta1"] > 0,
              values={"int_xi1_plus_eta1_over_factor": I["xi1"] - I["eta1"]})
    rep.check("sign_contradiction", r1 > 1e-3 and r2 < -1e-3,
              values={"ratio_from_eta1": r1, "ratio_from_eta3": r2},
              margins={"first": r1, "second": -r2, "I_eta1": I["eta1"], "I_eta3": I["eta3"],
                       "int_s_over_x_1px": s_plus, "int_s_over_x_1mx": s_minus})
    pb = pullback_checks(g, np.random.default_rng(seed))
    rep.check("pullbacks", max(pb.values()) <= 1e-9, values=pb)
    return rep


# -- case 4: Gauss map degree ------------------------------------------------------

def fiber_count(c: complex, tol: float = 1e-9) -> int:
    """Points of w^4 = z(z+1)(z-1) where (z+1)/(z-1) = c, counted from the fiber equations."""
    zs = np.roots([1 - c, 1 + c])  # (z+1) - c(z-1) = 0
    count = 0
    for z in np.atleast_1d(zs):
        rhs = z * (z + 1) * (z - 1)
        if abs(rhs) < tol:
            raise InvalidInput("target is a branch value")
        ws = np.roots([1, 0, 0, 0, -rhs])
        distinct = []
        for w in ws:
            if all(abs(w - u) > tol * max(1.0, abs(w)) for u in distinct):
                distinct.append(w)
        count += len(distinct)
    # the point at infinity maps to 1, never a generic target
    return count


def map_degree(rng, n_targets: int = 5) -> int:
    counts = []
    while len(counts) < n_targets:
        c = complex(*rng.normal(size=2)) * 2
        if abs(c - 1) < 1e-3 or abs(c + 1) < 1e-3 or abs(c) < 1e-3:
            continue
        counts.append(fiber_count(c))
    vals, freq = np.unique(counts, return_counts=True)
    return int(vals[np.argmax(freq)])


def required_degree_pairs(total: int = 10, diff: int = 6):
    """Non-negative (d1, d2) with d1 + d2 = total and |d1 - d2| = diff."""
    return sorted({((total + s * diff) // 2, (total - s * diff) // 2) for s in (1, -1)
                   if (total + s * diff) % 2 == 0})


def gauss_degree_check(seed: int = 42) -> VerificationReport:
    rng = np.random.default_rng(seed)
    spec = CoverSpec(3, 4)
    rep = VerificationReport("degree.g3", config={"seed": seed})
    required = required_degree_pairs(2 * spec.g + 4, 6)
    allowed = {d for pair in required for d in pair}
    z, w = spec.points(rng, 10)
    # h10 = 0 branch: phi1 + i phi2 and -phi3 + i phi4 vanish, so one Gauss component is constant
    d0 = reduced_data(spec, [0, 0, 0, 0], 1.0, 0.7 - 0.2j, 1.3 + 0.4j)
    f0 = d0.phi(z, w)
    van = float(max(np.max(np.abs(f0[0] + 1j * f0[1])), np.max(np.abs(-f0[2] + 1j * f0[3]))))
    rep.check("h10_zero_branch", van <= 1e-12 and 0 not in allowed,
              values={"vanishing": van, "degree": 0, "required": required})
    # h10 != 0 branch forces 2 beta - alpha + gamma = 0
    al, be = 1.0 + 0.5j, 0.3 - 0.8j
    ga = al - 2 * be
    d1 = reduced_data(spec, [1, -1, 1, 1], al, be, ga)
    ss = squared_sum_cover(d1)
    f1 = d1.phi(z, w)
    ratio = (-f1[2] + 1j * f1[3]) / (f1[0] + 1j * f1[1])
    ratio_gap = float(np.max(np.abs(ratio - (z + 1) / (z - 1)) / np.abs((z + 1) / (z - 1))))
    deg = map_degree(rng)
    rep.check("h10_nonzero_branch", ss.verdict == "SolutionFamily" and ratio_gap <= 1e-10 and deg not in allowed,
              values={"squared_sum": ss.verdict, "ratio_gap": ratio_gap, "degree": deg,
                      "required": required, "fiber_at_3": fiber_count(3.0)})
    return rep


# -- the full pipeline ---------------------------------------------------------------

def _case_rng(seed: int, g: int, case: int):
    return np.random.default_rng([seed, g, case])


def case_report(g: int, case: int, seed: int = 42) -> dict:
    """Run the stages for one (g, case) until one of them rules the case out."""
    spec = CoverSpec(g, case)
    rng = _case_rng(seed, g, case)
    al, be, ga = (complex(*rng.normal(size=2)) for _ in range(3))
    out = {"g": g, "case": case, "exponents": spec.exponents,
           "branch_data_ok": spec.congruences_hold()}
    if case in (1, 2):
        d = reduced_data(spec, rng.normal(size=4) + 1j * rng.normal(size=4), al, be, ga)
        ss = squared_sum_cover(d)
        out.update(stage="squared_sum", verdict=ss.verdict, eliminated=not ss.system_feasible,
                   margins={"constraint_constant": abs(ss.constraint_constant or 0.0),
                            "linear_residual": ss.linear_residual}, reason=ss.reason)
        return out
    if case == 3:
        d = reduced_data(spec, case3_family(al, be, ga), al, be, ga)
        ss = squared_sum_cover(d)
        pc = period_contradiction(g, seed)
        sc = next(r for r in pc.records if r.id == "sign_contradiction")
        survived = ss.verdict == "SolutionFamily" and ss.family_gap <= 1e-9
        out.update(stage="periods", verdict="PeriodContradiction" if pc.ok else "NoContradiction",
                   eliminated=survived and pc.ok,
                   squared_sum={"verdict": ss.verdict, "residual": ss.data_residual,
                                "family_gap": ss.family_gap},
                   sub_verdicts={r.id: r.verdict for r in pc.records},
                   ratios=sc.values, margins=sc.margins)
        return out
    d = reduced_data(spec, [1, -1, 1, 1], al, be, al - 2 * be)
    ss = squared_sum_cover(d)
    bad = reduced_data(spec, [1, -1, 1, 1], al, be, ga)
    ss_bad = squared_sum_cover(bad)
    dg = gauss_degree_check(seed)
    rec = {r.id: r.values for r in dg.records}
    survived = ss.verdict == "SolutionFamily" and ss_bad.verdict == "Infeasible"
    out.update(stage="degree", verdict="DegreeContradiction" if dg.ok else "NoContradiction",
               eliminated=survived and dg.ok,
               squared_sum={"verdict": ss.verdict, "residual": ss.data_residual,
                            "off_family_verdict": ss_bad.verdict},
               degree=rec["h10_nonzero_branch"]["degree"],
               required=rec["h10_nonzero_branch"]["required"],
               margins={"constant_branch_vanishing": rec["h10_zero_branch"]["vanishing"],
                        "ratio_gap": rec["h10_nonzero_branch"]["ratio_gap"]})
    return out


def cases_for(g: int):
    return (1, 2, 3) + ((4,) if g == 3 else ())


def nonexistence_pipeline(genera=(2, 3, 4, 5, 6), seed: int = 42, cases=None) -> VerificationReport:
    """One record per (g, case); pass means the case is ruled out at the recorded stage."""
    from .config import thread_cap

    rep = VerificationReport("nonexistence", config={"genera": list(genera), "seed": seed,
                                                     "cases": None if cases is None else list(cases)})
    jobs = [(g, c) for g in genera for c in cases_for(g) if cases is None or c in cases]
    if not jobs:
        raise InvalidInput("no (genus, case) pair selected")
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=thread_cap()) as ex:
        results = list(ex.map(lambda j: case_report(j[0], j[1], seed), jobs))
    for g in genera:
        triples = branch_exponent_triples(g)
        rep.check(f"g{g}.branch_data", len(triples) == (4 if g == 3 else 3), values={"triples": triples})
    for r in results:
        margins = r.pop("margins")
        rep.check(f"g{r['g']}.case{r['case']}", r["eliminated"] and r["branch_data_ok"],
                  values=r, margins=margins)
    return rep
