"""Asymptotic 2-planes in R^4, the angle quantity Theta, and admissible symmetries."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidInput

_GOLD = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class PlaneInR4:
    basis: tuple  # two 4-vectors
    label: str = "custom"

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=float)
        if b.shape != (2, 4):
            raise InvalidInput("a plane needs two 4-vectors")
        if np.linalg.matrix_rank(b, tol=1e-12) < 2:
            raise InvalidInput("basis vectors are dependent")

    def matrix(self) -> np.ndarray:
        return np.asarray(self.basis, dtype=float)

    def orthonormal(self) -> np.ndarray:
        """4x2 matrix with orthonormal columns spanning the plane."""
        q, _ = np.linalg.qr(self.matrix().T)
        return q

    def contains(self, v, tol: float = 1e-10) -> bool:
        Q = self.orthonormal()
        v = np.asarray(v, dtype=float)
        return float(np.linalg.norm(v - Q @ (Q.T @ v))) <= tol * max(1.0, float(np.linalg.norm(v)))

    def same_as(self, other: "PlaneInR4", tol: float = 1e-9) -> bool:
        return all(other.contains(v, tol) for v in self.matrix())

    def transformed(self, A) -> "PlaneInR4":
        A = np.asarray(A, dtype=float)
        return PlaneInR4(tuple(map(tuple, (A @ self.matrix().T).T)), self.label + "'")

    def to_json(self):
        return [list(map(float, v)) for v in self.matrix()]


def _polar(a: complex):
    a = complex(a)
    return abs(a), (cmath.phase(a) if a != 0 else 0.0)


def foliation_plane(a: complex, r: float) -> PlaneInR4:
    """Plane of the ellipse |z| = r on DC_a."""
    if not r > 0:
        raise InvalidInput("r must be positive")
    m, th = _polar(a)
    v1 = (1.0, 0.0, m * math.cos(th) + 1 / r ** 2, m * math.sin(th))
    v2 = (0.0, 1.0, -m * math.sin(th), m * math.cos(th) - 1 / r ** 2)
    return PlaneInR4((v1, v2), f"Pi(a={a},r={r})")


def plane_Q1(a: complex) -> PlaneInR4:
    m, th = _polar(a)
    return PlaneInR4(((1.0, 0.0, m * math.cos(th), m * math.sin(th)),
                      (0.0, 1.0, -m * math.sin(th), m * math.cos(th))), "Q1")


def plane_Q2(a: complex, r0: float) -> PlaneInR4:
    p = foliation_plane(a, r0)
    return PlaneInR4(p.basis, "Q2")


def plane_Q3() -> PlaneInR4:
    return PlaneInR4(((0.0, 0.0, 1.0, 0.0), (0.0, 0.0, 0.0, 1.0)), "Q3")


def dc_curve_point(a: complex, r: float, theta: float) -> np.ndarray:
    z = r * cmath.exp(1j * theta)
    w = complex(a) * z + cmath.exp(-1j * theta) / r
    return np.array([z.real, z.imag, w.real, w.imag])


def plane_fit_residual(plane: PlaneInR4, pts) -> float:
    Q = plane.orthonormal()
    P = np.asarray(pts, dtype=float)
    return float(np.max(np.linalg.norm(P - (P @ Q) @ Q.T, axis=1)))


# -- Theta ----------------------------------------------------------------------

def _golden(f, lo, hi, tol=1e-13, maxit=200):
    """Maximise a unimodal f on [lo, hi]."""
    a, b = lo, hi
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(maxit):
        if abs(b - a) < tol:
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = f(d)
    x = (a + b) / 2
    return x, f(x)


def theta_sup_numeric(V: PlaneInR4, W: PlaneInR4, n: int = 512) -> float:
    """sup <u, w> over unit u in V, w in W: grid search then golden refinement."""
    M = V.orthonormal().T @ W.orthonormal()
    ang = 2 * np.pi * np.arange(n) / n
    cs = np.stack([np.cos(ang), np.sin(ang)])
    grid = cs.T @ M @ cs
    i, j = np.unravel_index(int(np.argmax(grid)), grid.shape)
    al, be = float(ang[i]), float(ang[j])
    h = 2 * np.pi / n

    def val(x, y):
        return float(np.array([math.cos(x), math.sin(x)]) @ M @ np.array([math.cos(y), math.sin(y)]))

    # nested refinement: for each alpha the inner search maximises over beta
    def inner(x):
        return _golden(lambda y: val(x, y), be - 2 * h, be + 2 * h)[1]

    al, best = _golden(inner, al - 2 * h, al + 2 * h)
    be, best = _golden(lambda y: val(al, y), be - 2 * h, be + 2 * h)
    return float(max(best, grid[i, j], 0.0))


def theta_exact(V: PlaneInR4, W: PlaneInR4) -> float:
    """Largest singular value of the orthonormal-basis product (oracle)."""
    return float(np.linalg.svd(V.orthonormal().T @ W.orthonormal(), compute_uv=False)[0])


def theta_closed_forms(a: complex, r0: float):
    """(Theta_12, Theta_23, Theta_13) for Q1(a), Q2(a, r0), Q3."""
    if not r0 > 0:
        raise InvalidInput("r0 must be positive")
    m = abs(complex(a))
    r2 = r0 * r0
    den = math.sqrt((1 + r2 * m) ** 2 + r2 * r2)
    t12 = (r2 * (1 + m * m) + m) / (math.sqrt(1 + m * m) * den)
    t23 = (1 + r2 * m) / den
    t13 = m / math.sqrt(1 + m * m)
    return t12, t23, t13


def swap_condition_detail(a: complex, r0: float, rel: float = 1e-9):
    t12, t23, _ = theta_closed_forms(a, r0)
    by_theta = abs(t12 - t23) <= rel * max(t12, t23)
    target = 1 / math.sqrt(1 + abs(complex(a)) ** 2)
    by_algebra = abs(r0 * r0 - target) <= rel * target
    return by_theta, by_algebra


def swap_condition(a: complex, r0: float, rel: float = 1e-9) -> bool:
    """Theta_12 = Theta_23, i.e. Q1 and Q3 may be exchanged with Q2 fixed."""
    by_theta, by_algebra = swap_condition_detail(a, r0, rel)
    if by_theta != by_algebra:
        raise ArithmeticError("Theta test and algebraic test disagree")
    return by_theta


# -- 2x2 blocks -------------------------------------------------------------------

def S(lam: float) -> np.ndarray:
    c, s = math.cos(lam), math.sin(lam)
    return np.array([[c, -s], [s, c]])


def T(lam: float) -> np.ndarray:
    c, s = math.cos(lam), math.sin(lam)
    return np.array([[c, -s], [-s, -c]])


def _wrap(x: float) -> float:
    return math.remainder(x, 2 * math.pi)


@dataclass(frozen=True)
class BlockOrthogonal:
    kind: str  # "S" or "T"
    angle: float
    placement: str = "diagonal"

    def matrix(self) -> np.ndarray:
        return S(self.angle) if self.kind == "S" else T(self.angle)


def block_algebra(op: str, x: BlockOrthogonal, y: BlockOrthogonal) -> BlockOrthogonal:
    """Compose two 2x2 orthogonal blocks by the S/T rules, checked against matmul."""
    if op != "compose":
        raise InvalidInput(f"unknown op {op}")
    k = x.kind + y.kind
    if k == "SS":
        out = BlockOrthogonal("S", _wrap(x.angle + y.angle))
    elif k == "ST":
        out = BlockOrthogonal("T", _wrap(y.angle - x.angle))
    elif k == "TS":
        out = BlockOrthogonal("T", _wrap(x.angle + y.angle))
    elif k == "TT":
        out = BlockOrthogonal("S", _wrap(y.angle - x.angle))
    else:
        raise InvalidInput(f"bad kinds {k}")
    if not np.allclose(out.matrix(), x.matrix() @ y.matrix(), atol=1e-12):
        raise ArithmeticError("block rule disagrees with matrix product")
    return out


def identify_block(B, tol: float = 1e-9) -> Optional[BlockOrthogonal]:
    B = np.asarray(B, dtype=float)
    det = np.linalg.det(B)
    if np.max(np.abs(B.T @ B - np.eye(2))) > tol:
        return None
    lam = math.atan2(B[1, 0], B[0, 0]) if det > 0 else math.atan2(-B[1, 0], B[0, 0])
    out = BlockOrthogonal("S" if det > 0 else "T", lam)
    return out if np.max(np.abs(out.matrix() - B)) <= tol else None


def diag_blocks(A1, A2) -> np.ndarray:
    A = np.zeros((4, 4))
    A[:2, :2] = A1
    A[2:, 2:] = A2
    return A


def swap_blocks(A12, A21) -> np.ndarray:
    """[[O, A12], [A21, O]]."""
    A = np.zeros((4, 4))
    A[:2, 2:] = A12
    A[2:, :2] = A21
    return A


def random_orthogonal(rng: np.random.Generator, n: int = 4) -> np.ndarray:
    """Haar-distributed orthogonal matrix with determinant +1."""
    G = rng.standard_normal((n, n))
    Q, R = np.linalg.qr(G)
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q


@dataclass
class SymmetryClass:
    accepted: bool
    permutation: Optional[tuple]
    form: Optional[str] = None
    kind: Optional[str] = None
    angle: Optional[float] = None
    residuals: dict = field(default_factory=dict)


def induced_permutation(A, a: complex, r0: float, tol: float = 1e-8):
    planes = [plane_Q1(a), plane_Q2(a, r0), plane_Q3()]
    perm = []
    for P in planes:
        img = P.transformed(A)
        hit = [k for k, Qk in enumerate(planes) if img.same_as(Qk, tol)]
        if len(hit) != 1:
            return None
        perm.append(hit[0] + 1)
    return tuple(perm) if sorted(perm) == [1, 2, 3] else None


def classify_symmetry(A, a: complex = 0, r0: float = 1.0, tol: float = 1e-8) -> SymmetryClass:
    """Match an orthogonal A against the admissible symmetry forms for (Q1(a), Q2(a,r0), Q3)."""
    A = np.asarray(A, dtype=float)
    if A.shape != (4, 4) or np.max(np.abs(A.T @ A - np.eye(4))) > 1e-10:
        raise InvalidInput("matrix is not orthogonal")
    a = complex(a)
    m, th = _polar(a)
    perm = induced_permutation(A, a, r0, tol)
    if perm is None:
        return SymmetryClass(False, None, residuals={"plane_images": "no permutation"})
    if perm == (1, 2, 3):
        A1, A2 = A[:2, :2], A[2:, 2:]
        off = max(np.max(np.abs(A[:2, 2:])), np.max(np.abs(A[2:, :2])))
        rel1 = float(np.max(np.abs(m * A2 @ S(th) - m * S(th) @ A1)))
        rel3 = float(np.max(np.abs(A2 @ T(0) - T(0) @ A1)))
        res = {"off_diagonal": float(off), "rel1": rel1, "rel3": rel3}
        b1 = identify_block(A1)
        if off > tol or rel1 > tol or rel3 > tol or b1 is None:
            return SymmetryClass(False, perm, residuals=res)
        if m == 0:
            other = S(-b1.angle) if b1.kind == "S" else T(-b1.angle)
            ok = np.max(np.abs(A2 - other)) <= tol
            form = "rotation" if b1.kind == "S" else "reflection"
            return SymmetryClass(bool(ok), perm, form, b1.kind, b1.angle, res)
        cands = {
            "+I": diag_blocks(np.eye(2), np.eye(2)),
            "-I": -diag_blocks(np.eye(2), np.eye(2)),
            "+T": diag_blocks(T(th), T(-th)),
            "-T": -diag_blocks(T(th), T(-th)),
        }
        for name, C in cands.items():
            if np.max(np.abs(A - C)) <= tol:
                return SymmetryClass(True, perm, name, b1.kind, b1.angle, res)
        return SymmetryClass(False, perm, residuals=res)
    if perm == (3, 2, 1):
        B12, B21 = A[:2, 2:], A[2:, :2]
        diag = max(np.max(np.abs(A[:2, :2])), np.max(np.abs(A[2:, 2:])))
        b = identify_block(B21)
        res = {"diagonal": float(diag)}
        if diag > tol or b is None:
            return SymmetryClass(False, perm, residuals=res)
        partner = S(-b.angle) if b.kind == "S" else T(-b.angle)
        ok = np.max(np.abs(B12 - partner)) <= tol
        return SymmetryClass(bool(ok), perm, "swap", b.kind, b.angle, res)
    return SymmetryClass(False, perm)


def admissible_forms(a: complex, lam: float):
    """Matrices the classifier must accept for the given a."""
    m, th = _polar(complex(a))
    if m == 0:
        return [
            diag_blocks(S(lam), S(-lam)),
            diag_blocks(T(lam), T(-lam)),
            swap_blocks(S(-lam), S(lam)),
            swap_blocks(T(-lam), T(lam)),
        ]
    return [
        np.eye(4), -np.eye(4),
        diag_blocks(T(th), T(-th)), -diag_blocks(T(th), T(-th)),
    ]
