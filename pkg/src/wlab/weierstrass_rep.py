"""Weierstrass data in R^4: quadruples, Gauss map, ends, immersion and meshes."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import integrate

from .config import DEFAULT_TOL
from .errors import InvalidInput, PathError, WlabError

INF = complex(math.inf, 0.0)


def is_inf(p) -> bool:
    if p is None:
        return True
    if isinstance(p, str):
        return p.lower() in ("inf", "infinity", "oo")
    return cmath.isinf(complex(p))


class DegeneratePoint(WlabError):
    pass


@dataclass
class WeierstrassQuadruple:
    """Four 1-forms phi_j = f_j(z) dz given by a vectorised coefficient map.

    ``coeffs(z)`` returns an array of shape (4,) + shape(z).
    """

    coeffs: Callable
    punctures: tuple = ()
    base_point: complex = 1.0
    translation_b: np.ndarray = field(default_factory=lambda: np.zeros(4))
    antiderivative: Optional[Callable] = None
    symbolic: Optional[tuple] = None
    name: str = "custom"

    def phi(self, z):
        return np.asarray(self.coeffs(np.asarray(z, dtype=complex)), dtype=complex)

    def phi_at_infinity(self, w):
        """Coefficients in the chart w = 1/z."""
        w = np.asarray(w, dtype=complex)
        return self.phi(1.0 / w) * (-1.0 / w ** 2)

    def conformality_residual(self, zs) -> float:
        p = self.phi(zs)
        s = np.abs(np.sum(p * p, axis=0))
        n = np.sum(np.abs(p) ** 2, axis=0)
        return float(np.max(s / np.maximum(n, 1e-300)))

    def metric_min(self, zs) -> float:
        return float(np.min(np.sum(np.abs(self.phi(zs)) ** 2, axis=0)))

    def conformality_symbolic(self):
        """Exact check of sum phi_j^2 = 0; None when no symbolic data is attached."""
        if self.symbolic is None:
            return None
        import sympy as sp

        return sp.simplify(sp.expand(sum(e ** 2 for e in self.symbolic))) == 0


def dc_family_data(a: complex) -> WeierstrassQuadruple:
    a = complex(a)

    def coeffs(z):
        h = a - 1.0 / z ** 2
        one = np.ones_like(z)
        return np.stack([one, -1j * one, h, -1j * h])

    def F(z):
        z = np.asarray(z, dtype=complex)
        w = a * z + 1.0 / z
        return np.stack([z, -1j * z, w, -1j * w])

    import sympy as sp

    zs, As = sp.symbols("z a")
    h = As - 1 / zs ** 2
    sym = (sp.Integer(1), -sp.I, h, -sp.I * h)
    base = 1.0 + 0j
    b = np.real(F(base))
    return WeierstrassQuadruple(coeffs, (0j, INF), base, b, F, sym, f"DC_a(a={a})")


def constant_quadruple(c: Sequence[complex], name="constant") -> WeierstrassQuadruple:
    c = np.asarray(c, dtype=complex)

    def coeffs(z):
        z = np.asarray(z)
        return c.reshape((4,) + (1,) * z.ndim) * np.ones((4,) + z.shape)

    return WeierstrassQuadruple(coeffs, (INF,), 0j, np.zeros(4), None, None, name)


def single_form(f: Callable, pole: complex, name="form") -> WeierstrassQuadruple:
    """Wrap one scalar 1-form as the first slot of a quadruple (others zero)."""

    def coeffs(z):
        v = np.asarray(f(z), dtype=complex)
        zero = np.zeros_like(v)
        return np.stack([v, zero, zero, zero])

    return WeierstrassQuadruple(coeffs, (pole,), 0j, np.zeros(4), None, None, name)


# -- Gauss map ------------------------------------------------------------------

@dataclass(frozen=True)
class GaussMapPair:
    G1: complex
    G2: complex
    ruling_fallback_used: bool


def _ratio(cands):
    num, den = max(cands, key=lambda nd: max(abs(nd[0]), abs(nd[1])))
    if abs(den) <= 1e-14 * max(abs(num), 1e-300):
        return INF
    return num / den


def gauss_from_point(zeta, eps: float = 1e-12) -> GaussMapPair:
    """(G1, G2) for a point of the quadric, via the two rulings through it."""
    z1, z2, z3, z4 = (complex(x) for x in zeta)
    scale = math.sqrt(sum(abs(x) ** 2 for x in (z1, z2, z3, z4)))
    if scale == 0:
        raise DegeneratePoint("all four components vanish")
    d = z1 - 1j * z2
    fallback = abs(d) <= eps * scale
    if not fallback:
        return GaussMapPair((z3 + 1j * z4) / d, (-z3 + 1j * z4) / d, False)
    g1 = _ratio([(z3 + 1j * z4, d), (z1 + 1j * z2, -z3 + 1j * z4)])
    g2 = _ratio([(-z3 + 1j * z4, d), (z1 + 1j * z2, z3 + 1j * z4)])
    return GaussMapPair(g1, g2, True)


def gauss_map(q: WeierstrassQuadruple, z: complex) -> GaussMapPair:
    if any(not is_inf(p) and abs(complex(z) - p) < DEFAULT_TOL.pole_radius for p in q.punctures):
        raise InvalidInput(f"{z} is a puncture")
    return gauss_from_point(q.phi(complex(z)))


def ruling_L(a, b, x, y):
    return np.array([a * x + b * y, -1j * (a * x - b * y), -b * x + a * y, -1j * (b * x + a * y)])


def ruling_M(a, b, x, y):
    return np.array([a * x + b * y, -1j * (a * x - b * y), b * x - a * y, -1j * (b * x + a * y)])


def quadric_residual(zeta) -> float:
    zeta = np.asarray(zeta, dtype=complex)
    return float(abs(np.sum(zeta * zeta)) / max(np.sum(np.abs(zeta) ** 2), 1e-300))


# -- ends --------------------------------------------------------------------------

@dataclass
class EndReport:
    puncture: object
    orders: list
    residues: list
    min_order: Optional[int]
    status: str  # pass | fail | inconclusive

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def _local(q: WeierstrassQuadruple, puncture):
    if is_inf(puncture):
        return q.phi_at_infinity, 0j
    p = complex(puncture)
    return q.phi, p


def estimate_orders(f: Callable, center: complex, radii=None, n_angles: int = 16):
    """Least-squares slope of log mean|f_j| against log r; None for vanishing slots."""
    if radii is None:
        radii = [1e-2 / 2 ** k for k in range(5)]
    th = 2 * np.pi * (np.arange(n_angles) + 0.5) / n_angles
    logs = []
    for r in radii:
        vals = np.abs(f(center + r * np.exp(1j * th)))
        logs.append(np.log(np.maximum(np.mean(vals, axis=-1), 1e-300)))
    logs = np.array(logs)  # (nr, k)
    lr = np.log(radii)
    out = []
    for j in range(logs.shape[1]):
        if np.all(logs[:, j] < -600):
            out.append(None)
            continue
        slope = np.polyfit(lr, logs[:, j], 1)[0]
        out.append(float(slope))
    return out


def contour_residue(f: Callable, center: complex, radius: float = 1e-3, n: int = 256):
    """(1/2 pi i) closed integral on a circle, trapezoid with one Richardson step."""

    def trap(m):
        th = 2 * np.pi * np.arange(m) / m
        z = center + radius * np.exp(1j * th)
        dz = 1j * radius * np.exp(1j * th)
        return np.mean(f(z) * dz, axis=-1) / 1j

    t1 = trap(n // 2)
    t2 = trap(n)
    return (4 * t2 - t1) / 3


def planar_end_check(q: WeierstrassQuadruple, puncture, tol: float = 1e-8) -> EndReport:
    f, c = _local(q, puncture)
    slopes = estimate_orders(f, c)
    orders = []
    ambiguous = False
    for s in slopes:
        if s is None:
            orders.append(None)
            continue
        k = round(s)
        if abs(s - k) > 0.1:
            ambiguous = True
        orders.append(int(k))
    res = [complex(r) for r in contour_residue(f, c)]
    finite = [o for o in orders if o is not None]
    mn = min(finite) if finite else None
    if ambiguous:
        status = "inconclusive"
    else:
        ok = mn == -2 and all(abs(r) <= tol for r in res)
        status = "pass" if ok else "fail"
    return EndReport(puncture, orders, res, mn, status)


# -- immersion -------------------------------------------------------------------

def _segment_clear(a, b, pts, clearance):
    d = b - a
    L2 = abs(d) ** 2
    for p in pts:
        t = 0.0 if L2 == 0 else max(0.0, min(1.0, ((p - a) * d.conjugate()).real / L2))
        if abs(a + t * d - p) < clearance:
            return False
    return True


def plan_path(a: complex, b: complex, punctures, clearance: float):
    pts = [complex(p) for p in punctures if not is_inf(p)]
    for p in (a, b):
        if any(abs(p - x) < clearance for x in pts):
            raise PathError(f"endpoint {p} inside the pole-exclusion zone")
    if _segment_clear(a, b, pts, clearance):
        return [a, b]
    mid = (a + b) / 2
    n = (b - a) * 1j / max(abs(b - a), 1e-300)
    span = max(abs(b - a), 1.0)
    for k in (0.5, -0.5, 1.0, -1.0, 2.0, -2.0):
        w = mid + k * span * n
        if _segment_clear(a, w, pts, clearance) and _segment_clear(w, b, pts, clearance):
            return [a, w, b]
    raise PathError(f"no clear path from {a} to {b}")


def path_integral(f: Callable, nodes, epsabs: float = 1e-12, epsrel: float = 1e-11):
    """Integrate a vector of coefficient functions along a polyline."""
    total = None
    for a, b in zip(nodes[:-1], nodes[1:]):
        d = b - a
        k = np.asarray(f(np.asarray(a, dtype=complex))).shape[0]
        seg = np.zeros(k, dtype=complex)
        for j in range(k):
            val, _ = integrate.quad(
                lambda t: complex(np.asarray(f(np.asarray(a + t * d)))[j]) * d,
                0.0, 1.0, complex_func=True, epsabs=epsabs, epsrel=epsrel, limit=200,
            )
            seg[j] = val
        total = seg if total is None else total + seg
    return total


def immerse(q: WeierstrassQuadruple, targets, clearance: float = 1e-3):
    """X = Re int_{base}^{z} phi + b for each target."""
    out = []
    for z in targets:
        nodes = plan_path(complex(q.base_point), complex(z), q.punctures, clearance)
        val = path_integral(q.phi, nodes)
        out.append(np.real(val) + q.translation_b)
    return np.array(out)


def loop_period(q: WeierstrassQuadruple, center: complex, radius: float, n: int = 512):
    """Re of the integral of phi around a circle; zero when the data has no real periods there."""
    th = 2 * np.pi * np.arange(n) / n
    z = center + radius * np.exp(1j * th)
    dz = 1j * radius * np.exp(1j * th)
    val = np.sum(q.phi(z) * dz, axis=-1) * (2 * np.pi / n)
    return np.real(val)


# -- meshes ----------------------------------------------------------------------

@dataclass
class SurfaceMesh:
    vertices: np.ndarray  # (n, 4)
    faces: np.ndarray  # (m, 3)
    projection: str = "drop3"

    def check(self):
        if not np.all(np.isfinite(self.vertices)):
            raise ValueError("non-finite vertex")
        if self.faces.size and (self.faces.min() < 0 or self.faces.max() >= len(self.vertices)):
            raise ValueError("face index out of range")

    def projected(self):
        return project(self.vertices, self.projection)


def project(v4, projection: str = "drop3"):
    """R^4 -> R^3 plus the dropped scalar.

    ``dropK`` removes coordinate K (0-based).  ``stereographic`` is the
    central projection from (0,0,0,1) onto the hyperplane x4 = 0.
    """
    v4 = np.asarray(v4, dtype=float)
    if projection.startswith("drop"):
        k = int(projection[4:])
        if k not in range(4):
            raise InvalidInput(f"bad projection {projection}")
        keep = [i for i in range(4) if i != k]
        return v4[:, keep], v4[:, k]
    if projection == "stereographic":
        den = 1.0 - v4[:, 3]
        if np.any(np.abs(den) < 1e-12):
            raise InvalidInput("point at the projection pole")
        return v4[:, :3] / den[:, None], v4[:, 3]
    raise InvalidInput(f"bad projection {projection}")


def grid_faces(nu: int, nv: int, wrap_u: bool = False, wrap_v: bool = False):
    """Two triangles per quad, split along (i,j)-(i+1,j+1); vertex index i*nv + j."""
    faces = []
    iu = nu if wrap_u else nu - 1
    iv = nv if wrap_v else nv - 1
    for i in range(iu):
        i1 = (i + 1) % nu
        for j in range(iv):
            j1 = (j + 1) % nv
            a, b, c, d = i * nv + j, i1 * nv + j, i1 * nv + j1, i * nv + j1
            faces.append((a, b, c))
            faces.append((a, c, d))
    return np.array(faces, dtype=np.int64).reshape(-1, 3)


def mesh_surface(sampler: Callable, u_range, v_range, nu: int, nv: int,
                 wrap_u: bool = False, wrap_v: bool = False, projection: str = "drop3",
                 forbidden: Callable = None) -> SurfaceMesh:
    """Sample ``sampler(u, v) -> (..., 4)`` on a tensor grid.

    A wrapped axis drops its endpoint so the seam is closed by index wraparound.
    ``forbidden(u, v)`` may flag grid points that touch a puncture.
    """
    if nu < 2 or nv < 2:
        raise InvalidInput("grid must be at least 2x2")
    u = np.linspace(u_range[0], u_range[1], nu, endpoint=not wrap_u)
    v = np.linspace(v_range[0], v_range[1], nv, endpoint=not wrap_v)
    U, V = np.meshgrid(u, v, indexing="ij")
    if forbidden is not None and np.any(forbidden(U, V)):
        raise InvalidInput("grid touches a puncture")
    pts = np.asarray(sampler(U, V), dtype=float).reshape(-1, 4)
    project(pts[:1], projection)
    mesh = SurfaceMesh(pts, grid_faces(nu, nv, wrap_u, wrap_v), projection)
    mesh.check()
    return mesh


def dc_sampler(a: complex):
    """Polar sampler (theta, r) -> X(r e^{i theta}) for DC_a."""
    a = complex(a)

    def s(theta, r):
        z = r * np.exp(1j * theta)
        w = a * z + 1 / z
        return np.stack([z.real, z.imag, w.real, w.imag], axis=-1)

    return s


def dc_mesh(a: complex = 0, r_range=(0.5, 2.0), n_theta: int = 16, n_r: int = 32,
            projection: str = "drop3") -> SurfaceMesh:
    return mesh_surface(
        dc_sampler(a), (0.0, 2 * np.pi), r_range, n_theta, n_r, wrap_u=True,
        projection=projection, forbidden=lambda th, r: np.abs(r) < DEFAULT_TOL.pole_radius,
    )


def catenoid_mesh(**kw) -> SurfaceMesh:
    """The Lagrangian catenoid zw = 1 (DC_a at a = 0)."""
    return dc_mesh(0, **kw)


def curve12_point(z):
    """(z, w) on zw(z-w) = 1 with w = z/2 + sqrt((z^4 - 4z)/(4z^2)), principal root."""
    z = np.asarray(z, dtype=complex)
    w = z / 2 + np.sqrt((z ** 4 - 4 * z) / (4 * z * z))
    return z, w


def curve12_sampler(theta, r):
    z, w = curve12_point(r * np.exp(1j * theta))
    return np.stack([z.real, z.imag, w.real, w.imag], axis=-1)


def curve12_mesh(r_range=(0.3, 3.0), n_theta: int = 16, n_r: int = 32,
                 projection: str = "drop3") -> SurfaceMesh:
    """One sector 0 <= arg z <= pi/3 of the curve zw(z-w) = 1."""
    return mesh_surface(curve12_sampler, (0.0, np.pi / 3), r_range, n_theta, n_r,
                        projection=projection,
                        forbidden=lambda th, r: np.abs(r) < DEFAULT_TOL.pole_radius)


def write_obj(mesh: SurfaceMesh, path) -> None:
    xyz, w = mesh.projected()
    lines = [f"v {x!r} {y!r} {z!r}" for x, y, z in xyz.tolist()]
    lines += [f"vt {t!r} 0.0" for t in w.tolist()]
    lines += [f"f {a + 1}/{a + 1} {b + 1}/{b + 1} {c + 1}/{c + 1}" for a, b, c in mesh.faces.tolist()]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def write_ply(mesh: SurfaceMesh, path) -> None:
    xyz, w = mesh.projected()
    head = [
        "ply", "format ascii 1.0",
        f"element vertex {len(xyz)}",
        "property float x", "property float y", "property float z", "property float x4",
        f"element face {len(mesh.faces)}",
        "property list uchar int vertex_indices",
        "end_header",
    ]
    body = [f"{x!r} {y!r} {z!r} {t!r}" for (x, y, z), t in zip(xyz.tolist(), w.tolist())]
    body += [f"3 {a} {b} {c}" for a, b, c in mesh.faces.tolist()]
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(head + body) + "\n")


def read_obj_counts(path):
    nv = nf = 0
    with open(path) as fh:
        for line in fh:
            if line.startswith("v "):
                nv += 1
            elif line.startswith("f "):
                nf += 1
    return nv, nf
