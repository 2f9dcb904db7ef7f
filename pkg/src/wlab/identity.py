"""Feasibility of identities of the form

    c(z) + sum_i p_i f_i(z) + q(p) h(z) == 0   for all z,

where p is an unknown complex vector and q a known quadratic form.

The linear stage treats Q = q(p) as an extra unknown.  A nonzero residual
there already rules out every p (the relaxation only enlarges the solution
set).  Otherwise the solutions form an affine family x0 + N t and the
remaining condition q(p(t)) = Q(t) is a polynomial equation in t.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


@dataclass
class IdentityVerdict:
    feasible: bool
    linear_residual: float
    particular: np.ndarray
    nullspace: np.ndarray
    g_constant: Optional[complex] = None
    roots: list = field(default_factory=list)
    solutions: list = field(default_factory=list)
    reason: str = ""


def decompose(S: Callable, n: int, qmat: Optional[np.ndarray], rng, tol: float = 1e-9):
    """Split sampled values S(p) (array over sample points) into c, F and h.

    Polarisation: c = S(0), f_i = (S(e_i) - S(-e_i))/2, and h is recovered from
    S(e_k) + S(-e_k) - 2c = 2 q(e_k) h for a coordinate with q(e_k) != 0.
    A random p then checks that S really has the assumed shape.
    """
    c = np.asarray(S(np.zeros(n, dtype=complex)))
    F = np.empty((c.size, n), dtype=complex)
    E = np.eye(n, dtype=complex)
    for i in range(n):
        F[:, i] = (np.asarray(S(E[i])) - np.asarray(S(-E[i]))) / 2
    h = None
    if qmat is not None:
        # probe along a vector with q != 0
        v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        qv = v @ qmat @ v
        h = (np.asarray(S(v)) + np.asarray(S(-v)) - 2 * c) / (2 * qv)
    p = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    model = c + F @ p + (0 if h is None else (p @ qmat @ p) * h)
    got = np.asarray(S(p))
    err = float(np.max(np.abs(model - got)) / max(1.0, float(np.max(np.abs(got)))))
    if err > tol:
        raise ArithmeticError(f"identity does not have the assumed quadratic shape (err={err:.2e})")
    return c, F, h


def solve_identity(c, F, h, qmat, tol: float = 1e-9) -> IdentityVerdict:
    c = np.asarray(c, dtype=complex)
    F = np.asarray(F, dtype=complex)
    n = F.shape[1]
    A = F if h is None else np.column_stack([F, h])
    scale = max(1.0, float(np.max(np.abs(A))), float(np.max(np.abs(c))))
    x, *_ = np.linalg.lstsq(A / scale, -c / scale, rcond=None)
    res = float(np.max(np.abs(A @ x + c)) / scale)
    U, s, Vh = np.linalg.svd(A / scale)
    rank = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    N = Vh[rank:].conj().T  # columns span the nullspace
    if res > tol:
        return IdentityVerdict(False, res, x, N, reason="linear stage inconsistent")
    if h is None:
        return IdentityVerdict(True, res, x, N, reason="no quadratic term")
    P0, Q0 = x[:n], x[n]
    Np, Nq = N[:n], N[n] if N.size else np.zeros(0)

    def g(t):
        p = P0 + Np @ t
        return p @ qmat @ p - (Q0 + Nq @ t)

    k = N.shape[1]
    if k == 0:
        g0 = complex(g(np.zeros(0)))
        ok = abs(g0) <= tol * max(1.0, abs(Q0))
        return IdentityVerdict(ok, res, x, N, g0, [], [P0] if ok else [],
                               "unique linear solution" + ("" if ok else "; quadratic constraint fails"))
    # g(t) = t^T A2 t + b^T t + g0; feasible over C unless it is a nonzero constant
    A2 = Np.T @ qmat @ Np
    b = 2 * (P0 @ qmat @ Np) - Nq
    g0 = complex(P0 @ qmat @ P0 - Q0)
    mag = max(1.0, abs(Q0), float(np.max(np.abs(P0))) ** 2)
    constant = np.max(np.abs(A2)) <= tol * mag and np.max(np.abs(b)) <= tol * mag
    if constant:
        ok = abs(g0) <= tol * mag
        return IdentityVerdict(ok, res, x, N, g0, [], [],
                               "quadratic constraint is constant" + ("" if ok else " and nonzero"))
    roots, sols = [], []
    if k == 1:
        r = np.roots([A2[0, 0], b[0], g0]) if abs(A2[0, 0]) > tol * mag else np.array([-g0 / b[0]])
        roots = [complex(t) for t in np.atleast_1d(r)]
        sols = [P0 + Np[:, 0] * t for t in roots]
    return IdentityVerdict(True, res, x, N, g0, roots, sols, "quadratic constraint solvable")
