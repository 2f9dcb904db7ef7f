"""Pure numpy versions of the hot series kernels.

Every function here has a twin with the same signature in ``_ckernels``.
"""
import numpy as np

_TWO_PI = 2.0 * np.pi


def theta_nullwerte(q, eps, cap):
    """Return (s2, t3, t4) with s2 = sum_{n>=0} q^{n(n+1)}.

    theta2 = 2 q^{1/4} s2; the quarter power is left to the caller so the
    branch is tied to tau rather than q.
    """
    q = complex(q)
    s2 = 1.0 + 0j
    t3 = 1.0 + 0j
    t4 = 1.0 + 0j
    for n in range(1, cap):
        a = q ** (n * (n + 1))
        b = q ** (n * n)
        s2 += a
        t3 += 2.0 * b
        t4 += 2.0 * b * (-1.0 if n & 1 else 1.0)
        if abs(a) < eps * abs(s2) and abs(b) < eps:
            return s2, t3, t4, n
    raise ArithmeticError("theta series did not converge")


def lambert_e2(q2, eps, cap):
    """sum n q2^n / (1 - q2^n)."""
    q2 = complex(q2)
    s = 0j
    p = 1.0 + 0j
    for n in range(1, cap + 1):
        p *= q2
        t = n * p / (1.0 - p)
        s += t
        if abs(t) < eps * abs(s):
            return s, n
    raise ArithmeticError("E2 series did not converge")


def fourier_tails(z, q2, eps, cap):
    """Trigonometric tails of wp, wp' and zeta on a reduced cell.

    Returns arrays (sum n a_n cos 2pi n z, sum n^2 a_n sin 2pi n z,
    sum a_n sin 2pi n z) with a_n = q2^n / (1 - q2^n).
    """
    z = np.asarray(z, dtype=complex)
    c1 = np.zeros_like(z)
    c2 = np.zeros_like(z)
    c3 = np.zeros_like(z)
    q2 = complex(q2)
    p = 1.0 + 0j
    for n in range(1, cap + 1):
        p *= q2
        a = p / (1.0 - p)
        arg = _TWO_PI * n * z
        cs = np.cos(arg)
        sn = np.sin(arg)
        t1 = n * a * cs
        t2 = n * n * a * sn
        c1 += t1
        c2 += t2
        c3 += a * sn
        if np.all(np.abs(t2) < eps * np.maximum(1.0, np.abs(c2))) and np.all(
            np.abs(t1) < eps * np.maximum(1.0, np.abs(c1))
        ):
            return c1, c2, c3
    raise ArithmeticError("Fourier tail did not converge")


def theta12(v, q, q14, eps, cap):
    """Jacobi theta_1, theta_1' and theta_2 at argument v (nome q).

    q14 is q^{1/4}, chosen by the caller.
    """
    v = np.asarray(v, dtype=complex)
    th1 = np.zeros_like(v)
    th1p = np.zeros_like(v)
    th2 = np.zeros_like(v)
    q = complex(q)
    for n in range(0, cap):
        w = 2.0 * q14 * q ** (n * (n + 1))
        k = 2 * n + 1
        sg = -1.0 if n & 1 else 1.0
        c = np.cos(k * v)
        s = np.sin(k * v)
        t1 = sg * w * s
        t2 = w * c
        th1 += t1
        th1p += sg * w * k * c
        th2 += t2
        m = np.abs(w) * np.exp(k * np.abs(v.imag)) * k
        scale = np.abs(th1) + np.abs(th1p) + np.abs(th2)
        if n > 0 and np.all(m < eps * scale):
            return th1, th1p, th2
    raise ArithmeticError("theta series did not converge")
