# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the series kernels in ``_kernels_py``."""
import numpy as np
cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double complex ccos(double complex)
    double complex csin(double complex)
    double complex cexp(double complex)
    double cabs(double complex)

from libc.math cimport fabs, exp, M_PI


cdef inline double complex ipow(double complex q, long k) nogil:
    cdef double complex r = 1.0
    cdef double complex b = q
    while k > 0:
        if k & 1:
            r = r * b
        b = b * b
        k >>= 1
    return r


def theta_nullwerte(double complex q, double eps, long cap):
    cdef double complex s2 = 1.0, t3 = 1.0, t4 = 1.0, a, b
    cdef long n
    for n in range(1, cap):
        a = ipow(q, n * (n + 1))
        b = ipow(q, n * n)
        s2 = s2 + a
        t3 = t3 + 2.0 * b
        if n & 1:
            t4 = t4 - 2.0 * b
        else:
            t4 = t4 + 2.0 * b
        if cabs(a) < eps * cabs(s2) and cabs(b) < eps:
            return s2, t3, t4, n
    raise ArithmeticError("theta series did not converge")


def lambert_e2(double complex q2, double eps, long cap):
    cdef double complex s = 0.0, p = 1.0, t
    cdef long n
    for n in range(1, cap + 1):
        p = p * q2
        t = n * p / (1.0 - p)
        s = s + t
        if cabs(t) < eps * cabs(s):
            return s, n
    raise ArithmeticError("E2 series did not converge")


def fourier_tails(z, double complex q2, double eps, long cap):
    # cos/sin of 2 pi n z from running powers of e^{+-2 pi i z}
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zz = np.ascontiguousarray(
        np.atleast_1d(np.asarray(z, dtype=np.complex128)).ravel())
    cdef Py_ssize_t m = zz.shape[0], i
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] c1 = np.zeros(m, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] c2 = np.zeros(m, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] c3 = np.zeros(m, dtype=np.complex128)
    cdef double complex p, a, e, ei, ep, em, cs, sn, t1, t2, s1, s2, s3
    cdef long n
    cdef bint failed = False
    with nogil:
        for i in range(m):
            e = cexp(2j * M_PI * zz[i])
            ei = 1.0 / e
            ep = 1.0
            em = 1.0
            p = 1.0
            s1 = 0.0
            s2 = 0.0
            s3 = 0.0
            for n in range(1, cap + 1):
                p = p * q2
                a = p / (1.0 - p)
                ep = ep * e
                em = em * ei
                cs = 0.5 * (ep + em)
                sn = -0.5j * (ep - em)
                t1 = n * a * cs
                t2 = n * n * a * sn
                s1 = s1 + t1
                s2 = s2 + t2
                s3 = s3 + a * sn
                if cabs(t2) < eps * max(1.0, cabs(s2)) and cabs(t1) < eps * max(1.0, cabs(s1)):
                    break
            else:
                failed = True
                break
            c1[i] = s1
            c2[i] = s2
            c3[i] = s3
    if failed:
        raise ArithmeticError("Fourier tail did not converge")
    shape = np.shape(z)
    return c1.reshape(shape), c2.reshape(shape), c3.reshape(shape)


def theta12(v, double complex q, double complex q14, double eps, long cap):
    # cos/sin of k v (k odd) from e^{iv} times running powers of e^{2iv}
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] vv = np.ascontiguousarray(
        np.atleast_1d(np.asarray(v, dtype=np.complex128)).ravel())
    cdef Py_ssize_t m = vv.shape[0], i
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a1 = np.zeros(m, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a1p = np.zeros(m, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a2 = np.zeros(m, dtype=np.complex128)
    cdef double complex w, c, s, e, e2, e2i, ep, em, qn, q2, s1, s1p, s2
    cdef double sg, mag, grow
    cdef long n, k
    cdef bint failed = False
    q2 = q * q
    with nogil:
        for i in range(m):
            e = cexp(1j * vv[i])
            e2 = e * e
            e2i = 1.0 / e2
            ep = e
            em = 1.0 / e
            grow = exp(fabs(vv[i].imag))
            w = 2.0 * q14
            qn = 1.0  # q^{2n}, so that w_{n+1} = w_n q^{2n+2}
            s1 = 0.0
            s1p = 0.0
            s2 = 0.0
            for n in range(0, cap):
                k = 2 * n + 1
                sg = -1.0 if (n & 1) else 1.0
                c = 0.5 * (ep + em)
                s = -0.5j * (ep - em)
                s1 = s1 + sg * w * s
                s1p = s1p + sg * w * k * c
                s2 = s2 + w * c
                mag = cabs(w) * grow ** k * k
                if n > 0 and mag < eps * (cabs(s1) + cabs(s1p) + cabs(s2)):
                    break
                qn = qn * q2
                w = w * qn
                ep = ep * e2
                em = em * e2i
            else:
                failed = True
                break
            a1[i] = s1
            a1p[i] = s1p
            a2[i] = s2
    if failed:
        raise ArithmeticError("theta series did not converge")
    shape = np.shape(v)
    return a1.reshape(shape), a1p.reshape(shape), a2.reshape(shape)
