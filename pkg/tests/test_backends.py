import cmath
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from wlab import _kernels_py as py

cy = pytest.importorskip("wlab._ckernels")

TAU = 0.5 + 1.05j
Q = cmath.exp(1j * math.pi * TAU)
EPS, CAP = 1e-17, 10_000


def _close(a, b, rel=1e-13):
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    return np.max(np.abs(a - b) / np.maximum(1.0, np.abs(a))) <= rel


def test_scalar_kernels_agree():
    for f, args in ((lambda m: m.theta_nullwerte(Q, EPS, CAP), ()), (lambda m: m.lambert_e2(Q * Q, EPS, CAP), ())):
        a, b = f(py), f(cy)
        assert all(_close(x, y) for x, y in zip(a, b))


def test_array_kernels_agree_and_keep_shape():
    rng = np.random.default_rng(0)
    z = (rng.uniform(-0.5, 0.5, (7, 9)) + 1j * rng.uniform(-0.5, 0.5, (7, 9)) * TAU.imag)
    for a, b in zip(py.fourier_tails(z, Q * Q, EPS, CAP), cy.fourier_tails(z, Q * Q, EPS, CAP)):
        assert b.shape == z.shape and _close(a, b)
    v = math.pi * z
    q14 = cmath.exp(1j * math.pi * TAU / 4)
    for a, b in zip(py.theta12(v, Q, q14, EPS, CAP), cy.theta12(v, Q, q14, EPS, CAP)):
        assert b.shape == z.shape and _close(a, b)


def test_nonconvergence_raises_in_both():
    for m in (py, cy):
        with pytest.raises(ArithmeticError):
            m.fourier_tails(np.array([0.1 + 0j]), Q * Q, EPS, 2)


def _backend_in_subprocess(env_value):
    env = dict(os.environ, WLAB_BACKEND=env_value)
    out = subprocess.run([sys.executable, "-c", "import wlab; print(wlab.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_env_forces_fallback():
    assert _backend_in_subprocess("python") == "python"
    assert _backend_in_subprocess("") == "cython"


def test_results_identical_across_backends():
    code = ("import json, numpy as np; from wlab import elliptic_kernel as ek;"
            "c = ek.elliptic_context(0.3+1.2j); w = ek.wp(np.array([0.1+0.2j, -0.4+0.5j]), c);"
            "print(json.dumps([[x.real, x.imag] for x in [complex(c.mu), *w]]))")
    vals = []
    for b in ("python", ""):
        env = dict(os.environ, WLAB_BACKEND=b)
        out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
        vals.append(np.array([complex(*p) for p in json.loads(out.stdout)]))
    assert np.max(np.abs(vals[0] - vals[1]) / np.maximum(1.0, np.abs(vals[0]))) < 1e-12
