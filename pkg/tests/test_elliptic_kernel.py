import math

import mpmath as mp
import numpy as np
import pytest

from wlab import elliptic_kernel as ek
from wlab.errors import InvalidInput

SQ3 = math.sqrt(3)
RHO = 0.5 + 0.5j * SQ3


def wp_oracle(z, tau):
    """Theta-quotient value of wp at 30 digits."""
    with mp.workdps(30):
        q = mp.exp(1j * mp.pi * tau)
        t3, t4 = mp.jtheta(3, 0, q), mp.jtheta(4, 0, q)
        e1 = mp.pi ** 2 * (t3 ** 4 + t4 ** 4) / 3
        return complex(e1 + (mp.pi * t3 * t4 * mp.jtheta(2, mp.pi * z, q) / mp.jtheta(1, mp.pi * z, q)) ** 2)


def rand_z(rng, n, tau):
    u, v = rng.uniform(-1, 1, n), rng.uniform(-1, 1, n)
    return u + v * tau


# -- fundamental domain ------------------------------------------------------

def test_reduce_identity_case():
    t = ek.reduce_to_fundamental_domain(0.1 + 2j)
    assert t.value == 0.1 + 2j
    assert t.matrix == ((1, 0), (0, 1))


def test_reduce_translation():
    t = ek.reduce_to_fundamental_domain(1.3 + 2j)
    assert abs(t.value - (0.3 + 2j)) < 1e-15
    assert abs(ek.apply_sl2(t.matrix, 1.3 + 2j) - t.value) < 1e-15


def test_reduce_arc_preimage_goes_to_corner():
    # 1/2 + (sqrt3/6)i lies below the unit circle; its orbit meets F at e^{i pi/3}
    tau = 0.5 + 1j * SQ3 / 6
    t = ek.reduce_to_fundamental_domain(tau)
    assert abs(t.value - RHO) < 1e-12
    assert abs(ek.apply_sl2(t.matrix, tau) - t.value) < 1e-12


def test_boundary_arc_image_corner():
    assert abs(ek.boundary_arc_image(math.pi / 3) - (0.5 + 1j * SQ3 / 6)) < 1e-15


@pytest.mark.parametrize("tau", [0.3 - 0.2j, 1.0, 0j])
def test_reduce_rejects_lower_half_plane(tau):
    with pytest.raises(InvalidInput):
        ek.reduce_to_fundamental_domain(tau)


def test_reduced_values_in_domain():
    rng = np.random.default_rng(3)
    for _ in range(50):
        tau = complex(rng.uniform(-5, 5), rng.uniform(0.05, 3))
        t = ek.reduce_to_fundamental_domain(tau)
        assert abs(t.value) >= 1 - 1e-12 and -0.5 - 1e-12 <= t.value.real <= 0.5 + 1e-12
        assert abs(ek.apply_sl2(t.matrix, tau) - t.value) < 1e-9


# -- theta constants -----------------------------------------------------------

def test_theta_at_i():
    th = ek.theta_constants(1j)
    assert th.jacobi_residual <= 1e-12
    assert abs(th.theta2 - th.theta4) <= 1e-12
    with mp.workdps(25):
        q = mp.exp(-mp.pi)
        assert abs(th.theta3 - complex(mp.jtheta(3, 0, q))) < 1e-14


def test_theta_large_imaginary_part():
    th = ek.theta_constants(0.2 + 12j)
    assert abs(th.theta2) < 1e-3 and abs(th.theta3 - 1) < 1e-15 and abs(th.theta4 - 1) < 1e-15


# -- context --------------------------------------------------------------------

def test_e1_at_i():
    ctx = ek.elliptic_context(1j)
    assert abs(ctx.e1 - math.gamma(0.25) ** 4 / (8 * math.pi)) <= 1e-8
    assert abs(ctx.e3) <= 1e-10
    assert abs(ctx.mu + math.pi) <= 1e-9


def test_hexagonal_lattice():
    ctx = ek.elliptic_context(RHO)
    assert abs(ctx.g2) <= 1e-8 * abs(ctx.g3)
    assert abs(ctx.j) <= 1e-8
    assert abs(ctx.mu + 2 * SQ3 * math.pi / 3) <= 1e-9


@pytest.mark.parametrize("tau", [1j, RHO, 0.3 + 1.2j, -0.45 + 0.9j, 0.1 + 3j])
def test_context_invariants(tau):
    ctx = ek.elliptic_context(tau)
    r = ctx.invariant_residuals()
    assert max(r.values()) <= 1e-12
    assert len({round(e.real, 9) + 1j * round(e.imag, 9) for e in ctx.e}) == 3


def test_mu_against_mpmath():
    tau = 0.3 + 1.2j
    with mp.workdps(30):
        q = mp.exp(1j * mp.pi * tau)
        mu = complex(mp.pi ** 2 * mp.jtheta(1, 0, q, 3) / (3 * mp.jtheta(1, 0, q, 1)))
    assert abs(ek.elliptic_context(tau).mu - mu) < 1e-12


# -- wp, wp', zeta ---------------------------------------------------------------

def test_wp_half_period():
    ctx = ek.elliptic_context(0.2 + 1.5j)
    assert abs(ek.wp(0.5, ctx) - ctx.e1) <= 1e-10


def test_wp_parity():
    tau = 0.3 + 1.2j
    ctx = ek.elliptic_context(tau)
    z = rand_z(np.random.default_rng(0), 20, tau)
    assert np.max(np.abs(ek.wp(-z, ctx) - ek.wp(z, ctx))) < 1e-10
    assert np.max(np.abs(ek.wp_prime(-z, ctx) + ek.wp_prime(z, ctx))) < 1e-9
    assert np.max(np.abs(ek.weierstrass_zeta(-z, ctx) + ek.weierstrass_zeta(z, ctx))) < 1e-10


@pytest.mark.parametrize("tau", [0.3 + 1.2j, -0.4 + 0.95j, 0.1 + 3j, 1j])
def test_wp_matches_mpmath(tau):
    ctx = ek.elliptic_context(tau)
    z = rand_z(np.random.default_rng(1), 15, tau)
    got = ek.wp(z, ctx)
    for zz, g in zip(z, got):
        ref = wp_oracle(zz, tau)
        assert abs(g - ref) <= 1e-10 * max(1.0, abs(ref))


def test_ode_two_route_and_legendre():
    tau = 0.2 + 1.5j
    ctx = ek.elliptic_context(tau)
    z = rand_z(np.random.default_rng(2), 100, tau)
    assert ek.ode_residual(z, ctx) <= 1e-8
    assert ek.two_route_gap(z, ctx) <= 1e-9
    assert ek.legendre_residual(ctx, 0.37) <= 1e-9


def test_mu_from_zeta_independent_of_v0():
    ctx = ek.elliptic_context(0.3 + 1.2j)
    vals = [ek.mu_from_zeta(ctx, v) for v in (0.2, 0.5, 0.7)]
    assert max(abs(v - ctx.mu) for v in vals) <= 1e-9


def test_zeta_derivative_is_minus_wp():
    ctx = ek.elliptic_context(0.3 + 1.2j)
    z, h = 0.31 + 0.2j, 1e-5
    d = (ek.weierstrass_zeta(z + h, ctx) - ek.weierstrass_zeta(z - h, ctx)) / (2 * h)
    assert abs(d + ek.wp(z, ctx)) < 1e-6


def test_wp_pole():
    ctx = ek.elliptic_context(1j)
    with pytest.raises(Exception):
        ek.wp(1 + 1j, ctx)


# -- q-series differences ---------------------------------------------------------

def test_q_series_limits():
    ctx = ek.elliptic_context(0.5 + 12j)
    d = ek.q_series_differences(ctx)
    assert abs(d[0] - math.pi ** 2) < 1e-12 and abs(d[1]) < 1e-12 and abs(d[2]) < 1e-12


def test_q_series_real_on_half_line():
    ctx = ek.elliptic_context(0.5 + 1j)
    assert abs(ek.q_series_differences(ctx)[0].imag) <= 1e-10


@pytest.mark.parametrize("tau", [RHO, 0.5 + 1j, 0.2 + 1.3j])
def test_q_series_cross_route(tau):
    ctx = ek.elliptic_context(tau)
    d = ek.q_series_differences(ctx)
    for got, e in zip(d, ctx.e):
        assert abs(got - (e - ctx.mu)) <= 1e-9


def test_e2_minus_e3_stays_relative_at_large_c():
    # theta-power form keeps full relative precision where e2 - e3 is tiny
    tau = 0.5 + 7.5j
    ctx = ek.elliptic_context(tau)
    with mp.workdps(40):
        q = mp.exp(1j * mp.pi * mp.mpc(0.5, 7.5))
        ref = complex(-mp.pi ** 2 * mp.jtheta(2, 0, q) ** 4)
    assert abs(ek.e2_minus_e3(ctx) - ref) <= 1e-12 * abs(ref)


def test_abs_equal_pairs_at_i():
    # 1-based: |e1| = |e2| at tau = i
    assert ek.abs_equal_pairs(ek.elliptic_context(1j)) == [(1, 2)]
    assert ek.abs_equal_pairs(ek.elliptic_context(0.3 + 1.4j)) == []


def test_half_period_index():
    tau = 0.3 + 1.2j
    assert ek.half_period_index(0.5, tau) == 0
    assert ek.half_period_index(tau / 2, tau) == 1
    assert ek.half_period_index((1 + tau) / 2 + 1 + tau, tau) == 2
    with pytest.raises(Exception):
        ek.half_period_index(0.25, tau)
