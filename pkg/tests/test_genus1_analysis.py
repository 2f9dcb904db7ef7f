import math

import numpy as np
import pytest

from wlab import elliptic_kernel as ek
from wlab import genus1_analysis as ga
from wlab.config import RunConfig
from wlab.errors import InvalidInput, PreconditionError


@pytest.fixture(scope="module")
def ctx_i():
    return ek.elliptic_context(1j)


@pytest.fixture(scope="module")
def ctx_g():
    return ek.elliptic_context(0.3 + 1.2j)


def test_half_period_membership():
    tau = 0.3 + 1.2j
    assert all(ga.in_IH(h, tau) for h in ga.half_periods(tau))
    assert ga.in_IH(0.5 + 2 * tau, tau)
    assert not ga.in_IH(0.2 + 0.3j, tau)


def test_eta_form_types(ctx_g):
    tau = ctx_g.tau.value
    f = ga.eta_form(tau / 2, ctx_g)
    assert f.H and abs(f.H[0][0] - tau / 2) < 1e-15 and not f.D
    assert abs(ctx_g.half_period_value(f.H[0][0]) - ctx_g.e2) < 1e-12
    g = ga.eta_form(0.2 + 0.3j, ctx_g)
    assert g.D and not g.H


@pytest.mark.parametrize("q", [0.5, 0.65j, 0.2 + 0.3j])
def test_eta_residue_and_order(ctx_g, q):
    f = ga.eta_form(q, ctx_g)
    assert abs(ga.form_residue(f, q)) <= 1e-8
    assert abs(ga.form_pole_order(f, q) + 2) < 1e-3


def test_wp_period_over_c1_is_mu(ctx_g):
    tau = ctx_g.tau.value
    P = ga.elementary_periods(ctx_g, 0.5, tau / 2)
    assert abs(P["C1"][1] - ctx_g.mu) < 1e-12
    assert abs(P["C2"][1] - (ctx_g.tau.value * ctx_g.mu + 2j * math.pi)) < 1e-8


def test_closed_form_period_at_i(ctx_i):
    P = ga.elementary_periods(ctx_i, 0.5, 0.5j)
    e1, e2, e3, mu = ctx_i.e1, ctx_i.e2, ctx_i.e3, ctx_i.mu
    assert abs(P["C1"][2] - (mu - e1) / ((e3 - e1) * (e2 - e1))) < 1e-12
    Q = ga.elementary_periods_quad(ctx_i, 0.5, 0.5j)
    for k in ("C1", "C2"):
        assert np.max(np.abs(P[k] - Q[k])) <= 1e-7


def test_closed_form_vs_quadrature_random():
    rng = np.random.default_rng(11)
    for _ in range(10):
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 2.0))
        ctx = ek.elliptic_context(tau)
        pm = ga.period_matrix(ctx, 0.5, tau / 2 + 0.5, quad=True)
        assert pm.quad_gap <= 1e-7 and pm.rank in (2, 3)


def test_matrix_template_agrees_with_periods(ctx_g):
    pm = ga.period_matrix(ctx_g, 0.5, (1 + ctx_g.tau.value) / 2)
    T = ga.matrix_template(ctx_g.tau.value, pm.wp1, pm.wp3, pm.wp4, pm.mu)
    assert np.max(np.abs(T - pm.entries)) < 1e-10


def test_case_a_holomorphic(ctx_g):
    v = ga.squared_sum_classify(ga.holomorphic_data(ctx_g, 0.5, 0.2 + 0.3j))
    assert v.family == "Holomorphic" and v.data_residual <= 1e-12 and v.data_in_family


def test_case2_nonholomorphic(ctx_i):
    v = ga.squared_sum_classify(ga.case2_data(ctx_i, 0.5, 0.5j, 1, 2, 3))
    assert v.family == "NonholoCase2" and v.data_residual <= 1e-10


def test_sign_pair_infeasible(ctx_i):
    d = ga.case2_data(ctx_i, 0.5, 0.5j)
    bad = ga.Genus1Data(d.a0, d.b0, d.c0, d.d0, d.alpha, d.beta, d.gamma, 1, -1, d.q1, d.q3, ctx_i)
    v = ga.squared_sum_classify(bad)
    assert v.family == "Infeasible"
    # the obstruction is the constant 4 beta gamma
    assert abs(abs(v.identity.g_constant) - 4 * abs(d.beta * d.gamma)) < 1e-8


def test_classification_scale_invariant(ctx_i):
    d = ga.case2_data(ctx_i, 0.5, 0.5j)
    assert ga.squared_sum_classify(d.scaled(2.5 - 1j)).family == "NonholoCase2"


def test_data_validation(ctx_i):
    with pytest.raises(InvalidInput):
        ga.case2_data(ctx_i, 0.5, 0.5j, 0, 2, 3)


def test_gauss_images(ctx_g):
    d = ga.holomorphic_data(ctx_g, 0.5, 0.2 + 0.3j)
    for k in (1, 2, 3):
        assert ga.projective_gap(d.gauss_image(k), d.gauss_image_numeric(k)) <= 1e-6


def test_rank_at_least_two():
    rng = np.random.default_rng(5)
    for _ in range(20):
        tau = complex(rng.uniform(-0.5, 0.5), rng.uniform(0.9, 2.0))
        ctx = ek.elliptic_context(tau)
        hs = ga.half_periods(tau)
        i, k = rng.choice(3, 2, replace=False)
        r = ga.rank2_conditions(ctx, hs[i], hs[k])
        assert r.numerical_rank in (2, 3) and r.consistent


def test_rank2_conditions_examples(ctx_i):
    r = ga.rank2_conditions(ctx_i, 0.5, 0.5j)
    assert r.bool_abs and not r.bool_affine and not r.rank2
    tau = 0.3 + 1.4j
    ctx = ek.elliptic_context(tau)
    for q1, q3 in ((0.5, tau / 2), (tau / 2, (1 + tau) / 2), (0.5, (1 + tau) / 2)):
        assert not ga.rank2_conditions(ctx, q1, q3).bool_abs
    rho = 0.5 + 0.5j * math.sqrt(3)
    r = ga.rank2_conditions(ek.elliptic_context(rho), rho / 2, (1 + rho) / 2)
    assert r.bool_abs


def test_synthetic_rank2_kernel():
    M = ga.synthetic_rank2()
    assert M.rank == 2
    k = ga.kernel_analysis(M)
    assert k.verdict == "pass" and k.residual <= 1e-9
    assert ga.kernel_residual(M.entries, 2 * k.kernel) <= 1e-9


def test_kernel_needs_rank_two(ctx_i):
    with pytest.raises(PreconditionError):
        ga.kernel_analysis(ga.period_matrix(ctx_i, 0.5, 0.5j))


def test_lattice_differences_cancellation_free():
    ctx = ek.elliptic_context(0.5 + 6.5j)
    A, B, C = ga.lattice_differences(ctx, 0.5, ctx.tau.value / 2)
    assert abs(A - (ctx.e1 - ctx.mu)) < 1e-9
    assert abs(B - (ctx.e2 - ctx.e1)) <= 1e-12 * abs(B)


def test_short_scan_report():
    cfg = RunConfig(c_max=2.0, c_step=0.05, case2_c_max=2.0, case2_c_step=0.5)
    rep = ga.verify_holomorphicity(cfg)
    v = {r.id: r for r in rep.records}
    assert v["case1.e2_ne_e3"].verdict == "pass"
    assert v["case1.period_margin"].verdict == "pass"
    assert v["rank2.no_hits"].verdict == "pass"
    assert abs(v["case2.tau_i"].margins["e1_minus_pi"] - 3.7336) < 1e-4


def test_scan_rejects_start_below_corner():
    with pytest.raises(InvalidInput):
        ga.verify_holomorphicity(RunConfig(c_min=0.5))
