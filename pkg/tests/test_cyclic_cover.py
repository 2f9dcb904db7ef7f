import math

import numpy as np
import pytest
from scipy import special

from wlab import cyclic_cover as cc
from wlab.errors import InvalidInput

GENERA = (2, 3, 4, 5, 6)


# -- branch data ------------------------------------------------------------------

@pytest.mark.parametrize("g,n,order", [(2, 3, 5), (3, 4, 4), (4, 4, 5), (6, 3, 13)])
def test_rh_order(g, n, order):
    assert cc.rh_order(g, n) == order


def test_rh_order_rejects():
    with pytest.raises(InvalidInput):
        cc.rh_order(2, 5)
    with pytest.raises(InvalidInput):
        cc.rh_order(0, 3)


def test_exponent_triples():
    # g = 2: entries in {1, 2} summing to 2 mod 3
    assert cc.branch_exponent_triples(2) == [(1, 2, 2), (2, 1, 2), (2, 2, 1)]
    # g = 3: the extra (1, 1, 1) triple gives the fourth case
    assert len(cc.branch_exponent_triples(3)) == 4
    for g in (2, 4, 5, 6):
        assert len(cc.branch_exponent_triples(g)) == 3
    for g in GENERA:
        m = g + 1
        for a, b, c in cc.branch_exponent_triples(g):
            assert (a + 1 + b + c) % m == 0
            assert {a % m, b % m, c % m} <= {1, g}


def test_dim_h0():
    assert cc.dim_h0_helper(4, 1) == 5
    assert cc.dim_h0_helper(1, 3) == 6
    assert cc.dim_h0_helper(3, 3) == 8


@pytest.mark.parametrize("g", GENERA)
def test_case_congruences(g):
    for c in cc.cases_for(g):
        spec = cc.CoverSpec(g, c)
        assert spec.congruences_hold()
        assert spec.exponents["q1"] == 1


def test_case4_only_genus3():
    with pytest.raises(InvalidInput):
        cc.CoverSpec(4, 4)
    with pytest.raises(InvalidInput):
        cc.CoverSpec(1, 1)


def test_points_on_cover():
    spec = cc.CoverSpec(4, 2)
    z, w = spec.points(np.random.default_rng(0), 30)
    assert np.max(np.abs(w ** spec.m - spec.rhs(z)) / np.abs(spec.rhs(z))) < 1e-12


# -- differentials -------------------------------------------------------------------

def test_case1_g2_basis():
    names = [f.name for f in cc.holomorphic_basis(cc.CoverSpec(2, 1))]
    assert names == ["t^0 dz/w", "t^1 dz/w"]


@pytest.mark.parametrize("g,case", [(g, c) for g in GENERA for c in cc.cases_for(g)])
def test_basis_holomorphic_and_canonical(g, case):
    spec = cc.CoverSpec(g, case)
    basis = cc.holomorphic_basis(spec)
    assert len(basis) == g
    for f in basis:
        assert all(v >= 0 for v in f.divisor.values())
        assert f.degree() == 2 * g - 2
    assert cc.forms_independent(basis, np.random.default_rng(1))


@pytest.mark.parametrize("g,case", [(2, 1), (3, 4), (5, 3), (6, 2)])
def test_exact_divisor_matches_numeric(g, case):
    spec = cc.CoverSpec(g, case)
    for f in cc.holomorphic_basis(spec) + list(cc.eta_forms_cover(spec)):
        for p in cc.BRANCH_POINTS:
            assert abs(f.numeric_order(p) - f.order_at(p)) < 0.05, (f.name, p)


@pytest.mark.parametrize("g,case", [(g, c) for g in GENERA for c in cc.cases_for(g)])
def test_eta_double_poles_no_residue(g, case):
    spec = cc.CoverSpec(g, case)
    for f, pole in zip(cc.eta_forms_cover(spec), cc.ETA_POLES):
        d = f.divisor
        assert d[pole] == -2
        assert all(v >= 0 for p, v in d.items() if p != pole)
        assert abs(f.residue_at(pole)) <= 1e-8


# -- symmetry-reduced data ------------------------------------------------------------

def test_equivariance_example():
    spec = cc.CoverSpec(2, 3)
    z, w = spec.points(np.random.default_rng(2), 12)
    d = cc.reduced_data(spec, [0.3, -1, 0.2j, 1], 1, 1, 1)
    assert d.equivariance_residual(z, w) <= 1e-10


def test_equivariance_breaks_off_reduced_form():
    spec = cc.CoverSpec(4, 1)
    z, w = spec.points(np.random.default_rng(3), 12)
    d = cc.reduced_data(spec, [1, 1, 1, 1], 1, 1, 1)
    H = d.H.copy()
    H[0, spec.g - 2] = 0.5  # a t^{g-2} term is not allowed
    bad = cc.CoverData(spec, H, 1, 1, 1)
    assert bad.equivariance_residual(z, w) > 1e-3


def test_equivariance_case4_needs_h20():
    spec = cc.CoverSpec(3, 4)
    z, w = spec.points(np.random.default_rng(4), 12)
    d = cc.reduced_data(spec, [1, 0.5, -0.3, 2], 1, 1, 1)
    assert d.equivariance_residual(z, w) <= 1e-10
    H = d.H.copy()
    H[1, 0] = 1j * H[0, 0]  # h20 = i h10 instead of -i h10
    assert cc.CoverData(spec, H, 1, 1, 1).equivariance_residual(z, w) > 1e-3


def test_zero_coefficients_rejected():
    with pytest.raises(InvalidInput):
        cc.reduced_data(cc.CoverSpec(2, 1), [1, 1, 1, 1], 0, 1, 1)


# -- squared sum ------------------------------------------------------------------------

@pytest.mark.parametrize("g", GENERA)
def test_cases_1_2_infeasible(g):
    rng = np.random.default_rng(g)
    for case in (1, 2):
        d = cc.reduced_data(cc.CoverSpec(g, case), rng.normal(size=4), 1.2, -0.7 + 0.3j, 0.4j)
        ss = cc.squared_sum_cover(d)
        assert ss.verdict == "Infeasible" and not ss.system_feasible
        assert abs(ss.constraint_constant) > 1e-3


def test_constraint_constant_scales():
    spec = cc.CoverSpec(3, 1)
    base = cc.squared_sum_cover(cc.reduced_data(spec, [1, 1, 1, 1], 1, 1, 1))
    big = cc.squared_sum_cover(cc.reduced_data(spec, [1, 1, 1, 1], 1, 2, 3))
    assert abs(big.constraint_constant) > abs(base.constraint_constant)


@pytest.mark.parametrize("g", GENERA)
def test_case3_family(g):
    al, be, ga = 1.1 - 0.2j, 0.4 + 0.9j, -0.6 + 0.3j
    d = cc.reduced_data(cc.CoverSpec(g, 3), cc.case3_family(al, be, ga), al, be, ga)
    ss = cc.squared_sum_cover(d)
    assert ss.verdict == "SolutionFamily"
    assert ss.family_gap <= 1e-9 and ss.data_residual <= 1e-9


def test_case3_off_family_fails():
    al, be, ga = 1.0, 0.5, 2.0
    p = cc.case3_family(al, be, ga)
    p[0] += 0.3
    d = cc.reduced_data(cc.CoverSpec(3, 3), p, al, be, ga)
    assert cc.squared_sum_cover(d).data_residual > 1e-3


def test_case4_relation():
    spec = cc.CoverSpec(3, 4)
    al, be = 1 + 0.5j, 0.3 - 0.8j
    ok = cc.squared_sum_cover(cc.reduced_data(spec, [1, -1, 1, 1], al, be, al - 2 * be))
    bad = cc.squared_sum_cover(cc.reduced_data(spec, [1, -1, 1, 1], al, be, 0.7))
    assert ok.verdict == "SolutionFamily"
    assert bad.verdict == "Infeasible"


# -- collapsed periods -------------------------------------------------------------------

def test_beta_value_g2():
    # frozen from an independent 30-digit evaluation of B(1/6, 2/3)/2
    assert abs(0.5 * special.beta(1 / 6, 2 / 3) - 3.338738023566916) < 1e-14
    assert abs(cc.collapsed_integrals(2)["xi1"] - 3.338738023566916) <= 1e-8


@pytest.mark.parametrize("g", GENERA)
def test_collapsed_vs_oracles(g):
    I = cc.collapsed_integrals(g)
    o = cc.collapsed_integrals_oracle(g)
    for k, v in o["quadpack"].items():
        assert abs(I[k] - v) <= 1e-10 * abs(v), k
    for k, v in o["beta"].items():
        assert abs(I[k] - v) <= 1e-12 * abs(v), k


@pytest.mark.parametrize("g", (2, 3, 5))
def test_contour_matches_collapsed(g):
    cp = cc.contour_periods(g)
    closed = cc.closed_periods(g)
    for k in cc.COLLAPSED_NAMES:
        assert abs(cp[k] - closed[k]) <= 1e-8 * max(1.0, abs(closed[k])), k
    # the pinned branch is real and positive at z = 3/2
    w = cp["_w_at_3/2"]
    assert abs(w.imag) < 1e-9 and w.real > 0


@pytest.mark.parametrize("g", GENERA)
def test_period_contradiction(g):
    rep = cc.period_contradiction(g)
    assert rep.ok
    rec = {r.id: r for r in rep.records}
    I = rec["integrals_positive"].values
    assert I["eta1"] < I["xi1"]
    m = rec["sign_contradiction"].margins
    assert m["first"] > 1e-3 and m["second"] > 1e-3
    assert max(rec["pullbacks"].values.values()) <= 1e-9


@pytest.mark.parametrize("g", GENERA)
def test_sign_ratios_closed_form(g):
    # observed identity: both ratios have modulus 2^(-2/(g+1))
    v = {r.id: r for r in cc.period_contradiction(g).records}["sign_contradiction"].values
    t = 2 ** (-2 / (g + 1))
    assert abs(v["ratio_from_eta1"] - t) < 1e-10
    assert abs(v["ratio_from_eta3"] + t) < 1e-10


def test_collapsed_rejects_g1():
    with pytest.raises(InvalidInput):
        cc.collapsed_integrals(1)


# -- Gauss map degree --------------------------------------------------------------------

def test_fiber_count_and_degree():
    assert cc.fiber_count(3.0) == 4
    assert cc.map_degree(np.random.default_rng(6)) == 4
    with pytest.raises(InvalidInput):
        cc.fiber_count(-1.0)  # target of the branch point z = 0


def test_required_pairs():
    assert cc.required_degree_pairs(10, 6) == [(2, 8), (8, 2)]


def test_degree_report():
    rep = cc.gauss_degree_check()
    assert rep.ok
    v = {r.id: r.values for r in rep.records}["h10_nonzero_branch"]
    assert v["degree"] == 4 and v["fiber_at_3"] == 4


# -- pipeline -----------------------------------------------------------------------------

def test_pipeline_single_genus():
    rep = cc.nonexistence_pipeline((3,))
    ids = [r.id for r in rep.records]
    assert ids == ["g3.branch_data", "g3.case1", "g3.case2", "g3.case3", "g3.case4"]
    assert rep.ok
    rec = {r.id: r for r in rep.records}
    assert rec["g3.case1"].values["verdict"] == "Infeasible"
    assert rec["g3.case3"].values["verdict"] == "PeriodContradiction"
    assert rec["g3.case4"].values["degree"] == 4


def test_pipeline_case_filter():
    rep = cc.nonexistence_pipeline((2,), cases=(3,))
    assert [r.id for r in rep.records] == ["g2.branch_data", "g2.case3"]
    with pytest.raises(InvalidInput):
        cc.nonexistence_pipeline((2,), cases=(4,))


def test_pipeline_thread_invariant(monkeypatch):
    a = cc.nonexistence_pipeline((2, 4)).to_json()
    monkeypatch.setenv("WLAB_THREADS", "4")
    assert cc.nonexistence_pipeline((2, 4)).to_json() == a


def test_rotation_root():
    spec = cc.CoverSpec(5, 3)
    assert abs(spec.rho ** spec.m - 1) < 1e-14
    assert abs(spec.rho - complex(math.cos(math.pi / 3), math.sin(math.pi / 3))) < 1e-15
