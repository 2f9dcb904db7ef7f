"""Acceptance suite: ten end-to-end criteria at their stated tolerances.

Each test prints one line "[PASS|FAIL] <n> <name>: <detail>".  The lines are
also collected and repeated in the pytest terminal summary.  Run directly with
``python3 tests/test_acceptance.py`` to get only the ten lines.
"""
import math
import time

import numpy as np
from scipy import special

from wlab import cyclic_cover as cc
from wlab import elliptic_kernel as ek
from wlab import genus1_analysis as ga
from wlab import genus1_classification as gc
from wlab import plane_symmetry as ps
from wlab import weierstrass_rep as wr
from wlab.config import RunConfig

SQ3 = math.sqrt(3)
RHO = 0.5 + 0.5j * SQ3
LINES = []


def _line(n, name, ok, detail):
    s = f"[{'PASS' if ok else 'FAIL'}] {n:>2} {name}: {detail}"
    LINES.append(s)
    print(s)
    return ok


def _tau_in_F(rng, im_max=3.0):
    while True:
        t = complex(rng.uniform(-0.5, 0.5), rng.uniform(SQ3 / 2, im_max))
        if abs(t) >= 1:
            return t


def test_01_elliptic_constants():
    t0 = time.perf_counter()
    ci = ek.elliptic_context(1j)
    cr = ek.elliptic_context(RHO)
    dt = time.perf_counter() - t0
    g1 = abs(ci.e1 - math.gamma(0.25) ** 4 / (8 * math.pi))
    g2 = abs(ci.e3)
    g3 = abs(ci.mu + math.pi)
    g4 = abs(cr.mu + 2 * SQ3 * math.pi / 3)
    ok = g1 <= 1e-8 and g2 <= 1e-10 and g3 <= 1e-9 and g4 <= 1e-9 and dt < 1
    assert _line(1, "elliptic constants", ok,
                 f"e1 gap {g1:.1e}, |e3| {g2:.1e}, mu(i) gap {g3:.1e}, mu(rho) gap {g4:.1e}, {dt:.3f}s")


def test_02_ode_legendre_two_route():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    ode = leg = two = 0.0
    for _ in range(10):
        tau = _tau_in_F(rng)
        ctx = ek.elliptic_context(tau)
        z = rng.uniform(-1, 1, 100) + rng.uniform(-1, 1, 100) * tau
        ode = max(ode, ek.ode_residual(z, ctx))
        two = max(two, ek.two_route_gap(z, ctx))
        leg = max(leg, ek.legendre_residual(ctx, 0.37))
    dt = time.perf_counter() - t0
    ok = ode <= 1e-8 and leg <= 1e-8 and two <= 1e-9 and dt < 10
    assert _line(2, "wp ODE / Legendre / two-route", ok,
                 f"ode {ode:.1e}, legendre {leg:.1e}, two-route {two:.1e}, {dt:.2f}s")


def test_03_j_reality_locus():
    rng = np.random.default_rng(3)
    ys = rng.uniform(SQ3 / 2, 2.5, 13)
    th = rng.uniform(math.pi / 3, 2 * math.pi / 3, 12)
    taus = ([0.5 + 1j * y for y in ys] + [-0.5 + 1j * y for y in ys]
            + list(np.exp(1j * th)) + [1j * y for y in rng.uniform(1, 2.5, 12)])
    im = max(abs(ek.elliptic_context(t).j.imag) for t in taus)
    jr = abs(ek.elliptic_context(RHO).j)
    ji = abs(ek.elliptic_context(1j).j - 1728)
    ok = len(taus) == 50 and im <= 1e-8 and jr <= 1e-8 and ji <= 1e-6
    assert _line(3, "j reality locus", ok,
                 f"max |Im j| {im:.1e} on {len(taus)} samples, |j(rho)| {jr:.1e}, |j(i)-1728| {ji:.1e}")


def test_04_period_engine():
    rng = np.random.default_rng(4)
    worst, ranks, mismatch = 0.0, set(), 0
    for _ in range(100):
        tau = _tau_in_F(rng)
        ctx = ek.elliptic_context(tau)
        hp = ga.half_periods(tau)
        i, k = rng.choice(3, 2, replace=False)
        pm = ga.period_matrix(ctx, hp[i], hp[k], quad=True)
        worst = max(worst, pm.quad_gap)
        r = ga.rank2_conditions(ctx, hp[i], hp[k])
        ranks.add(r.numerical_rank)
        mismatch += r.rank2 != (r.numerical_rank == 2)
    ok = worst <= 1e-7 and ranks <= {2, 3} and mismatch == 0
    assert _line(4, "genus-1 period engine", ok,
                 f"closed vs quadrature {worst:.1e}, ranks {sorted(ranks)}, rank2 mismatches {mismatch}")


def test_05_holomorphicity_scan():
    t0 = time.perf_counter()
    rep = ga.verify_holomorphicity(RunConfig())
    dt = time.perf_counter() - t0
    rec = {r.id: r for r in rep.records}
    margin = rec["case1.period_margin"].margins["min_margin"]
    gap = rec["case1.e2_ne_e3"].values
    e1pi = rec["case2.tau_i"].margins["e1_minus_pi"]
    hits = rec["rank2.no_hits"].values["both_conditions"]
    ok = margin > 0 and gap["n_below_floor"] == 0 and e1pi > 3.7 and hits == 0 and dt < 120
    assert _line(5, "holomorphicity scan", ok,
                 f"min margin {margin:.3f}, min |e2-e3| {gap['min_abs']:.2e} at c={gap['min_at_c']:.2f} "
                 f"({gap['n_below_floor']} of {gap['n_tau']} below 1e-6), e1-pi {e1pi:.4f}, "
                 f"rank-2 hits {hits}, {dt:.1f}s")


def test_06_dc_family():
    rng = np.random.default_rng(6)
    sym = all(wr.dc_family_data(a).conformality_symbolic() is True for a in (0, 1, 1 + 1j))
    ends = all(wr.planar_end_check(wr.dc_family_data(a), p).status == "pass"
               for a in (0, 1, 1 + 1j) for p in (0, "inf"))
    worst = 0.0
    for a in (0, 1, 1 + 1j):
        q = wr.dc_family_data(a)
        z = rng.uniform(-2, 2, 30) + 1j * rng.uniform(-2, 2, 30)
        z = z[np.abs(z) > 0.05]
        worst = max(worst, float(np.max(np.abs(wr.immerse(q, z) - np.real(q.antiderivative(z)).T))))
    ok = sym and ends and worst <= 1e-8
    assert _line(6, "DC family", ok, f"symbolic {sym}, planar ends {ends}, immersion gap {worst:.1e}")


def test_07_theta_geometry():
    worst = 0.0
    for m in np.linspace(0, 3, 5):
        for r0 in np.linspace(0.3, 2.5, 5):
            a = m * np.exp(0.7j)
            V = ps.plane_Q1(a), ps.plane_Q2(a, r0), ps.plane_Q3()
            num = (ps.theta_sup_numeric(V[0], V[1]), ps.theta_sup_numeric(V[1], V[2]),
                   ps.theta_sup_numeric(V[0], V[2]))
            worst = max(worst, max(abs(x - y) for x, y in zip(ps.theta_closed_forms(a, r0), num)))
    rng = np.random.default_rng(7)
    on = off = 0
    for m in rng.uniform(0, 4, 10):
        a = m * np.exp(1j * rng.uniform(0, 2 * np.pi))
        r0 = (1 + m * m) ** -0.25
        on += ps.swap_condition(a, r0)
        off += ps.swap_condition(a, r0 * rng.choice([0.9, 1.1]))
    ok = worst <= 1e-6 and on == 10 and off == 0
    assert _line(7, "theta geometry", ok, f"closed vs numeric {worst:.1e}, swap on-curve {on}/10, off-curve {off}/10")


def test_08_classification():
    q8 = {r.id: r for r in gc.quartic_suite().records}
    c12 = gc.curve12_suite(n=10_000)
    on = q8["symmetry8_on_curve"].values["residual"]
    off = q8["symmetry8_needs_relation"].values["residual"]
    anti = q8["antiholomorphic"].values["chosen"]["on_curve"]
    v12 = {r.id: r for r in c12.records}
    ok = (on <= 1e-10 and off > 1e-3 and anti <= 1e-10 and c12.ok
          and v12["group_order"].values["order"] == 12 and gc.degree_genus(3) == 1)
    assert _line(8, "genus-1 classification", ok,
                 f"8-sym {on:.1e} / off {off:.1e}, anti {anti:.1e}, 12-sym suite {c12.verdict} "
                 f"(order {v12['group_order'].values['order']}, 10^4 sector samples)")


def test_09_nonexistence():
    t0 = time.perf_counter()
    rep = cc.nonexistence_pipeline((2, 3, 4, 5, 6), seed=42)
    dt = time.perf_counter() - t0
    rec = {r.id: r for r in rep.records}
    bad = []
    for g in (2, 3, 4, 5, 6):
        for c in (1, 2):
            if rec[f"g{g}.case{c}"].values["verdict"] != "Infeasible":
                bad.append(f"g{g}c{c}")
        r3 = rec[f"g{g}.case3"]
        if not (r3.values["squared_sum"]["verdict"] == "SolutionFamily"
                and r3.values["verdict"] == "PeriodContradiction"
                and r3.margins["first"] > 1e-3 and r3.margins["second"] > 1e-3):
            bad.append(f"g{g}c3")
    r4 = rec["g3.case4"].values
    if not (r4["squared_sum"]["verdict"] == "SolutionFamily" and r4["degree"] == 4
            and sorted({d for p in r4["required"] for d in p}) == [2, 8]):
        bad.append("g3c4")
    m3 = min(min(rec[f"g{g}.case3"].margins["first"], rec[f"g{g}.case3"].margins["second"])
             for g in (2, 3, 4, 5, 6))
    xi = abs(cc.collapsed_integrals(2)["xi1"] - 0.5 * special.beta(1 / 6, 2 / 3))
    ok = rep.ok and not bad and xi <= 1e-8 and dt < 120
    assert _line(9, "nonexistence pipeline", ok,
                 f"{len(rep.records)} records {rep.verdict}, min case-3 margin {m3:.3f}, "
                 f"case-4 degree {r4['degree']} vs {{2, 8}}, xi1 vs Beta {xi:.1e}, {dt:.1f}s"
                 + (f", off: {bad}" if bad else ""))


def test_10_determinism():
    cfg = RunConfig()
    a = [ga.verify_holomorphicity(cfg).to_json(), cc.nonexistence_pipeline(cfg.genera, cfg.seed).to_json(),
         gc.quartic_suite(seed=cfg.seed).to_json()]
    b = [ga.verify_holomorphicity(cfg).to_json(), cc.nonexistence_pipeline(cfg.genera, cfg.seed).to_json(),
         gc.quartic_suite(seed=cfg.seed).to_json()]
    same = [x == y for x, y in zip(a, b)]
    assert _line(10, "determinism", all(same), f"byte-identical reports {sum(same)}/{len(same)}")


if __name__ == "__main__":
    import sys

    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for t in tests:
        try:
            t()
        except AssertionError:
            pass
    sys.exit(0 if all(s.startswith("[PASS]") for s in LINES) else 1)
