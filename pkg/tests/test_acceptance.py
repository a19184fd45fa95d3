"""Acceptance criteria, one test per checkable clause, at the stated tolerances.

A pass/fail line per criterion is printed in the "acceptance criteria"
section of the pytest summary.
"""

import json
import math
import time

import numpy as np
import pytest

from epi_lab.cli import main
from epi_lab.bounds import smoothing_continuity_check
from epi_lab.densities import Gaussian, Laplace, QuarticGibbs
from epi_lab.entropy import epi_deficit
from epi_lab.experiments import SUITES, run_bound_suite
from epi_lab.psd import lemma_fuzz, logdet_strong_convexity_check, random_pd
from epi_lab.transport import brenier_map_1d, cheeger_constant, delta_inf, gaussian_map, growth_constant, w2_1d

pytestmark = pytest.mark.acceptance

criterion = pytest.mark.criterion


@pytest.fixture(scope="module")
def sweep(tmp_path_factory):
    path = tmp_path_factory.mktemp("ac1") / "sweep.json"
    start = time.perf_counter()
    code = main(["counterexample", "--eps", "0.1,0.03,0.01", "--t", "0.5", "--json", "--out", str(path)])
    elapsed = time.perf_counter() - start
    assert code == 0
    rows = json.loads(path.read_text(encoding="utf-8"))["rows"]
    return elapsed, {r["eps"]: r for r in rows}, json.loads(path.read_text(encoding="utf-8"))


@pytest.fixture(scope="module")
def default_suite():
    start = time.perf_counter()
    res = run_bound_suite(SUITES["default"]["pairs"], [0.1, 0.3, 0.5, 0.7, 0.9])
    return time.perf_counter() - start, res


@pytest.fixture(scope="module")
def growth_suite():
    return run_bound_suite(SUITES["growth"]["pairs"], [0.5], kind="growth")


# -- 1: counterexample ------------------------------------------------------

@criterion("AC1", "counterexample --eps 0.1,0.03,0.01 completes in < 60 s")
def test_ac1_runtime(sweep):
    assert sweep[0] < 60


@criterion("AC1a", "deficit strictly decreasing with eps over 0.1, 0.03, 0.01")
def test_ac1a_deficit_decreasing(sweep):
    d = [sweep[1][e]["deficit"] for e in (0.1, 0.03, 0.01)]
    assert d[0] > d[1] > d[2], d


@criterion("AC1a", "deficit < 0.05 at eps = 0.01")
def test_ac1a_deficit_level(sweep):
    assert sweep[1][0.01]["deficit"] < 0.05


@criterion("AC1b", "Omega-mass nondecreasing as eps decreases")
def test_ac1b_mass_monotone(sweep):
    m = [sweep[1][e]["omega_mass"] for e in (0.1, 0.03, 0.01)]
    assert m[0] <= m[1] <= m[2], m


@criterion("AC1b", "Omega-mass >= 0.99 at eps = 0.01")
def test_ac1b_mass_level(sweep):
    assert sweep[1][0.01]["omega_mass"] >= 0.99


@criterion("AC1c", "inf_s W2^2(mu_eps, gamma_s) >= 0.35 for eps <= 0.01")
def test_ac1c_gaussian_distance(sweep):
    assert sweep[1][0.01]["dW2_sq"] >= 0.35


@criterion("AC1d", "Hoelder-bound limit = 0.441562 within 5e-6")
def test_ac1d_holder_limit(sweep):
    assert sweep[2]["holder_limit"] == pytest.approx(0.441562, abs=5e-6)


# -- 2: Gaussian closed forms ----------------------------------------------

@criterion("AC2", "epi_deficit(G1, G4, 1/2) = 0.1115718 within 1e-6")
def test_ac2_deficit():
    assert epi_deficit(Gaussian(1.0), Gaussian(4.0), 0.5).deficit == pytest.approx(0.1115718, abs=1e-6)


@criterion("AC2", "w2_1d(G1, G4) = 1 within 1e-8")
def test_ac2_w2():
    assert w2_1d(Gaussian(1.0), Gaussian(4.0)) == pytest.approx(1.0, abs=1e-8)


@criterion("AC2", "delta_inf(G1, G4) = 1/3 within 1e-6 at (16/9, 25/9)")
def test_ac2_delta():
    s1, s2, val = delta_inf(Gaussian(1.0), Gaussian(4.0))
    assert val == pytest.approx(1 / 3, abs=1e-6)
    assert s1 == pytest.approx(16 / 9, abs=1e-6)
    assert s2 == pytest.approx(25 / 9, abs=1e-6)


# -- 3: deficit versus Delta, rescaled and fitted-Gaussian forms ---------

@criterion("AC3", "thm1/cor2/cor3 margin >= -1e-5 on the default family, all t, certified eta")
def test_ac3_suite(default_suite):
    _, res = default_suite
    assert not res.errors
    checked = [r for r in res.reports if r["inequality"] in ("thm1", "cor2", "cor3")]
    assert len(checked) == 15 * 5 * 3
    assert min(r["margin"] for r in checked) >= -1e-5


@criterion("AC3", "default suite runtime < 5 min")
def test_ac3_runtime(default_suite):
    assert default_suite[0] < 300


# -- 4: entropy-power form -------------------------------------------------

@criterion("AC4", "proportional Gaussian pairs reach equality within 1e-6")
def test_ac4_equality(default_suite):
    rows = [r for r in default_suite[1].reports
            if r["inequality"] == "cor4" and r["mu"].startswith("gaussian") and r["nu"].startswith("gaussian")]
    assert len(rows) == 6
    assert max(abs(r["margin"]) for r in rows) <= 1e-6


@criterion("AC4", "mixed pairs hold with positive margin")
def test_ac4_mixed(default_suite):
    rows = [r for r in default_suite[1].reports
            if r["inequality"] == "cor4" and not (r["mu"].startswith("gaussian") and r["nu"].startswith("gaussian"))]
    assert len(rows) == 9
    assert min(r["margin"] for r in rows) > 0


# -- 5: Rioul dominance ----------------------------------------------------

@criterion("AC5", "rioul_lower_bound <= epi_deficit + 1e-5 on every suite pair")
def test_ac5_dominance(default_suite):
    rows = [r for r in default_suite[1].reports if r["inequality"] == "rioul"]
    assert len(rows) == 75
    assert all(r["rhs"] <= r["lhs"] + 1e-5 for r in rows)


@criterion("AC5", "Rioul bound for (G1, G4, 1/2) = 0.0588915 within 1e-6")
def test_ac5_gaussian_value():
    res = run_bound_suite([["gaussian:var=1", "gaussian:var=4"]], [0.5])
    (row,) = [r for r in res.reports if r["inequality"] == "rioul"]
    assert row["rhs"] == pytest.approx(0.0588915, abs=1e-6)


# -- 6: lemma fuzz ---------------------------------------------------------

@criterion("AC6", "1000 seeded PD pairs, dims 2-8: min margin >= -1e-10 in < 10 s")
def test_ac6_fuzz():
    start = time.perf_counter()
    summary = lemma_fuzz(1000, dims=(2, 8), seed=0)
    assert time.perf_counter() - start < 10
    assert summary["min_margin"] >= -1e-10


@criterion("AC6", "A = B margin = 0 within 1e-12")
def test_ac6_equal():
    rng = np.random.default_rng(0)
    for n in range(2, 9):
        A = random_pd(rng, n)
        assert abs(logdet_strong_convexity_check(A, A, rng.uniform()).margin) <= 1e-12
    assert abs(lemma_fuzz(100, dims=(2, 8), seed=0, force_equal=True)["min_margin"]) <= 1e-12


# -- 7: transport predictions ----------------------------------------------

@criterion("AC7", "Caffarelli: sup T' <= 1 + 1e-6 on Gaussian -> QuarticGibbs maps")
def test_ac7_caffarelli():
    z = np.linspace(-8.0, 8.0, 4001)
    worst = max(np.max(gaussian_map(QuarticGibbs(a)).derivative(z)) for a in (0.05, 0.1, 0.2, 0.5))
    assert worst <= 1 + 1e-6


@criterion("AC7", "Cheeger: sup T' <= 1/alpha + 1e-4 on Laplace -> {Gaussian, QuarticGibbs}")
def test_ac7_cheeger():
    src = Laplace(1.0)
    x = np.linspace(-src.support_radius(), src.support_radius(), 20001)
    for dst in (Gaussian(1.0), Gaussian(4.0), QuarticGibbs(0.05), QuarticGibbs(0.2)):
        alpha = cheeger_constant(dst)
        assert np.max(brenier_map_1d(src, dst).derivative(x)) <= 1 / alpha + 1e-4


@criterion("AC7", "Gaussian -> Laplace growth finite with T'(0) = 0.7978846 within 1e-6")
def test_ac7_laplace_growth():
    assert math.isfinite(growth_constant(Laplace(1.0)))
    assert gaussian_map(Laplace(1.0)).derivative(0.0) == pytest.approx(0.7978846, abs=1e-6)


# -- 8: measured constants and growth bound ------------------------------

@criterion("AC8", "empirical constants strictly positive across the log-concave family")
def test_ac8_positive(growth_suite):
    assert not growth_suite.errors
    consts = [r["empirical_constant"] for r in growth_suite.reports if r["inequality"] in ("thm5", "twosided")]
    assert len(consts) == 12
    assert all(c is not None and c > 0 for c in consts)
    assert all(r["holds"] for r in growth_suite.reports if r["inequality"] == "prop8")


@criterion("AC8", "Gaussian{4}: thm5 constant 0.7010 and prop8 rhs 0.0078125 within 1e-4")
def test_ac8_gaussian4(growth_suite):
    rows = {r["inequality"]: r for r in growth_suite.reports if r["mu"] == "gaussian:var=4"}
    assert rows["thm5"]["empirical_constant"] == pytest.approx(0.7010, abs=1e-4)
    assert rows["prop8"]["rhs"] == pytest.approx(0.0078125, abs=1e-4)


# -- 9: smoothing continuity -----------------------------------------------

@criterion("AC9", "|Delta(mu_s, nu_s) - Delta(mu, nu)| decreasing over s = 0.5, 0.1, 0.02 for two non-Gaussian pairs")
@pytest.mark.parametrize("pair", [(QuarticGibbs(0.1), QuarticGibbs(0.3)), (Laplace(1.0), QuarticGibbs(0.2))],
                         ids=["quartic-quartic", "laplace-quartic"])
def test_ac9_smoothing(pair):
    rep = smoothing_continuity_check(pair[0], pair[1], [0.5, 0.1, 0.02])
    gaps = rep.delta_gaps
    assert gaps[0] > gaps[1] > gaps[2], gaps


# -- 10: determinism -------------------------------------------------------

def _capture(capsys, argv):
    assert main(argv) in (0, 1)
    return capsys.readouterr().out


@criterion("AC10", "repeated runs give byte-identical CSV/JSON (including 1 vs 4 worker threads)")
def test_ac10_determinism(capsys, monkeypatch):
    runs = [
        ["counterexample", "--eps", "0.1,0.03"],
        ["bounds", "--suite", "gaussian", "--t", "0.3,0.5", "--csv"],
        ["lemma-fuzz", "--trials", "100", "--dims", "2..8", "--seed", "42"],
        ["transport", "--src", "laplace:scale=1", "--dst", "quartic:a=0.2"],
    ]
    for argv in runs:
        outs = []
        for threads in ("1", "4", "4"):
            monkeypatch.setenv("EPI_LAB_THREADS", threads)
            outs.append(_capture(capsys, argv))
        assert outs[0] and outs[0] == outs[1] == outs[2], argv
