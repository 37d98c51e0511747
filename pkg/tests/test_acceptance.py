"""Acceptance suite: one test per criterion, each at its stated tolerance.

Every test prints a single ``ACCEPTANCE <id> PASS|FAIL`` line (shown even
under output capture) before asserting, so ``pytest -v -k acceptance`` reads
as a checklist.
"""

import json
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from xicor import cli, population_xi_bernoulli_product, tau_squared_hat, xi
from xicor.oracle import bernoulli_product_model, xi_population_mc
from xicor.sims import (
    NOISY_SCENARIOS,
    bernoulli_dependence_study,
    null_distribution_study,
    power_curve,
    runtime_benchmark,
)
from xicor._rng import stream
from xicor.verify import run_sweeps

GOLDEN = Path(__file__).parent / "golden"
DATA = Path(__file__).parent / "data" / "sample.csv"


@pytest.fixture
def verdict(capsys):
    def report(label, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPTANCE {label}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail

    return report


def test_01_exact_extremes(verdict):
    t0 = time.perf_counter()
    ident = xi(np.arange(1, 21), np.arange(1, 21))
    alt = xi([1, 2, 3, 4], [2, 4, 1, 3])
    ok = ident.as_fraction() == Fraction(18, 21) and ident.value == 18 / 21 and alt.value == -0.4
    verdict(
        "1 exact extremes",
        ok,
        f"identity n=20 -> {ident.as_fraction()}, alternating n=4 -> {alt.value}, {time.perf_counter() - t0:.3f}s",
    )


def test_02_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    report = run_sweeps(1000, seed=2)
    elapsed = time.perf_counter() - t0
    sizes = [c["samples"] for c in report["checks"]]
    ok = report["passed"] and sizes == [1000, 500] and elapsed < 30
    verdict("2 oracle equivalence", ok, f"samples {sizes}, counterexample {report['counterexample']}, {elapsed:.1f}s < 30s")


def test_03_null_variance(verdict):
    t0 = time.perf_counter()
    d = null_distribution_study("uniform", n=1000, reps=10_000, seed=3)
    elapsed = time.perf_counter() - t0
    ok = 0.37 <= d["variance"] <= 0.43 and d["ks_distance"] < 0.03 and elapsed < 120
    verdict(
        "3 null variance",
        ok,
        f"var {d['variance']:.4f} in [0.37, 0.43], KS {d['ks_distance']:.4f} < 0.03, {elapsed:.1f}s < 120s",
    )


def test_04_discrete_null_variance(verdict):
    t0 = time.perf_counter()
    rng = stream(4)
    bern = tau_squared_hat(rng.integers(0, 2, 100_000).astype(float)).value
    unif = tau_squared_hat(rng.random(100_000)).value
    elapsed = time.perf_counter() - t0
    ok = 0.98 <= bern <= 1.02 and 0.38 <= unif <= 0.42 and elapsed < 10
    verdict(
        "4 discrete null",
        ok,
        f"Bernoulli(1/2) {bern:.4f} in [0.98, 1.02], U[0,1] {unif:.4f} in [0.38, 0.42], {elapsed:.2f}s < 10s",
    )


def test_05_dependent_bernoulli(verdict):
    t0 = time.perf_counter()
    d = bernoulli_dependence_study(0.4, 0.5, n=1000, reps=10_000, seed=5)
    elapsed = time.perf_counter() - t0
    ok = 0.370 <= d["mean"] <= 0.380 and 0.036 <= d["sd"] <= 0.044 and elapsed < 180
    verdict(
        "5 dependent Bernoulli",
        ok,
        f"mean {d['mean']:.4f} in [0.370, 0.380], sd {d['sd']:.4f} in [0.036, 0.044], {elapsed:.1f}s < 180s",
    )


def test_06_population_formula(verdict):
    exact = population_xi_bernoulli_product(0.4, 0.5)
    est, se = xi_population_mc(bernoulli_product_model(0.4, 0.5), n=10_000, reps=50, seed=6)
    ok = exact == 0.375 and abs(est - 0.375) <= 3 * se
    verdict("6 population formula", ok, f"exact {exact!r}, MC {est:.5f} +- {se:.5f}, |diff| <= 3 SE")


def test_07_size_calibration(verdict):
    t0 = time.perf_counter()
    asym = power_curve("independent_uniform", [0.0], n=100, reps=2000, test="asymptotic_continuous", seed=7)
    perm = power_curve("independent_uniform", [0.0], n=100, reps=2000, test="permutation", seed=8)
    a, p = asym.rates[0], perm.rates[0]
    ok = 0.03 <= a <= 0.07 and 0.03 <= p <= 0.07
    verdict(
        "7 size calibration",
        ok,
        f"asymptotic {a:.4f}, permutation {p:.4f}, both in [0.03, 0.07], {time.perf_counter() - t0:.1f}s",
    )


def test_08_power_sanity(verdict):
    t0 = time.perf_counter()
    grid = [round(0.1 * k, 1) for k in range(11)]
    curves = {kind: power_curve(kind, grid, n=100, reps=500, seed=8) for kind in NOISY_SCENARIOS}
    noiseless = {kind: curves[kind].rates[0] for kind in ("sinusoid", "w_shape")}
    violations = []
    for kind, pc in curves.items():
        for k in range(len(grid) - 1):
            a, b = pc.rates[k], pc.rates[k + 1]
            if b > a + 2 * np.hypot(pc.std_errors[k], pc.std_errors[k + 1]):
                violations.append((kind, grid[k + 1], a, b))
    ok = all(v == 1.0 for v in noiseless.values()) and not violations
    verdict(
        "8 power sanity",
        ok,
        f"lambda=0 power {noiseless}, monotonicity violations {violations}, {time.perf_counter() - t0:.1f}s",
    )


def test_09_performance(verdict):
    d = runtime_benchmark([1_000, 10_000, 100_000], reps=21)
    at_1e4 = d["median_seconds"][1]
    ok = at_1e4 < 0.1 and d["scaling_ok"]
    ratios = ", ".join(f"{r:.1f} < {m:.1f}" for r, m in zip(d["ratios"], d["ratio_limits"]))
    verdict(
        "9 performance",
        ok,
        f"{d['backend']} backend, median {at_1e4 * 1e3:.2f} ms at n=1e4 < 100 ms, ratios {ratios}",
    )


def test_10_cli_determinism(verdict, capsys):
    cases = json.loads((GOLDEN / "cases.json").read_text())
    mismatched = []
    for name, argv in cases.items():
        argv = [str(DATA) if a == "{data}" else a for a in argv]
        expected = (GOLDEN / name).read_text()
        for extra in ([], [], ["--threads", "1"], ["--threads", "0"]):
            assert cli.main(argv + extra) == 0
            if capsys.readouterr().out != expected:
                mismatched.append((name, extra))
    verdict(
        "10 CLI determinism",
        not mismatched,
        f"{len(cases)} fixtures x (2 runs, threads 1, threads max), mismatches {mismatched}",
    )
