import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xicor import (
    ConstantY,
    TiesInY,
    VarianceDegenerate,
    normal_cdf,
    tau_squared_hat,
    test_asymptotic,
    test_permutation,
    xi,
)
from xicor import inference
from xicor.oracle import tau_squared_discrete, tau_squared_naive
from xicor.sims import ScenarioSpec, generate


class TestNormalCdf:
    def test_center(self):
        assert normal_cdf(0.0) == 0.5

    def test_quantile(self):
        assert abs(normal_cdf(1.6448536269514722) - 0.95) <= 1e-8

    def test_far_tail(self):
        assert 0 < normal_cdf(-10.0) < 1e-20

    def test_against_mpmath(self):
        mpmath.mp.dps = 40
        for z in np.linspace(-12, 12, 961):
            ref = float(mpmath.ncdf(z))
            assert abs(normal_cdf(z) - ref) <= 1e-10
            if z < 0:
                assert abs(normal_cdf(z) - ref) <= 1e-13 * ref

    def test_symmetry_and_monotone(self):
        zs = np.linspace(-8, 8, 1601)
        vals = np.array([normal_cdf(z) for z in zs])
        assert np.all(np.diff(vals) >= 0)
        for z in zs[::40]:
            assert abs(normal_cdf(-z) - (1 - normal_cdf(z))) <= 1e-15

    def test_array_version_matches(self):
        zs = np.linspace(-9, 9, 37)
        np.testing.assert_array_equal(inference.normal_cdf_array(zs), [normal_cdf(z) for z in zs])


@pytest.mark.usefixtures("backend")
class TestTauSquared:
    def test_two_point_hand_value(self):
        est = tau_squared_hat([1, 2])
        assert (est.a_n, est.b_n, est.c_n, est.d_n) == (7 / 16, 13 / 32, 5 / 8, 1 / 8)
        assert est.value == 1.0
        assert tau_squared_naive([1, 2]) == 1.0

    def test_constant(self):
        with pytest.raises(ConstantY):
            tau_squared_hat([5, 5, 5])

    def test_identity_of_intermediates(self, rng):
        est = tau_squared_hat(rng.integers(0, 6, 300))
        assert est.value == pytest.approx((est.a_n - 2 * est.b_n + est.c_n**2) / est.d_n**2, rel=1e-9)

    @settings(max_examples=150)
    @given(st.lists(st.integers(-4, 4), min_size=2, max_size=80), st.randoms(use_true_random=False))
    def test_invariances(self, ys, rnd):
        if len(set(ys)) < 2:
            return
        ys = np.array(ys, dtype=float)
        base = tau_squared_hat(ys).value
        shuffled = list(ys)
        rnd.shuffle(shuffled)
        assert tau_squared_hat(shuffled).value == base
        assert tau_squared_hat(np.exp(ys) + 2 * ys).value == base

    def test_no_ties_depends_on_n_only(self, rng):
        vals = {tau_squared_hat(rng.standard_normal(257)).value for _ in range(5)}
        assert len(vals) == 1

    def test_matches_naive(self, rng):
        for k in range(500):
            n = int(rng.integers(2, 101))
            ys = rng.integers(0, 1 + k % 7, n) if k % 3 else rng.random(n)
            if np.all(ys == ys[0]):
                continue
            fast, slow = tau_squared_hat(ys).value, tau_squared_naive(ys)
            assert abs(fast - slow) <= 1e-12 * abs(slow)

    def test_continuous_limit(self, rng):
        assert abs(tau_squared_hat(rng.random(100_000)).value - 0.4) <= 0.02

    def test_bernoulli_half_limit(self, rng):
        assert abs(tau_squared_hat(rng.integers(0, 2, 100_000)).value - 1.0) <= 0.02

    def test_binomial_population_value(self, rng):
        pmf = [1 / 8, 3 / 8, 3 / 8, 1 / 8]
        exact = tau_squared_discrete([0, 1, 2, 3], pmf)
        assert tau_squared_discrete([0, 1], [0.5, 0.5]) == pytest.approx(1.0, abs=1e-14)
        assert abs(tau_squared_hat(rng.binomial(3, 0.5, 1_000_000)).value - exact) <= 0.01


@pytest.mark.usefixtures("backend")
class TestAsymptotic:
    def test_zero_statistic_gives_half(self):
        res = test_asymptotic([1, 2], [1, 2], y_continuous=True)
        assert res.statistic == 0.0 and res.p_value == 0.5

    def test_five_percent_point(self):
        z = math.sqrt(100) * (1.6449 * math.sqrt(0.4 / 100)) / math.sqrt(0.4)
        assert inference.normal_sf(z) == pytest.approx(0.05, abs=1e-4)

    def test_fields(self, rng):
        x, y = rng.random(100), rng.random(100)
        res = test_asymptotic(x, y, y_continuous=True)
        assert res.method == "asymptotic_continuous" and res.variance == 0.4
        assert res.z == pytest.approx(math.sqrt(100) * xi(x, y).value / math.sqrt(0.4), rel=1e-15)
        assert res.p_value == inference.normal_sf(res.z)

    def test_auto_mode(self, rng):
        x = rng.random(200)
        assert test_asymptotic(x, rng.random(200)).method == "asymptotic_continuous"
        y = rng.integers(0, 3, 200)
        res = test_asymptotic(x, y)
        assert res.method == "asymptotic_general"
        assert res.variance == tau_squared_hat(y).value

    def test_general_uses_estimate(self, rng):
        x, y = rng.random(200), rng.integers(0, 3, 200)
        res = test_asymptotic(x, y, y_continuous=False)
        assert res.variance == tau_squared_hat(y).value

    def test_refuses_continuous_with_ties(self, rng):
        x, y = rng.random(50), rng.integers(0, 3, 50)
        with pytest.raises(TiesInY):
            test_asymptotic(x, y, y_continuous=True)
        assert test_asymptotic(x, y, y_continuous=True, force=True).variance == 0.4

    def test_strong_dependence(self):
        s = generate(ScenarioSpec("sinusoid", lam=0.0, n=100), seed=3)
        assert test_asymptotic(s).p_value < 1e-4

    def test_identity_tiny_p(self):
        assert test_asymptotic(np.arange(100), np.arange(100), y_continuous=True).p_value < 1e-10

    def test_p_decreasing_in_statistic(self):
        stats = np.linspace(-0.5, 1.0, 301)
        ps = [inference.normal_sf(math.sqrt(100) * s / math.sqrt(0.4)) for s in stats]
        assert np.all(np.diff(ps) < 0)

    def test_degenerate_variance(self, monkeypatch, rng):
        monkeypatch.setattr(
            inference, "tau_squared_hat", lambda ys: inference.TauSquaredEstimate(0.0, 0, 0, 0, 1)
        )
        with pytest.raises(VarianceDegenerate):
            test_asymptotic(rng.random(20), rng.integers(0, 3, 20), y_continuous=False)


@pytest.mark.usefixtures("backend")
class TestPermutation:
    def test_counting_floor(self):
        res = test_permutation(np.arange(100), np.arange(100), n_permutations=199)
        assert res.p_value == 1 / 200 == 0.005
        assert res.n_permutations == 199 and res.method == "permutation"

    def test_matches_literal_recomputation(self, rng):
        # the fast path must equal xi on (xs, ys[perm]) with the same tie seed
        from xicor import _rng

        xs, ys = rng.integers(0, 6, 60), rng.integers(0, 6, 60)
        seed, B = 99, 30
        res = test_permutation(xs, ys, n_permutations=B, seed=seed)
        obs = xi(xs, ys, seed=seed).value
        get = _rng.substreams(seed, _rng.PERMUTATION)
        perm_vals = [xi(xs, ys[get(b).permutation(60)], seed=seed).value for b in range(B)]
        assert res.statistic == obs
        assert res.p_value == (1 + sum(v >= obs for v in perm_vals)) / (B + 1)

    def test_symmetrized_matches_literal(self, rng):
        from xicor import _rng, xi_symmetrized

        xs, ys = rng.integers(0, 6, 40), rng.integers(0, 6, 40)
        seed, B = 5, 25
        res = test_permutation(xs, ys, statistic="xi_symmetrized", n_permutations=B, seed=seed)
        obs = xi_symmetrized(xs, ys, seed=seed)
        get = _rng.substreams(seed, _rng.PERMUTATION)
        vals = [xi_symmetrized(xs, ys[get(b).permutation(40)], seed=seed) for b in range(B)]
        assert res.statistic == obs
        assert res.p_value == (1 + sum(v >= obs for v in vals)) / (B + 1)

    def test_deterministic(self, rng):
        x, y = rng.random(80), rng.random(80)
        assert test_permutation(x, y, seed=4) == test_permutation(x, y, seed=4)

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            test_permutation([1, 2, 3], [3, 1, 2], n_permutations=0)
        with pytest.raises(ValueError):
            test_permutation([1, 2, 3], [3, 1, 2], statistic="rho")
        with pytest.raises(ConstantY):
            test_permutation([1, 2, 3], [1, 1, 1])


def test_permutation_size(rng):
    reps = 500
    rejections = 0
    for r in range(reps):
        x, y = rng.random(100), rng.random(100)
        rejections += test_permutation(x, y, n_permutations=199, seed=r).p_value <= 0.05
    assert abs(rejections / reps - 0.05) <= 0.02


def test_permutation_noiseless_sinusoid_always_floor():
    hits = sum(
        test_permutation(generate(ScenarioSpec("sinusoid", n=100), seed=r), n_permutations=199, seed=r).p_value
        == 0.005
        for r in range(100)
    )
    assert hits >= 99


@pytest.mark.slow
def test_asymptotic_agrees_with_permutation():
    # 2999 permutations keep the Monte Carlo error of the permutation p-value
    # near 0.009, well inside the 0.02 agreement band
    close = 0
    for r in range(200):
        g = np.random.default_rng(1000 + r)
        x, y = g.random(1000), g.random(1000)
        pa = test_asymptotic(x, y, y_continuous=True, seed=r).p_value
        pp = test_permutation(x, y, n_permutations=2999, seed=r).p_value
        close += abs(pa - pp) <= 0.02
    assert close >= 0.95 * 200
