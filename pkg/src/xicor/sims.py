"""Simulation studies: null distributions, dependent-Bernoulli convergence,
power curves over noise levels, and runtime scaling.

Replicate data always comes from ``stream(seed, SIMULATION, *path, 0)`` and
x ties are broken with ``derive_seed(seed, SIMULATION, *path, 1)``, so every
replicate is a pure function of (seed, path).  Replicates may run on a
thread pool; results are gathered by index, hence identical for any thread
count.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import _rng
from .core import population_xi_bernoulli_product, xi
from .inference import (
    CONTINUOUS_VARIANCE,
    normal_cdf_array,
    tau_squared_hat,
    test_asymptotic,
    test_permutation,
)
from .ranks import PairedSample

SCENARIOS = (
    "linear",
    "step",
    "w_shape",
    "sinusoid",
    "circular",
    "heteroskedastic",
    "independent_uniform",
    "independent_binomial",
    "bernoulli_product",
    "custom",
)
NOISY_SCENARIOS = SCENARIOS[:6]

# calibration sample size for tau^2 in the binomial null study
CALIBRATION_SIZE = 1_000_000

THREADS_ENV = "XICOR_THREADS"


def resolve_threads(threads: Optional[int] = None) -> int:
    if threads is None:
        env = os.environ.get(THREADS_ENV, "").strip()
        threads = int(env) if env else 1
    if threads <= 0:
        threads = os.cpu_count() or 1
    return threads


def _map(fn: Callable[[int], object], count: int, threads: Optional[int]) -> list:
    threads = resolve_threads(threads)
    if threads == 1 or count < 2:
        return [fn(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, range(count)))


def _replicate(seed: int, *path: int) -> tuple[np.random.Generator, int]:
    return (
        _rng.stream(seed, _rng.SIMULATION, *path, 0),
        _rng.derive_seed(seed, _rng.SIMULATION, *path, 1),
    )


@dataclass(frozen=True)
class ScenarioSpec:
    """A synthetic law for (X, Y).

    ``lam`` is the noise level in [0, 1] for the six noisy scenarios.
    ``params`` holds ``p`` and ``p_prime`` for ``bernoulli_product``;
    ``sampler(rng, n) -> (xs, ys)`` is required for ``custom``.
    """

    kind: str
    lam: float = 0.0
    n: int = 100
    params: dict = field(default_factory=dict)
    sampler: Optional[Callable] = None

    def __post_init__(self):
        if self.kind not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.kind!r}")
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam}")
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if self.kind == "custom" and self.sampler is None:
            raise ValueError("custom scenario needs a sampler")


def _step(x: np.ndarray) -> np.ndarray:
    # -3, 2, -4, -3 on [-1,-.5), [-.5,0), [0,.5), [.5,1]
    return np.select([x < -0.5, x < 0.0, x < 0.5], [-3.0, 2.0, -4.0], default=-3.0)


def _w_shape(x: np.ndarray) -> np.ndarray:
    return np.where(x < 0, np.abs(x + 0.5), np.abs(x - 0.5))


def _draw(spec: ScenarioSpec, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    n, lam, kind = spec.n, spec.lam, spec.kind
    if kind == "custom":
        return spec.sampler(rng, n)
    if kind == "independent_uniform":
        return rng.random(n), rng.random(n)
    if kind == "independent_binomial":
        return rng.binomial(3, 0.5, n).astype(float), rng.binomial(3, 0.5, n).astype(float)
    if kind == "bernoulli_product":
        p, pp = spec.params["p"], spec.params["p_prime"]
        x = (rng.random(n) < p).astype(float)
        return x, x * (rng.random(n) < pp)

    x = rng.uniform(-1.0, 1.0, n)
    if kind == "circular":
        z = 2.0 * rng.integers(0, 2, n) - 1.0
    eps = rng.standard_normal(n)
    if kind == "linear":
        y = 0.5 * x + 3 * lam * eps
    elif kind == "step":
        y = _step(x) + 10 * lam * eps
    elif kind == "w_shape":
        y = _w_shape(x) + 0.75 * lam * eps
    elif kind == "sinusoid":
        y = np.cos(8 * np.pi * x) + 3 * lam * eps
    elif kind == "circular":
        y = z * np.sqrt(1.0 - x * x) + 0.9 * lam * eps
    else:  # heteroskedastic
        sigma = (np.abs(x) <= 0.5).astype(float)
        y = 3 * (sigma * (1 - lam) + lam) * eps
    return x, y


def generate(spec: ScenarioSpec, seed: int = _rng.DEFAULT_SEED) -> PairedSample:
    """Draw ``spec.n`` pairs; X ~ U[-1, 1] and N(0, 1) noise for the noisy kinds.

    Draw order within the stream is fixed: x, then the circular sign, then
    the Gaussian noise (numpy's ziggurat on a Philox stream).
    """
    xs, ys = _draw(spec, _rng.stream(seed, _rng.SIMULATION))
    return PairedSample(xs, ys)


def ks_distance_normal(values: np.ndarray, variance: float) -> float:
    """Kolmogorov distance between the empirical law of ``values`` and N(0, variance)."""
    s = np.sort(np.asarray(values, dtype=np.float64))
    m = s.size
    cdf = normal_cdf_array(s / math.sqrt(variance))
    upper = np.arange(1, m + 1) / m - cdf
    lower = cdf - np.arange(0, m) / m
    return float(max(upper.max(), lower.max()))


def null_distribution_study(
    y_kind: str = "uniform",
    n: int = 1000,
    reps: int = 10_000,
    seed: int = _rng.DEFAULT_SEED,
    bins: int = 40,
    threads: Optional[int] = None,
) -> dict:
    """Distribution of sqrt(n) xi_n for independent X and Y of the same kind.

    ``y_kind`` is ``uniform`` (U[0,1]) or ``binomial_3_half``
    (Binomial(3, 1/2)).  The reference variance is 2/5 for uniform; for the
    binomial kind it is tau_squared_hat on CALIBRATION_SIZE fresh draws.
    """
    if y_kind not in ("uniform", "binomial_3_half"):
        raise ValueError(f"unknown y_kind {y_kind!r}")
    if reps < 100:
        raise ValueError("reps must be at least 100")
    kind = "independent_uniform" if y_kind == "uniform" else "independent_binomial"
    spec = ScenarioSpec(kind, n=n)
    if y_kind == "uniform":
        tau2, source = CONTINUOUS_VARIANCE, "continuous"
    else:
        cal = _rng.stream(seed, _rng.CALIBRATION).binomial(3, 0.5, CALIBRATION_SIZE)
        tau2, source = tau_squared_hat(cal.astype(float)).value, f"estimated_n={CALIBRATION_SIZE}"

    def one(r):
        rng, tie_seed = _replicate(seed, r)
        xs, ys = _draw(spec, rng)
        return xi(xs, ys, seed=tie_seed).value

    vals = np.array(_map(one, reps, threads))
    scaled = math.sqrt(n) * vals
    half = 4.0 * math.sqrt(tau2)
    counts, edges = np.histogram(scaled, bins=bins, range=(-half, half))
    return {
        "study": "null",
        "y_kind": y_kind,
        "n": n,
        "reps": reps,
        "seed": seed,
        "tau_squared": tau2,
        "tau_squared_source": source,
        "mean": float(scaled.mean()),
        "variance": float(scaled.var(ddof=1)),
        "ks_distance": ks_distance_normal(scaled, tau2),
        "xi_quantile_95": float(np.quantile(vals, 0.95)),
        "histogram": {"edges": edges.tolist(), "counts": counts.tolist()},
    }


def bernoulli_dependence_study(
    p: float = 0.4,
    p_prime: float = 0.5,
    n: int = 1000,
    reps: int = 10_000,
    seed: int = _rng.DEFAULT_SEED,
    threads: Optional[int] = None,
) -> dict:
    """Moments of xi_n when X ~ Bernoulli(p) and Y = X Z, Z ~ Bernoulli(p')."""
    population = population_xi_bernoulli_product(p, p_prime)
    spec = ScenarioSpec("bernoulli_product", n=n, params={"p": p, "p_prime": p_prime})

    def one(r):
        rng, tie_seed = _replicate(seed, r)
        xs, ys = _draw(spec, rng)
        if ys.min() == ys.max():
            return math.nan  # constant y: xi undefined for this draw
        return xi(xs, ys, seed=tie_seed).value

    vals = np.array(_map(one, reps, threads))
    skipped = int(np.isnan(vals).sum())
    vals = vals[~np.isnan(vals)]
    return {
        "study": "bernoulli",
        "p": p,
        "p_prime": p_prime,
        "n": n,
        "reps": reps,
        "seed": seed,
        "population_xi": population,
        "mean": float(vals.mean()),
        "sd": float(vals.std(ddof=1)),
        "sd_sqrt_n": float(math.sqrt(n) * vals.std(ddof=1)),
        "skipped_constant_y": skipped,
    }


@dataclass(frozen=True)
class PowerCurve:
    kind: str
    lambdas: list
    rates: list
    std_errors: list
    alpha: float
    n: int
    reps: int
    seed: int
    test: str

    def to_dict(self) -> dict:
        return {
            "study": "power",
            "scenario": self.kind,
            "test": self.test,
            "alpha": self.alpha,
            "n": self.n,
            "reps": self.reps,
            "seed": self.seed,
            "lambdas": list(self.lambdas),
            "power": list(self.rates),
            "std_error": list(self.std_errors),
        }


POWER_TESTS = ("asymptotic", "asymptotic_continuous", "asymptotic_general", "permutation")


def _p_value(sample: PairedSample, test: str, seed: int, n_permutations: int) -> float:
    if test == "permutation":
        return test_permutation(sample, n_permutations=n_permutations, seed=seed).p_value
    if test == "asymptotic_continuous":
        return test_asymptotic(sample, y_continuous=True, force=True, seed=seed).p_value
    if test == "asymptotic_general":
        return test_asymptotic(sample, y_continuous=False, seed=seed).p_value
    return test_asymptotic(sample, seed=seed).p_value


def power_curve(
    kind: str,
    lambda_grid: Sequence[float],
    n: int = 100,
    reps: int = 500,
    alpha: float = 0.05,
    test: str = "asymptotic",
    seed: int = _rng.DEFAULT_SEED,
    n_permutations: int = 199,
    params: Optional[dict] = None,
    threads: Optional[int] = None,
) -> PowerCurve:
    """Rejection rate (p <= alpha) over ``reps`` datasets at each noise level.

    ``test`` is one of POWER_TESTS; ``asymptotic`` uses the 2/5 variance
    when y has no duplicates and the estimated tau^2 otherwise, while
    ``asymptotic_continuous`` always uses 2/5.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    if test not in POWER_TESTS:
        raise ValueError(f"unknown test {test!r}")
    grid = [float(v) for v in lambda_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("lambda grid must be strictly increasing")
    rates, ses = [], []
    for k, lam in enumerate(grid):
        spec = ScenarioSpec(kind, lam=lam, n=n, params=params or {})

        def one(r, spec=spec, k=k):
            rng, test_seed = _replicate(seed, k, r)
            xs, ys = _draw(spec, rng)
            return _p_value(PairedSample(xs, ys), test, test_seed, n_permutations) <= alpha

        rate = float(np.mean(_map(one, reps, threads)))
        rates.append(rate)
        ses.append(math.sqrt(rate * (1 - rate) / reps))
    return PowerCurve(kind, grid, rates, ses, alpha, n, reps, seed, test)


def mean_xi_curve(
    kind: str, lambda_grid: Sequence[float], n: int = 100, reps: int = 200, seed: int = _rng.DEFAULT_SEED
) -> list:
    """Average xi_n at each noise level (monotone decline check)."""
    out = []
    for k, lam in enumerate(lambda_grid):
        spec = ScenarioSpec(kind, lam=float(lam), n=n)
        vals = []
        for r in range(reps):
            rng, tie_seed = _replicate(seed, k, r)
            vals.append(xi(*_draw(spec, rng), seed=tie_seed).value)
        out.append(float(np.mean(vals)))
    return out


def runtime_benchmark(
    n_grid: Sequence[int] = (1_000, 10_000, 100_000),
    reps: int = 21,
    seed: int = _rng.DEFAULT_SEED,
    slack: float = 1.5,
) -> dict:
    """Median wall time of xi plus the continuous asymptotic test, per n.

    ``scaling_ok`` holds when every ratio time(n_{k+1}) / time(n_k) stays
    below ``slack`` times the n log n prediction
    (n_{k+1} log n_{k+1}) / (n_k log n_k).  With the default slack and a
    tenfold step that bound is about 19, against 32 for n^1.5 and 100 for n^2.
    """
    from . import _backend

    samples = []
    for k, n in enumerate(n_grid):
        rng = _rng.stream(seed, _rng.SIMULATION, k)
        samples.append(PairedSample(rng.random(n), rng.random(n)))
        xi(samples[-1])  # warm-up
    # sizes are timed round-robin so a burst of machine load hits all of them
    times = [[] for _ in samples]
    for _ in range(reps):
        for k, sample in enumerate(samples):
            t0 = time.perf_counter()
            xi(sample)
            test_asymptotic(sample, y_continuous=True)
            times[k].append(time.perf_counter() - t0)
    medians = [float(np.median(t)) for t in times]
    ratios = [b / a for a, b in zip(medians, medians[1:])]
    limits = [slack * (b * math.log(b)) / (a * math.log(a)) for a, b in zip(n_grid, n_grid[1:])]
    return {
        "study": "bench",
        "backend": _backend.name,
        "n_grid": list(n_grid),
        "reps": reps,
        "median_seconds": medians,
        "ratios": ratios,
        "ratio_limits": limits,
        "scaling_ok": all(r < m for r, m in zip(ratios, limits)),
    }
