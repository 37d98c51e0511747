"""Slow reference implementations and population-level checks.

Nothing here touches the compiled or vectorized kernels: ranks are found by
counting the defining sets directly and the formulas are evaluated in exact
rational arithmetic.  Only the tie-break arrangement is shared with the fast
path, so that both see the same X order for the same seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import _rng
from .core import xi
from .errors import ConstantY
from .ranks import as_sample, x_order


_BLOCK = 1024


def _count_ranks(ys: np.ndarray) -> tuple[list[int], list[int]]:
    # r_i = #{j: y_j <= y_i}, l_i = #{j: y_j >= y_i}, by explicit comparison
    r: list[int] = []
    l: list[int] = []
    for s in range(0, ys.size, _BLOCK):
        block = ys[s : s + _BLOCK, None]
        r.extend(int(c) for c in (ys[None, :] <= block).sum(axis=1))
        l.extend(int(c) for c in (ys[None, :] >= block).sum(axis=1))
    return r, l


def xi_naive(sample, y=None, *, seed: int = _rng.DEFAULT_SEED) -> float:
    """O(n^2) xi_n: direct rank counting and the tie formula as written."""
    sample = as_sample(sample, y)
    n = sample.n
    order = x_order(sample, seed)
    r, l = _count_ranks(sample.ys[order])
    num = sum(abs(r[i + 1] - r[i]) for i in range(n - 1))
    den = 2 * sum(li * (n - li) for li in l)
    if den == 0:
        raise ConstantY("y is constant; xi is undefined")
    return float(1 - Fraction(n * num, den))


def tau_squared_naive(ys) -> float:
    """tau^2 plug-in from its double and triple sums over phi = min(R_i, R_j).

    With F the empirical CDF, phi(y_i, y_j) = min(R(i), R(j)) / n, so::

        E phi^2          -> n^-4 sum_ij min(R_i, R_j)^2
        E phi_12 phi_13  -> n^-5 sum_i (sum_j min(R_i, R_j))^2
        E phi            -> n^-3 sum_ij min(R_i, R_j)
        E G(1 - G)       -> n^-3 sum_i L(i) (n - L(i))

    No sorting or prefix sums are used.
    """
    ys = np.asarray(ys, dtype=np.float64).reshape(-1)
    n = ys.size
    if n > 50_000:
        raise ValueError("tau_squared_naive is quadratic; keep n <= 50000")
    R, L = _count_ranks(ys)
    # entries <= n, so each block's int64 sums are exact for n <= 50000
    Ra = np.array(R, dtype=np.int64)
    sq = 0
    rows: list[int] = []
    for s in range(0, n, _BLOCK):
        phi = np.minimum(Ra[s : s + _BLOCK, None], Ra[None, :])
        sq += int((phi * phi).sum())
        rows.extend(int(v) for v in phi.sum(axis=1))
    e_phi2 = Fraction(sq, n**4)
    e_phi12_phi13 = Fraction(sum(s * s for s in rows), n**5)
    e_phi = Fraction(sum(rows), n**3)
    d = Fraction(sum(Li * (n - Li) for Li in L), n**3)
    if d == 0:
        raise ConstantY("y is constant; tau^2 is undefined")
    return float((e_phi2 - 2 * e_phi12_phi13 + e_phi**2) / d**2)


def tau_squared_discrete(values, probs) -> float:
    """Population tau^2 for a discrete law with the given atoms and masses.

    Evaluates the defining expectations over independent copies Y1, Y2, Y3
    by summing over atoms, with F(t) = P(Y <= t) and G(t) = P(Y >= t).
    """
    values = np.asarray(values, dtype=np.float64)
    probs = np.asarray(probs, dtype=np.float64)
    if values.shape != probs.shape or np.any(probs < 0) or not np.isclose(probs.sum(), 1.0):
        raise ValueError("probs must be a distribution over values")
    F = np.array([probs[values <= v].sum() for v in values])
    G = np.array([probs[values >= v].sum() for v in values])
    phi = np.minimum.outer(F, F)
    w = np.outer(probs, probs)
    e_phi2 = float((w * phi**2).sum())
    inner = phi @ probs  # E[phi(y, Y2)] for each atom y
    e_phi12_phi13 = float((probs * inner**2).sum())
    e_phi = float((w * phi).sum())
    d = float((probs * G * (1 - G)).sum())
    if d == 0:
        raise ConstantY("law is degenerate")
    return (e_phi2 - 2 * e_phi12_phi13 + e_phi**2) / d**2


@dataclass(frozen=True)
class GenerativeModel:
    """A law for (X, Y): ``sampler(rng, n)`` returns arrays (xs, ys)."""

    sampler: Callable[[np.random.Generator, int], tuple[np.ndarray, np.ndarray]]
    description: str = ""


def bernoulli_product_model(p: float, p_prime: float) -> GenerativeModel:
    def sampler(rng, n):
        x = (rng.random(n) < p).astype(np.float64)
        z = (rng.random(n) < p_prime).astype(np.float64)
        return x, x * z

    return GenerativeModel(sampler, f"X~Bernoulli({p}), Y=XZ, Z~Bernoulli({p_prime})")


def independent_uniform_model() -> GenerativeModel:
    def sampler(rng, n):
        return rng.random(n), rng.random(n)

    return GenerativeModel(sampler, "X, Y independent Uniform[0,1]")


def functional_model(f: Callable[[np.ndarray], np.ndarray], description: str = "") -> GenerativeModel:
    def sampler(rng, n):
        x = rng.uniform(-1.0, 1.0, n)
        return x, f(x)

    return GenerativeModel(sampler, description or "X~Uniform[-1,1], Y=f(X)")


def xi_population_mc(
    model: GenerativeModel, n: int = 10_000, reps: int = 50, seed: int = _rng.DEFAULT_SEED
) -> tuple[float, float]:
    """Monte Carlo estimate of the population coefficient and its standard error.

    Replicate ``k`` draws data from stream ``(seed, SIMULATION, k, 0)`` and
    breaks x ties with ``derive_seed(seed, SIMULATION, k, 1)``.
    """
    if reps < 2:
        raise ValueError("reps must be at least 2")
    vals = np.empty(reps)
    for k in range(reps):
        xs, ys = model.sampler(_rng.stream(seed, _rng.SIMULATION, k, 0), n)
        vals[k] = xi(xs, ys, seed=_rng.derive_seed(seed, _rng.SIMULATION, k, 1)).value
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(reps))
