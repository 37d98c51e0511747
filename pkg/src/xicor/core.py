"""The xi coefficient and its variants."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _backend, _rng
from .errors import ConstantX, ConstantY, DomainError
from .ranks import PairedSample, as_sample, global_y_ranks, _order_with_ties


@dataclass(frozen=True)
class XiResult:
    """Value of xi_n(X, Y) together with the integers it was computed from.

    ``value == 1 - n * abs_diff_sum / (2 * spread_sum)``, where
    ``abs_diff_sum`` is sum |r_{i+1} - r_i| and ``spread_sum`` is
    sum l_i (n - l_i).
    """

    value: float
    n: int
    x_had_ties: bool
    y_had_ties: bool
    seed_used: Optional[int]
    formula: str
    abs_diff_sum: int
    spread_sum: int

    def as_fraction(self) -> Fraction:
        return 1 - Fraction(self.n * self.abs_diff_sum, 2 * self.spread_sum)

    def __float__(self) -> float:
        return self.value


def _xi_value(n: int, num: int, den: int) -> float:
    # single correctly rounded division of exact integers
    return (2 * den - n * num) / (2 * den)


def _xi_from_arrays(xs: np.ndarray, ys: np.ndarray, seed: int, err=ConstantY) -> XiResult:
    n = xs.size
    # xs and ys come from a validated PairedSample, so skip global_y_ranks
    order, x_tied = _order_with_ties(xs, seed)
    num, den, y_tied = _backend.impl.xi_parts(ys, np.argsort(ys).astype(np.int64, copy=False), order)
    if den == 0:
        raise err("y is constant; xi is undefined")
    return XiResult(
        value=_xi_value(n, num, den),
        n=n,
        x_had_ties=x_tied,
        y_had_ties=y_tied,
        seed_used=seed if x_tied else None,
        formula="general" if y_tied else "no_tie",
        abs_diff_sum=num,
        spread_sum=den,
    )


def xi(sample, y=None, *, seed: int = _rng.DEFAULT_SEED) -> XiResult:
    """xi_n(X, Y) for ``sample`` (or for ``x=sample`` and ``y``).

    Ties among the x values are broken uniformly at random using a stream
    keyed by ``seed``; ties among the y values enter only through the
    denominator and need no randomization.  Raises ConstantY when all y
    values coincide.
    """
    sample = as_sample(sample, y)
    return _xi_from_arrays(sample.xs, sample.ys, _rng.check_seed(seed))


def reverse_seed(seed: int) -> int:
    """Tie-break seed used for xi_n(Y, X) inside the symmetrized statistic."""
    return _rng.derive_seed(seed, _rng.REVERSE_DIRECTION)


def xi_symmetrized(sample, y=None, *, seed: int = _rng.DEFAULT_SEED) -> float:
    """max(xi_n(X, Y), xi_n(Y, X)).

    The forward direction uses ``seed`` itself, so it equals ``xi(sample,
    seed=seed)``; the reverse direction uses ``reverse_seed(seed)``.
    """
    sample = as_sample(sample, y)
    seed = _rng.check_seed(seed)
    fwd = _xi_from_arrays(sample.xs, sample.ys, seed)
    rev = _xi_from_arrays(sample.ys, sample.xs, reverse_seed(seed), err=ConstantX)
    return max(fwd.value, rev.value)


def xi_tie_averaged(
    sample, y=None, *, n_draws: int = 1000, seed: int = _rng.DEFAULT_SEED
) -> tuple[float, float]:
    """Mean and sample standard deviation of xi_n over random tie-breaks.

    Draw ``d`` uses tie-break seed ``derive_seed(seed, TIE_AVERAGE, d)``.
    When x has no ties every draw is identical and ``(xi, 0.0)`` is returned.
    """
    sample = as_sample(sample, y)
    seed = _rng.check_seed(seed)
    if n_draws < 1:
        raise ValueError("n_draws must be at least 1")
    xs, n = sample.xs, sample.n
    g = global_y_ranks(sample.ys)
    order, tied = _order_with_ties(xs, seed)
    num, den, _ = _backend.impl.xi_sums(g.R, g.L, order)
    if den == 0:
        raise ConstantY("y is constant; xi is undefined")
    if not tied:
        return _xi_value(n, num, den), 0.0
    values = np.empty(n_draws)
    for d in range(n_draws):
        order, _ = _order_with_ties(xs, _rng.derive_seed(seed, _rng.TIE_AVERAGE, d))
        num, _, _ = _backend.impl.xi_sums(g.R, g.L, order)
        values[d] = _xi_value(n, num, den)
    sd = float(values.std(ddof=1)) if n_draws > 1 else 0.0
    return float(values.mean()), sd


def population_xi_bernoulli_product(p: float, p_prime: float) -> float:
    """Limit of xi_n for X ~ Bernoulli(p), Y = X Z with Z ~ Bernoulli(p').

    Equals p'(1 - p) / (1 - p p').  The inputs are read at their shortest
    decimal representation and the ratio is formed exactly, so (0.4, 0.5)
    gives 0.375 rather than its float-arithmetic neighbour.
    """
    for name, v in (("p", p), ("p_prime", p_prime)):
        if not (isinstance(v, (int, float)) and math.isfinite(v) and 0.0 < v < 1.0):
            raise DomainError(f"{name} must lie in (0, 1), got {v!r}")
    p, q = Fraction(repr(float(p))), Fraction(repr(float(p_prime)))
    return float(q * (1 - p) / (1 - p * q))
