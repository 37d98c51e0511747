"""Independence tests built on xi_n."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend, _rng
from .core import _xi_from_arrays, _xi_value, reverse_seed, xi
from .errors import ConstantX, ConstantY, TiesInY, VarianceDegenerate
from .ranks import _order_with_ties, as_sample, global_y_ranks

CONTINUOUS_VARIANCE = 0.4
VARIANCE_FLOOR = 1e-12

_SQRT2 = math.sqrt(2.0)


def normal_cdf(z: float) -> float:
    """Standard normal CDF, 0.5 * erfc(-z / sqrt(2)) via the C library erfc.

    Relative error is at the level of double rounding over the whole line,
    including the far tails, so no complement is ever formed.
    """
    return 0.5 * math.erfc(-z / _SQRT2)


def normal_sf(z: float) -> float:
    return 0.5 * math.erfc(z / _SQRT2)


_erfc_vec = np.frompyfunc(math.erfc, 1, 1)


def normal_cdf_array(z) -> np.ndarray:
    z = np.asarray(z, dtype=np.float64)
    return 0.5 * _erfc_vec(-z / _SQRT2).astype(np.float64)


@dataclass(frozen=True)
class TauSquaredEstimate:
    """Plug-in estimate of the null variance of sqrt(n) xi_n.

    value = (a_n - 2 b_n + c_n**2) / d_n**2, evaluated exactly from the
    integer sums and rounded once.
    """

    value: float
    a_n: float
    b_n: float
    c_n: float
    d_n: float


def tau_squared_hat(ys) -> TauSquaredEstimate:
    """O(n log n) estimate of tau^2 from the y values alone.

    With u the sorted values of R(i) = #{j: y_j <= y_i}, v its prefix sums
    and L(i) = #{j: y_j >= y_i}::

        a = n^-4 sum (2n - 2i + 1) u_i^2
        b = n^-5 sum (v_i + (n - i) u_i)^2
        c = n^-3 sum (2n - 2i + 1) u_i
        d = n^-3 sum L(i) (n - L(i))
    """
    g = global_y_ranks(ys)
    n = g.R.size
    if n < 2:
        raise ConstantY("need at least two y values")
    u = np.sort(g.R)
    A, B, C, D = _backend.impl.tau_sums(u, g.L)
    if D == 0:
        raise ConstantY("y is constant; tau^2 is undefined")
    return TauSquaredEstimate(
        value=(n * n * A - 2 * n * B + C * C) / (D * D),
        a_n=A / n**4,
        b_n=B / n**5,
        c_n=C / n**3,
        d_n=D / n**3,
    )


@dataclass(frozen=True)
class TestResult:
    """Outcome of a one-sided (right tail) test of independence.

    For the permutation method ``variance`` is the permutation variance of
    sqrt(n) times the statistic, and ``z`` is standardized by it; the p-value
    comes from counting only.
    """

    __test__ = False  # keep pytest from collecting this class

    statistic: float
    n: int
    variance: float
    z: float
    p_value: float
    method: str
    n_permutations: Optional[int] = None
    seed: Optional[int] = None
    statistic_name: str = "xi"

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "statistic_name": self.statistic_name,
            "n": self.n,
            "variance": self.variance,
            "z": self.z,
            "p_value": self.p_value,
            "method": self.method,
            "n_permutations": self.n_permutations,
            "seed": self.seed,
        }


def test_asymptotic(
    sample,
    y=None,
    *,
    y_continuous: Optional[bool] = None,
    force: bool = False,
    seed: int = _rng.DEFAULT_SEED,
) -> TestResult:
    """Normal-approximation test of independence.

    With ``y_continuous`` the null variance is 2/5; otherwise it is
    estimated by ``tau_squared_hat``.  ``None`` picks continuous exactly when
    y has no duplicates.  Declaring continuity for tied y raises TiesInY
    unless ``force`` is set.
    """
    sample = as_sample(sample, y)
    seed = _rng.check_seed(seed)
    res = xi(sample, seed=seed)
    if y_continuous is None:
        y_continuous = not res.y_had_ties
    elif y_continuous and res.y_had_ties and not force:
        raise TiesInY("y has duplicated values; pass force=True to use the continuous variance anyway")
    if y_continuous:
        variance, method = CONTINUOUS_VARIANCE, "asymptotic_continuous"
    else:
        variance, method = tau_squared_hat(sample.ys).value, "asymptotic_general"
        if not variance > VARIANCE_FLOOR:
            raise VarianceDegenerate(f"estimated tau^2 = {variance!r} is not positive")
    z = math.sqrt(res.n) * res.value / math.sqrt(variance)
    return TestResult(
        statistic=res.value,
        n=res.n,
        variance=variance,
        z=z,
        p_value=normal_sf(z),
        method=method,
        seed=res.seed_used,
    )


def _permutations(seed: int, n: int, count: int) -> np.ndarray:
    get = _rng.substreams(seed, _rng.PERMUTATION)
    perms = np.empty((count, n), dtype=np.int64)
    for b in range(count):
        perms[b] = get(b).permutation(n)
    return perms


def test_permutation(
    sample,
    y=None,
    *,
    statistic: str = "xi",
    n_permutations: int = 199,
    seed: int = _rng.DEFAULT_SEED,
) -> TestResult:
    """Permutation test of independence, p = (1 + #{T_b >= T}) / (B + 1).

    Replicate ``b`` shuffles y against x with the permutation drawn from
    ``substreams(seed, PERMUTATION)(b)`` and evaluates the statistic with the
    same tie-break seed as the observed value.
    """
    sample = as_sample(sample, y)
    seed = _rng.check_seed(seed)
    if n_permutations < 1:
        raise ValueError("n_permutations must be at least 1")
    if statistic not in ("xi", "xi_symmetrized"):
        raise ValueError(f"unknown statistic {statistic!r}")
    xs, ys, n = sample.xs, sample.ys, sample.n
    perms = _permutations(seed, n, n_permutations)

    g = global_y_ranks(ys)
    order, _ = _order_with_ties(xs, seed)
    num, den, _ = _backend.impl.xi_sums(g.R, g.L, order)
    if den == 0:
        raise ConstantY("y is constant; xi is undefined")
    observed = _xi_value(n, num, den)
    # shuffled y in x order is R[perm][order] = R[perm[:, order]]
    nums = _backend.impl.abs_diff_sums(g.R, np.ascontiguousarray(perms[:, order]))
    permuted = np.array([_xi_value(n, int(k), den) for k in nums])

    if statistic == "xi_symmetrized":
        rseed = reverse_seed(seed)
        reverse = _xi_from_arrays(ys, xs, rseed, err=ConstantX)
        observed = max(observed, reverse.value)
        # x stays in place, so its ranks and the reverse denominator are fixed
        gx = global_y_ranks(xs)
        for b in range(n_permutations):
            rorder, _ = _order_with_ties(ys[perms[b]], rseed)
            rnum, _, _ = _backend.impl.xi_sums(gx.R, gx.L, rorder)
            permuted[b] = max(permuted[b], _xi_value(n, rnum, reverse.spread_sum))

    exceed = int(np.count_nonzero(permuted >= observed))
    scaled = math.sqrt(n) * permuted
    variance = float(scaled.var(ddof=1)) if n_permutations > 1 else 0.0
    z = math.sqrt(n) * observed / math.sqrt(variance) if variance > 0 else 0.0
    return TestResult(
        statistic=observed,
        n=n,
        variance=variance,
        z=z,
        p_value=(1 + exceed) / (n_permutations + 1),
        method="permutation",
        n_permutations=n_permutations,
        seed=seed,
        statistic_name=statistic,
    )


# library functions, not pytest tests, even when imported into a test module
test_asymptotic.__test__ = False
test_permutation.__test__ = False
