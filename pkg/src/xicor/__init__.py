"""xi rank correlation: estimation, independence tests and simulation studies.

>>> from xicor import xi
>>> round(xi(range(1, 21), range(1, 21)).value, 6)
0.857143
"""

from ._rng import DEFAULT_SEED, derive_seed
from .core import XiResult, population_xi_bernoulli_product, xi, xi_symmetrized, xi_tie_averaged
from .errors import (
    ConstantX,
    ConstantY,
    DomainError,
    NonFiniteValue,
    SampleTooSmall,
    TiesInY,
    VarianceDegenerate,
    XiError,
)
from .inference import (
    TauSquaredEstimate,
    TestResult,
    normal_cdf,
    tau_squared_hat,
    test_asymptotic,
    test_permutation,
)
from .ranks import GlobalRanks, PairedSample, RankProfile, global_y_ranks, x_order, y_ranks_ordered

__all__ = [
    "DEFAULT_SEED",
    "ConstantX",
    "ConstantY",
    "DomainError",
    "GlobalRanks",
    "NonFiniteValue",
    "PairedSample",
    "RankProfile",
    "SampleTooSmall",
    "TauSquaredEstimate",
    "TestResult",
    "TiesInY",
    "VarianceDegenerate",
    "XiError",
    "XiResult",
    "derive_seed",
    "global_y_ranks",
    "normal_cdf",
    "population_xi_bernoulli_product",
    "tau_squared_hat",
    "test_asymptotic",
    "test_permutation",
    "x_order",
    "xi",
    "xi_symmetrized",
    "xi_tie_averaged",
    "y_ranks_ordered",
]
