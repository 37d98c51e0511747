"""Sample container and the rank quantities every statistic is built from."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import _backend, _rng
from .errors import NonFiniteValue, SampleTooSmall


def _as_finite(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise NonFiniteValue(f"{name} contains NaN or infinite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PairedSample:
    """n paired observations (x_i, y_i); values are copied and frozen."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        xs = _as_finite(self.xs, "xs")
        ys = _as_finite(self.ys, "ys")
        if xs.shape != ys.shape:
            raise ValueError(f"xs and ys differ in length ({xs.size} vs {ys.size})")
        if xs.size < 2:
            raise SampleTooSmall(f"need at least 2 observations, got {xs.size}")
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "ys", ys)

    @property
    def n(self) -> int:
        return int(self.xs.size)

    def swapped(self) -> "PairedSample":
        return PairedSample(self.ys, self.xs)


def as_sample(sample, y=None) -> PairedSample:
    """Accept either a PairedSample or separate x and y sequences."""
    if isinstance(sample, PairedSample):
        if y is not None:
            raise TypeError("pass either a PairedSample or x and y, not both")
        return sample
    if y is None:
        raise TypeError("y is required when the first argument is not a PairedSample")
    return PairedSample(sample, y)


@dataclass(frozen=True)
class RankProfile:
    """Y-ranks laid out in X-increasing order.

    ``r[i]`` counts points whose y is <= the y of the i-th point in X order,
    ``l[i]`` counts those whose y is >=.  ``seed_used`` is None when X had no
    ties, since the arrangement is then unique.
    """

    order: np.ndarray
    r: np.ndarray
    l: np.ndarray
    seed_used: Optional[int] = None


@dataclass(frozen=True)
class GlobalRanks:
    R: np.ndarray
    L: np.ndarray


def has_ties(values) -> bool:
    s = np.sort(np.asarray(values))
    return bool(np.any(s[1:] == s[:-1]))


def _order_with_ties(xs: np.ndarray, seed: int) -> tuple[np.ndarray, bool]:
    order = np.argsort(xs).astype(np.int64, copy=False)
    if not _backend.impl.adjacent_ties(xs, order):
        return order, False
    s = xs[order]
    tie = s[1:] == s[:-1]
    # re-sort on the unique key (dense rank of x) * n + random permutation:
    # tied entries end up in a uniformly random relative order
    n = xs.size
    dense = np.concatenate(([0], np.cumsum(~tie)))
    key = dense * n + _rng.stream(seed, _rng.TIE_BREAK).permutation(n)
    return order[np.argsort(key)].astype(np.int64, copy=False), True


def x_order(sample: PairedSample, seed: int = _rng.DEFAULT_SEED) -> np.ndarray:
    """Permutation sorting ``sample.xs`` with ties broken uniformly at random."""
    return _order_with_ties(sample.xs, _rng.check_seed(seed))[0]


def global_y_ranks(ys: Sequence[float]) -> GlobalRanks:
    """R(i) = #{j: y_j <= y_i} and L(i) = #{j: y_j >= y_i}, in input order."""
    ys = np.ascontiguousarray(ys, dtype=np.float64).reshape(-1)
    if ys.size < 1:
        raise SampleTooSmall("need at least one value")
    if not np.all(np.isfinite(ys)):
        raise NonFiniteValue("ys contains NaN or infinite values")
    idx = np.argsort(ys).astype(np.int64, copy=False)
    R, L = _backend.impl.tie_ranks(ys, idx)
    return GlobalRanks(R, L)


def y_ranks_ordered(sample: PairedSample, order: np.ndarray) -> RankProfile:
    g = global_y_ranks(sample.ys)
    order = np.asarray(order, dtype=np.int64)
    return RankProfile(order=order, r=g.R[order], l=g.L[order])


def rank_profile(sample: PairedSample, seed: int = _rng.DEFAULT_SEED) -> RankProfile:
    """x_order followed by y_ranks_ordered, recording the seed if it was used."""
    seed = _rng.check_seed(seed)
    order, tied = _order_with_ties(sample.xs, seed)
    g = global_y_ranks(sample.ys)
    return RankProfile(order=order, r=g.R[order], l=g.L[order], seed_used=seed if tied else None)
