"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``.

Every function returns the same values as their compiled twins; the
integer sums are exact (Python ints) whatever the sample size.
"""

from __future__ import annotations

import numpy as np

_I64_MAX = np.iinfo(np.int64).max


def _exact_sum(terms: np.ndarray, bound: int) -> int:
    """Exact sum of non-negative int64 ``terms``, each at most ``bound``."""
    if terms.size == 0:
        return 0
    chunk = max(1, _I64_MAX // max(bound, 1))
    if chunk >= terms.size:
        return int(terms.sum())
    return sum(int(terms[i : i + chunk].sum()) for i in range(0, terms.size, chunk))


def _exact_square_sum(w: np.ndarray, bound: int) -> int:
    if bound <= 3_037_000_499:  # floor(sqrt(2**63 - 1))
        return _exact_sum(w * w, bound * bound)
    return int(np.sum(w.astype(object) ** 2))


def tie_ranks(ys: np.ndarray, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = ys.shape[0]
    s = ys[idx]
    R = np.searchsorted(s, ys, side="right").astype(np.int64)
    L = n - np.searchsorted(s, ys, side="left").astype(np.int64)
    return R, L


def xi_sums(R: np.ndarray, L: np.ndarray, order: np.ndarray) -> tuple[int, int, bool]:
    n = R.shape[0]
    num = _exact_sum(np.abs(np.diff(R[order])), n)
    den = _exact_sum(L * (n - L), n * n)
    return num, den, bool(np.any(R + L != n + 1))


def xi_parts(ys: np.ndarray, idx: np.ndarray, order: np.ndarray) -> tuple[int, int, bool]:
    R, L = tie_ranks(ys, idx)
    return xi_sums(R, L, order)


def adjacent_ties(xs: np.ndarray, order: np.ndarray) -> bool:
    s = xs[order]
    return bool(np.any(s[1:] == s[:-1]))


def abs_diff_sums(ranks: np.ndarray, perms: np.ndarray) -> np.ndarray:
    seq = ranks[perms]
    return np.abs(np.diff(seq, axis=1)).sum(axis=1, dtype=np.int64)


def tau_sums(u: np.ndarray, L: np.ndarray) -> tuple[int, int, int, int]:
    n = u.shape[0]
    i = np.arange(1, n + 1, dtype=np.int64)
    wt = 2 * n - 2 * i + 1
    v = np.cumsum(u)
    if n <= 1_600_000:
        A = _exact_sum(wt * u * u, 2 * n**3)
    else:
        A = int(np.sum(wt.astype(object) * u.astype(object) ** 2))
    C = _exact_sum(wt * u, 2 * n * n)
    B = _exact_square_sum(v + (n - i) * u, n * n)
    D = _exact_sum(L * (n - L), n * n)
    return A, B, C, D
