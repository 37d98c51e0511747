"""Randomized agreement sweeps between the fast paths and the oracles."""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from . import _rng
from .core import xi
from .errors import ConstantY
from .inference import tau_squared_hat
from .oracle import tau_squared_naive, xi_naive

SAMPLE_KINDS = ("no_ties", "x_ties", "y_ties", "both_ties", "constant_x", "near_constant_y")

TAU_RTOL = 1e-12


def random_sample(rng: np.random.Generator, kind: str, max_n: int = 200) -> tuple[np.ndarray, np.ndarray]:
    n = int(rng.integers(2, max_n + 1))
    levels = int(rng.integers(1, max(2, n // 3) + 1))
    cont = lambda: rng.standard_normal(n)  # noqa: E731
    tied = lambda: rng.integers(0, levels + 1, n).astype(float)  # noqa: E731
    if kind == "no_ties":
        return cont(), cont()
    if kind == "x_ties":
        return tied(), cont()
    if kind == "y_ties":
        return cont(), tied()
    if kind == "both_ties":
        return tied(), tied()
    if kind == "constant_x":
        return np.full(n, float(rng.integers(-5, 5))), tied() if rng.random() < 0.5 else cont()
    y = np.zeros(n)
    y[rng.integers(0, n)] = 1.0
    return cont(), y


def _outcome(fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except ConstantY:
        return "ConstantY"


def run_sweeps(
    size: int = 1000,
    seed: int = _rng.DEFAULT_SEED,
    fast_xi: Optional[Callable] = None,
    fast_tau: Optional[Callable] = None,
) -> dict:
    """Compare xi against xi_naive on ``size`` samples (exact equality) and
    tau_squared_hat against tau_squared_naive on ``size // 2`` samples
    (relative 1e-12), cycling through SAMPLE_KINDS.  Stops at the first
    mismatch and reports it as a counterexample.
    """
    fast_xi = fast_xi or (lambda xs, ys, s: xi(xs, ys, seed=s).value)
    fast_tau = fast_tau or (lambda ys: tau_squared_hat(ys).value)
    checks = []

    def fail(check, xs, ys, tie_seed, fast, slow):
        return {
            "passed": False,
            "checks": checks,
            "counterexample": {
                "check": check,
                "xs": [float(v) for v in xs],
                "ys": [float(v) for v in ys],
                "seed": tie_seed,
                "fast": fast,
                "oracle": slow,
            },
        }

    done = 0
    for i in range(size):
        kind = SAMPLE_KINDS[i % len(SAMPLE_KINDS)]
        rng = _rng.stream(seed, _rng.VERIFY, 0, i)
        xs, ys = random_sample(rng, kind)
        tie_seed = _rng.derive_seed(seed, _rng.VERIFY, 1, i)
        fast = _outcome(fast_xi, xs, ys, tie_seed)
        slow = _outcome(xi_naive, xs, ys, seed=tie_seed)
        if fast != slow:
            checks.append({"name": "xi_exact", "samples": done + 1, "mismatches": 1})
            return fail("xi_exact", xs, ys, tie_seed, fast, slow)
        done += 1
    checks.append({"name": "xi_exact", "samples": done, "mismatches": 0})

    done = 0
    for i in range(size // 2):
        kind = SAMPLE_KINDS[i % len(SAMPLE_KINDS)]
        rng = _rng.stream(seed, _rng.VERIFY, 2, i)
        _, ys = random_sample(rng, kind, max_n=100)
        fast = _outcome(fast_tau, ys)
        slow = _outcome(tau_squared_naive, ys)
        same = fast == slow if isinstance(slow, str) or isinstance(fast, str) else abs(fast - slow) <= TAU_RTOL * abs(slow)
        if not same:
            checks.append({"name": "tau_squared_rel_1e-12", "samples": done + 1, "mismatches": 1})
            return fail("tau_squared_rel_1e-12", [], ys, None, fast, slow)
        done += 1
    checks.append({"name": "tau_squared_rel_1e-12", "samples": done, "mismatches": 0})
    return {"passed": True, "checks": checks, "counterexample": None}
