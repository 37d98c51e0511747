"""Kernel backend selection.

The compiled extension is used when it imports; otherwise, or when
``XICOR_PURE_PYTHON`` is set to a non-empty value other than ``0``, the
numpy fallback is used.  ``use()`` switches at runtime (benchmarks, tests).
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

impl: ModuleType = _kernels_py
name = "python"


def available() -> list[str]:
    return ["python"] + (["compiled"] if _compiled is not None else [])


def use(backend: str) -> None:
    global impl, name
    if backend == "python":
        impl, name = _kernels_py, "python"
    elif backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        impl, name = _compiled, "compiled"
    else:
        raise ValueError(f"unknown backend {backend!r}")


if _compiled is not None and os.environ.get("XICOR_PURE_PYTHON", "0") in ("", "0"):
    use("compiled")
