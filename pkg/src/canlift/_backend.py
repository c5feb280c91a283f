"""Kernel selection: the compiled module when present, else pure Python.

``CANLIFT_PURE_PYTHON=1`` forces the fallback.  Calls whose keys do not fit
a machine word always take the Python path.
"""

from __future__ import annotations

import os
from contextlib import contextmanager

from . import _kernels_py

try:
    if os.environ.get("CANLIFT_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure Python requested")
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

_active = _compiled if _compiled is not None else _kernels_py


def available() -> list[str]:
    return [m.NAME for m in (_compiled, _kernels_py) if m is not None]


def active_name() -> str:
    return _active.NAME


def use(name: str) -> None:
    """Switch backend by name ("compiled" or "python"); used by tests and benchmarks."""
    global _active
    if name == "python":
        _active = _kernels_py
    elif name == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _compiled
    else:
        raise ValueError(f"unknown backend {name!r}")


def _pick(ring, layout):
    if _active is not _kernels_py and _active.supports(ring, layout):
        return _active
    return _kernels_py


@contextmanager
def using(name: str):
    """Temporarily switch backend; not thread-safe, meant for tests and benchmarks."""
    prev = _active.NAME
    use(name)
    try:
        yield
    finally:
        use(prev)


def mul(a: dict, b: dict, ring, layout, cap: int | None = None) -> dict:
    return _pick(ring, layout).mul(a, b, ring, layout, cap)


def dual_act(f: dict, g: dict, ring, layout) -> dict:
    return _pick(ring, layout).dual_act(f, g, ring, layout)
