"""Kernel backend selection: compiled extension when built, numpy otherwise.

The environment variable ``SHUTTLESTATS_BACKEND`` (``cython`` or ``python``)
forces a choice; by default the compiled kernels are used whenever the
extension imports.  ``benchmarks/bench_kernels.py`` compares the two.
"""

from __future__ import annotations

import os
from types import ModuleType

from shuttlestats.glm import _kernels_py

try:
    from shuttlestats.glm import _kernels as _compiled
except ImportError:  # extension not built; numpy fallback only
    _compiled = None

_BACKENDS: dict[str, ModuleType | None] = {
    "cython": _compiled,
    "python": _kernels_py,
}


def available_backends() -> tuple[str, ...]:
    return tuple(name for name, mod in _BACKENDS.items() if mod is not None)


def get_kernels(name: str | None = None) -> ModuleType:
    """Resolve a kernel module by name, env override, or availability."""
    if name is None:
        name = os.environ.get("SHUTTLESTATS_BACKEND")
    if name is not None:
        if name not in _BACKENDS:
            raise ValueError(f"unknown backend {name!r}; expected cython or python")
        mod = _BACKENDS[name]
        if mod is None:
            raise ValueError(f"backend {name!r} is not available (extension not built)")
        return mod
    return _compiled if _compiled is not None else _kernels_py


def active_backend() -> str:
    return get_kernels().BACKEND_NAME
