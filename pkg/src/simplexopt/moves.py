"""Backend selection for the move-proposal kernel.

At import time the compiled Cython kernel is preferred; the numpy
implementation is the fallback. Both produce bitwise-identical output, so
the choice affects speed only. Set the environment variable
``SIMPLEXOPT_PURE=1`` to force the numpy backend, or call
:func:`set_backend` at runtime (used by the kernel benchmark).
"""

from __future__ import annotations

import os

from . import _moves_py

_BACKENDS = {"numpy": _moves_py.propose_moves}

try:
    from . import _moves_cy

    _BACKENDS["compiled"] = _moves_cy.propose_moves
except ImportError:
    _moves_cy = None

if os.environ.get("SIMPLEXOPT_PURE"):
    _active_name = "numpy"
elif "compiled" in _BACKENDS:
    _active_name = "compiled"
else:
    _active_name = "numpy"

_active = _BACKENDS[_active_name]


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def active_backend() -> str:
    return _active_name


def set_backend(name: str) -> None:
    """Switch the kernel backend ('numpy' or 'compiled')."""
    global _active, _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    _active_name = name
    _active = _BACKENDS[name]


def propose_moves(p, step, rho, phi, sparsity):
    """Build all 2m candidate moves; see ``_moves_py.propose_moves``."""
    return _active(p, step, rho, phi, sparsity)
