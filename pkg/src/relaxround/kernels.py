"""Backend selection for the inner loops.

The compiled extension is used when it imports; otherwise (or when
``RELAXROUND_PURE_PYTHON=1`` is set) the numpy versions are used. Both
expose the same functions.
"""

import os
import types

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

_NAMES = ("smooth_eval", "fractional_eval", "marginal_gain", "all_gains", "add_element")


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name=None):
    """Namespace of kernel functions for ``name`` (default: the active backend)."""
    name = name or BACKEND
    try:
        mod = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable kernel backend {name!r}") from None
    return types.SimpleNamespace(name=name, **{k: getattr(mod, k) for k in _NAMES})


if os.environ.get("RELAXROUND_PURE_PYTHON") or _ckernels is None:
    BACKEND = "python"
else:
    BACKEND = "compiled"

_active = get_backend(BACKEND)
smooth_eval = _active.smooth_eval
fractional_eval = _active.fractional_eval
marginal_gain = _active.marginal_gain
all_gains = _active.all_gains
add_element = _active.add_element
