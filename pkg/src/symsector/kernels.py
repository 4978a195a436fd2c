"""Kernel backend selection.

Uses the compiled ``_ckernels`` extension when it was built, otherwise the
numpy implementations. Setting ``SYMSECTOR_PURE_PYTHON=1`` forces the
fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("SYMSECTOR_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

beta_sq_batch = _impl.beta_sq_batch
refine = _impl.refine
propagate = _impl.propagate

__all__ = ["BACKEND", "beta_sq_batch", "refine", "propagate"]
