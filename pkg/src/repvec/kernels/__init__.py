"""Hot numeric kernels with a numba and a pure-numpy implementation.

The numba path is used when numba imports and ``REPVEC_NUMBA`` is not set to
``0``/``false``/``off``. Both backends are importable directly as
``repvec.kernels.numpy_backend`` and ``repvec.kernels.numba_backend()`` so tests
and the benchmark can compare them side by side.
"""

import logging
import os

from . import _numpy as numpy_backend

log = logging.getLogger(__name__)

_DISABLED = ("0", "false", "no", "off")


def numba_backend():
    """Import and return the numba backend module (raises ImportError if absent)."""
    from . import _numba

    return _numba


def _select():
    if os.environ.get("REPVEC_NUMBA", "1").strip().lower() in _DISABLED:
        return numpy_backend, "numpy"
    try:
        return numba_backend(), "numba"
    except ImportError:
        log.warning("numba not available, using the numpy kernels")
        return numpy_backend, "numpy"


_impl, BACKEND = _select()

lloyd2 = _impl.lloyd2
hartigan2 = _impl.hartigan2
smo_linear = _impl.smo_linear
medoid_index = _impl.medoid_index
combiner_loss_grad = _impl.combiner_loss_grad

__all__ = [
    "BACKEND",
    "lloyd2",
    "hartigan2",
    "smo_linear",
    "medoid_index",
    "combiner_loss_grad",
    "numpy_backend",
    "numba_backend",
]
