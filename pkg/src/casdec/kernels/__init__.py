"""Hot inner-loop kernels with a compiled core and pure-Python fallback.

The Cython extension is selected at import when available; set
CASDEC_PURE_PYTHON=1 to force the fallback. Both backends implement the
same deterministic contracts (ties break toward lower index).
"""

import os

from . import _pykernels

if os.environ.get("CASDEC_PURE_PYTHON"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

topk_indices = _impl.topk_indices
lcs_length = _impl.lcs_length

__all__ = ["topk_indices", "lcs_length", "BACKEND"]
