"""Kernel selection: compiled accelerator if built, pure Python otherwise.

Set ``OPKIT_PURE_PYTHON=1`` to force the pure-Python kernels even when the
compiled extension is available (used by the benchmark and by CI to test
both paths).  Both implementations are exact and produce identical results;
``IMPLEMENTATION`` names the active one.
"""

from __future__ import annotations

import os

if os.environ.get("OPKIT_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _accel as _impl  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as _impl  # type: ignore[no-redef]

IMPLEMENTATION: str = _impl.IMPLEMENTATION

poly_add = _impl.poly_add
poly_sub = _impl.poly_sub
poly_neg = _impl.poly_neg
poly_scale = _impl.poly_scale
poly_mul = _impl.poly_mul
poly_term_mul = _impl.poly_term_mul
poly_isubmul = _impl.poly_isubmul
mat_mul = _impl.mat_mul
mat_apply = _impl.mat_apply
row_combine_int = _impl.row_combine_int
