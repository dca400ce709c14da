"""Exact linear algebra over prime fields GF(p).

The elimination kernels have two interchangeable backends: a compiled
Cython extension (``nucalab._gfext``) and a pure-Python fallback. The
compiled one is used when importable unless ``NUCALAB_BACKEND=python``
is set. Outputs are identical either way.
"""

from __future__ import annotations

import os

from nucalab.gf import _kernels_py

if os.environ.get("NUCALAB_BACKEND", "").strip().lower() == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from nucalab import _gfext as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

rref_flat = _impl.rref_flat
matmul_flat = _impl.matmul_flat

from nucalab.gf.matrix import (  # noqa: E402
    AffineSolution,
    FieldMatrix,
    is_prime,
    kernel_basis,
    mat_rank,
    solve_affine,
    transpose,
    validate_modulus,
)

__all__ = [
    "AffineSolution",
    "BACKEND",
    "FieldMatrix",
    "is_prime",
    "kernel_basis",
    "mat_rank",
    "matmul_flat",
    "rref_flat",
    "solve_affine",
    "transpose",
    "validate_modulus",
]
