"""Kernel backend selection.

Prefers the compiled Cython kernel when it built successfully; falls back
to the pure-Python twin. Set QCHESS_KERNEL=python to force the fallback
(used by the benchmark and by tests exercising both paths).
"""

import os

if os.environ.get("QCHESS_KERNEL", "").lower() in ("python", "py"):
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _kernels_py as kernels  # type: ignore[no-redef]

BACKEND = kernels.BACKEND_NAME
