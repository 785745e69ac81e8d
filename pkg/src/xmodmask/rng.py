"""Backend selection for the sampling kernel.

The compiled extension is preferred; set ``XMODMASK_PURE=1`` to force the
pure-Python fallback (useful for parity testing and benchmarks). Both
backends produce identical streams.
"""

import os

if os.environ.get("XMODMASK_PURE") == "1":
    from ._rng_py import Rng, derive_seed

    BACKEND = "python"
else:
    try:
        from ._rngkernel import Rng, derive_seed  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from ._rng_py import Rng, derive_seed

        BACKEND = "python"

__all__ = ["Rng", "derive_seed", "BACKEND"]
