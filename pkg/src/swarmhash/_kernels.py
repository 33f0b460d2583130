"""Backend selection for the cell-scan kernel.

The compiled extension is preferred; setting ``SWARMHASH_PURE_PYTHON=1``
or a failed import selects the pure-Python implementation.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKENDS = {"python": _pykernels.scan_cells}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    BACKENDS["cython"] = _ckernels.scan_cells

if os.environ.get("SWARMHASH_PURE_PYTHON", "") not in ("", "0") or _ckernels is None:
    BACKEND = "python"
else:
    BACKEND = "cython"

scan_cells = BACKENDS[BACKEND]


def get_scan(backend: str | None = None):
    if backend is None:
        return scan_cells
    try:
        return BACKENDS[backend]
    except KeyError:
        raise ValueError(f"kernel backend {backend!r} is not available; "
                         f"have {sorted(BACKENDS)}") from None
