"""Kernel selection: compiled extension when available, pure Python fallback.

Set ``PLSELECT_PURE=1`` in the environment to force the pure implementation.
``IMPL`` records which one is active; the ``pure`` module is always importable
for cross-implementation checks and benchmarks.
"""

import os

from . import pure

compiled = None
if os.environ.get("PLSELECT_PURE") != "1":
    try:
        from . import _fast as compiled  # type: ignore[no-redef]
    except ImportError:
        compiled = None

if compiled is not None:
    IMPL = "compiled"
    _active = compiled
else:
    IMPL = "pure"
    _active = pure

MAX_CELLS = pure.MAX_CELLS
crooked_span_violation = _active.crooked_span_violation
cover_search = _active.cover_search
