"""Select the propagation kernel at import time.

Prefers the compiled Cython extension; falls back to the numpy reference
implementation when the extension is not built for this interpreter.  Set
``ATOMPAIR_BACKEND=python`` (or ``compiled``) to force a choice; forcing
``compiled`` raises when the extension is unavailable.
"""

import os

_requested = os.environ.get("ATOMPAIR_BACKEND", "").strip().lower()
if _requested not in ("", "compiled", "python"):
    raise ImportError(
        f"ATOMPAIR_BACKEND must be 'compiled' or 'python', got {_requested!r}"
    )

if _requested == "python":
    from ._kernel_py import propagate_samples

    BACKEND = "python"
else:
    try:
        from ._kernel import propagate_samples

        BACKEND = "compiled"
    except ImportError:
        if _requested == "compiled":
            raise
        from ._kernel_py import propagate_samples

        BACKEND = "python"

__all__ = ["propagate_samples", "BACKEND", "backend_name"]


def backend_name() -> str:
    """Name of the active propagation backend: 'compiled' or 'python'."""
    return BACKEND
