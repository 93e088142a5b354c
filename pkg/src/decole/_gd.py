"""Gradient-descent kernel selection.

Imports the compiled Cython kernel when available, otherwise the numpy
fallback. Set ``DECOLE_KERNEL=py`` or ``DECOLE_KERNEL=cy`` to force a
backend (forcing ``cy`` raises if the extension was not built).

Both backends implement the same algorithm; fitted parameters agree to
tight tolerance but not bit-for-bit (summation order differs). Within one
backend every result is deterministic.
"""

import os

_forced = os.environ.get("DECOLE_KERNEL", "").strip().lower()

if _forced in ("py", "python"):
    from decole import _gd_py as _impl

    BACKEND = "python"
elif _forced in ("cy", "cython", "c"):
    from decole import _gd_cy as _impl

    BACKEND = "cython"
elif _forced == "":
    try:
        from decole import _gd_cy as _impl

        BACKEND = "cython"
    except ImportError:
        from decole import _gd_py as _impl

        BACKEND = "python"
else:
    raise ValueError(f"DECOLE_KERNEL must be 'py' or 'cy', got {_forced!r}")

logistic_loss = _impl.logistic_loss
logistic_loss_grad = _impl.logistic_loss_grad
fit_gd = _impl.fit_gd

STATUS_CONVERGED = _impl.STATUS_CONVERGED
STATUS_MAX_ITER = _impl.STATUS_MAX_ITER
STATUS_STALLED = _impl.STATUS_STALLED
STATUS_NON_FINITE = _impl.STATUS_NON_FINITE
