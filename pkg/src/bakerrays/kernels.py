"""Backend selection: compiled kernels when available, pure Python otherwise.

Set BAKER_RAYS_BACKEND=python to force the fallback (used by the benchmark
and by backend-parity tests).
"""

import os

if os.environ.get("BAKER_RAYS_BACKEND", "").lower() == "python":
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.backend_name()

PI = _impl.PI
HALF_PI = _impl.HALF_PI
X_OVERFLOW = _impl.X_OVERFLOW

TAG_ENTERS_V = _impl.TAG_ENTERS_V
TAG_EXITS_S = _impl.TAG_EXITS_S
TAG_UNDECIDED = _impl.TAG_UNDECIDED

ITIN_OK = _impl.ITIN_OK
ITIN_ENTERED_V = _impl.ITIN_ENTERED_V
ITIN_EXITED_S = _impl.ITIN_EXITED_S
ITIN_HIT_REAL = _impl.ITIN_HIT_REAL
ITIN_OVERFLOW = _impl.ITIN_OVERFLOW

METHOD_LOG = _impl.METHOD_LOG
METHOD_NEWTON = _impl.METHOD_NEWTON
METHOD_BISECT = _impl.METHOD_BISECT
METHOD_LINE = _impl.METHOD_LINE

strip_sincos = _impl.strip_sincos
f_step = _impl.f_step
model_F = _impl.model_F
model_F_inv = _impl.model_F_inv
branch_solve = _impl.branch_solve
pullback_word = _impl.pullback_word
classify_point = _impl.classify_point
fill_classify = _impl.fill_classify
itinerary_bits = _impl.itinerary_bits

METHOD_NAMES = {
    METHOD_LOG: "log-fixed-point",
    METHOD_NEWTON: "newton",
    METHOD_BISECT: "bisection",
    METHOD_LINE: "line-newton",
}
