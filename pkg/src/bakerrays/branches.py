"""The two inverse branches of z + e^-z on the slit strip and their finite
compositions.

Branch 0 maps S minus [1, +inf) into the closed upper half-strip, branch 1
into the lower one; branch 1 is computed by conjugation, which the real-form
map evaluation makes exact.
"""

import math
from dataclasses import dataclass

from . import kernels
from .core import PI, check_point
from .errors import BranchCutError, DomainError, NoConvergenceError

CUT_TOL = 1e-12
DEFAULT_TOL = 1e-12
ITERATION_BUDGET = 200


@dataclass(frozen=True)
class BranchSolveReport:
    z: complex
    residual: float  # |f(z) - w|, absolute
    iterations: int
    method: str


def _validate_target(w):
    w = check_point(w)
    if abs(w.imag) > PI + CUT_TOL:
        raise DomainError(f"target {w!r} is outside the strip")
    if abs(w.imag) <= CUT_TOL and w.real >= 1.0 - CUT_TOL:
        raise BranchCutError(f"target {w!r} lies on the branch cut [1, +inf)")
    return w


def inverse_branch(i, w, tol=DEFAULT_TOL, seed=None):
    """Solve f(z) = w with z in the closed half-strip of branch i.

    Residual criterion is |f(z) - w| <= tol * max(1, |w|); targets deep in the
    left half-strip make an absolute criterion unrepresentable.
    """
    if i not in (0, 1):
        raise DomainError(f"branch index must be 0 or 1, got {i!r}")
    if not tol > 0.0:
        raise DomainError("tolerance must be positive")
    w = _validate_target(w)
    if seed is None:
        zr, zi, its, meth, res = kernels.branch_solve(i, w.real, w.imag, tol, budget=ITERATION_BUDGET)
    else:
        seed = complex(seed)
        zr, zi, its, meth, res = kernels.branch_solve(
            i, w.real, w.imag, tol, seed.real, seed.imag, True, ITERATION_BUDGET
        )
    if meth < 0:
        raise NoConvergenceError(f"inverse branch {i} failed to converge at w={w!r}")
    return BranchSolveReport(complex(zr, zi), res, its, kernels.METHOD_NAMES[meth])


def compose_pullback(word, z, tol=DEFAULT_TOL):
    """Apply the inverse branches of `word` right-to-left to z.

    For word (s0, ..., sn) this computes branch s0 of branch s1 of ... of
    branch sn applied to z.
    """
    z = _validate_target(check_point(z))
    bits = tuple(int(b) for b in word)
    if any(b not in (0, 1) for b in bits):
        raise DomainError("word must consist of symbols 0 and 1")
    if not bits:
        return z
    zr, zi, status, step = kernels.pullback_word(bits, z.real, z.imag, tol)
    if status == 1:
        raise BranchCutError(f"intermediate value hit the branch cut at word index {step}")
    if status == 2:
        raise NoConvergenceError(f"pullback failed to converge at word index {step}")
    return complex(zr, zi)


def forward_word_check(word, z, start):
    """max_k |f^k(start) - expected| consistency helper: iterates f len(word)
    times from `start` and returns |f^n(start) - z|."""
    from .core import evaluate_f

    cur = complex(start)
    for _ in word:
        cur = evaluate_f(cur)
    return abs(cur - complex(z))
