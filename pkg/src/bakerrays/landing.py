"""Landing points of bounded-sequence rays, periodic boundary points, orbit
radius bounds, and the sampling-level landing diagnostic.

A bounded sequence in this representation is a finite prefix plus a periodic
tail; its landing point is the fixed point of the pullback over one period,
pulled through the prefix. The fixed-point iteration contracts in the path
metric (strictly on left passes), and a final Newton polish on f^p(z) - z
squares the accuracy.
"""

import math
from dataclasses import dataclass
from typing import Tuple

from .branches import compose_pullback
from .core import PI, evaluate_f, derivative_f, model_F_inverse
from .errors import DomainError, ConstantWordError, NoConvergenceError
from .symbolic import (
    CLASS_BOUNDED,
    CLASS_EVENTUALLY_CONSTANT,
    SymbolSequence,
    classify_sequence,
    itinerary,
    shift,
)

SEED_RE = -3.0
FIXED_POINT_BUDGET = 2000


@dataclass(frozen=True)
class LandingResult:
    z: complex
    residual: float  # last pullback increment
    depth_used: int
    orbit_bound: float  # max |Re f^n(z)| observed


@dataclass(frozen=True)
class PeriodicPoint:
    z: complex
    period: int
    word: Tuple[int, ...]
    multiplier: complex
    residual: float  # |f^p(z) - z|


def _seed_for(symbol):
    return complex(SEED_RE, 0.5 * PI if symbol == 0 else -0.5 * PI)


def _pullback_fixed_point(word, tol, budget):
    """Iterate the pullback over `word` from the canonical seed until the
    increments drop below tol; returns (z, last_increment, iterations)."""
    z = _seed_for(word[0])
    inc = math.inf
    best = (z, inc)
    for k in range(1, budget + 1):
        z2 = compose_pullback(word, z, 1e-13)
        inc = abs(z2 - z)
        z = z2
        if inc < best[1]:
            best = (z, inc)
        if inc <= tol:
            return z, inc, k
    z, inc = best
    if inc <= 100.0 * tol:
        return z, inc, budget
    raise NoConvergenceError(
        f"pullback increments stalled at {inc:.3e} after {budget} iterations"
    )


def _orbit_max_re(z, steps):
    m = abs(z.real)
    cur = z
    for _ in range(steps):
        cur = evaluate_f(cur)
        m = max(m, abs(cur.real))
    return m


def landing_point(s, tol=1e-12, max_depth=FIXED_POINT_BUDGET):
    """Landing point of the ray of a bounded sequence.

    Eventually constant sequences are rejected (their rays land at infinity);
    schedules are rejected as non-landing candidates.
    """
    if not tol > 0.0:
        raise DomainError("tolerance must be positive")
    kind, _ = classify_sequence(s)
    if kind == CLASS_EVENTUALLY_CONSTANT:
        raise DomainError("eventually constant sequences have no finite landing point")
    if kind != CLASS_BOUNDED:
        raise DomainError("landing points are computed for bounded sequences only")
    prefix = s.prefix
    period = shift(s, len(prefix)).tail.word
    w_tail, inc, iters = _pullback_fixed_point(period, tol, max_depth)
    z = compose_pullback(prefix, w_tail, 1e-13) if prefix else w_tail
    depth = iters * len(period) + len(prefix)
    orbit_bound = _orbit_max_re(z, 500)
    return LandingResult(z, inc, depth, orbit_bound)


def periodic_point(word, tol=1e-10, max_iter=FIXED_POINT_BUDGET):
    """Repelling periodic point whose orbit follows `word` through the
    half-strips: fixed point of the word's pullback, Newton-polished on
    f^p(z) - z.
    """
    bits = tuple(int(b) for b in word)
    if len(bits) < 2:
        raise DomainError("word must have length >= 2")
    if any(b not in (0, 1) for b in bits):
        raise DomainError("word must consist of symbols 0 and 1")
    if len(set(bits)) == 1:
        raise ConstantWordError("constant words have no periodic point: e^-z never vanishes")
    if not tol > 0.0:
        raise DomainError("tolerance must be positive")
    p = len(bits)
    z, _, _ = _pullback_fixed_point(bits, max(tol, 1e-12), max_iter)
    # Newton on f^p(z) - z
    for _ in range(60):
        w = z
        deriv = complex(1.0, 0.0)
        for _ in range(p):
            deriv *= derivative_f(w)
            w = evaluate_f(w)
        g = w - z
        if abs(g) <= 1e-15 * max(1.0, abs(z)):
            break
        den = deriv - 1.0
        if abs(den) < 1e-12:
            break
        z = z - g / den
    w = z
    deriv = complex(1.0, 0.0)
    orbit_ok = True
    for _ in range(p):
        deriv *= derivative_f(w)
        w = evaluate_f(w)
        if abs(w.imag) > PI + 1e-9:
            orbit_ok = False
    residual = abs(w - z)
    if residual > tol or not orbit_ok:
        raise NoConvergenceError(
            f"periodic-point search for word {bits} ended with residual {residual:.3e}"
        )
    return PeriodicPoint(z, p, bits, deriv, residual)


def orbit_radius_bound(s):
    """Right-bound F^-N(0) for orbits of bounded sequences with run bound N."""
    kind, n_max = classify_sequence(s)
    if kind != CLASS_BOUNDED:
        raise DomainError("orbit bound is defined for bounded sequences only")
    r = 0.0
    for _ in range(n_max):
        r = model_F_inverse(r)
    return r


@dataclass(frozen=True)
class LandingDiagnostic:
    max_modulus: float
    last_window_diameter: float
    last_window_center: complex
    samples: int
    skipped: int


def landing_diagnostic(s, t_max, samples=240, t_min=-6.0, tol=1e-10, pullback_budget=20_000):
    """Trace the ray on a parameter grid and report sampling-level landing
    evidence: the maximal modulus seen and the plane diameter of the final
    10% window. Purely diagnostic; no topological claim.

    The pullback budget is deliberately modest: past a few thousand pullback
    steps a bounded-sequence ray is indistinguishable from its landing point
    at double precision, so the fallback loses nothing.
    """
    from .errors import PullbackBudgetError
    from .rays import ray_point

    t_max = float(t_max)
    t_min = float(t_min)
    if not (samples >= 20 and t_min < t_max):
        raise DomainError("need samples >= 20 and t_min < t_max")
    pts = []
    skipped = 0
    for k in range(samples):
        t = t_min + (t_max - t_min) * k / (samples - 1)
        try:
            pts.append((t, ray_point(s, t, tol, pullback_budget=pullback_budget).z))
        except PullbackBudgetError:
            skipped += 1
    if not pts:
        raise NoConvergenceError("no ray samples were computable")
    max_mod = max(abs(z) for _, z in pts)
    cutoff = t_max - 0.1 * (t_max - t_min)
    window = [z for t, z in pts if t >= cutoff]
    if len(window) < 2:
        diam = math.inf
        center = window[0] if window else complex(math.nan, math.nan)
    else:
        diam = max(abs(a - b) for i, a in enumerate(window) for b in window[i + 1:])
        center = sum(window) / len(window)
    return LandingDiagnostic(max_mod, diam, center, len(pts), skipped)
