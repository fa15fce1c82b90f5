"""The degree-two circle map g(z) = (3z^2 + 1)/(3 + z^2) on the closed disk:
evaluation, derivative modulus on the circle, circle itineraries (two-valued
on eventual preimages of 1), sequence-to-angle inversion, and the eventual
preimage tree of the boundary fixed point 1.

The upper closed half-circle is symbol 0, the lower symbol 1. Preimages on
the circle are algebraic: g(z) = w gives z^2 = (3w - 1)/(3 - w), a Moebius
image of the circle, so the two preimages are the two square roots.
"""

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .errors import DomainError, PoleError, SlowConvergenceError
from .symbolic import ConstantTail, SymbolSequence

PI = math.pi
TWO_PI = 2.0 * math.pi
HIT_TOL = 1e-12


def g_eval(z):
    """g(z) = (3z^2 + 1)/(3 + z^2); poles at +-i sqrt(3), outside the closed disk."""
    z = complex(z)
    den = 3.0 + z * z
    if abs(den) <= 1e-12 * (1.0 + abs(z) ** 2):
        raise PoleError(f"{z!r} is too close to a pole of the circle map")
    return (3.0 * z * z + 1.0) / den


def g_deriv_modulus_on_circle(theta):
    """|g'| on the circle: 16 / |3 e^{2 i theta} + 1|^2, >= 1 with equality
    only at theta in {0, pi}."""
    w = cmath.exp(2j * float(theta))
    return 16.0 / abs(3.0 * w + 1.0) ** 2


def normalize_angle(theta):
    t = math.fmod(float(theta), TWO_PI)
    return t + TWO_PI if t < 0.0 else t


def circle_preimages(w):
    """The two circle preimages of a circle point, renormalized to modulus 1.
    Returns (upper, lower) by the sign of the imaginary part; for w = 1 the
    preimages are (1, -1)."""
    w = complex(w)
    q = (3.0 * w - 1.0) / (3.0 - w)
    r = cmath.sqrt(q)
    if abs(r) > 0.0:
        r /= abs(r)
    if r.imag < 0.0:
        r = -r
    if r.imag == 0.0 and r.real < 0.0:
        r = -r
    return r, -r


@dataclass(frozen=True)
class CircleItinerary:
    branches: Tuple[SymbolSequence, ...]
    preimage_step: Optional[int]  # n0 with g^{n0}(point) = 1, if any


def circle_itinerary(theta, depth):
    """Symbols of the circle orbit of e^{i theta}: 0 on the upper half, 1 on
    the lower.

    If the orbit hits 1 at step n0 the itinerary is two-valued: entries up to
    n0 - 2 are as observed, entry n0 - 1 is 1 for the branch with constant
    tail 0 and 0 for the branch with constant tail 1.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    w = cmath.exp(1j * normalize_angle(theta))
    bits = []
    for n in range(depth):
        if abs(w - 1.0) <= HIT_TOL:
            return _spliced(bits, n), n
        if abs(w + 1.0) <= HIT_TOL:
            return _spliced(bits, n + 1), n + 1
        bits.append(0 if w.imag > 0.0 else 1)
        w = g_eval(w)
        w /= abs(w)
    return CircleItinerary((SymbolSequence(tuple(bits), None),), None), None


def _spliced(observed, n0):
    head = tuple(observed[: max(0, n0 - 1)])
    if n0 == 0:
        b0 = SymbolSequence((), ConstantTail(0))
        b1 = SymbolSequence((), ConstantTail(1))
    else:
        b0 = SymbolSequence(head + (1,), ConstantTail(0))
        b1 = SymbolSequence(head + (0,), ConstantTail(1))
    return CircleItinerary((b0, b1), n0)


def circle_itinerary_full(theta, depth):
    """Convenience wrapper returning just the CircleItinerary."""
    out, _ = circle_itinerary(theta, depth)
    return out


def _exact_preimage_angle(s):
    """Angle of the eventual preimage of 1 realizing a constant-tail sequence.

    With the constant tail of symbol c starting at the minimal index m, the
    point satisfies g^m = 1 first at m (entry m - 1 is forced to 1 - c by the
    two-valued rule, realized by the preimage -1); earlier entries pick the
    half-circle root.
    """
    c = s.tail.symbol
    m = len(s.prefix)
    # normalize: entry m-1 must differ from c for a first hit at m
    while m > 0 and s.prefix[m - 1] == c:
        m -= 1
    if m == 0:
        return 0.0
    z = complex(-1.0, 0.0)  # the step-(m-1) point
    for k in range(m - 2, -1, -1):
        up, down = circle_preimages(z)
        z = up if s.symbol_at(k) == 0 else down
    return normalize_angle(cmath.phase(z))


def angle_from_itinerary(s, depth, arc_tol=1e-8):
    """Angle whose circle itinerary realizes the first `depth` symbols of s.

    Constant-tail sequences are resolved exactly on the preimage tree of 1.
    Otherwise nested arc pullback: start from the closed half-circle of the
    deepest symbol and pull back through the circle branches; the arc length
    contracts under the derivative bound except near the parabolic point 1.
    Raises SlowConvergenceError when the final arc exceeds arc_tol.
    """
    if depth < 1:
        raise DomainError("depth must be >= 1")
    if isinstance(s.tail, ConstantTail):
        return _exact_preimage_angle(s)

    def pull(theta, branch):
        q = (3.0 * cmath.exp(1j * theta) - 1.0) / (3.0 - cmath.exp(1j * theta))
        a = cmath.phase(q)
        if a < 0.0:
            a += TWO_PI
        half = 0.5 * a
        return half if branch == 0 else half + PI

    last = s.symbol_at(depth - 1)
    lo, hi = (0.0, PI) if last == 0 else (PI, TWO_PI)
    for k in range(depth - 2, -1, -1):
        b = s.symbol_at(k)
        lo2, hi2 = pull(lo, b), pull(hi, b)
        if lo2 > hi2:
            lo2, hi2 = hi2, lo2
        lo, hi = lo2, hi2
    if hi - lo > arc_tol:
        raise SlowConvergenceError(
            f"nested arc stalled at width {hi - lo:.3e} (parabolic point nearby)"
        )
    return normalize_angle(0.5 * (lo + hi))


def eventual_preimages_of_one(depth):
    """All circle angles with g^n = 1 for some n <= depth, sorted.

    Level n has exactly 2^n points and contains level n-1 (1 is fixed).
    """
    if depth < 0:
        raise DomainError("depth must be >= 0")
    points = [complex(1.0, 0.0)]
    for _ in range(depth):
        nxt = []
        for w in points:
            up, down = circle_preimages(w)
            nxt.append(up)
            nxt.append(down)
        # dedupe (1 and -1 are their own preimage/partner at the root)
        uniq = []
        for z in nxt:
            if all(abs(z - u) > 1e-9 for u in uniq):
                uniq.append(z)
        points = uniq
    angles = sorted(normalize_angle(cmath.phase(z)) for z in points)
    return angles
