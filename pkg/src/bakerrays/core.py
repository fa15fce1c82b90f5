"""The map f(z) = z + e^-z on the strip S = {|Im z| <= pi}: evaluation,
derivative, growth model, region classification, exponential semiconjugacy,
path metric on the slit strip, and expansion bounds.

All functions are pure; complex points are plain Python complex numbers.
"""

import cmath
import math
from enum import Enum

from . import kernels
from .errors import DomainError, MapOverflowError

PI = math.pi
HALF_PI = 0.5 * math.pi

#: corners of the absorbing rectangle V = {Re z > -1, |Im z| < pi/2}
V_CORNER_TOP = complex(-1.0, HALF_PI)
V_CORNER_BOTTOM = complex(-1.0, -HALF_PI)

ON_LINE_TOL = 1e-12


class RegionLabel(Enum):
    V = "V"
    OMEGA00 = "Omega00"
    OMEGA01 = "Omega01"
    OMEGA10 = "Omega10"
    OMEGA11 = "Omega11"
    ON_R = "OnR"
    ON_L_PLUS = "OnLplus"
    ON_L_MINUS = "OnLminus"
    EXITS_S = "ExitsS"
    OUTSIDE_S = "OutsideS"


def check_point(z):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"point must be finite, got {z!r}")
    return z


def evaluate_f(z):
    """f(z) = z + e^-z via the real form (x + e^-x cos y, y - e^-x sin y)."""
    z = check_point(z)
    try:
        x, y = kernels.f_step(z.real, z.imag)
    except OverflowError as exc:
        raise MapOverflowError(f"exp(-Re z) overflows at z={z!r}") from exc
    return complex(x, y)


def derivative_f(z):
    """f'(z) = 1 - e^-z."""
    z = check_point(z)
    if -z.real > 709.0:
        raise MapOverflowError(f"exp(-Re z) overflows at z={z!r}")
    ey = math.exp(-z.real)
    s, c = kernels.strip_sincos(z.imag)
    return complex(1.0 - ey * c, ey * s if s != 0.0 else 0.0)


def model_F(t):
    """Growth model F(t) = t - e^-t."""
    try:
        return kernels.model_F(float(t))
    except OverflowError as exc:
        raise MapOverflowError(f"exp(-t) overflows at t={t!r}") from exc


def model_F_inverse(t, seed=math.nan):
    """Inverse of the growth model, Newton-solved to |F(x) - t| <= 1e-13 max(1,|t|)."""
    return kernels.model_F_inv(float(t), seed)


def in_strip(z, tol=0.0):
    return abs(z.imag) <= PI + tol


def in_open_v(z):
    return z.real > -1.0 and abs(z.imag) < HALF_PI


def in_closed_v(z):
    return z.real >= -1.0 and abs(z.imag) <= HALF_PI


def classify_region(z):
    """Total classification of a point against the strip geometry.

    Ties: |Im z -+ pi| <= 1e-12 is on-line, |Im z| <= 1e-12 is on the real
    axis. Off those, membership in V, exit of the strip under one step of f,
    and the half-strip pair (current, image) decide the label.
    """
    z = check_point(z)
    y = z.imag
    if abs(y - PI) <= ON_LINE_TOL:
        return RegionLabel.ON_L_PLUS
    if abs(y + PI) <= ON_LINE_TOL:
        return RegionLabel.ON_L_MINUS
    if abs(y) > PI:
        return RegionLabel.OUTSIDE_S
    if abs(y) <= ON_LINE_TOL:
        return RegionLabel.ON_R
    if in_open_v(z):
        return RegionLabel.V
    try:
        fz = evaluate_f(z)
    except MapOverflowError:
        # e^-x beyond range with y off the lines: the image leaves the strip
        return RegionLabel.EXITS_S
    if abs(fz.imag) > PI:
        return RegionLabel.EXITS_S
    i = 0 if y > 0.0 else 1
    j = 0 if fz.imag > 0.0 else 1
    return {
        (0, 0): RegionLabel.OMEGA00,
        (0, 1): RegionLabel.OMEGA01,
        (1, 0): RegionLabel.OMEGA10,
        (1, 1): RegionLabel.OMEGA11,
    }[(i, j)]


def semiconjugacy_project(z):
    """E(z) = e^-z, the conformal projection of Int S onto C minus (-inf, 0]."""
    z = check_point(z)
    if abs(z.imag) >= PI:
        raise DomainError("projection requires a point of the open strip")
    if -z.real > 709.0:
        raise MapOverflowError(f"exp(-Re z) overflows at z={z!r}")
    ey = math.exp(-z.real)
    s, c = kernels.strip_sincos(z.imag)
    return complex(ey * c, -(ey * s if s != 0.0 else 0.0))


def semiconjugacy_unproject(w):
    """E^-1(w) = -Log w (principal branch), back into the open strip."""
    w = complex(w)
    if w == 0 or (w.imag == 0.0 and w.real < 0.0):
        raise DomainError("unprojection undefined on (-inf, 0]")
    return -cmath.log(w)


def evaluate_h(w):
    """h(w) = w e^-w, the projected map."""
    w = complex(w)
    if -w.real > 709.0:
        raise MapOverflowError(f"exp(-Re w) overflows at w={w!r}")
    return w * cmath.exp(-w)


def _segment_hits_open_v(a, b):
    """True when the open segment (a, b) meets the open rectangle
    {x > -1} x {|y| < pi/2} (slab clipping; boundary grazing does not count)."""
    t0, t1 = 0.0, 1.0
    dx = b.real - a.real
    dy = b.imag - a.imag
    # x > -1
    if dx == 0.0:
        if a.real <= -1.0:
            return False
    else:
        t = (-1.0 - a.real) / dx
        if dx > 0.0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
    # y < pi/2
    if dy == 0.0:
        if a.imag >= HALF_PI:
            return False
    else:
        t = (HALF_PI - a.imag) / dy
        if dy > 0.0:
            t1 = min(t1, t)
        else:
            t0 = max(t0, t)
    # y > -pi/2
    if dy == 0.0:
        if a.imag <= -HALF_PI:
            return False
    else:
        t = (-HALF_PI - a.imag) / dy
        if dy > 0.0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
    return t1 - t0 > 1e-15


def rho_distance(z, w):
    """Shortest path length between z and w inside the strip minus the closed
    absorbing rectangle.

    The obstacle is convex with exactly two corners reachable from the left,
    so geodesics are straight or bend at those corners; the corner-to-corner
    leg runs along the rectangle's left edge (length pi).
    """
    z = check_point(z)
    w = check_point(w)
    for p in (z, w):
        if not in_strip(p, ON_LINE_TOL):
            raise DomainError(f"{p!r} is outside the strip")
        if in_closed_v(p):
            raise DomainError(f"{p!r} is inside the closed absorbing rectangle")
    if z == w:
        return 0.0
    if not _segment_hits_open_v(z, w):
        return abs(z - w)
    best = math.inf
    ct, cb = V_CORNER_TOP, V_CORNER_BOTTOM
    z_top = not _segment_hits_open_v(z, ct)
    z_bot = not _segment_hits_open_v(z, cb)
    w_top = not _segment_hits_open_v(w, ct)
    w_bot = not _segment_hits_open_v(w, cb)
    if z_top and w_top:
        best = min(best, abs(z - ct) + abs(ct - w))
    if z_bot and w_bot:
        best = min(best, abs(z - cb) + abs(cb - w))
    if z_top and w_bot:
        best = min(best, abs(z - ct) + PI + abs(cb - w))
    if z_bot and w_top:
        best = min(best, abs(z - cb) + PI + abs(ct - w))
    if not math.isfinite(best):
        raise DomainError("no path between the given points avoids the rectangle")
    return best


def expansion_lower_bound(k):
    """lambda(k) with |f'(z)| >= lambda(k) > 1 on {x + iy in S minus closed V : x <= k}.

    For k <= -1 every point of the region has x <= k <= -1 and the minimum of
    |f'|^2 = 1 + e^-x (e^-x - 2 cos y) sits at (k, 0): e^-k - 1. For k > -1
    points split into {x <= -1} (min e - 1) and {-1 < x <= k, |y| >= pi/2},
    where cos y <= 0 gives sqrt(1 + e^-2k).
    """
    k = float(k)
    if k <= -1.0:
        if -k > 709.0:
            raise MapOverflowError("exp(-k) overflows")
        return math.expm1(-k)
    e2 = math.exp(-2.0 * k) if k < 354.0 else 0.0
    return min(math.e - 1.0, math.sqrt(1.0 + e2))
