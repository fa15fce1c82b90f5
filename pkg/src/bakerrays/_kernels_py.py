"""Pure-Python kernels: map stepping, inverse-branch solves, grid classification.

Reference implementation for the compiled twin in _kernels.pyx; both expose
the same functions with the same semantics.

Conventions used throughout:

* the map is f(x, y) = (x + e^-x cos y, y - e^-x sin y), evaluated in real
  arithmetic with sin/cos reduced against the stored pi so that the lines
  Im z = +-pi are invariant bit-exactly (sin(pi_float) reduces to 0.0);
* the growth model is F(t) = t - e^-t, an increasing bijection of R;
* inverse branches: half 0 solves f(z) = w with Im z in [0, pi], half 1 with
  Im z in [-pi, 0]; half 1 is solved by conjugation, which is exact;
* solver residuals are measured relative to max(1, |w|): for targets far in
  the left half-strip |w| can exceed 1e300 and an absolute residual is not
  representable.
"""

import math

PI = math.pi
HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi
# exp(-x) overflows just past 709.78; stay a hair conservative
X_OVERFLOW = -709.0

TAG_ENTERS_V = 0
TAG_EXITS_S = 1
TAG_UNDECIDED = 2

ITIN_OK = 0
ITIN_ENTERED_V = 1
ITIN_EXITED_S = 2
ITIN_HIT_REAL = 3
ITIN_OVERFLOW = 4

METHOD_LOG = 1
METHOD_NEWTON = 2
METHOD_BISECT = 3
METHOD_LINE = 4

_LINE_TOL = 1e-12


def backend_name():
    return "python"


def strip_sincos(y):
    """sin/cos of y with exact values on y = +-pi and exact odd/even symmetry.

    For |y| > pi/2 the argument is shifted by the stored pi (a Sterbenz-exact
    subtraction on [pi/2, 3pi/2]), so y = +-pi yields sin = 0.0, cos = -1.0.
    """
    if y > HALF_PI:
        d = y - PI
        return -math.sin(d), -math.cos(d)
    if y < -HALF_PI:
        d = y + PI
        return -math.sin(d), -math.cos(d)
    return math.sin(y), math.cos(y)


def f_step(x, y):
    """One application of the map. Raises OverflowError if e^-x is out of range."""
    if x < X_OVERFLOW:
        raise OverflowError("exp(-Re z) exceeds the double range")
    ey = math.exp(-x)
    s, c = strip_sincos(y)
    # s == 0.0 exactly on the invariant lines; avoid inf*0 downstream
    sy = ey * s if s != 0.0 else 0.0
    return x + ey * c, y - sy


def model_F(t):
    """Growth model t - e^-t."""
    if t < X_OVERFLOW:
        raise OverflowError("exp(-t) exceeds the double range")
    return t - math.exp(-t)


def model_F_inv(u, seed=math.nan):
    """Inverse of the growth model by guarded Newton; |F(x) - u| <= 1e-13*max(1,|u|)."""
    if math.isnan(seed):
        if u > -3.0:
            x = u + math.exp(-min(u, 700.0))
        else:
            x = -math.log(-u)
    else:
        x = seed
    if x < X_OVERFLOW:
        x = X_OVERFLOW
    scale = max(1.0, abs(u))
    for _ in range(80):
        ex = math.exp(-x)
        r = (x - ex) - u
        if abs(r) <= 1e-13 * scale:
            # one more step to push the residual to rounding level
            x -= r / (1.0 + ex)
            return x
        x -= r / (1.0 + ex)
        if x < X_OVERFLOW:
            x = X_OVERFLOW
    ex = math.exp(-x)
    if abs((x - ex) - u) <= 1e-10 * scale:
        return x
    raise ArithmeticError("model inverse did not converge")


def _residual(zr, zi, u, v):
    """|f(z) - w| for z=(zr,zi), w=(u,v); inf-safe."""
    if zr < X_OVERFLOW:
        return math.inf
    ey = math.exp(-zr)
    s, c = strip_sincos(zi)
    sy = ey * s if s != 0.0 else 0.0
    return math.hypot(zr + ey * c - u, zi - sy - v)


def _newton_upper(u, v, zr, zi, iters, target, polish_floor):
    """Damped Newton for f(z) = w restricted to the closed upper half-strip.

    Returns (zr, zi, n, res) on success, None when it fails to reach target.
    """
    best_r = math.inf
    best = (zr, zi)
    n = 0
    for n in range(1, iters + 1):
        if zr < X_OVERFLOW + 1.0:
            zr = X_OVERFLOW + 1.0
        ey = math.exp(-zr)
        s, c = strip_sincos(zi)
        sy = ey * s if s != 0.0 else 0.0
        fr = zr + ey * c - u
        fi = zi - sy - v
        r = math.hypot(fr, fi)
        if r < best_r:
            best_r = r
            best = (zr, zi)
        if r <= polish_floor:
            break
        # f'(z) = 1 - e^-z
        dr = 1.0 - ey * c
        di = sy
        den = dr * dr + di * di
        if den < 1e-300:
            # critical point; nudge off it
            zi = min(max(zi + 0.1, 0.0), PI)
            zr += 0.05
            continue
        step_r = (fr * dr + fi * di) / den
        step_i = (fi * dr - fr * di) / den
        zr -= step_r
        zi -= step_i
        if zi < 0.0:
            zi = 0.0
        elif zi > PI:
            zi = PI
        if zr > 745.0:
            zr = 745.0
    zr, zi = best
    if best_r <= target:
        return zr, zi, n, best_r
    return None


def _bisect_upper(u, v, target):
    """Bracketed solve on the one-dimensional reduction.

    With z = x + iy, Im f(z) = v forces e^-x = (y - v)/sin y on y in
    (max(0, v), pi); the remaining equation G(y) = -log R + R cos y - u
    decreases from +inf to -inf on that interval, so bisection cannot fail.
    """
    lo = max(0.0, v)
    hi = PI

    def G(y):
        s, c = strip_sincos(y)
        R = (y - v) / s
        if R <= 0.0:
            return math.inf
        return -math.log(R) + R * c - u

    a = lo + 1e-13 * (hi - lo) + 1e-300
    b = hi - 1e-15
    ga = G(a)
    gb = G(b)
    if not (ga > 0.0 > gb):
        # numeric edge: scan for a bracket
        prev_y, prev_g = a, ga
        found = False
        for k in range(1, 257):
            y = lo + (hi - lo) * k / 257.0
            g = G(y)
            if prev_g > 0.0 > g:
                a, ga, b, gb = prev_y, prev_g, y, g
                found = True
                break
            prev_y, prev_g = y, g
        if not found:
            return None
    for _ in range(120):
        m = 0.5 * (a + b)
        if G(m) > 0.0:
            a = m
        else:
            b = m
        if b - a <= 1e-16 * max(1.0, abs(b)):
            break
    y = 0.5 * (a + b)
    s, _ = strip_sincos(y)
    R = (y - v) / s
    if R <= 0.0:
        return None
    x = -math.log(R)
    r = _newton_upper(u, v, x, y, 20, target, 1e-305)
    if r is not None:
        return r
    res = _residual(x, y, u, v)
    if res <= target:
        return x, y, 120, res
    return None


def _solve_upper(u, v, tol, seed_r, seed_i, has_seed, budget):
    """Preimage of w = (u, v) with Im z in [0, pi].

    Strategy: targets on Im w = pi reduce to the growth model on the top line;
    otherwise Newton from a caller seed, then the log fixed-point iteration
    z <- -log(w - z) on the branch with Im log in [-pi, 0] (contracting where
    Re z < 0), then Newton seeded at w + i pi/2, then bracketed bisection.
    """
    scale = max(1.0, math.hypot(u, v))
    target = tol * scale
    polish = max(1e-305, 1e-16 * scale)

    if v >= PI - _LINE_TOL:
        x = model_F_inv(u, seed_r if (has_seed and u > 0.0) else math.nan)
        return x, PI, 2, METHOD_LINE, abs(model_F(x) - u) if x >= X_OVERFLOW else 0.0

    if has_seed and u > 0.0:
        r = _newton_upper(u, v, seed_r, seed_i, 30, target, polish)
        if r is not None:
            zr, zi, n, res = r
            return zr, zi, n, METHOD_NEWTON, res

    # log fixed-point iteration
    rho = math.hypot(u, v)
    if rho < 1e-300:
        zr, zi = 0.5, HALF_PI
    else:
        th = math.atan2(v, u)
        if th > 0.0:
            th = 0.0 if th <= HALF_PI else -PI
        zr, zi = -math.log(rho), -th
    best_r = math.inf
    best = (zr, zi)
    stall = 0
    for n in range(1, budget + 1):
        wr = u - zr
        wi = v - zi
        rho = math.hypot(wr, wi)
        if rho < 1e-300:
            break
        th = math.atan2(wi, wr)
        if th > 0.0:
            th = 0.0 if th <= HALF_PI else -PI
        zr = -math.log(rho)
        zi = -th
        res = _residual(zr, zi, u, v)
        if res < best_r:
            best_r = res
            best = (zr, zi)
            stall = 0
        else:
            stall += 1
        if res <= max(target * 1e-2, polish):
            break
        if stall >= 4:
            break
    if best_r <= math.sqrt(max(target, 1e-300)) * 10.0 or best_r <= 1e-6 * scale:
        r = _newton_upper(u, v, best[0], best[1], 20, target, polish)
        if r is not None:
            zr, zi, n2, res = r
            return zr, zi, n2, METHOD_LOG, res
    if best_r <= target:
        return best[0], best[1], budget, METHOD_LOG, best_r

    r = _newton_upper(u, v, u, min(max(v + HALF_PI, 0.0), PI), 60, target, polish)
    if r is not None:
        zr, zi, n, res = r
        return zr, zi, n, METHOD_NEWTON, res

    if u >= -700.0:
        r = _bisect_upper(u, v, target)
        if r is not None:
            zr, zi, n, res = r
            return zr, zi, n, METHOD_BISECT, res
    return math.nan, math.nan, budget, -1, math.inf


def branch_solve(half, u, v, tol, seed_r=math.nan, seed_i=math.nan, has_seed=False, budget=200):
    """Inverse branch solve; returns (zre, zim, iterations, method, residual).

    method < 0 signals non-convergence (caller raises). Residual is absolute
    |f(z) - w|; success criterion is residual <= tol * max(1, |w|).
    """
    if half == 0:
        return _solve_upper(u, v, tol, seed_r, seed_i, has_seed, budget)
    zr, zi, n, meth, res = _solve_upper(u, -v, tol, seed_r, -seed_i if has_seed else math.nan, has_seed, budget)
    return zr, -zi, n, meth, res


def pullback_word(bits, u, v, tol, budget=200):
    """Apply inverse branches right-to-left over `bits` starting from (u, v).

    Returns (zre, zim, status, step): status 0 ok, 1 branch-cut hit at `step`
    (index into bits), 2 non-convergence at `step`.
    """
    zr, zi = u, v
    prev_r, prev_i = math.nan, math.nan
    have_prev = False
    for idx in range(len(bits) - 1, -1, -1):
        b = bits[idx]
        if abs(zi) <= _LINE_TOL and zr >= 1.0 - _LINE_TOL:
            return zr, zi, 1, idx
        if have_prev:
            sr, si = prev_r, prev_i
            if (b == 0) != (si >= 0.0):
                si = -si
        else:
            sr, si = math.nan, math.nan
        r = branch_solve(b, zr, zi, tol, sr, si, have_prev, budget)
        if r[3] < 0:
            return zr, zi, 2, idx
        prev_r, prev_i = zr, zi
        have_prev = True
        zr, zi = r[0], r[1]
    return zr, zi, 0, -1


def classify_point(x, y, max_iter):
    """Orbit classification of a single point; returns (tag, step).

    Points within 1e-12 of the lines Im z = +-pi are treated as on-line
    (invariant, never exiting): tag undecided. A forward orbit whose real
    part drops below the exp range while |Im| <= pi is a left-escape inside
    the strip: also undecided (boundary candidate).
    """
    if abs(abs(y) - PI) <= _LINE_TOL:
        return TAG_UNDECIDED, max_iter
    if abs(y) > PI:
        return TAG_EXITS_S, 0
    for k in range(max_iter):
        if x > -1.0 and -HALF_PI < y < HALF_PI:
            return TAG_ENTERS_V, k
        if x < X_OVERFLOW:
            return TAG_UNDECIDED, max_iter
        ey = math.exp(-x)
        s, c = strip_sincos(y)
        sy = ey * s if s != 0.0 else 0.0
        y2 = y - sy
        x2 = x + ey * c
        if abs(y2) > PI or math.isnan(y2):
            return TAG_EXITS_S, k + 1
        x, y = x2, y2
    if x > -1.0 and -HALF_PI < y < HALF_PI:
        return TAG_ENTERS_V, max_iter
    return TAG_UNDECIDED, max_iter


def fill_classify(tags, steps, row_lo, row_hi, re0, dre, im0, dim, max_iter):
    """Classify pixel centers for rows [row_lo, row_hi); writes into tags/steps.

    Row r has center imaginary part im0 + (r + 0.5) * dim; column j has center
    real part re0 + (j + 0.5) * dre. Vectorized over each row.
    """
    import numpy as np

    width = tags.shape[1]
    xs0 = re0 + (np.arange(width, dtype=np.float64) + 0.5) * dre
    for r in range(row_lo, row_hi):
        y0 = im0 + (r + 0.5) * dim
        if abs(abs(y0) - PI) <= _LINE_TOL:
            tags[r, :] = TAG_UNDECIDED
            steps[r, :] = max_iter
            continue
        if abs(y0) > PI:
            tags[r, :] = TAG_EXITS_S
            steps[r, :] = 0
            continue
        x = xs0.copy()
        y = np.full(width, y0)
        tag = np.full(width, TAG_UNDECIDED, np.uint8)
        step = np.full(width, max_iter, np.int32)
        active = np.ones(width, bool)
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(max_iter):
                in_v = active & (x > -1.0) & (np.abs(y) < HALF_PI)
                if in_v.any():
                    tag[in_v] = TAG_ENTERS_V
                    step[in_v] = k
                    active &= ~in_v
                if not active.any():
                    break
                xa = x[active]
                ya = y[active]
                deep = xa < X_OVERFLOW
                ey = np.exp(-np.where(deep, 0.0, xa))
                d = np.where(ya > HALF_PI, ya - PI, np.where(ya < -HALF_PI, ya + PI, ya))
                flip = np.abs(ya) > HALF_PI
                s = np.where(flip, -np.sin(d), np.sin(d))
                c = np.where(flip, -np.cos(d), np.cos(d))
                sy = np.where(s == 0.0, 0.0, ey * s)
                y2 = ya - sy
                x2 = xa + ey * c
                exited = (np.abs(y2) > PI) & ~deep
                stalled = deep | (~exited & (x2 < X_OVERFLOW))
                idx = np.flatnonzero(active)
                if exited.any():
                    tag[idx[exited]] = TAG_EXITS_S
                    step[idx[exited]] = k + 1
                if stalled.any():
                    # left-escape inside the strip: remains a boundary candidate
                    tag[idx[stalled]] = TAG_UNDECIDED
                    step[idx[stalled]] = max_iter
                keep = ~(exited | stalled)
                x[idx] = np.where(keep, x2, x[idx])
                y[idx] = np.where(keep, y2, y[idx])
                active[idx[~keep]] = False
                if not active.any():
                    break
            if active.any():
                in_v = active & (x > -1.0) & (np.abs(y) < HALF_PI)
                tag[in_v] = TAG_ENTERS_V
                step[in_v] = max_iter
        tags[r, :] = tag
        steps[r, :] = step


def itinerary_bits(x, y, depth):
    """Symbol recording for a strip orbit; returns (bits, stop_code, stop_step).

    bits holds the symbols recorded before the stop; stop_code ITIN_OK means
    all `depth` symbols were recorded. Points on (within 1e-12 of) the lines
    Im z = +-pi keep their symbol forever and are filled without iterating.
    """
    bits = []
    for k in range(depth):
        if x > -1.0 and -HALF_PI < y < HALF_PI:
            return bits, ITIN_ENTERED_V, k
        if abs(y - PI) <= _LINE_TOL:
            bits.extend([0] * (depth - k))
            return bits, ITIN_OK, depth
        if abs(y + PI) <= _LINE_TOL:
            bits.extend([1] * (depth - k))
            return bits, ITIN_OK, depth
        if abs(y) > PI:
            return bits, ITIN_EXITED_S, k
        if abs(y) <= _LINE_TOL:
            return bits, ITIN_HIT_REAL, k
        bits.append(0 if y > 0.0 else 1)
        if k == depth - 1:
            return bits, ITIN_OK, depth
        if x < X_OVERFLOW:
            return bits, ITIN_OVERFLOW, k + 1
        ey = math.exp(-x)
        s, c = strip_sincos(y)
        sy = ey * s if s != 0.0 else 0.0
        x, y = x + ey * c, y - sy
    return bits, ITIN_OK, depth
