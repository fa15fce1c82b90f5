# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: map stepping, inverse-branch solves, grid classification.

Semantics mirror bakerrays._kernels_py exactly; see that module for the
documentation of the conventions (real-form map evaluation with the stored-pi
reduction, relative residuals, half-strip branch solves by conjugation).
"""

from libc.math cimport atan2, ceil, cos, exp, fabs, hypot, isnan, log, sin, sqrt, NAN, INFINITY

import numpy as np

cdef double PI_C = 3.141592653589793
cdef double HALF_PI_C = 1.5707963267948966
cdef double X_OVERFLOW_C = -709.0
cdef double LINE_TOL = 1e-12

PI = PI_C
HALF_PI = HALF_PI_C
TWO_PI = 2.0 * PI_C
X_OVERFLOW = X_OVERFLOW_C

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

cdef int TAG_ENTERS_V_C = 0
cdef int TAG_EXITS_S_C = 1
cdef int TAG_UNDECIDED_C = 2

cdef int METHOD_LOG_C = 1
cdef int METHOD_NEWTON_C = 2
cdef int METHOD_BISECT_C = 3
cdef int METHOD_LINE_C = 4


def backend_name():
    return "cython"


cdef inline void _sincos(double y, double *s, double *c) noexcept nogil:
    cdef double d
    if y > HALF_PI_C:
        d = y - PI_C
        s[0] = -sin(d)
        c[0] = -cos(d)
    elif y < -HALF_PI_C:
        d = y + PI_C
        s[0] = -sin(d)
        c[0] = -cos(d)
    else:
        s[0] = sin(y)
        c[0] = cos(y)


def strip_sincos(double y):
    cdef double s, c
    _sincos(y, &s, &c)
    return s, c


def f_step(double x, double y):
    cdef double ey, s, c, sy
    if x < X_OVERFLOW_C:
        raise OverflowError("exp(-Re z) exceeds the double range")
    ey = exp(-x)
    _sincos(y, &s, &c)
    sy = ey * s if s != 0.0 else 0.0
    return x + ey * c, y - sy


def model_F(double t):
    if t < X_OVERFLOW_C:
        raise OverflowError("exp(-t) exceeds the double range")
    return t - exp(-t)


cdef double _F_inv_c(double u, double seed) except? -1e308:
    cdef double x, ex, r, scale
    cdef int k
    if isnan(seed):
        if u > -3.0:
            x = u + exp(-(u if u < 700.0 else 700.0))
        else:
            x = -log(-u)
    else:
        x = seed
    if x < X_OVERFLOW_C:
        x = X_OVERFLOW_C
    scale = 1.0 if fabs(u) < 1.0 else fabs(u)
    for k in range(80):
        ex = exp(-x)
        r = (x - ex) - u
        if fabs(r) <= 1e-13 * scale:
            x -= r / (1.0 + ex)
            return x
        x -= r / (1.0 + ex)
        if x < X_OVERFLOW_C:
            x = X_OVERFLOW_C
    ex = exp(-x)
    if fabs((x - ex) - u) <= 1e-10 * scale:
        return x
    raise ArithmeticError("model inverse did not converge")


def model_F_inv(double u, double seed=NAN):
    return _F_inv_c(u, seed)


cdef inline double _resid_c(double zr, double zi, double u, double v) noexcept nogil:
    cdef double ey, s, c, sy
    if zr < X_OVERFLOW_C:
        return INFINITY
    ey = exp(-zr)
    _sincos(zi, &s, &c)
    sy = ey * s if s != 0.0 else 0.0
    return hypot(zr + ey * c - u, zi - sy - v)


cdef int _newton_upper_c(double u, double v, double *pzr, double *pzi,
                         int iters, double target, double polish_floor,
                         double *pres) noexcept nogil:
    cdef double zr = pzr[0], zi = pzi[0]
    cdef double best_r = INFINITY, br_ = zr, bi_ = zi
    cdef double ey, s, c, sy, fr, fi, r, dr, di, den, sr_, si_
    cdef int n = 0
    for n in range(1, iters + 1):
        if zr < X_OVERFLOW_C + 1.0:
            zr = X_OVERFLOW_C + 1.0
        ey = exp(-zr)
        _sincos(zi, &s, &c)
        sy = ey * s if s != 0.0 else 0.0
        fr = zr + ey * c - u
        fi = zi - sy - v
        r = hypot(fr, fi)
        if r < best_r:
            best_r = r
            br_ = zr
            bi_ = zi
        if r <= polish_floor:
            break
        dr = 1.0 - ey * c
        di = sy
        den = dr * dr + di * di
        if den < 1e-300:
            zi = zi + 0.1
            if zi < 0.0:
                zi = 0.0
            elif zi > PI_C:
                zi = PI_C
            zr += 0.05
            continue
        sr_ = (fr * dr + fi * di) / den
        si_ = (fi * dr - fr * di) / den
        zr -= sr_
        zi -= si_
        if zi < 0.0:
            zi = 0.0
        elif zi > PI_C:
            zi = PI_C
        if zr > 745.0:
            zr = 745.0
    pzr[0] = br_
    pzi[0] = bi_
    pres[0] = best_r
    return 1 if best_r <= target else 0


cdef double _G_c(double y, double v, double u) noexcept nogil:
    cdef double s, c, R
    _sincos(y, &s, &c)
    R = (y - v) / s
    if R <= 0.0:
        return INFINITY
    return -log(R) + R * c - u


cdef int _bisect_upper_c(double u, double v, double target,
                         double *pzr, double *pzi, double *pres) noexcept nogil:
    cdef double lo = v if v > 0.0 else 0.0
    cdef double hi = PI_C
    cdef double a, b, ga, gb, m, y, s, c, R, x, prev_y, prev_g, g, res
    cdef int k, found
    a = lo + 1e-13 * (hi - lo) + 1e-300
    b = hi - 1e-15
    ga = _G_c(a, v, u)
    gb = _G_c(b, v, u)
    if not (ga > 0.0 and gb < 0.0):
        prev_y = a
        prev_g = ga
        found = 0
        for k in range(1, 257):
            y = lo + (hi - lo) * k / 257.0
            g = _G_c(y, v, u)
            if prev_g > 0.0 and g < 0.0:
                a = prev_y
                b = y
                found = 1
                break
            prev_y = y
            prev_g = g
        if not found:
            return 0
    for k in range(120):
        m = 0.5 * (a + b)
        if _G_c(m, v, u) > 0.0:
            a = m
        else:
            b = m
        if b - a <= 1e-16 * (1.0 if fabs(b) < 1.0 else fabs(b)):
            break
    y = 0.5 * (a + b)
    _sincos(y, &s, &c)
    R = (y - v) / s
    if R <= 0.0:
        return 0
    x = -log(R)
    pzr[0] = x
    pzi[0] = y
    if _newton_upper_c(u, v, pzr, pzi, 20, target, 1e-305, pres):
        return 1
    res = _resid_c(x, y, u, v)
    if res <= target:
        pzr[0] = x
        pzi[0] = y
        pres[0] = res
        return 1
    return 0


cdef double _F_inv_nogil(double u, double seed) noexcept nogil:
    cdef double x, ex, r, scale
    cdef int k
    if isnan(seed):
        if u > -3.0:
            x = u + exp(-(u if u < 700.0 else 700.0))
        else:
            x = -log(-u)
    else:
        x = seed
    if x < X_OVERFLOW_C:
        x = X_OVERFLOW_C
    scale = 1.0 if fabs(u) < 1.0 else fabs(u)
    for k in range(80):
        ex = exp(-x)
        r = (x - ex) - u
        if fabs(r) <= 1e-13 * scale:
            x -= r / (1.0 + ex)
            return x
        x -= r / (1.0 + ex)
        if x < X_OVERFLOW_C:
            x = X_OVERFLOW_C
    ex = exp(-x)
    if fabs((x - ex) - u) <= 1e-10 * scale:
        return x
    return NAN


cdef int _solve_upper_c(double u, double v, double tol,
                        double seed_r, double seed_i, bint has_seed, int budget,
                        double *pzr, double *pzi, int *pits, double *pres) noexcept nogil:
    """Returns the method code, or -1 on failure."""
    cdef double scale = hypot(u, v)
    cdef double target, polish, rho, th, zr, zi, best_r, br_, bi_, res, wr, wi, x
    cdef int n, stall
    if scale < 1.0:
        scale = 1.0
    target = tol * scale
    polish = 1e-16 * scale
    if polish < 1e-305:
        polish = 1e-305

    if v >= PI_C - LINE_TOL:
        x = _F_inv_nogil(u, seed_r if (has_seed and u > 0.0) else NAN)
        if isnan(x):
            return -1
        pzr[0] = x
        pzi[0] = PI_C
        pits[0] = 2
        pres[0] = fabs((x - exp(-x)) - u) if x >= X_OVERFLOW_C else 0.0
        return METHOD_LINE_C

    if has_seed and u > 0.0:
        zr = seed_r
        zi = seed_i
        if _newton_upper_c(u, v, &zr, &zi, 30, target, polish, &res):
            pzr[0] = zr
            pzi[0] = zi
            pits[0] = 30
            pres[0] = res
            return METHOD_NEWTON_C

    rho = hypot(u, v)
    if rho < 1e-300:
        zr = 0.5
        zi = HALF_PI_C
    else:
        th = atan2(v, u)
        if th > 0.0:
            th = 0.0 if th <= HALF_PI_C else -PI_C
        zr = -log(rho)
        zi = -th
    best_r = INFINITY
    br_ = zr
    bi_ = zi
    stall = 0
    for n in range(1, budget + 1):
        wr = u - zr
        wi = v - zi
        rho = hypot(wr, wi)
        if rho < 1e-300:
            break
        th = atan2(wi, wr)
        if th > 0.0:
            th = 0.0 if th <= HALF_PI_C else -PI_C
        zr = -log(rho)
        zi = -th
        res = _resid_c(zr, zi, u, v)
        if res < best_r:
            best_r = res
            br_ = zr
            bi_ = zi
            stall = 0
        else:
            stall += 1
        if res <= (target * 1e-2 if target * 1e-2 > polish else polish):
            break
        if stall >= 4:
            break
    if best_r <= sqrt(target if target > 1e-300 else 1e-300) * 10.0 or best_r <= 1e-6 * scale:
        zr = br_
        zi = bi_
        if _newton_upper_c(u, v, &zr, &zi, 20, target, polish, &res):
            pzr[0] = zr
            pzi[0] = zi
            pits[0] = n
            pres[0] = res
            return METHOD_LOG_C
    if best_r <= target:
        pzr[0] = br_
        pzi[0] = bi_
        pits[0] = budget
        pres[0] = best_r
        return METHOD_LOG_C

    zr = u
    zi = v + HALF_PI_C
    if zi < 0.0:
        zi = 0.0
    elif zi > PI_C:
        zi = PI_C
    if _newton_upper_c(u, v, &zr, &zi, 60, target, polish, &res):
        pzr[0] = zr
        pzi[0] = zi
        pits[0] = 60
        pres[0] = res
        return METHOD_NEWTON_C

    if u >= -700.0:
        if _bisect_upper_c(u, v, target, &zr, &zi, &res):
            pzr[0] = zr
            pzi[0] = zi
            pits[0] = 120
            pres[0] = res
            return METHOD_BISECT_C
    return -1


def branch_solve(int half, double u, double v, double tol,
                 double seed_r=NAN, double seed_i=NAN, bint has_seed=False, int budget=200):
    cdef double zr = 0.0, zi = 0.0, res = 0.0
    cdef int its = 0, meth
    if half == 0:
        meth = _solve_upper_c(u, v, tol, seed_r, seed_i, has_seed, budget, &zr, &zi, &its, &res)
        return zr, zi, its, meth, res
    meth = _solve_upper_c(u, -v, tol, seed_r, -seed_i if has_seed else NAN, has_seed, budget,
                          &zr, &zi, &its, &res)
    return zr, -zi, its, meth, res


def pullback_word(bits, double u, double v, double tol, int budget=200):
    cdef double zr = u, zi = v, prev_r = NAN, prev_i = NAN, sr, si, nzr, nzi, res
    cdef bint have_prev = False
    cdef int idx, b, meth, its
    cdef Py_ssize_t n = len(bits)
    for idx in range(n - 1, -1, -1):
        b = bits[idx]
        if fabs(zi) <= LINE_TOL and zr >= 1.0 - LINE_TOL:
            return zr, zi, 1, idx
        if have_prev:
            sr = prev_r
            si = prev_i
            if (b == 0) != (si >= 0.0):
                si = -si
        else:
            sr = NAN
            si = NAN
        nzr = 0.0
        nzi = 0.0
        its = 0
        res = 0.0
        if b == 0:
            meth = _solve_upper_c(zr, zi, tol, sr, si, have_prev, budget, &nzr, &nzi, &its, &res)
        else:
            meth = _solve_upper_c(zr, -zi, tol, sr, -si if have_prev else NAN, have_prev, budget,
                                  &nzr, &nzi, &its, &res)
            nzi = -nzi
        if meth < 0:
            return zr, zi, 2, idx
        prev_r = zr
        prev_i = zi
        have_prev = True
        zr = nzr
        zi = nzi
    return zr, zi, 0, -1


cdef void _classify_point_c(double x, double y, int max_iter, int *ptag, int *pstep) noexcept nogil:
    cdef double ey, s, c, sy, x2, y2
    cdef int k
    if fabs(fabs(y) - PI_C) <= LINE_TOL:
        ptag[0] = TAG_UNDECIDED_C
        pstep[0] = max_iter
        return
    if fabs(y) > PI_C:
        ptag[0] = TAG_EXITS_S_C
        pstep[0] = 0
        return
    for k in range(max_iter):
        if x > -1.0 and -HALF_PI_C < y < HALF_PI_C:
            ptag[0] = TAG_ENTERS_V_C
            pstep[0] = k
            return
        if x < X_OVERFLOW_C:
            ptag[0] = TAG_UNDECIDED_C
            pstep[0] = max_iter
            return
        ey = exp(-x)
        _sincos(y, &s, &c)
        sy = ey * s if s != 0.0 else 0.0
        y2 = y - sy
        x2 = x + ey * c
        if fabs(y2) > PI_C or isnan(y2):
            ptag[0] = TAG_EXITS_S_C
            pstep[0] = k + 1
            return
        x = x2
        y = y2
    if x > -1.0 and -HALF_PI_C < y < HALF_PI_C:
        ptag[0] = TAG_ENTERS_V_C
        pstep[0] = max_iter
        return
    ptag[0] = TAG_UNDECIDED_C
    pstep[0] = max_iter


def classify_point(double x, double y, int max_iter):
    cdef int tag = 0, step = 0
    _classify_point_c(x, y, max_iter, &tag, &step)
    return tag, step


def fill_classify(tags, steps, int row_lo, int row_hi,
                  double re0, double dre, double im0, double dim, int max_iter):
    cdef unsigned char[:, ::1] tv = tags
    cdef int[:, ::1] sv = steps
    cdef int width = <int>tags.shape[1]
    cdef int r, j, tag, step
    cdef double x, y
    with nogil:
        for r in range(row_lo, row_hi):
            y = im0 + (r + 0.5) * dim
            for j in range(width):
                x = re0 + (j + 0.5) * dre
                _classify_point_c(x, y, max_iter, &tag, &step)
                tv[r, j] = <unsigned char>tag
                sv[r, j] = step


def itinerary_bits(double x, double y, int depth):
    cdef list bits = []
    cdef double ey, s, c, sy
    cdef int k
    for k in range(depth):
        if x > -1.0 and -HALF_PI_C < y < HALF_PI_C:
            return bits, ITIN_ENTERED_V, k
        if fabs(y - PI_C) <= LINE_TOL:
            bits.extend([0] * (depth - k))
            return bits, ITIN_OK, depth
        if fabs(y + PI_C) <= LINE_TOL:
            bits.extend([1] * (depth - k))
            return bits, ITIN_OK, depth
        if fabs(y) > PI_C:
            return bits, ITIN_EXITED_S, k
        if fabs(y) <= LINE_TOL:
            return bits, ITIN_HIT_REAL, k
        bits.append(0 if y > 0.0 else 1)
        if k == depth - 1:
            return bits, ITIN_OK, depth
        if x < X_OVERFLOW_C:
            return bits, ITIN_OVERFLOW, k + 1
        ey = exp(-x)
        _sincos(y, &s, &c)
        sy = ey * s if s != 0.0 else 0.0
        x = x + ey * c
        y = y - sy
    return bits, ITIN_OK, depth
