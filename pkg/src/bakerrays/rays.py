"""Escaping tails and dynamic rays.

A tail point for sequence s at parameter t <= -2 is the intersection of the
squares obtained by pulling the square of side pi with right edge at F^n(t)
(in the half-strip of symbol s_n) back through the first n inverse branches.
The certified diameter of the nested set after pulling the (n+1)-st square
back is sqrt(2) pi / prod_{k=0..n} lambda(F^k(t)), with lambda the expansion
lower bound of the half-plane containing each intermediate square; the
uniform bound lambda(-2)^(n+1) is the special case of flattening the product.

The model orbit F^k(t) collapses double-exponentially: once it passes the
exp range the pullback of anything in the next square equals the right-edge
corner of the current square to below double resolution, which is where the
construction starts in that regime.

Dynamic rays extend tails to all real t by pulling the tail of the shifted
sequence at F^n(t) back n times (n minimal with F^n(t) <= -2).
"""

import math
from dataclasses import dataclass

from . import kernels
from .branches import inverse_branch
from .core import PI, expansion_lower_bound, model_F, model_F_inverse
from .errors import (
    DomainError,
    NestingViolationError,
    NoConvergenceError,
    PullbackBudgetError,
)
from .symbolic import (
    CLASS_BOUNDED,
    CLASS_EVENTUALLY_CONSTANT,
    SymbolSequence,
    classify_sequence,
    shift,
)

SQRT2 = math.sqrt(2.0)
DIAG = SQRT2 * PI
TAIL_CUTOFF = -2.0
#: uniqueness of tail points is only claimed past this (construction works from -2)
UNIQUENESS_CUTOFF = -2.0 - PI
DEFAULT_PULLBACK_BUDGET = 200_000


@dataclass(frozen=True)
class SquareSpec:
    right_edge: float
    half: int  # 0: [0, pi], 1: [-pi, 0]

    @property
    def center(self):
        y = 0.5 * PI if self.half == 0 else -0.5 * PI
        return complex(self.right_edge - 0.5 * PI, y)

    def contains(self, z, slack=0.0):
        lo, hi = (0.0, PI) if self.half == 0 else (-PI, 0.0)
        return (
            self.right_edge - PI - slack <= z.real <= self.right_edge + slack
            and lo - slack <= z.imag <= hi + slack
        )

    def signed_margin(self, z):
        lo, hi = (0.0, PI) if self.half == 0 else (-PI, 0.0)
        return min(
            z.real - (self.right_edge - PI),
            self.right_edge - z.real,
            z.imag - lo,
            hi - z.imag,
        )

    def boundary_points(self, count):
        pts = []
        lo = 0.0 if self.half == 0 else -PI
        for k in range(count):
            u = 4.0 * k / count
            x0, x1 = self.right_edge - PI, self.right_edge
            if u < 1.0:
                pts.append(complex(x0 + u * PI, lo))
            elif u < 2.0:
                pts.append(complex(x1, lo + (u - 1.0) * PI))
            elif u < 3.0:
                pts.append(complex(x1 - (u - 2.0) * PI, lo + PI))
            else:
                pts.append(complex(x0, lo + PI - (u - 3.0) * PI))
        return pts


@dataclass(frozen=True)
class RayPoint:
    t: float
    z: complex
    depth: int
    err_radius: float


def _model_orbit(t):
    """F^k(t) for k = 0, 1, ... while representable (last entry <= -700 or at
    the step before exp overflow)."""
    ts = [t]
    while ts[-1] > -700.0:
        ts.append(model_F(ts[-1]))
    return ts


def _inv_lambda(t):
    """1 / lambda(t), underflowing to 0 for deep t (certified: contraction is
    only stronger there)."""
    if t < -700.0:
        return 0.0
    return 1.0 / expansion_lower_bound(t)


def tail_point(s, t, tol=1e-12, min_depth=0):
    """Escaping-tail point for sequence s at parameter t <= -2.

    Pulls the center of the deepest needed square back through the branches
    of the leading symbols; err_radius is the certified nested-set diameter.
    min_depth forces extra nesting levels (clamped at the representable
    depth), used to test that the result does not depend on the depth.
    """
    t = float(t)
    if t > TAIL_CUTOFF:
        raise DomainError(f"tail parameter must be <= {TAIL_CUTOFF}, got {t}")
    if not tol > 0.0:
        raise DomainError("tolerance must be positive")
    ts = _model_orbit(t)
    K = len(ts) - 1
    tol_eff = max(tol, abs(t) * 1e-15)
    bound = DIAG
    n = 0
    while True:
        bound *= _inv_lambda(ts[n])
        if (bound <= tol_eff and n >= min_depth) or n == K:
            break
        n += 1
    solver_tol = 1e-13
    if n == K:
        # the (K+1)-st square is past the exp range; everything in it pulls
        # back onto the right-edge corner of square K to below double resolution
        y = PI if s.symbol_at(K) == 0 else -PI
        z = complex(ts[K], y)
        start_k = K - 1
    else:
        sq = SquareSpec(ts[n + 1], s.symbol_at(n + 1))
        z = sq.center
        start_k = n
    seed = None
    for k in range(start_k, -1, -1):
        rep = inverse_branch(s.symbol_at(k), z, solver_tol, seed=seed)
        seed = z
        z = rep.z
    err = max(bound, (n + 2) * 5e-15 * max(1.0, abs(t)))
    return RayPoint(t, z, n + 1, err)


def _forward_steps_to_tail(t, budget):
    """Minimal m with F^m(t) <= -2, and the forward values; None when m > budget."""
    vals = [t]
    m = 0
    while vals[-1] > TAIL_CUTOFF:
        if m >= budget:
            return None
        vals.append(model_F(vals[-1]))
        m += 1
    return vals


def ray_point(s, t, tol=1e-12, extra_depth=0, pullback_budget=DEFAULT_PULLBACK_BUDGET):
    """Dynamic-ray point for sequence s at any real parameter t.

    t <= -2 is the tail itself. Otherwise the tail of the shifted sequence at
    F^m(t) is pulled back m times (m minimal). Beyond the pullback budget,
    eventually-constant sequences use the exact conjugacy of the boundary
    lines with the growth model (the constant ray at parameter u is u +- i pi
    identically), and bounded sequences return the landing limit, which the
    ray has approached to below double resolution at such parameters.
    """
    t = float(t)
    if not tol > 0.0:
        raise DomainError("tolerance must be positive")
    if extra_depth < 0:
        raise DomainError("extra_depth must be >= 0")

    if t <= TAIL_CUTOFF:
        return tail_point(s, t, tol, min_depth=extra_depth)

    vals = _forward_steps_to_tail(t, pullback_budget)
    if vals is not None:
        m = len(vals) - 1
        inner = tail_point(shift(s, m), vals[m], tol, min_depth=extra_depth)
        z = inner.z
        seed = None
        for k in range(m - 1, -1, -1):
            rep = inverse_branch(s.symbol_at(k), z, 1e-13, seed=seed)
            seed = z
            z = rep.z
        err = inner.err_radius + m * 5e-15 * max(1.0, abs(t))
        return RayPoint(t, z, m + inner.depth, err)

    kind, _ = classify_sequence(s)
    if kind == CLASS_EVENTUALLY_CONSTANT:
        m = s.constant_from()
        sym = s.tail.symbol
        u = t
        for _ in range(m):
            u = model_F(u)
        z = complex(u, PI if sym == 0 else -PI)
        seed = None
        for k in range(m - 1, -1, -1):
            rep = inverse_branch(s.symbol_at(k), z, 1e-13, seed=seed)
            seed = z
            z = rep.z
        return RayPoint(t, z, m, (m + 1) * 5e-15 * max(1.0, abs(t)))
    if kind == CLASS_BOUNDED:
        from .landing import landing_point

        res = landing_point(s, tol=min(tol, 1e-12))
        return RayPoint(t, res.z, res.depth_used, max(res.residual, tol))
    raise PullbackBudgetError(
        f"parameter {t} needs more than {pullback_budget} pullback steps for this sequence"
    )


def trace_ray(s, t_min, t_max, max_step=0.1, tol=1e-12, max_samples=2**20):
    """Adaptively sample the ray so consecutive points are <= max_step apart.

    Returns RayPoints with strictly increasing t. Raises NoConvergenceError
    (with partial data attached) if refinement exceeds max_samples.
    """
    t_min, t_max = float(t_min), float(t_max)
    if not t_min < t_max:
        raise DomainError("need t_min < t_max")
    pts = [ray_point(s, t_min, tol), ray_point(s, t_max, tol)]
    i = 0
    while i < len(pts) - 1:
        a, b = pts[i], pts[i + 1]
        if abs(b.z - a.z) <= max_step or (b.t - a.t) < 1e-12:
            i += 1
            continue
        if len(pts) >= max_samples:
            err = NoConvergenceError("step collapse: refinement budget exhausted")
            err.partial = pts
            raise err
        mid = 0.5 * (a.t + b.t)
        pts.insert(i + 1, ray_point(s, mid, tol))
    return pts


def _min_steps_to_tail_bound(t0):
    """Upper bound for the minimal m with F^m(t0) <= -2 (exact when cheap)."""
    if t0 <= TAIL_CUTOFF:
        return 0
    est = math.exp(t0) if t0 < 700.0 else math.inf
    if est <= 2e6:
        m = 0
        u = t0
        while u > TAIL_CUTOFF:
            u = model_F(u)
            m += 1
        return m
    if t0 >= 700.0:
        raise DomainError("parameter too large for a depth bound")
    # each step moves left by at least e^-t0 while above the cutoff
    return int(math.ceil((t0 + 2.0) * math.exp(t0))) + 1


def continuity_depth(s, t0, eps):
    """Depth n such that any sequence agreeing with s in the first n + 1
    entries stays within eps of the ray for all parameters <= t0.

    n = n1 + ceil(log(sqrt(2) pi / eps) / log(sqrt(2))), where n1 steps bring
    t0 at or below -2 and sqrt(2) is the expansion bound on {Re z < 0}.
    """
    if not eps > 0.0:
        raise DomainError("eps must be positive")
    n1 = _min_steps_to_tail_bound(float(t0))
    extra = math.log(DIAG / eps) / math.log(SQRT2)
    return n1 + max(0, int(math.ceil(extra - 1e-12)))


@dataclass(frozen=True)
class NestingReport:
    levels: int
    samples_per_level: int
    worst_margin: float


def verify_square_nesting(s, t, n_max, samples=200, margin_tol=1e-9):
    """Check that each square pulls back into its predecessor.

    Samples the boundary of the (n+1)-st square, pulls each point back by the
    branch of symbol s_n, and measures the signed distance to the inside of
    square n. The shared corner on the boundary lines maps boundary to
    boundary, so the sharp margin is 0; a sample outside by more than
    margin_tol falsifies the construction and raises.

    Once the next right edge is past the exp range the entire next square
    pulls back onto the current right-edge corner to below double resolution
    (deviation about (|t_n| + 10) e^{t_{n+1}}), and the margin is reported as
    that deviation.
    """
    t = float(t)
    if t > TAIL_CUTOFF:
        raise DomainError(f"square construction needs t <= {TAIL_CUTOFF}")
    if n_max < 1 or samples < 8:
        raise DomainError("need n_max >= 1 and samples >= 8")
    ts = _model_orbit(t)
    worst = math.inf
    for n in range(n_max + 1):
        t_n = ts[n] if n < len(ts) else -math.inf
        if n + 1 < len(ts):
            parent = SquareSpec(ts[n], s.symbol_at(n))
            child = SquareSpec(ts[n + 1], s.symbol_at(n + 1))
            seed = None
            for w in child.boundary_points(samples):
                rep = inverse_branch(s.symbol_at(n), w, 1e-13, seed=seed)
                seed = w
                m = parent.signed_margin(rep.z)
                worst = min(worst, m)
                if m < -margin_tol:
                    raise NestingViolationError(
                        f"pullback of {w!r} at level {n} escaped its parent square by {-m:.3e}",
                        point=rep.z,
                        level=n,
                    )
        else:
            # collapsed regime: deviation from the corner is below resolution
            dev = (abs(t_n) + 10.0) * math.exp(max(ts[min(n + 1, len(ts) - 1)], -745.0)) if n < len(ts) else 0.0
            worst = min(worst, -dev)
            if dev > margin_tol:
                raise NestingViolationError("collapsed-regime deviation unexpectedly large", level=n)
    return NestingReport(n_max, samples, worst)
