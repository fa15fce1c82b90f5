"""Invariant battery behind the `verify` CLI subcommand.

Each check returns (name, ok, detail); the runner prints one line per check
and the CLI exits nonzero when any fails. These are fast smoke-level
invariants; the full acceptance suite lives in the test tree.
"""

import math
import random

from . import inner, landing, rays
from .branches import inverse_branch
from .core import (
    PI,
    HALF_PI,
    classify_region,
    derivative_f,
    evaluate_f,
    evaluate_h,
    expansion_lower_bound,
    in_closed_v,
    in_open_v,
    model_F,
    model_F_inverse,
    rho_distance,
    semiconjugacy_project,
)
from .symbolic import SymbolSequence, ConstantTail, PeriodicTail, itinerary


def _sample_strip(rng, n, re_lo=-20.0, re_hi=20.0):
    return [complex(rng.uniform(re_lo, re_hi), rng.uniform(-PI, PI)) for _ in range(n)]


def check_expansion_criterion(rng, n=20000):
    bad = 0
    for z in _sample_strip(rng, n):
        if in_closed_v(z):
            continue
        crit = math.exp(-z.real) - 2.0 * math.cos(z.imag) > 0.0 if z.real > -700 else True
        mod = abs(derivative_f(z)) if z.real > -700 else 2.0
        if not crit or mod <= 1.0:
            bad += 1
    return "expansion criterion on strip minus rectangle", bad == 0, f"{bad} violations / {n}"


def check_absorbing_invariance(rng, n=20000):
    bad = 0
    for _ in range(n):
        z = complex(rng.uniform(-1.0, 30.0), rng.uniform(-HALF_PI, HALF_PI))
        if not in_open_v(z):
            continue
        if not in_open_v(evaluate_f(z)):
            bad += 1
    return "forward invariance of the absorbing rectangle", bad == 0, f"{bad} escapes / {n}"


def check_branch_roundtrip(rng, n=2000):
    worst = 0.0
    for _ in range(n):
        w = complex(rng.uniform(-30.0, 20.0), rng.uniform(-PI, PI))
        if abs(w.imag) <= 1e-9 and w.real >= 1.0 - 1e-9:
            continue
        for i in (0, 1):
            rep = inverse_branch(i, w, 1e-12)
            worst = max(worst, abs(evaluate_f(rep.z) - w) / max(1.0, abs(w)))
            lo, hi = (0.0, PI) if i == 0 else (-PI, 0.0)
            if not (lo - 1e-12 <= rep.z.imag <= hi + 1e-12):
                return "inverse-branch round trip", False, f"wrong half-strip at {w!r}"
    return "inverse-branch round trip", worst <= 1e-10, f"worst relative residual {worst:.2e}"


def check_semiconjugacy(rng, n=1500):
    worst = 0.0
    used = 0
    while used < n:
        z = complex(rng.uniform(-20.0, 20.0), rng.uniform(-PI + 1e-9, PI - 1e-9))
        fz = evaluate_f(z)
        if abs(fz.imag) >= PI or not -700.0 < fz.real < 700.0:
            continue
        used += 1
        lhs = semiconjugacy_project(fz)
        rhs = evaluate_h(semiconjugacy_project(z))
        worst = max(worst, abs(lhs - rhs) / (1.0 + abs(rhs)))
    return "exponential semiconjugacy identity", worst <= 1e-12, f"worst relative defect {worst:.2e}"


def check_translation_symmetry(rng, n=2000):
    worst = 0.0
    for z in _sample_strip(rng, n, -30.0, 30.0):
        fz = evaluate_f(z)
        for k in (-2, 1, 3):
            shifted = evaluate_f(z + complex(0.0, 2.0 * PI * k))
            worst = max(worst, abs(shifted - fz - complex(0.0, 2.0 * PI * k)) / max(1.0, abs(fz)))
        if evaluate_f(z.conjugate()) != fz.conjugate():
            return "translation and conjugation symmetry", False, f"conjugation broken at {z!r}"
    return "translation and conjugation symmetry", worst <= 1e-9, f"worst defect {worst:.2e}"


def check_metric(rng, n=300):
    pts = []
    while len(pts) < n:
        z = complex(rng.uniform(-8.0, 6.0), rng.uniform(-PI, PI))
        if not in_closed_v(z):
            pts.append(z)
    rng.shuffle(pts)
    for a, b, c in zip(pts[0::3], pts[1::3], pts[2::3]):
        dab = rho_distance(a, b)
        if dab < abs(a - b) - 1e-12:
            return "path metric dominates the euclidean one", False, f"{a!r},{b!r}"
        if abs(rho_distance(b, a) - dab) > 1e-12:
            return "path metric symmetry", False, f"{a!r},{b!r}"
        if dab > rho_distance(a, c) + rho_distance(c, b) + 1e-9:
            return "path metric triangle inequality", False, f"{a!r},{b!r},{c!r}"
    return "path metric properties", True, f"{n} sampled points"


def check_expansion_bound_table():
    vals = [(-1.0, math.e - 1.0), (0.0, math.sqrt(2.0)), (-2.0, math.exp(2.0) - 1.0)]
    for k, expect in vals:
        if abs(expansion_lower_bound(k) - expect) > 1e-12:
            return "expansion lower bounds", False, f"k={k}"
    return "expansion lower bounds", True, "anchors match"


def check_model_roundtrip(rng, n=500):
    worst = 0.0
    for _ in range(n):
        x = rng.uniform(-50.0, 50.0)
        worst = max(worst, abs(model_F(model_F_inverse(x)) - x) / max(1.0, abs(x)))
    return "growth model round trip", worst <= 1e-12, f"worst {worst:.2e}"


def check_ray_functional_equation():
    seq = SymbolSequence((), PeriodicTail((0, 1)))
    shifted = SymbolSequence((), PeriodicTail((1, 0)))
    worst = 0.0
    for t in (-6.0, -3.0, -2.0, 0.5, 2.0):
        lhs = evaluate_f(rays.ray_point(seq, t, 1e-12).z)
        rhs = rays.ray_point(shifted, model_F(t), 1e-12).z
        worst = max(worst, abs(lhs - rhs))
    return "ray functional equation", worst <= 1e-8, f"worst defect {worst:.2e}"


def check_line_ray_identity():
    seq = SymbolSequence((), ConstantTail(0))
    worst = 0.0
    for t in (-9.0, -2.0, 1.0, 5.0):
        z = rays.ray_point(seq, t, 1e-12).z
        worst = max(worst, abs(z - complex(t, PI)))
    return "top boundary line is the constant-0 ray", worst <= 1e-9, f"worst {worst:.2e}"


def check_periodic_anchor():
    pp = landing.periodic_point((0, 1), 1e-10)
    target = complex(-math.log(PI), HALF_PI)
    ok = abs(pp.z - target) <= 1e-10 and abs(abs(pp.multiplier) - (1.0 + PI * PI)) <= 1e-8
    lr = landing.landing_point(SymbolSequence((), PeriodicTail((0, 1))), 1e-12)
    ok = ok and abs(lr.z - pp.z) <= 1e-8
    return "period-2 anchor", ok, f"z={pp.z:.12f}"


def check_inner_function(rng, n=2000):
    worst = 0.0
    for _ in range(n):
        th = rng.uniform(0.0, 2.0 * PI)
        worst = max(worst, abs(abs(inner.g_eval(complex(math.cos(th), math.sin(th)))) - 1.0))
        if inner.g_deriv_modulus_on_circle(th) < 1.0 - 1e-12:
            return "inner function circle invariance", False, f"derivative below 1 at {th}"
    pre2 = inner.eventual_preimages_of_one(2)
    expect = [0.0, HALF_PI, PI, 1.5 * PI]
    ok = worst <= 1e-12 and len(pre2) == 4 and all(abs(a - b) <= 1e-12 for a, b in zip(pre2, expect))
    return "inner function circle invariance", ok, f"worst |g|-1 = {worst:.2e}"


def check_itinerary_shift(rng, n=200):
    seq_ok = 0
    for _ in range(n):
        z = complex(rng.uniform(-1.0, 1.0), rng.uniform(0.2, 2.8))
        out = itinerary(z, 8)
        if out.kind != "symbols":
            continue
        out2 = itinerary(evaluate_f(z), 7)
        if out2.kind == "symbols" and out.symbols[1:] == out2.symbols:
            seq_ok += 1
    return "itinerary shift equivariance", seq_ok > 0, f"{seq_ok} conclusive samples"


def run_all(seed=20260809):
    rng = random.Random(seed)
    checks = [
        check_expansion_criterion(rng),
        check_absorbing_invariance(rng),
        check_branch_roundtrip(rng),
        check_semiconjugacy(rng),
        check_translation_symmetry(rng),
        check_metric(rng),
        check_expansion_bound_table(),
        check_model_roundtrip(rng),
        check_ray_functional_equation(),
        check_line_ray_identity(),
        check_periodic_anchor(),
        check_inner_function(rng),
        check_itinerary_shift(rng),
    ]
    return checks
