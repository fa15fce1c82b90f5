import heapq
import math

import numpy as np
import pytest

from bakerrays.core import (
    PI,
    HALF_PI,
    RegionLabel,
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
    semiconjugacy_unproject,
)
from bakerrays.errors import DomainError, MapOverflowError


class TestEvaluateF:
    def test_critical_point_maps_to_critical_value(self):
        assert evaluate_f(0j) == 1 + 0j

    def test_top_line_point(self):
        # e^{-i pi} = -1 and the top line is invariant bit-exactly
        z = complex(0.0, PI)
        assert evaluate_f(z) == complex(-1.0, PI)

    def test_near_identity_on_the_right(self):
        assert abs(evaluate_f(10 + 0j) - (10 + math.exp(-10))) < 1e-15

    def test_rejects_non_finite(self):
        with pytest.raises(DomainError):
            evaluate_f(complex(math.nan, 0.0))
        with pytest.raises(DomainError):
            evaluate_f(complex(math.inf, 1.0))

    def test_overflow(self):
        with pytest.raises(MapOverflowError):
            evaluate_f(complex(-800.0, 1.0))

    def test_conjugation_symmetry_exact(self, rng):
        for _ in range(500):
            z = complex(rng.uniform(-30, 30), rng.uniform(-PI, PI))
            assert evaluate_f(z.conjugate()) == evaluate_f(z).conjugate()

    def test_translation_identity(self, rng):
        for _ in range(300):
            z = complex(rng.uniform(-20, 20), rng.uniform(-PI, PI))
            fz = evaluate_f(z)
            for k in (-3, -1, 1, 2):
                w = evaluate_f(z + complex(0, 2 * PI * k))
                assert abs(w - fz - complex(0, 2 * PI * k)) <= 1e-9 * max(1.0, abs(fz))


class TestDerivative:
    def test_critical_point(self):
        assert derivative_f(0j) == 0j

    def test_modulus_at_top_left_corner(self):
        assert abs(abs(derivative_f(complex(-1, PI))) - (1 + math.e)) < 1e-12

    def test_against_finite_differences(self, rng):
        h = 1e-7
        for _ in range(200):
            z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
            fd = (evaluate_f(z + h) - evaluate_f(z - h)) / (2 * h)
            d = derivative_f(z)
            if abs(d) > 1e-3:
                assert abs(fd - d) <= 1e-6 * abs(d)

    def test_modulus_formula(self, rng):
        for _ in range(200):
            z = complex(rng.uniform(-5, 5), rng.uniform(-PI, PI))
            expect = math.sqrt(
                1 + math.exp(-2 * z.real) - 2 * math.exp(-z.real) * math.cos(z.imag)
            )
            assert abs(abs(derivative_f(z)) - expect) <= 1e-12 * max(1.0, expect)


class TestModel:
    def test_values(self):
        assert model_F(0.0) == -1.0
        assert abs(model_F(-2.0) - (-2.0 - math.e**2)) < 1e-12

    def test_roundtrip(self, rng):
        for _ in range(300):
            x = rng.uniform(-50, 50)
            assert abs(model_F(model_F_inverse(x)) - x) <= 1e-12 * max(1.0, abs(x))

    def test_inverse_of_zero_is_omega_constant(self):
        mp = pytest.importorskip("mpmath")
        omega = float(mp.lambertw(1))
        assert abs(model_F_inverse(0.0) - omega) < 1e-13

    def test_overflow(self):
        with pytest.raises(MapOverflowError):
            model_F(-800.0)


class TestClassifyRegion:
    def test_examples(self):
        assert classify_region(2 + 2j) is RegionLabel.OMEGA00
        assert classify_region(0.5j) is RegionLabel.V
        assert classify_region(-3 + 0.3j) is RegionLabel.EXITS_S

    def test_tie_rules(self):
        assert classify_region(complex(1.0, PI)) is RegionLabel.ON_L_PLUS
        assert classify_region(complex(1.0, -PI)) is RegionLabel.ON_L_MINUS
        assert classify_region(complex(-5.0, 5e-13)) is RegionLabel.ON_R
        assert classify_region(complex(0.0, 4.0)) is RegionLabel.OUTSIDE_S

    def test_v_membership(self):
        assert classify_region(complex(-0.5, 1.0)) is RegionLabel.V
        assert classify_region(complex(-0.5, 2.0)) is not RegionLabel.V  # |Im| > pi/2
        assert classify_region(complex(-1.5, 1.0)) is not RegionLabel.V  # Re <= -1
        assert classify_region(complex(5.0, 2.0)) in (
            RegionLabel.OMEGA00,
            RegionLabel.OMEGA11,
            RegionLabel.OMEGA01,
            RegionLabel.OMEGA10,
        )

    def test_conjugation_swaps_labels(self, rng):
        swap = {
            RegionLabel.OMEGA00: RegionLabel.OMEGA11,
            RegionLabel.OMEGA11: RegionLabel.OMEGA00,
            RegionLabel.OMEGA01: RegionLabel.OMEGA10,
            RegionLabel.OMEGA10: RegionLabel.OMEGA01,
            RegionLabel.ON_L_PLUS: RegionLabel.ON_L_MINUS,
            RegionLabel.ON_L_MINUS: RegionLabel.ON_L_PLUS,
        }
        for _ in range(400):
            z = complex(rng.uniform(-6, 6), rng.uniform(-PI, PI))
            a = classify_region(z)
            b = classify_region(z.conjugate())
            assert b is swap.get(a, a)

    def test_half_strip_pair_semantics(self, rng):
        for _ in range(400):
            z = complex(rng.uniform(-6, 6), rng.uniform(0.05, PI - 0.05))
            label = classify_region(z)
            if label in (RegionLabel.OMEGA00, RegionLabel.OMEGA01):
                fz = evaluate_f(z)
                assert abs(fz.imag) <= PI
                assert (fz.imag > 0) == (label is RegionLabel.OMEGA00)


class TestSemiconjugacy:
    def test_projection_values(self):
        assert semiconjugacy_project(0j) == 1 + 0j
        assert abs(semiconjugacy_unproject(1 + 0j)) == 0.0

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            semiconjugacy_project(complex(0, PI))
        with pytest.raises(DomainError):
            semiconjugacy_unproject(-2.0 + 0j)
        with pytest.raises(DomainError):
            semiconjugacy_unproject(0j)

    def test_identity_on_strip_samples(self, rng):
        used = 0
        worst = 0.0
        while used < 1000:
            z = complex(rng.uniform(-20, 20), rng.uniform(-PI + 1e-9, PI - 1e-9))
            fz = evaluate_f(z)
            # the projection of the image needs the image inside the open strip
            if abs(fz.imag) >= PI or not -700.0 < fz.real < 700.0:
                continue
            used += 1
            lhs = semiconjugacy_project(fz)
            rhs = evaluate_h(semiconjugacy_project(z))
            worst = max(worst, abs(lhs - rhs) / (1.0 + abs(rhs)))
        assert worst <= 1e-12


def _rho_oracle(z, w, boundary_samples=240):
    """Dijkstra over a dense visibility graph: z, w, and sampled points of the
    rectangle's boundary (so geodesics may bend anywhere on it, not only at
    the corners the implementation uses)."""
    from bakerrays.core import _segment_hits_open_v

    x_hi = max(z.real, w.real, 0.0) + 2.0
    nodes = [z, w]
    n_side = boundary_samples // 3
    for k in range(n_side + 1):
        y = -HALF_PI + PI * k / n_side
        nodes.append(complex(-1.0, y))
    for k in range(n_side + 1):
        x = -1.0 + (x_hi + 1.0) * k / n_side
        nodes.append(complex(x, HALF_PI))
        nodes.append(complex(x, -HALF_PI))
    n = len(nodes)
    adj = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if not _segment_hits_open_v(nodes[i], nodes[j]):
                d = abs(nodes[i] - nodes[j])
                adj[i].append((j, d))
                adj[j].append((i, d))
    dist = [math.inf] * n
    dist[0] = 0.0
    heap = [(0.0, 0)]
    while heap:
        d, i = heapq.heappop(heap)
        if d > dist[i]:
            continue
        if i == 1:
            return d
        for j, w_ in adj[i]:
            nd = d + w_
            if nd < dist[j]:
                dist[j] = nd
                heapq.heappush(heap, (nd, j))
    return dist[1]


class TestRhoDistance:
    def test_zero_at_equal_points(self):
        assert rho_distance(-5 + 2j, -5 + 2j) == 0.0

    def test_straight_segment_left_of_rectangle(self):
        d = rho_distance(complex(-5, 0.3), complex(-6, 0.4))
        assert abs(d - math.sqrt(1.01)) < 1e-14

    def test_two_corner_geodesic(self):
        z, w = 2 + 2j, 2 - 2j
        expect = 2 * math.hypot(3.0, 2.0 - HALF_PI) + PI
        d = rho_distance(z, w)
        assert abs(d - expect) < 1e-12
        assert abs(d - _rho_oracle(z, w)) < 1e-9

    def test_against_dense_visibility_oracle(self, rng):
        checked = 0
        while checked < 12:
            z = complex(rng.uniform(-6, 5), rng.uniform(-PI, PI))
            w = complex(rng.uniform(-6, 5), rng.uniform(-PI, PI))
            if in_closed_v(z) or in_closed_v(w):
                continue
            checked += 1
            assert abs(rho_distance(z, w) - _rho_oracle(z, w)) < 1e-9

    def test_metric_properties(self, rng):
        pts = []
        while len(pts) < 60:
            z = complex(rng.uniform(-6, 5), rng.uniform(-PI, PI))
            if not in_closed_v(z):
                pts.append(z)
        for a, b, c in zip(pts[0::3], pts[1::3], pts[2::3]):
            dab = rho_distance(a, b)
            assert dab >= abs(a - b) - 1e-12
            assert abs(rho_distance(b, a) - dab) < 1e-12
            assert dab <= rho_distance(a, c) + rho_distance(c, b) + 1e-9

    def test_euclidean_plus_pi_bound_within_regions(self, rng):
        # points sharing a region are joined by a geodesic of length at most
        # the euclidean distance plus pi
        found = 0
        while found < 40:
            z = complex(rng.uniform(-6, 5), rng.uniform(0.05, PI - 0.05))
            w = complex(rng.uniform(-6, 5), rng.uniform(0.05, PI - 0.05))
            if in_closed_v(z) or in_closed_v(w):
                continue
            if classify_region(z) != classify_region(w):
                continue
            found += 1
            assert rho_distance(z, w) <= abs(z - w) + PI + 1e-12

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            rho_distance(0.5 + 0.2j, -5 + 2j)  # first point in the rectangle
        with pytest.raises(DomainError):
            rho_distance(-5 + 2j, complex(0, 4.0))  # second outside the strip


class TestExpansionBound:
    def test_anchors(self):
        assert abs(expansion_lower_bound(-1.0) - (math.e - 1)) < 1e-14
        assert abs(expansion_lower_bound(0.0) - math.sqrt(2)) < 1e-14
        assert abs(expansion_lower_bound(-2.0) - (math.e**2 - 1)) < 1e-11

    @pytest.mark.parametrize("k", [-3.0, -2.0, -1.0, -0.5, 0.0, 1.0, 2.5])
    def test_grid_minimization_oracle(self, k):
        lam = expansion_lower_bound(k)
        xs = np.linspace(k - 6.0, k, 701)
        ys = np.linspace(-PI, PI, 701)
        X, Y = np.meshgrid(xs, ys)
        region = ~((X >= -1.0) & (np.abs(Y) <= HALF_PI))
        mod = np.sqrt(1 + np.exp(-2 * X) - 2 * np.exp(-X) * np.cos(Y))
        observed = mod[region].min()
        assert lam <= observed + 1e-9
        assert observed <= lam * (1.0 + 2e-2)  # the bound is attained up to grid pitch
        assert lam > 1.0

    def test_strictly_above_one_for_moderate_k(self):
        for k in (-5.0, -1.0, 0.0, 3.0, 10.0):
            assert expansion_lower_bound(k) > 1.0


class TestInvariants:
    def test_absorbing_rectangle_forward_invariant(self, rng):
        for _ in range(20000):
            z = complex(rng.uniform(-1.0, 40.0), rng.uniform(-HALF_PI, HALF_PI))
            if not in_open_v(z):
                continue
            assert in_open_v(evaluate_f(z))

    def test_expansion_criterion_equivalence(self, rng):
        for _ in range(20000):
            z = complex(rng.uniform(-8, 8), rng.uniform(-PI, PI))
            crit = math.exp(-z.real) - 2 * math.cos(z.imag) > 0
            mod = abs(derivative_f(z))
            if abs(mod - 1.0) > 1e-12:
                assert crit == (mod > 1.0)

    def test_strict_expansion_off_rectangle(self, rng):
        for _ in range(20000):
            z = complex(rng.uniform(-8, 8), rng.uniform(-PI, PI))
            if in_closed_v(z):
                continue
            assert abs(derivative_f(z)) > 1.0
