import cmath
import math
import random

import pytest

from contactbundles import circle_dynamics as cd
from contactbundles import hyperbolic as hy


def mobius_to_origin(p: complex):
    s = math.sqrt(1.0 - abs(p) ** 2)
    return (1.0 / s, -p / s)


def apply_su(m, w: complex) -> complex:
    a, b = m
    return (a * w + b) / (b.conjugate() * w + a.conjugate())


def angle_at(p: hy.HPoint, q1: hy.HPoint, q2: hy.HPoint) -> float:
    """Hyperbolic angle at p between the geodesics to q1 and q2.

    Translating p to the origin turns both geodesics into straight rays, and
    the disk metric is conformal, so the angle is the Euclidean one there.
    """
    m = mobius_to_origin(p.as_complex())
    w1 = apply_su(m, q1.as_complex())
    w2 = apply_su(m, q2.as_complex())
    d = abs(cmath.phase(w1) - cmath.phase(w2))
    return min(d, 2 * math.pi - d)


def fan_defect_area(poly: hy.SymmetricPolygon) -> float:
    """Triangulated angle-defect oracle: fan from s_1, defect pi - (sum of angles)."""
    v = poly.vertices
    total = 0.0
    for k in range(1, len(v) - 1):
        a, b, c = v[0], v[k], v[k + 1]
        angles = angle_at(a, b, c) + angle_at(b, a, c) + angle_at(c, a, b)
        total += math.pi - angles
    return total


def random_point(rng, rmax=0.95) -> hy.HPoint:
    r = rmax * math.sqrt(rng.uniform(0, 1))
    t = rng.uniform(0, 2 * math.pi)
    return hy.HPoint(r * math.cos(t), r * math.sin(t))


def random_isometry(rng) -> hy.Isometry2H:
    # random product of a rotation and a translation along a random direction
    rot = hy.Isometry2H.rotation(rng.uniform(0, 2 * math.pi))
    p = random_point(rng, 0.7).as_complex()
    s = math.sqrt(1.0 - abs(p) ** 2)
    trans = hy.Isometry2H.from_disk_coefficients(1.0 / s, p / s)
    return rot @ trans


class TestDistance:
    def test_coincident_points(self):
        p = hy.HPoint(0.3, -0.2)
        assert hy.hdistance(p, p) == 0.0

    def test_center_to_radius_closed_form(self):
        for r in (0.1, 0.5, 0.9):
            d = hy.hdistance(hy.HPoint(0, 0), hy.HPoint(r, 0))
            assert d == pytest.approx(2 * math.atanh(r), abs=1e-14)

    def test_center_to_radius_integration_oracle(self):
        from scipy.integrate import quad
        for r in (0.2, 0.6, 0.8):
            val, err = quad(lambda t: 2.0 / (1.0 - t * t), 0.0, r)
            assert abs(hy.hdistance(hy.HPoint(0, 0), hy.HPoint(r, 0)) - val) <= 1e-10 + err

    def test_isometry_invariance(self):
        rng = random.Random(10)
        for _ in range(50):
            p, q = random_point(rng), random_point(rng)
            iso = random_isometry(rng)
            d0 = hy.hdistance(p, q)
            d1 = hy.hdistance(iso.apply(p), iso.apply(q))
            assert abs(d0 - d1) <= 1e-10

    def test_triangle_inequality(self):
        rng = random.Random(11)
        for _ in range(50):
            p, q, r = (random_point(rng) for _ in range(3))
            assert hy.hdistance(p, r) <= hy.hdistance(p, q) + hy.hdistance(q, r) + 1e-12


class TestPolygon:
    def test_square_all_sides_equal(self):
        poly = hy.build_symmetric_polygon(1, 1.0)
        assert len(poly.vertices) == 4
        lengths = poly.side_lengths()
        assert max(lengths) - min(lengths) <= 1e-12

    def test_pairing_length_constraints(self):
        poly = hy.build_symmetric_polygon(2, 2.0)
        assert len(poly.vertices) == 8
        d = hy.hdistance
        for i in range(1, 3):
            s = poly.vertex
            assert abs(d(s(4 * i - 3), s(4 * i - 2)) - d(s(4 * i - 1), s(4 * i))) <= 1e-10
            assert abs(d(s(4 * i - 2), s(4 * i - 1)) - d(s(4 * i), s(4 * i + 1))) <= 1e-10

    def test_small_radius_small_area(self):
        for g in (1, 2):
            assert hy.polygon_area(hy.build_symmetric_polygon(g, 1e-4)) <= 1e-6

    def test_area_below_ideal_bound(self):
        for radius in (0.5, 2.0, 6.0):
            area = hy.polygon_area(hy.build_symmetric_polygon(1, radius))
            assert 0.0 < area < 2 * math.pi


class TestGaussBonnet:
    @pytest.mark.parametrize("g", [1, 2, 3])
    @pytest.mark.parametrize("radius", [0.5, 1.0, 2.0])
    def test_area_matches_fan_defect_oracle(self, g, radius):
        poly = hy.build_symmetric_polygon(g, radius)
        assert abs(hy.polygon_area(poly) - fan_defect_area(poly)) <= 1e-9

    def test_radius_for_area_round_trip(self):
        for g, area in ((1, 1.0), (2, 4 * math.pi), (2, 12.0), (3, 25.0)):
            radius = hy.radius_for_area(g, area)
            assert abs(hy.polygon_area(hy.build_symmetric_polygon(g, radius)) - area) <= 1e-9

    def test_small_area_small_radius(self):
        assert hy.radius_for_area(2, 1e-4) < 0.05

    def test_threshold_area_finite_radius(self):
        radius = hy.radius_for_area(2, 4 * math.pi)
        assert 0 < radius < 10

    def test_area_out_of_range(self):
        with pytest.raises(hy.AreaOutOfRange):
            hy.radius_for_area(2, (4 * 2 - 2) * math.pi)
        with pytest.raises(hy.AreaOutOfRange):
            hy.radius_for_area(1, -1.0)


class TestIsometryFromSegments:
    def test_identity_case(self):
        a, b = hy.HPoint(0.1, 0.2), hy.HPoint(-0.3, 0.4)
        iso = hy.isometry_from_segments(a, b, a, b)
        assert iso.proj_distance(hy.Isometry2H.identity()) <= 1e-10

    def test_known_rotation(self):
        rng = random.Random(12)
        phi = 1.234
        rot = hy.Isometry2H.rotation(phi)
        a, b = random_point(rng), random_point(rng)
        iso = hy.isometry_from_segments(a, b, rot.apply(a), rot.apply(b))
        assert iso.proj_distance(rot) <= 1e-10

    def test_length_mismatch(self):
        with pytest.raises(hy.LengthMismatch):
            hy.isometry_from_segments(hy.HPoint(0, 0), hy.HPoint(0.5, 0),
                                      hy.HPoint(0, 0), hy.HPoint(0.2, 0))


class TestSidePairings:
    def test_square_vertex_conditions(self):
        poly = hy.build_symmetric_polygon(1, 1.3)
        p1, p2 = hy.side_pairings(poly)
        s = poly.vertex
        assert hy.hdistance(p1.apply(s(3)), s(2)) <= 1e-9
        assert hy.hdistance(p1.apply(s(4)), s(1)) <= 1e-9
        assert hy.hdistance(p2.apply(s(2)), s(5)) <= 1e-9
        assert hy.hdistance(p2.apply(s(3)), s(4)) <= 1e-9

    def test_genus2_conditions(self):
        poly = hy.build_symmetric_polygon(2, hy.radius_for_area(2, 5 * math.pi))
        pairings = hy.side_pairings(poly)
        s = poly.vertex
        for i in range(1, 3):
            po, pe = pairings[2 * (i - 1)], pairings[2 * (i - 1) + 1]
            assert hy.hdistance(po.apply(s(4 * i - 1)), s(4 * i - 2)) <= 1e-9
            assert hy.hdistance(po.apply(s(4 * i)), s(4 * i - 3)) <= 1e-9
            assert hy.hdistance(pe.apply(s(4 * i - 2)), s(4 * i + 1)) <= 1e-9
            assert hy.hdistance(pe.apply(s(4 * i - 1)), s(4 * i)) <= 1e-9

    def test_degenerate_limit_becomes_center_rotation(self):
        # as the polygon shrinks the pairings converge to rotations about the
        # center: the center displacement is O(radius) and the trace excess
        # over the elliptic range is O(radius^2)
        center = hy.HPoint(0.0, 0.0)
        for g in (1, 2):
            for radius in (1e-3, 1e-4):
                for p in hy.side_pairings(hy.build_symmetric_polygon(g, radius)):
                    assert hy.hdistance(p.apply(center), center) <= 5 * radius
                    assert abs(p.trace()) <= 2.0 + 10 * radius ** 2

    def test_pairings_preserve_distance(self):
        rng = random.Random(13)
        poly = hy.build_symmetric_polygon(2, 1.7)
        for iso in hy.side_pairings(poly):
            for _ in range(25):
                p, q = random_point(rng), random_point(rng)
                assert abs(hy.hdistance(iso.apply(p), iso.apply(q)) -
                           hy.hdistance(p, q)) <= 1e-9


class TestCommutatorProduct:
    def test_commuting_inputs(self):
        a = hy.Isometry2H.rotation(0.8)
        b = hy.Isometry2H.rotation(2.1)
        prod = hy.commutator_product([a, b])
        assert abs(abs(prod.trace()) - 2.0) <= 1e-12

    def test_area_4pi_gives_identity(self):
        poly = hy.build_symmetric_polygon(2, hy.radius_for_area(2, 4 * math.pi))
        prod = hy.commutator_product(hy.side_pairings(poly))
        assert prod.proj_distance(hy.Isometry2H.identity()) <= 1e-6

    def test_area_5pi_trace_zero(self):
        poly = hy.build_symmetric_polygon(2, hy.radius_for_area(2, 5 * math.pi))
        prod = hy.commutator_product(hy.side_pairings(poly))
        assert abs(prod.trace()) <= 1e-6

    @pytest.mark.parametrize("g,area", [(1, 1.0), (2, 2.0), (2, 10.0), (3, 20.0)])
    def test_elliptic_with_angle_sum_trace(self, g, area):
        poly = hy.build_symmetric_polygon(g, hy.radius_for_area(g, area))
        prod = hy.commutator_product(hy.side_pairings(poly))
        expected = 2 * abs(math.cos(((4 * g - 2) * math.pi - area) / 2))
        assert abs(abs(prod.trace()) - expected) <= 1e-6
        assert prod.proj_distance(prod) == 0.0

    def test_fixes_first_vertex(self):
        poly = hy.build_symmetric_polygon(2, hy.radius_for_area(2, 7.0))
        prod = hy.commutator_product(hy.side_pairings(poly))
        assert hy.hdistance(prod.apply(poly.vertex(1)), poly.vertex(1)) <= 1e-9


class TestBoundaryLift:
    def test_identity_lift(self):
        f = hy.boundary_lift(hy.Isometry2H.identity())
        for t in (-1.5, 0.0, 0.25, 2.0):
            assert abs(f.eval(t) - t) <= 1e-12

    def test_center_rotation_translation_number(self):
        theta = 0.37
        f = hy.boundary_lift(hy.Isometry2H.rotation(2 * math.pi * theta))
        est = cd.translation_number(f, 3000)
        assert abs(est.value - theta) <= est.error_bound

    def test_hyperbolic_element_has_zero_rotation(self):
        iso = hy.Isometry2H(2.0, 0.0, 0.0, 0.5)  # trace 2.5 > 2
        assert iso.classification() == "hyperbolic"
        est = cd.translation_number(hy.boundary_lift(iso), 2000)
        assert abs(est.value) <= est.error_bound


class TestHolonomy:
    def test_small_area_small_rho(self):
        est = hy.holonomy_translation_number(2, 1e-3, 2000)
        assert abs(est.value) <= 1e-3 / (2 * math.pi) + est.error_bound

    @pytest.mark.parametrize("area_mult,target", [(1.0, 0.5), (4.0, 2.0)])
    def test_reference_areas(self, area_mult, target):
        est = hy.holonomy_translation_number(2, area_mult * math.pi, 5000)
        assert abs(abs(est.value) - target) <= est.error_bound

    def test_area_sweep(self):
        g = 2
        for area in [math.pi / 2 * k for k in range(1, 12)]:
            est = hy.holonomy_translation_number(g, area, 2000)
            assert abs(abs(est.value) - area / (2 * math.pi)) <= est.error_bound

    def test_out_of_range(self):
        with pytest.raises(hy.AreaOutOfRange):
            hy.holonomy_translation_number(2, 6 * math.pi, 100)

    def test_lift_independence_of_relator(self):
        poly = hy.build_symmetric_polygon(2, hy.radius_for_area(2, 5.0))
        lifts = [hy.boundary_lift(p) for p in hy.side_pairings(poly)]
        rel = cd.evaluate_relator(lifts)
        bumped = list(lifts)
        bumped[2] = cd.MoebiusBoundaryLift(lifts[2].iso, lifts[2].winding + 1)
        rel2 = cd.evaluate_relator(bumped)
        rng = random.Random(14)
        for _ in range(50):
            t = rng.uniform(-2, 2)
            assert abs(rel.eval(t) - rel2.eval(t)) <= 1e-9


class TestIsometryValidation:
    def test_determinant_normalised(self):
        iso = hy.Isometry2H(2.0, 0.0, 0.0, 2.0)
        assert abs(iso.a * iso.d - iso.b * iso.c - 1.0) <= 1e-12

    def test_negative_determinant_rejected(self):
        with pytest.raises(ValueError):
            hy.Isometry2H(1.0, 0.0, 0.0, -1.0)

    def test_classification(self):
        assert hy.Isometry2H.rotation(1.0).classification() == "elliptic"
        assert hy.Isometry2H(1.0, 1.0, 0.0, 1.0).classification() == "parabolic"
        assert hy.Isometry2H(2.0, 0.0, 0.0, 0.5).classification() == "hyperbolic"

    def test_point_outside_disk_rejected(self):
        with pytest.raises(ValueError):
            hy.HPoint(0.8, 0.7)
