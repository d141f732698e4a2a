"""Symmetric polygons in the Poincare disk and their side-pairing isometries.

The construction realised here: a regular 4g-gon with vertices numbered
clockwise on a hyperbolic circle, glued by orientation-preserving isometries
pairing the sides in the pattern

    phi_{2i-1}(s_{4i-1}) = s_{4i-2},   phi_{2i-1}(s_{4i}) = s_{4i-3},
    phi_{2i}(s_{4i-2})   = s_{4i+1},   phi_{2i}(s_{4i-1}) = s_{4i},

indices mod 4g, so that consecutive edges are glued in the pattern
(E_{4i-3}, E_{4i-2}, E_{4i-1}, E_{4i}) ~ (a, b, a, b); each edge is used by
exactly one pairing.  The product of commutators of the pairings is then an
elliptic rotation about s_1 by the polygon's total interior angle, and its
boundary lift has translation number -area/(2*pi) up to the orientation sign.

Isometries are stored as real SL(2) matrices (PSL(2, R), identified with
their negation) and act on the disk through the Cayley transform; the
boundary circle is the circle-dynamics coordinate, so no further conjugation
is needed.  Interior angles are computed by the hyperbolic law of cosines on
the isoceles center triangles; numeric geodesic integration is used only as
a test oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from . import circle_dynamics as cd


class AreaOutOfRange(ValueError):
    """Requested area is outside (0, (4g-2)*pi)."""


class LengthMismatch(ValueError):
    """Oriented segments of different hyperbolic lengths cannot be glued."""


class Isometry2H:
    """An element of PSL(2, R): real matrix with det 1, up to global sign."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: float, b: float, c: float, d: float):
        det = a * d - b * c
        if det <= 0:
            raise ValueError("matrix must have positive determinant")
        s = math.sqrt(det)
        self.a, self.b, self.c, self.d = a / s, b / s, c / s, d / s

    def __repr__(self):
        return f"Isometry2H({self.a:.12g}, {self.b:.12g}, {self.c:.12g}, {self.d:.12g})"

    @classmethod
    def identity(cls) -> "Isometry2H":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def rotation(cls, angle: float) -> "Isometry2H":
        """Rotation of the disk about its center by `angle`."""
        h = angle / 2.0
        return cls(math.cos(h), math.sin(h), -math.sin(h), math.cos(h))

    @classmethod
    def from_disk_coefficients(cls, alpha: complex, beta: complex) -> "Isometry2H":
        a = alpha.real + beta.real
        d = alpha.real - beta.real
        b = alpha.imag - beta.imag
        c = -alpha.imag - beta.imag
        return cls(a, b, c, d)

    def disk_coefficients(self) -> Tuple[complex, complex]:
        """(alpha, beta) of the disk action w -> (alpha*w + beta)/(conj(beta)*w + conj(alpha))."""
        alpha = complex((self.a + self.d) / 2.0, (self.b - self.c) / 2.0)
        beta = complex((self.a - self.d) / 2.0, -(self.b + self.c) / 2.0)
        return alpha, beta

    def compose(self, other: "Isometry2H") -> "Isometry2H":
        return Isometry2H(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __matmul__(self, other: "Isometry2H") -> "Isometry2H":
        return self.compose(other)

    def inverse(self) -> "Isometry2H":
        return Isometry2H(self.d, -self.b, -self.c, self.a)

    def trace(self) -> float:
        return self.a + self.d

    def classification(self, tol: float = 1e-12) -> str:
        t = abs(self.trace())
        if abs(t - 2.0) <= tol:
            return "parabolic"
        return "elliptic" if t < 2.0 else "hyperbolic"

    def apply_complex(self, w: complex) -> complex:
        alpha, beta = self.disk_coefficients()
        return (alpha * w + beta) / (beta.conjugate() * w + alpha.conjugate())

    def apply(self, p: "HPoint") -> "HPoint":
        w = self.apply_complex(complex(p.x, p.y))
        return HPoint(w.real, w.imag)

    def proj_distance(self, other: "Isometry2H") -> float:
        """max-norm distance in PSL(2, R): min over the sign ambiguity."""
        dplus = max(abs(self.a - other.a), abs(self.b - other.b),
                    abs(self.c - other.c), abs(self.d - other.d))
        dminus = max(abs(self.a + other.a), abs(self.b + other.b),
                     abs(self.c + other.c), abs(self.d + other.d))
        return min(dplus, dminus)


@dataclass(frozen=True)
class HPoint:
    """A point of the Poincare disk model."""

    x: float
    y: float

    def __post_init__(self):
        if self.x * self.x + self.y * self.y >= 1.0:
            raise ValueError("point must lie strictly inside the unit disk")

    @classmethod
    def from_complex(cls, w: complex) -> "HPoint":
        return cls(w.real, w.imag)

    def as_complex(self) -> complex:
        return complex(self.x, self.y)


def hdistance(p: HPoint, q: HPoint) -> float:
    """Hyperbolic distance in the disk model (curvature -1)."""
    zp, zq = p.as_complex(), q.as_complex()
    num = abs(zp - zq)
    den = abs(1.0 - zp.conjugate() * zq)
    return 2.0 * math.atanh(num / den)


@dataclass(frozen=True)
class SymmetricPolygon:
    """Regular 4g-gon centred at the origin, vertices numbered clockwise.

    Full symmetry forces the side-pairing length constraints
    dist(s_{4i-3}, s_{4i-2}) = dist(s_{4i-1}, s_{4i}) and
    dist(s_{4i-2}, s_{4i-1}) = dist(s_{4i}, s_{4i+1}), and the circumradius
    sweeps every area in (0, (4g-2)*pi).
    """

    genus: int
    circumradius: float
    vertices: Tuple[HPoint, ...]

    def vertex(self, k: int) -> HPoint:
        """1-indexed accessor for s_k, indices mod 4g."""
        return self.vertices[(k - 1) % len(self.vertices)]

    def side_lengths(self) -> List[float]:
        n = len(self.vertices)
        return [hdistance(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]


def build_symmetric_polygon(g: int, radius: float) -> SymmetricPolygon:
    """Regular 4g-gon with hyperbolic circumradius `radius` about the origin."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    if radius <= 0:
        raise ValueError("circumradius must be positive")
    n = 4 * g
    re = math.tanh(radius / 2.0)  # Euclidean radius of the hyperbolic circle
    verts = []
    for k in range(n):
        theta = -2.0 * math.pi * k / n  # clockwise numbering
        verts.append(HPoint(re * math.cos(theta), re * math.sin(theta)))
    poly = SymmetricPolygon(genus=g, circumradius=radius, vertices=tuple(verts))
    lengths = poly.side_lengths()
    if max(lengths) - min(lengths) > 1e-10:
        raise ArithmeticError("side lengths of the symmetric polygon drifted apart")
    return poly


def _triangle_angle(adj1: float, adj2: float, opposite: float) -> float:
    """Angle between the sides of lengths adj1, adj2 in a hyperbolic triangle."""
    c = (math.cosh(adj1) * math.cosh(adj2) - math.cosh(opposite)) / (
        math.sinh(adj1) * math.sinh(adj2))
    return math.acos(min(1.0, max(-1.0, c)))


def polygon_area(poly: SymmetricPolygon) -> float:
    """Gauss-Bonnet area: (4g-2)*pi minus the sum of interior angles.

    Each interior angle is split by the ray to the center into two base
    angles of isoceles center triangles, computed by the law of cosines.
    """
    verts = poly.vertices
    n = len(verts)
    origin = HPoint(0.0, 0.0)
    radii = [hdistance(origin, v) for v in verts]
    sides = poly.side_lengths()
    angle_sum = 0.0
    for k in range(n):
        # angle at vertex k inside triangle (O, v_k, v_{k+1})
        angle_sum += _triangle_angle(radii[k], sides[k], radii[(k + 1) % n])
        # angle at vertex k inside triangle (O, v_{k-1}, v_k)
        angle_sum += _triangle_angle(radii[k], sides[(k - 1) % n], radii[(k - 1) % n])
    return (n - 2) * math.pi - angle_sum


def radius_for_area(g: int, area: float, tol: float = 1e-12) -> float:
    """Circumradius giving the requested polygon area, by monotone bisection."""
    if g < 1:
        raise ValueError("genus must be >= 1")
    amax = (4 * g - 2) * math.pi
    if not (0.0 < area < amax):
        raise AreaOutOfRange(f"area must lie strictly between 0 and {amax}")
    lo, hi = 1e-9, 1.0
    while polygon_area(build_symmetric_polygon(g, hi)) < area:
        hi *= 2.0
        if hi > 64.0:
            raise ArithmeticError("bisection bracket blew up")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if polygon_area(build_symmetric_polygon(g, mid)) < area:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def _translate_to_origin(p: complex):
    """Disk coefficients of the isometry sending p to 0."""
    s = math.sqrt(1.0 - abs(p) ** 2)
    return (1.0 / s, -p / s)


def _su_compose(m1, m2):
    a1, b1 = m1
    a2, b2 = m2
    return (a1 * a2 + b1 * b2.conjugate(), a1 * b2 + b1 * a2.conjugate())


def _su_inverse(m):
    a, b = m
    return (a.conjugate(), -b)


def isometry_from_segments(a: HPoint, b: HPoint, a2: HPoint, b2: HPoint) -> Isometry2H:
    """The orientation-preserving isometry with a -> a2, b -> b2.

    Exists and is unique when the oriented segments have the same length;
    raises LengthMismatch (tolerance 1e-9) otherwise.
    """
    d1 = hdistance(a, b)
    d2 = hdistance(a2, b2)
    if abs(d1 - d2) > 1e-9:
        raise LengthMismatch(f"segment lengths differ: {d1} vs {d2}")
    ta = _translate_to_origin(a.as_complex())
    ta2 = _translate_to_origin(a2.as_complex())
    wb = (ta[0] * b.as_complex() + ta[1]) / (ta[1].conjugate() * b.as_complex() + ta[0].conjugate())
    wb2 = (ta2[0] * b2.as_complex() + ta2[1]) / (ta2[1].conjugate() * b2.as_complex() + ta2[0].conjugate())
    if abs(wb) < 1e-15 and abs(wb2) < 1e-15:
        phi = 0.0
    else:
        phi = cmath.phase(wb2) - cmath.phase(wb)
    rot = (cmath.exp(0.5j * phi), 0.0 + 0.0j)
    m = _su_compose(_su_inverse(ta2), _su_compose(rot, ta))
    return Isometry2H.from_disk_coefficients(*m)


def side_pairings(poly: SymmetricPolygon) -> List[Isometry2H]:
    """The 2g side-pairing isometries of the symmetric polygon.

    phi_{2i-1} carries the oriented edge (s_{4i-1}, s_{4i}) to
    (s_{4i-2}, s_{4i-3}); phi_{2i} carries (s_{4i-2}, s_{4i-1}) to
    (s_{4i+1}, s_{4i}).  Every edge of the polygon belongs to exactly one
    pairing, and the commutator product fixes s_1.
    """
    g = poly.genus
    out: List[Isometry2H] = []
    for i in range(1, g + 1):
        phi_odd = isometry_from_segments(
            poly.vertex(4 * i - 1), poly.vertex(4 * i),
            poly.vertex(4 * i - 2), poly.vertex(4 * i - 3))
        phi_even = isometry_from_segments(
            poly.vertex(4 * i - 2), poly.vertex(4 * i - 1),
            poly.vertex(4 * i + 1), poly.vertex(4 * i))
        out += [phi_odd, phi_even]
    return out


def commutator_product(pairings: Sequence[Isometry2H]) -> Isometry2H:
    """prod_{i=1..g} [phi_{2i-1}, phi_{2i}], composed left to right.

    For polygon side pairings this is the rotation about s_1 by the polygon's
    total interior angle, hence elliptic with
    |trace| = 2*|cos(((4g-2)*pi - area)/2)|.
    """
    if len(pairings) < 2 or len(pairings) % 2:
        raise ValueError("need an even number (>= 2) of isometries")
    prod = Isometry2H.identity()
    for i in range(0, len(pairings), 2):
        a, b = pairings[i], pairings[i + 1]
        comm = a @ b @ a.inverse() @ b.inverse()
        prod = prod @ comm
    return prod


def boundary_lift(iso: Isometry2H) -> cd.MoebiusBoundaryLift:
    """Canonical lift (value at 0 in [0, 1)) of the boundary circle action."""
    return cd.MoebiusBoundaryLift(iso, 0)


def holonomy_translation_number(g: int, area: float, iterations: int) -> cd.TranslationNumberEstimate:
    """Translation number of the lifted commutator product for the area-`area` polygon.

    The canonical lift is taken for every generator; the relator's value does
    not depend on that choice because each generator occurs with both
    exponents and integer translations are central.  |value| approximates
    area/(2*pi) within the estimate's error bound.
    """
    radius = radius_for_area(g, area)
    poly = build_symmetric_polygon(g, radius)
    lifts = [boundary_lift(p) for p in side_pairings(poly)]
    rel = cd.evaluate_relator(lifts)
    return cd.translation_number(rel, iterations)
