"""Existence, counting and bound formulas for contact structures on circle bundles.

Inputs are the Euler characteristic chi(S) of the closed orientable base (an
even integer <= 2) and the Euler number chi(V, S) of the bundle.  Everything
here is exact integer / rational arithmetic; the one nontrivial computation
is the brute-force orbit count of the symplectic action on H^1(S; Z/nZ),
which must reproduce the divisor count tau(n).

Enrollment values are rationals with denominator 1 or 2: the twisting of a
plane field along a Legendrian curve isotopic to the fiber is a half-integer
in general and an integer exactly when the field is orientable along fibers.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import FrozenSet, List, Optional, Sequence, Tuple


class PreconditionViolated(ValueError):
    """The requested quantity is undefined for these bundle parameters."""


class ScaleExceeded(ValueError):
    """Brute-force enumeration refused: parameters beyond desk scale."""


def _check_chi(chiS: int) -> None:
    if chiS % 2 or chiS > 2:
        raise ValueError("chi(S) must be an even integer <= 2 for a closed orientable base")


@dataclass(frozen=True)
class BundleData:
    """The pair (chi(S), chi(V, S)) of an oriented circle bundle over a closed surface."""

    chiS: int
    euler: int

    def __post_init__(self):
        _check_chi(self.chiS)

    @property
    def genus(self) -> int:
        return (2 - self.chiS) // 2


@dataclass(frozen=True)
class EnrollmentSpectrum:
    """Set of n > 0 such that a transverse structure of enrollment -n exists.

    `all_n` marks the torus case chi(S) = chi(V, S) = 0, where every n >= 1
    occurs; `values` is then ignored.
    """

    values: FrozenSet[int] = frozenset()
    all_n: bool = False

    def __contains__(self, n: int) -> bool:
        return n >= 1 if self.all_n else n in self.values

    def sorted_values(self) -> List[int]:
        return sorted(self.values)


@dataclass(frozen=True)
class TwistVector:
    """The 2g integers m_i attached to a fiber-tangent structure."""

    m: Tuple[int, ...]

    def __post_init__(self):
        if len(self.m) % 2:
            raise ValueError("twist vector must have even length 2g")


def validate_enrollment(e: Fraction) -> Fraction:
    e = Fraction(e)
    if e.denominator not in (1, 2):
        raise ValueError("enrollment values have denominator 1 or 2")
    return e


# ---------------------------------------------------------------------------
# existence gates

def transverse_exists(chiS: int, euler: int) -> bool:
    """Existence of a positive contact structure transverse to the fibers."""
    _check_chi(chiS)
    if chiS <= 0:
        return euler <= -chiS
    return euler < 0


def flat_exists(chiS: int, euler: int) -> bool:
    """Existence of a foliation transverse to the fibers: |chi(V,S)| <= sup{0, -chi(S)}."""
    _check_chi(chiS)
    return abs(euler) <= max(0, -chiS)


def confoliation_bound(chiS: int, euler: int) -> bool:
    """One-sided bound satisfied by positive confoliations: chi(V,S) <= sup{0, -chi(S)}."""
    _check_chi(chiS)
    return euler <= max(0, -chiS)


def surgery_monotone(chiS: int, e_source: int, e_target: int) -> bool:
    """Transverse existence transfers to any bundle with smaller Euler number."""
    _check_chi(chiS)
    return e_target <= e_source


# ---------------------------------------------------------------------------
# enrollment arithmetic

def tangent_exists(chiS: int, euler: int) -> Optional[int]:
    """Smallest d > 0 with d * euler = -2 * chiS, or None.

    This is the degree of the fibered covering of the unit tangent line
    bundle realising a fiber-tangent structure.
    """
    _check_chi(chiS)
    target = -2 * chiS
    if euler == 0:
        return 1 if target == 0 else None
    if target % euler:
        return None
    d = target // euler
    return d if d > 0 else None


def transverse_enrollment_spectrum(chiS: int, euler: int) -> EnrollmentSpectrum:
    """{1} union {n > 0 : n * euler = -chiS} for chi(S) <= 0.

    Raises PreconditionViolated when no transverse structure exists or the
    base is a sphere (see `sphere_enrollment`).
    """
    _check_chi(chiS)
    if chiS > 0:
        raise PreconditionViolated("sphere base: use sphere_enrollment")
    if not transverse_exists(chiS, euler):
        raise PreconditionViolated("no transverse contact structure exists")
    if chiS == 0 and euler == 0:
        return EnrollmentSpectrum(all_n=True)
    values = {1}
    if euler != 0 and (-chiS) % euler == 0:
        n = (-chiS) // euler
        if n > 0:
            values.add(n)
    return EnrollmentSpectrum(values=frozenset(values))


def sphere_enrollment(euler: int) -> Fraction:
    """Enrollment of the unique transverse structure over the sphere: -2 on S^3, -1 otherwise."""
    if euler >= 0:
        raise PreconditionViolated("sphere bundles carry transverse structures only for euler < 0")
    return Fraction(-2) if euler == -1 else Fraction(-1)


def legendrian_fibration_enrollment(d: int) -> Fraction:
    """Enrollment -d/2 of the pullback structure under a degree-d fibered covering."""
    if d < 1:
        raise ValueError("covering degree must be positive")
    return validate_enrollment(Fraction(-d, 2))


def enrollment_connect_sum(e0: Fraction, tb1: int) -> Fraction:
    """Enrollment after connect-summing with an unknotted Legendrian of invariant tb1."""
    return validate_enrollment(Fraction(e0) + tb1 + 1)


def lift_enrollment_over_sphere(e: Fraction, euler: int) -> Fraction:
    """Enrollment of the preimage curve in the universal cover: |euler| * e."""
    return validate_enrollment(abs(euler) * Fraction(e))


def tb_vs_enrollment_unit_euler(tb: int, sign: int) -> Fraction:
    """e(L) = tb(L) +- 1 when chi(V, S) = +-1 (L is then null-homologous)."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return Fraction(tb + sign)


def whitney_singular_class(e: Fraction, chiS: int) -> Tuple[int, int]:
    """Homology class (up to global sign) of the singular multicurve on the boundary torus.

    The class is +-2*(e, chiS); the first entry 2*e is an integer because
    enrollment has denominator at most 2.
    """
    _check_chi(chiS)
    e = validate_enrollment(e)
    first = 2 * e
    return (int(first), 2 * chiS)


def boundary_slope(n: int, euler: int, chiS: int) -> Tuple[Tuple[int, int], Fraction]:
    """Class (n, n*euler + chiS - 1) of the singular circles and its slope mu.

    mu = (n*euler + chiS - 1)/n; when n*euler = -chiS this is -1/n.
    """
    _check_chi(chiS)
    if n < 1:
        raise ValueError("n must be a positive integer")
    second = n * euler + chiS - 1
    return ((n, second), Fraction(second, n))


def tangent_isotopy_equal(a: TwistVector, b: TwistVector) -> bool:
    """Fiber-tangent structures are isotopic iff their twist vectors agree index-wise."""
    return a.m == b.m


# ---------------------------------------------------------------------------
# counting

def count_tangent_conjugacy_classes(n: int) -> int:
    """Number of divisors tau(n), by trial division."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    count = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            count += 1 if d * d == n else 2
        d += 1
    return count


def virtually_overtwisted_bound(chiS: int, euler: int) -> int:
    """Upper bound for the number of isotopy classes of virtually overtwisted structures."""
    _check_chi(chiS)
    base = max(0, -chiS - euler - 1)
    return base + (1 if euler > 0 else 0)


def morphism_image_divisor(vector: Sequence[int], n: int) -> int:
    """Divisor d of n classifying a morphism H_1(S) -> Z/nZ by its image.

    d = gcd of the entries and n; the image is the subgroup of order n/d.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    d = n
    for v in vector:
        d = gcd(d, v % n)
    return d if d else n


def _transvection_matrix(v: Tuple[int, ...], g: int, n: int) -> List[List[int]]:
    """Matrix of x -> x + <x, v> v over Z/n, with <a_i, b_i> = 1."""
    dim = 2 * g

    def pairing(x, y):
        s = 0
        for i in range(g):
            s += x[2 * i] * y[2 * i + 1] - x[2 * i + 1] * y[2 * i]
        return s % n

    cols = []
    for j in range(dim):
        e = tuple(1 if k == j else 0 for k in range(dim))
        coef = pairing(e, v)
        cols.append(tuple((e[k] + coef * v[k]) % n for k in range(dim)))
    # column-major to row-major
    return [[cols[j][i] for j in range(dim)] for i in range(dim)]


def _sp_generators(g: int, n: int) -> List[List[List[int]]]:
    """Generators of the symplectic action on (Z/n)^{2g}.

    Transvections along the 2g basis vectors generate each handle's SL(2);
    the chain transvections along b_i + a_{i+1} mix adjacent handles, and the
    cyclic handle permutation completes the standard mapping-class generators.
    """
    dim = 2 * g
    gens = []
    basis = []
    for j in range(dim):
        basis.append(tuple(1 if k == j else 0 for k in range(dim)))
    for v in basis:
        gens.append(_transvection_matrix(v, g, n))
    for i in range(g - 1):
        v = tuple((1 if k in (2 * i + 1, 2 * i + 2) else 0) for k in range(dim))
        gens.append(_transvection_matrix(v, g, n))
    if g > 1:
        perm = [[0] * dim for _ in range(dim)]
        for i in range(g):
            j = (i + 1) % g
            perm[2 * j][2 * i] = 1
            perm[2 * j + 1][2 * i + 1] = 1
        gens.append(perm)
    return gens


def cohomology_orbit_count(g: int, n: int) -> int:
    """Brute-force count of orbits of the symplectic action on (Z/n)^{2g}.

    Breadth-first closure over the generator matrices; desk scale only
    (g in {1, 2}, n <= 12).  The count must equal tau(n).
    """
    if g not in (1, 2):
        raise ScaleExceeded("orbit oracle implemented for g in {1, 2}")
    if not (1 <= n <= 12):
        raise ScaleExceeded("orbit oracle implemented for 1 <= n <= 12")
    if n == 1:
        return 1
    dim = 2 * g
    gens = _sp_generators(g, n)
    seen = set()
    orbits = 0
    for vec in itertools.product(range(n), repeat=dim):
        if vec in seen:
            continue
        orbits += 1
        frontier = [vec]
        seen.add(vec)
        while frontier:
            x = frontier.pop()
            for m in gens:
                y = tuple(sum(m[i][k] * x[k] for k in range(dim)) % n for i in range(dim))
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
    return orbits


def orbit_of_vector(vector: Sequence[int], n: int) -> FrozenSet[Tuple[int, ...]]:
    """The symplectic orbit of a single vector in (Z/n)^{2g} (desk scale)."""
    dim = len(vector)
    if dim % 2:
        raise ValueError("vector length must be even")
    g = dim // 2
    if g not in (1, 2) or not (1 <= n <= 12):
        raise ScaleExceeded("orbit oracle implemented for g in {1, 2}, n <= 12")
    gens = _sp_generators(g, n)
    start = tuple(v % n for v in vector)
    seen = {start}
    frontier = [start]
    while frontier:
        x = frontier.pop()
        for m in gens:
            y = tuple(sum(m[i][k] * x[k] for k in range(dim)) % n for i in range(dim))
            if y not in seen:
                seen.add(y)
                frontier.append(y)
    return frozenset(seen)
