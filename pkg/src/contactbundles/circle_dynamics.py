"""Homeomorphisms of the real line commuting with unit translation.

These are the lifts of orientation-preserving circle homeomorphisms, the
carriers of every holonomy computation in this package.  Three concrete
representations are provided:

* `PiecewiseLinearMap` -- exact rational breakpoints, exact evaluation;
* `MoebiusBoundaryLift` -- the boundary action of a disk isometry, evaluated
  in binary64, with an integer `winding` selecting the lift;
* `WordMap` -- a formal composition of other maps (with exponents +-1),
  evaluated by nesting.

Conventions
-----------
* Only one period is stored; f(t + 1) = f(t) + 1 holds by construction.
* The circle coordinate is t with boundary point exp(2*pi*i*t); a Moebius map
  acting on the disk induces the boundary map through its continuous argument.
  The canonical lift is the representative with f(0) in [0, 1).
* Commutators are [a, b] = a o b o a^-1 o b^-1, and relator products
  prod_i [f_{2i-1}, f_{2i}] are composed left to right.
* Suprema over t are taken on [0, 1]; equivariance makes this sufficient.
"""

from __future__ import annotations

import cmath
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

TWO_PI = 2.0 * math.pi

Scalar = Union[int, float, Fraction]


class NonConstantDifference(ValueError):
    """The two lifts do not differ by a constant, so they do not lift the same circle map."""


class NonIntegerDifference(ValueError):
    """The constant difference of the two lifts is not an integer."""


class LiftedCircleMap:
    """Base class; subclasses implement `eval` and `inverse`."""

    kind: str = "abstract"

    def eval(self, t: Scalar) -> Scalar:
        raise NotImplementedError

    def inverse(self) -> "LiftedCircleMap":
        raise NotImplementedError

    def __call__(self, t: Scalar) -> Scalar:
        return self.eval(t)

    def letters(self) -> tuple:
        """The map viewed as a one-letter word."""
        return ((self, 1),)


class PiecewiseLinearMap(LiftedCircleMap):
    """Piecewise-linear lift with exact rational breakpoints.

    `breakpoints` is a sequence of (t, value) pairs with t in [0, 1); the map
    interpolates linearly between consecutive breakpoints and wraps the last
    segment to (t_0 + 1, v_0 + 1).  Strict monotonicity on [0, 1] is checked
    on construction.
    """

    kind = "pl"

    def __init__(self, breakpoints: Iterable[tuple]):
        knots = sorted((Fraction(t), Fraction(v)) for t, v in breakpoints)
        if not knots:
            raise ValueError("piecewise-linear map needs at least one breakpoint")
        ts = [t for t, _ in knots]
        vs = [v for _, v in knots]
        if any(t < 0 or t >= 1 for t in ts):
            raise ValueError("breakpoint parameters must lie in [0, 1)")
        if len(set(ts)) != len(ts):
            raise ValueError("duplicate breakpoint parameters")
        for i in range(len(knots) - 1):
            if vs[i + 1] <= vs[i]:
                raise ValueError("breakpoint values must be strictly increasing")
        if vs[0] + 1 <= vs[-1]:
            raise ValueError("wraparound segment is not increasing")
        self.knots = tuple(knots)
        self._ts = ts
        self._float_knots = [(float(t), float(v)) for t, v in knots]

    @classmethod
    def translation(cls, c: Scalar) -> "PiecewiseLinearMap":
        return cls([(Fraction(0), Fraction(c))])

    @classmethod
    def identity(cls) -> "PiecewiseLinearMap":
        return cls.translation(0)

    def _segment(self, idx: int, exact: bool):
        """Endpoints of the linear segment starting at knot idx (wrapping)."""
        knots = self.knots if exact else self._float_knots
        k = len(knots)
        t0, v0 = knots[idx]
        if idx + 1 < k:
            t1, v1 = knots[idx + 1]
        else:
            t1, v1 = knots[0][0] + 1, knots[0][1] + 1
        return t0, v0, t1, v1

    def eval(self, t: Scalar) -> Scalar:
        exact = not isinstance(t, float)
        if exact:
            t = Fraction(t)
        n = math.floor(t)
        tau = t - n
        ts = self._ts
        knots = self.knots if exact else self._float_knots
        if tau < ts[0]:
            # inside the wrapped segment [t_last - 1, t_0]
            t0, v0 = knots[-1]
            t0, v0 = t0 - 1, v0 - 1
            t1, v1 = knots[0]
        else:
            idx = bisect_right(ts, tau) - 1
            t0, v0, t1, v1 = self._segment(idx, exact)
        v = v0 + (v1 - v0) * (tau - t0) / (t1 - t0)
        return v + n

    def inverse(self) -> "PiecewiseLinearMap":
        pts = []
        for t, v in self.knots:
            m = math.floor(v)
            pts.append((v - m, t - m))
        return PiecewiseLinearMap(pts)


class MoebiusBoundaryLift(LiftedCircleMap):
    """Lift of the boundary circle action of a disk isometry.

    `iso` is any object exposing `disk_coefficients() -> (alpha, beta)` for
    the disk action w -> (alpha*w + beta) / (conj(beta)*w + conj(alpha)) and
    an `inverse()`; see `hyperbolic.Isometry2H`.  `winding` shifts the
    canonical lift by an integer.

    Evaluation is pointwise exact up to float roundoff: the canonical lift
    restricted to [0, 1) takes values in [c0, c0 + 1) with c0 = f(0), so the
    value is c0 + ((principal - c0) mod 1).
    """

    kind = "moebius"

    def __init__(self, iso, winding: int = 0):
        self.iso = iso
        self.winding = int(winding)
        alpha, beta = iso.disk_coefficients()
        self._alpha = complex(alpha)
        self._beta = complex(beta)
        self._c0 = self._principal(1.0 + 0.0j)

    def _boundary_image(self, z: complex) -> complex:
        a, b = self._alpha, self._beta
        return (a * z + b) / (b.conjugate() * z + a.conjugate())

    def _principal(self, z: complex) -> float:
        w = self._boundary_image(z)
        return (math.atan2(w.imag, w.real) / TWO_PI) % 1.0

    def eval(self, t: Scalar) -> float:
        t = float(t)
        n = math.floor(t)
        tau = t - n
        p = self._principal(cmath.exp(2j * math.pi * tau))
        delta = (p - self._c0) % 1.0
        return self._c0 + delta + self.winding + n

    def inverse(self) -> "MoebiusBoundaryLift":
        inv0 = MoebiusBoundaryLift(self.iso.inverse(), 0)
        x = inv0.eval(self.eval(0.0))
        return MoebiusBoundaryLift(self.iso.inverse(), -int(round(x)))


class WordMap(LiftedCircleMap):
    """Formal composition word; letters[0] is applied last.

    Letters are (map, exponent) with exponent +-1.  Inverse letters are
    resolved to concrete inverse maps once, at construction.
    """

    kind = "word"

    def __init__(self, letters: Sequence[tuple]):
        flat = []
        for m, e in letters:
            if e not in (1, -1):
                raise ValueError("letter exponents must be +1 or -1")
            if isinstance(m, WordMap):
                sub = m._letters if e == 1 else tuple((mm, -ee) for mm, ee in reversed(m._letters))
                flat.extend(sub)
            else:
                flat.append((m, e))
        self._letters = tuple(flat)
        self._chain = tuple(m if e == 1 else m.inverse() for m, e in reversed(self._letters))

    def letters(self) -> tuple:
        return self._letters

    def eval(self, t: Scalar) -> Scalar:
        x = t
        for m in self._chain:
            x = m.eval(x)
        return x

    def inverse(self) -> "WordMap":
        return WordMap(tuple((m, -e) for m, e in reversed(self._letters)))


def compose(f: LiftedCircleMap, g: LiftedCircleMap) -> LiftedCircleMap:
    """The composition f o g; exact flattening for PL o PL, a word otherwise."""
    if isinstance(f, PiecewiseLinearMap) and isinstance(g, PiecewiseLinearMap):
        return _compose_pl(f, g)
    return WordMap(f.letters() + g.letters())


def invert(f: LiftedCircleMap) -> LiftedCircleMap:
    return f.inverse()


def _compose_pl(f: PiecewiseLinearMap, g: PiecewiseLinearMap) -> PiecewiseLinearMap:
    """Exact breakpoints of f o g: g's knots plus g-preimages of f's knots."""
    ginv = g.inverse()
    ts = {t for t, _ in g.knots}
    for s, _ in f.knots:
        x = ginv.eval(s)
        ts.add(x - math.floor(x))
    return PiecewiseLinearMap([(t, f.eval(g.eval(t))) for t in sorted(ts)])


def _as_piecewise_linear(f: LiftedCircleMap) -> Optional[PiecewiseLinearMap]:
    if isinstance(f, PiecewiseLinearMap):
        return f
    if isinstance(f, WordMap) and all(isinstance(m, PiecewiseLinearMap) for m, _ in f.letters()):
        acc = PiecewiseLinearMap.identity()
        for m, e in f.letters():
            acc = _compose_pl(acc, m if e == 1 else m.inverse())
        return acc
    return None


def _as_moebius(f: LiftedCircleMap) -> Optional[MoebiusBoundaryLift]:
    """Collapse an all-Moebius word to a single lift (pointwise identical).

    Two lifts of one circle map that agree at a point agree everywhere, so the
    composite equals the canonical lift of the matrix product shifted by the
    integer winding; the winding is cross-checked by `track_lift` in tests.
    """
    if isinstance(f, MoebiusBoundaryLift):
        return f
    if not (isinstance(f, WordMap) and f.letters()):
        return None
    if not all(isinstance(m, MoebiusBoundaryLift) for m, _ in f.letters()):
        return None
    iso = None
    for m, e in f.letters():
        step = m.iso if e == 1 else m.iso.inverse()
        iso = step if iso is None else iso.compose(step)
    canon = MoebiusBoundaryLift(iso, 0)
    w = f.eval(0.0) - canon.eval(0.0)
    k = int(round(w))
    if abs(w - k) > 1e-6:
        raise ArithmeticError(f"composite winding {w} is not close to an integer")
    return MoebiusBoundaryLift(iso, k)


def flatten(f: LiftedCircleMap) -> LiftedCircleMap:
    """Cheapest pointwise-equal representative (exact PL or single Moebius lift)."""
    pl = _as_piecewise_linear(f)
    if pl is not None:
        return pl
    mb = _as_moebius(f)
    if mb is not None:
        return mb
    return f


def track_lift(circle_map, lift_at_0: float, points: int = 1024, max_points: int = 1 << 16):
    """Continue a lift along [0, 1] by unwrapping the image argument.

    `circle_map(z)` maps the unit circle to itself.  The subdivision starts at
    `points` samples and doubles until successive principal arguments differ
    by less than 1/4 of a turn.  Returns the list of lift values at the
    subdivision points, starting from `lift_at_0`.
    """
    n = points
    while True:
        vals = [lift_at_0]
        ok = True
        prev = lift_at_0
        for k in range(1, n + 1):
            z = cmath.exp(2j * math.pi * (k / n))
            p = (cmath.phase(circle_map(z)) / TWO_PI) % 1.0
            step = (p - prev) % 1.0
            if step > 0.5:
                step -= 1.0
            if abs(step) >= 0.25:
                ok = False
                break
            prev = prev + step
            vals.append(prev)
        if ok:
            return vals
        if n >= max_points:
            raise ArithmeticError("argument tracking did not stabilise")
        n *= 2


def sup_displacement(f: LiftedCircleMap, grid: int = 4096) -> Scalar:
    """sup over one period of f(t) - t.

    Exact for (words of) piecewise-linear maps: the displacement is linear
    between breakpoints, so the sup is attained at a breakpoint.  Otherwise a
    scan of `grid` points with three local refinement rounds; the argmax is
    then located to about (1/grid) * 4**-3.
    """
    pl = _as_piecewise_linear(f)
    if pl is not None:
        return max(v - t for t, v in pl.knots)
    g = flatten(f)
    lo, hi = 0.0, 1.0
    best_t, best = 0.0, g.eval(0.0)
    n = grid
    for _ in range(4):
        step = (hi - lo) / n
        for k in range(n + 1):
            t = lo + k * step
            d = g.eval(t) - t
            if d > best:
                best, best_t = d, t
        lo, hi = best_t - step, best_t + step
        n = 64
    return best


def inf_displacement(f: LiftedCircleMap, grid: int = 4096) -> Scalar:
    """inf over one period of f(t) - t; equals -sup_displacement(f^-1)."""
    pl = _as_piecewise_linear(f)
    if pl is not None:
        return min(v - t for t, v in pl.knots)
    return -sup_displacement(invert(f), grid=grid)


@dataclass(frozen=True)
class TranslationNumberEstimate:
    """f^N(0)/N together with its a-priori error bound.

    Since t -> f^N(t) - t has width < 1 and the true translation number is
    its mean slope, |value - rho| <= 1/N up to evaluation slack.
    """

    value: Scalar
    error_bound: float
    iterations: int

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not math.isfinite(float(self.value)):
            raise ValueError("estimate is not finite")


#: evaluation slack charged per orbit for binary64 map representations
FLOAT_ORBIT_SLACK = 1e-9


def translation_number(f: LiftedCircleMap, iterations: int) -> TranslationNumberEstimate:
    """Estimate the translation number by value = f^N(0)/N, N = `iterations`.

    Exact-rational orbits (piecewise-linear data) carry no evaluation slack;
    Moebius orbits add FLOAT_ORBIT_SLACK to the bound.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    g = flatten(f)
    exact = isinstance(g, PiecewiseLinearMap)
    x: Scalar = Fraction(0) if exact else 0.0
    for _ in range(iterations):
        x = g.eval(x)
    if exact:
        value: Scalar = Fraction(x, iterations)
        slack = 0.0
    else:
        value = x / iterations
        slack = FLOAT_ORBIT_SLACK
    return TranslationNumberEstimate(value=value, error_bound=1.0 / iterations + slack, iterations=iterations)


def evaluate_relator(maps: Sequence[LiftedCircleMap]) -> WordMap:
    """The surface-group relator prod_{i=1..g} [f_{2i-1}, f_{2i}] as a word."""
    if len(maps) < 2 or len(maps) % 2:
        raise ValueError("need an even number (>= 2) of maps")
    letters = []
    for i in range(0, len(maps), 2):
        a, b = maps[i], maps[i + 1]
        letters += [(a, 1), (b, 1), (a, -1), (b, -1)]
    return WordMap(letters)


@dataclass(frozen=True)
class DisplacementCheck:
    ok: bool
    bound: float
    witness_t: Optional[float] = None
    witness_displacement: Optional[float] = None

    def __bool__(self) -> bool:
        return self.ok


def displacement_within(f: LiftedCircleMap, bound: Scalar, grid: int = 1024,
                        slack: float = 1e-9) -> DisplacementCheck:
    """Check |f(t) - t| <= bound on a grid (exactly, via breakpoints, for PL data)."""
    pl = _as_piecewise_linear(f)
    if pl is not None:
        sup = max(v - t for t, v in pl.knots)
        inf = min(v - t for t, v in pl.knots)
        if sup <= bound and -inf <= bound:
            return DisplacementCheck(True, float(bound))
        t, v = max(pl.knots, key=lambda kv: abs(kv[1] - kv[0]))
        return DisplacementCheck(False, float(bound), float(t), float(v - t))
    g = flatten(f)
    for k in range(grid):
        t = k / grid
        d = g.eval(t) - t
        if abs(d) > bound + slack:
            return DisplacementCheck(False, float(bound), t, d)
    return DisplacementCheck(True, float(bound))


def wood_bound_check(maps: Sequence[LiftedCircleMap], grid: int = 1024) -> DisplacementCheck:
    """Check the relator displacement bound |relator(t) - t| <= 2g on a grid.

    For constructed words that are not honest relators, call
    `displacement_within` directly with the synthetic map.
    """
    rel = evaluate_relator(maps)
    return displacement_within(rel, Fraction(len(maps)), grid=grid)


def euler_from_sections(fD: LiftedCircleMap, fK: LiftedCircleMap, grid: int = 256,
                        tol: float = 1e-9) -> int:
    """The constant integer fD(t) - fK(t), verified on `grid` points.

    Raises NonConstantDifference if the difference varies by more than `tol`,
    NonIntegerDifference if the constant is farther than `tol` from Z.
    """
    diffs = []
    for k in range(grid):
        t = k / grid
        diffs.append(float(fD.eval(t)) - float(fK.eval(t)))
    lo, hi = min(diffs), max(diffs)
    if hi - lo > tol:
        raise NonConstantDifference(f"difference varies over [{lo}, {hi}]")
    mean = math.fsum(diffs) / len(diffs)
    k = round(mean)
    if abs(mean - k) > tol:
        raise NonIntegerDifference(f"constant difference {mean} is not an integer")
    return int(k)


def translation(c: Scalar) -> PiecewiseLinearMap:
    """The lift t -> t + c."""
    return PiecewiseLinearMap.translation(c)


def identity() -> PiecewiseLinearMap:
    return PiecewiseLinearMap.identity()
