"""Quaternion algebras (alpha, beta) over Q(x, y, z): evaluation at points of a
degree-2 K3 surface, local invariants via Hilbert symbols, and the test for
an obstruction to weak approximation.

Places are primes (int) or the string "inf". Invariants live in (1/2)Z/Z and
are returned as Fraction(0) or Fraction(1, 2).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .ff import prime_factors
from .geometry import K3Surface
from .mpoly import QQ, MultiPoly, PolyError, RationalFunction, parse_rational_function

INF = "inf"
HALF = Fraction(1, 2)
ZERO = Fraction(0)

XYZ = ("x", "y", "z")


class RepresentativeUndefined(ValueError):
    """alpha or beta has a zero or pole at the point."""


class ReciprocityFailure(AssertionError):
    pass


# -- Hilbert symbols ----------------------------------------------------------

def _square_class_integer(a) -> int:
    """An integer in the same square class as the nonzero rational a."""
    a = Fraction(a)
    if a == 0:
        raise ValueError("Hilbert symbol of zero")
    return a.numerator * a.denominator


def _split(a: int, p: int) -> tuple[int, int]:
    k = 0
    while a % p == 0:
        a //= p
        k += 1
    return k, a


def _legendre(u: int, p: int) -> int:
    r = pow(u % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def hilbert_symbol(a, b, place) -> Fraction:
    """Local invariant of the quaternion algebra (a, b) over Q_place."""
    a, b = _square_class_integer(a), _square_class_integer(b)
    if place == INF:
        return HALF if a < 0 and b < 0 else ZERO
    p = int(place)
    al, u = _split(a, p)
    be, v = _split(b, p)
    if p == 2:
        eps = lambda t: ((t - 1) // 2) % 2  # noqa: E731
        omega = lambda t: ((t * t - 1) // 8) % 2  # noqa: E731
        e = (eps(u) * eps(v) + al * omega(v) + be * omega(u)) % 2
        return HALF if e else ZERO
    s = 1
    if (al * be) % 2 and (p - 1) // 2 % 2:
        s = -s
    if be % 2:
        s *= _legendre(u, p)
    if al % 2:
        s *= _legendre(v, p)
    return HALF if s == -1 else ZERO


def relevant_places(a, b) -> list:
    """Places where (a, b) can be ramified: 2, odd primes dividing a or b, and infinity."""
    ps = {2}
    for t in (Fraction(a), Fraction(b)):
        for n in (t.numerator, t.denominator):
            ps.update(prime_factors(abs(n)))
    return sorted(ps) + [INF]


# -- algebras and points ------------------------------------------------------

@dataclass(frozen=True)
class QuaternionAlgebra:
    alpha: RationalFunction
    beta: RationalFunction

    def __post_init__(self):
        for f in (self.alpha, self.beta):
            if f.num.is_zero():
                raise PolyError("quaternion algebra entries must be nonzero")

    def to_json(self) -> dict:
        return {"alpha": self.alpha.to_str(), "beta": self.beta.to_str()}

    @classmethod
    def from_json(cls, obj) -> QuaternionAlgebra:
        return cls(parse_rational_function(obj["alpha"], XYZ), parse_rational_function(obj["beta"], XYZ))

    @classmethod
    def constant(cls, a, b) -> QuaternionAlgebra:
        one = MultiPoly.gens(QQ, XYZ)[0].one()
        return cls(RationalFunction(one.scale(Fraction(a))), RationalFunction(one.scale(Fraction(b))))


@dataclass(frozen=True)
class SurfacePoint:
    """A point (x : y : z : w) of w^2 = F(x, y, z).

    ``place`` is "rational" (w is an exact rational, used at every place) or
    "real" (only w^2 = F >= 0 is recorded, the point lives over R).
    """

    xyz: tuple[Fraction, Fraction, Fraction]
    w_squared: Fraction
    w: Fraction | None
    place: str

    def __post_init__(self):
        if self.place not in ("rational", "real"):
            raise ValueError("place must be 'rational' or 'real'")
        if self.place == "rational" and (self.w is None or self.w * self.w != self.w_squared):
            raise ValueError("a rational point needs w with w^2 = F")
        if self.w_squared < 0:
            raise ValueError("F < 0: no real point above (x, y, z)")

    @classmethod
    def rational(cls, s: K3Surface, x, y, z) -> SurfacePoint:
        F = _branch_value(s, (x, y, z))
        w = _rational_sqrt(F)
        if w is None:
            raise ValueError(f"F({x}, {y}, {z}) = {F} is not a rational square")
        return cls(tuple(Fraction(v) for v in (x, y, z)), F, w, "rational")

    @classmethod
    def real(cls, s: K3Surface, x, y, z) -> SurfacePoint:
        return cls(tuple(Fraction(v) for v in (x, y, z)), _branch_value(s, (x, y, z)), None, "real")

    def on_surface(self, s: K3Surface) -> bool:
        F = _branch_value(s, self.xyz)
        if F != self.w_squared:
            return False
        return self.w is None or self.w * self.w == F

    def to_json(self) -> dict:
        out = {"place": self.place, "xyz": [str(v) for v in self.xyz], "w_squared": str(self.w_squared)}
        if self.w is not None:
            out["w"] = str(self.w)
        return out

    @classmethod
    def from_json(cls, obj) -> SurfacePoint:
        w = Fraction(obj["w"]) if "w" in obj else None
        return cls(tuple(Fraction(v) for v in obj["xyz"]), Fraction(obj["w_squared"]), w, obj["place"])


def _branch_value(s: K3Surface, xyz) -> Fraction:
    if not s.alpha.is_zero():
        raise PolyError("expected a surface w^2 = F")
    return Fraction(s.branch_sextic()(*[Fraction(v) for v in xyz]))


def _rational_sqrt(q: Fraction):
    q = Fraction(q)
    if q < 0:
        return None
    a, b = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def evaluate_algebra(A: QuaternionAlgebra, P: SurfacePoint) -> tuple[Fraction, Fraction]:
    try:
        a = Fraction(A.alpha(*P.xyz))
        b = Fraction(A.beta(*P.xyz))
    except ZeroDivisionError as exc:
        raise RepresentativeUndefined(f"a denominator vanishes at {P.xyz}") from exc
    if a == 0 or b == 0:
        raise RepresentativeUndefined(f"a numerator vanishes at {P.xyz}")
    return a, b


def local_invariant(A: QuaternionAlgebra, P: SurfacePoint, place=None) -> Fraction:
    """inv_v A(P); a real point is evaluated at infinity, a rational one at ``place``."""
    if P.place == "real":
        if place not in (None, INF):
            raise ValueError("a real point only has the infinite place")
        place = INF
    elif place is None:
        raise ValueError("a rational point needs an explicit place")
    a, b = evaluate_algebra(A, P)
    return hilbert_symbol(a, b, place)


# -- search -------------------------------------------------------------------

def _canonical_triples(H: int):
    r = np.arange(-H, H + 1, dtype=np.int64)
    X, Y, Z = np.meshgrid(r, r, r, indexing="ij")
    X, Y, Z = X.ravel(), Y.ravel(), Z.ravel()
    first = np.where(X != 0, X, np.where(Y != 0, Y, Z))
    keep = first > 0
    g = np.gcd(np.gcd(X, Y), Z)
    keep &= g == 1
    return X[keep], Y[keep], Z[keep]


def _eval_int64(F: MultiPoly, X, Y, Z):
    out = np.zeros_like(X)
    for (a, b, c), coef in F.terms.items():
        out += int(coef) * X**a * Y**b * Z**c
    return out


def search_rational_points(s: K3Surface, H: int) -> list[SurfacePoint]:
    """Points with coprime integers (x, y, z), max |x|, |y|, |z| <= H, first nonzero
    coordinate positive and F(x, y, z) a square; w >= 0 (the point with -w is
    the other preimage). Sorted by (x, y, z)."""
    if H < 1:
        return []
    F = s.branch_sextic()
    for c in F.terms.values():
        if Fraction(c).denominator != 1:
            raise PolyError("expected integer coefficients")
    bound = sum(abs(int(c)) for c in F.terms.values()) * H**6
    X, Y, Z = _canonical_triples(H)
    if bound < 2**62:
        vals = _eval_int64(F, X, Y, Z)
        nonneg = vals >= 0
        r = np.floor(np.sqrt(np.where(nonneg, vals, 0).astype(np.float64))).astype(np.int64)
        hit = np.zeros_like(nonneg)
        for d in (-1, 0, 1):
            rr = r + d
            hit |= nonneg & (rr >= 0) & (rr * rr == vals)
        cand = np.nonzero(hit)[0]
    else:  # pragma: no cover - large heights
        cand = range(len(X))
    out = []
    for i in cand:
        x, y, z = int(X[i]), int(Y[i]), int(Z[i])
        v = F(x, y, z)
        v = int(v)
        if v >= 0 and math.isqrt(v) ** 2 == v:
            out.append(SurfacePoint((Fraction(x), Fraction(y), Fraction(z)), Fraction(v),
                                    Fraction(math.isqrt(v)), "rational"))
    out.sort(key=lambda P: P.xyz)
    return out


def usable_points(A: QuaternionAlgebra, points):
    """Split points into those where (alpha, beta) is defined and nonzero, and a count
    of the rest."""
    good, excluded = [], 0
    for P in points:
        try:
            evaluate_algebra(A, P)
        except RepresentativeUndefined:
            excluded += 1
            continue
        good.append(P)
    return good, excluded


def find_real_point(s: K3Surface, A: QuaternionAlgebra, target: Fraction, H: int = 8):
    """First integer (x, y, z) by height, then lexicographically, with F >= 0, the
    representative defined, and inv_inf equal to ``target``."""
    F = s.branch_sextic()
    for h in range(1, H + 1):
        for xyz in itertools.product(range(-h, h + 1), repeat=3):
            if max(abs(v) for v in xyz) != h or next(v for v in xyz if v) < 0:
                continue
            if math.gcd(*xyz) != 1:
                continue
            if Fraction(F(*xyz)) < 0:
                continue
            P = SurfacePoint.real(s, *xyz)
            try:
                if local_invariant(A, P) == target:
                    return P
            except RepresentativeUndefined:
                continue
    return None


# -- verdict ------------------------------------------------------------------

def invariants_at_all_places(A: QuaternionAlgebra, P: SurfacePoint) -> dict:
    a, b = evaluate_algebra(A, P)
    return {str(v): hilbert_symbol(a, b, v) for v in relevant_places(a, b)}


def obstruction_verdict(A: QuaternionAlgebra, rational_point: SurfacePoint, real_point: SurfacePoint) -> dict:
    """Compare the rational point with the adelic point that agrees with it at
    every finite place and equals ``real_point`` at infinity."""
    if rational_point.place != "rational":
        raise ValueError("the first point must be rational")
    inv = invariants_at_all_places(A, rational_point)
    total = sum(inv.values(), ZERO) % 1
    if total != 0:
        raise ReciprocityFailure(f"invariants of a rational point sum to {total}")
    finite = sum((v for k, v in inv.items() if k != INF), ZERO)
    real_inv = local_invariant(A, real_point)
    hybrid = (finite + real_inv) % 1
    return {
        "algebra": A.to_json(),
        "rational_point": rational_point.to_json(),
        "real_point": real_point.to_json(),
        "invariants": {k: str(v) for k, v in inv.items()},
        "real_point_invariant": str(real_inv),
        "rational_sum": str(total),
        "hybrid_sum": str(hybrid),
        "verdict": "OBSTRUCTED" if hybrid == HALF else "NOT OBSTRUCTED",
    }
