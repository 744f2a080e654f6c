"""Cubic fourfolds containing the plane {Y1 = Y2 = Y3 = 0}, the associated
degree-2 K3 surfaces w^2 + alpha w + beta = 0 in P(1,1,1,3), and the fiber conic.

The fourfold is
    sum_{i<=j} L_ij X_i X_j + sum_i Q_i4 X_i + C_44 = 0
with L, Q, C forms in (Y1, Y2, Y3) of degrees 1, 2, 3. On the K3 side the
same forms are read as forms in (x, y, z).
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .ff import ext_field_create
from .groebner import IdealBasis, projective_empty
from .mpoly import (QQ, ZZ, MultiPoly, PolyError, RationalFunction, parse_poly, partial_derivative,
                    poly_det, substitute)

XYZ = ("x", "y", "z")
XYZW = ("x", "y", "z", "w")
FOURFOLD_VARS = ("X1", "X2", "X3", "Y1", "Y2", "Y3")
FORM_NAMES = ("L11", "L12", "L13", "L22", "L23", "L33", "Q14", "Q24", "Q34", "C44")
FORM_DEGREES = dict(zip(FORM_NAMES, (1,) * 6 + (2,) * 3 + (3,)))
# (i, j) index pairs of X_i X_j for the L forms, 0-based
L_INDEX = {"L11": (0, 0), "L12": (0, 1), "L13": (0, 2), "L22": (1, 1), "L23": (1, 2), "L33": (2, 2)}
Q_INDEX = {"Q14": 0, "Q24": 1, "Q34": 2}


def ring_for_modulus(m: int):
    if m == 0:
        return ZZ
    return ext_field_create(m, 1)


def modulus_of(ring) -> int:
    if ring is ZZ or ring is QQ:
        return 0
    if ring.n != 1:
        raise PolyError("quadric bundle data lives over ZZ or a prime field")
    return ring.p


@dataclass(frozen=True)
class QuadricBundleData:
    L11: MultiPoly
    L12: MultiPoly
    L13: MultiPoly
    L22: MultiPoly
    L23: MultiPoly
    L33: MultiPoly
    Q14: MultiPoly
    Q24: MultiPoly
    Q34: MultiPoly
    C44: MultiPoly

    def __post_init__(self):
        ring = self.L11.ring
        for name in FORM_NAMES:
            f = getattr(self, name)
            if f.nvars != 3:
                raise PolyError(f"{name} must be a form in three variables")
            if f.ring is not ring and f.ring != ring:
                raise PolyError(f"{name} has a different coefficient ring")
            if not f.is_zero() and (not f.is_homogeneous() or f.degree() != FORM_DEGREES[name]):
                raise PolyError(f"{name} must be homogeneous of degree {FORM_DEGREES[name]}")

    @property
    def ring(self):
        return self.L11.ring

    @property
    def modulus(self) -> int:
        return modulus_of(self.ring)

    def forms(self) -> dict[str, MultiPoly]:
        return {name: getattr(self, name) for name in FORM_NAMES}

    def map(self, fn) -> QuadricBundleData:
        return QuadricBundleData(**{k: fn(v) for k, v in self.forms().items()})

    def reduce(self, p: int) -> QuadricBundleData:
        ring = ext_field_create(p, 1)
        return self.map(lambda f: f.change_ring(ring))

    def __eq__(self, other):
        if not isinstance(other, QuadricBundleData):
            return NotImplemented
        return all(getattr(self, n) == getattr(other, n) for n in FORM_NAMES)

    def to_json(self) -> dict:
        out = {name: getattr(self, name).to_str() for name in FORM_NAMES}
        out["modulus"] = self.modulus
        return out

    @classmethod
    def from_json(cls, obj: dict) -> QuadricBundleData:
        ring = ring_for_modulus(int(obj["modulus"]))
        return cls(**{name: parse_poly(obj[name], ring, XYZ) for name in FORM_NAMES})

    @classmethod
    def from_strings(cls, modulus: int, **forms) -> QuadricBundleData:
        ring = ring_for_modulus(modulus)
        return cls(**{name: parse_poly(forms.get(name, "0"), ring, XYZ) for name in FORM_NAMES})


@dataclass(frozen=True)
class K3Surface:
    """w^2 + alpha(x,y,z) w + beta(x,y,z) = 0 in P(1,1,1,3)."""

    alpha: MultiPoly
    beta: MultiPoly

    def __post_init__(self):
        if not self.alpha.is_zero() and (self.alpha.degree() != 3 or not self.alpha.is_homogeneous()):
            raise PolyError("alpha must be a cubic form")
        if not self.beta.is_zero() and (self.beta.degree() != 6 or not self.beta.is_homogeneous()):
            raise PolyError("beta must be a sextic form")
        if self.ring.characteristic != 2 and not self.alpha.is_zero():
            raise PolyError("outside characteristic 2 the square is completed: alpha must be 0")

    @property
    def ring(self):
        return self.beta.ring if not self.beta.is_zero() else self.alpha.ring

    @property
    def characteristic(self) -> int:
        return self.ring.characteristic

    def branch_sextic(self) -> MultiPoly:
        """F with the surface written as w^2 = F (odd or zero characteristic)."""
        if self.characteristic == 2:
            raise PolyError("no branch sextic in characteristic 2")
        return -self.beta

    def equation(self) -> MultiPoly:
        ring = self.ring
        x, y, z, w = MultiPoly.gens(ring, XYZW, (1, 1, 1, 3))
        a = substitute(self.alpha, (x, y, z))
        b = substitute(self.beta, (x, y, z))
        return w * w + a * w + b

    def reduce(self, p: int) -> K3Surface:
        ring = ext_field_create(p, 1)
        a = self.alpha.change_ring(ring)
        b = self.beta.change_ring(ring)
        if p != 2 and not a.is_zero():  # pragma: no cover - alpha is 0 off char 2
            raise PolyError("cannot reduce a surface with alpha != 0")
        return K3Surface(a, b)

    def to_json(self) -> dict:
        return {"alpha": self.alpha.to_str(), "beta": self.beta.to_str(),
                "modulus": modulus_of(self.ring) if self.ring is not QQ else 0}

    @classmethod
    def from_json(cls, obj: dict) -> K3Surface:
        ring = ring_for_modulus(int(obj["modulus"]))
        return cls(parse_poly(obj["alpha"], ring, XYZ), parse_poly(obj["beta"], ring, XYZ))

    @classmethod
    def double_cover(cls, sextic: MultiPoly) -> K3Surface:
        """The surface w^2 = sextic."""
        return cls(sextic.zero(), -sextic)

    def canonical(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


# -- fourfold ---------------------------------------------------------------

def _in_Y(f: MultiPoly) -> MultiPoly:
    gens = MultiPoly.gens(f.ring, FOURFOLD_VARS)
    return substitute(f, gens[3:])


def fourfold_equation(d: QuadricBundleData) -> MultiPoly:
    X = MultiPoly.gens(d.ring, FOURFOLD_VARS)[:3]
    F = _in_Y(d.C44)
    for name, (i, j) in L_INDEX.items():
        F = F + _in_Y(getattr(d, name)) * X[i] * X[j]
    for name, i in Q_INDEX.items():
        F = F + _in_Y(getattr(d, name)) * X[i]
    return F


def bundle_from_fourfold(F: MultiPoly) -> QuadricBundleData:
    """Split a cubic in (X1, X2, X3, Y1, Y2, Y3) vanishing on {Y = 0} into its forms."""
    if F.nvars != 6 or not F.is_homogeneous() or F.degree() != 3:
        raise PolyError("expected a cubic form in six variables")
    parts = {name: {} for name in FORM_NAMES}
    lookup = {}
    for name, (i, j) in L_INDEX.items():
        e = [0, 0, 0]
        e[i] += 1
        e[j] += 1
        lookup[tuple(e)] = name
    for name, i in Q_INDEX.items():
        e = [0, 0, 0]
        e[i] = 1
        lookup[tuple(e)] = name
    lookup[(0, 0, 0)] = "C44"
    for e, c in F.terms.items():
        name = lookup.get(e[:3])
        if name is None:
            raise PolyError("the cubic does not contain the plane {Y1 = Y2 = Y3 = 0}")
        parts[name][e[3:]] = c
    return QuadricBundleData(**{k: MultiPoly(F.ring, 3, v, XYZ) for k, v in parts.items()})


def _jacobian_empty(F: MultiPoly, weights=None, extra=()) -> bool:
    gens = [F] + [partial_derivative(F, i) for i in range(F.nvars)] + list(extra)
    return projective_empty(IdealBasis.of(gens, weights))


def _has_rational_singular_point(polys, nvars: int, ring, weights=None) -> bool:
    # cheap rejection before the Groebner run; projective points over F_p
    field = ring
    elems = list(field.elements())
    one, zero = field.one, field.zero
    for lead in range(nvars):
        for tail in itertools.product(elems, repeat=nvars - lead - 1):
            pt = [zero] * lead + [one] + list(tail)
            if all(poly_eval_fast(f, pt) == 0 for f in polys):
                return True
    return False


def poly_eval_fast(f: MultiPoly, pt):
    acc = None
    for e, c in f.terms.items():
        v = c
        for xi, k in zip(pt, e):
            if k:
                v = v * xi**k
        acc = v if acc is None else acc + v
    return 0 if acc is None else acc


def fourfold_smooth(d: QuadricBundleData) -> bool:
    if d.modulus == 0:
        raise PolyError("smoothness is checked over a finite field")
    F = fourfold_equation(d)
    jac = [F] + [partial_derivative(F, i) for i in range(6)]
    if _has_rational_singular_point(jac, 6, F.ring):
        return False
    return _jacobian_empty(F)


def gram_matrix(d: QuadricBundleData):
    if d.ring.characteristic == 2:
        raise PolyError("the symmetric matrix representation needs characteristic != 2")
    L = d.forms()
    two = lambda f: f.scale(2)  # noqa: E731
    return [
        [two(L["L11"]), L["L12"], L["L13"], L["Q14"]],
        [L["L12"], two(L["L22"]), L["L23"], L["Q24"]],
        [L["L13"], L["L23"], two(L["L33"]), L["Q34"]],
        [L["Q14"], L["Q24"], L["Q34"], two(L["C44"])],
    ]


def discriminant_sextic(d: QuadricBundleData) -> MultiPoly:
    return poly_det(gram_matrix(d))


def char2_forms(d: QuadricBundleData) -> tuple[MultiPoly, MultiPoly]:
    """The cubic L and sextic M with w^2 + L w + M = 0 in characteristic 2.

    Over ZZ these satisfy det(gram) = L^2 + 4M + 16N for an integral sextic N.
    """
    L11, L12, L13, L22, L23, L33, Q14, Q24, Q34, C44 = (getattr(d, n) for n in FORM_NAMES)
    L = L12 * Q34 + L13 * Q24 + L23 * Q14
    M = (-(L12 * L23 * Q34 * Q14 + L13 * L23 * Q24 * Q14 + L12 * Q24 * L13 * Q34)
         + (L11 * L23 * Q24 * Q34 + L22 * L13 * Q34 * Q14 + L33 * L12 * Q24 * Q14
            + C44 * L12 * L23 * L13)
         - (L11 * L22 * Q34 * Q34 + L11 * L33 * Q24 * Q24 + L11 * C44 * L23 * L23
            + L22 * L33 * Q14 * Q14 + L22 * C44 * L13 * L13 + L33 * C44 * L12 * L12))
    return L, M


def k3_from_fourfold(d: QuadricBundleData) -> K3Surface:
    if d.ring.characteristic == 2:
        L, M = char2_forms(d)
        return K3Surface(L, M)
    F = discriminant_sextic(d)
    return K3Surface(F.zero(), -F)


def k3_singularity_reason(s: K3Surface) -> str | None:
    """None when smooth, otherwise a short diagnostic."""
    ring = s.ring
    if modulus_of(ring) == 0:
        raise PolyError("smoothness is checked over a finite field")
    if ring.characteristic == 2:
        if s.alpha.is_zero():
            return "alpha = 0 in characteristic 2: inseparable double cover, singular"
        G = s.equation()
        x, y, z, w = MultiPoly.gens(ring, XYZW, (1, 1, 1, 3))
        a = substitute(s.alpha, (x, y, z))
        gens = [G] + [partial_derivative(G, i) for i in range(3)] + [a]
        if _has_rational_singular_point(gens, 4, ring):
            return "singular point over the prime field"
        if not projective_empty(IdealBasis.of(gens, (1, 1, 1, 3))):
            return "singular point over the algebraic closure"
        return None
    F = s.branch_sextic()
    if F.is_zero():
        return "branch sextic is zero"
    jac = [F] + [partial_derivative(F, i) for i in range(3)]
    if _has_rational_singular_point(jac, 3, ring):
        return "branch sextic has a singular point over the prime field"
    if not _jacobian_empty(F):
        return "branch sextic is singular"
    return None


def k3_smooth(s: K3Surface) -> bool:
    return k3_singularity_reason(s) is None


# -- fiber conic and completion of squares ----------------------------------

@dataclass(frozen=True)
class FiberConic:
    """L11 p14^2 + L12 p14 p24 + L13 p14 p34 + L22 p24^2 + L23 p24 p34 + L33 p34^2."""

    a11: MultiPoly
    a12: MultiPoly
    a13: MultiPoly
    a22: MultiPoly
    a23: MultiPoly
    a33: MultiPoly

    def coefficient(self, i: int, j: int) -> MultiPoly:
        i, j = min(i, j), max(i, j)
        return getattr(self, f"a{i + 1}{j + 1}")

    def form(self) -> MultiPoly:
        names = XYZ + ("p14", "p24", "p34")
        gens = MultiPoly.gens(self.a11.ring, names)
        P = gens[3:]
        out = gens[0].zero()
        for i in range(3):
            for j in range(i, 3):
                out = out + substitute(self.coefficient(i, j), gens[:3]) * P[i] * P[j]
        return out

    def half_determinant(self) -> MultiPoly:
        """4 a11 a22 a33 + a12 a13 a23 - (a11 a23^2 + a22 a13^2 + a33 a12^2)."""
        a, b, c, d, e, f = self.a11, self.a12, self.a13, self.a22, self.a23, self.a33
        return (a * d * f).scale(4) + b * c * e - (a * e * e + d * c * c + f * b * b)


def fiber_conic(d: QuadricBundleData) -> FiberConic:
    return FiberConic(d.L11, d.L12, d.L13, d.L22, d.L23, d.L33)


class DegenerateConic(ValueError):
    pass


@dataclass(frozen=True)
class SquareCompletion:
    """lambda(p) = scale * (P1^2 - alpha P2^2 - beta P3^2) with P = T p.

    ``order`` lists which of (p14, p24, p34) play the roles of the first,
    second and third variable; ``T`` is upper triangular with unit diagonal
    in that order.
    """

    order: tuple[int, int, int]
    scale: RationalFunction
    T: tuple[tuple[RationalFunction, ...], ...]
    alpha: RationalFunction
    beta: RationalFunction


def complete_squares(c: FiberConic) -> SquareCompletion:
    to_q = lambda f: f.change_ring(QQ) if f.ring is not QQ else f  # noqa: E731
    if c.a11.ring.characteristic != 0:
        raise PolyError("completing squares is done over QQ")
    if to_q(c.half_determinant()).is_zero():
        raise DegenerateConic("the conic is degenerate over Q(x, y, z)")
    last_error = None
    for order in itertools.permutations(range(3)):
        i1, i2, i3 = order
        a = to_q(c.coefficient(i1, i1))
        b = to_q(c.coefficient(i1, i2))
        cc = to_q(c.coefficient(i1, i3))
        d = to_q(c.coefficient(i2, i2))
        e = to_q(c.coefficient(i2, i3))
        if a.is_zero():
            last_error = "vanishing first pivot"
            continue
        disc2 = (a * d).scale(4) - b * b  # 4ad - b^2
        if disc2.is_zero():
            last_error = "vanishing second pivot"
            continue
        h = to_q(c.half_determinant())
        one = RationalFunction(a.one())
        alpha = RationalFunction(b * b - (a * d).scale(4), (a * a).scale(4))
        beta = RationalFunction(-h, a * disc2)
        t12 = RationalFunction(b, a.scale(2))
        t13 = RationalFunction(cc, a.scale(2))
        t23 = RationalFunction((a * e).scale(2) - b * cc, disc2)
        zero = RationalFunction(a.zero())
        T = ((one, t12, t13), (zero, one, t23), (zero, zero, one))
        return SquareCompletion(order, RationalFunction(a), T, alpha, beta)
    raise DegenerateConic(f"no ordering of the variables completes the squares ({last_error})")


def completion_identity_holds(c: FiberConic, sc: SquareCompletion) -> bool:
    """Check lambda(p) == scale * (P1^2 - alpha P2^2 - beta P3^2) coefficientwise."""
    coeffs_diag = (RationalFunction(c.a11.one()), -sc.alpha, -sc.beta)
    # expand sum_k w_k (sum_j T[k][j] p_{order[j]})^2
    got = {}
    for k in range(3):
        for j in range(3):
            for l in range(3):
                key = tuple(sorted((sc.order[j], sc.order[l])))
                term = coeffs_diag[k] * sc.T[k][j] * sc.T[k][l]
                got[key] = got[key] + term if key in got else term
    for (i, j), v in got.items():
        # both (j, l) orders land on the same cross term
        expected = RationalFunction(c.coefficient(i, j).change_ring(QQ))
        if not (sc.scale * v == expected):
            return False
    return True


# -- lifting ----------------------------------------------------------------

def crt_lift(d2: QuadricBundleData, d3: QuadricBundleData) -> QuadricBundleData:
    """Integer data with coefficients in {0, ..., 5} reducing to d2 mod 2 and d3 mod 3."""
    if d2.modulus != 2 or d3.modulus != 3:
        raise PolyError("crt_lift expects data over F_2 and F_3")
    out = {}
    for name in FORM_NAMES:
        f2, f3 = getattr(d2, name), getattr(d3, name)
        terms = {}
        for e in set(f2.terms) | set(f3.terms):
            c2 = int(f2.coefficient(e))
            c3 = int(f3.coefficient(e))
            terms[e] = (3 * c2 + 4 * c3) % 6
        out[name] = MultiPoly(ZZ, 3, terms, XYZ)
    return QuadricBundleData(**out)

