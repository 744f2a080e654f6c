"""Lower bounds for the geometric Picard rank of reductions, and the
van Luijk argument combining them with the upper bounds from point counts.

Two witnesses are supported:

* char 2: a line l and a cubic c with c^2 + alpha c + beta = 0 on {l = 0}.
  Then {l = 0, w = c} and its image {l = 0, w = c + alpha} under
  w -> w + alpha are two curves meeting in 3 points.
* odd char: a smooth conic meeting the branch sextic with even multiplicity
  everywhere. Its preimage splits into two components.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .ff import GF, ext_field_create
from .geometry import XYZ, XYZW, K3Surface
from .mpoly import MultiPoly, PolyError, even_multiplicity_form, parse_poly, partial_derivative, substitute

CHAR2_GRAM = ((-2, 3), (3, -2))
CONIC_GRAM = ((-2, 6), (6, -2))


@dataclass(frozen=True)
class LatticeCertificate:
    p: int
    kind: str  # "char2-divisor" or "tangent-conic"
    witness: dict = field(hash=False)
    gram: tuple[tuple[int, int], tuple[int, int]]
    discriminant: int

    def __post_init__(self):
        g = self.gram
        if g[0][1] != g[1][0]:
            raise ValueError("intersection matrix must be symmetric")
        if g[0][0] * g[1][1] - g[0][1] * g[1][0] != self.discriminant:
            raise ValueError("discriminant does not match the intersection matrix")
        if self.discriminant == 0:
            raise ValueError("degenerate lattice")

    @property
    def rank(self) -> int:
        return 2

    def to_json(self) -> dict:
        return {"p": self.p, "kind": self.kind, "witness": self.witness,
                "gram": [list(r) for r in self.gram], "discriminant": self.discriminant}

    @classmethod
    def from_json(cls, obj) -> LatticeCertificate:
        return cls(int(obj["p"]), obj["kind"], dict(obj["witness"]),
                   tuple(tuple(int(v) for v in r) for r in obj["gram"]), int(obj["discriminant"]))


# -- characteristic 2 -------------------------------------------------------

def binary_lines():
    """The seven lines over F_2 as coefficient triples (x, y, z), by index 1..7
    with x the most significant bit."""
    return [((i >> 2) & 1, (i >> 1) & 1, i & 1) for i in range(1, 8)]


def _line_restriction(line, ring):
    """Images of (x, y, z) on {l = 0} in terms of the two remaining variables.

    The pivot is the last variable (in z, y, x order) with a nonzero coefficient.
    """
    pivot = max(i for i in range(3) if line[i])
    free = [i for i in range(3) if i != pivot]
    u, v = MultiPoly.gens(ring, ("u", "v"))
    uv = dict(zip(free, (u, v)))
    images = []
    for i in range(3):
        if i == pivot:
            img = u.zero()
            for j in free:
                if line[j]:
                    img = img + uv[j]
            images.append(img)  # char 2: l = 0 means pivot = sum of the others
        else:
            images.append(uv[i])
    return images, free


def _binary_cubics(ring):
    u, v = MultiPoly.gens(ring, ("u", "v"))
    mons = (u**3, u * u * v, u * v * v, v**3)
    for bits in range(16):
        c = u.zero()
        for j, mon in enumerate(mons):
            if (bits >> j) & 1:
                c = c + mon
        yield bits, c


def _lift_cubic(c: MultiPoly, free, ring) -> MultiPoly:
    gens = MultiPoly.gens(ring, XYZ)
    return substitute(c, [gens[free[0]], gens[free[1]]])


def _line_str(line) -> str:
    return " + ".join(n for n, b in zip(XYZ, line) if b)


def find_char2_divisor(s: K3Surface) -> LatticeCertificate | None:
    """First (line, cubic) in search order with c^2 + alpha c + beta = 0 on the line
    and alpha not identically zero there."""
    ring = s.ring
    if s.characteristic != 2 or getattr(ring, "n", 0) != 1:
        raise PolyError("find_char2_divisor works over F_2")
    if s.alpha.is_zero():
        raise PolyError("alpha = 0: the surface is singular")
    for line in binary_lines():
        images, free = _line_restriction(line, ring)
        a = substitute(s.alpha, images)
        if a.is_zero():
            continue  # the two curves would coincide
        b = substitute(s.beta, images)
        for bits, c in _binary_cubics(ring):
            if (c * c + a * c + b).is_zero():
                cx = _lift_cubic(c, free, ring)
                ax = _lift_cubic(a, free, ring)  # alpha restricted to the line
                gens = MultiPoly.gens(ring, XYZW)
                lift = lambda f: substitute(f, gens[:3])  # noqa: E731
                witness = {
                    "line": _line_str(line),
                    "cubic": cx.to_str(),
                    "curve": [_line_str(line), (gens[3] + lift(cx)).to_str()],
                    "companion": [_line_str(line), (gens[3] + lift(cx) + lift(ax)).to_str()],
                }
                return LatticeCertificate(2, "char2-divisor", witness, CHAR2_GRAM, -5)
    return None


def char2_membership_holds(s: K3Surface, line_str: str, cubic_str: str) -> bool:
    ring = s.ring
    line = tuple(int(n in line_str.replace(" ", "").split("+")) for n in XYZ)
    images, _ = _line_restriction(line, ring)
    c = parse_poly(cubic_str, ring, XYZ)
    f = c * c + s.alpha * c + s.beta
    return substitute(f, images).is_zero()


# -- tangent conics ---------------------------------------------------------

CONIC_MONOMIALS = ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))


def conic_from_coeffs(coeffs, ring) -> MultiPoly:
    return MultiPoly(ring, 3, {e: ring(c) for e, c in zip(CONIC_MONOMIALS, coeffs) if c != 0}, XYZ)


def conic_is_smooth(coeffs, field: GF) -> bool:
    a, b, c, d, e, f = (field(v) for v in coeffs)
    two = field(2)
    M = [[two * a, b, c], [b, two * d, e], [c, e, two * f]]
    det = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
           - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
           + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))
    return not det.is_zero()


def _projective_points(field: GF):
    els = list(field.elements())
    one, zero = field.one, field.zero
    for lead in range(3):
        for tail in itertools.product(els, repeat=2 - lead):
            yield tuple([zero] * lead + [one] + list(tail))


def conic_rational_point(Q: MultiPoly, field: GF):
    for pt in _projective_points(field):
        if field(Q(*pt)).is_zero():
            return pt
    return None


def conic_parametrization(Q: MultiPoly, P0, field: GF):
    """Three quadratic binary forms (X(s,t), Y(s,t), Z(s,t)) covering Q = 0.

    The line through P0 in direction w = s v1 + t v2 meets the conic again in
    Q(w) P0 - B(P0, w) w, with B the polar form.
    """
    ring = field
    i0 = next(i for i in range(3) if not P0[i].is_zero())
    basis = [tuple(field.one if j == k else field.zero for j in range(3)) for k in range(3) if k != i0]
    s, t = MultiPoly.gens(ring, ("s", "t"))
    w = [s * basis[0][j] + t * basis[1][j] for j in range(3)]
    Qw = substitute(Q, w)
    # B(P0, w) = sum_j dQ/dx_j (P0) w_j
    dQ = [field(partial_derivative(Q, j)(*P0)) for j in range(3)]
    B = w[0].zero()
    for j in range(3):
        B = B + w[j] * dQ[j]
    return [Qw * P0[j] - B * w[j] for j in range(3)]


def conic_pullback(s: K3Surface, coeffs, field: GF):
    """The degree-12 binary form beta|_conic, or None without a rational point."""
    Q = conic_from_coeffs(coeffs, field)
    P0 = conic_rational_point(Q, field)
    if P0 is None:
        return None
    X = conic_parametrization(Q, P0, field)
    return substitute(s.beta.change_ring(field), X)


def conic_is_tangent(s: K3Surface, coeffs, field: GF) -> bool:
    """True iff the conic is smooth, not contained in the branch curve and meets it
    with even multiplicity at every point."""
    if not conic_is_smooth(coeffs, field):
        return False
    g = conic_pullback(s, coeffs, field)
    if g is None or g.is_zero():
        return False
    return even_multiplicity_form(g)


def _normalized_vectors(field: GF):
    els = sorted(field.elements(), key=lambda a: a.index)
    for vec in itertools.product(els, repeat=6):
        nz = next((v for v in vec if not v.is_zero()), None)
        if nz is not None and nz == field.one:
            yield vec


def find_tangent_conic(s: K3Surface, e: int = 1) -> LatticeCertificate | None:
    """Least normalized conic over F_{p^e} (lexicographic on element indices)
    that is tangent to the branch sextic everywhere."""
    p = s.characteristic
    if p == 2:
        raise PolyError("tangent conics are used in odd characteristic")
    if not s.alpha.is_zero():
        raise PolyError("expected alpha = 0")
    field = ext_field_create(p, e)
    for vec in _normalized_vectors(field):
        if conic_is_tangent(s, vec, field):
            Q = conic_from_coeffs(vec, field)
            witness = {"field_degree": e, "conic": Q.to_str(),
                       "coefficients": [v.index for v in vec]}
            return LatticeCertificate(p, "tangent-conic", witness, CONIC_GRAM, -32)
    return None


# -- van Luijk --------------------------------------------------------------

def is_square_integer(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def rank_one_conclusion(cert2: LatticeCertificate, cert3: LatticeCertificate, ub2: int, ub3: int) -> bool:
    """Geometric Picard rank 1 over Q: both reductions have rank exactly 2 and
    the discriminants lie in different square classes."""
    if ub2 != 2 or ub3 != 2:
        return False
    d2, d3 = cert2.discriminant, cert3.discriminant
    if d2 == 0 or d3 == 0:
        return False
    return not is_square_integer(d2 * d3)
