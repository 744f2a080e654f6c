import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3brauer.ff import ext_field_create
from k3brauer.fixtures import reference_surface
from k3brauer.geometry import XYZ, K3Surface
from k3brauer.lattices import (CHAR2_GRAM, CONIC_GRAM, LatticeCertificate, _normalized_vectors, binary_lines,
                               char2_membership_holds, conic_from_coeffs, conic_is_smooth, conic_is_tangent,
                               conic_parametrization, conic_pullback, conic_rational_point, find_char2_divisor,
                               find_tangent_conic, is_square_integer, rank_one_conclusion)
from k3brauer.mpoly import MultiPoly, PolyError, UniPoly, binary_form_dehomogenize, parse_poly, substitute
from k3brauer.reference import TANGENT_CONIC_MOD3

F2 = ext_field_create(2, 1)
F3 = ext_field_create(3, 1)
F5 = ext_field_create(5, 1)



def _gram(disc):
    # [[-2, b], [b, d]] with -2 d - b^2 = disc; b = 0 when disc is even, else b = 1
    b = disc % 2
    d = -(disc + b * b) // 2
    return ((-2, b), (b, d))


# -- certificates -----------------------------------------------------------

def test_certificate_validation():
    with pytest.raises(ValueError):
        LatticeCertificate(2, "char2-divisor", {}, ((-2, 3), (2, -2)), -5)
    with pytest.raises(ValueError):
        LatticeCertificate(2, "char2-divisor", {}, CHAR2_GRAM, -4)
    with pytest.raises(ValueError):
        LatticeCertificate(2, "char2-divisor", {}, ((-2, 2), (2, -2)), 0)
    c = LatticeCertificate(3, "tangent-conic", {"conic": "x*z"}, CONIC_GRAM, -32)
    assert LatticeCertificate.from_json(c.to_json()) == c


# -- characteristic 2 -------------------------------------------------------

def test_binary_lines_order():
    lines = binary_lines()
    assert len(lines) == 7 and lines[0] == (0, 0, 1) and lines[-1] == (1, 1, 1)


def test_char2_divisor_reference():
    s = reference_surface(2)
    c = find_char2_divisor(s)
    assert c.kind == "char2-divisor" and c.discriminant == -5 and c.gram == CHAR2_GRAM
    assert c.witness["line"] == "z" and c.witness["cubic"] == "0"
    assert c.witness["curve"] == ["z", "w"]
    line, companion = c.witness["companion"]
    xyzw = ("x", "y", "z", "w")
    assert line == "z" and parse_poly(companion, F2, xyzw) == parse_poly("w + x^2*y + y^3", F2, xyzw)
    assert char2_membership_holds(s, c.witness["line"], c.witness["cubic"])


def test_char2_no_divisor_example():
    s = K3Surface(parse_poly("x^3", F2, XYZ), parse_poly("x^6 + y^6 + y*z^5 + z^6", F2, XYZ))
    assert find_char2_divisor(s) is None
    # exhaustive re-check of all 7 x 16 candidates through the membership test
    for line in binary_lines():
        name = " + ".join(n for n, b in zip(XYZ, line) if b)
        for bits in itertools.product((0, 1), repeat=4):
            cubic = " + ".join(m for m, b in zip(("x^3", "x^2*y", "x*y^2", "y^3"), bits) if b) or "0"
            # candidate cubics in x, y only cover the lines where z is the pivot
            if line[2]:
                assert not char2_membership_holds(s, name, cubic)


def test_char2_divisor_errors():
    with pytest.raises(PolyError):
        find_char2_divisor(reference_surface(3))
    with pytest.raises(PolyError):
        find_char2_divisor(K3Surface(parse_poly("0", F2, XYZ), parse_poly("x^6 + y^6 + z^6", F2, XYZ)))


def _random_char2_surface(bits_a, bits_b):
    monos3 = [(a, b, 3 - a - b) for a in range(4) for b in range(4 - a)]
    monos6 = [(a, b, 6 - a - b) for a in range(7) for b in range(7 - a)]
    alpha = MultiPoly(F2, 3, {m: 1 for m, b in zip(monos3, bits_a) if b}, XYZ)
    beta = MultiPoly(F2, 3, {m: 1 for m, b in zip(monos6, bits_b) if b}, XYZ)
    return K3Surface(alpha, beta)


@given(st.lists(st.booleans(), min_size=10, max_size=10), st.lists(st.booleans(), min_size=28, max_size=28))
def test_char2_witness_satisfies_membership(bits_a, bits_b):
    s = _random_char2_surface(bits_a, bits_b)
    if s.alpha.is_zero():
        return
    c = find_char2_divisor(s)
    if c is not None:
        assert char2_membership_holds(s, c.witness["line"], c.witness["cubic"])


# -- tangent conics ---------------------------------------------------------

def test_tangent_conic_reference():
    s = reference_surface(3)
    c = find_tangent_conic(s)
    assert c.discriminant == -32 and c.gram == CONIC_GRAM and c.witness["field_degree"] == 1
    expected = parse_poly(TANGENT_CONIC_MOD3, F3, XYZ)
    found = parse_poly(c.witness["conic"], F3, XYZ)
    assert any(found * k == expected for k in (1, 2))
    coeffs = [expected.coefficient(e) for e in ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))]
    assert conic_is_tangent(s, coeffs, F3)


def test_conic_helpers():
    Q = conic_from_coeffs((0, 0, 1, 1, 0, 0), F5)  # xz + y^2
    assert conic_is_smooth((0, 0, 1, 1, 0, 0), F5)
    assert not conic_is_smooth((1, 0, 0, 0, 0, 0), F5)
    P0 = conic_rational_point(Q, F5)
    assert Q(*P0).is_zero()
    X = conic_parametrization(Q, P0, F5)
    assert substitute(Q, X).is_zero()
    assert all(f.is_homogeneous() and f.degree() == 2 for f in X)


def test_conic_contained_in_sextic_is_rejected():
    sextic = parse_poly("(x*z - y^2)*(x^4 + y^4 + z^4)", F5, XYZ)
    s = K3Surface.double_cover(sextic)
    coeffs = (0, 0, 1, 4, 0, 0)  # xz - y^2
    assert conic_pullback(s, coeffs, F5).is_zero()
    assert not conic_is_tangent(s, coeffs, F5)
    c = find_tangent_conic(s)
    assert c is None or parse_poly(c.witness["conic"], F5, XYZ) != conic_from_coeffs(coeffs, F5)


def _oracle_tangent(s, coeffs, field):
    """Even multiplicity via h | (h')^2 on the dehomogenized pullback.

    A root r of h with multiplicity m is a root of h' with multiplicity >= m - 1,
    so h | h'^2 iff no root is simple. The root at infinity has multiplicity
    12 - deg h and must not be simple either.
    """
    if not conic_is_smooth(coeffs, field):
        return False
    g = conic_pullback(s, coeffs, field)
    if g is None or g.is_zero():
        return False
    s_, t_ = MultiPoly.gens(field, ("s", "t"))
    coeffs_h = [field.zero] * 13
    for (a, b), c in g.terms.items():
        coeffs_h[a] = coeffs_h[a] + c
    h = UniPoly(field, coeffs_h)
    if 12 - h.degree() == 1:
        return False
    if h.degree() <= 0:
        return True
    hp = h.derivative()
    return (hp * hp % h).is_zero()


def test_fermat_sextic_over_f5_against_oracle():
    s = K3Surface.double_cover(parse_poly("x^6 + y^6 + z^6", F5, XYZ))
    c = find_tangent_conic(s)
    first = None
    for vec in _normalized_vectors(F5):
        if _oracle_tangent(s, vec, F5):
            first = vec
            break
    if first is None:
        assert c is None
    else:
        assert c is not None and c.witness["coefficients"] == [v.index for v in first]


def test_fermat_conic_pointwise_over_f5_6():
    """Necessary condition: every root of the pullback in F_{5^6} is a double root."""
    s = K3Surface.double_cover(parse_poly("x^6 + y^6 + z^6", F5, XYZ))
    c = find_tangent_conic(s)
    vec = [F5.from_index(i) for i in c.witness["coefficients"]]
    g = conic_pullback(s, vec, F5)
    h, k = binary_form_dehomogenize(g)
    assert k != 1
    K = ext_field_create(5, 6)
    hK = UniPoly(K, [K(v) for v in h.coeffs])
    dK = hK.derivative()
    roots = 0
    for r in K.elements():
        if hK(r).is_zero():
            roots += 1
            assert dK(r).is_zero()
    assert roots <= 6


def test_tangent_conic_errors():
    with pytest.raises(PolyError):
        find_tangent_conic(reference_surface(2))


# -- rank one ---------------------------------------------------------------

def test_rank_one_examples():
    c2 = LatticeCertificate(2, "char2-divisor", {}, CHAR2_GRAM, -5)
    c3 = LatticeCertificate(3, "tangent-conic", {}, CONIC_GRAM, -32)
    assert rank_one_conclusion(c2, c3, 2, 2)
    assert not rank_one_conclusion(c2, LatticeCertificate(3, "x", {}, CHAR2_GRAM, -5), 2, 2)
    assert not rank_one_conclusion(c2, c3, 4, 2)
    assert not rank_one_conclusion(c2, c3, 2, 3)


@given(st.integers(-60, -1), st.integers(-60, -1), st.integers(0, 4), st.integers(0, 4))
def test_rank_one_symmetric(d1, d2, u1, u2):
    a = LatticeCertificate(2, "a", {}, _gram(d1), d1)
    b = LatticeCertificate(3, "b", {}, _gram(d2), d2)
    assert rank_one_conclusion(a, b, u1, u2) == rank_one_conclusion(b, a, u2, u1)


@given(st.integers(-60, -1), st.integers(-60, -1), st.integers(1, 5))
def test_rank_one_square_class_invariance(d1, d2, k):
    a = LatticeCertificate(2, "a", {}, _gram(d1), d1)
    b = LatticeCertificate(3, "b", {}, _gram(d2), d2)
    b2 = LatticeCertificate(3, "b", {}, _gram(d2 * k * k), d2 * k * k)
    assert rank_one_conclusion(a, b, 2, 2) == rank_one_conclusion(a, b2, 2, 2)
    assert rank_one_conclusion(a, b, 2, 2) == (not is_square_integer(d1 * d2))
