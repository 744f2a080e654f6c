import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3brauer.ff import ext_field_create, ff_pow
from k3brauer.fixtures import reference_gram_matrix, reference_surface
from k3brauer.mpoly import (QQ, ZZ, MultiPoly, PolyError, UniPoly, cyclotomic, even_multiplicity_form,
                            parse_poly, parse_rational_function, partial_derivative, poly_det, poly_eval,
                            radical, squarefree_decomposition, substitute, uni_gcd)
from k3brauer.reference import SURFACE_MOD2_BETA, TANGENT_CONIC_MOD3, TANGENT_CONIC_PULLBACK_ROOT

F2 = ext_field_create(2, 1)
F3 = ext_field_create(3, 1)
F9 = ext_field_create(3, 2)
XYZ = ("x", "y", "z")


def poly(text, ring=QQ, names=XYZ):
    return parse_poly(text, ring, names)


def random_poly(rng, ring, nvars, deg, nterms):
    terms = {}
    for _ in range(nterms):
        e = [0] * nvars
        for _ in range(rng.randint(0, deg)):
            e[rng.randrange(nvars)] += 1
        terms[tuple(e)] = rng.randint(-5, 5)
    return MultiPoly(ring, nvars, terms)


# -- evaluation -------------------------------------------------------------

def test_eval_examples():
    x, y = MultiPoly.gens(F2, ("x", "y"))
    assert poly_eval(x + y, (F2(1), F2(1))) == F2(0)
    F = poly_det(reference_gram_matrix())
    assert poly_eval(F, (1, 0, 1)) == 8
    beta = poly(SURFACE_MOD2_BETA, F2)
    assert poly_eval(beta, (F2(0), F2(0), F2(1))) == F2(1)


def test_eval_arity():
    with pytest.raises(PolyError):
        poly_eval(poly("x + y"), (1, 2))


def test_det_examples():
    f = poly("x^2 + y")
    assert poly_det([[f]]) == f
    a, b = poly("x"), poly("y")
    zero = a.zero()
    assert poly_det([[a, zero], [zero, b]]) == a * b
    with pytest.raises(PolyError):
        poly_det([[a, b]])


def test_det_of_reference_matrix():
    F = poly_det(reference_gram_matrix())
    assert F.is_homogeneous() and F.degree() == 6
    assert poly_eval(F, (1, 0, 1)) == 8
    assert poly_eval(F, (15, 15, 16)) == 13752 ** 2


def test_det_matches_numeric():
    rng = random.Random(3)
    for _ in range(20):
        m = [[random_poly(rng, ZZ, 2, 2, 3) for _ in range(3)] for _ in range(3)]
        pt = (rng.randint(-4, 4), rng.randint(-4, 4))
        vals = [[poly_eval(f, pt) for f in row] for row in m]
        num = (vals[0][0] * (vals[1][1] * vals[2][2] - vals[1][2] * vals[2][1])
               - vals[0][1] * (vals[1][0] * vals[2][2] - vals[1][2] * vals[2][0])
               + vals[0][2] * (vals[1][0] * vals[2][1] - vals[1][1] * vals[2][0]))
        assert poly_eval(poly_det(m), pt) == num


# -- derivatives and substitution -------------------------------------------

def test_partial_derivative_examples():
    assert partial_derivative(poly("x^3", F3), 0).is_zero()
    assert partial_derivative(poly("x^2*y"), 0) == poly("2*x*y")
    with pytest.raises(PolyError):
        partial_derivative(poly("x"), 3)


def test_leibniz_over_f2():
    rng = random.Random(5)
    for _ in range(50):
        f, g = random_poly(rng, F2, 3, 3, 4), random_poly(rng, F2, 3, 3, 4)
        for i in range(3):
            lhs = partial_derivative(f * g, i)
            assert lhs == f * partial_derivative(g, i) + g * partial_derivative(f, i)


def test_substitute_examples():
    s, t = MultiPoly.gens(QQ, ("s", "t"))
    assert substitute(poly("x"), [s**2, s * t, t**2]) == s**2
    f = poly("x^3 - 2*x*y*z + 7")
    assert substitute(f, MultiPoly.gens(QQ, XYZ)) == f
    with pytest.raises(PolyError):
        substitute(f, [s, t])


def _generators_f9():
    out = []
    for u in F9.elements():
        if u.is_zero():
            continue
        if ff_pow(u, 4) != F9.one:  # order 8 iff u^4 != 1
            out.append(u)
    return out


def test_substitute_tangent_conic_over_f9():
    f = reference_surface(3).branch_sextic().change_ring(F9)
    conic = poly(TANGENT_CONIC_MOD3, F9)
    s, t = MultiPoly.gens(F9, ("s", "t"))
    root = parse_poly(TANGENT_CONIC_PULLBACK_ROOT, F9, ("s", "t"))
    gens = _generators_f9()
    assert len(gens) == 4
    for u in gens:
        u2, u6 = u * u, ff_pow(u, 6)
        images = [t**2 * u2, s * t * u6, s**2 * u2 + s * t * u6 + t**2 * u2]
        assert substitute(conic, images).is_zero()
        assert substitute(f, images) == t**2 * root**2


def test_substitute_weighted_degree():
    rng = random.Random(11)
    s, t = MultiPoly.gens(F3, ("s", "t"))
    for _ in range(10):
        quad = [s**2 * rng.randint(0, 2) + s * t * rng.randint(0, 2) + t**2 * rng.randint(0, 2) for _ in range(3)]
        f = sum((m * rng.randint(1, 2) for m in [poly("x^3", F3), poly("x*y*z", F3), poly("z^3", F3)]),
                poly("0", F3))
        g = substitute(f, quad)
        assert g.is_zero() or (g.is_homogeneous() and g.degree() == 6)


# -- ring axioms ------------------------------------------------------------

def _all_f2_quadratics():
    monos = [(a, b) for a in range(3) for b in range(3) if a + b <= 2]
    for bits in itertools.product((0, 1), repeat=len(monos)):
        yield MultiPoly(F2, 2, {m: 1 for m, b in zip(monos, bits) if b})


def test_ring_axioms_exhaustive_f2():
    polys = list(_all_f2_quadratics())
    assert len(polys) == 64
    sample = polys[::7]
    for f, g in itertools.product(polys, sample):
        assert f + g == g + f and f * g == g * f
    for f, g, h in itertools.product(sample, repeat=3):
        assert (f + g) + h == f + (g + h)
        assert (f * g) * h == f * (g * h)
        assert f * (g + h) == f * g + f * h


@given(st.integers(0, 10**6), st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)))
def test_eval_is_homomorphism(seed, pt):
    rng = random.Random(seed)
    f, g = random_poly(rng, QQ, 3, 3, 4), random_poly(rng, QQ, 3, 3, 4)
    assert poly_eval(f * g, pt) == poly_eval(f, pt) * poly_eval(g, pt)
    assert poly_eval(f + g, pt) == poly_eval(f, pt) + poly_eval(g, pt)


@given(st.integers(0, 10**6))
def test_parse_round_trip(seed):
    rng = random.Random(seed)
    f = random_poly(rng, QQ, 3, 4, 5).scale(Fraction(rng.randint(1, 5), rng.randint(1, 5)))
    assert parse_poly(f.to_str(), QQ, XYZ) == f


def test_no_zero_terms_stored():
    f = poly("x + y") - poly("y")
    assert f.terms == {(1, 0, 0): 1}


def test_parse_errors():
    with pytest.raises(PolyError):
        poly("x + q")
    with pytest.raises(PolyError):
        poly("(x + y")
    with pytest.raises(PolyError):
        poly("x / y")


# -- univariate -------------------------------------------------------------

def test_gcd_examples():
    f = UniPoly(QQ, [-1, 0, 2])
    assert uni_gcd(f, UniPoly(QQ, [])) == f.monic()
    assert uni_gcd(UniPoly(QQ, [-1, 0, 1]), UniPoly(QQ, [-1, 1])) == UniPoly(QQ, [-1, 1])
    phi6 = cyclotomic(6).change_ring(QQ)
    assert uni_gcd(phi6, UniPoly(QQ, [-1, 0, 0, 0, 0, 0, 1])) == phi6


def test_cyclotomic_examples():
    assert cyclotomic(1) == UniPoly(ZZ, [-1, 1])
    assert cyclotomic(6) == UniPoly(ZZ, [1, -1, 1])
    with pytest.raises(PolyError):
        cyclotomic(0)


@pytest.mark.parametrize("m", range(1, 67))
def test_cyclotomic_product(m):
    prod = UniPoly(ZZ, [1])
    for d in range(1, m + 1):
        if m % d == 0:
            prod = prod * cyclotomic(d)
    assert prod == UniPoly(ZZ, [-1] + [0] * (m - 1) + [1])


def test_squarefree_decomposition_char3_pth_power():
    t = UniPoly.t(F3)
    f = (t + 1) ** 3 * (t + 2) ** 2 * t
    dec = squarefree_decomposition(f)
    assert dict((k, v) for v, k in dec) == {1: t, 2: t + 2, 3: t + 1}
    assert radical(f) == t * (t + 1) * (t + 2)


# -- even multiplicity ------------------------------------------------------

def test_even_multiplicity_examples():
    s, t = MultiPoly.gens(F3, ("s", "t"))
    assert not even_multiplicity_form(s * t)
    assert even_multiplicity_form(s**2)
    root = parse_poly(TANGENT_CONIC_PULLBACK_ROOT, F9, ("s", "t"))
    _, t9 = MultiPoly.gens(F9, ("s", "t"))
    assert even_multiplicity_form(t9**2 * root**2)
    with pytest.raises(PolyError):
        even_multiplicity_form(s.zero())


def test_even_multiplicity_pth_power_degeneracy():
    s, t = MultiPoly.gens(F3, ("s", "t"))
    assert even_multiplicity_form(s**3 + t**3)  # (s + t)^3
    assert not even_multiplicity_form((s**3 + t**3) * s)


def _random_binary(rng, ring, deg):
    s, t = MultiPoly.gens(ring, ("s", "t"))
    h = s.zero()
    for k in range(deg + 1):
        h = h + s**k * t ** (deg - k) * rng.randrange(ring.p)
    return h


@given(st.integers(0, 10**6), st.sampled_from([3, 5, 7]), st.integers(1, 4))
def test_even_multiplicity_squares(seed, p, deg):
    ring = ext_field_create(p, 1)
    h = _random_binary(random.Random(seed), ring, deg)
    if not h.is_zero():
        assert even_multiplicity_form(h * h)


@given(st.integers(0, 10**6), st.sampled_from([3, 5, 7]), st.integers(1, 4))
def test_even_multiplicity_with_simple_factor(seed, p, deg):
    ring = ext_field_create(p, 1)
    rng = random.Random(seed)
    h = _random_binary(rng, ring, deg)
    s, t = MultiPoly.gens(ring, ("s", "t"))
    a = rng.randrange(p)
    ell = s + t * a
    # ell divides h iff h(-a, 1) = 0
    if h.is_zero() or poly_eval(h, (ring(-a), ring.one)).is_zero():
        return
    assert not even_multiplicity_form(h * h * ell)


# -- rational functions -----------------------------------------------------

def test_rational_function_normalization():
    r = parse_rational_function("(2*x + 4*y)/(-6*z)", XYZ)
    assert r.num == poly("-x - 2*y") and r.den == poly("3*z")
    assert r(1, 1, 1) == Fraction(-1)
    assert r == parse_rational_function("(x + 2*y)/(-3*z)", XYZ)
    with pytest.raises(ZeroDivisionError):
        r(1, 1, 0)


def test_rational_function_arithmetic():
    a = parse_rational_function("(x)/(y)", XYZ)
    b = parse_rational_function("(y)/(x)", XYZ)
    assert a * b == 1
    assert (a + b)(1, 2, 0) == Fraction(5, 2)
    assert (a - a).is_zero()
