import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3brauer.ff import (GF, FieldError, ext_field_create, ff_pow, find_modulus, is_irreducible, is_square,
                         quadratic_solution_count, trace_to_prime_field)

SMALL = [(2, 2), (2, 3), (3, 2), (3, 3)]


def brute_irreducible(f, p):
    """Monic f (low first) has no monic factor of degree 1..n/2, by trial division."""
    n = len(f) - 1
    for d in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            g = list(tail) + [1]
            r = list(f)
            for k in range(n - d, -1, -1):
                c = r[k + d]
                for j in range(d + 1):
                    r[k + j] = (r[k + j] - c * g[j]) % p
            if not any(r[:d]):
                return False
    return True


def test_moduli_small():
    assert ext_field_create(2, 1).modulus == (0, 1)
    assert ext_field_create(2, 2).modulus == (1, 1, 1)


def test_modulus_f9_is_first_irreducible_in_search_order():
    quads = [(c0, c1, 1) for c0 in range(3) for c1 in range(3)]
    irreducible = [f for f in quads if all((f[0] + f[1] * x + x * x) % 3 for x in range(3))]
    assert len(irreducible) == 3
    order = sorted(irreducible, key=lambda f: (sum(1 for c in f[:2] if c), f[:2]))
    assert ext_field_create(3, 2).modulus == order[0]


@pytest.mark.parametrize("p,n", [(2, k) for k in range(1, 9)] + [(3, k) for k in range(1, 6)] + [(5, 3)])
def test_modulus_irreducible_brute(p, n):
    f = find_modulus(p, n)
    assert f[-1] == 1 and len(f) == n + 1
    assert brute_irreducible(f, p)


@pytest.mark.parametrize("p,n", [(2, 4), (3, 3), (5, 2)])
def test_irreducibility_test_agrees_with_trial_division(p, n):
    for tail in itertools.product(range(p), repeat=n):
        f = list(tail) + [1]
        assert is_irreducible(f, p) == brute_irreducible(f, p)


def test_bad_inputs():
    with pytest.raises(FieldError):
        GF(4, 1)
    with pytest.raises(FieldError):
        GF(2, 17)


def test_pow_examples():
    F = ext_field_create(3, 2)
    assert ff_pow(F.zero, 5) == F.zero
    for g in F.elements():
        assert ff_pow(g, 0) == F.one
        if not g.is_zero():
            h = F.one
            for _ in range(8):
                h = h * g
            assert h == F.one and ff_pow(g, 8) == F.one


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_field_axioms_exhaustive(p, n):
    F = ext_field_create(p, n)
    els = list(F.elements())
    for a in els:
        assert a + F.zero == a and a * F.one == a and a + (-a) == F.zero
        if not a.is_zero():
            assert a * a.inverse() == F.one
    for a, b in itertools.product(els, repeat=2):
        assert a + b == b + a and a * b == b * a
    for a, b, c in itertools.product(els, repeat=3):
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (2, 4), (2, 6), (3, 2), (3, 3), (3, 4)])
def test_frobenius_additive_bijective(p, n):
    F = ext_field_create(p, n)
    els = list(F.elements())
    images = {F.frobenius(a) for a in els}
    assert len(images) == F.q
    for a, b in itertools.product(els[:20], els):
        assert F.frobenius(a + b) == F.frobenius(a) + F.frobenius(b)


def test_is_square_examples():
    F3 = ext_field_create(3, 1)
    assert is_square(F3(0)) and not is_square(F3(2))
    with pytest.raises(FieldError):
        is_square(ext_field_create(2, 2).one)


@pytest.mark.parametrize("n", [2, 3])
def test_is_square_matches_squaring(n):
    F = ext_field_create(3, n)
    squares = {a * a for a in F.elements()}
    for a in F.elements():
        assert is_square(a) == (a in squares)


def test_is_square_exponent_fallback(monkeypatch):
    import k3brauer.ff as ff
    F = ext_field_create(3, 3)
    expected = {a: is_square(a) for a in F.elements()}
    monkeypatch.setattr(ff, "SQUARE_TABLE_MAX_Q", 1)
    assert all(is_square(a) == v for a, v in expected.items())


def test_quadratic_solution_count_examples():
    F2 = ext_field_create(2, 1)
    assert quadratic_solution_count(F2(1), F2(0)) == 2
    F8 = ext_field_create(2, 3)
    assert all(quadratic_solution_count(F8.zero, b) == 1 for b in F8.elements())
    F3 = ext_field_create(3, 1)
    assert quadratic_solution_count(F3(0), F3(-1)) == 2
    assert quadratic_solution_count(F3(0), F3(-2)) == 0


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)])
def test_quadratic_solution_count_brute(p, n):
    F = ext_field_create(p, n)
    els = list(F.elements())
    for a, b in itertools.product(els, repeat=2):
        brute = sum(1 for w in els if (w * w + a * w + b).is_zero())
        assert quadratic_solution_count(a, b) == brute


def test_trace_examples():
    F = ext_field_create(5, 1)
    assert all(trace_to_prime_field(F(c)) == c for c in range(5))
    assert trace_to_prime_field(ext_field_create(2, 2).one) == 0


def test_trace_linear_on_f8():
    F = ext_field_create(2, 3)
    for a, b in itertools.product(F.elements(), repeat=2):
        assert trace_to_prime_field(a + b) == (trace_to_prime_field(a) + trace_to_prime_field(b)) % 2


@pytest.mark.parametrize("p,n", [(2, 4), (2, 5), (3, 3), (3, 4), (5, 2)])
def test_tables_consistent(p, n):
    F = ext_field_create(p, n)
    t = F.tables
    m = F.q - 1
    g = F.primitive_element
    h = F.one
    for e in range(m):
        assert t.exp[e] == h.index and t.log[h.index] == e
        one_plus = h + F.one
        assert t.zech[e] == (m if one_plus.is_zero() else t.log[one_plus.index])
        assert t.trace_of_log[e] == trace_to_prime_field(h)
        h = h * g
    assert h == F.one


@st.composite
def field_and_element(draw):
    p, n = draw(st.sampled_from(SMALL + [(3, 5), (2, 8), (7, 2)]))
    F = ext_field_create(p, n)
    return F.from_index(draw(st.integers(0, F.q - 1)))


@given(field_and_element(), st.integers(0, 500), st.integers(0, 500))
def test_pow_additive_exponents(g, j, k):
    assert ff_pow(g, j + k) == ff_pow(g, j) * ff_pow(g, k)


@given(field_and_element())
def test_is_square_of_square(g):
    if g.field.p != 2:
        assert is_square(g * g)


def test_prime_field_promotes_into_extension():
    F3, F9 = ext_field_create(3, 1), ext_field_create(3, 2)
    u = F9.gen
    assert F3(2) * u == u * F3(2) == u + u
    assert F3(1) + u == u + 1
