"""Exact polynomial arithmetic.

Sparse multivariate polynomials (:class:`MultiPoly`) over QQ, ZZ or a finite
field, dense univariate polynomials (:class:`UniPoly`), rational functions
over QQ, small polynomial determinants and squarefree analysis of binary
forms.

Coefficient rings are ``QQ`` (``Fraction`` coefficients), ``ZZ`` (``int``)
and :class:`~k3brauer.ff.GF` instances (``FieldElement``).
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache, reduce

from .ff import FieldElement, ff_pow


class _Rationals:
    characteristic = 0
    is_field = True
    zero = Fraction(0)
    one = Fraction(1)

    def __call__(self, c):
        if isinstance(c, FieldElement):
            raise TypeError("cannot lift a finite-field element to QQ")
        return Fraction(c)

    def __repr__(self):
        return "QQ"


class _Integers:
    characteristic = 0
    is_field = False
    zero = 0
    one = 1

    def __call__(self, c):
        if isinstance(c, FieldElement):
            raise TypeError("cannot lift a finite-field element to ZZ")
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ValueError(f"{c} is not an integer")
            return c.numerator
        return int(c)

    def __repr__(self):
        return "ZZ"


QQ = _Rationals()
ZZ = _Integers()


def ring_tag(ring) -> str:
    if ring is QQ:
        return "QQ"
    if ring is ZZ:
        return "ZZ"
    return f"GF({ring.p}^{ring.n})" if ring.n > 1 else f"GF({ring.p})"


def _is_zero(c) -> bool:
    return c == 0


def grevlex_key(e: tuple[int, ...]):
    """Sort key: larger key means larger in grevlex (x > y > z > ...)."""
    return (sum(e), tuple(-a for a in reversed(e)))


DEFAULT_NAMES = {1: ("x",), 2: ("s", "t"), 3: ("x", "y", "z"), 4: ("x", "y", "z", "w")}


def default_names(nvars: int) -> tuple[str, ...]:
    return DEFAULT_NAMES.get(nvars, tuple(f"x{i}" for i in range(1, nvars + 1)))


class PolyError(ValueError):
    pass


class MultiPoly:
    """Sparse polynomial: ``terms`` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "nvars", "terms", "names", "weights")

    def __init__(self, ring, nvars: int, terms=None, names=None, weights=None):
        self.ring = ring
        self.nvars = nvars
        self.names = tuple(names) if names else default_names(nvars)
        self.weights = tuple(weights) if weights else None
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(e)
                if len(e) != nvars:
                    raise PolyError(f"exponent {e} has wrong length for {nvars} variables")
                c = ring(c)
                if not _is_zero(c):
                    clean[e] = c
        self.terms = clean

    # -- constructors --
    @classmethod
    def gens(cls, ring, names, weights=None) -> tuple[MultiPoly, ...]:
        names = tuple(names)
        k = len(names)
        out = []
        for i in range(k):
            e = [0] * k
            e[i] = 1
            out.append(cls(ring, k, {tuple(e): ring.one}, names, weights))
        return tuple(out)

    def _new(self, terms, ring=None):
        p = MultiPoly.__new__(MultiPoly)
        p.ring = ring if ring is not None else self.ring
        p.nvars = self.nvars
        p.names = self.names
        p.weights = self.weights
        p.terms = terms
        return p

    def const(self, c) -> MultiPoly:
        c = self.ring(c)
        return self._new({(0,) * self.nvars: c} if not _is_zero(c) else {})

    def zero(self) -> MultiPoly:
        return self._new({})

    def one(self) -> MultiPoly:
        return self.const(1)

    # -- basic queries --
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def weighted_degree(self, weights=None) -> int:
        w = weights or self.weights or (1,) * self.nvars
        return max((sum(a * b for a, b in zip(e, w)) for e in self.terms), default=-1)

    def is_homogeneous(self, weights=None) -> bool:
        w = weights or self.weights or (1,) * self.nvars
        degs = {sum(a * b for a, b in zip(e, w)) for e in self.terms}
        return len(degs) <= 1

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.terms), default=-1)

    def monomials(self):
        """Exponent vectors in descending grevlex order."""
        return sorted(self.terms, key=grevlex_key, reverse=True)

    def leading_term(self):
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def coefficient(self, e) -> object:
        return self.terms.get(tuple(e), self.ring.zero)

    # -- arithmetic --
    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.nvars != self.nvars:
                raise PolyError("variable count mismatch")
            if other.ring is not self.ring and other.ring != self.ring:
                raise PolyError(f"ring mismatch: {ring_tag(self.ring)} vs {ring_tag(other.ring)}")
            return other
        try:
            return self.const(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        t = dict(self.terms)
        for e, c in o.terms.items():
            s = t.get(e)
            if s is None:
                t[e] = c
            else:
                s = s + c
                if _is_zero(s):
                    del t[e]
                else:
                    t[e] = s
        return self._new(t)

    __radd__ = __add__

    def __neg__(self):
        return self._new({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = t.get(e)
                t[e] = c1 * c2 if s is None else s + c1 * c2
        return self._new({e: c for e, c in t.items() if not _is_zero(c)})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise PolyError("negative power")
        result = self.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def scale(self, c) -> MultiPoly:
        c = self.ring(c)
        return self._new({e: v * c for e, v in self.terms.items() if not _is_zero(v * c)})

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return (self.nvars == other.nvars and ring_tag(self.ring) == ring_tag(other.ring)
                    and self.terms == other.terms)
        try:
            return self.terms == self.const(other).terms
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        return hash((ring_tag(self.ring), frozenset(self.terms.items())))

    # -- conversions --
    def change_ring(self, ring) -> MultiPoly:
        """Map coefficients into ``ring`` (reduction mod p, or lifting F_p to ZZ/QQ
        via representatives in [0, p))."""
        t = {}
        for e, c in self.terms.items():
            if isinstance(c, FieldElement) and ring in (QQ, ZZ):
                c = int(c)
            t[e] = ring(c)
        return MultiPoly(ring, self.nvars, t, self.names, self.weights)

    def with_names(self, names) -> MultiPoly:
        p = self._new(self.terms)
        p.names = tuple(names)
        return p

    def with_weights(self, weights) -> MultiPoly:
        p = self._new(self.terms)
        p.weights = tuple(weights) if weights else None
        return p

    def __call__(self, *point):
        return poly_eval(self, point)

    def __repr__(self):
        return f"MultiPoly[{ring_tag(self.ring)}]({self.to_str()})"

    def __str__(self):
        return self.to_str()

    def to_str(self) -> str:
        return poly_to_str(self)


# -- operations ---------------------------------------------------------------

def poly_eval(f: MultiPoly, point):
    if len(point) != f.nvars:
        raise PolyError(f"arity mismatch: {len(point)} values for {f.nvars} variables")
    total = None
    for e, c in f.terms.items():
        v = c
        for xi, k in zip(point, e):
            if k:
                v = v * xi**k
        total = v if total is None else total + v
    if total is None:
        # zero polynomial: return zero of the point's type if possible
        for xi in point:
            return xi * 0
        return f.ring.zero
    return total


def partial_derivative(f: MultiPoly, i: int) -> MultiPoly:
    if not 0 <= i < f.nvars:
        raise PolyError(f"variable index {i} out of range")
    t = {}
    for e, c in f.terms.items():
        if e[i]:
            c2 = c * e[i]
            if not _is_zero(c2):
                e2 = list(e)
                e2[i] -= 1
                t[tuple(e2)] = c2
    return f._new(t)


def substitute(f: MultiPoly, images) -> MultiPoly:
    images = list(images)
    if len(images) != f.nvars:
        raise PolyError(f"arity mismatch: {len(images)} images for {f.nvars} variables")
    if not images:
        return f
    target = images[0]
    powers = [dict() for _ in images]

    def pw(i, k):
        cache = powers[i]
        if k not in cache:
            cache[k] = images[i] ** k
        return cache[k]

    result = target.zero()
    for e, c in f.terms.items():
        term = target.const(c)
        for i, k in enumerate(e):
            if k:
                term = term * pw(i, k)
        result = result + term
    return result


def poly_det(m) -> MultiPoly:
    """Determinant by cofactor expansion along the first row."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise PolyError("non-square matrix")
    if n == 0:
        raise PolyError("empty matrix")
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    total = None
    for j in range(n):
        if m[0][j].is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * poly_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total if total is not None else m[0][0].zero()


# -- canonical text -----------------------------------------------------------

def _coef_str(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    if isinstance(c, FieldElement):
        return repr(c)
    return str(c)


def _is_negative(c) -> bool:
    return isinstance(c, (int, Fraction)) and c < 0


def poly_to_str(f: MultiPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e in f.monomials():
        c = f.terms[e]
        neg = _is_negative(c)
        a = -c if neg else c
        mono = "*".join(
            (n if k == 1 else f"{n}^{k}") for n, k in zip(f.names, e) if k)
        if not mono:
            body = _coef_str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{_coef_str(a)}*{mono}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def parse_poly(text: str, ring, names, weights=None) -> MultiPoly:
    """Parse a polynomial written with ``+ - * / ^`` (or ``**``), integers,
    parentheses and the given variable names. Division only by constants."""
    names = tuple(names)
    gens = MultiPoly.gens(ring, names, weights)
    env = dict(zip(names, gens))
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise PolyError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        num, name, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif name is not None:
            if name not in env:
                raise PolyError(f"unknown variable {name!r}")
            tokens.append(("var", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = m.end()
    tokens.append(("end", None))
    i = 0
    zero = gens[0].zero() if gens else MultiPoly(ring, 0)

    def peek():
        return tokens[i]

    def take():
        nonlocal i
        t = tokens[i]
        i += 1
        return t

    def expr():
        v = term()
        while peek() in (("op", "+"), ("op", "-")):
            op = take()[1]
            r = term()
            v = v + r if op == "+" else v - r
        return v

    def term():
        v = factor()
        while peek() in (("op", "*"), ("op", "/")):
            op = take()[1]
            r = factor()
            if op == "*":
                v = v * r
            else:
                if r.degree() > 0 or r.is_zero():
                    raise PolyError("division only by nonzero constants")
                c = r.terms[(0,) * len(names)]
                v = v.scale(_inverse(ring, c))
        return v

    def factor():
        t = peek()
        if t in (("op", "-"), ("op", "+")):
            take()
            v = factor()
            return -v if t[1] == "-" else v
        v = atom()
        if peek() == ("op", "^"):
            take()
            k = take()
            if k[0] != "num":
                raise PolyError("exponent must be an integer literal")
            v = v ** k[1]
        return v

    def atom():
        t = take()
        if t[0] == "num":
            return zero.const(t[1])
        if t[0] == "var":
            return env[t[1]]
        if t == ("op", "("):
            v = expr()
            if take() != ("op", ")"):
                raise PolyError("unbalanced parentheses")
            return v
        raise PolyError(f"unexpected token {t}")

    v = expr()
    if peek()[0] != "end":
        raise PolyError(f"trailing input at token {peek()}")
    return v


def _inverse(ring, c):
    if ring is ZZ:
        if c not in (1, -1):
            raise PolyError("division in ZZ")
        return c
    if ring is QQ:
        return 1 / Fraction(c)
    return c.inverse()


# -- univariate -------------------------------------------------------------

class UniPoly:
    """Dense univariate polynomial, coefficients lowest degree first."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring, coeffs):
        c = [ring(v) for v in coeffs]
        while c and _is_zero(c[-1]):
            c.pop()
        self.ring = ring
        self.coeffs = tuple(c)

    @classmethod
    def t(cls, ring):
        return cls(ring, [0, 1])

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1]

    def __repr__(self):
        return f"UniPoly[{ring_tag(self.ring)}]({list(self.coeffs)})"

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def _c(self, other):
        if isinstance(other, UniPoly):
            return other
        return UniPoly(self.ring, [other])

    def __add__(self, other):
        o = self._c(other)
        n = max(len(self.coeffs), len(o.coeffs))
        z = self.ring.zero
        a = self.coeffs + (z,) * (n - len(self.coeffs))
        b = o.coeffs + (z,) * (n - len(o.coeffs))
        return UniPoly(self.ring, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(self.ring, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._c(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._c(other)
        if self.is_zero() or o.is_zero():
            return UniPoly(self.ring, [])
        out = [self.ring.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if _is_zero(a):
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return UniPoly(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UniPoly(self.ring, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, v):
        acc = self.ring.zero
        for c in reversed(self.coeffs):
            acc = acc * v + c
        return acc

    def divmod(self, d: UniPoly):
        if d.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        r = list(self.coeffs)
        dd = d.degree()
        inv = _inverse(self.ring, d.lc()) if self.ring is not ZZ else None
        qc = [self.ring.zero] * max(len(r) - dd, 0)
        for k in range(len(r) - 1, dd - 1, -1):
            c = r[k]
            if _is_zero(c):
                continue
            if inv is None:
                if c % d.lc():
                    raise PolyError("inexact division over ZZ")
                f = c // d.lc()
            else:
                f = c * inv
            qc[k - dd] = f
            for j in range(dd + 1):
                r[k - dd + j] = r[k - dd + j] - f * d.coeffs[j]
        return UniPoly(self.ring, qc), UniPoly(self.ring, r[:dd] if dd > 0 else [])

    def __floordiv__(self, d):
        return self.divmod(d)[0]

    def __mod__(self, d):
        return self.divmod(d)[1]

    def exact_div(self, d: UniPoly) -> UniPoly:
        q, r = self.divmod(d)
        if not r.is_zero():
            raise PolyError("division is not exact")
        return q

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        inv = _inverse(self.ring, self.lc())
        return UniPoly(self.ring, [c * inv for c in self.coeffs])

    def derivative(self) -> UniPoly:
        return UniPoly(self.ring, [c * i for i, c in enumerate(self.coeffs)][1:])

    def change_ring(self, ring) -> UniPoly:
        return UniPoly(ring, list(self.coeffs))


def uni_gcd(f: UniPoly, g: UniPoly) -> UniPoly:
    if not f.ring.is_field:
        raise PolyError("gcd needs a field of coefficients")
    while not g.is_zero():
        f, g = g, f % g
    return f.monic()


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> UniPoly:
    if m < 1:
        raise PolyError("cyclotomic index must be positive")
    f = UniPoly(ZZ, [-1] + [0] * (m - 1) + [1])
    for d in range(1, m):
        if m % d == 0:
            f = f.exact_div(cyclotomic(d))
    return f


def _pth_root_coeff(c, ring):
    # inverse Frobenius on F_q: c^(q/p)
    return ff_pow(c, ring.q // ring.p)


def squarefree_decomposition(f: UniPoly) -> list[tuple[UniPoly, int]]:
    """Pairs (a_i, i) with f = lc * prod a_i^i, a_i squarefree, pairwise coprime.

    Works over QQ and over finite fields (p-th roots taken coefficientwise).
    """
    ring = f.ring
    if f.is_zero():
        raise PolyError("squarefree decomposition of zero")
    f = f.monic()
    if f.degree() <= 0:
        return []
    p = ring.characteristic
    out: dict[int, UniPoly] = {}

    def add(fac, mult):
        if fac.degree() > 0:
            out[mult] = out[mult] * fac if mult in out else fac

    def rec(f, scale):
        if f.degree() <= 0:
            return
        fp = f.derivative()
        if fp.is_zero():
            # f = g^p
            g = UniPoly(ring, [_pth_root_coeff(c, ring) for c in f.coeffs[::p]])
            rec(g, scale * p)
            return
        c = uni_gcd(f, fp)
        w = f.exact_div(c)
        i = 1
        while w.degree() > 0:
            y = uni_gcd(w, c)
            add(w.exact_div(y), i * scale)
            i += 1
            w = y
            c = c.exact_div(y)
        if c.degree() > 0:
            if p == 0:  # pragma: no cover - impossible in char 0
                raise PolyError("leftover content in characteristic zero")
            g = UniPoly(ring, [_pth_root_coeff(v, ring) for v in c.coeffs[::p]])
            rec(g, scale * p)

    rec(f, 1)
    return [(v, k) for k, v in sorted(out.items())]


def radical(f: UniPoly) -> UniPoly:
    r = UniPoly(f.ring, [1])
    for fac, _ in squarefree_decomposition(f):
        r = r * fac
    return r


def binary_form_dehomogenize(g: MultiPoly) -> tuple[UniPoly, int]:
    """(g(s, 1), k) where t^k exactly divides g(s, t)."""
    if g.nvars != 2:
        raise PolyError("binary form expected")
    k = min(e[1] for e in g.terms)
    deg = max(e[0] for e in g.terms)
    coeffs = [g.ring.zero] * (deg + 1)
    for (a, _), c in g.terms.items():
        coeffs[a] = coeffs[a] + c
    return UniPoly(g.ring, coeffs), k


def even_multiplicity_form(g: MultiPoly) -> bool:
    """True iff every root of the binary form g over the algebraic closure has
    multiplicity at least 2."""
    if g.is_zero():
        raise PolyError("zero binary form")
    if not g.is_homogeneous((1, 1)):
        raise PolyError("binary form must be homogeneous")
    h, k = binary_form_dehomogenize(g)
    if k == 1:
        return False
    if h.degree() <= 0:
        return True
    rad = radical(h)
    return (h % (rad * rad)).is_zero()


# -- rational functions over QQ ---------------------------------------------------

def _content_lcm_den(f: MultiPoly) -> int:
    return reduce(math.lcm, (Fraction(c).denominator for c in f.terms.values()), 1)


def _content_gcd_num(f: MultiPoly) -> int:
    return reduce(math.gcd, (abs(Fraction(c).numerator) for c in f.terms.values()), 0)


class RationalFunction:
    """num/den over QQ, normalized to integer-primitive form with the grevlex
    leading coefficient of the denominator positive. No polynomial gcd is
    cancelled; equality is tested by cross-multiplication."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: MultiPoly | None = None):
        if num.ring is not QQ:
            num = num.change_ring(QQ)
        if den is None:
            den = num.one()
        elif den.ring is not QQ:
            den = den.change_ring(QQ)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        scale = math.lcm(_content_lcm_den(num), _content_lcm_den(den))
        num, den = num.scale(scale), den.scale(scale)
        g = math.gcd(_content_gcd_num(num), _content_gcd_num(den))
        if g > 1:
            num, den = num.scale(Fraction(1, g)), den.scale(Fraction(1, g))
        if den.leading_term()[1] < 0:
            num, den = -num, -den
        self.num = num
        self.den = den

    def __add__(self, other):
        o = _rf(other, self)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-_rf(other, self))

    def __rsub__(self, other):
        return _rf(other, self) - self

    def __mul__(self, other):
        o = _rf(other, self)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _rf(other, self)
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return _rf(other, self) / self

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        o = _rf(other, self)
        return (self.num * o.den - o.num * self.den).is_zero()

    def __hash__(self):  # pragma: no cover - equality is not structural
        raise TypeError("RationalFunction is unhashable")

    def __call__(self, *point):
        pt = [Fraction(v) for v in point]
        d = poly_eval(self.den, pt)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at point")
        return Fraction(poly_eval(self.num, pt)) / d

    def to_str(self) -> str:
        if self.den == self.den.one():
            return self.num.to_str()
        return f"({self.num.to_str()})/({self.den.to_str()})"

    __str__ = to_str

    def __repr__(self):
        return f"RationalFunction({self.to_str()})"


def _rf(x, like: RationalFunction) -> RationalFunction:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, MultiPoly):
        return RationalFunction(x)
    return RationalFunction(like.num.const(x))


def parse_rational_function(text: str, names) -> RationalFunction:
    """Parse ``(num)/(den)`` or a bare polynomial over QQ."""
    text = text.strip()
    depth = 0
    split = None
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "/" and depth == 0 and text.startswith("(") and text[i - 1] == ")":
            split = i
    if split is None:
        return RationalFunction(parse_poly(text, QQ, names))
    return RationalFunction(parse_poly(text[:split], QQ, names), parse_poly(text[split + 1:], QQ, names))
