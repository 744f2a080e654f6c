"""Arithmetic in F_p and F_{p^n} for small p.

Elements are reduced polynomial representatives modulo a sparse irreducible
modulus. Each element also has a packed integer index ``sum(c_j * p**j)``
(a bit word when p = 2), which is what the bulk tables in
:class:`FieldTables` are keyed on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numba
import numpy as np

SQUARE_TABLE_MAX_Q = 2**24


class FieldError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def prime_factors(m: int) -> list[int]:
    out = []
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return out


# -- dense polynomial helpers over F_p (lists, lowest degree first) ----------

def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    """Remainder of a modulo f over F_p (f need not be monic)."""
    a = [c % p for c in a]
    f = _trim(f)
    inv = pow(f[-1], p - 2, p)
    df = len(f) - 1
    for k in range(len(a) - 1, df - 1, -1):
        c = a[k] * inv % p
        if c:
            for j in range(df + 1):
                a[k - df + j] = (a[k - df + j] - c * f[j]) % p
    return _trim(a[:df]) if df > 0 else []


def _pmulmod(a, b, f, p):
    prod = [0] * (len(a) + len(b))
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    return _pmod(prod, f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim([c % p for c in a]), _trim([c % p for c in b])
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def is_irreducible(f, p: int) -> bool:
    """Irreducibility of a monic polynomial f (coefficients low first) over F_p.

    gcd(x^{p^k} - x, f) = 1 for every k <= n/2, and x^{p^n} = x mod f.
    """
    f = _trim([c % p for c in f])
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    xk = [0, 1]
    for k in range(1, n + 1):
        xk = _ppowmod(xk, p, f, p)
        if k <= n // 2:
            diff = list(xk) + [0] * (2 - len(xk))
            diff[1] = (diff[1] - 1) % p
            g = _pgcd(f, diff, p)
            if len(g) > 1:
                return False
    return _trim(xk) == [0, 1]


def _modulus_candidates(p: int, n: int):
    """Monic degree-n polynomials by number of nonzero terms, then lex order
    on the coefficient vector (c_0, ..., c_{n-1})."""
    for extra in range(0, n + 1):
        batch = []
        for support in itertools.combinations(range(n), extra):
            for values in itertools.product(range(1, p), repeat=extra):
                c = [0] * n
                for j, v in zip(support, values):
                    c[j] = v
                batch.append(tuple(c))
        for c in sorted(batch):
            yield c + (1,)


def find_modulus(p: int, n: int) -> tuple[int, ...]:
    for f in _modulus_candidates(p, n):
        if is_irreducible(f, p):
            return f
    raise FieldError(f"no irreducible modulus found for p={p}, n={n}")


# -- the field -------------------------------------------------------------

class GF:
    """The field F_{p^n} = F_p[X]/(modulus). Immutable; share freely."""

    def __init__(self, p: int, n: int = 1):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if not 1 <= n <= 16:
            raise FieldError(f"extension degree {n} outside 1..16")
        self.p = p
        self.n = n
        self.q = p**n
        self.modulus = find_modulus(p, n)
        self.characteristic = p

    def __repr__(self):
        return f"GF({self.p}^{self.n})" if self.n > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GF) and (self.p, self.n, self.modulus) == (
            other.p, other.n, other.modulus)

    def __hash__(self):
        return hash((self.p, self.n, self.modulus))

    # -- element construction --
    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field == self:
                return value
            if value.field.p == self.p and value.field.n == 1:
                return self.element([value.coeffs[0]])
            raise FieldError(f"cannot coerce {value!r} into {self}")
        if isinstance(value, (int, np.integer)):
            return self.element([int(value)])
        # fractions with denominator prime to p
        num, den = getattr(value, "numerator", None), getattr(value, "denominator", None)
        if num is not None and den is not None:
            if den % self.p == 0:
                raise ZeroDivisionError(f"denominator {den} vanishes mod {self.p}")
            return self.element([num * pow(den, -1, self.p)])
        raise TypeError(f"cannot coerce {type(value).__name__} into {self}")

    def element(self, coeffs) -> FieldElement:
        c = [int(v) % self.p for v in coeffs]
        if len(c) > self.n:
            c = _pmod(c, self.modulus, self.p)
        c = tuple(c) + (0,) * (self.n - len(c))
        return FieldElement(self, c)

    def from_index(self, idx: int) -> FieldElement:
        c = []
        for _ in range(self.n):
            idx, r = divmod(idx, self.p)
            c.append(r)
        return FieldElement(self, tuple(c))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, (0,) * self.n)

    @property
    def one(self) -> FieldElement:
        return self.element([1])

    @property
    def gen(self) -> FieldElement:
        """The class of X."""
        return self.element([0, 1])

    is_field = True

    def elements(self):
        for i in range(self.q):
            yield self.from_index(i)

    @cached_property
    def primitive_element(self) -> FieldElement:
        m = self.q - 1
        factors = prime_factors(m) if m > 1 else []
        for i in range(1, self.q):
            g = self.from_index(i)
            if all(ff_pow(g, m // r) != self.one for r in factors):
                return g
        raise FieldError("no primitive element")  # pragma: no cover

    @cached_property
    def tables(self) -> FieldTables:
        return FieldTables.build(self)

    def frobenius(self, g: FieldElement) -> FieldElement:
        return ff_pow(g, self.p)


class FieldElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: GF, coeffs: tuple[int, ...]):
        self.field = field
        self.coeffs = coeffs

    # -- coercion --
    def _pair(self, other):
        """(a, b) over a common field, promoting a prime-field operand if needed."""
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return self, other
            try:
                return self, self.field(other)
            except FieldError:
                pass
            try:
                return other.field(self), other
            except FieldError:
                return None
        if isinstance(other, (int, np.integer)):
            return self, self.field(other)
        return None


    @property
    def index(self) -> int:
        p = self.field.p
        return sum(c * p**j for j, c in enumerate(self.coeffs))

    def __int__(self):
        if any(self.coeffs[1:]):
            raise ValueError(f"{self} is not in the prime field")
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[0].coeffs == pair[1].coeffs

    def __hash__(self):
        return hash((self.field.p, self.coeffs))

    def __repr__(self):
        if self.field.n == 1:
            return f"{self.coeffs[0]}"
        terms = [f"{c}*u^{j}" if j else f"{c}" for j, c in enumerate(self.coeffs) if c]
        return "(" + " + ".join(terms) + ")" if terms else "0"

    # -- arithmetic --
    def __add__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, o = pair
        p = a.field.p
        return FieldElement(a.field, tuple((x + y) % p for x, y in zip(a.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple(-a % p for a in self.coeffs))

    def __sub__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[0] + (-pair[1])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        a, o = pair
        f = a.field
        if f.n == 1:
            return FieldElement(f, (a.coeffs[0] * o.coeffs[0] % f.p,))
        # product has degree <= 2n-2; reduce inline by the modulus
        prod = _pmulmod(a.coeffs, o.coeffs, f.modulus, f.p)
        return FieldElement(f, tuple(prod) + (0,) * (f.n - len(prod)))

    __rmul__ = __mul__

    def inverse(self) -> FieldElement:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return ff_pow(self, self.field.q - 2)

    def __truediv__(self, other):
        pair = self._pair(other)
        if pair is None:
            return NotImplemented
        return pair[0] * pair[1].inverse()

    def __rtruediv__(self, other):
        return self.field(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return ff_pow(self.inverse(), -k)
        return ff_pow(self, k)


def ext_field_create(p: int, n: int) -> GF:
    return _cached_field(p, n)


@lru_cache(maxsize=None)
def _cached_field(p: int, n: int) -> GF:
    return GF(p, n)


def ff_pow(g: FieldElement, k: int) -> FieldElement:
    """g**k by square-and-multiply (Horner on the bits of k)."""
    if k < 0:
        raise ValueError("negative exponent")
    result = g.field.one
    for bit in bin(k)[2:]:
        result = result * result
        if bit == "1":
            result = result * g
    return result


def trace_to_prime_field(g: FieldElement) -> int:
    f = g.field
    acc = g
    t = g
    for _ in range(f.n - 1):
        t = ff_pow(t, f.p)
        acc = acc + t
    return acc.coeffs[0]


def is_square(g: FieldElement) -> bool:
    f = g.field
    if f.p == 2:
        raise FieldError("is_square is for odd characteristic; use quadratic_solution_count")
    if g.is_zero():
        return True
    if f.q <= SQUARE_TABLE_MAX_Q:
        return bool(f.tables.square[g.index])
    return ff_pow(g, (f.q - 1) // 2) == f.one


def quadratic_character(g: FieldElement) -> int:
    if g.is_zero():
        return 0
    return 1 if is_square(g) else -1


def quadratic_solution_count(a: FieldElement, b: FieldElement) -> int:
    """#{w in F_q : w^2 + a w + b = 0}."""
    f = a.field
    if f.p != 2:
        return 1 + quadratic_character(a * a - 4 * b)
    if a.is_zero():
        return 1
    a2 = a * a
    t = trace_to_prime_field(b * ff_pow(a2, f.q - 2))
    return 2 if t == 0 else 0


# -- bulk tables -------------------------------------------------------------

@numba.njit(cache=True)
def _power_walk(p, n, modulus, g, out):
    # modulus: monic, length n+1 low first; g: digits of the generator
    cur = np.zeros(n, np.int64)
    cur[0] = 1
    prod = np.zeros(2 * n, np.int64)
    m = out.shape[0]
    for e in range(m):
        idx = 0
        for j in range(n - 1, -1, -1):
            idx = idx * p + cur[j]
        out[e] = idx
        prod[:] = 0
        for i in range(n):
            if cur[i] != 0:
                for j in range(n):
                    prod[i + j] += cur[i] * g[j]
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k] % p
            if c != 0:
                for j in range(n + 1):
                    prod[k - n + j] -= c * modulus[j]
        for j in range(n):
            cur[j] = prod[j] % p


@dataclass(frozen=True, eq=False)
class FieldTables:
    """Discrete-log tables for the counting kernels.

    ``exp[e]`` is the index of g^e for the primitive element g, ``log`` the
    inverse map with ``log[0] = q - 1`` as the zero sentinel, ``zech[e]`` is
    log(1 + g^e), ``square`` marks squares by index and ``trace_of_log[e]``
    is Tr(g^e) in F_p.
    """

    q: int
    exp: np.ndarray
    log: np.ndarray
    zech: np.ndarray
    square: np.ndarray
    trace_of_log: np.ndarray

    @property
    def zero_log(self) -> int:
        return self.q - 1

    @classmethod
    def build(cls, field: GF) -> FieldTables:
        p, n, q = field.p, field.n, field.q
        if q > SQUARE_TABLE_MAX_Q:
            raise FieldError(f"q = {q} too large for tables")
        m = q - 1
        g = field.primitive_element
        exp = np.empty(m, np.int64)
        _power_walk(p, n, np.array(field.modulus, np.int64), np.array(g.coeffs, np.int64), exp)
        log = np.empty(q, np.int64)
        log[0] = m
        log[exp] = np.arange(m, dtype=np.int64)
        # 1 + g^e changes only the constant digit
        c0 = exp % p
        one_plus = exp - c0 + (c0 + 1) % p
        zech = log[one_plus]
        square = np.zeros(q, bool)
        square[0] = True
        square[exp[0::2]] = True
        basis_traces = [trace_to_prime_field(field.element([0] * j + [1])) for j in range(n)]
        tr_idx = np.zeros(q, np.int64)
        idx = np.arange(q, dtype=np.int64)
        for j in range(n):
            tr_idx += (idx // p**j % p) * basis_traces[j]
        tr_idx %= p
        trace_of_log = tr_idx[exp]
        for arr in (exp, log, zech, square, trace_of_log):
            arr.setflags(write=False)
        return cls(q, exp, log, zech, square, trace_of_log)
