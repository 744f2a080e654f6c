"""Independent oracles shared by the test modules."""

from fractions import Fraction

from k3brauer.brauer import HALF, ZERO
from k3brauer.ff import prime_factors


def squarefree_part(n: int) -> int:
    sign = -1 if n < 0 else 1
    n = abs(n)
    out = 1
    for p in prime_factors(n):
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        if k % 2:
            out *= p
    return sign * out


def solvable_oracle(a, b, p) -> bool:
    """Nontrivial solvability of a x^2 + b y^2 = z^2 over Q_p by brute force.

    a, b are first reduced to square-free integers. A primitive solution mod
    p^3 (odd p) or 2^5 lifts, and conversely every p-adic solution gives one.
    """
    a = squarefree_part(Fraction(a).numerator * Fraction(a).denominator)
    b = squarefree_part(Fraction(b).numerator * Fraction(b).denominator)
    mod = p**5 if p == 2 else p**3
    sq_all = {z * z % mod for z in range(mod)}
    sq_unit = {z * z % mod for z in range(mod) if z % p}
    for x in range(mod):
        ax = a * x * x
        for y in range(mod):
            v = (ax + b * y * y) % mod
            if x % p or y % p:
                if v in sq_all:
                    return True
            elif v in sq_unit:
                return True
    return False


def oracle_symbol(a, b, p):
    return ZERO if solvable_oracle(a, b, p) else HALF
