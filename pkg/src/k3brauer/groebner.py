"""Buchberger's algorithm over F_p, grevlex only.

Used to decide whether a homogeneous (possibly weighted) system has a common
zero in projective space over the algebraic closure, which is how the
smoothness checks are done.

Internally a polynomial is a dict ``{exponent tuple: int in [1, p)}``.
Monomials are compared through an integer key that realizes grevlex.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .mpoly import MultiPoly, PolyError

_BASE = 256  # exponents stay below this
_KEYS: dict[tuple[int, ...], int] = {}


def mono_key(e: tuple[int, ...]) -> int:
    """Integer with key(a) < key(b) iff a < b in grevlex."""
    k = _KEYS.get(e)
    if k is None:
        k = sum(e)
        for a in reversed(e):
            k = k * _BASE + (_BASE - 1 - a)
        _KEYS[e] = k
    return k


@dataclass(frozen=True)
class IdealBasis:
    generators: tuple[MultiPoly, ...]
    p: int
    nvars: int
    weights: tuple[int, ...] | None = None

    @classmethod
    def of(cls, gens, weights=None) -> IdealBasis:
        gens = tuple(g for g in gens if not g.is_zero())
        if not gens:
            raise PolyError("empty ideal basis")
        ring = gens[0].ring
        if getattr(ring, "n", None) != 1:
            raise PolyError("Groebner engine works over prime fields only")
        nv = gens[0].nvars
        if any(g.nvars != nv for g in gens):
            raise PolyError("generators live in different rings")
        return cls(gens, ring.p, nv, tuple(weights) if weights else None)

    def to_dicts(self):
        return [{e: c.coeffs[0] for e, c in g.terms.items()} for g in self.generators]


def _lm(f):
    return max(f, key=mono_key)


def _divides(a, b):
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


def _monic(f, p):
    m = _lm(f)
    inv = pow(f[m], p - 2, p)
    return {e: c * inv % p for e, c in f.items()}


def normal_form(f, G, p, lms=None):
    """Full remainder of f on division by the monic polynomials G."""
    if lms is None:
        lms = [_lm(g) for g in G]
    f = dict(f)
    heap = [-mono_key(e) for e in f]
    heapq.heapify(heap)
    back = {mono_key(e): e for e in f}
    rem = {}
    last = None
    while heap:
        k = -heapq.heappop(heap)
        if k == last:
            continue
        last = k
        m = back[k]
        c = f.get(m)
        if c is None:
            continue
        for g, lg in zip(G, lms):
            if _divides(lg, m):
                shift = tuple(a - b for a, b in zip(m, lg))
                del f[m]
                for e, v in g.items():
                    if e == lg:
                        continue
                    e2 = tuple(a + b for a, b in zip(e, shift))
                    r = (f.get(e2, 0) - c * v) % p
                    if r:
                        if e2 not in f:
                            k2 = mono_key(e2)
                            back[k2] = e2
                            heapq.heappush(heap, -k2)
                        f[e2] = r
                    else:
                        f.pop(e2, None)
                break
        else:
            rem[m] = c
            del f[m]
    return rem


def s_polynomial(f, g, p, lf=None, lg=None):
    lf = lf or _lm(f)
    lg = lg or _lm(g)
    L = _lcm(lf, lg)
    out = {}
    for src, lead, sign in ((f, lf, 1), (g, lg, -1)):
        shift = tuple(a - b for a, b in zip(L, lead))
        c0 = pow(src[lead], p - 2, p) * sign
        for e, v in src.items():
            e2 = tuple(a + b for a, b in zip(e, shift))
            r = (out.get(e2, 0) + c0 * v) % p
            if r:
                out[e2] = r
            else:
                out.pop(e2, None)
    return out


def _buchberger_dicts(F, p, stop=None):
    """Groebner basis (monic, not reduced) of the dict polynomials F.

    ``stop(leading_monomials)`` may end the run early (returning None)."""
    G: list[dict] = []
    lms: list[tuple] = []
    pairs: list = []  # heap of (lcm key, i, j)
    processed = set()

    def add(h):
        h = _monic(h, p)
        lh = _lm(h)
        k = len(G)
        G.append(h)
        lms.append(lh)
        for i in range(k):
            heapq.heappush(pairs, (mono_key(_lcm(lms[i], lh)), i, k))

    for f in F:
        h = normal_form(f, G, p, lms)
        if h:
            add(h)
            if stop and stop(lms):
                return None
    while pairs:
        _, i, j = heapq.heappop(pairs)
        processed.add((i, j))
        li, lj = lms[i], lms[j]
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # coprime leading monomials
        L = _lcm(li, lj)
        skip = False
        for k in range(len(G)):
            if k == i or k == j or not _divides(lms[k], L):
                continue
            if (min(i, k), max(i, k)) in processed and (min(j, k), max(j, k)) in processed:
                skip = True
                break
        if skip:
            continue
        h = normal_form(s_polynomial(G[i], G[j], p, li, lj), G, p, lms)
        if h:
            add(h)
            if stop and stop(lms):
                return None
    return G


def _interreduce(G, p):
    G = sorted(G, key=lambda g: mono_key(_lm(g)))
    minimal = []
    for g in G:
        lg = _lm(g)
        if not any(_divides(_lm(h), lg) for h in minimal):
            minimal.append(g)
    reduced = []
    for i, g in enumerate(minimal):
        others = minimal[:i] + minimal[i + 1:]
        lg = _lm(g)
        tail = {e: c for e, c in g.items() if e != lg}
        r = normal_form(tail, others, p) if tail else {}
        r[lg] = 1
        reduced.append(r)
    reduced.sort(key=lambda g: mono_key(_lm(g)), reverse=True)
    return reduced


def _to_basis(dicts, template: IdealBasis) -> IdealBasis:
    ring = template.generators[0].ring
    g0 = template.generators[0]
    gens = tuple(MultiPoly(ring, template.nvars, {e: ring(c) for e, c in d.items()}, g0.names, g0.weights)
                 for d in dicts)
    return IdealBasis(gens, template.p, template.nvars, template.weights)


def buchberger(basis: IdealBasis) -> IdealBasis:
    """Reduced Groebner basis under grevlex."""
    return _to_basis(_interreduce(_buchberger_dicts(basis.to_dicts(), basis.p), basis.p), basis)


def _has_all_pure_powers(lms, nvars):
    seen = [False] * nvars
    for m in lms:
        nz = [i for i, a in enumerate(m) if a]
        if len(nz) == 1:
            seen[nz[0]] = True
        elif not nz:
            return True  # unit ideal
    return all(seen)


def projective_empty(basis: IdealBasis) -> bool:
    """True iff the generators have no common zero on the affine cone except 0.

    Stops early once every variable has a pure power among the leading
    monomials found so far; those monomials lie in the initial ideal already.
    """
    w = basis.weights
    for g in basis.generators:
        if not g.is_homogeneous(w):
            raise PolyError("projective_empty needs homogeneous generators")
    n = basis.nvars
    G = _buchberger_dicts(basis.to_dicts(), basis.p, stop=lambda lms: _has_all_pure_powers(lms, n))
    if G is None:
        return True
    return _has_all_pure_powers([_lm(g) for g in G], n)
