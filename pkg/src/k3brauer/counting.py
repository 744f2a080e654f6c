"""Point counts of w^2 + alpha w + beta = 0 in P(1,1,1,3) over F_{p^n}, and the
Frobenius characteristic polynomial on H^2 recovered from them.

The counting loop runs over the affine patches (1, y, z), (0, 1, z) and
(0, 0, 1) of the plane. For each y the forms restrict to polynomials in z;
their values are accumulated in the log domain (see ``_kernels``).
"""

from __future__ import annotations

import hashlib
import json
import logging
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import _kernels
from .ff import GF, FieldElement, ext_field_create, quadratic_solution_count
from .geometry import K3Surface
from .mpoly import QQ, MultiPoly, UniPoly, cyclotomic, poly_eval

log = logging.getLogger(__name__)

RANK = 22  # b_2 of a K3 surface
WORKERS_ENV = "K3BRAUER_WORKERS"


class CountError(ValueError):
    pass


class BudgetExceeded(CountError):
    pass


class InconsistentCounts(CountError):
    pass


class AmbiguousSign(CountError):
    pass


@dataclass(frozen=True)
class CountBudget:
    """Caps for a single count; ``None`` means unlimited."""

    max_points: int | None = None
    max_seconds: float | None = None


@dataclass
class CountSeries:
    p: int
    counts: dict[int, int] = field(default_factory=dict)
    fingerprint: str = ""

    def __post_init__(self):
        for n, N in self.counts.items():
            if N < 0:
                raise CountError(f"negative count N_{n}")
            if abs(N - self.p ** (2 * n) - 1) > RANK * self.p**n:
                raise InconsistentCounts(f"N_{n} = {N} violates the Weil bound")

    def max_n(self) -> int:
        n = 0
        while n + 1 in self.counts:
            n += 1
        return n

    def to_json(self) -> dict:
        return {"p": self.p, "fingerprint": self.fingerprint,
                "counts": {str(n): N for n, N in sorted(self.counts.items())}}

    @classmethod
    def from_json(cls, obj) -> CountSeries:
        return cls(int(obj["p"]), {int(n): int(N) for n, N in obj["counts"].items()},
                   obj.get("fingerprint", ""))


def surface_fingerprint(s: K3Surface) -> str:
    return hashlib.sha256(s.canonical().encode()).hexdigest()[:16]


# -- cache ------------------------------------------------------------------

class CountCache:
    """JSON list of {fingerprint, p, n, N, wall_seconds}; written after every count
    unless ``read_only`` (new counts are then only checked against it)."""

    def __init__(self, path, read_only: bool = False):
        self.path = Path(path)
        self.read_only = read_only
        self.entries: list[dict] = []
        if self.path.exists():
            self.entries = json.loads(self.path.read_text())

    def get(self, fingerprint: str, p: int, n: int) -> int | None:
        for e in self.entries:
            if e["fingerprint"] == fingerprint and e["p"] == p and e["n"] == n:
                return int(e["N"])
        return None

    def put(self, fingerprint: str, p: int, n: int, N: int, wall_seconds: float):
        old = self.get(fingerprint, p, n)
        if old is not None:
            if old != N:
                raise InconsistentCounts(f"cached N_{n} = {old} disagrees with recount {N}")
            return
        if self.read_only:
            return
        self.entries.append({"fingerprint": fingerprint, "p": p, "n": n, "N": int(N),
                             "wall_seconds": round(wall_seconds, 3)})
        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        tmp.write_text(json.dumps(self.entries, indent=1))
        os.replace(tmp, self.path)


# -- counting ---------------------------------------------------------------

def _monomial_arrays(f: MultiPoly, field: GF, tables, keep_x: bool):
    """(z-degree, y-degree, log coefficient) arrays; drop x-terms unless keep_x."""
    ks, bs, cs = [], [], []
    for (a, b, c), coef in f.terms.items():
        if a and not keep_x:
            continue
        idx = field(coef).index
        if idx == 0:
            continue
        ks.append(c)
        bs.append(b)
        cs.append(int(tables.log[idx]))
    return (np.array(ks, np.int64), np.array(bs, np.int64), np.array(cs, np.int64))


def _resolve_workers(workers):
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))
    return max(1, int(workers))


def _partition(n_rows: int, workers: int, chunks_per_worker: int = 16):
    pieces = max(1, min(n_rows, workers * chunks_per_worker))
    bounds = np.linspace(0, n_rows, pieces + 1).astype(np.int64)
    return [(int(bounds[i]), int(bounds[i + 1])) for i in range(pieces) if bounds[i] < bounds[i + 1]]


def _over_field(s: K3Surface, field: GF):
    if s.ring.n != 1 or s.ring.p != field.p:
        raise CountError("the surface must be defined over the prime field of the counting field")
    return s


def count_points(s: K3Surface, n: int, *, workers=None, budget: CountBudget | None = None,
                 orbits: bool = False, chunks=None, cache: CountCache | None = None) -> int:
    """#X(F_{p^n}) for X : w^2 + alpha w + beta = 0 in P(1,1,1,3).

    ``orbits=True`` sums one y per Frobenius orbit with the orbit size as
    weight (valid since the surface is defined over F_p). ``chunks`` overrides
    the partition of the y-rows into work units.
    """
    p = s.characteristic
    if n < 1:
        raise CountError("n must be at least 1")
    fp = surface_fingerprint(s)
    if cache is not None:
        hit = cache.get(fp, p, n)
        if hit is not None:
            log.info("N_%d over F_%d^%d taken from cache", n, p, n)
            return hit
    field = ext_field_create(p, n)
    _over_field(s, field)
    q = field.q
    budget = budget or CountBudget()
    if budget.max_points is not None and q * q + q + 1 > budget.max_points:
        raise BudgetExceeded(f"{q * q + q + 1} base points exceed the cap {budget.max_points}")
    tables = field.tables
    m = q - 1
    zech = np.ascontiguousarray(tables.zech, dtype=np.int64)
    workers = _resolve_workers(workers)
    t0 = time.monotonic()

    if p == 2:
        polys = (s.alpha, s.beta)
    else:
        polys = (s.branch_sextic(),)
    degs = [0 if f.is_zero() else f.degree() for f in polys]
    patch1 = [_monomial_arrays(f, field, tables, True) for f in polys]
    patch2 = [_monomial_arrays(f, field, tables, False) for f in polys]

    if orbits:
        reps, sizes = _kernels.frobenius_orbits(m, p)
        ylogs = np.concatenate([[m], reps]).astype(np.int64)
        weights = np.concatenate([[1], sizes]).astype(np.int64)
    else:
        ylogs = np.concatenate([[m], np.arange(m)]).astype(np.int64)
        weights = np.ones(q, np.int64)

    def run(arrs, yl, wt):
        if p == 2:
            (ak, ab, ac), (bk, bb, bc) = arrs
            return int(_kernels.count_rows_char2(yl, wt, ak, ab, ac, degs[0], bk, bb, bc, degs[1],
                                                 m, zech, tables.trace_of_log))
        (k, b, c), = arrs
        return int(_kernels.count_rows_odd(yl, wt, k, b, c, degs[0], m, zech))

    parts = chunks if chunks is not None else _partition(len(ylogs), workers)
    total = 0

    def job(bounds):
        lo, hi = bounds
        return run(patch1, ylogs[lo:hi], weights[lo:hi])

    def check_time():
        if budget.max_seconds is not None and time.monotonic() - t0 > budget.max_seconds:
            raise BudgetExceeded(f"N_{n} over F_{p}^{n} exceeded {budget.max_seconds} s")

    if workers == 1:
        for b in parts:
            check_time()
            total += job(b)
    else:
        with ThreadPoolExecutor(workers) as pool:
            futures = [pool.submit(job, b) for b in parts]
            try:
                for fut in futures:
                    total += fut.result(
                        timeout=None if budget.max_seconds is None
                        else max(0.0, budget.max_seconds - (time.monotonic() - t0)))
            except TimeoutError as exc:
                for fut in futures:
                    fut.cancel()
                raise BudgetExceeded(f"N_{n} over F_{p}^{n} exceeded {budget.max_seconds} s") from exc
    check_time()
    # line x = 0, y = 1
    total += run(patch2, np.zeros(1, np.int64), np.ones(1, np.int64))
    # the point (0, 0, 1)
    total += _count_fiber(s, field, (0, 0, 1))
    elapsed = time.monotonic() - t0
    log.info("N_%d over F_%d^%d = %d (%.2f s)", n, p, n, total, elapsed)
    if cache is not None:
        cache.put(fp, p, n, total, elapsed)
    return total


def _count_fiber(s: K3Surface, field: GF, xyz) -> int:
    pt = [field(v) for v in xyz]
    a = poly_eval(s.alpha, pt) if not s.alpha.is_zero() else field.zero
    b = poly_eval(s.beta, pt) if not s.beta.is_zero() else field.zero
    return quadratic_solution_count(field(a), field(b))


def count_points_naive(s: K3Surface, n: int) -> int:
    """Enumerate all (x, y, z, w) in F_q^4 with (x, y, z) != 0 and divide by q - 1.

    The scaling action t.(x, y, z, w) = (tx, ty, tz, t^3 w) is free there, and
    points with x = y = z = 0 would need w = 0. Meant for q <= 9.
    """
    field = ext_field_create(s.characteristic, n)
    els = list(field.elements())
    sols = 0
    for x in els:
        for y in els:
            for z in els:
                if x.is_zero() and y.is_zero() and z.is_zero():
                    continue
                pt = [x, y, z]
                a = field(poly_eval(s.alpha, pt)) if not s.alpha.is_zero() else field.zero
                b = field(poly_eval(s.beta, pt)) if not s.beta.is_zero() else field.zero
                for w in els:
                    if (w * w + a * w + b).is_zero():
                        sols += 1
    assert sols % (field.q - 1) == 0
    return sols // (field.q - 1)


def count_series(s: K3Surface, max_n: int, **kwargs) -> CountSeries:
    counts = {n: count_points(s, n, **kwargs) for n in range(1, max_n + 1)}
    return CountSeries(s.characteristic, counts, surface_fingerprint(s))


def bulk_eval(f: MultiPoly, field: GF, points) -> list[FieldElement]:
    """Evaluate f at many points of F_q^v.

    Monomial values come from the power tables as digit vectors; they are
    summed as integers and reduced mod p once per point.
    """
    tables = field.tables
    m = field.q - 1
    p, nd = field.p, field.n
    digits = np.array([[idx // p**j % p for j in range(nd)] for idx in tables.exp], np.int64)
    terms = [(e, field(c)) for e, c in f.terms.items()]
    terms = [(e, int(tables.log[c.index])) for e, c in terms if not c.is_zero()]
    out = []
    for pt in points:
        logs = [int(tables.log[field(v).index]) for v in pt]
        acc = np.zeros(nd, np.int64)
        for e, lc in terms:
            le = lc
            zero = False
            for li, k in zip(logs, e):
                if k:
                    if li == m:
                        zero = True
                        break
                    le += k * li
            if not zero:
                acc += digits[le % m]
        out.append(field.element([int(v) for v in acc % p]))
    return out


# -- Frobenius polynomial ---------------------------------------------------

def traces_from_counts(cs: CountSeries, upto: int | None = None) -> list[int]:
    upto = cs.max_n() if upto is None else upto
    out = []
    for n in range(1, upto + 1):
        if n not in cs.counts:
            raise CountError(f"missing count N_{n}")
        out.append(cs.counts[n] - cs.p ** (2 * n) - 1)
    return out


def newton_coefficients(traces) -> list[int]:
    """c_1..c_m of t^22 + c_1 t^21 + ... from the power sums t_1..t_m."""
    t = list(traces)
    if len(t) > RANK:
        raise CountError("at most 22 traces")
    c: list[int] = []
    for k in range(1, len(t) + 1):
        s = t[k - 1] + sum(c[i - 1] * t[k - i - 1] for i in range(1, k))
        if s % k:
            raise InconsistentCounts(f"c_{k} = {-s}/{k} is not an integer")
        c.append(-s // k)
    return c


@dataclass(frozen=True)
class WeilPolynomial:
    p: int
    c: tuple[int, ...]  # c_0 .. c_22
    sign: int

    def __post_init__(self):
        if len(self.c) != RANK + 1 or self.c[0] != 1:
            raise CountError("expected 23 coefficients with c_0 = 1")
        if self.sign not in (1, -1):
            raise CountError("sign must be +1 or -1")

    def functional_equation_holds(self) -> bool:
        p, e = self.p, self.sign
        # j and 22 - j give the same condition since sign = +-1
        return all(self.c[RANK - j] == e * p ** (RANK - 2 * j) * self.c[j] for j in range(RANK // 2 + 1))

    def within_weil_bounds(self) -> bool:
        return all(abs(ck) <= math.comb(RANK, k) * self.p**k for k, ck in enumerate(self.c))

    def poly(self) -> UniPoly:
        """f(t) over QQ, coefficients lowest degree first."""
        return UniPoly(QQ, [Fraction(v) for v in reversed(self.c)])

    def normalized(self) -> UniPoly:
        """p^-22 f(p t), which is monic with roots on the unit circle."""
        return UniPoly(QQ, [Fraction(self.c[RANK - i], self.p ** (RANK - i)) for i in range(RANK + 1)])

    def to_json(self) -> dict:
        return {"p": self.p, "c": list(self.c), "sign": self.sign}

    @classmethod
    def from_json(cls, obj) -> WeilPolynomial:
        return cls(int(obj["p"]), tuple(int(v) for v in obj["c"]), int(obj["sign"]))


def complete_charpoly(coeffs, p: int) -> WeilPolynomial:
    """Fill c_13..c_22 from c_1..c_12 via c_{22-j} = sign p^{22-2j} c_j."""
    c = [1] + [int(v) for v in coeffs]
    if len(c) != 13:
        raise CountError("need exactly c_1..c_12")
    if c[11] != 0:
        sign = 1
    elif c[10] != 0:
        ratio = Fraction(c[12], p * p * c[10])
        if ratio not in (1, -1):
            raise InconsistentCounts(f"c_12 / (p^2 c_10) = {ratio} is not +-1")
        sign = int(ratio)
    else:
        raise AmbiguousSign("c_10 = c_11 = 0: the sign needs further counts")
    if c[12] != sign * p * p * c[10]:
        raise InconsistentCounts("c_12 contradicts the functional equation")
    full = c + [0] * 10
    for j in range(10, -1, -1):
        full[RANK - j] = sign * p ** (RANK - 2 * j) * c[j]
    return WeilPolynomial(p, tuple(full), sign)


def _euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if math.gcd(k, m) == 1)


CYCLOTOMIC_ORDERS = tuple(m for m in range(1, 200) if _euler_phi(m) <= RANK)


def cyclotomic_factorization(w: WeilPolynomial):
    """[(m, multiplicity)] of the cyclotomic factors of p^-22 f(p t), and the rest."""
    f = w.normalized()
    found = []
    for m in CYCLOTOMIC_ORDERS:
        phi = cyclotomic(m).change_ring(QQ)
        k = 0
        while f.degree() >= phi.degree():
            quo, rem = f.divmod(phi)
            if not rem.is_zero():
                break
            f = quo
            k += 1
        if k:
            found.append((m, k))
    return found, f


def picard_upper_bound(w: WeilPolynomial) -> tuple[int, int]:
    """(raw, parity adjusted) number of eigenvalues p * root of unity."""
    found, _ = cyclotomic_factorization(w)
    raw = sum(cyclotomic(m).degree() * k for m, k in found)
    return raw, raw - (raw % 2)


def charpoly_from_counts(cs: CountSeries) -> WeilPolynomial:
    n = cs.max_n()
    if n < 12:
        if n >= 11:
            c = newton_coefficients(traces_from_counts(cs, 11))
            if c[10] != 0:
                # sign +1 is forced, c_12 = p^2 c_10
                return complete_charpoly(c + [cs.p**2 * c[9]], cs.p)
        raise AmbiguousSign(f"counts up to n = {n} do not determine the sign")
    return complete_charpoly(newton_coefficients(traces_from_counts(cs, 12)), cs.p)


__all__ = [
    "AmbiguousSign", "BudgetExceeded", "CountBudget", "CountCache", "CountError", "CountSeries",
    "InconsistentCounts", "WeilPolynomial", "bulk_eval", "charpoly_from_counts", "complete_charpoly",
    "count_points", "count_points_naive", "count_series", "cyclotomic_factorization",
    "newton_coefficients", "picard_upper_bound", "surface_fingerprint", "traces_from_counts",
]
