"""Command line driver: generate fourfolds over F_2 / F_3, certify their K3
surfaces, lift to Q and evaluate the Brauer class.

All results are JSON on stdout, logs go to stderr. Exit codes:

    0  success
    2  usage error
    3  generation retry cap exceeded
    4  Frobenius polynomial not determined by the available counts
    5  no lower-bound witness found
    6  Picard rank not pinched to one
    7  no usable rational point
    8  counting budget exceeded
    9  malformed or inconsistent input
   10  reciprocity check failed
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .brauer import (HALF, ZERO, QuaternionAlgebra, ReciprocityFailure, SurfacePoint, find_real_point,
                     local_invariant, obstruction_verdict, search_rational_points, usable_points)
from .counting import (AmbiguousSign, BudgetExceeded, CountBudget, CountCache, CountError, CountSeries,
                       charpoly_from_counts, count_points, cyclotomic_factorization,
                       picard_upper_bound, surface_fingerprint)
from .ff import ext_field_create
from .geometry import (FORM_DEGREES, FORM_NAMES, XYZ, DegenerateConic, K3Surface, QuadricBundleData,
                       complete_squares, crt_lift, fiber_conic, fourfold_equation, fourfold_smooth,
                       k3_from_fourfold, k3_singularity_reason)
from .lattices import LatticeCertificate, find_char2_divisor, find_tangent_conic, rank_one_conclusion
from .mpoly import MultiPoly, PolyError

log = logging.getLogger("k3brauer")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RETRIES = 3
EXIT_AMBIGUOUS = 4
EXIT_NO_WITNESS = 5
EXIT_RANK = 6
EXIT_NO_POINT = 7
EXIT_BUDGET = 8
EXIT_INPUT = 9
EXIT_RECIPROCITY = 10

DEFAULT_MAX_N = {2: 12, 3: 10}
LONG_RUN_MAX_N = 12
DEFAULT_HEIGHT = 64


class PipelineError(Exception):
    code = EXIT_INPUT


class RetryCapExceeded(PipelineError):
    code = EXIT_RETRIES


class NoWitness(PipelineError):
    code = EXIT_NO_WITNESS


class RankNotPinched(PipelineError):
    code = EXIT_RANK


class NoRationalPoint(PipelineError):
    code = EXIT_NO_POINT


@dataclass
class CountConfig:
    max_n: int | None = None
    long_run: bool = False
    workers: int | None = None
    orbits: bool = False
    cache: str | None = None
    cache_read_only: bool = False
    max_seconds: float | None = None

    def open_cache(self) -> CountCache | None:
        return CountCache(self.cache, read_only=self.cache_read_only) if self.cache else None

    def resolved_max_n(self, p: int) -> int:
        if self.max_n is not None:
            n = self.max_n
        else:
            n = LONG_RUN_MAX_N if self.long_run else DEFAULT_MAX_N[p]
        if p == 3 and n > 10 and not self.long_run:
            raise PipelineError("n > 10 over F_3 needs --long-run")
        return n


@dataclass
class PipelineRecord:
    """Everything produced by one run; ``timings`` is the only nondeterministic part."""

    seed: int | None = None
    primes: dict = field(default_factory=dict)  # "2", "3" -> stage dicts
    rank_one: bool | None = None
    lifted_fourfold: dict | None = None
    lifted_surface: dict | None = None
    fiber_conic: dict | None = None
    algebra: dict | None = None
    rational_points: list | None = None
    excluded_points: int | None = None
    verdict: dict | None = None
    timings: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {k: v for k, v in self.__dict__.items() if v is not None}

    @classmethod
    def from_json(cls, obj) -> PipelineRecord:
        known = {k: obj[k] for k in cls.__dataclass_fields__ if k in obj}
        return cls(**known)

    def without_timings(self) -> dict:
        out = self.to_json()
        out.pop("timings", None)
        for stage in out.get("primes", {}).values():
            stage.pop("timings", None)
        return out


# -- stages -------------------------------------------------------------------

def _monomials(deg: int):
    return [(a, b, deg - a - b) for a in range(deg, -1, -1) for b in range(deg - a, -1, -1)]


def random_bundle(p: int, rng: random.Random) -> QuadricBundleData:
    F = ext_field_create(p, 1)
    forms = {}
    for name in FORM_NAMES:
        terms = {}
        for e in _monomials(FORM_DEGREES[name]):
            c = rng.randrange(p)
            if c:
                terms[e] = F(c)
        forms[name] = MultiPoly(F, 3, terms, XYZ)
    return QuadricBundleData(**forms)


def _prime_stage(p, data: QuadricBundleData, seed=None, retries=0) -> dict:
    s = k3_from_fourfold(data)
    return {"prime": p, "seed": seed, "retries": retries, "fourfold": data.to_json(),
            "surface": s.to_json(), "fingerprint": surface_fingerprint(s), "status": "generated"}


def cmd_generate(p: int, seed: int, max_retries: int = 10**4) -> dict:
    """Random smooth fourfold over F_p with a smooth K3 surface."""
    if p not in (2, 3):
        raise PipelineError("the pipeline works over F_2 and F_3")
    rng = random.Random(seed)
    t0 = time.monotonic()
    for attempt in range(max_retries):
        data = random_bundle(p, rng)
        s = k3_from_fourfold(data)
        # cheap K3 test first; the fourfold check is the expensive one
        reason = k3_singularity_reason(s)
        if reason is not None:
            log.debug("attempt %d rejected: %s", attempt, reason)
            continue
        if not fourfold_smooth(data):
            log.debug("attempt %d rejected: singular fourfold", attempt)
            continue
        stage = _prime_stage(p, data, seed, attempt)
        stage["timings"] = {"generate": round(time.monotonic() - t0, 3)}
        log.info("F_%d: smooth data after %d rejections", p, attempt)
        return stage
    raise RetryCapExceeded(f"no smooth data over F_{p} after {max_retries} attempts")


def lower_bound_certificate(s: K3Surface) -> LatticeCertificate | None:
    if s.characteristic == 2:
        return find_char2_divisor(s)
    return find_tangent_conic(s)


def cmd_certify(stage: dict, config: CountConfig | None = None) -> dict:
    """Lower-bound witness, point counts, Frobenius polynomial and the upper bound.

    The returned stage has status "certified", "ambiguous" (counts too short to
    fix the sign of the functional equation) or "no-witness"."""
    config = config or CountConfig()
    stage = dict(stage)
    timings = dict(stage.get("timings", {}))
    s = K3Surface.from_json(stage["surface"])
    p = s.characteristic
    data = QuadricBundleData.from_json(stage["fourfold"])
    if k3_from_fourfold(data) != s:
        raise PipelineError("the surface does not match the fourfold")

    t0 = time.monotonic()
    cert = lower_bound_certificate(s)
    timings["lower_bound"] = round(time.monotonic() - t0, 3)
    if cert is None:
        stage.update(status="no-witness", timings=timings)
        return stage
    stage["certificate"] = cert.to_json()

    t0 = time.monotonic()
    cache = config.open_cache()
    budget = CountBudget(max_seconds=config.max_seconds)
    counts = {}
    for n in range(1, config.resolved_max_n(p) + 1):
        counts[n] = count_points(s, n, workers=config.workers, budget=budget,
                                 orbits=config.orbits and n > DEFAULT_MAX_N[p], cache=cache)
    cs = CountSeries(p, counts, surface_fingerprint(s))
    # counts beyond max_n that are already cached still help fix the sign
    n = max(counts) + 1
    while cache is not None and n <= LONG_RUN_MAX_N:
        N = cache.get(cs.fingerprint, p, n)
        if N is None:
            break
        cs.counts[n] = N
        n += 1
    stage["counts"] = cs.to_json()
    timings["counting"] = round(time.monotonic() - t0, 3)

    try:
        w = charpoly_from_counts(cs)
    except AmbiguousSign as exc:
        stage.update(status="ambiguous", reason=str(exc), timings=timings)
        return stage
    raw, adjusted = picard_upper_bound(w)
    found, _ = cyclotomic_factorization(w)
    stage["charpoly"] = w.to_json()
    stage["cyclotomic_factors"] = [list(mk) for mk in found]
    stage["upper_bound"] = {"raw": raw, "parity_adjusted": adjusted}
    stage.update(status="certified", timings=timings)
    return stage


def certified_stage(p: int, seed: int, config: CountConfig | None = None, max_rounds: int = 100) -> dict:
    """Loop generate -> certify until the reduction has a witness and upper bound 2.

    Round k uses the seed ``seed + k``; the returned stage records the round."""
    for k in range(max_rounds):
        stage = cmd_certify(cmd_generate(p, seed + k), config)
        if stage["status"] == "certified" and stage["upper_bound"]["parity_adjusted"] == 2:
            stage["round"] = k
            return stage
        log.info("F_%d seed %d: %s, trying the next seed", p, seed + k,
                 stage["status"] if stage["status"] != "certified" else
                 f"upper bound {stage['upper_bound']['parity_adjusted']}")
    raise RankNotPinched(f"no certified data over F_{p} in {max_rounds} rounds")


def _certified(stage: dict, p: int):
    if stage.get("status") != "certified":
        raise RankNotPinched(f"F_{p} data is not certified (status {stage.get('status')})")
    if int(stage["prime"]) != p:
        raise PipelineError(f"expected a stage over F_{p}")
    return LatticeCertificate.from_json(stage["certificate"]), int(stage["upper_bound"]["parity_adjusted"])


def cmd_brauer(lifted: QuadricBundleData) -> QuaternionAlgebra:
    sc = complete_squares(fiber_conic(lifted))
    return QuaternionAlgebra(sc.alpha, sc.beta)


def cmd_assemble(stage2: dict, stage3: dict, height: int = DEFAULT_HEIGHT, seed=None) -> PipelineRecord:
    cert2, ub2 = _certified(stage2, 2)
    cert3, ub3 = _certified(stage3, 3)
    rec = PipelineRecord(seed=seed, primes={"2": stage2, "3": stage3})
    rec.rank_one = rank_one_conclusion(cert2, cert3, ub2, ub3)
    if not rec.rank_one:
        raise RankNotPinched("the two reductions do not certify Picard rank one")
    t0 = time.monotonic()
    d2 = QuadricBundleData.from_json(stage2["fourfold"])
    d3 = QuadricBundleData.from_json(stage3["fourfold"])
    lifted = crt_lift(d2, d3)
    if lifted.reduce(2) != d2 or lifted.reduce(3) != d3:
        raise PipelineError("CRT lift does not reduce to the inputs")
    sQ = k3_from_fourfold(lifted)
    rec.lifted_fourfold = lifted.to_json()
    rec.lifted_fourfold["equation"] = fourfold_equation(lifted).to_str()
    rec.lifted_surface = sQ.to_json()
    rec.lifted_surface["branch_sextic"] = sQ.branch_sextic().to_str()
    conic = fiber_conic(lifted)
    rec.fiber_conic = {f"a{i}{j}": conic.coefficient(i - 1, j - 1).to_str()
                       for i in range(1, 4) for j in range(i, 4)}
    A = cmd_brauer(lifted)
    rec.algebra = A.to_json()
    rec.timings["lift"] = round(time.monotonic() - t0, 3)

    t0 = time.monotonic()
    points = search_rational_points(sQ, height)
    good, excluded = usable_points(A, points)
    rec.rational_points = [P.to_json() for P in points]
    rec.excluded_points = excluded
    rec.timings["point_search"] = round(time.monotonic() - t0, 3)
    if not good:
        raise NoRationalPoint(f"no usable rational point up to height {height} "
                              f"({len(points)} found, {excluded} excluded)")
    rec.verdict = verdict_for(sQ, A, good[0])
    return rec


def verdict_for(sQ: K3Surface, A: QuaternionAlgebra, P1: SurfacePoint) -> dict:
    target = HALF if local_invariant(A, P1, "inf") == ZERO else ZERO
    P2 = find_real_point(sQ, A, target)
    if P2 is None:
        P2 = SurfacePoint.real(sQ, *P1.xyz)
    return obstruction_verdict(A, P1, P2)


def cmd_verify(rec: PipelineRecord) -> dict:
    """Recompute the verdict from the algebra and the two points stored in a record."""
    if rec.verdict is None or rec.algebra is None:
        raise PipelineError("record has no verdict to verify")
    A = QuaternionAlgebra.from_json(rec.algebra)
    sQ = K3Surface.from_json(rec.lifted_surface)
    P1 = SurfacePoint.from_json(rec.verdict["rational_point"])
    P2 = SurfacePoint.from_json(rec.verdict["real_point"])
    for P in (P1, P2):
        if not P.on_surface(sQ):
            raise PipelineError(f"{P.xyz} is not on the surface")
    v = obstruction_verdict(A, P1, P2)
    v["matches_record"] = v == {k: rec.verdict[k] for k in v}
    return v


# -- bundled reference data ------------------------------------------------------

def fixture_record() -> dict:
    return json.loads(resources.files("k3brauer").joinpath("data/reference_record.json").read_text())


def fixture_count_cache() -> Path:
    return Path(str(resources.files("k3brauer").joinpath("data/reference_counts.json")))


# -- command line -------------------------------------------------------------------

def _read_json(path):
    if path == "fixture":
        return fixture_record()
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise PipelineError(f"cannot read {path}: {exc}") from exc


def _stage_from(obj, p=None):
    """A prime stage from a stage file or from a record holding several."""
    if "primes" in obj:
        if p is None:
            raise PipelineError("record holds several primes; pass --prime")
        return obj["primes"][str(p)]
    return obj


def _emit(obj, record_path=None):
    text = json.dumps(obj, indent=1, sort_keys=True)
    if record_path:
        Path(record_path).write_text(text + "\n")
    print(text)


def _count_config(args) -> CountConfig:
    cfg = CountConfig(max_n=args.max_n, long_run=args.long_run, workers=args.workers,
                      orbits=args.orbits, cache=args.cache, max_seconds=args.max_seconds)
    if args.input == "fixture" and not args.cache:
        # the bundled counts of the reference surfaces; never written to
        cfg.cache = str(fixture_count_cache())
        cfg.cache_read_only = True
    return cfg


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="k3brauer", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def counting_flags(sp):
        sp.add_argument("--max-n", type=int, default=None)
        sp.add_argument("--long-run", action="store_true", help="allow n = 11, 12 over F_3")
        sp.add_argument("--workers", type=int, default=None)
        sp.add_argument("--orbits", action="store_true",
                        help="sum over Frobenius orbits for n beyond the default range")
        sp.add_argument("--cache", default=None, help="count cache (JSON)")
        sp.add_argument("--max-seconds", type=float, default=None, help="per-count wall clock cap")

    g = sub.add_parser("generate", help="random smooth fourfold over F_p")
    g.add_argument("--prime", type=int, required=True, choices=(2, 3))
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--max-retries", type=int, default=10**4)
    g.add_argument("--record")

    c = sub.add_parser("certify", help="lower bound, counts, Frobenius polynomial, upper bound")
    c.add_argument("input", help="stage JSON, record JSON or 'fixture'")
    c.add_argument("--prime", type=int)
    counting_flags(c)
    c.add_argument("--record")

    a = sub.add_parser("assemble", help="CRT lift, quaternion algebra, points and verdict")
    a.add_argument("stage2")
    a.add_argument("stage3")
    a.add_argument("--height", type=int, default=DEFAULT_HEIGHT)
    a.add_argument("--seed", type=int, default=None)
    a.add_argument("--record")

    n = sub.add_parser("count", help="raw point counts of a surface")
    n.add_argument("input", help="stage JSON, record JSON or 'fixture'")
    n.add_argument("--prime", type=int)
    counting_flags(n)

    cp = sub.add_parser("charpoly", help="Frobenius polynomial and Picard bound from counts")
    cp.add_argument("counts", help="JSON with {p, counts}")

    b = sub.add_parser("brauer", help="quaternion algebra of a fourfold over Z")
    b.add_argument("input", help="record JSON or 'fixture'")

    v = sub.add_parser("verify", help="recompute the verdict stored in a record")
    v.add_argument("input")
    return ap


def _run(args) -> int:
    if args.command == "generate":
        _emit(cmd_generate(args.prime, args.seed, args.max_retries), args.record)
        return EXIT_OK
    if args.command == "certify":
        stage = cmd_certify(_stage_from(_read_json(args.input), args.prime), _count_config(args))
        _emit(stage, args.record)
        return {"certified": EXIT_OK, "ambiguous": EXIT_AMBIGUOUS, "no-witness": EXIT_NO_WITNESS}[stage["status"]]
    if args.command == "assemble":
        s2 = _stage_from(_read_json(args.stage2), 2)
        s3 = _stage_from(_read_json(args.stage3), 3)
        rec = cmd_assemble(s2, s3, args.height, args.seed)
        _emit(rec.to_json(), args.record)
        return EXIT_OK
    if args.command == "count":
        stage = _stage_from(_read_json(args.input), args.prime)
        s = K3Surface.from_json(stage["surface"])
        cfg = _count_config(args)
        cache = cfg.open_cache()
        p = s.characteristic
        counts = {n: count_points(s, n, workers=cfg.workers, orbits=cfg.orbits and n > DEFAULT_MAX_N[p],
                                  cache=cache, budget=CountBudget(max_seconds=cfg.max_seconds))
                  for n in range(1, cfg.resolved_max_n(p) + 1)}
        _emit(CountSeries(p, counts, surface_fingerprint(s)).to_json())
        return EXIT_OK
    if args.command == "charpoly":
        obj = _read_json(args.counts)
        if isinstance(obj.get("counts"), dict) and "p" in obj["counts"]:
            obj = obj["counts"]  # a certify stage
        cs = CountSeries.from_json(obj)
        try:
            w = charpoly_from_counts(cs)
        except AmbiguousSign as exc:
            _emit({"status": "ambiguous", "reason": str(exc)})
            return EXIT_AMBIGUOUS
        raw, adjusted = picard_upper_bound(w)
        _emit({"charpoly": w.to_json(), "upper_bound": {"raw": raw, "parity_adjusted": adjusted}})
        return EXIT_OK
    if args.command == "brauer":
        obj = _read_json(args.input)
        if "lifted_fourfold" in obj:
            lifted = QuadricBundleData.from_json(obj["lifted_fourfold"])
        else:
            lifted = crt_lift(QuadricBundleData.from_json(_stage_from(obj, 2)["fourfold"]),
                              QuadricBundleData.from_json(_stage_from(obj, 3)["fourfold"]))
        _emit(cmd_brauer(lifted).to_json())
        return EXIT_OK
    if args.command == "verify":
        v = cmd_verify(PipelineRecord.from_json(_read_json(args.input)))
        _emit(v)
        return EXIT_OK if v["matches_record"] else EXIT_INPUT
    raise PipelineError(f"unknown command {args.command}")  # pragma: no cover


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors this way
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return _run(args)
    except PipelineError as exc:
        log.error("%s", exc)
        return exc.code
    except BudgetExceeded as exc:
        log.error("%s", exc)
        return EXIT_BUDGET
    except ReciprocityFailure as exc:
        log.error("%s", exc)
        return EXIT_RECIPROCITY
    except (CountError, PolyError, DegenerateConic, KeyError, ValueError) as exc:
        log.error("%s: %s", type(exc).__name__, exc)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
