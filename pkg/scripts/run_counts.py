"""Count points on the reference K3 surfaces and store them in a count cache.

    python scripts/run_counts.py --prime 3 --max-n 12 --orbits-from 11 \
        --cache tests/data/count_cache.json
"""

import argparse
import logging
import time

from k3brauer.counting import CountCache, count_points
from k3brauer.fixtures import reference_surface


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--prime", type=int, required=True, choices=(2, 3))
    ap.add_argument("--min-n", type=int, default=1)
    ap.add_argument("--max-n", type=int, required=True)
    ap.add_argument("--orbits-from", type=int, default=None,
                    help="use Frobenius-orbit summation for n >= this value")
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--cache", required=True)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    s = reference_surface(args.prime)
    cache = CountCache(args.cache)
    for n in range(args.min_n, args.max_n + 1):
        orbits = args.orbits_from is not None and n >= args.orbits_from
        t0 = time.monotonic()
        N = count_points(s, n, workers=args.workers, orbits=orbits, cache=cache)
        print(f"p={args.prime} n={n} N={N} orbits={orbits} {time.monotonic() - t0:.1f}s", flush=True)


if __name__ == "__main__":
    main()
