"""Build the bundled reference data: the count cache of the two reference
surfaces and the full pipeline record of the reference fourfolds.

    python scripts/build_fixture.py --merge /path/to/longrun_cache.json

Counts already present in the --merge caches (for example N_11, N_12 over F_3
from scripts/run_counts.py) are copied, everything else is counted here.
"""

import argparse
import json
import logging
from pathlib import Path

from k3brauer.cli import CountConfig, _prime_stage, cmd_assemble, cmd_certify
from k3brauer.counting import CountCache, count_points, surface_fingerprint
from k3brauer.fixtures import reference_bundle
from k3brauer.geometry import k3_from_fourfold

DATA = Path(__file__).resolve().parents[1] / "src" / "k3brauer" / "data"
MAX_N = 12


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--merge", action="append", default=[], help="count cache to copy counts from")
    ap.add_argument("--out-dir", default=str(DATA))
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    counts_path = out / "reference_counts.json"
    if counts_path.exists():
        counts_path.unlink()
    cache = CountCache(counts_path)
    sources = [CountCache(p) for p in args.merge]

    stages = {}
    for p in (2, 3):
        data = reference_bundle(p)
        s = k3_from_fourfold(data)
        fp = surface_fingerprint(s)
        for n in range(1, MAX_N + 1):
            src = next((c for c in sources if c.get(fp, p, n) is not None), None)
            if src is not None:
                e = next(e for e in src.entries if e["fingerprint"] == fp and e["p"] == p and e["n"] == n)
                cache.put(fp, p, n, e["N"], e["wall_seconds"])
            elif p == 2 or n <= 10:
                count_points(s, n, workers=args.workers, cache=cache)
            else:
                raise SystemExit(f"N_{n} over F_3 missing; run scripts/run_counts.py first")
        cfg = CountConfig(cache=str(counts_path), cache_read_only=True)
        stages[str(p)] = cmd_certify(_prime_stage(p, data), cfg)
        logging.info("F_%d: %s", p, stages[str(p)]["status"])

    rec = cmd_assemble(stages["2"], stages["3"])
    (out / "reference_record.json").write_text(json.dumps(rec.to_json(), indent=1, sort_keys=True) + "\n")
    print(rec.verdict["verdict"])


if __name__ == "__main__":
    main()
