"""Seeded search for a matrix separating two classes.

Usage: python scripts/search_witness.py "p-HEP & !HEP" --poly "t^3-t^2" --seed 2024
"""

import argparse
import time
import warnings

from epkit.classes import CharacterizationSkipped
from epkit.parser import parse_polynomial
from epkit.witness import SeparationQuery, search_separation


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("query")
    ap.add_argument("--poly", default=None)
    ap.add_argument("--dims", default="3,4")
    ap.add_argument("--budget", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--n", type=int, default=3)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    warnings.simplefilter("ignore", CharacterizationSkipped)

    dims = tuple(int(d) for d in args.dims.split(","))
    p = parse_polynomial(args.poly) if args.poly else None
    q = SeparationQuery(args.query, dims, budget=args.budget, seed=args.seed, n=args.n)
    t0 = time.perf_counter()
    w = search_separation(q, p, workers=args.workers)
    elapsed = time.perf_counter() - t0
    if w is None:
        print(f"not found within {args.budget} candidates ({elapsed:.2f} s)")
        return 0
    print(f"found candidate {w.index} ({w.source}) in {elapsed:.2f} s")
    print(w.matrix)
    for cls, verdict in w.report.verdicts().items():
        print(f"  {cls:<12} {verdict}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
