"""Cross-check every characterization and run the implication audit on a
seeded corpus of (T, p) pairs.

Usage: python scripts/consensus_sweep.py [--count 500] [--seed 20261015]
"""

import argparse
import time
import warnings
from collections import Counter

from epkit.audit import implication_audit
from epkit.blockrep import rep_criterion
from epkit.classes import CharacterizationSkipped, is_hypo_EP, is_p_EP, is_p_hypo_EP
from epkit.witness import consensus_corpus


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=500)
    ap.add_argument("--seed", type=int, default=20261015)
    ap.add_argument("--n", type=int, default=3, help="largest power for the n-class rows")
    ap.add_argument("--no-audit", action="store_true")
    args = ap.parse_args(argv)
    warnings.simplefilter("ignore", CharacterizationSkipped)

    t0 = time.perf_counter()
    corpus = consensus_corpus(args.count, args.seed)
    print(f"corpus: {len(corpus)} pairs in {time.perf_counter() - t0:.2f} s")

    t0 = time.perf_counter()
    tally, bad = Counter(), []
    for i, (T, p) in enumerate(corpus):
        v, e, rc = is_p_hypo_EP(T, p), is_p_EP(T, p), rep_criterion(T, p, strict=False)
        tally["p-HEP"] += v.holds
        tally["p-EP"] += e.holds
        tally["HEP"] += is_hypo_EP(T).holds
        if not (v.consensus and e.consensus and rc.agree and rc.holds == v.holds):
            bad.append(i)
    print(f"consensus: {len(bad)} disagreements in {time.perf_counter() - t0:.2f} s; {dict(tally)}")
    if bad:
        print(f"  first disagreeing indices: {bad[:20]}")

    if not args.no_audit:
        t0 = time.perf_counter()
        statuses, violations = Counter(), []
        for i, (T, p) in enumerate(corpus):
            r = implication_audit(T, p, n=args.n)
            statuses.update(row.status for row in r.rows)
            if not r.ok:
                violations.append((i, r.violation.name))
        print(f"audit: {len(violations)} violations in {time.perf_counter() - t0:.2f} s; {dict(statuses)}")
        for i, name in violations[:20]:
            print(f"  pair {i}: {name}")
        bad += violations
    return 1 if bad else 0


if __name__ == "__main__":
    raise SystemExit(main())
