"""Cross-check the deduction engine against the independent unifier.

Generates seeded random term pairs, compares unifiability verdicts with a
from-scratch Robinson implementation, and verifies every separation
certificate both symbolically and (within the size gate) by brute force.
Unlike `termsep corpus` this also reports wall-clock time and the failure
case histogram, which is useful when profiling larger runs.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from termsep.corpus import run_corpus
from termsep.gf2 import DEFAULT_BRUTE_LIMIT


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--count", type=int, default=1000)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--limit", type=int, default=DEFAULT_BRUTE_LIMIT,
                        help="max assignments for brute-force verification")
    parser.add_argument("--tamper", action="store_true",
                        help="corrupt certificates first; the run must fail")
    args = parser.parse_args()

    report = run_corpus(args.count, args.seed, brute_limit=args.limit, tamper=args.tamper)
    print(f"pairs: {report.count} (seed {report.seed}), {report.elapsed:.2f}s")
    print(f"unifiable: {report.unifiable}, separated: {report.separated}")
    for case, n in sorted(report.cases.items()):
        print(f"  {case}: {n}")
    print(f"brute-force: {report.brute_checked} checked, {report.brute_skipped} skipped")
    print(f"verdict mismatches: {report.verdict_mismatches}")
    print(f"mgu mismatches: {report.mgu_mismatches}")
    print(f"substitution failures: {report.substitution_failures}")
    print(f"verification failures: {report.verification_failures}")
    for line in report.failures:
        print(f"  failure: {line}")
    print("CLEAN" if report.clean else "FAILURES DETECTED")
    return 0 if report.clean else 1


if __name__ == "__main__":
    sys.exit(main())
