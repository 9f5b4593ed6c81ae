"""Run the acceptance criteria and print one PASS/FAIL line each.

    python3 scripts/run_acceptance.py            # all criteria, full samples
    python3 scripts/run_acceptance.py --quick 5 7
"""

import argparse
import sys
import time

from ccbox.verify import CRITERIA, VerifyConfig


def main() -> int:
    p = argparse.ArgumentParser()
    p.add_argument("numbers", nargs="*", type=int, default=sorted(CRITERIA))
    p.add_argument("--quick", action="store_true")
    p.add_argument("--verbose", "-v", action="store_true")
    args = p.parse_args()
    cfg = VerifyConfig.quick() if args.quick else VerifyConfig()
    ok = True
    for n in args.numbers:
        t0 = time.perf_counter()
        cr = CRITERIA[n](cfg)
        print(f"{cr.line()}  [{time.perf_counter() - t0:.1f}s]", flush=True)
        if args.verbose or not cr.passed:
            for c in cr.checks:
                print(f"    {'ok ' if c.passed else 'BAD'} {c.name}: {c.detail}")
        ok &= cr.passed
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
