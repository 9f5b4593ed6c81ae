"""Acceptance criteria 1-11 at full sample sizes.

Each criterion prints one PASS/FAIL line (collected into the pytest terminal
summary).  Run directly with ``python tests/test_acceptance.py`` for the same
lines without pytest.
"""

import sys
import time

import pytest

from ccbox.verify import CRITERIA, VerifyConfig

CONFIG = VerifyConfig()
RESULTS: list[str] = []


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    t0 = time.perf_counter()
    cr = CRITERIA[number](CONFIG)
    line = f"{cr.line()}  [{time.perf_counter() - t0:.1f}s]"
    RESULTS.append(line)
    print(line)
    details = "\n".join(f"  {'ok ' if c.passed else 'BAD'} {c.name}: {c.detail}" for c in cr.checks)
    assert cr.passed, f"{line}\n{details}"


if __name__ == "__main__":
    ok = True
    for n in sorted(CRITERIA):
        cr = CRITERIA[n](CONFIG)
        print(cr.line(), flush=True)
        ok &= cr.passed
    sys.exit(0 if ok else 1)
