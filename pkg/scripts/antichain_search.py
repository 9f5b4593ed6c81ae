"""Search the saturating-anchor midpoints for a large antichain at fixed (alpha, gamma).

Every anchor is the midpoint of two deterministic boxes with CHSH_0 = 2; all the
resulting family points share both monotone values.  A greedy pass keeps points
incomparable to everything kept so far.
"""

import argparse
import itertools
from fractions import Fraction as F

from ccbox.analysis import family_point, saturating_deterministic_boxes
from ccbox.box import mix
from ccbox.ordering import Relation, classify


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--alpha", type=F, default=F(1, 2))
    p.add_argument("--gamma", type=F, default=F(1, 2))
    args = p.parse_args()
    dets = saturating_deterministic_boxes()
    kept = []
    for i, j in itertools.combinations(range(len(dets)), 2):
        box = family_point(args.alpha, args.gamma, mix([dets[i], dets[j]], [F(1, 2), F(1, 2)]))
        if all(classify(box, b) is Relation.INCOMPARABLE for _, b in kept):
            kept.append(((i, j), box))
    print(f"antichain of size {len(kept)} at alpha={args.alpha}, gamma={args.gamma}")
    for pair, _ in kept:
        print(f"  anchor = midpoint of saturating boxes {pair}")


if __name__ == "__main__":
    main()
