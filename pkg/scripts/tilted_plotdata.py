"""Both monotones along the tilted quantum family, next to their closed-form curves."""

import argparse
import math

from ccbox.catalog import tilted, tilted_m_chsh_formula, tilted_m_npr_formula
from ccbox.monotones import m_chsh_closed, m_npr_closed


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--grid", type=int, default=16)
    args = p.parse_args()
    print("theta,M_CHSH,M_CHSH_formula,M_NPR,M_NPR_formula")
    for i in range(args.grid):
        th = math.pi / 2 * (i + 1) / args.grid
        b = tilted(th)
        print(f"{th:.6f},{float(m_chsh_closed(b)):.12f},{tilted_m_chsh_formula(th):.12f},"
              f"{float(m_npr_closed(b)):.12f},{2 * tilted_m_npr_formula(th) + 2:.12f}")


if __name__ == "__main__":
    main()
