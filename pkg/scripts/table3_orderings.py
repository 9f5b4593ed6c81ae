"""Relation matrix of the boundary mixtures 1/2 L_i + 1/2 C(1/2) and their monotone values."""

from ccbox.catalog import table3_mixture
from ccbox.monotones import m_chsh_closed, m_npr_closed
from ccbox.ordering import classify_matrix
from ccbox.scalar import fmt


def main():
    boxes = [table3_mixture(i) for i in (1, 2, 3)]
    for i, b in enumerate(boxes, 1):
        print(f"mix{i}: M_CHSH = {fmt(m_chsh_closed(b))}, M_NPR = {fmt(m_npr_closed(b))}")
    M = classify_matrix(boxes)
    print()
    print("        " + "".join(f"{'mix' + str(j):>16}" for j in (1, 2, 3)))
    for i, row in enumerate(M, 1):
        print(f"mix{i:<5}" + "".join(f"{r.value:>16}" for r in row))


if __name__ == "__main__":
    main()
