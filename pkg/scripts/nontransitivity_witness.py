"""Print the three family points whose incomparability relation is not transitive."""

from ccbox.analysis import WITNESS_COORDS, non_transitivity_witness, witness_mixing_weight
from ccbox.monotones import m_chsh_closed, m_npr_closed
from ccbox.scalar import fmt


def main():
    w = non_transitivity_witness(verify=True)
    for name, (a, g), b in zip(("R1", "R2", "R3"), WITNESS_COORDS, w):
        print(f"{name}: alpha={a}, gamma={g}, M_CHSH={fmt(m_chsh_closed(b))}, M_NPR={fmt(m_npr_closed(b))}")
    print("R1 | R2 incomparable, R3 | R2 incomparable, R1 strictly above R3")
    print(f"R3 = {witness_mixing_weight()} R1 + (1 - {witness_mixing_weight()}) anchor")


if __name__ == "__main__":
    main()
