"""For each Z/n, tabulate which modules over it fail the four properties that
the serial-ring criterion ties to J(Z/n)^2 = 0."""
import argparse

from csrickart.core import zn
from csrickart.properties import evaluate
from csrickart.theorems import SERIAL_PROPERTIES, enumerate_modules_over_zn, j_squared_zero


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rings", type=int, nargs="+", default=list(range(2, 17)))
    ap.add_argument("--max-order", type=int, default=64)
    args = ap.parse_args()

    print(f"{'ring':>6} {'J^2=0':>6} {'modules':>8}  " + "  ".join(f"{p:>16}" for p in SERIAL_PROPERTIES))
    for n in args.rings:
        mods = list(enumerate_modules_over_zn(n, args.max_order))
        fails = [sum(not evaluate(p, M) for M in mods) for p in SERIAL_PROPERTIES]
        row = "  ".join(f"{f:>16}" for f in fails)
        print(f"{'Z/' + str(n):>6} {str(j_squared_zero(zn(n))):>6} {len(mods):>8}  {row}")


if __name__ == "__main__":
    main()
