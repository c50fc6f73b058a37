"""Run every theorem over its default instance stream and print one line each."""
import argparse
import time

from csrickart.theorems import THEOREMS, verify_theorem


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-order", type=int, help="override every stream bound")
    ap.add_argument("theorems", nargs="*", default=list(THEOREMS))
    args = ap.parse_args()

    start = time.perf_counter()
    failed = 0
    for th in args.theorems:
        res = verify_theorem(th, args.max_order)
        print(res.summary())
        for inst, why in res.violations[:5]:
            print(f"    violation at {inst}: {why}")
        for note in res.notes[:5]:
            print(f"    {note}")
        failed += not res.passed
    print(f"{len(args.theorems) - failed}/{len(args.theorems)} passed in {time.perf_counter() - start:.1f}s")
    raise SystemExit(1 if failed else 0)


if __name__ == "__main__":
    main()
