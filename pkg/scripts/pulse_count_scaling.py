#!/usr/bin/env python3
"""Mean broadcast pulses per Clifford round versus qubit count.

Exact sweeps for small n, Monte-Carlo estimates beyond; writes a CSV with
one row per n.  The sampled estimates converge to the five-pulse ceiling.

    python scripts/pulse_count_scaling.py --samples 20000 -o scaling.csv
    python scripts/pulse_count_scaling.py --exact-max 5   # includes the n=5 sweep
"""

import argparse
import sys
import time

from cliffcast.compiler import mean_np_exact, mean_np_sampled


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--exact-max", type=int, default=4, choices=(1, 2, 3, 4, 5))
    ap.add_argument("--sampled-min", type=int, default=5)
    ap.add_argument("--sampled-max", type=int, default=10)
    ap.add_argument("--samples", type=int, default=20_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("-o", "--output", default=None)
    args = ap.parse_args(argv)

    rows = ["n,mode,mean_np,stderr,samples,runtime_s"]
    for n in range(1, args.exact_max + 1):
        t0 = time.time()
        st = mean_np_exact(n)
        rows.append(f"{n},exact,{st.mean_np:.9g},0,{st.samples},{time.time()-t0:.3f}")
        print(f"n={n} exact: {st.mean_np:.6f}", file=sys.stderr)
    for n in range(args.sampled_min, args.sampled_max + 1):
        t0 = time.time()
        st = mean_np_sampled(n, args.samples, args.seed + n)
        rows.append(
            f"{n},sampled,{st.mean_np:.9g},{st.stderr:.3g},{st.samples},"
            f"{time.time()-t0:.3f}"
        )
        print(f"n={n} sampled: {st.mean_np:.4f} +- {st.stderr:.4f}", file=sys.stderr)
    text = "\n".join(rows) + "\n"
    if args.output:
        with open(args.output, "w", newline="") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
