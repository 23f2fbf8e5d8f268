#!/usr/bin/env python3
"""Generate a table of nontrivial Riemann zeta zero ordinates.

Writes one ordinate per line, ascending, with a fixed number of decimal
places.  Restartable: progress is kept in a work file (one "n value" pair
per line) so an interrupted run resumes where it left off.

The output file is shipped as package data; regenerating it from scratch
takes on the order of half an hour single-core.
"""

import argparse
import os
import time

import mpmath


def load_progress(work_path):
    done = {}
    if os.path.exists(work_path):
        with open(work_path) as fh:
            for line in fh:
                parts = line.split()
                if len(parts) == 2:
                    done[int(parts[0])] = parts[1]
    return done


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=5000)
    ap.add_argument("--dps", type=int, default=20, help="working precision (decimal digits)")
    ap.add_argument("--decimals", type=int, default=12, help="decimal places written per ordinate")
    ap.add_argument("--out", default="src/oscillax/data/zeros5000.txt")
    ap.add_argument("--work", default="/tmp/zeros_work.txt")
    args = ap.parse_args()

    mpmath.mp.dps = args.dps
    done = load_progress(args.work)
    t_start = time.time()
    with open(args.work, "a") as wf:
        for n in range(1, args.count + 1):
            if n in done:
                continue
            z = mpmath.zetazero(n)
            s = mpmath.nstr(z.imag, args.decimals + 6, strip_zeros=False)
            # round to fixed decimals via mpf -> python float-free formatting
            val = mpmath.mpf(z.imag)
            q = mpmath.mpf(10) ** (-args.decimals)
            s = mpmath.nstr(val, mpmath.mp.dps, strip_zeros=False)
            head, _, tail = s.partition(".")
            tail = (tail + "0" * args.decimals)[: args.decimals]
            wf.write(f"{n} {head}.{tail}\n")
            wf.flush()
            done[n] = f"{head}.{tail}"
            if n % 250 == 0:
                rate = (time.time() - t_start) / max(1, n - len([k for k in done if k <= 0]))
                print(f"{n}/{args.count} done", flush=True)

    rows = [done[n] for n in range(1, args.count + 1)]
    # sanity: ascending
    prev = 0.0
    for r in rows:
        v = float(r)
        assert v > prev, f"ordering violation near {r}"
        prev = v
    os.makedirs(os.path.dirname(args.out), exist_ok=True)
    with open(args.out, "w") as fh:
        fh.write("# Nontrivial Riemann zeta zero ordinates gamma_n, ascending, one per line.\n")
        fh.write(f"# count={args.count} decimals={args.decimals}\n")
        for r in rows:
            fh.write(r + "\n")
    print(f"wrote {len(rows)} ordinates to {args.out}")


if __name__ == "__main__":
    main()
