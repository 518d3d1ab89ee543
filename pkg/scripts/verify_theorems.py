#!/usr/bin/env python3
"""Desk-scale theorem verification: enumerate both families to the usual bounds.

Roughly two minutes per run; prints one summary line per family and exits
nonzero on any mismatch.
"""

import argparse
import sys
import time

from pisotlab.cli import run_enumerate
from pisotlab.intmat import Family


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fs3-len", type=int, default=8)
    parser.add_argument("--fs4-len", type=int, default=6)
    parser.add_argument("--brun-len", type=int, default=8)
    parser.add_argument("--threads", type=int, default=1)
    args = parser.parse_args()

    runs = [
        (Family.FS, 3, args.fs3_len),
        (Family.FS, 4, args.fs4_len),
        (Family.BRUN, 3, args.brun_len),
    ]
    failures = 0
    for family, dim, max_len in runs:
        start = time.monotonic()
        payload, code = run_enumerate(family, dim, max_len, threads=args.threads)
        elapsed = time.monotonic() - start
        summary = payload.get("summary", {})
        print(
            f"{family.value} d={dim} max_len={max_len}: "
            f"{summary.get('words_checked', '?')} words, "
            f"{summary.get('mismatches', '?')} mismatches  [{elapsed:.1f}s]"
        )
        failures += code
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
