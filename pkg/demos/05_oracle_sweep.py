#!/usr/bin/env python3
"""Prove the table path against the direct form, the blunt way.

The whole point of the reformulated datapath is that it computes the same
inner product as a plain multiply-accumulate. For small word sizes the
claim can be settled by brute force: every possible delay-line state. At
production sizes it is sampled randomly. Both run here.
"""

import random
import time

from dafir import (
    CoefficientSet,
    FixedFormat,
    PpgMode,
    all_windows,
    partition_taps,
    verify_windows,
)


def main() -> None:
    rng = random.Random(2024)

    print("exhaustive: 4 taps x 4-bit samples = 65,536 delay-line states")
    coeffs = CoefficientSet.from_integers(
        [rng.randint(-128, 127) for _ in range(4)], FixedFormat(8)
    )
    for group_size, mode in ((4, PpgMode.STORED), (2, PpgMode.STORED), (2, PpgMode.MUX)):
        started = time.perf_counter()
        checked, mismatches = verify_windows(
            coeffs,
            partition_taps(4, group_size),
            mode,
            input_width=4,
            windows=all_windows(4, 4),
        )
        status = "ok" if not mismatches else f"FAILED at {mismatches[0]}"
        print(
            f"  M={group_size} {mode.value:6s}: {checked}/{checked} {status} "
            f"({time.perf_counter() - started:.2f}s)"
        )

    print("\nrandomized: 8 taps x 16-bit words, 10,000 windows")
    coeffs = CoefficientSet.from_integers(
        [rng.randint(-32768, 32767) for _ in range(8)], FixedFormat(16)
    )
    windows = [
        tuple(rng.randint(-32768, 32767) for _ in range(8)) for _ in range(10000)
    ]
    for mode in (PpgMode.STORED, PpgMode.MUX):
        checked, mismatches = verify_windows(
            coeffs, partition_taps(8, 2), mode, input_width=16, windows=windows
        )
        status = "ok" if not mismatches else f"FAILED at {mismatches[0]}"
        print(f"  M=2 {mode.value:6s}: {checked}/{checked} {status}")

    print("\nthe same sweeps are available from the command line:")
    print("  dafir verify --design d.json --exhaustive")
    print("  dafir verify --design d.json --random 10000 --seed 7")


if __name__ == "__main__":
    main()
