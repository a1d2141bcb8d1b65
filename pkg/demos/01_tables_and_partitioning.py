#!/usr/bin/env python3
"""How table-driven inner products trade memory for structure.

A K-tap filter evaluated by table lookup wants one entry per subset of
taps: 2^K entries. Splitting the taps into groups of M shrinks that to
ceil(K/M) tables of 2^M entries each, at the price of an adder tree that
sums the group outputs. This script builds the tables for a small filter
and prints the storage for a few groupings.
"""

from dafir import (
    CoefficientSet,
    FixedFormat,
    build_lut,
    memory_locations,
    partition_taps,
)


def main() -> None:
    fmt = FixedFormat(8)
    coeffs = CoefficientSet.from_integers([3, 5, -7, 11], fmt)
    print(f"coefficients: {list(coeffs.values)} ({fmt.width}-bit)\n")

    print("one table per group, entry = sum of the coefficients its address selects")
    plan = partition_taps(len(coeffs), 2)
    for group in plan.groups:
        lut = build_lut(coeffs, group)
        print(f"  group {group}:")
        for address, entry in enumerate(lut.entries):
            bits = format(address, f"0{plan.group_size}b")
            print(f"    address {bits} -> {entry:4d}")
    print()

    print("storage needed as the grouping changes (4 taps):")
    print("  M (taps/group)  groups  table entries")
    for group_size in (4, 2, 1):
        plan = partition_taps(4, group_size)
        print(
            f"  {group_size:14d}  {plan.num_groups:6d}  "
            f"{memory_locations(plan):8d}   ({plan.num_groups} x 2^{group_size})"
        )
    print()
    print("grouping in pairs halves the storage of the single big table;")
    print("the outputs still sum to the same inner product every cycle.")


if __name__ == "__main__":
    main()
