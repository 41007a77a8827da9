"""Uniform set partitions: the engine behind the side sets.

The sampler draws a partition of m labelled elements uniformly over all
B_m of them.  Exact moments of the block count are available from Bell
number ratios, and for small m the full distribution can be enumerated.
The tail report shows how fast large-deviation bounds on the maximum
block size kick in.
"""

from collections import Counter

import numpy as np

from perfectgen import partitions


def main() -> None:
    m = 4
    rng = np.random.default_rng(0)
    trials = 50_000
    counts = Counter(partitions.sample_uniform(m, rng) for _ in range(trials))
    everything = partitions.all_partitions(m)
    print(f"uniform partitions of {m} elements ({len(everything)} in total)")
    for p in sorted(everything, key=lambda p: (len(p.blocks), p.blocks)):
        blocks = " | ".join("".join(str(x) for x in sorted(b)) for b in p.blocks)
        print(f"  {blocks:12s} {counts.get(p, 0) / trials:.4f} (expect {1 / 15:.4f})")

    print("\nexact block-count moments (mean, variance)")
    for m in (3, 10, 50):
        mean, var = partitions.harper_moments(m)
        print(f"  m={m:3d}: ({mean:.4f}, {var:.4f})")

    print("\nmaximum block size at m=50, 2000 draws")
    rng = np.random.default_rng(1)
    biggest = Counter(
        max(len(b) for b in partitions.sample_uniform(50, rng).blocks)
        for _ in range(2000)
    )
    for size in sorted(biggest):
        print(f"  max block {size:2d}: {biggest[size] / 2000:.4f}")

    print("\ntail bounds on one block size at m=50")
    for line in partitions.tail_reports(50):
        print(f"  {line.kind:12s} t={line.t:3d} log2 bound={line.log2_bound:9.3f}")


if __name__ == "__main__":
    main()
