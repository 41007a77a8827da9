"""Draw perfect graphs and look at the pieces they are assembled from.

Every sample is a pair (graph, arrangement): the arrangement records the
sign, the central clique, and the partition of the remaining vertices
into side sets.  The central clique size follows the distribution built
by lndist.build, so we first look at that distribution on its own.
"""

import numpy as np

from perfectgen import lndist
from perfectgen.generator import gen
from perfectgen.graphcore import bit_list, graph6_encode


def main() -> None:
    n = 60
    d = lndist.build(n)
    print(f"central size distribution at n={n}")
    print(f"  target mean mu = {d.mu:.4f}, exact mean = {lndist.mean(d):.4f}")
    mode = int(np.argmax(d.pmf))
    for k in range(mode - 3, mode + 4):
        bar = "#" * int(60 * d.pmf[k])
        print(f"  P(K = {k:2d}) = {d.pmf[k]:.4f} {bar}")

    rng = np.random.default_rng(1)
    print(f"\nfive draws at n={n}")
    for _ in range(5):
        g, arr = gen(n, rng)
        side_sizes = sorted((p.bit_count() for p in arr.side_parts), reverse=True)
        print(
            f"  sign={arr.sign:+d} edges={g.edge_count():5d} central={arr.central.bit_count():2d}"
            f" side parts={len(arr.side_parts):2d} largest sides={side_sizes[:5]}"
        )

    g, arr = gen(10, np.random.default_rng(2))
    print("\none small draw in full")
    print(f"  graph6 = {graph6_encode(g).decode()}")
    print(f"  sign   = {arr.sign:+d}")
    print(f"  central = {bit_list(arr.central)}")
    for part in arr.side_parts:
        print(f"  side    = {bit_list(part)}")


if __name__ == "__main__":
    main()
