"""Random D_n quivers: diagram-rule canonical decomposition vs the generic-rank computation."""
import argparse
import random
import time

from quiverbf.candecomp import dn_canonical, generic_decomposition
from quiverbf.quiver import Quiver

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("--count", type=int, default=100)
ap.add_argument("--seed", type=int, default=7)
ap.add_argument("--max-n", type=int, default=8)
ap.add_argument("--max-entry", type=int, default=9)
args = ap.parse_args()

rng = random.Random(args.seed)
t = time.time()
bad = 0
for _ in range(args.count):
    n = rng.randint(4, args.max_n)
    edges = [(1, 2)] + [(i, i + 1) for i in range(2, n - 1)] + [(2, n)]
    edges = [(a, b) if rng.random() < 0.5 else (b, a) for a, b in edges]
    Q = Quiver.from_edges(range(1, n + 1), edges)
    beta = tuple(rng.randint(0, args.max_entry) for _ in range(n))
    a = dn_canonical(Q, beta, cross_check=False).decomposition
    g = generic_decomposition(Q, beta)
    if not a.same_as(g):
        bad += 1
        print("mismatch", edges, beta, a.text(), "vs", g.text())
print(f"{args.count} instances, {bad} mismatches, {time.time() - t:.1f}s")
