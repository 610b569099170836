"""
Watching a bad chain straighten out
===================================

Start from a zigzag of 11 points across the unit square, far longer than
the diagonal, and apply halving sweeps.  After each sweep we compare the
chain with the reference chain on the true geodesic; the deviation must
stay under the envelope (5/4) l e^(-j/n^2) + 3 n^2 delta.
"""
import math

from cat0cube import Pip
from cat0cube.driver import chain_length, deviation, reference_chain, refine, sweep_count

p = Pip(["a", "b"])
n = 10
eps = 1e-3
chain = [(0.0, 0.0)] + [(i / n, float(i % 2)) for i in range(1, n)] + [(1.0, 1.0)]
ell = chain_length(p, chain)
delta = eps / (16 * n ** 3)
k = sweep_count(n, ell, eps)
print("initial length %.4f, sweeps scheduled %d" % (ell, k))

rows = []


def watch(j, c):
    if j in (0, 1, 2, 5, 10, 20, 50, 100, 200, 500) or j == k:
        rows.append((j, chain_length(p, c), deviation(p, c, reference_chain(p, c))))


refine(p, chain, eps, delta=delta, sweeps=k, callback=watch)

print("%6s %12s %12s %12s" % ("sweep", "length", "deviation", "envelope"))
for j, length, dev in rows:
    env = 1.25 * ell * math.exp(-j / n ** 2) + 3 * n * n * delta
    print("%6d %12.8f %12.3e %12.3e" % (j, length, dev, env))
