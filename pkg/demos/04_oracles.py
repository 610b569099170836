"""
Independent checks: unfolding and grid Dijkstra
===============================================

Two squares glued along an edge (elements a, b, c with b and c
inconsistent) can be unfolded into a 2 x 1 rectangle, so the distance is
plain Euclidean.  A grid graph on every cube gives an upper bound with a
known stretch factor, usable on any small complex.
"""
import random

from cat0cube import Pip, make_point, random_pip, run
from cat0cube.complex import all_cells
from cat0cube.oracle import grid_distance, unfold_two_cells

book = Pip(["a", "b", "c"], [], [("b", "c")])
x = make_point(book, {"a": 0.0, "b": 1.0})
y = make_point(book, {"a": 1.0, "c": 1.0})
print("unfold  %.10f" % unfold_two_cells(book, x, y))
print("halving %.10f" % run(book, x, y, 1e-3).length)
g = grid_distance(book, x, y, h=0.02)
print("grid    %.10f  (stretch bound %.4f)" % (g.value, g.stretch_bound))

# a random complex with squares only
p = random_pip(5, 0.4, seed=3, max_dim=2)
print(p)
rng = random.Random(0)
cells = all_cells(p)
pts = []
for _ in range(2):
    c = rng.choice(cells)
    z = [0.0] * len(p)
    for i in c.I:
        z[i] = 1.0
    for i in c.M:
        z[i] = rng.randint(0, 50) / 50
    pts.append(tuple(z))
res = run(p, pts[0], pts[1], 1e-3)
g = grid_distance(p, pts[0], pts[1])
print("halving %.6f   grid %.6f   ratio %.4f" % (res.length, g.value, g.value / res.length))
