"""
Geodesics in the two smallest interesting complexes
====================================================

A PIP on two incomparable elements is a filled unit square.  Declaring
the two elements inconsistent deletes the top corner, leaving two edges
glued at the origin.  The same pair of endpoints is 1.414 apart in the
first complex and 2 apart in the second.
"""
import math

from cat0cube import Pip, make_point, run

square = Pip(["a", "b"])
cone = Pip(["a", "b"], covers=[], inconsistent=[("a", "b")])

# square: from the origin to the far corner
res = run(square, make_point(square), make_point(square, {"a": 1, "b": 1}), eps=1e-3)
print("square   length %.12f   (sqrt 2 = %.12f)" % (res.length, math.sqrt(2)))
print("         chain points n =", res.stats.n, " sweeps =", res.stats.sweeps)

# cone: from the tip of edge a to the tip of edge b
res = run(cone, make_point(cone, {"a": 1}), make_point(cone, {"b": 1}), eps=1e-3)
print("two edges length %.12f" % res.length)

# the final chain passes through the shared vertex
for x in res.chain:
    print("   a=%.4f b=%.4f" % x)
