"""
The matrix behind the sweep count
=================================

The deviation vector shrinks at least as fast as powers of the matrix
A_n with entries 2^-(n+2-i-j) above the anti-diagonal.  Its spectral
radius is at most 1 - 1/n^2, which is where the n^2 log factor in the
number of sweeps comes from.  Checks (i)-(iii) are exact rationals.
"""
import numpy as np

from cat0cube.analysis import build, check_all, format_table, resolvent_ones

A = build(4)
print(A.to_fractions())
print("eigenvalues of A_4:", np.round(np.linalg.eigvals(A.to_array()), 6))
print("(I - A_4)^-1 1 =", resolvent_ones(4))

# a short table; check_all(512) is the full verification (about half a minute)
print(format_table(check_all(16)))
