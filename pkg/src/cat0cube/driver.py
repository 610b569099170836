"""Chain halving: refine a chain of breakpoints into an eps-approximate geodesic.

Each sweep replaces the interior points by delta-midpoints, walking from one
end to the other and reversing the chain; the schedule
``delta = eps / (16 n^3)`` and ``k = ceil(n^2 ln(4 n l / eps))`` sweeps
guarantees total length at most ``d(src, dst) + eps``.  Every midpoint is
computed inside the star of a vertex shared by the two endpoints' cells,
where the complex is a truncated orthant space.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import orthant
from .complex import (
    D_DEFAULT,
    Point,
    dump_point,
    from_star_coordinates,
    initial_chain,
    star_pair,
    star_pair_exhaustive,
)
from .errors import GapExceeded
from .pip import Pip

log = logging.getLogger(__name__)

Chain = list  # list[Point]


@dataclass
class RunStats:
    n: int
    sweeps: int
    delta: float
    initial_length: float
    oracle_calls: int = 0
    max_query_distance: float = 0.0
    lengths: list = field(default_factory=list)
    wall_time: float = 0.0


@dataclass
class RunResult:
    chain: list
    length: float
    segments: list  # GeodesicDesc per consecutive pair, in star-local names
    stats: RunStats
    segment_vertices: list = field(default_factory=list)

    def to_dict(self, p: Pip) -> dict:
        def name(d):
            return d.name(p)

        return {
            "length": format(self.length, ".17g"),
            "n": self.stats.n,
            "sweeps": self.stats.sweeps,
            "oracle_calls": self.stats.oracle_calls,
            "delta": format(self.stats.delta, ".17g"),
            "max_query_distance": format(self.stats.max_query_distance, ".17g"),
            "chain": [dump_point(p, x) for x in self.chain],
            "segments": [g.to_dict(name) for g in self.segments],
        }


def segment_geodesic(p: Pip, x: Point, y: Point):
    """Return ``(v, GeodesicDesc)`` for the geodesic ``x -> y`` in a common star."""
    v, lx, ly, compat = star_pair(p, x, y)
    return v, orthant.gtp_solve(lx, ly, compat)


def distance(p: Pip, x: Point, y: Point) -> float:
    """Distance between two points sharing a star (raises ``NoCommonVertex`` otherwise)."""
    return segment_geodesic(p, x, y)[1].length


def chain_length(p: Pip, chain: Sequence[Point]) -> float:
    return math.fsum(distance(p, a, b) for a, b in zip(chain, chain[1:]))


def gap(p: Pip, chain: Sequence[Point]) -> float:
    """``max(d(x0, x1), 2 * max_{i>=1} d(x_i, x_{i+1}))``; 0 for a one-point chain."""
    if len(chain) < 2:
        return 0.0
    first = distance(p, chain[0], chain[1])
    rest = [2 * distance(p, a, b) for a, b in zip(chain[1:], chain[2:])]
    return max([first] + rest)


def midpoint_of(p: Pip, x: Point, y: Point, delta: float, precision_bits: int = 53):
    """delta-midpoint of ``x`` and ``y`` plus their distance."""
    v, lx, ly, compat = star_pair(p, x, y)
    g = orthant.gtp_solve(lx, ly, compat)
    w = orthant.midpoint(g, delta, precision_bits)
    return from_star_coordinates(p, v, w), g.length


def halve_sweep(
    p: Pip,
    chain: Sequence[Point],
    delta: float,
    precision_bits: int = 53,
    max_query: float | None = None,
    stats: RunStats | None = None,
) -> Chain:
    """One delta-halving sweep; the result runs from ``chain[-1]`` to ``chain[0]``.

    ``z[n - i]`` is the delta-midpoint of ``z[n - i + 1]`` and ``chain[i]``
    for ``i = 1 .. n-1``.  With ``max_query`` set, a query between points
    farther apart raises ``GapExceeded``.
    """
    n = len(chain) - 1
    z = [None] * (n + 1)
    z[0] = chain[n]
    z[n] = chain[0]
    for i in range(1, n):
        w, d = midpoint_of(p, z[n - i + 1], chain[i], delta, precision_bits)
        if stats is not None:
            stats.oracle_calls += 1
            stats.max_query_distance = max(stats.max_query_distance, d)
        if max_query is not None and d > max_query:
            raise GapExceeded(f"midpoint query at distance {d} > {max_query}")
        z[n - i] = w
    return z


def sweep_count(n: int, length: float, eps: float) -> int:
    """``ceil(n^2 ln(4 n length / eps))``, or 0 when the logarithm is not positive."""
    arg = 4 * n * length / eps
    if length <= 0 or arg <= 1:
        return 0
    return math.ceil(n * n * math.log(arg))


def refine(
    p: Pip,
    chain: Sequence[Point],
    eps: float,
    delta: float | None = None,
    sweeps: int | None = None,
    precision_bits: int = 53,
    max_query: float | None = None,
    early_exit: bool = False,
    trace: bool = False,
    callback: Callable[[int, list], None] | None = None,
) -> RunResult:
    """Apply the halving schedule to an arbitrary chain.

    ``callback(j, chain_j)`` sees every intermediate chain in the
    orientation produced by the sweep (reversed for odd ``j``).
    """
    t0 = time.perf_counter()
    chain = list(chain)
    n = len(chain) - 1
    length0 = chain_length(p, chain)
    if delta is None:
        delta = eps / (16 * n ** 3)
    if sweeps is None:
        sweeps = sweep_count(n, length0, eps)
    stats = RunStats(n=n, sweeps=0, delta=delta, initial_length=length0)
    if trace or early_exit:
        stats.lengths.append(length0)
    if callback is not None:
        callback(0, chain)
    prev = length0
    j = 0
    for j in range(1, sweeps + 1):
        chain = halve_sweep(p, chain, delta, precision_bits, max_query, stats)
        if callback is not None:
            callback(j, chain)
        if trace or early_exit:
            cur = chain_length(p, chain)
            stats.lengths.append(cur)
            if trace:
                log.info("sweep %d length %.17g", j, cur)
            if early_exit and abs(prev - cur) < eps / 10:
                break
            prev = cur
    stats.sweeps = j
    if j % 2 == 1:
        chain.reverse()
    segs = [segment_geodesic(p, a, b) for a, b in zip(chain, chain[1:])]
    stats.wall_time = time.perf_counter() - t0
    return RunResult(
        chain=chain,
        length=math.fsum(g.length for _, g in segs),
        segments=[g for _, g in segs],
        stats=stats,
        segment_vertices=[v for v, _ in segs],
    )


def run(
    p: Pip,
    src: Point,
    dst: Point,
    eps: float,
    D: float = D_DEFAULT,
    precision_bits: int = 53,
    early_exit: bool = False,
    trace: bool = False,
    callback=None,
) -> RunResult:
    """eps-approximate geodesic from ``src`` to ``dst``.

    Builds the initial chain (gap at most ``D/2 - eps``), then runs the
    certified schedule.  Every midpoint query is checked against ``D``.
    """
    chain = initial_chain(p, src, dst, eps, D)
    return refine(
        p, chain, eps,
        precision_bits=precision_bits,
        max_query=D,
        early_exit=early_exit,
        trace=trace,
        callback=callback,
    )


def reference_chain(p: Pip, chain: Sequence[Point]) -> Chain:
    """Points ``gamma((i+1)/(n+1))`` on the endpoint geodesic, with ``x0`` kept first.

    Only available when both endpoints lie in one star.
    """
    n = len(chain) - 1
    x0, xn = chain[0], chain[n]
    v, lx, ly, compat = star_pair_exhaustive(p, x0, xn)
    g = orthant.gtp_solve(lx, ly, compat)
    out = [x0]
    for i in range(1, n + 1):
        out.append(from_star_coordinates(p, v, orthant.evaluate(g, (i + 1) / (n + 1))))
    return out


def deviation(p: Pip, chain: Sequence[Point], ref: Sequence[Point]) -> float:
    """``max_{1<=i<=n-1} d(chain[i], ref[i])``."""
    n = len(chain) - 1
    if n < 2:
        return 0.0
    return max(distance(p, chain[i], ref[i]) for i in range(1, n))
