"""Reference distances for small complexes, independent of the halving driver.

``grid_distance`` discretises every maximal cell with step ``h`` and joins
grid points of the same cell that are within Chebyshev radius ``r`` by
straight segments; Dijkstra on that graph gives an upper bound on the true
distance.  ``unfold_two_cells`` lays two squares sharing an edge flat in
the plane.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .complex import Cell, Point, all_cells, maximal_cells, minimal_cell, snap
from .errors import NotApplicable, TooLarge, TooManyIdeals
from .pip import Pip

MAX_CELLS = 10_000
MAX_NODES = 2_000_000


@dataclass(frozen=True)
class GridResult:
    value: float
    stretch_bound: float
    snap_bound: float
    nodes: int
    arcs: int

    def to_dict(self) -> dict:
        return {
            "value": format(self.value, ".17g"),
            "stretch_bound": format(self.stretch_bound, ".17g"),
            "snap_bound": format(self.snap_bound, ".17g"),
            "nodes": self.nodes,
            "arcs": self.arcs,
        }


def stretch_factor(r: int) -> float:
    return 1.0 / math.cos(math.pi / (4 * r))


def _offsets(k: int, r: int) -> np.ndarray:
    """Nonzero vectors of ``{-r..r}^k`` whose first nonzero entry is positive."""
    out = []
    for off in itertools.product(range(-r, r + 1), repeat=k):
        nz = [c for c in off if c]
        if nz and nz[0] > 0:
            out.append(off)
    return np.array(out, dtype=np.int64).reshape(-1, k)


def grid_distance(p: Pip, x: Point, y: Point, h: float = 0.02, r: int = 2) -> GridResult:
    """Dijkstra distance between the grid nodes nearest to ``x`` and ``y``.

    ``h`` must be ``1/N`` for an integer ``N >= 4``.  Raises ``TooLarge`` if
    the complex has more than ``MAX_CELLS`` cells or the grid more than
    ``MAX_NODES`` nodes (counted with multiplicity over maximal cells).
    """
    if not 0 < h <= 0.25:
        raise ValueError("h must lie in (0, 0.25]")
    if r not in (1, 2, 3):
        raise ValueError("r must be 1, 2 or 3")
    N = round(1 / h)
    if abs(N * h - 1) > 1e-12:
        raise ValueError("h must be the reciprocal of an integer")
    m = len(p)
    try:
        n_cells = len(all_cells(p, MAX_CELLS))
    except TooManyIdeals as exc:
        raise TooLarge(str(exc)) from None
    if n_cells > MAX_CELLS:
        raise TooLarge(f"{n_cells} cells exceed {MAX_CELLS}")
    cells = maximal_cells(p, MAX_CELLS)
    total = sum((N + 1) ** c.dim for c in cells)
    if total > MAX_NODES:
        raise TooLarge(f"grid would need {total} nodes")

    blocks, src_parts, dst_parts, w_parts = [], [], [], []
    offset = 0
    for cell in cells:
        free = list(cell.M)
        k = len(free)
        grid = np.indices((N + 1,) * k).reshape(k, -1).T if k else np.zeros((1, 0), np.int64)
        coords = np.zeros((len(grid), m), dtype=np.int32)
        for i in cell.I:
            if i not in cell.M:
                coords[:, i] = N
        for j, e in enumerate(free):
            coords[:, e] = grid[:, j]
        blocks.append(coords)
        radix = (N + 1) ** np.arange(k, dtype=np.int64)
        for off in _offsets(k, r):
            tgt = grid + off
            ok = np.all((tgt >= 0) & (tgt <= N), axis=1)
            src_local = grid[ok] @ radix
            dst_local = tgt[ok] @ radix
            src_parts.append(src_local + offset)
            dst_parts.append(dst_local + offset)
            w_parts.append(np.full(len(src_local), h * math.sqrt(float(off @ off))))
        offset += len(grid)

    allcoords = np.concatenate(blocks)
    nodes, inverse = np.unique(allcoords, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    V = len(nodes)
    if src_parts:
        u = inverse[np.concatenate(src_parts)]
        v = inverse[np.concatenate(dst_parts)]
        w = np.concatenate(w_parts)
        lo, hi = np.minimum(u, v), np.maximum(u, v)
        key = lo.astype(np.int64) * V + hi
        key, first = np.unique(key, return_index=True)
        lo, hi, w = lo[first], hi[first], w[first]
    else:
        lo = hi = np.zeros(0, np.int64)
        w = np.zeros(0)
    graph = coo_matrix((w, (lo, hi)), shape=(V, V)).tocsr()

    def node_of(z):
        target = np.array([round(snap(c) * N) for c in z], dtype=np.int32)
        hit = np.nonzero(np.all(nodes == target, axis=1))[0]
        if not hit.size:
            raise ValueError("point does not snap to a grid node")
        return int(hit[0])

    minimal_cell(p, x)
    minimal_cell(p, y)
    s, t = node_of(x), node_of(y)
    value = 0.0 if s == t else float(dijkstra(graph, directed=False, indices=s)[t])
    dim = max((c.dim for c in cells), default=0)
    return GridResult(
        value=value,
        stretch_bound=stretch_factor(r),
        snap_bound=2 * h * math.sqrt(max(dim, 1)),
        nodes=V,
        arcs=len(w),
    )


def _intersection(c1: Cell, c2: Cell):
    """``(ones, free)`` bitmasks of the common face, or None if disjoint."""
    f1 = c1.I.mask & ~c1.M.mask
    f2 = c2.I.mask & ~c2.M.mask
    if f1 & ~c2.I.mask or f2 & ~c1.I.mask:
        return None
    return f1 | f2, c1.M.mask & c2.M.mask


def unfold_two_cells(p: Pip, x: Point, y: Point) -> float:
    """Distance through the planar unfolding of two squares sharing one edge.

    Raises ``NotApplicable`` unless ``x`` and ``y`` lie in distinct squares
    (neither point in the other's square) that meet in exactly one edge and
    the unfolded segment crosses that edge away from its endpoints.
    """
    squares = [c for c in all_cells(p) if c.dim == 2]
    for q1 in squares:
        if not q1.contains(x) or q1.contains(y):
            continue
        for q2 in squares:
            if q2 == q1 or not q2.contains(y) or q2.contains(x):
                continue
            meet = _intersection(q1, q2)
            if meet is None:
                continue
            ones, free = meet
            if bin(free).count("1") != 1:
                continue
            e = free.bit_length() - 1
            f1 = (q1.M.mask & ~free).bit_length() - 1
            f2 = (q2.M.mask & ~free).bit_length() - 1
            c1 = 1.0 if ones >> f1 & 1 else 0.0
            c2 = 1.0 if ones >> f2 & 1 else 0.0
            X = (snap(x[e]), abs(snap(x[f1]) - c1))
            Y = (snap(y[e]), -abs(snap(y[f2]) - c2))
            s = X[1] / (X[1] - Y[1])
            cross = X[0] + s * (Y[0] - X[0])
            if not 0.0 < cross < 1.0:
                raise NotApplicable(f"segment crosses the shared edge at {cross}")
            return math.hypot(X[0] - Y[0], X[1] - Y[1])
    raise NotApplicable("points do not lie in two squares sharing an edge")
