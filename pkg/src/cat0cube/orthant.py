"""Geodesics in (truncated) CAT(0) orthant spaces.

Local points are dicts mapping link directions (any hashable key) to
nonnegative coordinates; keys with value 0 are ignored.  ``compat(d1, d2)``
tells whether two keys span an edge of the flag link.

The solver keeps an ordered list of blocks ``(A_i, B_i)`` partitioning the
coordinates that only the source has (A side) and those only the target
has (B side).  Along the geodesic, block ``i``'s A coordinates shrink to 0
and its B coordinates grow from 0, both on the same cone, switching at
``t_i = lambda_i / (lambda_i + mu_i)``.  A block is split while the
minimum weight vertex cover of its incompatibility graph is lighter than 1.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping, Sequence

from .errors import IncompatibleSupport, PrecisionLoss, TooLarge

TAU_COVER = 1e-12
TAU_SORT = 1e-9
BRUTE_FORCE_MAX_SIDE = 6

Compat = Callable[[Hashable, Hashable], bool]


@dataclass(frozen=True)
class Block:
    A: tuple
    B: tuple
    lam: float
    mu: float

    @property
    def ratio(self) -> float:
        if not self.A:
            return 0.0
        if not self.B:
            return math.inf
        return self.lam / self.mu

    @property
    def switch_time(self) -> float:
        """Parameter at which the A side vanishes and the B side appears."""
        total = self.lam + self.mu
        return self.lam / total if total else 0.0


@dataclass(frozen=True)
class GeodesicDesc:
    x: Mapping
    y: Mapping
    common: tuple
    blocks: tuple
    length: float

    def to_dict(self, name=str) -> dict:
        fmt = lambda v: format(v, ".17g")
        return {
            "length": fmt(self.length),
            "common": [name(e) for e in self.common],
            "blocks": [
                {
                    "A": [name(e) for e in b.A],
                    "B": [name(e) for e in b.B],
                    "lambda": fmt(b.lam),
                    "mu": fmt(b.mu),
                }
                for b in self.blocks
            ],
        }


def _support(x: Mapping) -> dict:
    return {k: float(v) for k, v in x.items() if v != 0}


def _norm(vals) -> float:
    return math.sqrt(math.fsum(v * v for v in vals))


def _check_simplex(support, compat: Compat, label: str):
    keys = list(support)
    for i, a in enumerate(keys):
        for b in keys[i + 1:]:
            if not compat(a, b):
                raise IncompatibleSupport(f"{label} support is not a simplex: {a!r}, {b!r}")


# -- bipartite minimum weight vertex cover -----------------------------------

def min_weight_vertex_cover(
    a_weights: Sequence[float],
    b_weights: Sequence[float],
    edges,
) -> tuple[float, frozenset, frozenset]:
    """Minimum weight vertex cover of a bipartite graph via max-flow / min-cut.

    Network: source -> a (capacity ``a_weights[a]``), b -> sink (capacity
    ``b_weights[b]``), a -> b unbounded for every edge ``(a, b)``.  Flow is
    pushed along shortest augmenting paths found by BFS in vertex-index
    order, so the result is deterministic.

    Returns
    -------
    value : float
        Total weight of the cover.
    cover_a, cover_b : frozenset of int
        Indices of covered vertices on each side.
    """
    na, nb = len(a_weights), len(b_weights)
    edges = sorted(set(edges))
    if not edges:
        return 0.0, frozenset(), frozenset()
    n = na + nb + 2
    s, t = 0, n - 1
    cap = [[0.0] * n for _ in range(n)]
    for a, w in enumerate(a_weights):
        cap[s][1 + a] = float(w)
    for b, w in enumerate(b_weights):
        cap[1 + na + b][t] = float(w)
    for a, b in edges:
        cap[1 + a][1 + na + b] = math.inf
    adj = [[] for _ in range(n)]
    for u in range(n):
        for v in range(n):
            if cap[u][v] > 0 or cap[v][u] > 0:
                adj[u].append(v)
    tol = 1e-15 * max(1.0, math.fsum(a_weights) + math.fsum(b_weights))
    flow = [[0.0] * n for _ in range(n)]

    def residual(u, v):
        return cap[u][v] - flow[u][v]

    while True:
        parent = [-1] * n
        parent[s] = s
        queue = deque([s])
        while queue and parent[t] < 0:
            u = queue.popleft()
            for v in adj[u]:
                if parent[v] < 0 and residual(u, v) > tol:
                    parent[v] = u
                    queue.append(v)
        if parent[t] < 0:
            break
        push = math.inf
        v = t
        while v != s:
            u = parent[v]
            push = min(push, residual(u, v))
            v = u
        v = t
        while v != s:
            u = parent[v]
            flow[u][v] += push
            flow[v][u] -= push
            v = u

    reach = [False] * n
    reach[s] = True
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if not reach[v] and residual(u, v) > tol:
                reach[v] = True
                queue.append(v)
    cover_a = frozenset(a for a in range(na) if not reach[1 + a])
    cover_b = frozenset(b for b in range(nb) if reach[1 + na + b])
    value = math.fsum(a_weights[a] for a in cover_a) + math.fsum(
        b_weights[b] for b in cover_b
    )
    return value, cover_a, cover_b


# -- solver -----------------------------------------------------------------

def _make_block(A, B, x, y) -> Block:
    return Block(tuple(A), tuple(B), _norm(x[a] for a in A), _norm(y[b] for b in B))


def _try_split(block: Block, x, y, compat: Compat):
    """Return the two halves of ``block`` if its cover test fails, else None."""
    A, B = block.A, block.B
    if not A or not B:
        return None
    edges = [
        (i, j) for i, a in enumerate(A) for j, b in enumerate(B) if not compat(a, b)
    ]
    wa = [(x[a] / block.lam) ** 2 for a in A]
    wb = [(y[b] / block.mu) ** 2 for b in B]
    value, cover_a, cover_b = min_weight_vertex_cover(wa, wb, edges)
    if value >= 1.0 - TAU_COVER:
        return None
    C1 = [a for i, a in enumerate(A) if i in cover_a]
    C2 = [a for i, a in enumerate(A) if i not in cover_a]
    D2 = [b for j, b in enumerate(B) if j in cover_b]
    D1 = [b for j, b in enumerate(B) if j not in cover_b]
    return _make_block(C1, D1, x, y), _make_block(C2, D2, x, y)


def _split_all(blocks: list, x, y, compat: Compat) -> list:
    i = 0
    while i < len(blocks):
        halves = _try_split(blocks[i], x, y, compat)
        if halves is None:
            i += 1
        else:
            blocks[i:i + 1] = list(halves)
    return blocks


def _sort_violation(b1: Block, b2: Block) -> bool:
    lhs = b1.lam * b2.mu
    rhs = b2.lam * b1.mu
    return lhs - rhs > TAU_SORT * (lhs + rhs)


def _length(blocks, x, y, common) -> float:
    return math.sqrt(
        math.fsum((b.lam + b.mu) ** 2 for b in blocks)
        + math.fsum((x[e] - y[e]) ** 2 for e in common)
    )


def gtp_solve(x: Mapping, y: Mapping, compat: Compat) -> GeodesicDesc:
    """Geodesic between two points of a CAT(0) orthant space.

    Parameters
    ----------
    x, y : mapping
        Source and target local coordinates.
    compat : callable
        Symmetric edge predicate of the flag link.

    Raises
    ------
    IncompatibleSupport
        If either support is not a simplex of the link.
    PrecisionLoss
        If the final block ratios are out of order beyond ``TAU_SORT`` even
        after one merge-and-resplit pass.
    """
    x = _support(x)
    y = _support(y)
    _check_simplex(x, compat, "source")
    _check_simplex(y, compat, "target")
    common = tuple(e for e in x if e in y)
    A = [e for e in x if e not in y]
    B = [e for e in y if e not in x]
    blocks = [_make_block(A, B, x, y)] if (A or B) else []
    blocks = _split_all(blocks, x, y, compat)

    for attempt in range(2):
        bad = [i for i in range(len(blocks) - 1) if _sort_violation(blocks[i], blocks[i + 1])]
        if not bad:
            break
        if attempt == 1:
            raise PrecisionLoss("block ratios out of order after resplit")
        i = bad[0]
        b1, b2 = blocks[i], blocks[i + 1]
        merged = _make_block(b1.A + b2.A, b1.B + b2.B, x, y)
        blocks[i:i + 2] = _split_all([merged], x, y, compat)

    return GeodesicDesc(
        x=x, y=y, common=common, blocks=tuple(blocks),
        length=_length(blocks, x, y, common),
    )


def geodesic_distance(x: Mapping, y: Mapping, compat: Compat) -> float:
    return gtp_solve(x, y, compat).length


def evaluate(g: GeodesicDesc, t: float) -> dict:
    """Point at parameter ``t`` on the geodesic (nonzero coordinates only)."""
    if t <= 0.0:
        return dict(g.x)
    if t >= 1.0:
        return dict(g.y)
    out = {}
    for e in g.common:
        xe, ye = g.x[e], g.y[e]
        v = (1.0 - t) * xe + t * ye
        out[e] = min(max(v, min(xe, ye)), max(xe, ye))
    for b in g.blocks:
        if b.A:
            f = (1.0 - t) - (t * b.mu / b.lam if b.mu else 0.0)
            if f > 0.0:
                for a in b.A:
                    out[a] = g.x[a] * min(f, 1.0)
        if b.B:
            f = t - ((1.0 - t) * b.lam / b.mu if b.lam else 0.0)
            if f > 0.0:
                for e in b.B:
                    out[e] = g.y[e] * min(f, 1.0)
    return out


def rounding_exponent(dim: int, delta: float) -> int:
    """Smallest ``s`` with ``sqrt(dim) * 2**-s <= delta``."""
    return max(0, math.ceil(math.log2(math.sqrt(max(dim, 1)) / delta)))


def round_dyadic(v: float, s: int) -> float:
    return math.ldexp(round(math.ldexp(v, s)), -s)


def midpoint(g: GeodesicDesc, delta: float, precision_bits: int = 53) -> dict:
    """Midpoint of ``g`` with every coordinate rounded to a multiple of ``2**-s``.

    ``s = ceil(log2(sqrt(dim) / delta))`` where ``dim`` counts the
    coordinates nonzero at either end, so the rounding moves the point by at
    most ``delta / 2``.  ``delta = 0`` skips rounding.
    """
    if g.length == 0.0:
        return dict(g.x)
    w = evaluate(g, 0.5)
    if delta == 0:
        return w
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    dim = len(set(g.x) | set(g.y))
    s = rounding_exponent(dim, delta)
    if s > precision_bits:
        raise PrecisionLoss(
            f"rounding to 2**-{s} needs more than {precision_bits} bits"
        )
    out = {}
    for e, v in w.items():
        r = round_dyadic(v, s)
        if r != 0.0:
            out[e] = r
    return out


# -- brute-force oracle -------------------------------------------------------

def brute_force_geodesic(x: Mapping, y: Mapping, compat: Compat) -> float:
    """Geodesic length by exhaustive search over ordered block partitions.

    Minimises ``sqrt(sum (lambda_i + mu_i)**2 + |common part|**2)`` over all
    partitions ``(A_1..A_k; B_1..B_k)`` such that every ``a`` in a later
    block is compatible with every ``b`` in an earlier one and the ratios
    ``lambda_i / mu_i`` are nondecreasing.  Both conditions together make
    the formula the length of an actual path, so the minimum is the
    distance.  Shares no code with :func:`gtp_solve`.
    """
    x = _support(x)
    y = _support(y)
    _check_simplex(x, compat, "source")
    _check_simplex(y, compat, "target")
    common = [e for e in x if e in y]
    A = [e for e in x if e not in y]
    B = [e for e in y if e not in x]
    if len(A) > BRUTE_FORCE_MAX_SIDE or len(B) > BRUTE_FORCE_MAX_SIDE:
        raise TooLarge(f"sides {len(A)}, {len(B)} exceed {BRUTE_FORCE_MAX_SIDE}")
    base = math.fsum((x[e] - y[e]) ** 2 for e in common)
    na, nb = len(A), len(B)
    xa = [x[a] ** 2 for a in A]
    yb = [y[b] ** 2 for b in B]
    # ok_b[j] = bitmask of A indices compatible with B[j]
    ok_b = [sum(1 << i for i in range(na) if compat(A[i], B[j])) for j in range(nb)]

    def sq(mask, vals):
        return math.fsum(vals[i] for i in range(len(vals)) if mask >> i & 1)

    best = math.inf
    full_a, full_b = (1 << na) - 1, (1 << nb) - 1

    def rec(rem_a, rem_b, last_lam, last_mu, acc):
        nonlocal best
        if acc >= best:
            return
        if not rem_a and not rem_b:
            best = acc
            return
        # next block: nonempty (sub_a, sub_b) not both empty
        sub_a = rem_a
        while True:
            rest_a = rem_a & ~sub_a
            lam = math.sqrt(sq(sub_a, xa))
            sub_b = rem_b
            while True:
                if sub_a or sub_b:
                    valid = all(
                        (ok_b[j] & rest_a) == rest_a
                        for j in range(nb) if sub_b >> j & 1
                    )
                    if valid:
                        mu = math.sqrt(sq(sub_b, yb))
                        # nondecreasing ratio: last_lam / last_mu <= lam / mu
                        if last_lam * mu <= lam * last_mu * (1 + 1e-12) + 1e-300:
                            rec(rest_a, rem_b & ~sub_b, lam, mu, acc + (lam + mu) ** 2)
                if sub_b == 0:
                    break
                sub_b = (sub_b - 1) & rem_b
            if sub_a == 0:
                break
            sub_a = (sub_a - 1) & rem_a

    # last ratio starts at 0 (lam = 0, mu = 1) so any first block is allowed
    rec(full_a, full_b, 0.0, 1.0, 0.0)
    return math.sqrt(best + base)
