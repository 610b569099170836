"""The standard embedding of a PIP complex inside the unit cube.

Points are tuples of floats indexed like ``Pip.elements``.  Binary floats
are dyadic rationals, so coordinates produced by rounding to a multiple of
``2**-s`` (``s <= 53``) are represented exactly.
"""
from __future__ import annotations

import decimal
import json
import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

from .errors import (
    IncompatibleSupport,
    NoCommonVertex,
    NotInComplex,
    NotInStar,
    ParseError,
)
from .pip import Ideal, Pip, _bits, enumerate_ideals, linear_extension

D_DEFAULT = 0.9
SNAP_TOL = 1e-15

Point = tuple  # tuple[float, ...], one coordinate per PIP element

ADD = "add"
REM = "rem"


class LinkDirection(NamedTuple):
    """An edge at a vertex ``v``: add an addable element or remove a maximal one."""

    kind: str
    element: int

    def name(self, p: Pip) -> str:
        return ("+" if self.kind == ADD else "-") + p.elements[self.element]


def Add(a: int) -> LinkDirection:
    return LinkDirection(ADD, a)


def Rem(m: int) -> LinkDirection:
    return LinkDirection(REM, m)


def snap(v: float) -> float:
    if abs(v) <= SNAP_TOL:
        return 0.0
    if abs(v - 1.0) <= SNAP_TOL:
        return 1.0
    return v


# -- points -----------------------------------------------------------------

def make_point(p: Pip, coords: dict | None = None) -> Point:
    """Build a point from ``{name: value}``; omitted elements are 0."""
    out = [0.0] * len(p)
    for name, val in (coords or {}).items():
        out[p._idx(name)] = float(val)
    return tuple(out)


def point_dict(p: Pip, x: Point) -> dict:
    return {p.elements[i]: v for i, v in enumerate(x) if v != 0}


def format_decimal(v: float) -> str:
    return format(v, ".17g")


def dump_point(p: Pip, x: Point) -> dict:
    """JSON-ready mapping of nonzero coordinates to 17-digit decimal strings."""
    return {p.elements[i]: format_decimal(v) for i, v in enumerate(x) if v != 0}


def parse_decimal(s) -> float:
    if not isinstance(s, str):
        raise ParseError(f"coordinate {s!r} must be a decimal string")
    try:
        d = decimal.Decimal(s)
    except decimal.InvalidOperation:
        raise ParseError(f"not a decimal number: {s!r}") from None
    if not d.is_finite():
        raise ParseError(f"not a finite decimal: {s!r}")
    return float(d)


def parse_point(p: Pip, text: str) -> Point:
    """Parse point JSON ``{name: "decimal"}`` and check it lies in the complex."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("point must be a JSON object")
    coords = {}
    for name, val in doc.items():
        if name not in p.index:
            raise ParseError(f"unknown element {name!r}")
        coords[name] = parse_decimal(val)
    x = make_point(p, coords)
    minimal_cell(p, x)
    return x


def distance_in_cell(x: Point, y: Point) -> float:
    return math.dist(x, y)


# -- cells ------------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    """Cube with coordinates 1 on ``I - M``, free on ``M`` and 0 off ``I``."""

    I: Ideal
    M: Ideal

    @property
    def dim(self) -> int:
        return len(self.M)

    def contains(self, x: Point) -> bool:
        fixed_one = self.I.mask & ~self.M.mask
        for i, v in enumerate(x):
            v = snap(v)
            if fixed_one >> i & 1:
                if v != 1.0:
                    return False
            elif not self.I.mask >> i & 1 and v != 0.0:
                return False
        return True

    def vertices(self) -> list[Ideal]:
        base = self.I.mask & ~self.M.mask
        free = list(self.M)
        out = []
        for k in range(1 << len(free)):
            mask = base
            for j, i in enumerate(free):
                if k >> j & 1:
                    mask |= 1 << i
            out.append(Ideal(mask))
        out.sort(key=Ideal.sort_key)
        return out

    def to_dict(self, p: Pip) -> dict:
        return {"I": self.I.names(p), "M": self.M.names(p)}


def minimal_cell(p: Pip, x: Point) -> Cell:
    """Smallest cell containing ``x``; raises ``NotInComplex`` if there is none."""
    if len(x) != len(p):
        raise NotInComplex(f"point has {len(x)} coordinates, PIP has {len(p)} elements")
    imask = mmask = 0
    for i, v in enumerate(x):
        v = snap(v)
        if not 0.0 <= v <= 1.0:
            raise NotInComplex(f"coordinate {p.elements[i]!r}={v} outside [0, 1]")
        if v > 0.0:
            imask |= 1 << i
            if v < 1.0:
                mmask |= 1 << i
    if not p.is_down_closed(imask):
        raise NotInComplex("support is not an order ideal")
    if not p.is_consistent(imask):
        raise NotInComplex("support contains an inconsistent pair")
    if mmask & ~p.maximal(imask):
        raise NotInComplex("fractional coordinate on a non-maximal element")
    return Cell(Ideal(imask), Ideal(mmask))


def point_of_vertex(p: Pip, v: Ideal) -> Point:
    return tuple(1.0 if v.mask >> i & 1 else 0.0 for i in range(len(p)))


def all_cells(p: Pip, limit: int = 10_000) -> list[Cell]:
    """Every cell of the complex (test-scale instances only)."""
    out = []
    for I in enumerate_ideals(p, limit):
        mx = list(_bits(p.maximal(I.mask)))
        for k in range(1 << len(mx)):
            M = sum(1 << e for j, e in enumerate(mx) if k >> j & 1)
            out.append(Cell(I, Ideal(M)))
    return out


def maximal_cells(p: Pip, limit: int = 10_000) -> list[Cell]:
    """Cells that are not a proper face of another cell."""
    cells = all_cells(p, limit)
    out = []
    for c in cells:
        fixed = c.I.mask & ~c.M.mask
        covered = False
        for d in cells:
            if d.dim <= c.dim:
                continue
            dfixed = d.I.mask & ~d.M.mask
            # c is a face of d iff d's fixed ones lie in c's fixed ones and c.I ⊆ d.I
            # with c's free coordinates free in d
            if (dfixed & ~fixed) == 0 and (c.I.mask & ~d.I.mask) == 0 and (
                c.M.mask & ~d.M.mask
            ) == 0:
                covered = True
                break
        if not covered:
            out.append(c)
    return out


# -- edge geodesics and the initial chain -------------------------------------

def edge_geodesic(p: Pip, u: Ideal, w: Ideal) -> list[Ideal]:
    """Shortest vertex path ``u -> w`` in the 1-skeleton, of length ``|u ^ w|``.

    Elements of ``u - w`` are removed in reverse linear-extension order, then
    elements of ``w - u`` are added in linear-extension order.
    """
    path = [u]
    cur = u.mask
    for e in reversed(linear_extension(p, u.mask & ~w.mask)):
        cur &= ~(1 << e)
        path.append(Ideal(cur))
    for e in linear_extension(p, w.mask & ~u.mask):
        cur |= 1 << e
        path.append(Ideal(cur))
    return path


def _lerp(a: Point, b: Point, t: float) -> Point:
    return tuple((1.0 - t) * ai + t * bi for ai, bi in zip(a, b))


def initial_chain(
    p: Pip, src: Point, dst: Point, eps: float, D: float = D_DEFAULT
) -> list[Point]:
    """Chain from ``src`` to ``dst`` with every consecutive distance at most ``(D/2 - eps)/2``.

    The path runs straight to the top vertex of the source's minimal cell,
    along an edge geodesic, then straight into ``dst``.  Every leg is cut
    into equal pieces; zero-length legs are dropped.
    """
    if not 0 < eps <= 0.1:
        raise ValueError("eps must lie in (0, 0.1]")
    c_src = minimal_cell(p, src)
    c_dst = minimal_cell(p, dst)
    if tuple(map(snap, src)) == tuple(map(snap, dst)):
        return [src, dst]
    step = (D / 2 - eps) / 2
    waypoints = [src, point_of_vertex(p, c_src.I)]
    waypoints += [point_of_vertex(p, J) for J in edge_geodesic(p, c_src.I, c_dst.I)[1:]]
    waypoints.append(dst)
    chain = [src]
    for a, b in zip(waypoints, waypoints[1:]):
        length = math.dist(a, b)
        if length == 0.0:
            continue
        parts = math.ceil(length / step)
        for k in range(1, parts):
            chain.append(_lerp(a, b, k / parts))
        chain.append(b)
    chain[-1] = dst
    return chain


# -- stars ------------------------------------------------------------------

def _link(p: Pip, v: int) -> tuple[int, int]:
    cache = p.__dict__.setdefault("_link_cache", {})
    hit = cache.get(v)
    if hit is None:
        hit = cache[v] = (p.maximal(v), p.addable(v))
    return hit


def link_compatible(p: Pip, d1: LinkDirection, d2: LinkDirection) -> bool:
    """Whether two link directions at a common vertex span a square."""
    if d1 == d2:
        return True
    k1, e1 = d1
    k2, e2 = d2
    if k1 == REM and k2 == REM:
        return True
    if k1 == ADD and k2 == ADD:
        return not p.inconsistent(e1, e2)
    add, rem = (e1, e2) if k1 == ADD else (e2, e1)
    return not p.below[add] >> rem & 1


def compat_predicate(p: Pip) -> Callable[[LinkDirection, LinkDirection], bool]:
    return lambda d1, d2: link_compatible(p, d1, d2)


def star_coordinates(p: Pip, v: Ideal, x: Point):
    """Local coordinates of ``x`` in the star of vertex ``v``.

    Returns ``(local, compat)``: ``local`` maps each link direction with a
    nonzero coordinate to its value (``1 - x[m]`` for ``Rem(m)``, ``x[a]``
    for ``Add(a)``) and ``compat`` is the link's edge predicate.
    """
    vmask = v.mask
    maxmask, addmask = _link(p, vmask)
    local = {}
    for i, xi in enumerate(x):
        xi = snap(xi)
        if vmask >> i & 1:
            if maxmask >> i & 1:
                if xi < 1.0:
                    local[LinkDirection(REM, i)] = 1.0 - xi
            elif xi != 1.0:
                raise NotInStar(f"coordinate {p.elements[i]!r} must be 1 in this star")
        elif addmask >> i & 1:
            if xi > 0.0:
                local[LinkDirection(ADD, i)] = xi
        elif xi != 0.0:
            raise NotInStar(f"coordinate {p.elements[i]!r} must be 0 in this star")
    dirs = list(local)
    for j, d1 in enumerate(dirs):
        for d2 in dirs[j + 1:]:
            if not link_compatible(p, d1, d2):
                raise NotInStar(
                    f"directions {d1.name(p)} and {d2.name(p)} span no common cell"
                )
    return local, compat_predicate(p)


def from_star_coordinates(p: Pip, v: Ideal, local: dict) -> Point:
    """Inverse of :func:`star_coordinates`."""
    vmask = v.mask
    maxmask, addmask = _link(p, vmask)
    out = [1.0 if vmask >> i & 1 else 0.0 for i in range(len(p))]
    support = []
    for d, val in local.items():
        if not 0.0 <= val <= 1.0:
            raise IncompatibleSupport(f"local coordinate {val} outside [0, 1]")
        kind, e = d
        valid = maxmask >> e & 1 if kind == REM else addmask >> e & 1
        if not valid:
            raise IncompatibleSupport(f"{d.name(p)} is not a link direction at this vertex")
        if val == 0.0:
            continue
        support.append(d)
        out[e] = 1.0 - val if kind == REM else val
    for j, d1 in enumerate(support):
        for d2 in support[j + 1:]:
            if not link_compatible(p, d1, d2):
                raise IncompatibleSupport(f"{d1.name(p)} and {d2.name(p)} are incompatible")
    return tuple(out)


def common_star_vertex(p: Pip, x: Point, y: Point) -> Ideal:
    """The vertex ``(I1 - M1) | (I2 - M2)`` shared by the minimal cells of ``x`` and ``y``."""
    c1 = minimal_cell(p, x)
    c2 = minimal_cell(p, y)
    low1 = c1.I.mask & ~c1.M.mask
    low2 = c2.I.mask & ~c2.M.mask
    v = low1 | low2
    if v & ~c1.I.mask or v & ~c2.I.mask:
        raise NoCommonVertex("minimal cells are disjoint")
    return Ideal(v)


def star_pair(p: Pip, x: Point, y: Point):
    """Find a vertex whose star holds both points.

    Tries :func:`common_star_vertex` first, then the vertices of both
    minimal cells.  Returns ``(v, local_x, local_y, compat)``.
    """
    try:
        v = common_star_vertex(p, x, y)
    except NoCommonVertex:
        pass
    else:
        lx, compat = star_coordinates(p, v, x)
        ly, _ = star_coordinates(p, v, y)
        return v, lx, ly, compat
    seen = set()
    for cell in (minimal_cell(p, x), minimal_cell(p, y)):
        for v in cell.vertices():
            if v in seen:
                continue
            seen.add(v)
            try:
                lx, compat = star_coordinates(p, v, x)
                ly, _ = star_coordinates(p, v, y)
            except NotInStar:
                continue
            return v, lx, ly, compat
    raise NoCommonVertex("no star of a minimal-cell vertex contains both points")


def star_pair_exhaustive(p: Pip, x: Point, y: Point, limit: int = 10_000):
    """Like :func:`star_pair` but searching every vertex (test-scale only)."""
    try:
        return star_pair(p, x, y)
    except NoCommonVertex:
        pass
    for v in enumerate_ideals(p, limit):
        try:
            lx, compat = star_coordinates(p, v, x)
            ly, _ = star_coordinates(p, v, y)
        except NotInStar:
            continue
        return v, lx, ly, compat
    raise NoCommonVertex("points share no star")
