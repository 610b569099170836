import math
import random
from collections import deque

import pytest
from hypothesis import given, settings, strategies as st

from cat0cube.complex import (
    D_DEFAULT,
    Add,
    Rem,
    all_cells,
    common_star_vertex,
    dump_point,
    edge_geodesic,
    from_star_coordinates,
    initial_chain,
    link_compatible,
    minimal_cell,
    parse_point,
    point_of_vertex,
    star_coordinates,
    star_pair,
)
from cat0cube.errors import (
    IncompatibleSupport,
    NoCommonVertex,
    NotInComplex,
    NotInStar,
    ParseError,
)
from cat0cube.pip import enumerate_ideals, is_consistent_ideal, random_pip

from conftest import point, random_point


def test_minimal_cell_examples(SQ, LP):
    c = minimal_cell(SQ, point(SQ, a=0.5, b=0.25))
    assert set(c.I.names(SQ)) == {"a", "b"} and set(c.M.names(SQ)) == {"a", "b"}
    c = minimal_cell(SQ, point(SQ, a=1))
    assert c.I.names(SQ) == ["a"] and c.M.names(SQ) == []
    with pytest.raises(NotInComplex):
        minimal_cell(LP, point(LP, a=0.5, b=0.5))


def test_minimal_cell_rejects(CH):
    with pytest.raises(NotInComplex):
        minimal_cell(CH, point(CH, b=0.5))  # not downward closed
    with pytest.raises(NotInComplex):
        minimal_cell(CH, point(CH, a=0.5, b=0.5))  # a is not maximal
    with pytest.raises(NotInComplex):
        minimal_cell(CH, point(CH, a=1.5))
    with pytest.raises(NotInComplex):
        minimal_cell(CH, (0.5,))


def test_snapping(SQ):
    c = minimal_cell(SQ, (1 - 1e-16, 1e-16))
    assert c.I.names(SQ) == ["a"] and c.dim == 0


def test_point_of_vertex(SQ, CH):
    assert point_of_vertex(SQ, SQ.ideal(["a"])) == (1.0, 0.0)
    assert point_of_vertex(SQ, SQ.ideal([])) == (0.0, 0.0)
    assert point_of_vertex(CH, CH.ideal(["a", "b"])) == (1.0, 1.0)


def test_point_io(SQ, LP):
    x = parse_point(SQ, '{"a": "0.5"}')
    assert x == (0.5, 0.0)
    assert dump_point(SQ, (0.1, 0.0)) == {"a": "0.10000000000000001"}
    for text in ['{"a": 0.5}', '{"z": "0.5"}', '{"a": "x"}', '{"a": "nan"}', "[1]"]:
        with pytest.raises(ParseError):
            parse_point(SQ, text)
    with pytest.raises(NotInComplex):
        parse_point(LP, '{"a": "0.5", "b": "0.5"}')


def bfs(p, u, w):
    ideals = {I.mask for I in enumerate_ideals(p)}
    dist = {u.mask: 0}
    q = deque([u.mask])
    while q:
        s = q.popleft()
        for i in range(len(p)):
            t = s ^ (1 << i)
            if t in ideals and t not in dist:
                dist[t] = dist[s] + 1
                q.append(t)
    return dist[w.mask]


def test_edge_geodesic_examples(SQ, LP, CH):
    path = edge_geodesic(CH, CH.ideal(["a", "b"]), CH.ideal([]))
    assert [set(I.names(CH)) for I in path] == [{"a", "b"}, {"a"}, set()]
    path = edge_geodesic(LP, LP.ideal(["a"]), LP.ideal(["b"]))
    assert [set(I.names(LP)) for I in path] == [{"a"}, set(), {"b"}]
    assert bfs(LP, LP.ideal(["a"]), LP.ideal(["b"])) == 2
    assert edge_geodesic(SQ, SQ.ideal(["a"]), SQ.ideal(["a"])) == [SQ.ideal(["a"])]


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.floats(0, 1), st.integers(0, 10_000))
def test_edge_geodesic_is_shortest(m, density, seed):
    p = random_pip(m, density, seed)
    ideals = enumerate_ideals(p)
    rng = random.Random(seed)
    for _ in range(5):
        u, w = rng.choice(ideals), rng.choice(ideals)
        path = edge_geodesic(p, u, w)
        assert path[0] == u and path[-1] == w
        assert len(path) - 1 == bin(u.mask ^ w.mask).count("1") == bfs(p, u, w)
        for a, b in zip(path, path[1:]):
            assert is_consistent_ideal(p, b)
            assert bin(a.mask ^ b.mask).count("1") == 1


def test_initial_chain_square(SQ):
    chain = initial_chain(SQ, (0.0, 0.0), (1.0, 1.0), 0.01)
    assert len(chain) - 1 == 10
    assert chain[0] == (0.0, 0.0) and chain[-1] == (1.0, 1.0)
    assert (1.0, 0.0) in chain
    for a, b in zip(chain, chain[1:]):
        assert math.dist(a, b) <= 0.22 + 1e-12


def test_initial_chain_trivial_and_cone(SQ, LP):
    x = point(SQ, a=1)
    assert initial_chain(SQ, x, x, 0.01) == [x, x]
    chain = initial_chain(LP, point(LP, a=1), point(LP, b=1), 0.01)
    assert len(chain) == 11
    assert (0.0, 0.0) in chain
    assert all(c[0] == 0 or c[1] == 0 for c in chain)


def test_initial_chain_eps_range(SQ):
    with pytest.raises(ValueError):
        initial_chain(SQ, (0.0, 0.0), (1.0, 1.0), 0.2)
    with pytest.raises(ValueError):
        initial_chain(SQ, (0.0, 0.0), (1.0, 1.0), 0.0)


def shares_cell(p, a, b):
    return any(c.contains(a) and c.contains(b) for c in all_cells(p))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.floats(0, 1), st.integers(0, 10_000),
       st.sampled_from([1e-3, 0.01, 0.1]))
def test_initial_chain_properties(m, density, seed, eps):
    p = random_pip(m, density, seed)
    rng = random.Random(seed)
    src, dst = random_point(p, rng), random_point(p, rng)
    chain = initial_chain(p, src, dst, eps)
    assert chain[0] == src and chain[-1] == dst
    step = (D_DEFAULT / 2 - eps) / 2
    for a, b in zip(chain, chain[1:]):
        minimal_cell(p, b)
        assert shares_cell(p, a, b)
        assert math.dist(a, b) <= step + 1e-12
        if len(chain) > 2:
            assert a != b


def test_common_star_vertex_examples(SQ, LP, CH):
    assert common_star_vertex(SQ, (0.2, 0.3), (0.9, 0.9)).mask == 0
    with pytest.raises(NoCommonVertex):
        common_star_vertex(LP, point(LP, a=1), point(LP, b=1))
    v = common_star_vertex(CH, point(CH, a=1, b=0.5), point(CH, a=0.5))
    assert v.names(CH) == ["a"]


def test_star_coordinates_examples(SQ, LP, CH):
    local, compat = star_coordinates(SQ, SQ.ideal([]), (0.2, 0.3))
    assert local == {Add(0): 0.2, Add(1): 0.3}
    assert compat(Add(0), Add(1))
    local, compat = star_coordinates(LP, LP.ideal([]), (0.7, 0.0))
    assert local == {Add(0): 0.7}
    assert not compat(Add(0), Add(1))
    v = CH.ideal(["a"])
    lx, compat = star_coordinates(CH, v, point(CH, a=0.5))
    ly, _ = star_coordinates(CH, v, point(CH, a=1, b=0.5))
    assert lx == {Rem(0): 0.5} and ly == {Add(1): 0.5}
    assert not compat(Add(1), Rem(0))


def test_star_coordinates_not_in_star(CH, SQ):
    with pytest.raises(NotInStar):
        star_coordinates(CH, CH.ideal([]), point(CH, a=1, b=0.5))
    # the far corner of the square is in the star of the empty ideal
    local, _ = star_coordinates(SQ, SQ.ideal([]), (1.0, 1.0))
    assert local == {Add(0): 1.0, Add(1): 1.0}


def test_from_star_coordinates_examples(SQ, CH, LP):
    assert from_star_coordinates(SQ, SQ.ideal([]), {Add(0): 0.2, Add(1): 0.3}) == (0.2, 0.3)
    assert from_star_coordinates(CH, CH.ideal(["a"]), {Rem(0): 1.0}) == (0.0, 0.0)
    with pytest.raises(IncompatibleSupport):
        from_star_coordinates(LP, LP.ideal([]), {Add(0): 0.5, Add(1): 0.5})
    with pytest.raises(IncompatibleSupport):
        from_star_coordinates(CH, CH.ideal([]), {Add(1): 0.5})


def square_exists(p, v, d1, d2):
    def step(mask, d):
        kind, e = d
        return mask | 1 << e if d == Add(e) else mask & ~(1 << e)

    corners = [step(v, d1), step(v, d2), step(step(v, d1), d2)]
    return all(is_consistent_ideal(p, c) for c in corners)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.floats(0, 1), st.integers(0, 10_000))
def test_compatibility_matches_squares(m, density, seed):
    p = random_pip(m, density, seed)
    for v in enumerate_ideals(p):
        dirs = [Add(a) for a in range(m) if p.addable(v.mask) >> a & 1]
        dirs += [Rem(e) for e in range(m) if p.maximal(v.mask) >> e & 1]
        for i, d1 in enumerate(dirs):
            for d2 in dirs[i + 1:]:
                assert link_compatible(p, d1, d2) == square_exists(p, v.mask, d1, d2)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.floats(0, 1), st.integers(0, 10_000))
def test_star_round_trip(m, density, seed):
    p = random_pip(m, density, seed)
    rng = random.Random(seed)
    for _ in range(5):
        x = random_point(p, rng)
        for v in enumerate_ideals(p):
            try:
                local, _ = star_coordinates(p, v, x)
            except NotInStar:
                continue
            assert from_star_coordinates(p, v, local) == pytest.approx(x, abs=1e-15)
            back, _ = star_coordinates(p, v, from_star_coordinates(p, v, local))
            assert set(back) == set(local)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.floats(0, 1), st.integers(0, 10_000))
def test_star_pair_within_cell(m, density, seed):
    # two points of one cell always share a star
    p = random_pip(m, density, seed)
    rng = random.Random(seed)
    cell = rng.choice(all_cells(p))
    pts = []
    for _ in range(2):
        x = [0.0] * m
        for i in cell.I:
            x[i] = 1.0
        for i in cell.M:
            x[i] = rng.random()
        pts.append(tuple(x))
    v, lx, ly, compat = star_pair(p, *pts)
    assert from_star_coordinates(p, v, lx) == pytest.approx(pts[0])
    assert from_star_coordinates(p, v, ly) == pytest.approx(pts[1])
