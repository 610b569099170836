import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cat0cube.analysis import HalvingMatrix
from cat0cube.complex import minimal_cell
from cat0cube.driver import (
    chain_length,
    deviation,
    distance,
    gap,
    halve_sweep,
    reference_chain,
    refine,
    run,
    sweep_count,
)
from cat0cube.errors import GapExceeded, NoCommonVertex
from cat0cube.pip import random_pip

from conftest import point, random_point


def zigzag(n):
    return [(0.0, 0.0)] + [(i / n, float(i % 2)) for i in range(1, n)] + [(1.0, 1.0)]


def test_chain_length_examples(SQ):
    assert chain_length(SQ, [(0.0, 0.0), (1.0, 1.0)]) == pytest.approx(math.sqrt(2))
    assert chain_length(SQ, [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)]) == 2.0
    assert chain_length(SQ, [(0.3, 0.3)]) == 0.0


def test_gap_examples(SQ):
    assert gap(SQ, [(0.0, 0.0), (0.3, 0.0), (0.5, 0.0)]) == pytest.approx(0.4)
    assert gap(SQ, [(0.0, 0.0), (0.3, 0.4)]) == pytest.approx(0.5)
    s = 0.1
    assert gap(SQ, [(k * s, 0.0) for k in range(5)]) == pytest.approx(2 * s)


def test_distance_needs_common_star(LP):
    with pytest.raises(NoCommonVertex):
        distance(LP, point(LP, a=1), point(LP, b=1))


def close(c1, c2, tol=1e-12):
    return len(c1) == len(c2) and all(math.dist(a, b) <= tol for a, b in zip(c1, c2))


def test_halve_sweep_examples(SQ, LP):
    # z_n = x_0 and z_{n-i} is the midpoint of z_{n-i+1} and x_i
    z = halve_sweep(SQ, [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)], 0.0)
    assert close(z, [(1.0, 1.0), (0.5, 0.0), (0.0, 0.0)])
    x0, x1 = (0.2, 0.7), (0.9, 0.1)
    assert halve_sweep(SQ, [x0, x1], 0.0) == [x1, x0]
    z = halve_sweep(LP, [point(LP, a=1), point(LP, a=0.2), point(LP, b=1)], 0.0)
    assert close(z, [point(LP, b=1), point(LP, a=0.6), point(LP, a=1)])
    # three interior points: each midpoint feeds the next one
    z = halve_sweep(SQ, [(0.0, 0.0), (0.4, 0.0), (0.4, 0.4), (0.8, 0.4), (1.0, 1.0)], 0.0)
    assert close(z, [(1.0, 1.0), (0.55, 0.3), (0.3, 0.2), (0.2, 0.0), (0.0, 0.0)])


def test_halve_sweep_cone_query(LP):
    # the query from (b:1) to (a:0.2) passes through the cone vertex
    z = halve_sweep(LP, [point(LP, b=1), point(LP, a=0.2), point(LP, a=1)], 0.0)
    assert close(z, [point(LP, a=1), point(LP, b=0.4), point(LP, b=1)])


def test_halve_sweep_gap_check(SQ):
    with pytest.raises(GapExceeded):
        halve_sweep(SQ, [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)], 0.0, max_query=0.9)


def test_run_square(SQ):
    res = run(SQ, (0.0, 0.0), (1.0, 1.0), 1e-3)
    assert math.sqrt(2) - 1e-12 <= res.length <= math.sqrt(2) + 1e-3
    assert res.chain[0] == (0.0, 0.0) and res.chain[-1] == (1.0, 1.0)
    assert res.stats.oracle_calls == res.stats.sweeps * (res.stats.n - 1)


def test_run_cone(LP):
    res = run(LP, point(LP, a=1), point(LP, b=1), 1e-3)
    assert 2.0 - 1e-12 <= res.length <= 2.0 + 1e-3
    assert res.stats.max_query_distance <= 0.9


def test_run_trivial(SQ):
    x = (0.3, 0.4)
    res = run(SQ, x, x, 1e-3)
    assert res.length == 0.0 and res.stats.sweeps == 0 and res.stats.oracle_calls == 0


def test_report_dict(SQ):
    res = run(SQ, (0.0, 0.0), (1.0, 1.0), 0.1)
    doc = res.to_dict(SQ)
    assert set(doc) >= {"length", "n", "sweeps", "oracle_calls", "chain", "segments"}
    assert len(doc["segments"]) == doc["n"]
    assert doc["chain"][0] == {}
    assert float(doc["length"]) == res.length


def test_early_exit(SQ):
    full = run(SQ, (0.0, 0.0), (1.0, 1.0), 1e-3)
    short = run(SQ, (0.0, 0.0), (1.0, 1.0), 1e-3, early_exit=True)
    assert short.stats.sweeps < full.stats.sweeps
    assert short.chain[0] == (0.0, 0.0) and short.chain[-1] == (1.0, 1.0)


def test_sweep_count():
    assert sweep_count(10, 2.0, 1e-3) == math.ceil(100 * math.log(80_000))
    assert sweep_count(5, 0.0, 1e-3) == 0


def test_reference_chain_examples(SQ):
    ref = reference_chain(SQ, [(0.0, 0.0), (0.1, 0.0), (0.2, 0.0), (1.0, 1.0)])
    assert close(ref, [(0, 0), (0.5, 0.5), (0.75, 0.75), (1, 1)])
    assert reference_chain(SQ, [(0.0, 0.0), (1.0, 1.0)]) == [(0.0, 0.0), (1.0, 1.0)]
    x = (0.3, 0.3)
    assert reference_chain(SQ, [x, (0.5, 0.5), x]) == [x, x, x]


def test_contraction_recursion(SQ):
    # deviation vectors obey v' <= A_{n-1} v + 2 delta 1 sweep by sweep
    n = 10
    delta = 1e-3 / (16 * n ** 3)
    vs = []

    def cb(j, c):
        ref = reference_chain(SQ, c)
        vs.append(np.array([distance(SQ, c[i], ref[i]) for i in range(1, n)]))

    refine(SQ, zigzag(n), 1e-3, delta=delta, sweeps=60, callback=cb)
    A = HalvingMatrix(n - 1).to_array()
    for v, v_next in zip(vs, vs[1:]):
        assert np.all(v_next <= A @ v + 2 * delta + 1e-12)


def test_deviation_envelope(SQ):
    n = 10
    chain = zigzag(n)
    ell = chain_length(SQ, chain)
    delta = 1e-3 / (16 * n ** 3)
    devs = {}

    def cb(j, c):
        devs[j] = deviation(SQ, c, reference_chain(SQ, c))

    refine(SQ, chain, 1e-3, delta=delta, sweeps=200, callback=cb)
    for j, d in devs.items():
        assert d <= 1.25 * ell * math.exp(-j / n ** 2) + 3 * n * n * delta + 1e-9


@settings(max_examples=12, deadline=None)
@given(st.integers(1, 3), st.floats(0, 1), st.integers(0, 10_000))
def test_run_random(m, density, seed):
    p = random_pip(m, density, seed)
    rng = random.Random(seed)
    x, y = random_point(p, rng), random_point(p, rng)
    res = run(p, x, y, 0.1)
    assert res.chain[0] == x and res.chain[-1] == y
    assert res.stats.max_query_distance <= 0.9
    assert res.stats.oracle_calls == res.stats.sweeps * (res.stats.n - 1)
    for z in res.chain:
        minimal_cell(p, z)
    # never longer than the starting chain by more than the rounding budget
    assert res.length <= res.stats.initial_length + 0.1
    try:
        d = distance(p, x, y)
    except NoCommonVertex:
        return
    assert d - 1e-9 <= res.length <= d + 0.1
