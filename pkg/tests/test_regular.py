import itertools

import pytest
from hypothesis import given, settings, strategies as st

import polygonality as pg
from polygonality.errors import GraphError, PreconditionError
from polygonality.generators import random_regular_instance
from polygonality.regular import (
    enumerate_perfect_matchings,
    fractional_edge_coloring,
    is_k_graph,
    regular_witness,
)

from conftest import make_plain, vid


def k4():
    vs = [vid(1, 1), vid(1, -1), vid(2, 1), vid(2, -1)]
    return make_plain(2, list(itertools.combinations(vs, 2)))


def triangle():
    vs = [vid(1, 1), vid(1, -1), vid(2, 1)]
    return make_plain(2, list(itertools.combinations(vs, 2)))


def bigon():
    return make_plain(1, [(vid(1, 1), vid(1, -1))] * 2)


def test_is_k_graph_four_cycle(commutator):
    verdict = is_k_graph(commutator)
    assert verdict.ok and verdict.k == 2


def test_is_k_graph_triangle():
    verdict = is_k_graph(triangle())
    assert not verdict.ok and len(verdict.violating_set) == 3


def test_is_k_graph_k4():
    verdict = is_k_graph(k4())
    assert verdict.ok and verdict.k == 3


def test_is_k_graph_rejects_irregular(nonminimal_graph):
    with pytest.raises(PreconditionError):
        is_k_graph(nonminimal_graph)


def test_matchings_four_cycle(commutator):
    ms = enumerate_perfect_matchings(commutator)
    assert len(ms) == 2
    assert {frozenset(m.edges) for m in ms} == {frozenset({0, 2}), frozenset({1, 3})}


def test_matchings_triangle_and_k4():
    assert enumerate_perfect_matchings(triangle()) == []
    assert len(enumerate_perfect_matchings(k4())) == 3


def test_coloring_four_cycle(commutator):
    col = fractional_edge_coloring(commutator, 2)
    assert col.ell == 2 and len(col.entries) == 2
    assert all(n == 1 for _, n in col.entries)


def test_coloring_bigon():
    col = fractional_edge_coloring(bigon(), 2)
    assert col.ell == 2
    assert sorted(sorted(m.edges) for m, _ in col.entries) == [[0], [1]]


def test_coloring_k4():
    col = fractional_edge_coloring(k4(), 3)
    assert col.ell == 3 and len(col.entries) == 3


def test_coloring_requires_k_graph():
    with pytest.raises(GraphError):
        fractional_edge_coloring(triangle(), 2)
    with pytest.raises(PreconditionError):
        fractional_edge_coloring(k4(), 2)


def test_regular_witness_four_cycle(commutator):
    rw = regular_witness(commutator)
    assert rw.m1 == 1 and rw.m2 == 1
    assert len(rw.cycles) == 1 and next(iter(rw.cycles.values())) == 1


def test_regular_witness_k4():
    rw = regular_witness(k4())
    assert rw.m1 == 2 and rw.m2 == 1
    assert sum(rw.cycles.values()) == 3
    assert all(len(c) == 4 for c in rw.cycles)


def test_regular_witness_bigon():
    rw = regular_witness(bigon())
    assert sum(rw.cycles.values()) == 1
    assert not any(c.is_long for c in rw.cycles)  # a lone bigon is permitted here


def test_symmetric_difference_degree_property():
    graph = k4()
    ms = enumerate_perfect_matchings(graph)
    for a, b in itertools.combinations(ms, 2):
        diff = a.edges ^ b.edges
        deg = {}
        for eid in diff:
            for v in graph.edges[eid].ends:
                deg[v] = deg.get(v, 0) + 1
        assert all(d == 2 for d in deg.values())


@given(st.integers(0, 200))
@settings(max_examples=60, deadline=None)
def test_count_constants_random(seed):
    k = [2, 3, 4][seed % 3]
    pairs = 1 + (seed // 3) % 4
    if 2 * pairs * k % 2:
        return
    graph = random_regular_instance(seed, k, pairs)
    # the generator enforces the connectivity bar, so the odd-cut bound follows
    assert is_k_graph(graph).ok
    rw = regular_witness(graph)
    share = rw.ell // rw.k
    assert rw.m1 == share * (rw.ell - share)
    assert rw.m2 == share * share
    assert pg.verify_witness(graph, rw.cycles).ok
    # adjacent non-parallel edges force a long cycle through them (m2 > 0)
    if graph.is_connected() and 2 * pairs >= 4:
        has_nonparallel_pair = any(
            frozenset(graph.edges[e].ends) != frozenset(graph.edges[f].ends)
            for v in graph.active_vertices()
            for e, f in itertools.combinations(graph.delta(v), 2)
        )
        if has_nonparallel_pair:
            assert pg.verify_witness(graph, rw.cycles, require_long=True).ok


def test_verify_passes_with_long_requirement(polygonal_graph):
    # connected, four vertices, adjacent non-parallel edges force a long cycle
    sub = polygonal_graph.remove_edges([2])  # drop the a-a^-1 edge: 2-regular
    rw = regular_witness(sub)
    assert any(c.is_long for c in rw.cycles)


@given(st.integers(0, 60))
@settings(max_examples=20, deadline=None)
def test_existence_implies_lp_feasibility(seed):
    from polygonality.witness import Infeasible

    k = (2, 3, 4)[seed % 3]
    graph = random_regular_instance(seed, k, 1 + seed % 3)
    regular_witness(graph)  # construction succeeds on every generated instance
    assert not isinstance(pg.search_witness_lp(graph, require_long=False), Infeasible)
