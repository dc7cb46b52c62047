"""Shared fixtures and independent brute-force oracles.

The oracles here deliberately avoid the library's own algorithms: cycles are
found by filtering edge subsets, pair counts by direct recounting, witness
existence by bounded enumeration of multiplicity vectors.
"""

from __future__ import annotations

import itertools

import pytest

import polygonality as pg
from polygonality.whitehead import EdgeRecord, Multigraph, VertexId


def words_graph(text: str) -> pg.WhiteheadGraph:
    return pg.build_whitehead_graph(pg.parse_word_list(text))


@pytest.fixture
def commutator():
    return words_graph("rank 2\nabAB\n")


@pytest.fixture
def refutation_graph():
    # a(ab^-1)^3 b^-2, the known two-connected-but-not-minimal instance
    return words_graph("rank 2\na(aB)^3B^2\n")


@pytest.fixture
def nonminimal_graph():
    return words_graph("rank 2\nabab^2ab^3\n")


@pytest.fixture
def polygonal_graph():
    return words_graph("rank 2\naBa^2b\n")


def make_plain(rank: int, pairs) -> Multigraph:
    return Multigraph(rank, [EdgeRecord(i, p) for i, p in enumerate(pairs)])


def vid(gen: int, sign: int) -> VertexId:
    return VertexId(gen, sign)


# -- oracles ------------------------------------------------------------------


def oracle_is_cycle(graph: Multigraph, eids: frozenset[int]) -> bool:
    """Degree-2-everywhere plus edge connectivity, checked from scratch."""
    if len(eids) < 2:
        return False
    deg: dict = {}
    for e in eids:
        for v in graph.edges[e].ends:
            deg[v] = deg.get(v, 0) + 1
    if any(d != 2 for d in deg.values()):
        return False
    seen = set()
    stack = [next(iter(eids))]
    while stack:
        e = stack.pop()
        if e in seen:
            continue
        seen.add(e)
        for f in eids:
            if f not in seen and set(graph.edges[e].ends) & set(graph.edges[f].ends):
                stack.append(f)
    return len(seen) == len(eids)


def oracle_all_cycles(graph: Multigraph) -> set[frozenset[int]]:
    eids = graph.edge_ids()
    out = set()
    for r in range(2, len(eids) + 1):
        for sub in itertools.combinations(eids, r):
            fs = frozenset(sub)
            if oracle_is_cycle(graph, fs):
                out.add(fs)
    return out


def oracle_pair_count(graph, cycles: dict, v, e, f) -> int:
    """Cycles (with multiplicity) containing both edges e and f."""
    return sum(m for c, m in cycles.items() if e in c.edges and f in c.edges)


def oracle_balanced(graph: pg.WhiteheadGraph, cycles: dict) -> bool:
    for v in graph.active_vertices():
        delta = graph.delta(v)
        for e, f in itertools.combinations(delta, 2):
            img_e = graph.sigma_edge(v, e)
            img_f = graph.sigma_edge(v, f)
            if oracle_pair_count(graph, cycles, v, e, f) != oracle_pair_count(
                graph, cycles, v.mu(), img_e, img_f
            ):
                return False
    return True


def oracle_bounded_witness_search(
    graph: pg.WhiteheadGraph, bound: int, require_long: bool
):
    """Smallest balanced multiplicity vector with entries <= bound, or None."""
    cycles = pg.enumerate_cycles(graph)
    for total in range(1, bound * len(cycles) + 1):
        for mults in _compositions(total, len(cycles), bound):
            chosen = {c: m for c, m in zip(cycles, mults) if m}
            if not chosen:
                continue
            if require_long and not any(c.is_long for c in chosen):
                continue
            if oracle_balanced(graph, chosen):
                return chosen
    return None


def _compositions(total: int, parts: int, bound: int):
    if parts == 1:
        if total <= bound:
            yield (total,)
        return
    for head in range(min(total, bound) + 1):
        for rest in _compositions(total - head, parts - 1, bound):
            yield (head,) + rest
