"""Seeded random instances for stress tests and the CLI ``gen`` command.

Instances are rejection-sampled until the degree pairing and the
edge-connectivity condition (local connectivity between paired vertices
equals the degree) hold, then equipped with uniformly random connecting maps
satisfying the inverse-pair law.  Everything is reproducible from the seed.
"""

from __future__ import annotations

import random

from .errors import PreconditionError
from .whitehead import Dart, EdgeRecord, Multigraph, VertexId, WhiteheadGraph


def random_sigma(graph: Multigraph, rng: random.Random) -> dict[Dart, Dart]:
    sigma: dict[Dart, Dart] = {}
    for v in graph.vertices():
        if v.sign < 0:
            continue
        sources = sorted(graph.darts_at(v))
        targets = sorted(graph.darts_at(v.mu()))
        rng.shuffle(targets)
        for d, img in zip(sources, targets):
            sigma[d] = img
            sigma[img] = d
    return sigma


def _lambda_condition(graph: Multigraph) -> bool:
    return all(
        graph.local_edge_connectivity(v, v.mu()) == graph.degree(v)
        for v in graph.active_vertices()
        if v.sign > 0
    )


def random_regular_instance(
    seed: int, k: int, pairs: int, max_attempts: int = 2000
) -> WhiteheadGraph:
    """Random k-regular graph on ``2 * pairs`` vertices meeting the connectivity bar."""
    if k < 2 or pairs < 1:
        raise PreconditionError("need k >= 2 and at least one vertex pair")
    rng = random.Random(("regular", seed, k, pairs).__repr__())
    verts = [VertexId(g, s) for g in range(1, pairs + 1) for s in (1, -1)]
    for _ in range(max_attempts):
        stubs = [v for v in verts for _ in range(k)]
        rng.shuffle(stubs)
        mates = list(zip(stubs[0::2], stubs[1::2]))
        if any(a == b for a, b in mates):
            continue
        edges = [EdgeRecord(i, (a, b)) for i, (a, b) in enumerate(mates)]
        plain = Multigraph(pairs, edges)
        if not _lambda_condition(plain):
            continue
        return WhiteheadGraph(pairs, edges, random_sigma(plain, rng))
    raise PreconditionError(
        f"no valid {k}-regular instance on {2 * pairs} vertices after {max_attempts} tries"
    )


def random_fourvertex_instance(
    seed: int, max_degree: int = 6, max_attempts: int = 2000
) -> WhiteheadGraph:
    """Random connected 4-vertex instance with degrees at most ``max_degree``.

    Degree pairing forces the multiplicity between the positive pair to equal
    the one between the negative pair, and the two mixed multiplicities to
    match; the remaining freedom is sampled directly.
    """
    rng = random.Random(("fourvertex", seed, max_degree).__repr__())
    a, a_inv = VertexId(1, 1), VertexId(1, -1)
    b, b_inv = VertexId(2, 1), VertexId(2, -1)
    cap = max(1, max_degree // 2)
    for _ in range(max_attempts):
        same = rng.randint(0, cap)  # a-b and a'-b' multiplicity
        cross = rng.randint(0, cap)  # a-b' and a'-b multiplicity
        loops_a = rng.randint(0, cap)  # a-a' multiplicity
        loops_b = rng.randint(0, cap)  # b-b' multiplicity
        deg_a = loops_a + same + cross
        deg_b = loops_b + same + cross
        if not (2 <= deg_a <= max_degree and 2 <= deg_b <= max_degree):
            continue
        if same + cross == 0:
            continue  # disconnected
        mates = (
            [(a, a_inv)] * loops_a
            + [(a, b)] * same
            + [(a, b_inv)] * cross
            + [(a_inv, b)] * cross
            + [(a_inv, b_inv)] * same
            + [(b, b_inv)] * loops_b
        )
        edges = [EdgeRecord(i, pair) for i, pair in enumerate(mates)]
        plain = Multigraph(2, edges)
        if not _lambda_condition(plain):
            continue
        return WhiteheadGraph(2, edges, random_sigma(plain, rng))
    raise PreconditionError(
        f"no valid 4-vertex instance with degrees <= {max_degree} after {max_attempts} tries"
    )
