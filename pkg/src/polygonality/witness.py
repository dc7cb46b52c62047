"""Cycle-list witnesses: enumeration, verification, LP search, subdivision.

A witness for a graph with connecting maps is a nonempty multiset of simple
cycles such that for every vertex ``v`` and every unordered pair of distinct
edges ``{e, f}`` at ``v``, as many cycles contain both ``e`` and ``f`` as
contain both of their images under the connecting map at ``v``.  The verifier
checks this directly; the searcher decides existence (optionally demanding a
cycle of length at least three) by an exact rational LP over all simple
cycles and, on failure, returns a rational refutation certificate.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import GraphError, PreconditionError, VerificationError
from .simplex import ZERO, maximize_homogeneous
from .whitehead import Multigraph, VertexId, WhiteheadGraph, graph_hash


@dataclass(frozen=True)
class Cycle:
    """A simple cycle as an edge-id set with a canonical traversal key."""

    edges: frozenset[int]
    key: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.edges)

    @property
    def is_long(self) -> bool:
        return len(self.edges) >= 3


CycleList = dict[Cycle, int]


def make_cycle(graph: Multigraph, eids) -> Cycle:
    """Validate an edge subset as a simple cycle and canonicalize it.

    The subset must induce a connected subgraph in which every touched vertex
    has degree exactly two.  The canonical key is the lexicographically least
    rotation of the cyclic edge-id sequence, in either direction.
    """
    eids = frozenset(eids)
    if len(eids) < 2:
        raise GraphError(f"cycle needs at least two edges, got {sorted(eids)}")
    incidence: dict[VertexId, list[int]] = {}
    for eid in eids:
        if eid not in graph.edges:
            raise GraphError(f"cycle references unknown edge {eid}")
        for v in graph.edges[eid].ends:
            incidence.setdefault(v, []).append(eid)
    for v, es in incidence.items():
        if len(es) != 2:
            raise GraphError(f"edge set {sorted(eids)} has degree {len(es)} at {v}")
    # walk the cycle to get the cyclic edge order (also proves connectivity)
    start = min(incidence)
    seq = []
    v, eid = start, min(incidence[start])
    while True:
        seq.append(eid)
        v = graph.edges[eid].other(v)
        nxt = [x for x in incidence[v] if x != eid]
        eid = nxt[0]
        if v == start:
            break
    if len(seq) != len(eids):
        raise GraphError(f"edge set {sorted(eids)} is not a single cycle")
    key = min(
        tuple(s[i:] + s[:i])
        for s in (seq, list(reversed(seq)))
        for i in range(len(seq))
    )
    return Cycle(eids, key)


def cycle_pair_at(cycle: Cycle, graph: Multigraph, v: VertexId) -> frozenset[int] | None:
    """The two cycle edges at ``v``, or None when the cycle avoids ``v``."""
    es = [eid for eid in cycle.edges if v in graph.edges[eid].ends]
    if not es:
        return None
    return frozenset(es)


def enumerate_cycles(graph: Multigraph) -> list[Cycle]:
    """All simple cycles (edge subsets), bigons included, in canonical order."""
    found: dict[frozenset[int], Cycle] = {}

    def extend(start, v, used, visited):
        for eid in graph.delta(v):
            if eid in used:
                continue
            w = graph.edges[eid].other(v)
            if w == start:
                if used:
                    all_eids = frozenset(used) | {eid}
                    if all_eids not in found:
                        found[all_eids] = make_cycle(graph, all_eids)
            elif w not in visited and start < w:
                extend(start, w, used | {eid}, visited | {w})

    for s in sorted(graph.active_vertices()):
        extend(s, s, frozenset(), {s})
    return sorted(found.values(), key=lambda c: (len(c.edges), c.key))


@dataclass(frozen=True)
class WitnessVerdict:
    ok: bool
    failures: tuple  # (vertex, (e, f), count, image count)
    has_long_cycle: bool
    per_edge_usage: dict[int, int]

    def __bool__(self) -> bool:
        return self.ok


def _pair_counts(graph: Multigraph, cycles: CycleList):
    counts: dict[tuple[VertexId, frozenset[int]], int] = {}
    usage: dict[int, int] = {eid: 0 for eid in graph.edges}
    for cyc, mult in cycles.items():
        for eid in cyc.edges:
            usage[eid] += mult
        seen: set[VertexId] = set()
        for eid in cyc.edges:
            for v in graph.edges[eid].ends:
                if v in seen:
                    continue
                seen.add(v)
                pair = cycle_pair_at(cyc, graph, v)
                counts[(v, pair)] = counts.get((v, pair), 0) + mult
    return counts, usage


def verify_witness(
    graph: WhiteheadGraph,
    cycles: CycleList,
    require_long: bool = False,
    strict_pairs: bool = False,
) -> WitnessVerdict:
    """Check the balanced-pair condition of a cycle list against the graph.

    With ``strict_pairs`` the degenerate single-edge balance (each edge used
    as often as its connecting-map image) is enforced as well.
    """
    if not cycles:
        raise PreconditionError("a witness must be a nonempty cycle list")
    for cyc, mult in cycles.items():
        if mult <= 0:
            raise PreconditionError(f"multiplicity of {sorted(cyc.edges)} must be positive")
        make_cycle(graph, cyc.edges)  # raises if the cycle is not in this graph
    counts, usage = _pair_counts(graph, cycles)
    failures = []
    for v in graph.active_vertices():
        delta = graph.delta(v)
        for i, e in enumerate(delta):
            for f in delta[i + 1 :]:
                here = counts.get((v, frozenset((e, f))), 0)
                img = frozenset((graph.sigma_edge(v, e), graph.sigma_edge(v, f)))
                there = counts.get((v.mu(), img), 0)
                if here != there:
                    failures.append((v, (e, f), here, there))
            if strict_pairs:
                img_e = graph.sigma_edge(v, e)
                if usage[e] != usage[img_e]:
                    failures.append((v, (e, e), usage[e], usage[img_e]))
    has_long = any(c.is_long for c, m in cycles.items() if m > 0)
    ok = not failures and (has_long or not require_long)
    return WitnessVerdict(ok, tuple(failures), has_long, usage)


@dataclass(frozen=True)
class Infeasible:
    """Refutation: rational multipliers certifying that no witness exists."""

    require_long: bool
    certificate: tuple  # ((vertex, (e, f), multiplier as str), ...)
    normalization_dual: str

    def to_json(self, graph: WhiteheadGraph | None = None) -> dict:
        data = {
            "infeasible": True,
            "require_long": self.require_long,
            "farkas": [
                {"vertex": v.name, "pair": [e, f], "value": val}
                for v, (e, f), val in self.certificate
            ],
            "normalization_dual": self.normalization_dual,
        }
        if graph is not None:
            data["graph_hash"] = graph_hash(graph)
        return data


def _constraint_rows(graph: WhiteheadGraph, cycles: list[Cycle]):
    """Deduplicated balance rows: +1 on cycles covering (v,{e,f}), -1 on the image."""
    pair_of_cycle = [
        {v: cycle_pair_at(c, graph, v) for v in graph.active_vertices()} for c in cycles
    ]
    rows = []
    keys = []
    for v in sorted(graph.active_vertices()):
        delta = graph.delta(v)
        for i, e in enumerate(delta):
            for f in delta[i + 1 :]:
                img = tuple(sorted((graph.sigma_edge(v, e), graph.sigma_edge(v, f))))
                this_key = (v, (e, f))
                partner_key = (v.mu(), img)
                if (partner_key[0], partner_key[1]) < (this_key[0], this_key[1]):
                    continue  # the partner emits this row (negated)
                here, there = frozenset((e, f)), frozenset(img)
                row = [
                    (1 if pair_of_cycle[j][v] == here else 0)
                    - (1 if pair_of_cycle[j][v.mu()] == there else 0)
                    for j in range(len(cycles))
                ]
                if any(row):
                    rows.append(row)
                    keys.append((v, (e, f)))
    return rows, keys


def search_witness_lp(graph: WhiteheadGraph, require_long: bool = True):
    """Find an integer witness or refute its existence, in exact arithmetic.

    Maximizes the total weight on long cycles (or on all cycles when
    ``require_long`` is off) subject to the balance equations and a unit
    normalization.  A positive optimum scales to integer multiplicities; a
    zero optimum yields a verified rational refutation certificate.

    Returns a :class:`CycleList` or an :class:`Infeasible`.
    """
    cycles = enumerate_cycles(graph)
    rows, keys = _constraint_rows(graph, cycles)
    if not cycles:
        return Infeasible(require_long, (), "0")
    objective = [1 if (c.is_long or not require_long) else 0 for c in cycles]
    res = maximize_homogeneous(rows, objective, stop_when_positive=True)
    if res.objective > 0:
        denom_lcm = 1
        for val in res.x:
            d = int(val.denominator)
            denom_lcm = denom_lcm // gcd(denom_lcm, d) * d
        witness: CycleList = {}
        for c, val in zip(cycles, res.x):
            m = int(val * denom_lcm)
            if m:
                witness[c] = m
        verdict = verify_witness(graph, witness, require_long=require_long)
        if not verdict.ok:
            raise VerificationError("LP produced a list failing verification")
        return witness
    # optimum is zero: validate the dual certificate before reporting
    duals = res.duals
    norm_dual = duals[len(rows)]
    if norm_dual < 0:
        raise VerificationError("refutation certificate has negative slack multiplier")
    for j, c in enumerate(cycles):
        lhs = sum((duals[i] * rows[i][j] for i in range(len(rows))), ZERO) + norm_dual
        if lhs < objective[j]:
            raise VerificationError(f"refutation certificate fails on cycle {sorted(c.edges)}")
    certificate = tuple(
        (v, pair, str(duals[i])) for i, (v, pair) in enumerate(keys) if duals[i] != 0
    )
    return Infeasible(require_long, certificate, str(norm_dual))


# -- witness (de)serialization ----------------------------------------------


def witness_to_json(graph: WhiteheadGraph, cycles: CycleList) -> dict:
    verdict = verify_witness(graph, cycles)
    ordered = sorted(cycles.items(), key=lambda kv: (len(kv[0].edges), kv[0].key))
    return {
        "graph_hash": graph_hash(graph),
        "cycles": [
            {"edges": sorted(c.edges), "multiplicity": m} for c, m in ordered
        ],
        "long_cycle_present": verdict.has_long_cycle,
        "per_edge_usage": {str(eid): n for eid, n in sorted(verdict.per_edge_usage.items())},
    }


def witness_from_json(graph: WhiteheadGraph, data: dict) -> CycleList:
    try:
        entries = [(frozenset(c["edges"]), int(c["multiplicity"])) for c in data["cycles"]]
    except (KeyError, TypeError) as exc:
        raise GraphError(f"malformed witness JSON: {exc}") from exc
    if "graph_hash" in data and data["graph_hash"] != graph_hash(graph):
        raise VerificationError("witness was produced for a different graph")
    out: CycleList = {}
    for eids, mult in entries:
        cyc = make_cycle(graph, eids)
        out[cyc] = out.get(cyc, 0) + mult
    return out


# -- subdivision --------------------------------------------------------------


@dataclass(frozen=True)
class SubdividedGraph:
    """Path-subdivided graph with the extended fixed-point-free involution.

    Nodes are either original :class:`VertexId` values or triples
    ``('s', i, j)`` for the j-th interior vertex on the path replacing the
    i-th edge (both 1-based, edges ranked by id).
    """

    nodes: tuple
    edges: tuple[tuple, ...]
    mu: dict

    def edge_count(self) -> int:
        return len(self.edges)


def subdivide(graph: Multigraph, m: int, extend_involution: bool = True) -> SubdividedGraph:
    """Replace every edge by a path of length ``m``.

    The involution extension pairs interior vertices across paths by the rule
    ``(i, j) <-> (j, i-1)``; it is only defined when ``m`` equals the number
    of edges (the degenerate ``m = 1`` leaves the graph unchanged).
    """
    if m < 1:
        raise PreconditionError(f"subdivision length must be >= 1, got {m}")
    eids = graph.edge_ids()
    if extend_involution and m != 1 and m != len(eids):
        raise PreconditionError(
            f"involution extension needs m = |E| = {len(eids)}, got m = {m}"
        )
    nodes: list = list(graph.vertices())
    edges: list[tuple] = []
    for rank, eid in enumerate(eids, start=1):
        u, v = graph.edges[eid].ends
        chain = [u] + [("s", rank, j) for j in range(1, m)] + [v]
        nodes.extend(chain[1:-1])
        edges.extend((chain[t], chain[t + 1]) for t in range(m))
    mu: dict = {v: v.mu() for v in graph.vertices()}
    if extend_involution:
        n_edges = len(eids)
        for i in range(1, n_edges + 1):
            for j in range(1, m):
                mu[("s", i, j)] = ("s", j, i - 1) if j < i else ("s", j + 1, i)
    for node, img in mu.items():
        if img == node:
            raise VerificationError(f"extended involution fixes {node}")
        if img not in mu or mu[img] != node:
            raise VerificationError(f"extended involution is not involutive at {node}")
    return SubdividedGraph(tuple(nodes), tuple(edges), mu)
