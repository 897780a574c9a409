"""Deciding a fixed embedding through a flow network.

Every switch sends one unit of flow to the angle it makes large.  Faces
demand as many large angles as their switch-angle count allows, and the
network is then pruned and extended so that flows of full value correspond to
good angle assignments.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .construct import construct, validate_ube
from .graph import L, R, CombinatorialEmbedding, PartitionedDigraph, component_embedding, lift_dart
from .upward import dart_types, is_bimodal_at, is_switch_angle, maximal_paths


class NotBimodal(ValueError):
    pass


@dataclass
class FlowNetwork:
    """Unit-capacity network with supplies at switches and demands at faces.

    ``angle_face`` holds the angle nodes still present, keyed by angle with
    their face.  ``arcs_out`` lists the sinks each angle node can feed: its
    face sink ``("f", face)`` and possibly one pair sink ``("p", index)``.
    """

    sources: dict[int, list[int]] = field(default_factory=dict)  # switch -> its angle nodes
    angle_vertex: dict[int, int] = field(default_factory=dict)
    angle_face: dict[int, int] = field(default_factory=dict)
    arcs_out: dict[int, list[tuple[str, int]]] = field(default_factory=dict)
    face_demand: dict[int, int] = field(default_factory=dict)
    pair_sinks: list[tuple[int, int, int]] = field(default_factory=list)  # (face, angle, angle)

    @property
    def total_supply(self) -> int:
        return len(self.sources)

    @property
    def total_demand(self) -> int:
        return sum(self.face_demand.values()) + len(self.pair_sinks)

    def source_degree(self, v: int) -> int:
        return len(self.sources[v])

    def remove_angle(self, a: int):
        v = self.angle_vertex.pop(a)
        self.sources[v].remove(a)
        del self.angle_face[a]
        del self.arcs_out[a]

    def copy(self) -> "FlowNetwork":
        return FlowNetwork(
            {v: list(x) for v, x in self.sources.items()},
            dict(self.angle_vertex),
            dict(self.angle_face),
            {a: list(x) for a, x in self.arcs_out.items()},
            dict(self.face_demand),
            list(self.pair_sinks),
        )


def check_invariants(net: FlowNetwork):
    """Demand preservation and the shape of angle-node out-arcs."""
    assert net.total_supply == net.total_demand, "supply and demand diverged"
    for a, outs in net.arcs_out.items():
        f = net.angle_face[a]
        assert outs[0] == ("f", f), f"angle {a} lost its face arc"
        assert len(outs) <= 2, f"angle {a} feeds more than one pair sink"
        for kind, i in outs[1:]:
            assert kind == "p" and net.pair_sinks[i][0] == f, f"angle {a} feeds a foreign sink"


def build_base_network(graph: PartitionedDigraph, emb: CombinatorialEmbedding) -> FlowNetwork:
    for v in range(graph.n):
        if not is_bimodal_at(emb, v):
            raise NotBimodal(f"vertex {v} is not bimodal")
    nxt = emb.cw_next
    net = FlowNetwork()
    switch_count = {f.index: 0 for f in emb.faces}
    for d in range(2 * graph.m):
        if is_switch_angle(d, nxt[d]):
            switch_count[emb.face_of_angle(d)] += 1
    for f in emb.faces:
        net.face_demand[f.index] = switch_count[f.index] // 2 + (1 if f.outer else -1)
    for v in range(graph.n):
        if not graph.is_switch(v):
            continue
        net.sources[v] = list(emb.rotation[v])
        for a in emb.rotation[v]:
            f = emb.face_of_angle(a)
            net.angle_vertex[a] = v
            net.angle_face[a] = f
            net.arcs_out[a] = [("f", f)]
    return net


REJECT = None


def n_modifier(graph: PartitionedDigraph, emb: CombinatorialEmbedding, net: FlowNetwork, *, debug: bool = False) -> FlowNetwork | None:
    """Prune and extend the base network; None means no good assignment exists."""
    net = net.copy()
    if any(x < 0 for x in net.face_demand.values()):
        return REJECT
    types = dart_types(graph)
    nxt = emb.cw_next
    for v in range(graph.n):
        rot = emb.rotation[v]
        if not rot:
            continue
        if not graph.is_switch(v):
            if sum((types[nxt[a]] - types[a]) % 4 for a in rot) != 4:
                return REJECT
            continue
        pages = [types[d] in (0, 3) for d in rot]  # True for page L
        changes = sum(1 for i in range(len(rot)) if pages[i] != pages[i - 1])
        if changes > 2:
            return REJECT
        if changes == 0:
            continue
        src = graph.is_source(v)
        # the large angle must turn from the right block back to the left one
        keep = None
        for i, a in enumerate(rot):
            j = (i + 1) % len(rot)
            if src and not pages[i] and pages[j]:
                keep = a
            if not src and pages[i] and not pages[j]:
                keep = a
        for a in list(net.sources[v]):
            if a != keep:
                net.remove_angle(a)
        if debug:
            check_invariants(net)
    edges = graph.edges
    for f in emb.faces:
        total = len(f.darts)
        for path in maximal_paths(emb, f.index):
            bad_page = L if path.face_on_left else R
            if any(edges[d >> 1].page != bad_page for d in path.darts):
                continue
            if total - len(path.darts) == 1:
                continue
            x, y = path.start_angle, path.end_angle
            ex, ey = x in net.angle_face, y in net.angle_face
            if not ex and not ey:
                return REJECT
            if ex != ey:
                keep = x if ex else y
                v = net.angle_vertex[keep]
                for a in list(net.sources[v]):
                    if a != keep:
                        net.remove_angle(a)
            else:
                if net.source_degree(net.angle_vertex[x]) == 1 or net.source_degree(net.angle_vertex[y]) == 1:
                    continue
                idx = len(net.pair_sinks)
                net.pair_sinks.append((f.index, x, y))
                net.arcs_out[x].append(("p", idx))
                net.arcs_out[y].append(("p", idx))
                net.face_demand[f.index] -= 1
                if net.face_demand[f.index] < 0:
                    return REJECT
            if debug:
                check_invariants(net)
    return net


class _Dinic:
    def __init__(self, n: int):
        self.n = n
        self.head = [[] for _ in range(n)]
        self.to: list[int] = []
        self.cap: list[int] = []

    def add(self, u: int, v: int, c: int) -> int:
        self.head[u].append(len(self.to))
        self.to.append(v)
        self.cap.append(c)
        self.head[v].append(len(self.to))
        self.to.append(u)
        self.cap.append(0)
        return len(self.to) - 2

    def maxflow(self, s: int, t: int) -> int:
        flow = 0
        to, cap, head = self.to, self.cap, self.head
        while True:
            level = [-1] * self.n
            level[s] = 0
            q = deque([s])
            while q:
                u = q.popleft()
                for e in head[u]:
                    if cap[e] and level[to[e]] < 0:
                        level[to[e]] = level[u] + 1
                        q.append(to[e])
            if level[t] < 0:
                return flow
            it = [0] * self.n
            while True:
                # iterative blocking-flow search for one augmenting path
                path = []
                u = s
                while u != t:
                    adv = False
                    while it[u] < len(head[u]):
                        e = head[u][it[u]]
                        v = to[e]
                        if cap[e] and level[v] == level[u] + 1:
                            path.append(e)
                            u = v
                            adv = True
                            break
                        it[u] += 1
                    if not adv:
                        if u == s:
                            break
                        level[u] = -1
                        e = path.pop()
                        u = to[e ^ 1]
                        it[u] += 1
                if u != t:
                    break
                push = min(cap[e] for e in path)
                for e in path:
                    cap[e] -= push
                    cap[e ^ 1] += push
                flow += push


@dataclass
class FlowResult:
    value: int
    demand: int
    large: dict[int, int]  # switch -> angle receiving its unit

    @property
    def feasible(self) -> bool:
        return self.value == self.demand


def solve(net: FlowNetwork) -> FlowResult:
    ids: dict[tuple, int] = {}

    def node(key):
        if key not in ids:
            ids[key] = len(ids)
        return ids[key]

    S, T = node(("S",)), node(("T",))
    arcs: list[tuple[int, int, int, int]] = []
    for v, angle_list in net.sources.items():
        arcs.append((S, node(("s", v)), 1, -1))
        for a in angle_list:
            arcs.append((node(("s", v)), node(("w", a)), 1, a))
    for a, outs in net.arcs_out.items():
        for kind, i in outs:
            arcs.append((node(("w", a)), node((kind, i)), 1, -1))
    for f, dem in net.face_demand.items():
        if dem > 0:
            arcs.append((node(("f", f)), T, dem, -1))
    for i in range(len(net.pair_sinks)):
        arcs.append((node(("p", i)), T, 1, -1))
    din = _Dinic(len(ids))
    handles = []
    for u, v, c, a in arcs:
        h = din.add(u, v, c)
        if a >= 0:
            handles.append((h, a))
    value = din.maxflow(S, T)
    large = {}
    for h, a in handles:
        if din.cap[h] == 0:
            large[net.angle_vertex[a]] = a
    demand = net.total_demand if net.total_demand == net.total_supply else -1
    return FlowResult(value, demand, large)


def assignment_from_flow(graph: PartitionedDigraph, emb: CombinatorialEmbedding, result: FlowResult) -> dict[int, int]:
    nxt = emb.cw_next
    lam = {}
    for d in range(2 * graph.m):
        lam[d] = -1 if is_switch_angle(d, nxt[d]) else 0
    for a in result.large.values():
        lam[a] = 1
    return lam


@dataclass
class FixedResult:
    ok: bool
    lam: dict[int, int] | None = None
    order: list[int] | None = None
    reason: str | None = None

    def __bool__(self):
        return self.ok


def _host_has_both_pages(emb: CombinatorialEmbedding, f: int) -> bool:
    pages = {emb.graph.edges[d >> 1].page for d in emb.faces[f].darts}
    return len(pages) == 2


def test_fixed(graph: PartitionedDigraph, emb: CombinatorialEmbedding, *, debug: bool = False) -> FixedResult:
    """Whether some spine order realizes ``emb``; on success a good assignment and the order."""
    if not graph.is_acyclic():
        return FixedResult(False, reason="cyclic")
    for v in range(graph.n):
        if not is_bimodal_at(emb, v):
            return FixedResult(False, reason=f"vertex {v} is not bimodal")
    lam: dict[int, int] = {}
    for ci, comp in enumerate(graph.components):
        if graph.degree(comp[0]) == 0:
            continue
        if len(graph.components) == 1:
            sub, sub_emb, emap = graph, emb, list(range(graph.m))
        else:
            sub, sub_emb, _, emap = component_embedding(emb, ci)
        net = n_modifier(sub, sub_emb, build_base_network(sub, sub_emb), debug=debug)
        if net is None:
            return FixedResult(False, reason=f"component {ci} rejected while pruning")
        res = solve(net)
        if not res.feasible:
            return FixedResult(False, reason=f"component {ci} has no flow of full value")
        for a, x in assignment_from_flow(sub, sub_emb, res).items():
            lam[lift_dart(a, emap)] = x
    for c, f in emb.canonical_hosts().items():
        if not _host_has_both_pages(emb, f):
            return FixedResult(False, reason=f"face {f} cannot host component {c}")
    order = construct(graph, emb, lam, check=debug)
    assert validate_ube(graph, order)
    return FixedResult(True, lam, order)
