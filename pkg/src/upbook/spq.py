"""Series-parallel decomposition trees of biconnected partial 2-trees."""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import PartitionedDigraph


class NotBiconnected(ValueError):
    pass


class NotPartial2Tree(ValueError):
    pass


def _adjacency(graph: PartitionedDigraph, edge_ids=None) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {}
    ids = range(graph.m) if edge_ids is None else edge_ids
    for i in ids:
        t, h, _ = graph.edges[i]
        adj.setdefault(t, set()).add(h)
        adj.setdefault(h, set()).add(t)
    return adj


def is_partial_2tree(graph: PartitionedDigraph) -> bool:
    """Treewidth at most two: peel vertices of degree at most two, closing the gap they leave."""
    adj = {v: set() for v in range(graph.n)}
    for t, h, _ in graph.edges:
        adj[t].add(h)
        adj[h].add(t)
    stack = [v for v in adj if len(adj[v]) <= 2]
    alive = set(adj)
    while stack:
        v = stack.pop()
        if v not in alive or len(adj[v]) > 2:
            continue
        alive.discard(v)
        nbrs = list(adj[v])
        for w in nbrs:
            adj[w].discard(v)
        if len(nbrs) == 2:
            a, b = nbrs
            adj[a].add(b)
            adj[b].add(a)
        for w in nbrs:
            if len(adj[w]) <= 2:
                stack.append(w)
        adj[v].clear()
    return not alive


def articulation_points(adj: dict[int, set[int]]) -> set[int]:
    """Cut vertices of an undirected graph given as adjacency sets (iterative DFS)."""
    disc: dict[int, int] = {}
    low: dict[int, int] = {}
    cuts = set()
    timer = 0
    for root in sorted(adj):
        if root in disc:
            continue
        disc[root] = low[root] = timer
        timer += 1
        children = 0
        stack = [(root, None, iter(sorted(adj[root])))]
        while stack:
            v, parent, it = stack[-1]
            for w in it:
                if w == parent:
                    continue
                if w in disc:
                    low[v] = min(low[v], disc[w])
                else:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, v, iter(sorted(adj[w]))))
                    if v == root:
                        children += 1
                    break
            else:
                stack.pop()
                if parent is not None:
                    low[parent] = min(low[parent], low[v])
                    if parent != root and low[v] >= disc[parent]:
                        cuts.add(parent)
        if children > 1:
            cuts.add(root)
    return cuts


def is_biconnected(graph: PartitionedDigraph) -> bool:
    if graph.n < 3 or not graph.is_connected():
        return False
    return not articulation_points(_adjacency(graph))


@dataclass
class SpqNode:
    kind: str  # "S", "P" or "Q"
    poles: tuple[int, int]
    edges: frozenset[int]
    children: list["SpqNode"] = field(default_factory=list)
    edge: int | None = None  # for Q nodes
    index: int = -1

    @property
    def vertices(self) -> set[int]:
        return self._vertices

    def __repr__(self):
        inner = ", ".join(map(repr, self.children))
        tag = f"Q{self.edge}" if self.kind == "Q" else self.kind
        return f"{tag}{self.poles}" + (f"[{inner}]" if inner else "")


@dataclass
class SpqTree:
    graph: PartitionedDigraph
    reference_edge: int
    root: SpqNode  # the Q node of the reference edge; its only child spans the rest
    nodes: list[SpqNode]  # children before parents

    @property
    def top(self) -> SpqNode:
        return self.root.children[0]


def build_spq(graph: PartitionedDigraph, reference_edge: int, *, validate: bool = True) -> SpqTree:
    """SPQ-tree rooted at the Q-node of ``reference_edge``.

    Pass ``validate=False`` only for graphs already known to be biconnected
    partial 2-trees.
    """
    if validate:
        if graph.m < 2 or not is_biconnected(graph):
            raise NotBiconnected("need a biconnected graph with at least two edges")
        if not is_partial_2tree(graph):
            raise NotPartial2Tree("treewidth exceeds two")
    t, h, _ = graph.edges[reference_edge]
    nodes: list[SpqNode] = []
    rest = frozenset(range(graph.m)) - {reference_edge}
    top = _decompose(graph, (t, h), rest, nodes)
    root = SpqNode("Q", (t, h), frozenset([reference_edge]), [top], edge=reference_edge)
    _finish(graph, root)
    root.index = len(nodes)
    nodes.append(root)
    return SpqTree(graph, reference_edge, root, nodes)


def _finish(graph, node):
    vs = set()
    for e in node.edges:
        vs.add(graph.edges[e].tail)
        vs.add(graph.edges[e].head)
    node._vertices = vs


def _decompose(graph: PartitionedDigraph, poles: tuple[int, int], edge_ids: frozenset[int], out: list[SpqNode]) -> SpqNode:
    u, v = poles
    if len(edge_ids) == 1:
        (e,) = edge_ids
        node = SpqNode("Q", poles, edge_ids, edge=e)
    else:
        adj = _adjacency(graph, edge_ids)
        cuts = articulation_points(adj) - {u, v}
        if cuts:
            w = min(cuts)
            side = {u}
            stack = [u]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y != w and y not in side:
                        side.add(y)
                        stack.append(y)
            first = frozenset(e for e in edge_ids if graph.edges[e].tail in side or graph.edges[e].head in side)
            second = edge_ids - first
            node = SpqNode("S", poles, edge_ids, [
                _decompose(graph, (u, w), first, out),
                _decompose(graph, (w, v), second, out),
            ])
        else:
            seen = {u, v}
            groups = []
            direct = None
            for e in sorted(edge_ids):
                a, b, _ = graph.edges[e]
                if {a, b} == {u, v}:
                    direct = e
            for start in sorted(adj):
                if start in seen:
                    continue
                comp = {start}
                seen.add(start)
                stack = [start]
                while stack:
                    x = stack.pop()
                    for y in adj[x]:
                        if y not in seen:
                            seen.add(y)
                            comp.add(y)
                            stack.append(y)
                groups.append(frozenset(e for e in edge_ids if graph.edges[e].tail in comp or graph.edges[e].head in comp))
            if len(groups) + (direct is not None) < 2:
                raise NotPartial2Tree("a rigid component separates the poles")
            groups.sort(key=min)
            children = [_decompose(graph, poles, g, out) for g in groups]
            if direct is not None:
                children.append(_decompose(graph, poles, frozenset([direct]), out))
            node = SpqNode("P", poles, edge_ids, children)
    _finish(graph, node)
    node.index = len(out)
    out.append(node)
    return node
