"""Exhaustive deciders for small instances, plus the subdivision reduction.

These are deliberately simple and serve as ground truth for the rest of the
package.  Everything here is exponential.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterator

from .graph import L, R, CombinatorialEmbedding, Edge, MalformedRotation, PartitionedDigraph
from .upward import enumerate_assignments, is_bimodal_at

DEFAULT_CAP = 10


class CapExceeded(ValueError):
    pass


def _check_cap(graph: PartitionedDigraph, cap: int | None):
    limit = DEFAULT_CAP if cap is None else cap
    if graph.n > limit:
        raise CapExceeded(f"{graph.n} vertices exceeds the cap of {limit}")


class _SpineSearch:
    """Depth-first search over spine prefixes with one stack of open tails per page."""

    def __init__(self, graph: PartitionedDigraph):
        self.g = graph
        n = graph.n
        self.preds = [0] * n
        self.heads = {L: [0] * n, R: [0] * n}
        for t, h, p in graph.edges:
            self.preds[h] |= 1 << t
            self.heads[p][t] |= 1 << h

    def step(self, stacks, v):
        """Stacks after placing ``v``, or None if an arc would cross."""
        out = []
        bit = 1 << v
        for p, stack in zip((L, R), stacks):
            low = None
            for i, (_, pending) in enumerate(stack):
                if pending & bit:
                    low = i
                    break
            if low is None:
                new = list(stack)
            else:
                for _, pending in stack[low + 1:]:
                    if pending != bit:
                        return None
                tail, pending = stack[low]
                new = list(stack[:low])
                if pending != bit:
                    new.append((tail, pending & ~bit))
            if self.heads[p][v]:
                new.append((v, self.heads[p][v]))
            out.append(tuple(new))
        return tuple(out)

    def orders(self, memo: bool = True) -> Iterator[list[int]]:
        """Every valid spine order, lexicographically."""
        n = self.g.n
        full = (1 << n) - 1
        dead = set()
        order: list[int] = []

        def rec(mask, stacks):
            if mask == full:
                yield list(order)
                return
            key = (mask, stacks)
            if memo and key in dead:
                return
            found = False
            for v in range(n):
                if mask >> v & 1 or self.preds[v] & ~mask:
                    continue
                nxt = self.step(stacks, v)
                if nxt is None:
                    continue
                order.append(v)
                for res in rec(mask | 1 << v, nxt):
                    found = True
                    yield res
                order.pop()
            if not found:
                dead.add(key)

        yield from rec(0, ((), ()))


def all_ubes(graph: PartitionedDigraph, cap: int | None = None) -> Iterator[list[int]]:
    _check_cap(graph, cap)
    return _SpineSearch(graph).orders()


def brute_force_ube(graph: PartitionedDigraph, cap: int | None = None) -> list[int] | None:
    """Lexicographically first upward 2-page book embedding, or None."""
    return next(iter(all_ubes(graph, cap)), None)


def brute_force_ube_fixed(graph: PartitionedDigraph, embedding: CombinatorialEmbedding, cap: int | None = None) -> list[int] | None:
    """First spine order whose induced embedding equals ``embedding``."""
    from .construct import induced_embedding

    for order in all_ubes(graph, cap):
        emb, _ = induced_embedding(graph, order)
        if emb.same_as(embedding):
            return order
    return None


# ------------------------------------------------------------ embeddings


def _cyclic_orders(items: tuple[int, ...]) -> list[tuple[int, ...]]:
    if len(items) <= 2:
        return [tuple(items)]
    first, rest = items[0], items[1:]
    return [(first,) + p for p in itertools.permutations(rest)]


def planar_rotations(graph: PartitionedDigraph) -> Iterator[CombinatorialEmbedding]:
    """All planar rotation systems of a connected graph, each with every outer face."""
    choices = [_cyclic_orders(graph.darts_at[v]) for v in range(graph.n)]
    for rot in itertools.product(*choices):
        try:
            base = CombinatorialEmbedding(graph, rot, {0: 0} if graph.m else {})
        except MalformedRotation:
            continue
        if graph.m == 0:
            yield base
            continue
        for f in base.faces:
            yield CombinatorialEmbedding(graph, rot, {0: f.darts[0]})


def enumerate_embeddings(graph: PartitionedDigraph) -> Iterator[CombinatorialEmbedding]:
    """Every planar embedding once, including the relative placement of components."""
    if graph.is_connected():
        yield from planar_rotations(graph)
        return
    comps = graph.components
    edged = [c for c in range(len(comps)) if graph.degree(comps[c][0]) > 0]
    if not edged:
        yield CombinatorialEmbedding(graph, [() for _ in range(graph.n)], {})
        return
    per_comp = []
    for c in edged:
        sub, vmap, emap = graph.subgraph(comps[c])
        options = []
        for emb in planar_rotations(sub):
            rot = {}
            for nv, ov in enumerate(vmap):
                rot[ov] = tuple(2 * emap[d >> 1] + (d & 1) for d in emb.rotation[nv])
            outer = 2 * emap[emb.outer[0] >> 1] + (emb.outer[0] & 1)
            options.append((rot, outer))
        per_comp.append(options)
    for picks in itertools.product(*per_comp):
        rotation = [()] * graph.n
        outer = {}
        for c, (rot, od) in zip(edged, picks):
            for v, r in rot.items():
                rotation[v] = r
            outer[c] = od
        base = CombinatorialEmbedding(graph, rotation, outer, {c: outer[edged[0]] for c in edged[1:]})
        internal = {c: [f for f in base.faces if f.component == c and not f.outer] for c in edged}
        host_options = []
        for c in edged:
            opts = [None] + [(a, f.darts[0]) for a in edged if a != c for f in internal[a]]
            host_options.append(opts)
        for hosts in itertools.product(*host_options):
            hmap = dict(zip(edged, hosts))
            if _has_cycle(hmap):
                continue
            top = [c for c in edged if hmap[c] is None]
            root = top[0]
            containment = {c: outer[root] for c in top[1:]}
            containment.update({c: h[1] for c, h in hmap.items() if h is not None})
            yield CombinatorialEmbedding(graph, rotation, outer, containment)


def _has_cycle(hmap):
    for c in hmap:
        seen = set()
        x = c
        while hmap.get(x) is not None:
            if x in seen:
                return True
            seen.add(x)
            x = hmap[x][0]
    return False


def brute_force_upward_planar(graph: PartitionedDigraph, cap: int | None = None) -> bool:
    """Some embedding is bimodal and carries an upward-consistent assignment."""
    _check_cap(graph, cap)
    if not graph.is_acyclic():
        return False
    for comp in graph.components:
        sub, _, _ = graph.subgraph(comp)
        if sub.m == 0:
            continue
        ok = False
        for emb in planar_rotations(sub):
            if not all(is_bimodal_at(emb, v) for v in range(sub.n)):
                continue
            if next(enumerate_assignments(sub, emb), None) is not None:
                ok = True
                break
        if not ok:
            return False
    return True


def reduce_upward_planarity(graph: PartitionedDigraph) -> PartitionedDigraph:
    """Subdivide every edge; the first half goes to page L, the second to page R."""
    n = graph.n
    edges = []
    for i, (t, h, _) in enumerate(graph.edges):
        edges.append(Edge(t, n + i, L))
        edges.append(Edge(n + i, h, R))
    return PartitionedDigraph(n + graph.m, tuple(edges))


# ------------------------------------------------------------ pertinent graphs


def edge_subgraph(graph: PartitionedDigraph, edge_ids) -> tuple[PartitionedDigraph, list[int], list[int]]:
    """Subgraph formed by some edges and their endpoints; returns it with vertex and edge maps new->old."""
    emap = sorted(edge_ids)
    vs = sorted({x for i in emap for x in graph.edges[i][:2]})
    pos = {v: i for i, v in enumerate(vs)}
    sub = PartitionedDigraph(len(vs), tuple(Edge(pos[graph.edges[i].tail], pos[graph.edges[i].head], graph.edges[i].page) for i in emap))
    return sub, vs, emap


def harvest_boundaries(graph: PartitionedDigraph, edge_ids, u: int, v: int, cap: int | None = None, *, outer_edge: int | None = None) -> set:
    """Boundary states of every good embedding of the subgraph on ``edge_ids`` with both poles outside.

    Good embeddings are collected as the embeddings induced by all valid
    spine orders of the subgraph.  With ``outer_edge`` (an edge id of
    ``graph``) only embeddings having that edge on the outer face count.
    """
    from .partial2tree.boundary import boundary_state

    sub, vs, emap = edge_subgraph(graph, edge_ids)
    _check_cap(sub, cap)
    keep = None if outer_edge is None else emap.index(outer_edge)
    pos = {x: i for i, x in enumerate(vs)}
    su, sv = pos[u], pos[v]
    found = set()
    for emb, lam in _realized_embeddings(sub):
        walk = emb.faces[emb.outer_face].darts
        if keep is not None and 2 * keep not in walk and 2 * keep + 1 not in walk:
            continue
        outer = {sub.dart_vertex(d) for d in walk}
        if su in outer and sv in outer:
            found.add(boundary_state(sub, emb, lam, su, sv))
    return found


@lru_cache(maxsize=4096)
def _realized_embeddings(graph: PartitionedDigraph) -> tuple:
    """Distinct (embedding, labels) pairs induced by the valid spine orders of ``graph``."""
    from .construct import induced_embedding

    out = []
    seen = set()
    for order in all_ubes(graph, graph.n):
        emb, lam = induced_embedding(graph, order)
        key = (emb.rotation, frozenset(emb.faces[emb.outer_face].darts), tuple(sorted(lam.items())))
        if key not in seen:
            seen.add(key)
            out.append((emb, lam))
    return tuple(out)
