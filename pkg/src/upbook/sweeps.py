"""Small-instance generators for oracle sweeps and random testing.

Exhaustive generators return instances up to isomorphism.  Where noted they
also identify an instance with its mirror image (pages swapped) and with its
reversal (every edge turned around), which map book embeddings to book
embeddings and so never change a yes/no answer.
"""

from __future__ import annotations

import random
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator

from .graph import L, R, CombinatorialEmbedding, PartitionedDigraph, build_graph, embedding_from_rotation
from .spq import is_biconnected, is_partial_2tree

_SWAP = {L: R, R: L}


def _connected(n: int, pairs) -> bool:
    adj = {v: set() for v in range(n)}
    for a, b in pairs:
        adj[a].add(b)
        adj[b].add(a)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x] - seen:
            seen.add(y)
            stack.append(y)
    return len(seen) == n


@lru_cache(maxsize=None)
def undirected_shapes(n: int, *, biconnected_p2t: bool = False) -> tuple[tuple[tuple[int, int], ...], ...]:
    """Connected simple graphs on ``n`` vertices, one per isomorphism class."""
    pairs = list(combinations(range(n), 2))
    perms = list(permutations(range(n)))
    seen: set = set()
    out = []
    for mask in range(1, 1 << len(pairs)):
        es = [pairs[i] for i in range(len(pairs)) if mask >> i & 1]
        if len(es) < n - 1 or not _connected(n, es):
            continue
        canon = min(tuple(sorted(tuple(sorted((p[a], p[b]))) for a, b in es)) for p in perms)
        if canon in seen:
            continue
        seen.add(canon)
        if biconnected_p2t:
            g = build_graph([(a, b, L) for a, b in canon], n)
            if not is_biconnected(g) or not is_partial_2tree(g):
                continue
        out.append(canon)
    return tuple(out)


def automorphisms(n: int, edges) -> list[tuple[int, ...]]:
    s = set(map(tuple, edges))
    return [p for p in permutations(range(n)) if all(tuple(sorted((p[a], p[b]))) in s for a, b in edges)]


def _canonical(arcs: tuple[tuple[int, int, str], ...], autos, mirror: bool, reverse: bool) -> tuple:
    best = None
    for p in autos:
        for swap in (False, True) if mirror else (False,):
            for rev in (False, True) if reverse else (False,):
                key = []
                for t, h, pg in arcs:
                    a, b = (p[h], p[t]) if rev else (p[t], p[h])
                    key.append((a, b, _SWAP[pg] if swap else pg))
                key = tuple(sorted(key))
                if best is None or key < best:
                    best = key
    return best


def labelled_instances(n: int, shape, *, acyclic: bool = True, mirror: bool = False, reverse: bool = False) -> Iterator[PartitionedDigraph]:
    """Every orientation and page labelling of ``shape``, one per symmetry class."""
    m = len(shape)
    autos = automorphisms(n, shape)
    seen: set = set()
    for o in range(1 << m):
        arcs0 = [((a, b) if o >> i & 1 else (b, a)) for i, (a, b) in enumerate(shape)]
        if acyclic and not build_graph([(a, b, L) for a, b in arcs0], n).is_acyclic():
            continue
        for pg in range(1 << m):
            arcs = tuple((a, b, R if pg >> i & 1 else L) for i, (a, b) in enumerate(arcs0))
            key = _canonical(arcs, autos, mirror, reverse)
            if key in seen:
                continue
            seen.add(key)
            yield build_graph(list(arcs), n)


def connected_dags(max_n: int, *, mirror: bool = True) -> Iterator[PartitionedDigraph]:
    """Connected acyclic paged digraphs with 2..max_n vertices, up to isomorphism (and mirroring)."""
    for n in range(2, max_n + 1):
        for shape in undirected_shapes(n):
            yield from labelled_instances(n, shape, mirror=mirror)


def biconnected_partial_2trees(max_n: int, *, mirror: bool = True, reverse: bool = True) -> Iterator[PartitionedDigraph]:
    """Acyclic paged biconnected partial 2-trees with 3..max_n vertices, up to the given symmetries."""
    for n in range(3, max_n + 1):
        for shape in undirected_shapes(n, biconnected_p2t=True):
            yield from labelled_instances(n, shape, mirror=mirror, reverse=reverse)


def planar_digraphs(max_n: int) -> Iterator[PartitionedDigraph]:
    """Connected planar orientations (all on page L) with 2..max_n vertices, up to isomorphism.

    Every graph with at most 5 vertices except K5 is planar.
    """
    if max_n > 5:
        raise ValueError("planarity is only screened for n <= 5")
    for n in range(2, max_n + 1):
        for shape in undirected_shapes(n):
            if len(shape) == 10:
                continue
            m = len(shape)
            autos = automorphisms(n, shape)
            seen: set = set()
            for o in range(1 << m):
                arcs = tuple(((a, b) if o >> i & 1 else (b, a)) + (L,) for i, (a, b) in enumerate(shape))
                key = _canonical(arcs, autos, False, False)
                if key not in seen:
                    seen.add(key)
                    yield build_graph(list(arcs), n)


# ------------------------------------------------------------ random instances


def random_partial_2tree(n: int, rng: random.Random, keep: float = 0.7) -> PartitionedDigraph:
    """A random biconnected partial 2-tree with random orientation (acyclic) and pages.

    Starts from a random 2-tree and drops edges with probability ``1 - keep``
    while the graph stays biconnected.
    """
    if n < 3:
        raise ValueError("need at least three vertices")
    edges = {(0, 1)}
    for v in range(2, n):
        a, b = rng.choice(sorted(edges))
        edges.add((a, v))
        edges.add((b, v))
    cur = sorted(edges)
    rng.shuffle(cur)
    for e in list(cur):
        if rng.random() > keep:
            trial = [x for x in cur if x != e]
            if is_biconnected(build_graph([(a, b, L) for a, b in trial], n)):
                cur = trial
    rank = list(range(n))
    rng.shuffle(rank)
    arcs = [((a, b) if rank[a] < rank[b] else (b, a)) + (rng.choice((L, R)),) for a, b in cur]
    return build_graph(arcs, n)


def random_plane_st_graph(n: int, rng: random.Random) -> tuple[PartitionedDigraph, CombinatorialEmbedding]:
    """A random series-parallel st-graph with ``n`` vertices and a plane embedding of it.

    Grows from one edge by subdividing edges or adding a two-edge path just
    to the right of an edge.  Vertices are numbered in a topological order;
    pages are random.
    """
    if n < 2:
        raise ValueError("need at least two vertices")
    ends: list[list[int]] = [[0, 1]]
    rot: list[list[int]] = [[0], [1]]
    for k in range(2, n):
        i = rng.randrange(len(ends))
        a, b = ends[i]
        j = len(ends)
        if rng.random() < 0.5:
            # a -> k -> b replaces a -> b
            ends[i][1] = k
            ends.append([k, b])
            rb = rot[b]
            rb[rb.index(2 * i + 1)] = 2 * j + 1
            rot.append([2 * i + 1, 2 * j])
        else:
            ends.append([a, k])
            ends.append([k, b])
            ra, rb = rot[a], rot[b]
            ra.insert(ra.index(2 * i) + 1, 2 * j)
            rb.insert(rb.index(2 * i + 1), 2 * (j + 1) + 1)
            rot.append([2 * j + 1, 2 * (j + 1)])
    order = _topological(n, ends)
    rank = {v: r for r, v in enumerate(order)}
    graph = build_graph([(rank[a], rank[b], rng.choice((L, R))) for a, b in ends], n)
    rotation = [None] * n
    for v in range(n):
        rotation[rank[v]] = rot[v]
    return graph, embedding_from_rotation(graph, rotation, 0)


def random_nested_st_graph(n: int, rng: random.Random, density: float = 0.5) -> tuple[PartitionedDigraph, list[int]]:
    """A series-parallel st-graph with a known 2-page book embedding.

    Vertices 0..n-1 lie on the spine in this order.  Edges are the spine
    path, the arc (0, n-1) and a random laminar family of arcs, each on a
    random page; laminar arcs never cross, so the order is a witness.
    Vertex names are shuffled; the returned order lists them bottom to top.
    """
    if n < 3:
        raise ValueError("need at least three vertices")
    arcs = {(i, i + 1) for i in range(n - 1)} | {(0, n - 1)}
    stack = [(0, n - 1)]
    while stack:
        a, b = stack.pop()
        if b - a < 2:
            continue
        c = rng.randint(a + 1, b - 1)
        if rng.random() < density:
            if c - a >= 2:
                arcs.add((a, c))
            if b - c >= 2:
                arcs.add((c, b))
        stack.append((a, c))
        stack.append((c, b))
    name = list(range(n))
    rng.shuffle(name)
    graph = build_graph([(name[a], name[b], rng.choice((L, R))) for a, b in sorted(arcs)], n)
    return graph, name


def _topological(n: int, edges) -> list[int]:
    indeg = [0] * n
    out = [[] for _ in range(n)]
    for a, b in edges:
        out[a].append(b)
        indeg[b] += 1
    ready = [v for v in range(n) if indeg[v] == 0]
    order = []
    while ready:
        v = ready.pop()
        order.append(v)
        for w in out[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
    return order
