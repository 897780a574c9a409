"""Partitioned digraphs, darts, rotation systems, faces and angles.

A dart is an edge seen from one of its endpoints and is encoded as the
integer ``2 * edge + end`` where ``end`` is 0 at the tail and 1 at the head.
Rotations list darts clockwise.  The face-walk successor of a dart ``d`` is
the dart following ``reverse(d)`` clockwise at the far endpoint, so internal
faces are walked with their interior on the left and the outer face is walked
clockwise around the drawing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, NamedTuple, Sequence

L = "L"
R = "R"
PAGES = (L, R)


class GraphError(ValueError):
    pass


class SelfLoop(GraphError):
    pass


class ParallelEdge(GraphError):
    pass


class IndexOutOfRange(GraphError):
    pass


class MalformedRotation(GraphError):
    pass


class Edge(NamedTuple):
    tail: int
    head: int
    page: str


# ---------------------------------------------------------------- darts

AT_TAIL = 0
AT_HEAD = 1


def make_dart(edge: int, end: int) -> int:
    return 2 * edge + end


def dart_edge(d: int) -> int:
    return d >> 1


def dart_end(d: int) -> int:
    return d & 1


def reverse(d: int) -> int:
    return d ^ 1


def format_dart(d: int) -> str:
    return f"{d >> 1}{'h' if d & 1 else 't'}"


def parse_dart(token: str) -> int:
    if len(token) < 2 or token[-1] not in "th" or not token[:-1].isdigit():
        raise ValueError(f"bad dart {token!r}")
    return make_dart(int(token[:-1]), AT_HEAD if token[-1] == "h" else AT_TAIL)


# ------------------------------------------------------------ the graph


@dataclass(frozen=True)
class PartitionedDigraph:
    """A simple digraph whose edges are each assigned to page L or page R."""

    n: int
    edges: tuple[Edge, ...]

    def __post_init__(self):
        if self.n < 0:
            raise IndexOutOfRange("negative vertex count")
        seen = set()
        for i, (t, h, p) in enumerate(self.edges):
            if not (0 <= t < self.n and 0 <= h < self.n):
                raise IndexOutOfRange(f"edge {i} ({t}, {h}) outside [0, {self.n})")
            if t == h:
                raise SelfLoop(f"edge {i} is a loop at {t}")
            if p not in PAGES:
                raise GraphError(f"edge {i} has page {p!r}")
            key = (min(t, h), max(t, h))
            if key in seen:
                raise ParallelEdge(f"edge {i} duplicates {key}")
            seen.add(key)

    @property
    def m(self) -> int:
        return len(self.edges)

    def dart_vertex(self, d: int) -> int:
        e = self.edges[d >> 1]
        return e.head if d & 1 else e.tail

    def dart_far(self, d: int) -> int:
        e = self.edges[d >> 1]
        return e.tail if d & 1 else e.head

    @cached_property
    def darts_at(self) -> tuple[tuple[int, ...], ...]:
        at = [[] for _ in range(self.n)]
        for i, (t, h, _) in enumerate(self.edges):
            at[t].append(2 * i)
            at[h].append(2 * i + 1)
        return tuple(tuple(x) for x in at)

    def degree(self, v: int) -> int:
        return len(self.darts_at[v])

    @cached_property
    def out_neighbors(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.n)]
        for t, h, _ in self.edges:
            out[t].append(h)
        return tuple(tuple(x) for x in out)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {(t, h): i for i, (t, h, _) in enumerate(self.edges)}

    def is_source(self, v: int) -> bool:
        return all(d & 1 == 0 for d in self.darts_at[v])

    def is_sink(self, v: int) -> bool:
        return all(d & 1 == 1 for d in self.darts_at[v])

    def is_switch(self, v: int) -> bool:
        ds = self.darts_at[v]
        return bool(ds) and (self.is_source(v) or self.is_sink(v))

    @cached_property
    def topological_order(self) -> tuple[int, ...] | None:
        """Smallest-index-first topological order, or None for cyclic graphs."""
        import heapq

        indeg = [0] * self.n
        for _, h, _ in self.edges:
            indeg[h] += 1
        heap = [v for v in range(self.n) if indeg[v] == 0]
        heapq.heapify(heap)
        order = []
        while heap:
            v = heapq.heappop(heap)
            order.append(v)
            for w in self.out_neighbors[v]:
                indeg[w] -= 1
                if indeg[w] == 0:
                    heapq.heappush(heap, w)
        return tuple(order) if len(order) == self.n else None

    def is_acyclic(self) -> bool:
        return self.topological_order is not None

    @cached_property
    def components(self) -> tuple[tuple[int, ...], ...]:
        """Connected components of the underlying graph, each sorted, ordered by least vertex."""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for t, h, _ in self.edges:
            a, b = find(t), find(h)
            if a != b:
                parent[max(a, b)] = min(a, b)
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(find(v), []).append(v)
        return tuple(tuple(g) for _, g in sorted(groups.items()))

    @cached_property
    def component_of(self) -> tuple[int, ...]:
        """Index into ``components`` for every vertex."""
        comp = [0] * self.n
        for i, c in enumerate(self.components):
            for v in c:
                comp[v] = i
        return tuple(comp)

    def is_connected(self) -> bool:
        return len(self.components) <= 1

    def with_pages(self, pages: Sequence[str]) -> "PartitionedDigraph":
        return PartitionedDigraph(self.n, tuple(Edge(t, h, p) for (t, h, _), p in zip(self.edges, pages)))

    def subgraph(self, vertices: Iterable[int]) -> tuple["PartitionedDigraph", list[int], list[int]]:
        """Induced subgraph, relabelled; returns it with the vertex map new->old and edge map new->old."""
        vs = sorted(vertices)
        pos = {v: i for i, v in enumerate(vs)}
        emap = [i for i, (t, h, _) in enumerate(self.edges) if t in pos and h in pos]
        sub = PartitionedDigraph(len(vs), tuple(Edge(pos[self.edges[i].tail], pos[self.edges[i].head], self.edges[i].page) for i in emap))
        return sub, vs, emap


def build_graph(edges: Iterable[tuple[int, int, str]], n: int) -> PartitionedDigraph:
    return PartitionedDigraph(n, tuple(Edge(int(t), int(h), str(p)) for t, h, p in edges))


# ------------------------------------------------------------ embeddings


class Angle(NamedTuple):
    vertex: int
    first: int
    second: int


@dataclass(frozen=True)
class Face:
    index: int
    darts: tuple[int, ...]
    component: int
    outer: bool  # outer walk of its own component

    def __len__(self):
        return len(self.darts)


@dataclass(frozen=True, eq=False)
class CombinatorialEmbedding:
    """Clockwise rotation system with per-component outer faces and containment.

    ``outer`` maps a component index (see ``PartitionedDigraph.components``)
    to a dart on that component's outer face.  ``containment`` maps every
    non-root component with edges to a dart of another component whose face
    contains it.  Components consisting of one isolated vertex need neither.
    """

    graph: PartitionedDigraph
    rotation: tuple[tuple[int, ...], ...]
    outer: Mapping[int, int]
    containment: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        g = self.graph
        rot = tuple(tuple(r) for r in self.rotation)
        object.__setattr__(self, "rotation", rot)
        object.__setattr__(self, "outer", dict(self.outer))
        object.__setattr__(self, "containment", dict(self.containment))
        if len(rot) != g.n:
            raise MalformedRotation(f"expected {g.n} rotations, got {len(rot)}")
        for v in range(g.n):
            if sorted(rot[v]) != sorted(g.darts_at[v]):
                raise MalformedRotation(f"rotation at {v} does not list exactly its darts")
        if not self.is_planar():
            raise MalformedRotation("rotation system is not planar")
        edged = [i for i, c in enumerate(g.components) if g.degree(c[0]) > 0]
        comp = g.component_of
        for i in edged:
            d = self.outer.get(i)
            if d is None or not 0 <= d < 2 * g.m or comp[g.dart_vertex(d)] != i:
                raise MalformedRotation(f"component {i} needs an outer dart of its own")
        roots = [i for i in edged if i not in self.containment]
        if len(edged) > 0 and len(roots) != 1:
            raise MalformedRotation("exactly one component with edges must be uncontained")
        for c, d in self.containment.items():
            if not 0 <= d < 2 * g.m or comp[g.dart_vertex(d)] == c:
                raise MalformedRotation(f"component {c} has an invalid host dart")
        for c in self.containment:
            seen = {c}
            x = c
            while x in self.containment:
                x = comp[g.dart_vertex(self.containment[x])]
                if x in seen:
                    raise MalformedRotation("containment has a cycle")
                seen.add(x)

    # -- combinatorics ----------------------------------------------------

    @cached_property
    def cw_next(self) -> tuple[int, ...]:
        nxt = [0] * (2 * self.graph.m)
        for r in self.rotation:
            k = len(r)
            for i, d in enumerate(r):
                nxt[d] = r[(i + 1) % k]
        return tuple(nxt)

    @cached_property
    def cw_prev(self) -> tuple[int, ...]:
        prv = [0] * (2 * self.graph.m)
        for d, e in enumerate(self.cw_next):
            prv[e] = d
        return tuple(prv)

    def walk_next(self, d: int) -> int:
        return self.cw_next[d ^ 1]

    def _raw_walks(self) -> list[list[int]]:
        nxt = self.cw_next
        seen = [False] * (2 * self.graph.m)
        walks = []
        for d0 in range(2 * self.graph.m):
            if seen[d0]:
                continue
            walk = []
            d = d0
            while not seen[d]:
                seen[d] = True
                walk.append(d)
                d = nxt[d ^ 1]
            if d != d0:
                raise MalformedRotation("face walk does not close")
            walks.append(walk)
        return walks

    def is_planar(self) -> bool:
        g = self.graph
        walks = self._raw_walks()
        comp = g.component_of
        faces_per = {}
        for w in walks:
            c = comp[g.dart_vertex(w[0])]
            faces_per[c] = faces_per.get(c, 0) + 1
        edges_per = {}
        for t, _, _ in g.edges:
            edges_per[comp[t]] = edges_per.get(comp[t], 0) + 1
        for c, m in edges_per.items():
            if len(g.components[c]) - m + faces_per[c] != 2:
                return False
        return True

    @cached_property
    def faces(self) -> tuple[Face, ...]:
        g = self.graph
        comp = g.component_of
        walks = self._raw_walks()
        outer_darts = set(self.outer.values())
        out = []
        for i, w in enumerate(walks):
            c = comp[g.dart_vertex(w[0])]
            is_outer = any(d in outer_darts and self.outer.get(c) == d for d in w)
            out.append(Face(i, tuple(w), c, is_outer))
        return tuple(out)

    @cached_property
    def face_of_dart(self) -> tuple[int, ...]:
        fo = [0] * (2 * self.graph.m)
        for f in self.faces:
            for d in f.darts:
                fo[d] = f.index
        return tuple(fo)

    def face_of_angle(self, a: int) -> int:
        """Face holding the angle that starts at dart ``a``."""
        return self.face_of_dart[self.cw_next[a]]

    @cached_property
    def root_component(self) -> int | None:
        g = self.graph
        for i, c in enumerate(g.components):
            if g.degree(c[0]) > 0 and i not in self.containment:
                return i
        return None

    @cached_property
    def outer_face(self) -> int | None:
        """Index of the face that is unbounded in the whole drawing."""
        r = self.root_component
        if r is None:
            return None
        return self.face_of_dart[self.outer[r]]

    def is_outer(self, f: int) -> bool:
        return self.faces[f].outer

    def angle(self, a: int) -> Angle:
        return Angle(self.graph.dart_vertex(a), a, self.cw_next[a])

    def angles_at(self, v: int) -> list[Angle]:
        return [self.angle(a) for a in self.rotation[v]]

    def face_angles(self, f: int) -> list[int]:
        """Angle keys met while walking face ``f``; key ``d ^ 1`` precedes walk dart after ``d``."""
        return [d ^ 1 for d in self.faces[f].darts]

    @cached_property
    def composite_faces(self) -> tuple[tuple[int, ...], ...]:
        """For each face, the outer faces of components placed directly inside it."""
        g = self.graph
        inside = [[] for _ in self.faces]
        for c, d in sorted(self.containment.items()):
            if g.degree(g.components[c][0]) == 0:
                continue
            inside[self.face_of_dart[d]].append(self.face_of_dart[self.outer[c]])
        return tuple(tuple(x) for x in inside)

    def with_rotation(self, rotation) -> "CombinatorialEmbedding":
        return CombinatorialEmbedding(self.graph, rotation, self.outer, self.containment)

    def same_as(self, other: "CombinatorialEmbedding") -> bool:
        """Equal rotations (as cyclic sequences), equal outer faces and equal hosts."""
        if self.graph.edges != other.graph.edges:
            return False
        if self.cw_next != other.cw_next:
            return False
        for c, d in self.outer.items():
            if other.outer.get(c) is None or self.face_of_dart[d] != self.face_of_dart[other.outer[c]]:
                return False
        return self.canonical_hosts() == other.canonical_hosts()

    def canonical_hosts(self) -> dict[int, int | None]:
        """Innermost bounded face around each nested component, None when only outer faces surround it.

        Placing a component in the outer face of a sibling says nothing more
        than placing it next to that sibling, so such hosts are lifted.
        """
        g = self.graph
        out = {}
        for c in self.containment:
            if g.degree(g.components[c][0]) == 0:
                continue
            x = c
            host = None
            while x in self.containment:
                f = self.face_of_dart[self.containment[x]]
                if not self.faces[f].outer:
                    host = f
                    break
                x = g.component_of[g.dart_vertex(self.containment[x])]
            out[c] = host
        return {c: h for c, h in out.items() if h is not None}


def faces(embedding: CombinatorialEmbedding) -> tuple[Face, ...]:
    return embedding.faces


def angles(embedding: CombinatorialEmbedding) -> tuple[dict[int, list[Angle]], dict[int, list[Angle]]]:
    """All angles grouped by vertex and by face."""
    by_vertex = {v: embedding.angles_at(v) for v in range(embedding.graph.n)}
    by_face = {f.index: [embedding.angle(a) for a in embedding.face_angles(f.index)] for f in embedding.faces}
    return by_vertex, by_face


def embedding_from_rotation(graph: PartitionedDigraph, rotation, outer_dart: int | None = None) -> CombinatorialEmbedding:
    """Convenience constructor for connected graphs."""
    outer = {} if outer_dart is None else {graph.component_of[graph.dart_vertex(outer_dart)]: outer_dart}
    return CombinatorialEmbedding(graph, rotation, outer)


def component_embedding(embedding: CombinatorialEmbedding, comp: int):
    """Restrict an embedding to one component.

    Returns ``(subgraph, sub_embedding, vertex_map, edge_map)`` where the maps
    send new indices to old ones.
    """
    graph = embedding.graph
    sub, vmap, emap = graph.subgraph(graph.components[comp])
    back = {old: new for new, old in enumerate(emap)}
    rotation = [[2 * back[d >> 1] + (d & 1) for d in embedding.rotation[v]] for v in vmap]
    outer = {}
    if comp in embedding.outer:
        d = embedding.outer[comp]
        outer = {0: 2 * back[d >> 1] + (d & 1)}
    return sub, CombinatorialEmbedding(sub, rotation, outer), vmap, emap


def lift_dart(d: int, emap: Sequence[int]) -> int:
    return 2 * emap[d >> 1] + (d & 1)
