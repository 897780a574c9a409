"""Book embeddings: validation, the embedding a spine order induces, and construction from good embeddings."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .graph import L, R, CombinatorialEmbedding, Edge, PartitionedDigraph
from .upward import Verdict, OK, dart_types, is_switch_angle, good_embedding_verdict, to_assignment


class NotBijective(ValueError):
    pass


class InvalidUbe(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


@dataclass(frozen=True)
class BookEmbedding:
    """Spine order: ``order[i]`` is the vertex at position ``i``."""

    order: tuple[int, ...]

    @property
    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.order)}


def _positions(graph: PartitionedDigraph, order: Sequence[int]) -> list[int]:
    if sorted(order) != list(range(graph.n)):
        raise NotBijective("order is not a permutation of the vertices")
    pos = [0] * graph.n
    for i, v in enumerate(order):
        pos[v] = i
    return pos


def _page_crossing(arcs: list[tuple[int, int, int]]) -> tuple[int, int] | None:
    """First pair of interleaving arcs (a, b, edge) or None; nested scan with a stack."""
    starts: dict[int, list[tuple[int, int, int]]] = {}
    ends: dict[int, int] = {}
    for a, b, e in arcs:
        starts.setdefault(a, []).append((a, b, e))
        ends[b] = ends.get(b, 0) + 1
    stack: list[tuple[int, int, int]] = []
    for p in sorted(set(starts) | set(ends)):
        want = ends.get(p, 0)
        while want and stack and stack[-1][1] == p:
            stack.pop()
            want -= 1
        if want:
            break
        for arc in sorted(starts.get(p, ()), key=lambda x: -x[1]):
            stack.append(arc)
    else:
        return None
    for i, (a, b, e) in enumerate(arcs):
        for c, d, f in arcs[i + 1:]:
            if a < c < b < d or c < a < d < b:
                return (e, f)
    raise AssertionError("crossing scan disagrees with pairwise check")


def validate_ube(graph: PartitionedDigraph, order: Sequence[int]) -> Verdict:
    pos = _positions(graph, order)
    for i, (t, h, _) in enumerate(graph.edges):
        if pos[t] >= pos[h]:
            return Verdict(False, "not topological", i)
    for page in (L, R):
        arcs = [(pos[t], pos[h], i) for i, (t, h, p) in enumerate(graph.edges) if p == page]
        hit = _page_crossing(arcs)
        if hit is not None:
            return Verdict(False, f"crossing on page {page}", hit)
    return OK


# ------------------------------------------------------------ induced embedding


def spine_rotation(graph: PartitionedDigraph, pos: Sequence[int], v: int) -> tuple[list[int], int]:
    """Clockwise darts at ``v`` from spine-up, and how many belong to the right page."""
    ro, ri, li, lo = [], [], [], []
    edges = graph.edges
    for d in graph.darts_at[v]:
        t, h, p = edges[d >> 1]
        span = abs(pos[h] - pos[t])
        if d & 1 == 0:
            (ro if p == R else lo).append((span, d))
        else:
            (ri if p == R else li).append((span, d))
    ro.sort()
    ri.sort(reverse=True)
    li.sort()
    lo.sort(reverse=True)
    rot = [d for _, d in ro + ri + li + lo]
    return rot, len(ro) + len(ri)


def induced_embedding(graph: PartitionedDigraph, order: Sequence[int]) -> tuple[CombinatorialEmbedding, dict[int, int]]:
    """The upward embedding of the semicircle drawing of a valid spine order."""
    if not validate_ube(graph, order):
        raise InvalidUbe("order is not an upward book embedding")
    pos = _positions(graph, order)
    rotation = []
    spine_down = [None] * graph.n
    lam: dict[int, int] = {}
    for v in range(graph.n):
        rot, nright = spine_rotation(graph, pos, v)
        rotation.append(rot)
        if not rot:
            continue
        down = rot[nright - 1] if nright else rot[-1]
        spine_down[v] = down
        if graph.is_source(v):
            large = down
        elif graph.is_sink(v):
            large = rot[-1]
        else:
            large = None
        for i, a in enumerate(rot):
            b = rot[(i + 1) % len(rot)]
            if not is_switch_angle(a, b):
                lam[a] = 0
            else:
                lam[a] = 1 if a == large else -1
    comps = graph.components
    outer = {}
    lowest = {}
    for ci, comp in enumerate(comps):
        b = min(comp, key=lambda x: pos[x])
        lowest[ci] = b
        if rotation[b]:
            a = spine_down[b]
            rot = rotation[b]
            outer[ci] = rot[(rot.index(a) + 1) % len(rot)]
    proto = CombinatorialEmbedding(graph, rotation, outer, _provisional_containment(graph, outer, pos, order))
    containment = _containment(graph, proto, pos, lowest)
    emb = CombinatorialEmbedding(graph, rotation, outer, containment)
    return emb, lam


def _provisional_containment(graph, outer, pos, order):
    """Everything hangs off the component of the lowest edged vertex; only used to build faces."""
    edged = sorted(outer, key=lambda c: min(pos[v] for v in graph.components[c]))
    if not edged:
        return {}
    root = edged[0]
    return {c: outer[root] for c in edged[1:]}


def _face_around(graph: PartitionedDigraph, emb: CombinatorialEmbedding, comp: int, pos, x2: int) -> int:
    """Face of component ``comp`` containing the spine point at doubled coordinate ``x2``."""
    best = {L: None, R: None}
    for v in graph.components[comp]:
        for d in graph.darts_at[v]:
            if d & 1:
                continue
            t, h, p = graph.edges[d >> 1]
            if 2 * pos[t] < x2 < 2 * pos[h]:
                span = pos[h] - pos[t]
                if best[p] is None or span < best[p][0]:
                    best[p] = (span, d)
    if best[L] is not None:
        return emb.face_of_dart[best[L][1] ^ 1]
    if best[R] is not None:
        return emb.face_of_dart[best[R][1]]
    return emb.face_of_dart[emb.outer[comp]]


def _containment(graph, emb, pos, lowest) -> dict[int, int]:
    edged = [c for c in emb.outer]
    if len(edged) <= 1:
        return {}
    root = min(edged, key=lambda c: pos[lowest[c]])
    host_faces = {}
    for c in edged:
        if c == root:
            continue
        x2 = 2 * pos[lowest[c]] - 1
        inside = []
        for a in edged:
            if a == c:
                continue
            f = _face_around(graph, emb, a, pos, x2)
            if not emb.faces[f].outer:
                inside.append((a, f))
        host_faces[c] = inside
    out = {}
    for c, cands in host_faces.items():
        if not cands:
            out[c] = emb.outer[root]
            continue
        cand_comps = {a for a, _ in cands}
        # the innermost candidate lies inside bounded faces of all the others
        for a, f in cands:
            x2 = 2 * pos[lowest[a]] - 1
            if all(not emb.faces[_face_around(graph, emb, b, pos, x2)].outer for b in cand_comps if b != a):
                out[c] = emb.faces[f].darts[0]
                break
        else:
            raise AssertionError("no innermost host component")
    return out


# ------------------------------------------------------------ st-graphs


def _internal_faces_in_dual_order(graph: PartitionedDigraph, emb: CombinatorialEmbedding) -> list[int]:
    outer = emb.outer_face
    indeg = {f.index: 0 for f in emb.faces if f.index != outer}
    succ: dict[int, list[int]] = {f: [] for f in indeg}
    for e in range(graph.m):
        left, right = emb.face_of_dart[2 * e], emb.face_of_dart[2 * e + 1]
        if left != outer and right != outer:
            succ[left].append(right)
            indeg[right] += 1
    ready = sorted(f for f, k in indeg.items() if k == 0)
    order = []
    while ready:
        f = ready.pop()
        order.append(f)
        for g in succ[f]:
            indeg[g] -= 1
            if indeg[g] == 0:
                ready.append(g)
    if len(order) != len(indeg):
        raise PreconditionViolated("face dual is cyclic")
    return order


class _SpineList:
    def __init__(self, path: Sequence[int]):
        self.nxt: dict[int, int | None] = {}
        self.prv: dict[int, int | None] = {}
        prev = None
        for v in path:
            self.prv[v] = prev
            if prev is not None:
                self.nxt[prev] = v
            prev = v
        self.nxt[prev] = None
        self.head = path[0]

    def insert_after(self, u: int, seq: Sequence[int]):
        after = self.nxt[u]
        prev = u
        for v in seq:
            self.nxt[prev] = v
            self.prv[v] = prev
            prev = v
        self.nxt[prev] = after
        if after is not None:
            self.prv[after] = prev

    def insert_before(self, v: int, seq: Sequence[int]):
        self.insert_after(self.prv[v], seq)

    def __contains__(self, v):
        return v in self.nxt

    def to_list(self) -> list[int]:
        out = []
        v = self.head
        while v is not None:
            out.append(v)
            v = self.nxt[v]
        return out


def construct_st(graph: PartitionedDigraph, emb: CombinatorialEmbedding) -> list[int]:
    """Spine order for a plane st-graph with a 4-modal embedding free of impossible faces.

    Starts from the left path of the outer face and adds, face by face from
    left to right, the interior of each face's right path.
    """
    sources = [v for v in range(graph.n) if graph.degree(v) and graph.is_source(v)]
    sinks = [v for v in range(graph.n) if graph.degree(v) and graph.is_sink(v)]
    if len(sources) != 1 or len(sinks) != 1 or not graph.is_connected() or not graph.is_acyclic():
        raise PreconditionViolated("not a connected st-graph")
    s = sources[0]
    outer = emb.faces[emb.outer_face].darts
    k = len(outer)
    start = next(i for i in range(k) if outer[i] & 1 == 0 and outer[i - 1] & 1 == 1)
    left_path = [s]
    i = start
    while outer[i % k] & 1 == 0:
        left_path.append(graph.edges[outer[i % k] >> 1].head)
        i += 1
    if graph.dart_vertex(outer[start]) != s or left_path[-1] != sinks[0]:
        raise PreconditionViolated("outer face is not an st-face")
    spine = _SpineList(left_path)
    edges = graph.edges
    for f in _internal_faces_in_dual_order(graph, emb):
        walk = emb.faces[f].darts
        k = len(walk)
        j = next(i for i in range(k) if walk[i] & 1 == 0 and walk[i - 1] & 1 == 1)
        right = []  # edges of the right path, s_f to t_f
        while walk[j % k] & 1 == 0:
            right.append(walk[j % k] >> 1)
            j += 1
        left = []
        while walk[j % k] & 1 == 1:
            left.append(walk[j % k] >> 1)
            j += 1
        if len(right) + len(left) != k:
            raise PreconditionViolated(f"face {f} is not an st-face")
        left.reverse()
        if len(right) == 1:
            continue
        inner = [edges[e].head for e in right[:-1]]
        if any(v in spine for v in inner) or any(edges[e].tail not in spine for e in left):
            raise PreconditionViolated(f"face {f} reached out of order")
        s_f, t_f = edges[right[0]].tail, edges[right[-1]].head
        first, last = edges[right[0]].page, edges[right[-1]].page
        if first == R and last == R:
            anchor = next((e for e in left if edges[e].page == L), None)
            if anchor is None:
                raise PreconditionViolated(f"face {f} is impossible")
            spine.insert_after(edges[anchor].tail, inner)
        elif first == L and last == R:
            spine.insert_after(s_f, inner)
        elif first == R and last == L:
            spine.insert_before(t_f, inner)
        else:
            split = next((i for i, e in enumerate(right) if edges[e].page == R), None)
            if split is None:
                spine.insert_after(s_f, inner)
            else:
                spine.insert_after(s_f, inner[:split])
                spine.insert_before(t_f, inner[split:])
    order = spine.to_list()
    if len(order) != graph.n:
        raise PreconditionViolated("some vertices were never reached")
    return order


# ------------------------------------------------------------ augmentation


@dataclass
class AugmentationMap:
    original_n: int
    original_m: int
    gadget: tuple[int, int, int, int]
    subdivisions: list[int] = field(default_factory=list)

    def strip_order(self, order: Sequence[int]) -> list[int]:
        return [v for v in order if v < self.original_n]


def _insert_dart(rotation: list[list[int]], v: int, after: int, d: int):
    rot = rotation[v]
    rot.insert(rot.index(after) + 1, d)


def augment_to_st(graph: PartitionedDigraph, emb: CombinatorialEmbedding, lam: Mapping, *, on_step=None):
    """Extend a connected good embedding to an st-graph with a good embedding.

    First a gadget a, b, c, d makes the outer face an st-face, with d feeding
    a source whose outer angle is large.  Then every internal face with a
    large angle is split by a subdivided edge until all faces are st-faces.
    ``on_step`` is called with the number of large angles left in internal
    faces after each split; every split removes exactly one.
    """
    lam = to_assignment(lam)
    if not graph.is_connected() or graph.m == 0:
        raise PreconditionViolated("augmentation needs a connected graph with edges")
    outer = emb.outer_face
    n, m = graph.n, graph.m
    s = None
    s_angle = None
    for v in range(n):
        if graph.is_source(v):
            for a in emb.rotation[v]:
                if lam[a] == 1 and emb.face_of_angle(a) == outer:
                    s, s_angle = v, a
                    break
        if s is not None:
            break
    if s is None:
        raise PreconditionViolated("no source with a large outer angle")
    a, b, c, d = n, n + 1, n + 2, n + 3
    edges = list(graph.edges)
    e_ac, e_ad, e_ab, e_bc, e_ds = m, m + 1, m + 2, m + 3, m + 4
    edges += [Edge(a, c, L), Edge(a, d, L), Edge(a, b, R), Edge(b, c, R), Edge(d, s, R)]
    rotation = [list(r) for r in emb.rotation] + [
        [2 * e_ac, 2 * e_ad, 2 * e_ab],
        [2 * e_ab + 1, 2 * e_bc],
        [2 * e_bc + 1, 2 * e_ac + 1],
        [2 * e_ds, 2 * e_ad + 1],
    ]
    _insert_dart(rotation, s, s_angle, 2 * e_ds + 1)
    lam = dict(lam)
    lam[s_angle] = 0
    lam[2 * e_ds + 1] = 0
    lam.update({2 * e_ac: -1, 2 * e_ad: -1, 2 * e_ab: 1})
    lam.update({2 * e_ab + 1: 0, 2 * e_bc: 0, 2 * e_ds: 0, 2 * e_ad + 1: 0})
    lam.update({2 * e_bc + 1: -1, 2 * e_ac + 1: 1})
    amap = AugmentationMap(n, m, (a, b, c, d))
    g = PartitionedDigraph(n + 4, tuple(edges))
    cur = CombinatorialEmbedding(g, rotation, {0: 2 * e_ac})
    while True:
        split = _find_saturation(cur, lam)
        if split is None:
            break
        g, cur, lam, z = _saturate(g, cur, lam, *split)
        amap.subdivisions.append(z)
        if on_step is not None:
            on_step(internal_large_angles(cur, lam))
    return g, cur, lam, amap


def _find_saturation(emb: CombinatorialEmbedding, lam: dict[int, int]):
    outer = emb.outer_face
    nxt = emb.cw_next
    for f in emb.faces:
        if f.index == outer:
            continue
        keys = [d ^ 1 for d in f.darts]
        switch = [a for a in keys if is_switch_angle(a, nxt[a])]
        if not any(lam[a] == 1 for a in switch):
            continue
        # keys[i] is the angle before walk dart i+1; start from the reference dart
        order = keys[-1:] + keys[:-1]
        switch = [a for a in order if is_switch_angle(a, nxt[a])]
        k = len(switch)
        for i in range(k):
            x, y, z = switch[i], switch[(i + 1) % k], switch[(i + 2) % k]
            if lam[x] == -1 and lam[y] == -1 and lam[z] == 1:
                return x, z
        raise PreconditionViolated(f"face {f.index} has a large angle but no small-small-large run")
    return None


def _saturate(graph: PartitionedDigraph, emb: CombinatorialEmbedding, lam: dict[int, int], au: int, av: int):
    u = graph.dart_vertex(au)
    v = graph.dart_vertex(av)
    z = graph.n
    nxt = emb.cw_next
    follow_u = nxt[au]
    page_uz = graph.edges[follow_u >> 1].page
    page_zv = R if page_uz == L else L
    m = graph.m
    if au & 1 == 0:  # u is a source of the face
        new = [Edge(u, z, page_uz), Edge(z, v, page_zv)]
        du, dz1, dz2, dv = 2 * m, 2 * m + 1, 2 * (m + 1), 2 * (m + 1) + 1
    else:
        new = [Edge(z, u, page_uz), Edge(v, z, page_zv)]
        du, dz1, dz2, dv = 2 * m + 1, 2 * m, 2 * (m + 1) + 1, 2 * (m + 1)
    g = PartitionedDigraph(z + 1, graph.edges + tuple(new))
    rotation = [list(r) for r in emb.rotation] + [[dz1, dz2]]
    _insert_dart(rotation, u, au, du)
    _insert_dart(rotation, v, av, dv)
    lam = dict(lam)
    lam[au] = -1
    lam[du] = -1
    lam[av] = 0
    lam[dv] = 0
    lam[dz1] = 0
    lam[dz2] = 0
    cur = CombinatorialEmbedding(g, rotation, emb.outer)
    return g, cur, lam, z


def internal_large_angles(emb: CombinatorialEmbedding, lam: Mapping[int, int]) -> int:
    outer = emb.outer_face
    return sum(1 for a, x in lam.items() if x == 1 and emb.face_of_angle(a) != outer)


# ------------------------------------------------------------ construction


def _component_embedding(graph: PartitionedDigraph, emb: CombinatorialEmbedding, lam, comp: int):
    verts = graph.components[comp]
    sub, vmap, emap = graph.subgraph(verts)
    back_e = {old: new for new, old in enumerate(emap)}

    def conv(d):
        return 2 * back_e[d >> 1] + (d & 1)

    rotation = [[conv(d) for d in emb.rotation[v]] for v in vmap]
    outer = {0: conv(emb.outer[comp])} if comp in emb.outer else {}
    sub_emb = CombinatorialEmbedding(sub, rotation, outer)
    sub_lam = {conv(a): x for a, x in lam.items() if (a >> 1) in back_e}
    return sub, sub_emb, sub_lam, vmap


_SPINE_KEY = {0: 3, 1: 0, 2: 1, 3: 2}  # block type -> rank clockwise from spine-up


def spine_up_angle(emb: CombinatorialEmbedding, lam: Mapping[int, int], v: int) -> int:
    """The angle at ``v`` that contains the upward spine direction in any realizing drawing."""
    types = dart_types(emb.graph)
    nxt = emb.cw_next
    for a in emb.rotation[v]:
        if _SPINE_KEY[types[nxt[a]]] < _SPINE_KEY[types[a]]:
            return a
    return next(a for a in emb.rotation[v] if lam[a] == 1)


def construct_connected(graph: PartitionedDigraph, emb: CombinatorialEmbedding, lam) -> list[int]:
    if graph.m == 0:
        return list(range(graph.n))
    g, e, _, amap = augment_to_st(graph, emb, lam)
    return amap.strip_order(construct_st(g, e))


def construct(graph: PartitionedDigraph, emb: CombinatorialEmbedding, lam: Mapping, *, check: bool = True) -> list[int]:
    """A spine order realizing the good embedding ``(emb, lam)``."""
    lam = to_assignment(lam)
    if check:
        verdict = good_embedding_verdict(graph, emb, lam)
        if not verdict:
            raise PreconditionViolated(f"embedding is not good: {verdict.condition}")
    if graph.is_connected():
        return construct_connected(graph, emb, lam)
    orders = {}
    for ci, comp in enumerate(graph.components):
        if len(comp) == 1:
            orders[ci] = list(comp)
            continue
        sub, sub_emb, sub_lam, vmap = _component_embedding(graph, emb, lam, ci)
        orders[ci] = [vmap[v] for v in construct_connected(sub, sub_emb, sub_lam)]
    root = emb.root_component
    if root is None:
        return list(range(graph.n))
    spine = _SpineList(orders[root])
    placed = {root}
    pending = dict(emb.containment)
    while pending:
        progress = False
        for c, d in sorted(pending.items()):
            host = graph.component_of[graph.dart_vertex(d)]
            if host not in placed:
                continue
            f = emb.face_of_dart[d]
            anchor = None
            for x in orders[host]:
                if emb.rotation[x] and emb.face_of_angle(spine_up_angle(emb, lam, x)) == f:
                    anchor = x
                    break
            if anchor is None:
                raise PreconditionViolated(f"face {f} offers no spine segment for component {c}")
            spine.insert_after(anchor, orders[c])
            placed.add(c)
            del pending[c]
            progress = True
        if not progress:
            raise PreconditionViolated("containment does not reach the root")
    for ci, comp in enumerate(graph.components):
        if ci not in placed:
            spine.insert_after(spine.to_list()[-1], orders[ci])
    return spine.to_list()
