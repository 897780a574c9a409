"""Angle assignments, upward consistency, 4-modality, impossible faces.

An angle assignment is a dict from angle keys to labels in {-1, 0, 1}.  The
key of an angle is its first dart: the angle ``(d, cw_next[d])`` at the
vertex of ``d``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping

from .graph import L, R, Angle, CombinatorialEmbedding, PartitionedDigraph

LO, RO, RI, LI = 0, 1, 2, 3
TYPE_NAMES = ("LO", "RO", "RI", "LI")


@dataclass(frozen=True)
class Verdict:
    ok: bool
    condition: str | None = None
    witness: object = None

    def __bool__(self):
        return self.ok


OK = Verdict(True)


def dart_types(graph: PartitionedDigraph) -> list[int]:
    """Block type of every dart at its own vertex."""
    types = []
    for _, _, p in graph.edges:
        types.append(LO if p == L else RO)
        types.append(LI if p == L else RI)
    return types


def is_switch_angle(a: int, b: int) -> bool:
    return (a & 1) == (b & 1)


def to_assignment(labels: Mapping) -> dict[int, int]:
    """Accept labels keyed by Angle tuples or by first dart."""
    return {(k.first if isinstance(k, Angle) else k): v for k, v in labels.items()}


def is_bimodal_at(embedding: CombinatorialEmbedding, v: int) -> bool:
    rot = embedding.rotation[v]
    changes = sum(1 for i in range(len(rot)) if (rot[i] & 1) != (rot[i - 1] & 1))
    return changes <= 2


def check_upward_embedding(graph: PartitionedDigraph, embedding: CombinatorialEmbedding, lam: Mapping) -> Verdict:
    lam = to_assignment(lam)
    if not graph.is_acyclic():
        return Verdict(False, "acyclic", None)
    for v in range(graph.n):
        if not is_bimodal_at(embedding, v):
            return Verdict(False, "bimodal", v)
    nxt = embedding.cw_next
    for v in range(graph.n):
        for a in embedding.rotation[v]:
            x = lam.get(a)
            if x not in (-1, 0, 1):
                return Verdict(False, "C1", embedding.angle(a))
            if (x == 0) != (not is_switch_angle(a, nxt[a])):
                return Verdict(False, "C1", embedding.angle(a))
    for v in range(graph.n):
        rot = embedding.rotation[v]
        if rot and sum(lam[a] for a in rot) != 2 - len(rot):
            return Verdict(False, "C2", v)
    for f in embedding.faces:
        total = sum(lam[a] for a in embedding.face_angles(f.index))
        if total != (2 if f.outer else -2):
            return Verdict(False, "C3", f.index)
    return OK


def vertex_steps(embedding: CombinatorialEmbedding, types: list[int], lam: Mapping[int, int], v: int) -> list[int]:
    """Clockwise step between the block types of the two darts of each angle at ``v``."""
    nxt = embedding.cw_next
    out = []
    for a in embedding.rotation[v]:
        s = (types[nxt[a]] - types[a]) % 4
        if s == 0 and lam[a] == 1:
            s = 4
        out.append(s)
    return out


def is_4modal_at(embedding: CombinatorialEmbedding, types: list[int], lam: Mapping[int, int], v: int) -> bool:
    """Blocks LO, RO, RI, LI appear once around ``v`` and large switch angles sit where the order wraps."""
    rot = embedding.rotation[v]
    if not rot:
        return True
    nxt = embedding.cw_next
    total = 0
    for a in rot:
        b = nxt[a]
        s = (types[b] - types[a]) % 4
        large = lam[a] == 1
        if s == 0 and large:
            s = 4
        if is_switch_angle(a, b) and large != (s >= 3):
            return False
        total += s
    return total == 4


def is_4modal(graph: PartitionedDigraph, embedding: CombinatorialEmbedding, lam: Mapping) -> bool:
    lam = to_assignment(lam)
    types = dart_types(graph)
    return all(is_4modal_at(embedding, types, lam, v) for v in range(graph.n))


@dataclass(frozen=True)
class BoundaryPath:
    """A maximal directed path on a face boundary.

    ``darts`` are in walk order; ``face_on_left`` tells on which side of the
    path (taken in its own direction) the face lies.  ``start_angle`` and
    ``end_angle`` are the face-side angle keys at the first and last vertex
    of the walk segment.
    """

    face: int
    darts: tuple[int, ...]
    face_on_left: bool
    start_angle: int
    end_angle: int


def boundary_runs(walk: tuple[int, ...]) -> list[tuple[int, int]]:
    """Maximal same-direction runs of a cyclic walk as (start index, length)."""
    k = len(walk)
    dirs = [d & 1 for d in walk]
    if all(x == dirs[0] for x in dirs):
        return []
    start = next(i for i in range(k) if dirs[i] != dirs[i - 1])
    runs = []
    i = 0
    while i < k:
        j = i + 1
        while j < k and dirs[(start + j) % k] == dirs[(start + i) % k]:
            j += 1
        runs.append(((start + i) % k, j - i))
        i = j
    return runs


def maximal_paths(embedding: CombinatorialEmbedding, f: int) -> list[BoundaryPath]:
    walk = embedding.faces[f].darts
    k = len(walk)
    out = []
    for s, length in boundary_runs(walk):
        darts = tuple(walk[(s + i) % k] for i in range(length))
        out.append(BoundaryPath(f, darts, (darts[0] & 1) == 0, walk[(s - 1) % k] ^ 1, darts[-1] ^ 1))
    return out


def _merged_faces(embedding: CombinatorialEmbedding) -> dict[int, list[int]]:
    """Composite faces: host face index -> its own and all nested outer walks."""
    g = embedding.graph
    parent = list(range(len(embedding.faces)))

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for c, d in embedding.containment.items():
        if g.degree(g.components[c][0]) == 0:
            continue
        a = find(embedding.face_of_dart[embedding.outer[c]])
        b = find(embedding.face_of_dart[d])
        parent[a] = b
    groups: dict[int, list[int]] = {}
    for f in range(len(embedding.faces)):
        groups.setdefault(find(f), []).append(f)
    return groups


def impossible_faces(graph: PartitionedDigraph, embedding: CombinatorialEmbedding, lam: Mapping) -> list[tuple[int, BoundaryPath]]:
    """Faces (by representative index) that contain a one-page path pinned by small angles.

    A face is reported when some maximal directed boundary path has all its
    edges on the page facing the face (L when the face is on its left, R when
    on its right), both extreme face-side angles are small, and the rest of
    the boundary is not a single edge.  Faces of nested components are merged
    into their host face first.
    """
    lam = to_assignment(lam)
    edges = graph.edges
    found = []
    for rep, members in sorted(_merged_faces(embedding).items()):
        total = sum(len(embedding.faces[f]) for f in members)
        for f in members:
            for path in maximal_paths(embedding, f):
                bad_page = L if path.face_on_left else R
                if any(edges[d >> 1].page != bad_page for d in path.darts):
                    continue
                if total - len(path.darts) == 1:
                    continue
                if lam[path.start_angle] == -1 and lam[path.end_angle] == -1:
                    found.append((rep, path))
                    break
            else:
                continue
            break
    return found


def is_good_embedding(graph: PartitionedDigraph, embedding: CombinatorialEmbedding, lam: Mapping) -> bool:
    lam = to_assignment(lam)
    return bool(check_upward_embedding(graph, embedding, lam)) and is_4modal(graph, embedding, lam) and not impossible_faces(graph, embedding, lam)


def good_embedding_verdict(graph: PartitionedDigraph, embedding: CombinatorialEmbedding, lam: Mapping) -> Verdict:
    lam = to_assignment(lam)
    v = check_upward_embedding(graph, embedding, lam)
    if not v:
        return v
    types = dart_types(graph)
    for x in range(graph.n):
        if not is_4modal_at(embedding, types, lam, x):
            return Verdict(False, "4-modal", x)
    bad = impossible_faces(graph, embedding, lam)
    if bad:
        return Verdict(False, "impossible face", bad[0])
    return OK


def enumerate_assignments(graph: PartitionedDigraph, embedding: CombinatorialEmbedding) -> Iterator[dict[int, int]]:
    """All upward-consistent assignments: each switch picks one large angle, then faces are filtered."""
    nxt = embedding.cw_next
    base = {}
    switch_choices = []
    for v in range(graph.n):
        rot = embedding.rotation[v]
        if not rot:
            continue
        if graph.is_switch(v):
            switch_choices.append(rot)
            for a in rot:
                base[a] = -1
        else:
            for a in rot:
                base[a] = -1 if is_switch_angle(a, nxt[a]) else 0
    face_keys = [(embedding.face_angles(f.index), 2 if f.outer else -2) for f in embedding.faces]
    for pick in itertools.product(*switch_choices):
        lam = dict(base)
        for a in pick:
            lam[a] = 1
        if all(sum(lam[a] for a in keys) == want for keys, want in face_keys):
            if check_upward_embedding(graph, embedding, lam):
                yield lam
