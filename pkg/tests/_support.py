"""Helpers shared by the test modules: embeddings from coordinates and small reference checks."""

import math
from itertools import combinations

from upbook.graph import L, R, build_graph, embedding_from_rotation

# Octahedron as K_{2,2,2}: antipodal pairs (0,5), (1,3), (2,4) are the non-edges.
ANTIPODE = {0: 5, 5: 0, 1: 3, 3: 1, 2: 4, 4: 2}
OCTA_PAIRS = [(a, b) for a in range(6) for b in range(a + 1, 6) if ANTIPODE[a] != b]

# Straight-line drawing: outer triangle 0, 1, 2, inner triangle 5, 3, 4 with
# each inner vertex opposite its antipode.
OCTA_XY = {}
for k, (outer, inner) in enumerate(((0, 5), (1, 3), (2, 4))):
    ang = math.pi / 2 + 2 * math.pi * k / 3
    OCTA_XY[outer] = (3 * math.cos(ang), 3 * math.sin(ang))
    OCTA_XY[inner] = (-math.cos(ang), -math.sin(ang))


def rotation_from_coords(graph, xy):
    """Clockwise dart order at each vertex of a straight-line drawing."""
    rot = []
    for v in range(graph.n):
        x0, y0 = xy[v]

        def key(d):
            x, y = xy[graph.dart_far(d)]
            return -math.atan2(y - y0, x - x0)

        rot.append(sorted(graph.darts_at[v], key=key))
    return rot


def embedding_from_coords(graph, xy):
    """Embedding of a connected straight-line drawing.

    Face walks keep their face on the left, so bounded faces run
    counter-clockwise and the outer walk is the one with negative area.
    """
    rot = rotation_from_coords(graph, xy)
    emb = embedding_from_rotation(graph, rot, 0)
    for f in emb.faces:
        pts = [xy[graph.dart_vertex(d)] for d in f.darts]
        area = sum(x0 * y1 - x1 * y0 for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]))
        if area < 0:
            return embedding_from_rotation(graph, rot, f.darts[0])
    raise AssertionError("drawing has no clockwise face walk")


def octahedron(arcs, pages=None):
    pages = pages or [L] * len(arcs)
    return build_graph([(a, b, p) for (a, b), p in zip(arcs, pages)], 6)


def crossing_free(graph, order):
    """Independent UBE check: topological order and no interleaving pair on a page."""
    pos = {v: i for i, v in enumerate(order)}
    if sorted(pos) != list(range(graph.n)):
        return False
    if any(pos[t] >= pos[h] for t, h, _ in graph.edges):
        return False
    for (t1, h1, p1), (t2, h2, p2) in combinations(graph.edges, 2):
        if p1 != p2:
            continue
        a, b = pos[t1], pos[h1]
        c, d = pos[t2], pos[h2]
        if a < c < b < d or c < a < d < b:
            return False
    return True


def swap_pages(graph):
    return build_graph([(t, h, R if p == L else L) for t, h, p in graph.edges], graph.n)
