import random
from itertools import product

import pytest
from hypothesis import given

from upbook.construct import induced_embedding
from upbook.graph import L, R, build_graph, embedding_from_rotation
from upbook.oracle import all_ubes, enumerate_embeddings
from upbook.sweeps import random_plane_st_graph
from upbook.upward import (
    check_upward_embedding,
    enumerate_assignments,
    good_embedding_verdict,
    impossible_faces,
    is_4modal,
    is_good_embedding,
    maximal_paths,
)

from conftest import small_dags, spine_instances


def diamond(p01, p12, p03, p32):
    """Two directed paths 0->1->2 and 0->3->2."""
    return build_graph([(0, 1, p01), (1, 2, p12), (0, 3, p03), (3, 2, p32)], 4)


def test_single_edge_forced_labels():
    g = build_graph([(0, 1, L)], 2)
    emb = embedding_from_rotation(g, [[0], [1]], 0)
    assert check_upward_embedding(g, emb, {0: 1, 1: 1})
    assert not check_upward_embedding(g, emb, {0: -1, 1: 1})
    assert [lam for lam in enumerate_assignments(g, emb)] == [{0: 1, 1: 1}]
    assert is_good_embedding(g, emb, {0: 1, 1: 1})


def test_moving_a_large_angle_breaks_face_sums():
    g, order = build_graph([(0, 1, L), (1, 2, R), (0, 3, L), (3, 2, R), (0, 2, L)], 4), [0, 1, 3, 2]
    emb, lam = induced_embedding(g, order)
    assert check_upward_embedding(g, emb, lam)
    # move the large angle of the source to a neighbouring angle: vertex sums hold, face sums do not
    big = next(a for a in emb.rotation[0] if lam[a] == 1)
    other = emb.cw_next[big]
    lam2 = dict(lam)
    lam2[big], lam2[other] = -1, 1
    v = check_upward_embedding(g, emb, lam2)
    assert not v and v.condition == "C3"


def test_flipping_one_switch_label_reports_vertex_sum():
    g, order = build_graph([(0, 1, L), (1, 2, R), (0, 3, L), (3, 2, R)], 4), [0, 1, 3, 2]
    emb, lam = induced_embedding(g, order)
    a = emb.rotation[0][0]
    lam[a] = -lam[a]
    assert check_upward_embedding(g, emb, lam).condition == "C2"


def test_flat_angle_with_nonzero_label_is_c1():
    g = build_graph([(0, 1, L), (1, 2, L)], 3)
    emb = embedding_from_rotation(g, [[0], [1, 2], [3]], 0)
    assert check_upward_embedding(g, emb, {0: 1, 1: 1, 2: -1, 3: 1}).condition == "C1"


def test_directed_cycle_is_never_upward():
    g = build_graph([(0, 1, L), (1, 2, L), (2, 0, L)], 3)
    emb = embedding_from_rotation(g, [[0, 5], [1, 2], [3, 4]], 0)
    assert not any(check_upward_embedding(g, emb, lam) for lam in enumerate_assignments(g, emb))


def test_one_in_one_out_vertex_is_4modal():
    for p, q in product((L, R), repeat=2):
        g = build_graph([(0, 1, p), (1, 2, q)], 3)
        emb = embedding_from_rotation(g, [[0], [1, 2], [3]], 0)
        (lam,) = enumerate_assignments(g, emb)
        assert is_4modal(g, emb, lam)


def test_source_with_alternating_pages_is_not_4modal():
    g = build_graph([(0, 1, L), (0, 2, R), (0, 3, L), (0, 4, R)], 5)
    emb = embedding_from_rotation(g, [[0, 2, 4, 6], [1], [3], [5], [7]], 0)
    assert not any(is_4modal(g, emb, lam) for lam in enumerate_assignments(g, emb))


def test_split_left_block_at_source_depends_on_large_angle():
    # clockwise L, R, L is cyclically L, L, R, so only one large-angle position works
    g = build_graph([(0, 1, L), (0, 2, R), (0, 3, L)], 4)
    emb = embedding_from_rotation(g, [[0, 2, 4], [1], [3], [5]], 0)
    ok = {lam[2] == 1 for lam in enumerate_assignments(g, emb) if is_4modal(g, emb, lam)}
    assert ok == {True}


def test_single_edge_rest_of_boundary_excuses_face():
    # 0->1->2 on page R beside the edge 0->2 on page L, drawn on the spine 0, 1, 2
    g = build_graph([(0, 1, R), (1, 2, R), (0, 2, L)], 3)
    emb, lam = induced_embedding(g, [0, 1, 2])
    assert impossible_faces(g, emb, lam) == []
    assert is_good_embedding(g, emb, lam)


def test_one_page_path_against_subdivided_path_is_impossible():
    """An R path with the face on its right and a two-edge rest, both extreme angles small."""
    g = diamond(R, R, L, L)
    found = 0
    for emb in enumerate_embeddings(g):
        for lam in enumerate_assignments(g, emb):
            for f, path in impossible_faces(g, emb, lam):
                found += 1
                pages = {g.edges[d >> 1].page for d in path.darts}
                assert pages == ({L} if path.face_on_left else {R})
                assert lam[path.start_angle] == lam[path.end_angle] == -1
    assert found > 0


def test_large_extreme_angle_removes_impossibility():
    g = diamond(R, R, L, L)
    for emb in enumerate_embeddings(g):
        for lam in enumerate_assignments(g, emb):
            for f, path in impossible_faces(g, emb, lam):
                # same face and path, with one extreme angle made large, is not reported
                lam2 = dict(lam)
                lam2[path.start_angle] = 1
                again = [p for h, p in impossible_faces(g, emb, lam2) if p.darts == path.darts]
                assert again == []


def test_transitive_triangle_all_left_is_good_in_some_embedding():
    g = build_graph([(0, 1, L), (1, 2, L), (0, 2, L)], 3)
    verdicts = [is_good_embedding(g, emb, lam) for emb in enumerate_embeddings(g) for lam in enumerate_assignments(g, emb)]
    assert any(verdicts) and not all(verdicts)


def test_verdict_names_first_failure():
    g = build_graph([(0, 1, L), (0, 2, R), (0, 3, L), (0, 4, R)], 5)
    emb = embedding_from_rotation(g, [[0, 2, 4, 6], [1], [3], [5], [7]], 0)
    lam = next(enumerate_assignments(g, emb))
    assert good_embedding_verdict(g, emb, lam).condition == "4-modal"


def _assignments_by_product(g, emb):
    """Reference: every way to give each switch one large angle, filtered by the face sums."""
    nxt = emb.cw_next
    heads = [d & 1 for d in range(2 * g.m)]
    switches = [v for v in range(g.n) if g.is_switch(v)]
    out = []
    for pick in product(*(emb.rotation[v] for v in switches)):
        lam = {}
        for v in range(g.n):
            for a in emb.rotation[v]:
                lam[a] = -1 if heads[a] == heads[nxt[a]] else 0
        for a in pick:
            lam[a] = 1
        if all(sum(lam[a] for a in emb.face_angles(f.index)) == (2 if f.outer else -2) for f in emb.faces):
            out.append(lam)
    return out


@given(small_dags(max_n=5))
def test_enumerate_assignments_matches_product_filter(g):
    for k, emb in enumerate(enumerate_embeddings(g)):
        if k == 6 or not g.is_connected():
            break
        got = sorted(tuple(sorted(x.items())) for x in enumerate_assignments(g, emb))
        want = sorted(tuple(sorted(x.items())) for x in _assignments_by_product(g, emb))
        assert got == want


@pytest.mark.parametrize("seed", range(30))
def test_plane_st_graph_has_unique_assignment(seed):
    rng = random.Random(seed)
    g, emb = random_plane_st_graph(rng.randint(2, 12), rng)
    assert len(list(enumerate_assignments(g, emb))) == 1


def _st_paths(g, emb, f):
    """Left and right paths of an st-face as edge lists (walks keep the face on their left)."""
    walk = emb.faces[f].darts
    forward = [d >> 1 for d in walk if not d & 1]
    backward = [d >> 1 for d in walk if d & 1]
    if emb.faces[f].outer:
        return forward, backward
    return backward, forward


def _st_impossible(g, emb, f):
    left, right = _st_paths(g, emb, f)
    pages = lambda es: {g.edges[e].page for e in es}
    return (pages(left) == {R} and len(right) > 1) or (pages(right) == {L} and len(left) > 1)


@pytest.mark.parametrize("seed", range(200))
def test_st_definition_agrees_on_internal_faces(seed):
    rng = random.Random(seed)
    g, emb = random_plane_st_graph(rng.randint(3, 10), rng)
    (lam,) = enumerate_assignments(g, emb)
    flagged = {f for f, _ in impossible_faces(g, emb, lam)}
    for face in emb.faces:
        if not face.outer:
            assert (face.index in flagged) == _st_impossible(g, emb, face.index)
    assert emb.outer_face not in flagged


@given(spine_instances(max_n=7))
def test_induced_embedding_is_good(inst):
    g, order = inst
    emb, lam = induced_embedding(g, order)
    assert is_good_embedding(g, emb, lam)


@given(small_dags(max_n=5))
def test_every_ube_induces_good_embedding(g):
    for k, order in enumerate(all_ubes(g)):
        if k == 10:
            break
        emb, lam = induced_embedding(g, order)
        assert is_good_embedding(g, emb, lam)


def test_maximal_paths_cover_face_walk():
    g = diamond(L, R, L, R)
    emb, lam = induced_embedding(g, [0, 1, 3, 2])
    for f in emb.faces:
        paths = maximal_paths(emb, f.index)
        assert sorted(d for p in paths for d in p.darts) == sorted(f.darts)
