import random

import pytest
from hypothesis import given, strategies as st

from upbook.construct import (
    NotBijective,
    PreconditionViolated,
    augment_to_st,
    construct,
    construct_st,
    induced_embedding,
    internal_large_angles,
    validate_ube,
)
from upbook.graph import L, R, CombinatorialEmbedding, build_graph, embedding_from_rotation
from upbook.sweeps import random_nested_st_graph, random_plane_st_graph
from upbook.upward import enumerate_assignments, is_good_embedding

from _support import crossing_free
from conftest import small_dags, spine_instances


def path_with_chords(p1, p2):
    return build_graph([(0, 1, L), (1, 2, L), (2, 3, L), (0, 2, p1), (1, 3, p2)], 4)


def test_chords_on_different_pages_are_valid():
    assert validate_ube(path_with_chords(L, R), [0, 1, 2, 3])


def test_chords_on_one_page_cross():
    v = validate_ube(path_with_chords(L, L), [0, 1, 2, 3])
    assert not v
    assert v.condition == "crossing on page L" and set(v.witness) == {3, 4}


def test_order_must_be_topological():
    v = validate_ube(build_graph([(0, 1, L)], 2), [1, 0])
    assert not v and v.condition == "not topological"


@pytest.mark.parametrize("order", [[0, 0], [0], [0, 1, 2]])
def test_order_must_be_a_permutation(order):
    with pytest.raises(NotBijective):
        validate_ube(build_graph([(0, 1, L)], 2), order)


@given(small_dags(max_n=7), st.randoms(use_true_random=False))
def test_validator_matches_pairwise_check(g, rnd):
    order = list(range(g.n))
    for _ in range(5):
        rnd.shuffle(order)
        assert bool(validate_ube(g, order)) == crossing_free(g, order)
    topo = list(g.topological_order)
    assert bool(validate_ube(g, topo)) == crossing_free(g, topo)


def test_single_edge_induced_embedding():
    g = build_graph([(0, 1, R)], 2)
    emb, lam = induced_embedding(g, [0, 1])
    assert emb.rotation == ((0,), (1,))
    assert lam == {0: 1, 1: 1}


def test_chord_instance_puts_chords_in_distinct_faces():
    g = path_with_chords(L, R)
    emb, lam = induced_embedding(g, [0, 1, 2, 3])
    fd = emb.face_of_dart
    outer = emb.outer_face
    # both chords lie on the outer face; their inner faces differ
    assert outer in {fd[6], fd[7]} and outer in {fd[8], fd[9]}
    assert {fd[6], fd[7]} - {outer} != {fd[8], fd[9]} - {outer}
    assert list(enumerate_assignments(g, emb)) == [lam]


@given(spine_instances(max_n=12))
def test_construct_reproduces_induced_embedding(inst):
    g, order = inst
    emb, lam = induced_embedding(g, order)
    got = construct(g, emb, lam)
    assert validate_ube(g, got)
    emb2, lam2 = induced_embedding(g, got)
    assert emb2.same_as(emb)
    assert lam2 == lam


def test_construct_rejects_bad_input():
    g = build_graph([(0, 1, L), (0, 2, R), (0, 3, L), (0, 4, R)], 5)
    emb = embedding_from_rotation(g, [[0, 2, 4, 6], [1], [3], [5], [7]], 0)
    lam = next(enumerate_assignments(g, emb))
    with pytest.raises(PreconditionViolated):
        construct(g, emb, lam)


def test_directed_path_is_laid_out_in_order():
    g = build_graph([(2, 0, L), (0, 3, R), (3, 1, L)], 4)
    emb = embedding_from_rotation(g, [[1, 2], [5], [0], [3, 4]], 0)
    assert construct_st(g, emb) == [2, 0, 3, 1]


def test_contained_edge_is_consecutive():
    g = build_graph([(0, 1, L), (2, 3, R)], 4)
    for host in (0, 1):
        emb = CombinatorialEmbedding(g, [[0], [1], [2], [3]], {0: 0, 1: 2}, {1: host})
        lam = {0: 1, 1: 1, 2: 1, 3: 1}
        order = construct(g, emb, lam)
        assert validate_ube(g, order)
        assert abs(order.index(2) - order.index(3)) == 1


@pytest.mark.parametrize("seed", range(1000))
def test_construct_st_on_nested_st_graphs(seed):
    rng = random.Random(seed)
    g, spine = random_nested_st_graph(rng.randint(3, 14), rng, rng.random())
    emb, lam = induced_embedding(g, spine)
    order = construct_st(g, emb)
    assert validate_ube(g, order)
    assert induced_embedding(g, order)[0].same_as(emb)


@pytest.mark.parametrize("seed", range(300))
def test_construct_st_on_plane_st_graphs_with_good_pages(seed):
    rng = random.Random(seed)
    for _ in range(50):
        g, emb = random_plane_st_graph(rng.randint(3, 10), rng)
        (lam,) = enumerate_assignments(g, emb)
        if is_good_embedding(g, emb, lam):
            break
    else:
        pytest.skip("no good page assignment drawn")
    order = construct_st(g, emb)
    assert validate_ube(g, order)
    assert induced_embedding(g, order)[0].same_as(emb)


def _check_augmentation(g, emb, lam):
    steps = []
    before = internal_large_angles(emb, lam)
    g2, emb2, lam2, amap = augment_to_st(g, emb, lam, on_step=steps.append)
    # the original graph is a prefix of the augmented one
    assert g2.edges[: g.m] == g.edges and amap.original_n == g.n and amap.original_m == g.m
    assert g2.n == g.n + 4 + len(amap.subdivisions)
    # the gadget adds five edges, every split two
    assert g2.m == g.m + 5 + 2 * len(amap.subdivisions)
    assert len(steps) == len(amap.subdivisions)
    # the gadget may add large angles inside; every split then removes one
    first = steps[0] + 1 if steps else None
    assert all(b == a - 1 for a, b in zip([first] + steps, steps))
    assert not steps or steps[-1] == 0
    assert sum(g2.is_source(v) for v in range(g2.n)) == 1
    assert sum(g2.is_sink(v) for v in range(g2.n)) == 1
    assert is_good_embedding(g2, emb2, lam2)
    return before, steps


@given(spine_instances(min_n=2, max_n=12))
def test_augmentation_is_reversible_and_progresses(inst):
    g, order = inst
    if g.m == 0 or not g.is_connected():
        return
    emb, lam = induced_embedding(g, order)
    _check_augmentation(g, emb, lam)


def test_st_graph_needs_one_split_to_reach_the_gadget_sink():
    # the old sink keeps its large angle inside the gadget face, one split joins it to the new sink
    g = build_graph([(0, 1, L), (1, 2, R), (0, 2, R)], 3)
    emb, lam = induced_embedding(g, [0, 1, 2])
    _, steps = _check_augmentation(g, emb, lam)
    assert steps == [0]
    g2, _, _, amap = augment_to_st(g, emb, lam)
    (z,) = amap.subdivisions
    c = amap.gadget[2]
    assert {(e.tail, e.head) for e in g2.edges[-2:]} == {(2, z), (z, c)}


def test_single_source_single_sink_with_non_st_outer_face():
    # 0 -> 1 -> 3 and 0 -> 2 -> 3 all on L, spine 0 1 2 3: vertex 2 sits inside
    g = build_graph([(0, 1, L), (1, 3, L), (0, 2, R), (2, 3, R)], 4)
    emb, lam = induced_embedding(g, [0, 1, 2, 3])
    g2, emb2, lam2, amap = augment_to_st(g, emb, lam)
    a, b, c, d = amap.gadget
    assert {(e.tail, e.head) for e in g2.edges[g.m : g.m + 5]} >= {(a, b), (b, c), (a, c)}
    outer = {g2.dart_vertex(x) for x in emb2.faces[emb2.outer_face].darts}
    assert outer == {a, b, c}
