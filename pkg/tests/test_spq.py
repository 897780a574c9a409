import random
from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from upbook.graph import L, R, build_graph
from upbook.spq import NotBiconnected, NotPartial2Tree, build_spq, is_biconnected, is_partial_2tree
from upbook.sweeps import random_partial_2tree

from conftest import partial_2trees


def undirected(pairs, n):
    return build_graph([(a, b, L) for a, b in pairs], n)


def treewidth_at_most_2(n, pairs):
    """Reference: some elimination order never eliminates a vertex with more than two neighbours."""
    base = {v: set() for v in range(n)}
    for a, b in pairs:
        base[a].add(b)
        base[b].add(a)
    for order in permutations(range(n)):
        adj = {v: set(x) for v, x in base.items()}
        ok = True
        for v in order:
            nb = adj.pop(v)
            if len(nb) > 2:
                ok = False
                break
            for x in nb:
                adj[x].discard(v)
                adj[x] |= nb - {x}
        if ok:
            return True
    return False


def test_series_parallel_graph():
    # two parallel paths of length two plus a chord path
    assert is_partial_2tree(undirected([(0, 1), (1, 3), (0, 2), (2, 3), (0, 3)], 4))


def test_k4_is_not_partial_2tree():
    assert not is_partial_2tree(undirected(list(combinations(range(4), 2)), 4))


@given(st.integers(3, 7), st.data())
def test_recognition_matches_elimination_orders(n, data):
    pairs = list(combinations(range(n), 2))
    chosen = data.draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    assert is_partial_2tree(undirected(chosen, n)) == treewidth_at_most_2(n, chosen)


def test_triangle_tree_shape():
    g = build_graph([(0, 1, L), (1, 2, R), (0, 2, L)], 3)
    for e in range(3):
        tree = build_spq(g, e)
        assert tree.root.kind == "Q" and tree.root.edge == e
        top = tree.top
        assert top.kind == "S"
        assert [c.kind for c in top.children] == ["Q", "Q"]


def test_two_paths_and_reference_edge_give_parallel_node():
    g = build_graph([(0, 1, L), (1, 3, L), (0, 2, R), (2, 3, R), (0, 3, L)], 4)
    tree = build_spq(g, 4)
    assert tree.top.kind == "P"
    assert [c.kind for c in tree.top.children] == ["S", "S"]


def test_direct_edge_becomes_last_parallel_child():
    g = build_graph([(0, 1, L), (1, 3, L), (0, 2, R), (2, 3, R), (0, 3, L), (0, 4, L), (4, 3, L)], 5)
    tree = build_spq(g, 5)
    # reference edge 0 -> 4 sits in a series with 4 -> 3 and the rest
    p = next(x for x in tree.nodes if x.kind == "P")
    assert p.children[-1].kind == "Q" and p.children[-1].edge == 4


def test_errors():
    with pytest.raises(NotBiconnected):
        build_spq(build_graph([(0, 1, L), (1, 2, L)], 3), 0)
    k4 = build_graph([(a, b, L) for a, b in combinations(range(4), 2)], 4)
    with pytest.raises(NotPartial2Tree):
        build_spq(k4, 0)


@given(partial_2trees(max_n=12), st.data())
def test_tree_invariants(g, data):
    e = data.draw(st.integers(0, g.m - 1))
    tree = build_spq(g, e)
    assert tree.top.edges == frozenset(range(g.m)) - {e}
    leaves = set()
    for node in tree.nodes:
        if node is tree.root:
            continue
        if node.kind == "Q":
            assert not node.children and len(node.edges) == 1
            (x,) = node.edges
            assert {g.edges[x].tail, g.edges[x].head} == set(node.poles)
            leaves.add(x)
            continue
        kids = node.children
        assert len(kids) >= 2
        # children's edge sets partition the parent's
        assert sum(len(c.edges) for c in kids) == len(node.edges)
        assert frozenset().union(*(c.edges for c in kids)) == node.edges
        u, v = node.poles
        if node.kind == "S":
            assert len(kids) == 2
            (a, w), (w2, b) = kids[0].poles, kids[1].poles
            assert (a, b) == (u, v) and w == w2 and w not in (u, v)
        else:
            assert all(c.poles == (u, v) for c in kids)
            assert sum(c.kind == "P" for c in kids) == 0
    assert leaves | {e} == set(range(g.m))
    assert len(tree.nodes) <= 4 * g.m


@pytest.mark.parametrize("seed", range(50))
def test_random_partial_2trees_are_biconnected(seed):
    rng = random.Random(seed)
    g = random_partial_2tree(rng.randint(3, 30), rng, rng.random())
    assert is_biconnected(g) and is_partial_2tree(g) and g.is_acyclic()
