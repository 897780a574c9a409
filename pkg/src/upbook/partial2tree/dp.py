"""Feasible sets of boundary states over an SPQ-tree, and the top-level test.

Each node keeps a map from the states its pertinent graph can show on its
outer face to one derivation of that state.  Q-nodes have a single state,
S-nodes glue two children at their shared pole, and P-nodes search the
orderings of their children around the poles.  Derivations are replayed to
materialize a witness embedding, which is then turned into a spine order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from ..construct import construct, validate_ube
from ..graph import CombinatorialEmbedding, PartitionedDigraph
from ..spq import NotBiconnected, NotPartial2Tree, SpqNode, build_spq, is_biconnected, is_partial_2tree
from ..upward import is_good_embedding
from .boundary import Chain, Descriptor, State, angle_ok, concat, edge_chain, face_blocked, state_of, step, switch_labels

# A feasible map: state -> derivation.  Derivations are
#   ("Q",) for edges,
#   ("S", s1, s2, beta, gamma) for series nodes,
#   ("P", ((child, state), ...), ((beta_u, beta_v), ...)) for parallel nodes.
Feasible = dict


def q_state(graph: PartitionedDigraph, e: int, u: int, v: int) -> State:
    t, h, p = graph.edges[e]
    if (t, h) == (u, v):
        return State(edge_chain(True, p), edge_chain(False, p), 1, 1)
    if (t, h) == (v, u):
        return State(edge_chain(False, p), edge_chain(True, p), 1, 1)
    raise ValueError("edge does not join the poles")


def series(s1: State, s2: State, beta: int, gamma: int) -> State | None:
    """Glue ``s1`` (poles u, w) and ``s2`` (poles w, v) at w; ``beta`` and ``gamma`` label the new
    left and right angles at w.  None when the result is not a good pole-external embedding."""
    # around w clockwise: s2's darts from its left to its right path, gamma, s1's darts, beta
    if not angle_ok(s1.left_v, s2.left_u, beta):
        return None
    if not angle_ok(s2.right_u, s1.right_v, gamma):
        return None
    if beta + gamma != s1.lam_v + s2.lam_u - 2:
        return None
    if s1.inner_v + s2.inner_u + step(s1.left_v, s2.left_u, beta) + step(s2.right_u, s1.right_v, gamma) != 4:
        return None
    if face_blocked([(s1.left, beta), (s2.left, s2.lam_v), (s2.right, gamma), (s1.right, s1.lam_u)]):
        return None
    return State(concat(s1.left, beta, s2.left), concat(s2.right, gamma, s1.right), s1.lam_u, s2.lam_v)


def series_feasible(f1: Mapping[State, object], f2: Mapping[State, object]) -> Feasible:
    out: Feasible = {}
    by_w: dict[tuple, list[State]] = {}
    for s2 in f2:
        by_w.setdefault((s2.left_u, s2.right_u), []).append(s2)
    for s1 in f1:
        for (lu, ru), group in by_w.items():
            betas = switch_labels(s1.left_v, lu)
            gammas = switch_labels(ru, s1.right_v)
            for beta in betas:
                for gamma in gammas:
                    if beta + gamma + 2 - s1.lam_v not in (-1, 0, 1):
                        continue
                    for s2 in group:
                        res = series(s1, s2, beta, gamma)
                        if res is not None and res not in out:
                            out[res] = ("S", s1, s2, beta, gamma)
    return out


def _close(first: State, last: State, used_u: int, used_v: int, k: int, sum_lu: int, sum_lv: int, sum_bu: int, sum_bv: int) -> State | None:
    """Outer labels of a parallel composition, or None when they cannot be chosen consistently."""
    lam = []
    for t1, t2, used, sum_l, sum_b in (
        (last.right_u, first.left_u, used_u, sum_lu, sum_bu),
        (first.left_v, last.right_v, used_v, sum_lv, sum_bv),
    ):
        x = 2 - 2 * k + sum_l - sum_b
        if x not in (-1, 0, 1) or not angle_ok(t1, t2, x) or step(t1, t2, x) + used != 4:
            return None
        lam.append(x)
    if first.left.tau + last.right.tau + lam[0] + lam[1] != 2:
        return None
    if face_blocked([(first.left, lam[1]), (last.right, lam[0])]):
        return None
    return State(first.left, last.right, lam[0], lam[1])


def parallel_feasible(children: Sequence[Mapping[State, object]]) -> Feasible:
    """Every state some ordering of the children around the poles can produce.

    Children with identical feasible maps are interchangeable, so the search
    tracks how many of each kind remain.  A sequence is extended one child at
    a time; budgets of block steps at both poles bound it.
    """
    kinds: list[Mapping[State, object]] = []
    members: list[list[int]] = []
    index: dict[frozenset, int] = {}
    for i, f in enumerate(children):
        key = frozenset(f)
        if key not in index:
            index[key] = len(kinds)
            kinds.append(f)
            members.append([])
        members[index[key]].append(i)
    counts = tuple(len(m) for m in members)
    pool = [(ki, s, s.left_u, s.left_v, s.inner_u, s.inner_v, s.left.tau) for ki, f in enumerate(kinds) for s in f]
    memo: dict[tuple, dict] = {}

    def extend(last: State, used_u: int, used_v: int, remaining: tuple[int, ...]) -> dict:
        """End configurations reachable from here: (last, used_u, used_v, sums) -> path."""
        key = (last, used_u, used_v, remaining)
        if key in memo:
            return memo[key]
        found: dict = {}
        if not any(remaining):
            found[(last, used_u, used_v, 0, 0, 0, 0)] = ()
            memo[key] = found
            return found
        ru, rv, rtau = last.right_u, last.right_v, last.right.tau
        for ki, s, lu, lv, iu, iv, ltau in pool:
            if not remaining[ki]:
                continue
            for beta_u in switch_labels(ru, lu):
                nu = used_u + step(ru, lu, beta_u) + iu
                if nu > 4:
                    continue
                beta_v = -2 - beta_u - rtau - ltau
                if beta_v not in switch_labels(lv, rv):
                    continue
                nv = used_v + step(lv, rv, beta_v) + iv
                if nv > 4 or face_blocked([(s.left, beta_v), (last.right, beta_u)]):
                    continue
                rem = remaining[:ki] + (remaining[ki] - 1,) + remaining[ki + 1:]
                for end, path in extend(s, nu, nv, rem).items():
                    e_last, e_u, e_v, lu_sum, lv_sum, bu, bv = end
                    end2 = (e_last, e_u, e_v, lu_sum + s.lam_u, lv_sum + s.lam_v, bu + beta_u, bv + beta_v)
                    if end2 not in found:
                        found[end2] = ((ki, s, beta_u, beta_v),) + path
        memo[key] = found
        return found

    k = len(children)
    out: Feasible = {}
    for ki, f in enumerate(kinds):
        rem = counts[:ki] + (counts[ki] - 1,) + counts[ki + 1:]
        for s in f:
            if s.inner_u > 4 or s.inner_v > 4:
                continue
            for end, path in extend(s, s.inner_u, s.inner_v, rem).items():
                last, used_u, used_v, lu, lv, bu, bv = end
                res = _close(s, last, used_u, used_v, k, lu + s.lam_u, lv + s.lam_v, bu, bv)
                if res is None or res in out:
                    continue
                seq = [(ki, s, None, None)] + list(path)
                out[res] = ("P", _assign(seq, members))
    return out


def _assign(seq, members):
    """Turn a path over kinds into concrete children, in order, with the gap labels."""
    pools = [list(m) for m in members]
    order = []
    gaps = []
    for ki, s, bu, bv in seq:
        order.append((pools[ki].pop(0), s))
        if bu is not None:
            gaps.append((bu, bv))
    return tuple(order), tuple(gaps)


# ------------------------------------------------------------ tree DP


def node_key(node: SpqNode) -> tuple:
    """Nodes with the same pertinent edges and poles decompose alike, whatever the root."""
    return (node.edges, node.poles)


@dataclass
class TreeFeasible:
    """Feasible maps of the nodes of one SPQ-tree, keyed by ``node_key``; the root under ``"root"``."""

    tree: object
    sets: dict[tuple, Feasible]

    def root_set(self) -> Feasible:
        return self.sets["root"]

    def of(self, node: SpqNode) -> Feasible:
        return self.sets["root"] if node is self.tree.root else self.sets[node_key(node)]


def node_feasible(graph: PartitionedDigraph, node: SpqNode, sets: Mapping[tuple, Feasible]) -> Feasible:
    u, v = node.poles
    if node.kind == "Q":
        return {q_state(graph, node.edge, u, v): ("Q",)}
    kids = [sets[node_key(c)] for c in node.children]
    if node.kind == "S":
        return series_feasible(kids[0], kids[1])
    return parallel_feasible(kids)


def tree_feasible(graph: PartitionedDigraph, reference_edge: int, cache: dict | None = None) -> TreeFeasible:
    """Bottom-up feasible maps; the root combines the rest of the graph with the reference edge.

    ``cache`` may be shared between calls on the same graph with different
    reference edges.
    """
    tree = build_spq(graph, reference_edge, validate=cache is None)
    sets: dict = {} if cache is None else cache
    for node in tree.nodes:
        if node is tree.root:
            u, v = node.poles
            q = {q_state(graph, reference_edge, u, v): ("Q",)}
            root = parallel_feasible([sets[node_key(tree.top)], q])
        else:
            key = node_key(node)
            if key not in sets:
                sets[key] = node_feasible(graph, node, sets)
    view = {node_key(x): sets[node_key(x)] for x in tree.nodes if x is not tree.root}
    view["root"] = root
    return TreeFeasible(tree, view)


def descriptor_set(feasible: Mapping[State, object]) -> set[Descriptor]:
    return {s.descriptor() for s in feasible}


# ------------------------------------------------------------ witnesses


@dataclass
class _Piece:
    """Partial embedding of a pertinent graph: rotations of inner vertices, dart lists at the poles."""

    rot: dict[int, list[int]]
    at_u: list[int]  # clockwise from the left path's dart to the right path's dart
    at_v: list[int]  # clockwise from the right path's dart to the left path's dart
    lam: dict[int, int]


def _materialize(graph: PartitionedDigraph, node: SpqNode, state: State, sets: Mapping[int, Feasible], root_edge: int | None = None) -> _Piece:
    u, v = node.poles
    if node.kind == "Q" and root_edge is None:
        e = node.edge
        du, dv = (2 * e, 2 * e + 1) if graph.edges[e].tail == u else (2 * e + 1, 2 * e)
        return _Piece({}, [du], [dv], {})
    how = sets["root" if root_edge is not None else node_key(node)][state]
    if how[0] == "S":
        _, s1, s2, beta, gamma = how
        c1, c2 = node.children
        a = _materialize(graph, c1, s1, sets)
        b = _materialize(graph, c2, s2, sets)
        w = c1.poles[1]
        rot = {**a.rot, **b.rot, w: b.at_u + a.at_v}
        lam = {**a.lam, **b.lam, b.at_u[-1]: gamma, a.at_v[-1]: beta}
        return _Piece(rot, a.at_u, b.at_v, lam)
    _, (order, gaps) = how
    kids = list(node.children) if root_edge is None else [node.children[0], None]
    pieces = []
    for ci, s in order:
        child = kids[ci]
        if child is None:
            e = root_edge
            du, dv = (2 * e, 2 * e + 1) if graph.edges[e].tail == u else (2 * e + 1, 2 * e)
            pieces.append(_Piece({}, [du], [dv], {}))
        else:
            pieces.append(_materialize(graph, child, s, sets))
    rot: dict[int, list[int]] = {}
    lam: dict[int, int] = {}
    at_u: list[int] = []
    at_v: list[int] = []
    for i, p in enumerate(pieces):
        rot.update(p.rot)
        lam.update(p.lam)
        if i:
            bu, bv = gaps[i - 1]
            lam[pieces[i - 1].at_u[-1]] = bu
            lam[p.at_v[-1]] = bv
        at_u.extend(p.at_u)
    for p in reversed(pieces):
        at_v.extend(p.at_v)
    return _Piece(rot, at_u, at_v, lam)


def witness_embedding(graph: PartitionedDigraph, tf: TreeFeasible, state: State) -> tuple[CombinatorialEmbedding, dict[int, int]]:
    tree = tf.tree
    root = tree.root
    u, v = root.poles
    piece = _materialize(graph, root, state, tf.sets, root_edge=tree.reference_edge)
    rotation = [[] for _ in range(graph.n)]
    for x, r in piece.rot.items():
        rotation[x] = r
    rotation[u] = piece.at_u
    rotation[v] = piece.at_v
    lam = dict(piece.lam)
    lam[piece.at_u[-1]] = state.lam_u
    lam[piece.at_v[-1]] = state.lam_v
    emb = CombinatorialEmbedding(graph, rotation, {0: piece.at_u[0]})
    return emb, lam


# ------------------------------------------------------------ decision


@dataclass
class TwoTreeResult:
    ok: bool
    embedding: CombinatorialEmbedding | None = None
    lam: dict[int, int] | None = None
    order: list[int] | None = None
    reference_edge: int | None = None

    def __bool__(self):
        return self.ok


def test_partial_2tree(graph: PartitionedDigraph, *, jobs: int = 1, check: bool = False) -> TwoTreeResult:
    """Decide whether a biconnected partial 2-tree has a 2-page upward book embedding."""
    if graph.m == 1:
        order = list(graph.topological_order)
        return TwoTreeResult(True, order=order)
    if not is_biconnected(graph):
        raise NotBiconnected("the graph is not biconnected")
    if not is_partial_2tree(graph):
        raise NotPartial2Tree("treewidth exceeds two")
    if not graph.is_acyclic():
        return TwoTreeResult(False)
    edges = range(graph.m)
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(jobs) as pool:
            found = [e for e, ok in zip(edges, pool.map(_root_nonempty, [graph] * graph.m, edges)) if ok]
        edges = found[:1]
    cache: dict = {}
    for e in edges:
        tf = tree_feasible(graph, e, cache)
        root = tf.root_set()
        if not root:
            continue
        state = min(root, key=lambda s: s.descriptor())
        emb, lam = witness_embedding(graph, tf, state)
        if check:
            assert is_good_embedding(graph, emb, lam), "materialized witness is not good"
        order = construct(graph, emb, lam, check=check)
        assert validate_ube(graph, order)
        return TwoTreeResult(True, emb, lam, order, e)
    return TwoTreeResult(False)


def _root_nonempty(graph: PartitionedDigraph, e: int) -> bool:
    return bool(tree_feasible(graph, e).root_set())
