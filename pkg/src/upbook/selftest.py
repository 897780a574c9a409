"""Oracle sweeps comparing the deciders with brute force on small instances."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .construct import induced_embedding, validate_ube
from .fixed import test_fixed
from .graph import CombinatorialEmbedding, PartitionedDigraph
from .oracle import all_ubes, brute_force_ube, brute_force_upward_planar, enumerate_embeddings, harvest_boundaries, reduce_upward_planarity
from .partial2tree import test_partial_2tree, tree_feasible
from .partial2tree.dp import node_key
from .sweeps import biconnected_partial_2trees, connected_dags, planar_digraphs, random_partial_2tree
from .upward import enumerate_assignments, is_good_embedding


@dataclass
class SweepReport:
    name: str
    cases: int = 0
    mismatches: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def line(self) -> str:
        status = "ok" if self.ok else f"{len(self.mismatches)} MISMATCHES"
        return f"{self.name}: {self.cases} cases, {status}"


def embedding_key(emb: CombinatorialEmbedding, lam=None) -> tuple:
    """Hashable identity of a connected embedding (and optionally its labels)."""
    outer = frozenset(emb.faces[emb.outer_face].darts) if emb.outer_face is not None else frozenset()
    key = (emb.cw_next, outer)
    if lam is not None:
        key += (tuple(sorted(lam.items())),)
    return key


def check_fixed_instance(graph: PartitionedDigraph) -> tuple[int, list]:
    """Good embeddings versus realized ones, and the fixed-embedding test, for every embedding of a connected graph.

    Returns the number of (embedding, assignment) pairs examined and the
    list of disagreements.
    """
    realized: set = set()
    realized_embeddings: set = set()
    for order in all_ubes(graph):
        emb, lam = induced_embedding(graph, order)
        realized.add(embedding_key(emb, lam))
        realized_embeddings.add(embedding_key(emb))
    cases = 0
    bad = []
    for emb in enumerate_embeddings(graph):
        any_good = False
        for lam in enumerate_assignments(graph, emb):
            cases += 1
            good = is_good_embedding(graph, emb, lam)
            any_good |= good
            if good != (embedding_key(emb, lam) in realized):
                bad.append(("good-vs-realized", graph.edges, emb.rotation, lam))
        res = test_fixed(graph, emb)
        exists = embedding_key(emb) in realized_embeddings
        if bool(res) != exists or bool(res) != any_good:
            bad.append(("fixed-decision", graph.edges, emb.rotation, bool(res), exists, any_good))
        elif res:
            if not validate_ube(graph, res.order) or not induced_embedding(graph, res.order)[0].same_as(emb):
                bad.append(("fixed-witness", graph.edges, emb.rotation, res.order))
        cases += 1
    return cases, bad


def fixed_sweep(max_n: int = 5, graphs: Iterable[PartitionedDigraph] | None = None) -> SweepReport:
    report = SweepReport(f"fixed embeddings, connected DAGs n<={max_n}")
    for g in graphs if graphs is not None else connected_dags(max_n):
        cases, bad = check_fixed_instance(g)
        report.cases += cases
        report.mismatches += bad
    return report


def two_tree_sweep(max_n: int = 6, graphs: Iterable[PartitionedDigraph] | None = None) -> SweepReport:
    report = SweepReport(f"partial 2-trees n<={max_n}")
    for g in graphs if graphs is not None else biconnected_partial_2trees(max_n):
        report.cases += 1
        res = test_partial_2tree(g)
        brute = brute_force_ube(g)
        if bool(res) != (brute is not None):
            report.mismatches.append((g.edges, bool(res), brute))
        elif res and not validate_ube(g, res.order):
            report.mismatches.append((g.edges, "invalid witness", res.order))
    return report


def random_two_tree_sweep(count: int, max_n: int = 8, seed: int = 0) -> SweepReport:
    rng = random.Random(seed)
    graphs = (random_partial_2tree(rng.randint(3, max_n), rng, keep=rng.choice((0.5, 0.7, 0.9))) for _ in range(count))
    report = two_tree_sweep(max_n, graphs)
    report.name = f"random partial 2-trees n<={max_n}, seed {seed}"
    return report


def check_feasible_sets(graph: PartitionedDigraph, harvested: set | None = None) -> tuple[int, list]:
    """DP feasible sets against harvested boundary states for every node of every rooted SPQ-tree.

    Nodes shared between roots are checked once.  The root itself is
    compared too: its harvest is taken over the whole graph with the
    reference edge's endpoints as poles, keeping only embeddings that have
    the reference edge on the outer face.

    ``harvested`` collects (vertex count of the pertinent graph, descriptor)
    for every harvested state.
    """
    cache: dict = {}
    done: set = set()
    cases = 0
    bad = []
    for e in range(graph.m):
        tf = tree_feasible(graph, e, cache)
        for node in tf.tree.nodes:
            key = "root" if node is tf.tree.root else node_key(node)
            ident = (frozenset(range(graph.m)), node.poles, e) if key == "root" else (node.edges, node.poles)
            if ident in done:
                continue
            done.add(ident)
            cases += 1
            want = harvest_boundaries(graph, ident[0], *node.poles, outer_edge=e if key == "root" else None)
            got = set(tf.sets[key])
            if harvested is not None:
                k = len({x for e in ident[0] for x in graph.edges[e][:2]})
                harvested.update((k, s.descriptor()) for s in want)
            if got != want:
                bad.append((graph.edges, e, node.kind, node.poles, sorted(ident[0]), len(got - want), len(want - got)))
    return cases, bad


def feasible_set_sweep(max_n: int = 6, graphs: Iterable[PartitionedDigraph] | None = None, harvested: set | None = None) -> SweepReport:
    report = SweepReport(f"feasible sets, partial 2-trees n<={max_n}")
    for g in graphs if graphs is not None else biconnected_partial_2trees(max_n):
        cases, bad = check_feasible_sets(g, harvested)
        report.cases += cases
        report.mismatches += bad
    return report


def reduction_sweep(max_n: int = 5) -> SweepReport:
    report = SweepReport(f"upward planarity reduction n<={max_n}")
    for g in planar_digraphs(max_n):
        report.cases += 1
        h = reduce_upward_planarity(g)
        if (brute_force_ube(h, cap=h.n) is not None) != brute_force_upward_planar(g):
            report.mismatches.append(g.edges)
    return report


SWEEPS: dict[str, Callable[[int], SweepReport]] = {
    "fixed": lambda n: fixed_sweep(min(n, 5)),
    "2tree": lambda n: two_tree_sweep(n),
    "reduce": lambda n: reduction_sweep(min(n, 5)),
    "feasible": lambda n: feasible_set_sweep(n),
}


def run_sweep(name: str, max_n: int) -> SweepReport:
    return SWEEPS[name](max_n)
