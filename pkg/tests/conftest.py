import os
import random

from hypothesis import HealthCheck, settings, strategies as st

from upbook.graph import L, R, build_graph
from upbook.sweeps import random_partial_2tree

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("long", deadline=None, max_examples=2000, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def small_dags(draw, min_n=2, max_n=6):
    """Simple DAGs with vertices numbered in a hidden topological order, then relabelled."""
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=min(len(pairs), 2 * n), unique=True))
    perm = draw(st.permutations(range(n)))
    pages = draw(st.lists(st.sampled_from((L, R)), min_size=len(chosen), max_size=len(chosen)))
    return build_graph([(perm[a], perm[b], p) for (a, b), p in zip(chosen, pages)], n)


@st.composite
def spine_instances(draw, min_n=3, max_n=14):
    """A graph drawn on a known spine order with non-crossing arcs per page, plus that order."""
    n = draw(st.integers(min_n, max_n))
    tries = draw(st.integers(1, 4 * n))
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    arcs = {L: [], R: []}
    edges = []
    used = set()
    for _ in range(tries):
        a, b = sorted(rng.sample(range(n), 2))
        if (a, b) in used:
            continue
        p = rng.choice((L, R))
        if any(x < a < y < b or a < x < b < y for x, y in arcs[p]):
            continue
        arcs[p].append((a, b))
        used.add((a, b))
        edges.append((a, b, p))
    perm = list(range(n))
    rng.shuffle(perm)
    graph = build_graph([(perm[a], perm[b], p) for a, b, p in edges], n)
    return graph, [perm[i] for i in range(n)]


@st.composite
def partial_2trees(draw, min_n=3, max_n=7):
    n = draw(st.integers(min_n, max_n))
    keep = draw(st.sampled_from((0.4, 0.7, 1.0)))
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    return random_partial_2tree(n, rng, keep)
