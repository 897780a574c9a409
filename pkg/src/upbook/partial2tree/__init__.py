"""Upward 2-page book embeddings of biconnected partial 2-trees by dynamic programming."""

from .boundary import Chain, Descriptor, State, boundary_state, describe
from .descriptors import (
    discarded,
    extract_descriptor,
    generating_set,
    in_universal,
    is_realizable,
    is_replicable,
    p_feasible,
    q_feasible,
    realize_descriptor,
    s_combine,
    s_feasible,
    universal_set,
)
from .dp import TwoTreeResult, descriptor_set, parallel_feasible, q_state, series, series_feasible, test_partial_2tree, tree_feasible
