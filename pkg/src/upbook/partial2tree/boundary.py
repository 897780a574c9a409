"""Summaries of the two outer boundary paths of a pole-external embedding.

A pertinent graph with poles ``u`` and ``v`` is summarized by its two outer
paths.  The left path is read along the outer face walk from ``u`` to ``v``,
the right path along the same walk from ``v`` back to ``u``.  A dart is *bad*
when the face it bounds would see a one-page directed path: forward darts on
page L and backward darts on page R.

Besides the published descriptor fields, each path also carries a few capped
edge counts.  They decide whether a pinned one-page path is excused because
the rest of its face is a single edge, which the descriptor alone cannot tell.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

from ..graph import L, R, CombinatorialEmbedding, PartitionedDigraph
from ..upward import LI, LO, RI, RO

IN, OUT = "in", "out"


def is_bad(forward: bool, page: str) -> bool:
    return page == (L if forward else R)


def block_type(direction: str, page: str) -> int:
    if direction == OUT:
        return LO if page == L else RO
    return LI if page == L else RI


def step(t1: int, t2: int, label: int) -> int:
    """Clockwise block step across an angle; equal blocks count 4 when the angle is large."""
    s = (t2 - t1) % 4
    if s == 0 and label == 1:
        return 4
    return s


def angle_ok(t1: int, t2: int, label: int) -> bool:
    """C1 plus the 4-modal rule for one angle between darts of block types t1, t2."""
    flat = (t1 in (LO, RO)) != (t2 in (LO, RO))
    if flat:
        return label == 0
    if label == 0:
        return False
    return (label == 1) == (step(t1, t2, label) >= 3)


_LABELS = [[tuple(x for x in (-1, 0, 1) if angle_ok(a, b, x)) for b in range(4)] for a in range(4)]


def switch_labels(t1: int, t2: int) -> tuple[int, ...]:
    """Labels an angle between these block types may carry."""
    return _LABELS[t1][t2]


def _cap(x: int) -> int:
    return 2 if x > 2 else x


class Chain(NamedTuple):
    """One outer path in walk order.

    ``d0``/``d1`` tell whether the first and last darts run along their
    edges.  ``a0`` is set when the first run is entirely bad and stops at a
    small angle before the far end; ``a1`` likewise for the last run.  The
    counts are capped at 2: ``n`` edges in total, ``r0`` outside the first
    run, ``r1`` outside the last run and ``mid`` outside both.
    """

    d0: bool
    p0: str
    d1: bool
    p1: str
    tau: int
    chi: bool
    a0: bool
    a1: bool
    one_run: bool = False
    n: int = 2
    r0: int = 2
    r1: int = 2
    mid: int = 2

    @property
    def first_bad(self) -> bool:
        return is_bad(self.d0, self.p0)

    def without_counts(self) -> "Chain":
        return self._replace(one_run=self.chi, n=2, r0=2 if not self.chi else 0, r1=2 if not self.chi else 0, mid=2 if not self.chi else 0)


def edge_chain(forward: bool, page: str) -> Chain:
    return Chain(forward, page, forward, page, 0, is_bad(forward, page), False, False, True, 1, 0, 0, 0)


def concat(x: Chain, label: int, y: Chain) -> Chain:
    """The path ``x`` followed by ``y`` through a junction angle with ``label``."""
    flat = label == 0
    one_run = x.one_run and flat and y.one_run
    if not x.one_run:
        a0 = x.a0
    elif flat:
        a0 = (not y.one_run) and x.chi and y.a0
    else:
        a0 = x.chi and label == -1
    if not y.one_run:
        a1 = y.a1
    elif flat:
        a1 = (not x.one_run) and y.chi and x.a1
    else:
        a1 = y.chi and label == -1
    first_spills = x.one_run and flat
    last_spills = y.one_run and flat
    r0 = y.r0 if first_spills else _cap(x.r0 + y.n)
    r1 = x.r1 if last_spills else _cap(x.n + y.r1)
    if one_run:
        mid = 0
    elif first_spills:
        mid = y.mid
    elif last_spills:
        mid = x.mid
    else:
        mid = _cap(x.r0 + y.r1)
    return Chain(
        x.d0, x.p0, y.d1, y.p1, x.tau + label + y.tau,
        x.chi and y.chi and flat, a0, a1, one_run,
        _cap(x.n + y.n), r0, r1, mid,
    )


class State(NamedTuple):
    """Boundary of a pole-external embedding: both outer paths and the outer labels at the poles."""

    left: Chain
    right: Chain
    lam_u: int
    lam_v: int

    # block types of the four outer darts, each seen from its pole
    @property
    def left_u(self) -> int:
        return block_type(OUT if self.left.d0 else IN, self.left.p0)

    @property
    def left_v(self) -> int:
        return block_type(IN if self.left.d1 else OUT, self.left.p1)

    @property
    def right_v(self) -> int:
        return block_type(OUT if self.right.d0 else IN, self.right.p0)

    @property
    def right_u(self) -> int:
        return block_type(IN if self.right.d1 else OUT, self.right.p1)

    @property
    def inner_u(self) -> int:
        """Block steps spent strictly inside the embedding at ``u``."""
        return 4 - step(self.right_u, self.left_u, self.lam_u)

    @property
    def inner_v(self) -> int:
        return 4 - step(self.left_v, self.right_v, self.lam_v)

    def descriptor(self) -> "Descriptor":
        return describe(self)

    def coarse(self) -> "State":
        return State(self.left.without_counts(), self.right.without_counts(), self.lam_u, self.lam_v)


class Descriptor(NamedTuple):
    """Shape fields followed by page-and-path fields."""

    tau_l: int
    tau_r: int
    lam_u: int
    lam_v: int
    rho_lu: str
    rho_ru: str
    rho_lv: str
    rho_rv: str
    p_lu: str
    p_ru: str
    p_lv: str
    p_rv: str
    chi_l: int
    chi_r: int
    a_lu: int
    a_ru: int
    a_lv: int
    a_rv: int

    @property
    def shape(self) -> tuple:
        return tuple(self[:8])

    @property
    def pbe(self) -> tuple:
        return tuple(self[8:])


def describe(s: State) -> Descriptor:
    lc, rc = s.left, s.right
    return Descriptor(
        lc.tau, rc.tau, s.lam_u, s.lam_v,
        OUT if lc.d0 else IN, IN if rc.d1 else OUT, IN if lc.d1 else OUT, OUT if rc.d0 else IN,
        lc.p0, rc.p1, lc.p1, rc.p0,
        int(lc.chi), int(rc.chi), int(lc.a0), int(rc.a1), int(lc.a1), int(rc.a0),
    )


def state_of(d: Descriptor) -> State:
    """A state with the descriptor's fields; the edge counts are left unknown (treated as long)."""
    left = Chain(d.rho_lu == OUT, d.p_lu, d.rho_lv == IN, d.p_lv, d.tau_l, bool(d.chi_l), bool(d.a_lu), bool(d.a_lv))
    right = Chain(d.rho_rv == OUT, d.p_rv, d.rho_ru == IN, d.p_ru, d.tau_r, bool(d.chi_r), bool(d.a_rv), bool(d.a_ru))
    return State(left.without_counts(), right.without_counts(), d.lam_u, d.lam_v)


# ------------------------------------------------------------ faces


def face_blocked(parts: Sequence[tuple[Chain, int]]) -> bool:
    """Whether a face built from paths and junction labels contains a pinned one-page path.

    ``parts`` lists, cyclically in walk order, each path followed by the label
    of the angle where it meets the next one.  A face whose junctions are all
    flat would be a directed cycle and is reported as blocked too.
    """
    # tokens: ("e", bad, chain index, part) and ("v", label)
    tokens: list[tuple] = []
    for i, (c, lab) in enumerate(parts):
        if c.one_run:
            tokens.append(("e", c.chi, i, "all"))
        else:
            tokens.append(("e", c.a0, i, "first"))
            tokens.append(("v", -1 if c.a0 else 1))
            if c.mid:
                tokens.append(("e", False, i, "mid"))
            tokens.append(("v", -1 if c.a1 else 1))
            tokens.append(("e", c.a1, i, "last"))
        tokens.append(("v", lab))
    cuts = [k for k, t in enumerate(tokens) if t[0] == "v" and t[1] != 0]
    if not cuts:
        return True
    size = len(tokens)
    for ci, start in enumerate(cuts):
        end = cuts[(ci + 1) % len(cuts)]
        k = (start + 1) % size
        pieces = []
        bad = True
        while k != end:
            t = tokens[k]
            if t[0] == "e":
                pieces.append(t)
                bad = bad and t[1]
            k = (k + 1) % size
        if not pieces or not bad:
            continue
        if tokens[start][1] != -1 or tokens[end][1] != -1:
            continue
        covered: dict[int, set[str]] = {}
        for _, _, i, part in pieces:
            covered.setdefault(i, set()).add(part)
        rest = 0
        for i, (c, _) in enumerate(parts):
            got = covered.get(i, set())
            if "all" in got:
                continue
            if got == {"first"}:
                rest += c.r0
            elif got == {"last"}:
                rest += c.r1
            elif got == {"first", "last"}:
                rest += c.mid
            else:
                rest += c.n
        if rest != 1:
            return True
    return False


# ------------------------------------------------------------ extraction


def chain_from_walk(graph: PartitionedDigraph, darts: Sequence[int], labels: Sequence[int]) -> Chain:
    """Summary of a walk segment; ``labels[i]`` is the angle between ``darts[i]`` and ``darts[i+1]``."""
    fwd = [(d & 1) == 0 for d in darts]
    bad = [is_bad(f, graph.edges[d >> 1].page) for f, d in zip(fwd, darts)]
    runs = []
    i = 0
    while i < len(darts):
        j = i + 1
        while j < len(darts) and fwd[j] == fwd[i]:
            j += 1
        runs.append((i, j))
        i = j
    k = len(darts)
    one_run = len(runs) == 1
    first, last = runs[0], runs[-1]
    chi = one_run and all(bad)
    a0 = not one_run and all(bad[first[0]:first[1]]) and labels[first[1] - 1] == -1
    a1 = not one_run and all(bad[last[0]:last[1]]) and labels[last[0] - 1] == -1
    n0 = first[1] - first[0]
    n1 = last[1] - last[0]
    return Chain(
        fwd[0], graph.edges[darts[0] >> 1].page, fwd[-1], graph.edges[darts[-1] >> 1].page,
        sum(labels), chi, a0, a1, one_run,
        _cap(k), _cap(k - n0), _cap(k - n1), 0 if one_run else _cap(k - n0 - n1),
    )


def boundary_state(graph: PartitionedDigraph, emb: CombinatorialEmbedding, lam, u: int, v: int) -> State:
    """State of a connected embedding whose outer face passes once through each pole."""
    walk = emb.faces[emb.outer_face].darts
    k = len(walk)
    starts = [i for i, d in enumerate(walk) if graph.dart_vertex(d) == u]
    ends = [i for i, d in enumerate(walk) if graph.dart_vertex(d) == v]
    if len(starts) != 1 or len(ends) != 1:
        raise ValueError("poles must appear exactly once on the outer face")
    s, e = starts[0], ends[0]
    left = [walk[(s + i) % k] for i in range((e - s) % k)]
    right = [walk[(e + i) % k] for i in range((s - e) % k)]

    def inner_labels(seg):
        return [lam[seg[i] ^ 1] for i in range(len(seg) - 1)]

    return State(
        chain_from_walk(graph, left, inner_labels(left)),
        chain_from_walk(graph, right, inner_labels(right)),
        lam[right[-1] ^ 1],
        lam[left[-1] ^ 1],
    )
