"""Descriptor-level composition: the O(1)-size boundary summaries and their rules.

These functions work on ``Descriptor`` tuples alone.  Series gluing is exact
at this level.  Parallel composition is not (two children with equal
descriptors can behave differently next to a single edge), so ``p_feasible``
is an approximation kept for comparison with the exact search in ``dp``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

from ..graph import L, R, CombinatorialEmbedding, PartitionedDigraph, build_graph
from ..upward import LI, LO, RI, RO
from .boundary import IN, OUT, Descriptor, angle_ok, block_type, boundary_state, is_bad, step
from .dp import q_state

PAGES = (L, R)
_TYPE_FIELDS = {LO: (OUT, L), RO: (OUT, R), RI: (IN, R), LI: (IN, L)}


def _other(x: str) -> str:
    return {IN: OUT, OUT: IN, L: R, R: L}[x]


def q_feasible(graph: PartitionedDigraph, e: int, u: int, v: int) -> set[Descriptor]:
    """The single descriptor of an edge seen between poles ``u`` and ``v``."""
    return {q_state(graph, e, u, v).descriptor()}


# ------------------------------------------------------------ block slices


def type_slice(first: int, last: int, lam: int, direction: int = 1) -> tuple[int, ...] | None:
    """Block types met from ``first`` to ``last`` walking the cyclic order LO, RO, RI, LI.

    ``direction`` is 1 for clockwise and -1 for counterclockwise.  Equal ends
    give one element when the closing angle is large and the full turn when
    it is small.
    """
    if first == last:
        if lam == 1:
            return (first,)
        if lam == -1:
            return tuple((first + direction * i) % 4 for i in range(5))
        return None
    out = [first]
    while out[-1] != last:
        out.append((out[-1] + direction) % 4)
    return tuple(out)


def _slices_compatible(p1: Sequence[int], p2: Sequence[int]) -> bool:
    if len(p1) == 1:
        return p1[0] not in p2[1:-1]
    if len(p2) == 1:
        return p2[0] not in p1[1:-1]
    ok1 = p1[0] not in p2 or p1[0] == p2[-1]
    ok2 = p2[0] not in p1 or p2[0] == p1[-1]
    return ok1 and ok2


# ------------------------------------------------------------ series


def _types(d: Descriptor) -> tuple[int, int, int, int]:
    """Block types of the outer darts: left at u, right at u, left at v, right at v."""
    return (
        block_type(d.rho_lu, d.p_lu), block_type(d.rho_ru, d.p_ru),
        block_type(d.rho_lv, d.p_lv), block_type(d.rho_rv, d.p_rv),
    )


def _side_blocked(a1, a2, x1, x2, p1, p2, b, l1, l2, av, pv, au, pu) -> bool:
    """Outer-face obstructions along one side of a series gluing.

    ``a1``/``a2`` are the alpha bits at the shared pole of the first and
    second child, ``x1``/``x2`` their chi bits, ``p1``/``p2`` their pages at
    the shared pole and ``b`` the new angle.  ``l1`` is the far label of the
    first child, ``l2`` of the second; ``av``/``pv`` and ``au``/``pu`` are the
    alpha bit and page of the opposite path at the second child's far pole
    and the first child's far pole.
    """
    same = p1 == p2
    return any((
        a1 and a2 and b == 0 and same,
        a1 and b == -1,
        a2 and b == -1,
        a1 and b == 0 and x2 and l2 == -1 and same,
        a2 and b == 0 and x1 and l1 == -1 and same,
        x1 and l1 == -1 and b == 0 and x2 and l2 == -1 and same,
        x1 and l1 == -1 and b == -1,
        x2 and l2 == -1 and b == -1,
        a1 and b == 0 and x2 and l2 == 0 and av and p1 == p2 == pv,
        x1 and l1 == -1 and b == 0 and x2 and l2 == 0 and av and p1 == p2 == pv,
        b == -1 and x2 and l2 == 0 and av and p2 == pv,
        a2 and b == 0 and x1 and l1 == 0 and au and p2 == p1 == pu,
        x2 and l2 == -1 and b == 0 and x1 and l1 == 0 and au and p2 == p1 == pu,
        b == -1 and x1 and l1 == 0 and au and p1 == pu,
        x1 and l1 == 0 and au and b == 0 and x2 and l2 == 0 and av and p1 == pu == p2 == pv,
    ))


def s_combine(d1: Descriptor, d2: Descriptor, beta: int, gamma: int) -> Descriptor | None:
    """Glue ``d1`` (poles u, w) and ``d2`` (poles w, v) at w.

    ``beta`` labels the new outer angle at w left of the left path, ``gamma``
    the one right of the right path.  Returns the combined descriptor, or
    None when the result is not a good pole-external embedding.
    """
    # C1 at w
    if (beta == 0) != (d1.rho_lv != d2.rho_lu):
        return None
    if (gamma == 0) != (d1.rho_rv != d2.rho_ru):
        return None
    # C2 at w, which also settles C3 on the outer face
    if beta + gamma != d1.lam_v + d2.lam_u - 2:
        return None
    _, _, lv1, rv1 = _types(d1)
    lu2, ru2, _, _ = _types(d2)
    pi1 = type_slice(rv1, lv1, d1.lam_v)
    pi2 = type_slice(lu2, ru2, d2.lam_u)
    if pi1 is None or pi2 is None or not _slices_compatible(pi1, pi2):
        return None
    # the slices do not pin the new labels to the block steps; check them directly
    if not angle_ok(lv1, lu2, beta) or not angle_ok(ru2, rv1, gamma):
        return None
    if len(pi1) - 1 + len(pi2) - 1 + step(lv1, lu2, beta) + step(ru2, rv1, gamma) != 4:
        return None
    if _side_blocked(
        d1.a_lv, d2.a_lu, d1.chi_l, d2.chi_l, d1.p_lv, d2.p_lu, beta, d1.lam_u, d2.lam_v,
        d2.a_rv, d2.p_rv, d1.a_ru, d1.p_ru,
    ):
        return None
    if _side_blocked(
        d1.a_rv, d2.a_ru, d1.chi_r, d2.chi_r, d1.p_rv, d2.p_ru, gamma, d1.lam_u, d2.lam_v,
        d2.a_lv, d2.p_lv, d1.a_lu, d1.p_lu,
    ):
        return None
    same_l = d1.p_lv == d2.p_lu
    same_r = d1.p_rv == d2.p_ru
    chi_l = int(bool(d1.chi_l and d2.chi_l and beta == 0 and same_l))
    chi_r = int(bool(d1.chi_r and d2.chi_r and gamma == 0 and same_r))
    a_lu = d1.a_lu or (d1.chi_l and beta == -1) or (d1.chi_l and beta == 0 and d2.a_lu and same_l)
    a_lv = d2.a_lv or (d2.chi_l and beta == -1) or (d2.chi_l and beta == 0 and d1.a_lv and same_l)
    a_ru = d1.a_ru or (d1.chi_r and gamma == -1) or (d1.chi_r and gamma == 0 and d2.a_ru and same_r)
    a_rv = d2.a_rv or (d2.chi_r and gamma == -1) or (d2.chi_r and gamma == 0 and d1.a_rv and same_r)
    return Descriptor(
        d1.tau_l + beta + d2.tau_l, d1.tau_r + gamma + d2.tau_r, d1.lam_u, d2.lam_v,
        d1.rho_lu, d1.rho_ru, d2.rho_lv, d2.rho_rv,
        d1.p_lu, d1.p_ru, d2.p_lv, d2.p_rv,
        chi_l, chi_r, int(bool(a_lu)), int(bool(a_ru)), int(bool(a_lv)), int(bool(a_rv)),
    )


def s_feasible(f1: Iterable[Descriptor], f2: Iterable[Descriptor]) -> set[Descriptor]:
    f2 = list(f2)
    out = set()
    for d1 in f1:
        for d2 in f2:
            for beta, gamma in product((-1, 0, 1), repeat=2):
                d = s_combine(d1, d2, beta, gamma)
                if d is not None:
                    out.add(d)
    return out


# ------------------------------------------------------------ universal sets


def shape_fields(tau_l: int, lam_u: int, lam_v: int, rho_lu: str) -> tuple:
    """The eight shape fields determined by the four free ones."""
    tau_r = 2 - tau_l - lam_u - lam_v
    rho_ru = rho_lu if lam_u else _other(rho_lu)
    rho_lv = rho_lu if tau_l % 2 else _other(rho_lu)
    rho_rv = rho_lv if lam_v else _other(rho_lv)
    return tau_l, tau_r, lam_u, lam_v, rho_lu, rho_ru, rho_lv, rho_rv


def discarded(d: Descriptor, *, complete: bool = True) -> bool:
    """Checks that rule out a page-and-path tuple for its shape.

    Eleven families look at one outer path or one pole at a time.  Two more,
    skipped when ``complete`` is false, close the gaps they leave: each alpha
    bit needs a bad end dart, and each outer pole angle must agree with the
    block step between its darts.
    """
    (tl, tr, lu, lv, rlu, rru, rlv, rrv, plu, pru, plv, prv, cl, cr, alu, aru, alv, arv) = d
    checks = (
        (cl and tl != 0) or (cr and tr != 0),
        (cl and plu != plv) or (cr and pru != prv),
        (cl and rlu == rlv) or (cr and rru == rrv),
        (cl and rlu == OUT and plu == R) or (cl and rlu == IN and plu == L)
        or (cr and rru == OUT and pru == L) or (cr and rru == IN and pru == R),
        (cl and (alu or alv)) or (cr and (aru or arv)),
        (plu == R and pru == L and rlu == OUT and lu == 1) or (plu == L and pru == R and rlu == IN and lu == 1)
        or (prv == R and plv == L and rlv == OUT and lv == 1) or (plv == R and prv == L and rlv == IN and lv == 1),
        (cl or cr) and lu == -1 and lv == -1,
        (alu and lu == -1) or (alv and lv == -1) or (aru and lu == -1) or (arv and lv == -1),
        (alu and lu == 0 and aru and plu == pru) or (alv and lv == 0 and arv and plv == prv),
        (cl and lu == 0 and lv == -1 and aru and plu == pru) or (cl and lv == 0 and lu == -1 and arv and plv == prv)
        or (cr and lu == 0 and lv == -1 and alu and plu == pru) or (cr and lv == 0 and lu == -1 and alv and plv == prv),
        (cl and lu == 0 and lv == 0 and aru and arv and plu == pru == prv)
        or (cr and lu == 0 and lv == 0 and alu and alv and pru == plu == plv),
    )
    if any(checks):
        return True
    if not complete:
        return False
    extra = (
        # an alpha bit names a bad first run, so the end dart itself is bad
        (alu and not is_bad(rlu == OUT, plu)) or (alv and not is_bad(rlv == IN, plv))
        or (arv and not is_bad(rrv == OUT, prv)) or (aru and not is_bad(rru == IN, pru)),
        not angle_ok(block_type(rru, pru), block_type(rlu, plu), lu)
        or not angle_ok(block_type(rlv, plv), block_type(rrv, prv), lv),
    )
    return any(extra)


def in_universal(d: Descriptor, n: int | None = None) -> bool:
    if n is not None and not -n + 2 <= d.tau_l <= n - 2:
        return False
    if tuple(d[:8]) != shape_fields(d.tau_l, d.lam_u, d.lam_v, d.rho_lu):
        return False
    return not discarded(d)


@lru_cache(maxsize=None)
def _universal(n: int) -> frozenset[Descriptor]:
    out = set()
    for tau_l in range(-n + 2, n - 1):
        for lam_u, lam_v, rho_lu in product((-1, 0, 1), (-1, 0, 1), (IN, OUT)):
            shape = shape_fields(tau_l, lam_u, lam_v, rho_lu)
            for pages in product(PAGES, repeat=4):
                for bits in product((0, 1), repeat=6):
                    d = Descriptor(*shape, *pages, *bits)
                    if not discarded(d):
                        out.add(d)
    return frozenset(out)


def universal_set(n: int) -> frozenset[Descriptor]:
    """Every descriptor a pole-external good embedding with at most ``n`` vertices can have."""
    if n < 2:
        raise ValueError("need n >= 2")
    return _universal(n)


# ------------------------------------------------------------ witnesses


def _path_steps(start: tuple[bool, str], end: tuple[bool, str], tau: int, chi: int, a0: int, a1: int):
    """Edges (forward, page) and outer labels at the inner vertices of one outer path.

    ``start`` and ``end`` give direction and page of the two end darts in
    walk order.  Apart from a directed one-page path of length two, the path
    is a chain of two-page gadgets joined at vertices that are switches only
    where a turn is needed.
    """
    if chi:
        return [start, end], [0]
    s = -a0 - a1
    x = abs(tau - s)
    sign = 1 if tau > s else -1
    start_page, end_page = start[1], end[1]
    # (page, switch at the vertex after this edge, outer label there)
    plan = [(start_page, bool(a0), -1 if a0 else 0)]
    plan += [(start_page, False, 0), (_other(start_page), False, 0)]
    page = L
    for i in range(x + 1):
        turn = i < x
        plan += [(page, False, 0), (_other(page), turn, sign if turn else 0)]
        page = _other(page)
    plan += [(_other(end_page), False, 0), (end_page, bool(a1), -1 if a1 else 0), (end_page, False, None)]
    fwd = start[0]
    edges, labels = [], []
    for page, switch, label in plan:
        edges.append((fwd, page))
        if label is not None:
            labels.append(label)
        if switch:
            fwd = not fwd
    if edges[-1][0] != end[0]:
        raise ValueError("direction parity does not match the turn number")
    return edges, labels


def realize_descriptor(d: Descriptor) -> tuple[PartitionedDigraph, CombinatorialEmbedding, dict[int, int]]:
    """A cycle through poles 0 and 1 whose good embedding has descriptor ``d``."""
    if discarded(d) or tuple(d[:8]) != shape_fields(d.tau_l, d.lam_u, d.lam_v, d.rho_lu):
        raise ValueError("descriptor is not in any universal set")
    left, left_labels = _path_steps(
        (d.rho_lu == OUT, d.p_lu), (d.rho_lv == IN, d.p_lv), d.tau_l, d.chi_l, d.a_lu, d.a_lv)
    right, right_labels = _path_steps(
        (d.rho_rv == OUT, d.p_rv), (d.rho_ru == IN, d.p_ru), d.tau_r, d.chi_r, d.a_rv, d.a_ru)
    u, v = 0, 1
    n = 2
    edges = []
    walk = []
    lam = {}

    def lay(start: int, finish: int, steps, labels):
        nonlocal n
        x = start
        darts = []
        for i, (fwd, page) in enumerate(steps):
            if i == len(steps) - 1:
                y = finish
            else:
                y = n
                n += 1
            e = len(edges)
            edges.append((x, y, page) if fwd else (y, x, page))
            darts.append(2 * e if fwd else 2 * e + 1)
            x = y
        for i, label in enumerate(labels):
            lam[darts[i] ^ 1] = label
            lam[darts[i + 1]] = -label
        walk.extend(darts)
        return darts

    ld = lay(u, v, left, left_labels)
    rd = lay(v, u, right, right_labels)
    graph = build_graph(edges, n)
    lam[rd[-1] ^ 1] = d.lam_u
    lam[ld[0]] = -d.lam_u
    lam[ld[-1] ^ 1] = d.lam_v
    lam[rd[0]] = -d.lam_v
    rotation = [[] for _ in range(n)]
    for dart in walk:
        rotation[graph.dart_vertex(dart)].append(dart)
        rotation[graph.dart_vertex(dart ^ 1)].append(dart ^ 1)
    emb = CombinatorialEmbedding(graph, rotation, {0: ld[0]})
    return graph, emb, lam


def extract_descriptor(graph: PartitionedDigraph, emb: CombinatorialEmbedding, lam, u: int, v: int) -> Descriptor:
    return boundary_state(graph, emb, lam, u, v).descriptor()


# ------------------------------------------------------------ generating sets


def is_replicable(d: Descriptor) -> bool:
    return (
        d.lam_u == 1 and d.lam_v == 1
        and d.rho_lu == d.rho_ru and d.p_lu == d.p_ru
        and d.rho_lv == d.rho_rv and d.p_lv == d.p_rv
        and not any(d[12:])
    )


def pole_sequences(d: Descriptor) -> tuple[tuple[int, ...] | None, tuple[int, ...] | None]:
    """Block types met at u (clockwise) and at v (counterclockwise), from the left path to the right path."""
    lu, ru, lv, rv = _types(d)
    return type_slice(lu, ru, d.lam_u, 1), type_slice(lv, rv, d.lam_v, -1)


def _span_label(pi: Sequence[int], i: int, j: int, inner: bool) -> int:
    """Label of an angle whose darts sit at positions ``i`` <= ``j`` of ``pi``.

    ``inner`` selects a child's own outer label (large when its span is
    short); otherwise the label of a gap angle between two children.
    """
    rho_i = _TYPE_FIELDS[pi[i]][0]
    rho_j = _TYPE_FIELDS[pi[j]][0]
    length = j - i + 1
    if rho_i != rho_j:
        return 0
    if length <= 2:
        return 1 if inner else -1
    if length >= 4:
        return -1 if inner else 1
    return 0


SEQUENCE_CAP = 40


@lru_cache(maxsize=4096)
def generating_set(d: Descriptor, pool: frozenset[Descriptor] | None = None) -> frozenset[tuple[Descriptor, ...]]:
    """Contracted child sequences a parallel node with boundary ``d`` can show.

    Without ``pool`` the set is enumerated in full, which is only practical
    for descriptors with short pole sequences.  With ``pool``, only sequences
    made of its members are produced; since dropping inner elements of a
    sequence keeps it in the set, this is all a realizability test needs.
    """
    pi_u, pi_v = pole_sequences(d)
    if pi_u is None or pi_v is None:
        return frozenset()
    nu, nv = len(pi_u), len(pi_v)
    final: set[tuple[Descriptor, ...]] = set()

    def fields(pi, i):
        return _TYPE_FIELDS[pi[i]]

    def usable(x: Descriptor) -> bool:
        return in_universal(x) if pool is None else x in pool

    by_head: dict[tuple, list[Descriptor]] = {}
    for x in pool or ():
        by_head.setdefault(tuple(x[:12]), []).append(x)

    def completions(head: tuple):
        if pool is not None:
            return by_head.get(head, ())
        return (Descriptor(*head, *bits) for bits in product((0, 1), repeat=6))

    def first_pairs():
        for iu in range(nu):
            for iv in range(nv):
                rho_ru, p_ru = fields(pi_u, iu)
                rho_rv, p_rv = fields(pi_v, iv)
                lam_u = _span_label(pi_u, 0, iu, True)
                lam_v = _span_label(pi_v, 0, iv, True)
                tau_r = 2 - d.tau_l - lam_u - lam_v
                chi_opts = (0, 1)
                if (
                    tau_r != 0 or rho_ru == rho_rv or p_ru != p_rv
                    or (rho_ru == OUT and p_ru == L) or (rho_ru == IN and p_ru == R)
                    or (rho_rv == IN and p_rv == L) or (rho_rv == OUT and p_rv == R)
                    or (lam_u == d.lam_u and lam_v == d.lam_v and d.chi_r == 0)
                ):
                    chi_opts = (0,)
                for chi_r in chi_opts:
                    au_opts = (0,) if (
                        chi_r or (rho_ru == OUT and p_ru == L) or (rho_ru == IN and p_ru == R)
                        or (lam_u == d.lam_u and d.a_ru == 0)
                    ) else (0, 1)
                    av_opts = (0,) if (
                        chi_r or (rho_rv == IN and p_rv == L) or (rho_rv == OUT and p_rv == R)
                        or (lam_v == d.lam_v and d.a_rv == 0)
                    ) else (0, 1)
                    for a_ru, a_rv in product(au_opts, av_opts):
                        first = Descriptor(
                            d.tau_l, tau_r, lam_u, lam_v, d.rho_lu, rho_ru, d.rho_lv, rho_rv,
                            d.p_lu, p_ru, d.p_lv, p_rv, d.chi_l, chi_r, d.a_lu, a_ru, d.a_lv, a_rv,
                        )
                        if usable(first):
                            yield first, iu, iv

    def extensions(prev: Descriptor, iu: int, iv: int):
        for a1 in range(iu, nu):
            for a2 in range(a1, nu):
                for b1 in range(iv, nv):
                    for b2 in range(b1, nv):
                        rho_lu, p_lu = fields(pi_u, a1)
                        rho_ru, p_ru = fields(pi_u, a2)
                        rho_lv, p_lv = fields(pi_v, b1)
                        rho_rv, p_rv = fields(pi_v, b2)
                        lam_u = _span_label(pi_u, a1, a2, True)
                        lam_v = _span_label(pi_v, b1, b2, True)
                        beta_u = _span_label(pi_u, iu, a1, False)
                        beta_v = _span_label(pi_v, iv, b1, False)
                        tau_l = -2 - prev.tau_r - beta_u - beta_v
                        tau_r = 2 - tau_l - lam_u - lam_v
                        head = (tau_l, tau_r, lam_u, lam_v, rho_lu, rho_ru, rho_lv, rho_rv, p_lu, p_ru, p_lv, p_rv)
                        for nxt in completions(head):
                            if not usable(nxt):
                                continue
                            if _extension_discarded(prev, nxt, beta_u, beta_v, d, pi_u, pi_v, a2, b2):
                                continue
                            if is_replicable(nxt) and nxt == prev and a1 == iu and b1 == iv:
                                continue
                            yield nxt, a2, b2

    def grow(seq: tuple[Descriptor, ...], iu: int, iv: int):
        if len(seq) > SEQUENCE_CAP:
            raise AssertionError("generating-set sequence exceeded the length cap")
        last = seq[-1]
        if iu == nu - 1 and iv == nv - 1 and last.chi_r == d.chi_r and last.a_ru == d.a_ru and last.a_rv == d.a_rv:
            final.add(seq)
            if d.a_ru == d.a_rv == d.chi_r == 0 and not is_replicable(last):
                rep = Descriptor(
                    -last.tau_r, last.tau_r, 1, 1, last.rho_ru, last.rho_ru, last.rho_rv, last.rho_rv,
                    last.p_ru, last.p_ru, last.p_rv, last.p_rv, 0, 0, 0, 0, 0, 0,
                )
                if pool is None or rep in pool:
                    final.add(seq + (rep,))
            return
        for nxt, a2, b2 in extensions(last, iu, iv):
            grow(seq + (nxt,), a2, b2)

    for first, iu, iv in first_pairs():
        grow((first,), iu, iv)
    return frozenset(final)


def _extension_discarded(prev, nxt, beta_u, beta_v, d, pi_u, pi_v, a2, b2) -> bool:
    pu_same = prev.p_ru == nxt.p_lu
    pv_same = prev.p_rv == nxt.p_lv
    impossible = (
        (nxt.chi_l and (nxt.a_lu or nxt.a_lv)) or (nxt.chi_r and (nxt.a_ru or nxt.a_rv)),
        (beta_u == -1 and (prev.a_ru or nxt.a_lu)) or (beta_v == -1 and (prev.a_rv or nxt.a_lv))
        or (beta_u == -1 and beta_v == -1 and prev.chi_r) or (beta_u == -1 and beta_v == -1 and nxt.chi_l),
        (beta_u == 0 and prev.a_ru and nxt.a_lu and pu_same) or (beta_v == 0 and prev.a_rv and nxt.a_lv and pv_same),
        (nxt.a_lu and beta_u == 0 and prev.chi_r and beta_v == -1 and pu_same)
        or (nxt.a_lv and beta_v == 0 and prev.chi_r and beta_u == -1 and pv_same)
        or (prev.a_ru and beta_u == 0 and nxt.chi_l and beta_v == -1 and pu_same)
        or (prev.a_rv and beta_v == 0 and nxt.chi_l and beta_u == -1 and pv_same),
        (nxt.a_lu and beta_u == 0 and prev.chi_r and beta_v == 0 and nxt.a_lv and prev.p_ru == nxt.p_lu == nxt.p_lv)
        or (prev.a_ru and beta_u == 0 and nxt.chi_l and beta_v == 0 and prev.a_rv and prev.p_ru == nxt.p_lu == prev.p_rv),
    )
    if any(impossible):
        return True
    short_u = len(pi_u) - a2 <= 2
    short_v = len(pi_v) - b2 <= 2
    unreachable = (
        nxt.a_ru and not d.a_ru and nxt.rho_ru == d.rho_ru and short_u,
        nxt.a_rv and not d.a_rv and nxt.rho_rv == d.rho_rv and short_v,
        nxt.chi_r and not d.chi_r and nxt.rho_ru == d.rho_ru and nxt.rho_rv == d.rho_rv and short_u and short_v,
    )
    return any(unreachable)


# ------------------------------------------------------------ realizability


def is_realizable(seq: Sequence[Descriptor], children: Sequence[Iterable[Descriptor]], *, strict: bool = False) -> bool:
    """Whether the children can be ordered along a first-and-last-preserving part of ``seq``.

    Every child must accept some element of ``seq``; the first and the last
    element must each be accepted by some child, and by different children
    when there is more than one element.  With ``strict``, an element that is
    not replicable takes at most one child: two copies side by side would
    share a face that the element's own bits forbid.
    """
    children = [set(f) for f in children]
    ell = len(seq)
    adj = [[j for j in range(ell) if seq[j] in f] for f in children]
    if any(not a for a in adj):
        return False
    first = [i for i, a in enumerate(adj) if 0 in a]
    last = [i for i, a in enumerate(adj) if ell - 1 in a]
    if not first or not last:
        return False
    if not strict:
        return not (ell > 1 and len(first) == 1 and first == last)
    single = [not is_replicable(x) for x in seq]
    for i in first:
        for j in last:
            if i == j and ell > 1:
                continue
            if _fill_singles(adj, single, {i: 0, j: ell - 1}):
                return True
    return False


def _fill_singles(adj, single, fixed: dict[int, int]) -> bool:
    """Match the children that only accept single-use elements into distinct unused ones."""
    taken = {e: c for c, e in fixed.items() if single[e]}
    if sum(1 for e in fixed.values() if single[e]) > len(taken):
        return False
    owner = dict(taken)
    pinned = set(taken)

    def place(c, seen):
        for e in adj[c]:
            if e in seen or e in pinned:
                continue
            seen.add(e)
            if e not in owner or place(owner[e], seen):
                owner[e] = c
                return True
        return False

    for c in range(len(adj)):
        if c in fixed or any(not single[e] for e in adj[c]):
            continue
        if not place(c, set()):
            return False
    return True


def p_feasible(children: Sequence[Iterable[Descriptor]], n: int, *, strict: bool = False) -> set[Descriptor]:
    """Descriptors of a parallel node assembled from generating sets and realizability."""
    if len(children) < 2:
        raise ValueError("a parallel node has at least two children")
    children = [frozenset(f) for f in children]
    pool = frozenset().union(*children)
    # the first child shows the left path of d and the last one its right path
    lefts = {_left_fields(x) for x in pool}
    rights = {_right_fields(x) for x in pool}
    out = set()
    for d in universal_set(n):
        if _left_fields(d) not in lefts or _right_fields(d) not in rights:
            continue
        if any(is_realizable(seq, children, strict=strict) for seq in generating_set(d, pool)):
            out.add(d)
    return out


def _left_fields(d: Descriptor) -> tuple:
    return d.tau_l, d.rho_lu, d.rho_lv, d.p_lu, d.p_lv, d.chi_l, d.a_lu, d.a_lv


def _right_fields(d: Descriptor) -> tuple:
    return d.tau_r, d.rho_ru, d.rho_rv, d.p_ru, d.p_rv, d.chi_r, d.a_ru, d.a_rv


def realizable_by_search(seq: Sequence[Descriptor], children: Sequence[Iterable[Descriptor]], *, strict: bool = False) -> bool:
    """Reference for ``is_realizable``: try every ordering and every choice of descriptors."""
    children = [set(f) for f in children]
    ell = len(seq)
    for order in permutations(range(len(children))):
        options = [[j for j in range(ell) if seq[j] in children[c]] for c in order]
        for pick in product(*options):
            if list(pick) != sorted(pick) or pick[0] != 0 or pick[-1] != ell - 1:
                continue
            if strict and any(pick.count(j) > 1 and not is_replicable(seq[j]) for j in set(pick)):
                continue
            return True
    return False


def iter_sequences(d: Descriptor) -> Iterator[tuple[Descriptor, ...]]:
    yield from sorted(generating_set(d))
