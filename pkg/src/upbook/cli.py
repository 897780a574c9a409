"""Command-line front end: instance files, deciders, witnesses and SVG drawings.

Instance files hold one directive per line; ``#`` starts a comment::

    n 4
    e 0 1 L
    e 1 2 R
    rot 1 : 0h 1t
    outer 0t
    inside 3 2t
    angle 1 0h 1t -1

Darts are written ``<edge>t`` (seen from the tail) or ``<edge>h`` (from the
head).  ``rot``, ``outer`` and ``inside`` together give an embedding; one
``outer`` line is needed per connected component that has edges.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .construct import InvalidUbe, validate_ube
from .graph import CombinatorialEmbedding, Edge, GraphError, PartitionedDigraph
from .spq import NotBiconnected, NotPartial2Tree

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2

L_STYLE = 'stroke="#1f4fd8"'
R_STYLE = 'stroke="#d81f1f" stroke-dasharray="6 4"'


class ParseError(ValueError):
    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.message = message


@dataclass
class Instance:
    graph: PartitionedDigraph
    embedding: CombinatorialEmbedding | None = None
    lam: dict[int, int] | None = None


# ------------------------------------------------------------ parsing


def _tokens(line: str) -> list[tuple[str, int]]:
    out = []
    i = 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((line[i:j], i + 1))
        i = j
    return out


def format_dart(d: int) -> str:
    return f"{d >> 1}{'h' if d & 1 else 't'}"


def parse_dart(tok: str, m: int, line: int, col: int) -> int:
    if len(tok) < 2 or tok[-1] not in "th" or not tok[:-1].isdigit():
        raise ParseError(line, col, f"bad dart {tok!r}, expected <edge>t or <edge>h")
    e = int(tok[:-1])
    if e >= m:
        raise ParseError(line, col, f"edge {e} not declared")
    return 2 * e + (tok[-1] == "h")


def _int(tok: str, line: int, col: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(line, col, f"expected {what}, got {tok!r}") from None


def parse_instance(text: str) -> Instance:
    """Read an instance file; embedding and labels are present only if the file gives them."""
    n = None
    edges: list[Edge] = []
    seen_pairs: dict[tuple[int, int], int] = {}
    rot: dict[int, list[int]] = {}
    outer: list[tuple[int, int, int]] = []  # (dart, line, col)
    inside: list[tuple[int, int, int, int]] = []
    angles: list[tuple[int, int, int, int, int]] = []
    first_embed_line = None

    for ln, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw.split("#", 1)[0])
        if not toks:
            continue
        word, col = toks[0]
        args = toks[1:]
        if n is None and word != "n":
            raise ParseError(ln, col, "the first directive must be 'n <count>'")

        def need(k):
            if len(args) != k:
                raise ParseError(ln, col, f"'{word}' takes {k} argument(s), got {len(args)}")

        def vertex(tok, c):
            v = _int(tok, ln, c, "a vertex")
            if not 0 <= v < n:
                raise ParseError(ln, c, f"vertex {v} outside [0, {n})")
            return v

        if word == "n":
            if n is not None:
                raise ParseError(ln, col, "vertex count given twice")
            need(1)
            n = _int(args[0][0], ln, args[0][1], "a vertex count")
            if n < 0:
                raise ParseError(ln, args[0][1], "vertex count must be non-negative")
        elif word == "e":
            need(3)
            t = vertex(*args[0])
            h = vertex(*args[1])
            page, pcol = args[2]
            if page not in ("L", "R"):
                raise ParseError(ln, pcol, f"page must be L or R, got {page!r}")
            if t == h:
                raise ParseError(ln, args[1][1], "self-loop")
            key = (min(t, h), max(t, h))
            if key in seen_pairs:
                raise ParseError(ln, col, f"edge duplicates the one on line {seen_pairs[key]}")
            seen_pairs[key] = ln
            edges.append(Edge(t, h, page))
        elif word == "rot":
            if len(args) < 2 or args[1][0] != ":":
                raise ParseError(ln, col, "expected 'rot <v> : <darts>'")
            v = vertex(*args[0])
            if v in rot:
                raise ParseError(ln, col, f"rotation of {v} given twice")
            rot[v] = [parse_dart(tok, len(edges), ln, c) for tok, c in args[2:]]
            first_embed_line = first_embed_line or ln
        elif word == "outer":
            need(1)
            outer.append((parse_dart(args[0][0], len(edges), ln, args[0][1]), ln, args[0][1]))
            first_embed_line = first_embed_line or ln
        elif word == "inside":
            need(2)
            v = vertex(*args[0])
            inside.append((v, parse_dart(args[1][0], len(edges), ln, args[1][1]), ln, col))
            first_embed_line = first_embed_line or ln
        elif word == "angle":
            need(4)
            v = vertex(*args[0])
            d1 = parse_dart(args[1][0], len(edges), ln, args[1][1])
            d2 = parse_dart(args[2][0], len(edges), ln, args[2][1])
            label = _int(args[3][0], ln, args[3][1], "a label")
            if label not in (-1, 0, 1):
                raise ParseError(ln, args[3][1], "label must be -1, 0 or 1")
            angles.append((v, d1, d2, label, ln))
        else:
            raise ParseError(ln, col, f"unknown directive {word!r}")

    if n is None:
        raise ParseError(1, 1, "empty instance")
    graph = PartitionedDigraph(n, tuple(edges))
    inst = Instance(graph)
    if first_embed_line is None:
        if angles:
            raise ParseError(angles[0][4], 1, "angles need an embedding")
        return inst
    inst.embedding = _build_embedding(graph, rot, outer, inside, first_embed_line)
    if angles:
        inst.lam = _build_angles(graph, inst.embedding, angles)
    return inst


def _build_embedding(graph, rot, outer, inside, line) -> CombinatorialEmbedding:
    rotation = []
    for v in range(graph.n):
        r = rot.get(v)
        if r is None:
            if graph.degree(v):
                raise ParseError(line, 1, f"missing rotation for vertex {v}")
            r = []
        for d in r:
            if graph.dart_vertex(d) != v:
                raise ParseError(line, 1, f"dart {format_dart(d)} does not sit at vertex {v}")
        rotation.append(tuple(r))
    comp = graph.component_of
    outer_map = {}
    for d, ln, col in outer:
        c = comp[graph.dart_vertex(d)]
        if c in outer_map:
            raise ParseError(ln, col, "second outer dart for the same component")
        outer_map[c] = d
    containment = {}
    for v, d, ln, col in inside:
        containment[comp[v]] = d
    try:
        return CombinatorialEmbedding(graph, rotation, outer_map, containment)
    except GraphError as exc:
        raise ParseError(line, 1, str(exc)) from None


def _build_angles(graph, emb, angles) -> dict[int, int]:
    lam = {}
    for v, d1, d2, label, ln in angles:
        if graph.dart_vertex(d1) != v or emb.cw_next[d1] != d2:
            raise ParseError(ln, 1, f"{format_dart(d1)} {format_dart(d2)} is not an angle at {v}")
        lam[d1] = label
    return lam


def serialize_instance(graph: PartitionedDigraph, embedding: CombinatorialEmbedding | None = None, lam=None) -> str:
    lines = [f"n {graph.n}"]
    lines += [f"e {t} {h} {p}" for t, h, p in graph.edges]
    if embedding is not None:
        for v in range(graph.n):
            if embedding.rotation[v]:
                lines.append(f"rot {v} : " + " ".join(format_dart(d) for d in embedding.rotation[v]))
        for c in sorted(embedding.outer):
            lines.append(f"outer {format_dart(embedding.outer[c])}")
        for c in sorted(embedding.containment):
            lines.append(f"inside {graph.components[c][0]} {format_dart(embedding.containment[c])}")
        for a in sorted(lam or ()):
            lines.append(f"angle {graph.dart_vertex(a)} {format_dart(a)} {format_dart(embedding.cw_next[a])} {lam[a]}")
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------ witnesses and drawings


def witness_json(graph: PartitionedDigraph, order, embedding=None, lam=None) -> dict:
    out = {"order": list(order)}
    if lam is not None and embedding is not None:
        out["lambda"] = [
            [graph.dart_vertex(a), [format_dart(a), format_dart(embedding.cw_next[a])], lam[a]]
            for a in sorted(lam)
        ]
    return out


def render_svg(graph: PartitionedDigraph, order, *, scale: float = 40.0) -> bytes:
    """Spine drawing: L edges as solid left semicircles, R edges as dashed right ones."""
    check = validate_ube(graph, order)
    if not check:
        raise InvalidUbe(f"not an upward book embedding: {check.condition}")
    pos = {v: i for i, v in enumerate(order)}
    reach = {"L": 0, "R": 0}
    for t, h, p in graph.edges:
        reach[p] = max(reach[p], abs(pos[h] - pos[t]))
    margin = scale
    spine_x = margin + reach["L"] * scale / 2
    width = spine_x + reach["R"] * scale / 2 + margin
    height = 2 * margin + max(graph.n - 1, 0) * scale

    def y(v):
        return height - margin - pos[v] * scale

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.1f}" height="{height:.1f}" viewBox="0 0 {width:.1f} {height:.1f}">',
        f'<line x1="{spine_x:.1f}" y1="{margin / 2:.1f}" x2="{spine_x:.1f}" y2="{height - margin / 2:.1f}" stroke="#999999" stroke-width="1"/>',
    ]
    for t, h, p in sorted(graph.edges, key=lambda e: (pos[e.tail], pos[e.head])):
        lo, hi = (t, h) if pos[t] < pos[h] else (h, t)
        r = (pos[hi] - pos[lo]) * scale / 2
        sweep = 1 if p == "L" else 0  # bottom to top, clockwise bulges left on screen
        style = L_STYLE if p == "L" else R_STYLE
        parts.append(
            f'<path d="M {spine_x:.1f} {y(lo):.1f} A {r:.1f} {r:.1f} 0 0 {sweep} {spine_x:.1f} {y(hi):.1f}" '
            f'fill="none" {style} stroke-width="2"/>'
        )
    for v in order:
        parts.append(f'<circle cx="{spine_x:.1f}" cy="{y(v):.1f}" r="4" fill="#000000"/>')
        parts.append(f'<text x="{spine_x + 6:.1f}" y="{y(v) - 6:.1f}" font-size="12" font-family="sans-serif">{v}</text>')
    parts.append("</svg>")
    return ("\n".join(parts) + "\n").encode()


# ------------------------------------------------------------ commands


def _load(path: str) -> Instance:
    return parse_instance(Path(path).read_text(encoding="utf-8"))


def _answer(ok: bool, witness: dict | None, args) -> int:
    print("YES" if ok else "NO")
    if ok and witness is not None:
        text = json.dumps(witness)
        if args.witness:
            Path(args.witness).write_text(text + "\n", encoding="utf-8")
        else:
            print(text)
    return EXIT_YES if ok else EXIT_NO


def cmd_check_fixed(args) -> int:
    from .fixed import test_fixed

    inst = _load(args.file)
    if inst.embedding is None:
        raise UsageError("check-fixed needs an embedding (rot/outer lines)")
    res = test_fixed(inst.graph, inst.embedding)
    if not res and res.reason:
        print(f"# {res.reason}", file=sys.stderr)
    return _answer(res.ok, res.ok and witness_json(inst.graph, res.order, inst.embedding, res.lam), args)


def cmd_check_2tree(args) -> int:
    from .partial2tree import test_partial_2tree

    inst = _load(args.file)
    res = test_partial_2tree(inst.graph, jobs=args.jobs)
    return _answer(res.ok, res.ok and witness_json(inst.graph, res.order, res.embedding, res.lam), args)


def cmd_brute(args) -> int:
    from .oracle import brute_force_ube, brute_force_ube_fixed

    inst = _load(args.file)
    if args.fixed:
        if inst.embedding is None:
            raise UsageError("--fixed needs an embedding in the file")
        order = brute_force_ube_fixed(inst.graph, inst.embedding)
    else:
        order = brute_force_ube(inst.graph)
    return _answer(order is not None, order is not None and witness_json(inst.graph, order), args)


def cmd_reduce(args) -> int:
    from .oracle import reduce_upward_planarity

    inst = _load(args.file)
    sys.stdout.write(serialize_instance(reduce_upward_planarity(inst.graph)))
    return EXIT_YES


def cmd_render(args) -> int:
    inst = _load(args.file)
    witness = json.loads(Path(args.witness_file).read_text(encoding="utf-8"))
    order = witness.get("order") if isinstance(witness, dict) else None
    if not isinstance(order, list) or sorted(order) != list(range(inst.graph.n)):
        raise UsageError("witness must hold an 'order' listing every vertex once")
    data = render_svg(inst.graph, order, scale=args.scale)
    Path(args.output).write_bytes(data)
    return EXIT_YES


def cmd_selftest(args) -> int:
    from .selftest import SWEEPS, run_sweep

    names = args.only or list(SWEEPS)
    if args.jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(args.jobs) as pool:
            reports = list(pool.map(run_sweep, names, [args.max_n] * len(names)))
    else:
        reports = (run_sweep(name, args.max_n) for name in names)
    ok = True
    for report in reports:
        print(report.line())
        for item in report.mismatches[:5]:
            print(f"  {item}")
        ok &= report.ok
    return EXIT_YES if ok else EXIT_NO


class UsageError(ValueError):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="upbook", description="Upward two-page book embeddings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-fixed", help="test a graph with a given embedding")
    p.add_argument("file")
    p.add_argument("-w", "--witness", help="write the JSON witness here instead of stdout")
    p.set_defaults(run=cmd_check_fixed)

    p = sub.add_parser("check-2tree", help="test a biconnected partial 2-tree (embedding lines ignored)")
    p.add_argument("file")
    p.add_argument("-w", "--witness")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the reference-edge loop")
    p.set_defaults(run=cmd_check_2tree)

    p = sub.add_parser("brute", help="exhaustive search over spine orders")
    p.add_argument("file")
    p.add_argument("--fixed", action="store_true", help="only accept orders inducing the file's embedding")
    p.add_argument("-w", "--witness")
    p.set_defaults(run=cmd_brute)

    p = sub.add_parser("reduce", help="print the instance whose book embeddings encode upward planarity")
    p.add_argument("file")
    p.set_defaults(run=cmd_reduce)

    p = sub.add_parser("render", help="draw a witness as SVG")
    p.add_argument("file")
    p.add_argument("witness_file")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--scale", type=float, default=40.0, help="spine distance between consecutive vertices")
    p.set_defaults(run=cmd_render)

    p = sub.add_parser("selftest", help="compare the deciders with brute force on small instances")
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--only", action="append", choices=["fixed", "2tree", "reduce", "feasible"])
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(run=cmd_selftest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args)
    except ParseError as exc:
        print(f"{args.file}: {exc}", file=sys.stderr)
    except (OSError, UsageError, GraphError, InvalidUbe, NotBiconnected, NotPartial2Tree, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
