"""Finitely colored directed graphs, finite or lazily generated.

A graph exposes ``out_edges(v)`` as ``(color, target)`` pairs.  Graphs that
also know their incoming edges (finite graphs, trees) support the inverse
closure, which adds an :class:`~caucal_ordinals.regex.Inverse` colored edge
reversing every edge.  Vertices must be hashable; lazy generators must be
pure.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .regex import NFA, Inverse, compile_regex, parse_color

DEFAULT_MAX_VERTICES = 10**5
DEFAULT_MAX_PATH = 10**3


class GraphError(ValueError):
    pass


class VertexNotFoundError(GraphError):
    pass


class BoundExceededError(GraphError):
    pass


@dataclass(frozen=True)
class Bound:
    max_vertices: int = DEFAULT_MAX_VERTICES
    max_path_length: int = DEFAULT_MAX_PATH

    def __post_init__(self):
        if self.max_vertices <= 0 or self.max_path_length <= 0:
            raise ValueError("bounds must be positive")


class ColoredGraph:
    colors: frozenset
    root = None
    finite = False

    def out_edges(self, v) -> list:
        raise NotImplementedError

    def in_edges(self, v) -> list:
        raise GraphError(f"{type(self).__name__} does not expose incoming edges")

    def has_vertex(self, v) -> bool:
        raise NotImplementedError

    def label(self, v) -> str:
        return vertex_label(v)


class FiniteGraph(ColoredGraph):
    finite = True

    def __init__(self, colors: Iterable, vertices: Iterable, edges: Iterable, root=None,
                 labeler: Callable | None = None):
        self.colors = frozenset(colors)
        self._out: dict = {}
        self._in: dict = {}
        for v in vertices:
            self._out.setdefault(v, [])
            self._in.setdefault(v, [])
        self.edges: list = []
        seen = set()
        for u, c, w in edges:
            if c not in self.colors:
                raise GraphError(f"edge color {c!r} is not declared")
            if (u, c, w) in seen:
                continue
            seen.add((u, c, w))
            self.edges.append((u, c, w))
            self._out.setdefault(u, []).append((c, w))
            self._in.setdefault(u, [])
            self._in.setdefault(w, []).append((c, u))
            self._out.setdefault(w, [])
        if root is not None and root not in self._out:
            raise VertexNotFoundError(f"root {root!r} is not a vertex")
        self.root = root
        self._labeler = labeler

    @property
    def vertices(self) -> list:
        return list(self._out)

    def out_edges(self, v):
        try:
            return self._out[v]
        except KeyError:
            raise VertexNotFoundError(f"{v!r} is not a vertex") from None

    def in_edges(self, v):
        try:
            return self._in[v]
        except KeyError:
            raise VertexNotFoundError(f"{v!r} is not a vertex") from None

    def has_vertex(self, v):
        return v in self._out

    def label(self, v):
        return self._labeler(v) if self._labeler else vertex_label(v)

    def __len__(self):
        return len(self._out)


class LazyGraph(ColoredGraph):
    def __init__(self, colors: Iterable, root, out_fn: Callable, in_fn: Callable | None = None,
                 contains: Callable | None = None, labeler: Callable | None = None):
        self.colors = frozenset(colors)
        self.root = root
        self._out_fn = out_fn
        self._in_fn = in_fn
        self._contains = contains
        self._labeler = labeler

    def out_edges(self, v):
        return list(self._out_fn(v))

    def in_edges(self, v):
        if self._in_fn is None:
            return super().in_edges(v)
        return list(self._in_fn(v))

    def has_vertex(self, v):
        return self._contains(v) if self._contains else True

    def label(self, v):
        return self._labeler(v) if self._labeler else vertex_label(v)


def vertex_label(v) -> str:
    if isinstance(v, tuple):
        return "(" + ",".join(vertex_label(x) for x in v) + ")"
    return str(v)


# -- constructions -------------------------------------------------------------


def inverse_closure(g: ColoredGraph) -> ColoredGraph:
    colors = set(g.colors) | {Inverse(c) for c in g.colors}
    if g.finite:
        edges = list(g.edges) + [(w, Inverse(c), u) for u, c, w in g.edges]
        return FiniteGraph(colors, g.vertices, edges, root=g.root, labeler=g.label)

    def out_fn(v):
        return list(g.out_edges(v)) + [(Inverse(c), u) for c, u in g.in_edges(v)]

    def in_fn(v):
        return list(g.in_edges(v)) + [(Inverse(c), w) for c, w in g.out_edges(v)]

    return LazyGraph(colors, g.root, out_fn, in_fn, g.has_vertex, g.label)


def _bidirectional(g: ColoredGraph, v) -> list:
    """Out-edges of ``v`` in the inverse closure of ``g``."""
    return list(g.out_edges(v)) + [(Inverse(c), u) for c, u in g.in_edges(v)]


@dataclass
class Exploration:
    graph: FiniteGraph
    complete: bool
    order: list


def explore(g: ColoredGraph, bound: Bound = Bound(), start=None) -> Exploration:
    """Breadth-first finite snapshot of ``g`` from ``start`` (default: root).

    Only edges between discovered vertices are kept; ``complete`` is false when
    either bound cut the search short.
    """
    start = g.root if start is None else start
    if start is None:
        raise GraphError("no start vertex given and the graph has no root")
    dist = {start: 0}
    order = [start]
    queue = deque([start])
    edges = []
    complete = True
    while queue:
        v = queue.popleft()
        for c, w in g.out_edges(v):
            if w not in dist:
                if len(dist) >= bound.max_vertices or dist[v] + 1 > bound.max_path_length:
                    complete = False
                    continue
                dist[w] = dist[v] + 1
                order.append(w)
                queue.append(w)
            edges.append((v, c, w))
    return Exploration(FiniteGraph(g.colors, order, edges, root=start, labeler=g.label), complete, order)


def unfold(g: ColoredGraph, v0, depth: int) -> FiniteGraph:
    """Paths from ``v0`` with at most ``depth`` edges, as a tree.

    A path is the tuple ``(p0, (p0,c0,p1), p1, ..., pn)``.
    """
    if not g.has_vertex(v0):
        raise VertexNotFoundError(f"{v0!r} is not a vertex")
    root = (v0,)
    vertices = [root]
    edges = []
    frontier = [root]
    for _ in range(depth):
        nxt = []
        for path in frontier:
            last = path[-1]
            for c, w in g.out_edges(last):
                child = path + ((last, c, w), w)
                vertices.append(child)
                edges.append((path, c, child))
                nxt.append(child)
        frontier = nxt
    return FiniteGraph(g.colors, vertices, edges, root=root)


def unfold_lazy(g: ColoredGraph, v0) -> LazyGraph:
    def out_fn(path):
        last = path[-1]
        return [(c, path + ((last, c, w), w)) for c, w in g.out_edges(last)]

    def in_fn(path):
        if len(path) == 1:
            return []
        return [(path[-2][1], path[:-2])]

    return LazyGraph(g.colors, (v0,), out_fn, in_fn)


def treegraph(g: FiniteGraph, e, depth: int) -> FiniteGraph:
    """Bounded treegraph: non-empty vertex sequences of length <= depth.

    Edges copy every ``(u, c, w)`` of ``g`` at the last position of a sequence
    and add ``(s + (u,), e, s + (u, u))``.
    """
    if e in g.colors:
        raise GraphError(f"color {e!r} already used by the graph")
    if depth < 1:
        raise GraphError("treegraph depth must be at least 1")
    layers = [[(v,) for v in g.vertices]]
    for _ in range(depth - 1):
        layers.append([s + (v,) for s in layers[-1] for v in g.vertices])
    vertices = [s for layer in layers for s in layer]
    edges = []
    for length, layer in enumerate(layers, 1):
        for s in layer:
            u = s[-1]
            for c, w in g.out_edges(u):
                edges.append((s, c, s[:-1] + (w,)))
            if length < depth:
                edges.append((s, e, s + (u,)))
    return FiniteGraph(set(g.colors) | {e}, vertices, edges)


def is_deterministic(g: ColoredGraph, bound: Bound = Bound()) -> bool:
    if g.finite:
        vertices = g.vertices
    else:
        vertices = explore(g, bound).order
    for v in vertices:
        colors = [c for c, _ in g.out_edges(v)]
        if len(colors) != len(set(colors)):
            return False
    return True


# -- regular path queries --------------------------------------------------------


@dataclass
class QueryResult:
    targets: dict = field(default_factory=dict)  # vertex -> shortest witness word
    complete: bool = True

    def to_json(self, label=vertex_label) -> dict:
        return {
            "complete": self.complete,
            "targets": [{"vertex": label(v), "witness": [str(c) for c in w]}
                        for v, w in self.targets.items()],
        }


def regular_path_query(g: ColoredGraph, start, language, bound: Bound = Bound()) -> QueryResult:
    """Vertices reachable from ``start`` in the inverse closure of ``g`` along a word of ``language``.

    Product breadth-first search over (vertex, automaton state); epsilon moves
    cost nothing, so each target's witness is a shortest word.
    """
    nfa = language if isinstance(language, NFA) else compile_regex(language)
    if not g.has_vertex(start):
        raise VertexNotFoundError(f"{start!r} is not a vertex")
    by_symbol: list[dict] = []
    for out in nfa.edges:
        table: dict = {}
        for sym, r in out:
            table.setdefault(sym, []).append(r)
        by_symbol.append(table)
    result = QueryResult()
    origin = (start, nfa.start)
    dist = {origin: 0}
    parent: dict = {origin: None}
    seen_vertices = {start}
    queue = deque([origin])
    done = set()
    while queue:
        node = queue.popleft()
        if node in done:
            continue
        done.add(node)
        v, q = node
        d = dist[node]
        if q == nfa.accept and v not in result.targets:
            result.targets[v] = _witness(parent, node)
        symbols = by_symbol[q]
        for r in symbols.get(None, ()):
            nxt = (v, r)
            if nxt not in dist or dist[nxt] > d:
                dist[nxt] = d
                parent[nxt] = (node, None)
                queue.appendleft(nxt)
        if not any(sym is not None for sym in symbols):
            continue
        for c, w in _bidirectional(g, v):
            for r in symbols.get(c, ()):
                nxt = (w, r)
                if nxt in dist and dist[nxt] <= d + 1:
                    continue
                if d + 1 > bound.max_path_length:
                    result.complete = False
                    continue
                if w not in seen_vertices:
                    if len(seen_vertices) >= bound.max_vertices:
                        result.complete = False
                        continue
                    seen_vertices.add(w)
                dist[nxt] = d + 1
                parent[nxt] = (node, c)
                queue.append(nxt)
    return result


def _witness(parent, node) -> tuple:
    word = []
    while parent[node] is not None:
        node, sym = parent[node]
        if sym is not None:
            word.append(sym)
    return tuple(reversed(word))


def words_between(g: ColoredGraph, start, max_length: int) -> dict:
    """Naive enumeration: every walk of length <= max_length in the inverse closure,
    grouped as ``target -> set of color words``."""
    out: dict = {start: {()}}
    frontier = [(start, ())]
    for _ in range(max_length):
        nxt = []
        for v, word in frontier:
            for c, w in _bidirectional(g, v):
                item = (w, word + (c,))
                nxt.append(item)
                out.setdefault(w, set()).add(item[1])
        frontier = nxt
    return out


# -- serialization ---------------------------------------------------------------


def parse_graph_text(text: str) -> FiniteGraph:
    """Lines ``vertex ; color ; vertex``; a bare ``vertex`` line declares an isolated
    vertex; ``root: v`` sets the root; ``#`` starts a comment."""
    vertices, edges, colors = [], [], set()
    root = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("root:"):
            root = line[5:].strip()
            continue
        parts = [p.strip() for p in line.split(";")]
        if len(parts) == 1:
            vertices.append(parts[0])
        elif len(parts) == 3:
            color = parse_color(parts[1])
            if isinstance(color, Inverse):
                raise GraphError(f"line {lineno}: inverse colors are derived, not declared")
            colors.add(color)
            vertices.extend((parts[0], parts[2]))
            edges.append((parts[0], color, parts[2]))
        else:
            raise GraphError(f"line {lineno}: expected 'vertex ; color ; vertex'")
    return FiniteGraph(colors, dict.fromkeys(vertices), edges, root=root)


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: FiniteGraph, name: str = "G") -> str:
    lines = [f"digraph {_dot_quote(name)} {{"]
    for v in g.vertices:
        attrs = ' [shape="doublecircle"]' if v == g.root else ""
        lines.append(f"  {_dot_quote(g.label(v))}{attrs};")
    for u, c, w in g.edges:
        lines.append(f"  {_dot_quote(g.label(u))} -> {_dot_quote(g.label(w))} [label={_dot_quote(str(c))}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_adjacency(g: FiniteGraph) -> dict:
    return {
        "colors": sorted(str(c) for c in g.colors),
        "root": None if g.root is None else g.label(g.root),
        "vertices": [g.label(v) for v in g.vertices],
        "edges": [{"source": g.label(u), "color": str(c), "target": g.label(w)} for u, c, w in g.edges],
    }


def to_adjacency_json(g: FiniteGraph) -> str:
    return json.dumps(to_adjacency(g), indent=2, ensure_ascii=False)
