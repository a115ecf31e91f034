"""Lexicographic trees presenting the ordinals below w^k.

The tree of arity k has vertices ``a1^i1 a2^i2 ... ak^ik`` (block order), stored
as exponent tuples ``(i1, ..., ik)``.  A vertex whose last nonzero block is j has
one child per color ``a_j, ..., a_k``; the root has all k.  Ordering vertices
lexicographically by their tuples gives a well-ordering of type w^k, and that
order is rational: ``v1 < v2`` iff a word of :func:`order_language` labels a
walk from v1 to v2.

The cone under a vertex is a lexicographic interval ``[w, sup_w)``, which makes
cofinality questions decidable by tuple arithmetic.  On top of that sit two
constructions of cofinal-sequence systems: :func:`construct_cofinal` (cone
chains) and :func:`bachmannize` (thinning to a subsystem with the Bachmann
property), plus the pull-back of the standard system.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import count as naturals, product

from . import ordinal as O
from .funseq import FunSeqError, FunSeqSystem, OrderPresentation
from .graph import FiniteGraph, LazyGraph
from .ordinal import Classification, Kind, Ordinal
from .pairtypes import VertexPairType, WordAutomaton, pair_type
from .regex import Inverse

LETTERS = "abcdefghijklmnopqrstuvwxyz"


class LexTreeError(ValueError):
    pass


class OracleUnavailableError(LexTreeError):
    pass


# -- the tree and its order ------------------------------------------------------------


def _last_nonzero(v: tuple) -> int:
    """0-based index of the last nonzero block, or -1 at the root."""
    for j in range(len(v) - 1, -1, -1):
        if v[j]:
            return j
    return -1


class LexTree(LazyGraph):
    def __init__(self, k: int):
        if not 1 <= k <= len(LETTERS):
            raise LexTreeError(f"arity must be between 1 and {len(LETTERS)}")
        self.k = k
        self.letters = LETTERS[:k]
        super().__init__(self.letters, (0,) * k, self._children, self._parents,
                         self.is_vertex, self.format)

    def is_vertex(self, v) -> bool:
        return (isinstance(v, tuple) and len(v) == self.k
                and all(isinstance(x, int) and not isinstance(x, bool) and x >= 0 for x in v))

    def check(self, v) -> tuple:
        if not self.is_vertex(v):
            raise LexTreeError(f"{v!r} is not a vertex of the arity-{self.k} tree")
        return v

    def _children(self, v):
        self.check(v)
        start = max(_last_nonzero(v), 0)
        return [(self.letters[j], v[:j] + (v[j] + 1,) + v[j + 1:]) for j in range(start, self.k)]

    def _parents(self, v):
        p = parent(self.check(v))
        if p is None:
            return []
        return [(self.letters[_last_nonzero(v)], p)]

    def format(self, v) -> str:
        blocks = [f"{self.letters[j]}^{x}" for j, x in enumerate(self.check(v)) if x]
        return " ".join(blocks) if blocks else "ε"

    def parse(self, text: str) -> tuple:
        """Parse ``a^2 b^3`` (``b`` alone means ``b^1``; ``ε`` is the root).

        Blocks must appear in color order, each at most once.
        """
        text = text.strip()
        v = [0] * self.k
        if text in ("", "ε", "eps"):
            return tuple(v)
        last = -1
        for tok in re.split(r"\s+", text):
            m = re.fullmatch(r"([a-z])(?:\^(\d+))?", tok)
            if not m or m.group(1) not in self.letters:
                raise LexTreeError(f"bad block {tok!r} for arity {self.k}")
            j = self.letters.index(m.group(1))
            if j <= last:
                raise LexTreeError(f"blocks out of order in {text!r}")
            last = j
            v[j] = int(m.group(2)) if m.group(2) is not None else 1
        return tuple(v)

    def box(self, top: int) -> FiniteGraph:
        """Finite induced subtree of vertices with every exponent <= top."""
        vertices = list(product(range(top + 1), repeat=self.k))
        edges = [(v, c, w) for v in vertices for c, w in self._children(v) if max(w) <= top]
        return FiniteGraph(self.letters, vertices, edges, root=self.root, labeler=self.format)

    def ancestors(self, v) -> list:
        """Ancestors of ``v`` from the root down to ``v`` itself."""
        chain = [self.check(v)]
        while (p := parent(chain[-1])) is not None:
            chain.append(p)
        return chain[::-1]


def parent(v: tuple):
    j = _last_nonzero(v)
    if j < 0:
        return None
    return v[:j] + (v[j] - 1,) + v[j + 1:]


def lex_compare(t: LexTree, v1, v2) -> O.Cmp:
    t.check(v1)
    t.check(v2)
    return O.Cmp.LESS if v1 < v2 else O.Cmp.GREATER if v1 > v2 else O.Cmp.EQUAL


def vertex_to_ordinal(t: LexTree, v) -> Ordinal:
    t.check(v)
    return Ordinal(tuple((Ordinal.of(t.k - 1 - j), x) for j, x in enumerate(v) if x))


def ordinal_to_vertex(t: LexTree, a: Ordinal) -> tuple:
    v = [0] * t.k
    for e, c in a.terms:
        if not e.is_finite or int(e) >= t.k:
            raise LexTreeError(f"{a} is not below w^{t.k}")
        v[t.k - 1 - int(e)] = c
    return tuple(v)


def is_limit_vertex(t: LexTree, v) -> bool:
    t.check(v)
    return v[-1] == 0 and any(v)


def order_language(t: LexTree) -> str:
    """Regular expression whose words label exactly the walks ``v1 -> v2`` with ``v1 < v2``."""
    parts = []
    L = t.letters
    for j in range(t.k):
        ups = "".join(f"({L[i]}-)*" for i in range(t.k - 1, j, -1))
        downs = "".join(f"{L[i]}*" for i in range(j + 1, t.k))
        parts.append(f"{ups}{L[j]}{L[j]}*{downs}")
    return " | ".join(parts)


class LexOrder(OrderPresentation):
    """The lexicographic well-ordering of an arity-k tree."""

    def __init__(self, tree: LexTree):
        self.tree = tree

    def compare(self, a, b):
        return int(lex_compare(self.tree, a, b))

    def classify(self, a):
        self.tree.check(a)
        if not any(a):
            return Classification(Kind.ZERO, None)
        if a[-1]:
            return Classification(Kind.SUCCESSOR, a[:-1] + (a[-1] - 1,))
        return Classification(Kind.LIMIT, None)

    @property
    def minimum(self):
        return self.tree.root

    def validate(self, a):
        self.tree.check(a)

    def format(self, a):
        return self.tree.format(a)

    def parse(self, text):
        return self.tree.parse(text)


# -- interval arithmetic on the lexicographic order ---------------------------------------
#
# An interval is ``(lo, hi)`` meaning ``[lo, hi)``; ``hi is None`` stands for w^k.


def cone_interval(t: LexTree, w) -> tuple:
    """The cone under ``w`` as a lexicographic interval."""
    t.check(w)
    j = _last_nonzero(w)
    if j <= 0:
        return (w, None)
    return (w, w[: j - 1] + (w[j - 1] + 1,) + (0,) * (t.k - j))


def _lt(a, b) -> bool:
    """``a < b`` for interval endpoints where ``None`` is the top."""
    if b is None:
        return a is not None
    return a is not None and a < b


def _min_end(a, b):
    return a if _lt(a, b) or a == b else b


def _max_end(a, b):
    return b if _lt(a, b) else a


def intersect(xs: list, ys: list) -> list:
    out = []
    for lo1, hi1 in xs:
        for lo2, hi2 in ys:
            lo, hi = max(lo1, lo2), _min_end(hi1, hi2)
            if _lt(lo, hi):
                out.append((lo, hi))
    return normalize(out)


def subtract(xs: list, ys: list) -> list:
    out = list(xs)
    for lo2, hi2 in ys:
        nxt = []
        for lo1, hi1 in out:
            if _lt(lo1, lo2):
                nxt.append((lo1, _min_end(hi1, lo2)))
            if hi2 is not None and _lt(hi2, hi1):
                nxt.append((max(lo1, hi2), hi1))
        out = [iv for iv in nxt if _lt(iv[0], iv[1])]
    return normalize(out)


def normalize(xs: list) -> list:
    xs = sorted(xs)
    out: list = []
    for lo, hi in xs:
        if out and not _lt(out[-1][1], lo):
            out[-1] = (out[-1][0], _max_end(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return out


def interval_max(xs: list):
    """Lexicographic maximum of a union of intervals, or ``None`` when only a supremum exists."""
    if not xs:
        return None
    lo, hi = xs[-1]
    if hi is None or hi[-1] == 0:
        return None
    return hi[:-1] + (hi[-1] - 1,)


def interval_sup(xs: list):
    return xs[-1][1] if xs else None


def below(v) -> list:
    return [((0,) * len(v), v)] if any(v) else []


def cone_is_cofinal(t: LexTree, w, v0) -> bool:
    """The cone under ``w`` contains a subset cofinal in the limit ``v0``."""
    if not is_limit_vertex(t, v0):
        raise LexTreeError(f"{t.format(v0)} is not a limit vertex")
    lo, hi = cone_interval(t, w)
    return lo <= v0 and not _lt(hi, v0)


def cone_contains(t: LexTree, w, v) -> bool:
    lo, hi = cone_interval(t, w)
    return lo <= v and _lt(v, hi)


def in_cone(w, v) -> bool:
    """Tree-structural test: ``v`` is a descendant of (or equal to) ``w``."""
    while v is not None:
        if v == w:
            return True
        if v < w:
            return False
        v = parent(v)
    return False


# -- cone chains (adding cofinal sequences) -----------------------------------------------


def cone_chain(t: LexTree, v0):
    """Vertices whose cones are cofinal in ``v0`` but do not contain it, in cone order.

    Breadth-first over the subtree of cofinal cones; the result is asserted to be
    a chain under cone inclusion.
    """
    frontier = [t.root]
    previous = None
    while frontier:
        nxt = []
        for w in frontier:
            if not cone_is_cofinal(t, w, v0):
                continue
            if not cone_contains(t, w, v0):
                if previous is not None and not in_cone(previous, w):
                    raise LexTreeError(f"cofinal cones of {t.format(previous)} and {t.format(w)} are not nested")
                previous = w
                yield w
            nxt.extend(child for _, child in t.out_edges(w))
        frontier = nxt


def _cofinal_entries(t: LexTree, v0, select: str):
    chain = cone_chain(t, v0)
    current = next(chain)
    for nxt in chain:
        diff = subtract([cone_interval(t, current)], [cone_interval(t, nxt)])
        region = intersect(diff, below(v0))
        if region:
            top = interval_max(region)
            if top is None:
                if select == "max":
                    raise LexTreeError(f"no maximal element below {t.format(v0)} in the cone difference "
                                       f"at {t.format(current)}")
                top = region[0][0]
            elif select == "min":
                top = region[0][0]
            yield top
        current = nxt


SELECT_MODES = ("auto", "max", "min")


def construct_cofinal(t: LexTree, v0, count: int, aut: WordAutomaton | None = None,
                      select: str = "auto") -> list:
    """First ``count`` entries of the cone-chain cofinal sequence for ``v0``.

    Each qualifying cone difference contributes its greatest element below v0;
    when the difference has no greatest element, ``select="auto"`` falls back to
    its least one.  With ``aut`` (an automaton for the order language) every
    entry is re-checked to lie below v0 by a walk search.
    """
    if select not in SELECT_MODES:
        raise LexTreeError(f"select must be one of {SELECT_MODES}")
    if not is_limit_vertex(t, v0):
        raise LexTreeError(f"{t.format(v0)} is not a limit vertex")
    entries = []
    gen = _cofinal_entries(t, v0, select)
    for _ in range(count):
        entries.append(next(gen))
    if aut is not None:
        for u in entries:
            if not _automaton_less(t, aut, u, v0):
                raise LexTreeError(f"automaton does not place {t.format(u)} below {t.format(v0)}")
    return entries


class SequenceSystem(FunSeqSystem):
    """A cofinal-sequence system given by per-limit generators, cached lazily."""

    name = "lextree"

    def __init__(self, tree: LexTree, make):
        self.tree = tree
        self.order = LexOrder(tree)
        self._make = make
        self._gens: dict = {}
        self._cache: dict = {}

    def fundamental(self, x, n):
        if not is_limit_vertex(self.tree, x):
            raise LexTreeError(f"{self.tree.format(x)} is not a limit vertex")
        cache = self._cache.setdefault(x, [])
        if x not in self._gens:
            self._gens[x] = self._make(x)
        gen = self._gens[x]
        while len(cache) <= n:
            try:
                cache.append(next(gen))
            except StopIteration:
                raise FunSeqError(f"sequence for {self.tree.format(x)} ended after {len(cache)} entries") from None
        return cache[n]

    def prefix(self, x, count: int) -> list:
        return [self.fundamental(x, n) for n in range(count)]


def cofinal_system(t: LexTree, select: str = "auto") -> SequenceSystem:
    if select not in SELECT_MODES:
        raise LexTreeError(f"select must be one of {SELECT_MODES}")
    return SequenceSystem(t, lambda v0: _cofinal_entries(t, v0, select))


# -- types on the tree ---------------------------------------------------------------------


def _reads_up_then_down(aut: WordAutomaton) -> bool:
    """No run reads an inverse color after a direct one."""
    after_down = {r for _, a, r in aut.instructions if not isinstance(a, Inverse)}
    stack = list(after_down)
    while stack:
        q = stack.pop()
        for q1, a, r in aut.instructions:
            if q1 == q and r not in after_down:
                after_down.add(r)
                stack.append(r)
    return not any(q in after_down and isinstance(a, Inverse) for q, a, _ in aut.instructions)


def _ancestor_graph(t: LexTree, *vs) -> FiniteGraph:
    vertices = sorted({a for v in vs for a in t.ancestors(v)})
    present = set(vertices)
    edges = []
    for v in vertices:
        p = parent(v)
        if p is not None and p in present:
            edges.append((p, t.letters[_last_nonzero(v)], v))
    return FiniteGraph(t.letters, vertices, edges, root=t.root)


def tree_pair_type(t: LexTree, aut: WordAutomaton, v1, v2) -> VertexPairType:
    """Exact pair type for automata whose runs go up, then down.

    Such runs only visit ancestors of the two endpoints, so the switch fixpoint
    is computed on that finite subtree.
    """
    if not _reads_up_then_down(aut):
        raise OracleUnavailableError("pair types on the lexicographic tree need an up-then-down automaton")
    return pair_type(aut, _ancestor_graph(t, v1, v2), v1, v2)


def _automaton_less(t: LexTree, aut: WordAutomaton, u, v) -> bool:
    typ = tree_pair_type(t, aut, u, v)
    return any((aut.initial, q) in typ.forward for q in aut.accepting)


def default_automaton(t: LexTree) -> WordAutomaton:
    return WordAutomaton.from_regex(order_language(t))


# -- thinning to the Bachmann property ------------------------------------------------------


@dataclass
class Anchor:
    """Where a limit's thinned sequence lives: a cone root and the chosen type."""

    v0: tuple
    top: tuple  # deepest ancestor whose cone holds a tail of the base sequence
    cone_root: tuple
    type_key: str
    members: list = field(default_factory=list)  # cached prefix of the anchored set
    scanned: int = 0  # base entries inspected so far


class BachmannBuilder:
    """Thins a base cofinal system on a lexicographic tree.

    For a limit v0: pick the cone (child of the deepest ancestor holding a tail
    of the base sequence, first color first) that holds a tail but not v0; keep
    the base entries in it whose pair type with the cone root is the least type
    seen in a tail window; then drop every kept entry not above the entries that
    other limits, anchored at ancestors of v0, keep below v0.
    """

    def __init__(self, t: LexTree, base: FunSeqSystem, aut: WordAutomaton | None = None,
                 skip: int = 4, window: int = 8, scan_cap: int = 10_000):
        self.t = t
        self.base = base
        self.aut = aut if aut is not None else default_automaton(t)
        if not _reads_up_then_down(self.aut):
            raise OracleUnavailableError("pair types on the lexicographic tree need an up-then-down automaton")
        self.skip, self.window, self.scan_cap = skip, window, scan_cap
        self._anchors: dict = {}

    def _holds_tail(self, w, v0) -> bool:
        # every strictly increasing cofinal sequence has a tail in a cone [w, sup) iff w < v0 <= sup
        return w != v0 and cone_is_cofinal(self.t, w, v0)

    def anchor(self, v0) -> Anchor:
        if v0 in self._anchors:
            return self._anchors[v0]
        t = self.t
        if not is_limit_vertex(t, v0):
            raise LexTreeError(f"{t.format(v0)} is not a limit vertex")
        top = [a for a in t.ancestors(v0) if self._holds_tail(a, v0)][-1]
        cone_root = next(c for _, c in t.out_edges(top)
                         if not cone_contains(t, c, v0) and self._holds_tail(c, v0))
        seen_types: dict = {}
        for n in range(self.skip, self.skip + self.window):
            w = self.base.fundamental(v0, n)
            if in_cone(cone_root, w):
                typ = tree_pair_type(t, self.aut, w, cone_root)
                seen_types.setdefault(typ.sort_key(), typ)
        if not seen_types:
            raise LexTreeError(f"no base entries for {t.format(v0)} in the cone of {t.format(cone_root)} "
                               f"within the sampled window")
        anchor = Anchor(v0, top, cone_root, min(seen_types))
        self._anchors[v0] = anchor
        return anchor

    def anchored(self, v0):
        """The base entries kept in the anchored cone, in order."""
        a = self.anchor(v0)
        i = 0
        while True:
            while i >= len(a.members):
                self._extend(a)
            yield a.members[i]
            i += 1

    def _extend(self, a: Anchor) -> None:
        for _ in range(self.scan_cap):
            w = self.base.fundamental(a.v0, a.scanned)
            a.scanned += 1
            if in_cone(a.cone_root, w) and \
                    tree_pair_type(self.t, self.aut, w, a.cone_root).sort_key() == a.type_key:
                a.members.append(w)
                return
        raise LexTreeError(f"anchored type for {self.t.format(a.v0)} not seen in {self.scan_cap} entries")

    def competitors(self, v0) -> list:
        """Other limits whose anchored cone root is an ancestor of v0 (including v0)."""
        out = []
        for u in self.t.ancestors(v0):
            lo, hi = cone_interval(self.t, u)
            if hi is None or hi == v0 or not is_limit_vertex(self.t, hi):
                continue
            # the cone of an anchored root is cofinal in its limit, so that limit is the cone's supremum
            if self.anchor(hi).cone_root == u:
                out.append(hi)
        return out

    def floor(self, v0):
        """Greatest entry below v0 kept by a competing limit, or ``None``."""
        best = None
        for v1 in self.competitors(v0):
            for w in self.anchored(v1):
                if w > v0:
                    break
                if w != v0 and (best is None or w > best):
                    best = w
        return best

    def entries(self, v0):
        low = self.floor(v0)
        for w in self.anchored(v0):
            if low is None or w > low:
                yield w


def bachmann_system(t: LexTree, base: FunSeqSystem | None = None, aut: WordAutomaton | None = None,
                    **kwargs) -> SequenceSystem:
    builder = BachmannBuilder(t, base if base is not None else cofinal_system(t), aut, **kwargs)
    system = SequenceSystem(t, builder.entries)
    system.builder = builder
    return system


def bachmannize(t: LexTree, base: FunSeqSystem, v0, count: int, aut: WordAutomaton | None = None) -> list:
    """First ``count`` entries of the thinned sequence for ``v0``; each is a base entry."""
    if count == 0:
        return []
    return bachmann_system(t, base, aut).prefix(v0, count)


# -- the standard system pulled back -------------------------------------------------------------


class StandardTreeSystem(FunSeqSystem):
    """``s(v, n) = f^-1(s_st(f(v), n))`` for limit vertices below ``cap``."""

    name = "lextree-st"

    def __init__(self, t: LexTree, cap: Ordinal | None = None):
        top = Ordinal.power(t.k)
        cap = top if cap is None else cap
        if cap > top:
            raise LexTreeError(f"cap {cap} exceeds w^{t.k}")
        self.tree, self.cap = t, cap
        self.order = LexOrder(t)

    def fundamental(self, x, n):
        a = vertex_to_ordinal(self.tree, x)
        if not a < self.cap:
            raise LexTreeError(f"{self.tree.format(x)} is not below the cap {self.cap}")
        return ordinal_to_vertex(self.tree, O.standard_fundamental(a, n))

    def level(self, v) -> int | None:
        """The n with v in A_n, or ``None`` (zero vertex)."""
        return limit_level(self.tree, v)


def standard_relation_on_tree(t: LexTree, cap: Ordinal | None = None) -> StandardTreeSystem:
    return StandardTreeSystem(t, cap)


def _pattern(v) -> tuple:
    return tuple(bool(x) for x in v)


def _in_level(k: int, pattern: tuple, n: int) -> bool:
    """Membership in A_n, which depends only on which blocks are nonzero."""
    return _level_cached(k, pattern, n)


@lru_cache(maxsize=None)
def _level_cached(k, pattern, n):
    if not any(pattern):
        return False
    if n == 0:
        return pattern[-1]
    return (_is_limit_point(k, pattern, lambda p: _in_level(k, p, n - 1))
            and not _is_limit_point(k, pattern, lambda p: _is_limit_point(k, p, lambda q: _in_level(k, q, n - 1))))


def _is_limit_point(k: int, pattern: tuple, member) -> bool:
    """Whether a vertex with this zero pattern is a limit of the pattern-defined set ``member``.

    Just below a limit v with last nonzero block j, the vertices are
    ``v[:j] + (v[j]-1, x, ...)`` with x arbitrarily large; since membership only
    depends on zero patterns, v is a limit point iff some pattern of that shape
    with a nonzero (j+1)-th block is a member.
    """
    if not any(pattern) or pattern[-1]:
        return False
    j = max(i for i, b in enumerate(pattern) if b)
    head = pattern[:j]
    for lowered in (True, False):  # v[j]-1 may or may not be zero
        for tail in product((False, True), repeat=k - j - 2):
            if member(head + (lowered, True) + tail):
                return True
    return False


def limit_level(t: LexTree, v) -> int | None:
    """The n with v in A_n: A_0 holds successors, A_(n+1) the limits of A_n that are
    not limits of limits of A_n."""
    t.check(v)
    if not any(v):
        return None
    for n in range(t.k):
        if _in_level(t.k, _pattern(v), n):
            return n
    raise LexTreeError(f"{t.format(v)} is in no level")


def vertices_upto(t: LexTree, top: int) -> list:
    return list(product(range(top + 1), repeat=t.k))


def limit_vertices_upto(t: LexTree, top: int) -> list:
    return [v for v in vertices_upto(t, top) if is_limit_vertex(t, v)]


def cofinal_witness(t: LexTree, system: FunSeqSystem, v0, w, cap: int = 10_000) -> int:
    """Least n with ``w <= s(v0, n)`` for ``w < v0``."""
    if not w < v0:
        raise LexTreeError(f"{t.format(w)} is not below {t.format(v0)}")
    for n in naturals():
        if n > cap:
            raise LexTreeError(f"no entry of {t.format(v0)} reaches {t.format(w)} within {cap}")
        if system.fundamental(v0, n) >= w:
            return n
