"""Higher-order pushdown stores and systems.

A level-0 store is a stack symbol; a level-(k+1) store is a tuple of level-k
stores, topmost element last.  A store is proper when every sequence in it
is non-empty.  ``pop k`` removes the last element of the topmost k-store;
``push k a`` appends to the topmost k-store a copy of its last element whose
topmost symbol is replaced by ``a``.  An operation that would leave an empty
sequence is disabled rather than producing an improper store.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .fgh import DEFAULT_MAX_BITS, beth
from .graph import Bound, BoundExceededError, FiniteGraph, LazyGraph, explore

EPSILON = "ε"


class PdsError(ValueError):
    pass


class ImproperStoreError(PdsError):
    pass


class LevelError(PdsError):
    pass


class MixedEpsilonError(PdsError):
    def __init__(self, config):
        super().__init__(f"configuration {config} has both ε and non-ε outgoing edges")
        self.config = config


@dataclass(frozen=True)
class Pds:
    level: int
    content: object  # a symbol at level 0, a tuple of level-(k-1) contents otherwise

    def __post_init__(self):
        if self.level < 0:
            raise LevelError("level must be non-negative")

    @classmethod
    def empty(cls, level: int) -> "Pds":
        if level < 1:
            raise LevelError("only levels >= 1 have an empty store")
        return cls(level, ())

    @property
    def is_proper(self) -> bool:
        return _proper(self.content, self.level)

    @property
    def top_symbol(self):
        if not self.is_proper:
            raise ImproperStoreError(f"{self} is not proper")
        x = self.content
        for _ in range(self.level):
            x = x[-1]
        return x

    def __str__(self):
        return _fmt(self.content, self.level)

    def key(self) -> str:
        return f"{self.level}:{self}"


def _proper(content, level) -> bool:
    if level == 0:
        return not isinstance(content, tuple)
    return isinstance(content, tuple) and len(content) > 0 and all(_proper(x, level - 1) for x in content)


def _fmt(content, level) -> str:
    if level == 0:
        return str(content)
    return "[" + ",".join(_fmt(x, level - 1) for x in content) + "]"


def parse_pds(text: str, level: int) -> Pds:
    """Parse ``[[s],[s,a]]``-style text at the given level."""
    text = text.replace(" ", "")
    pos = 0

    def read(lvl):
        nonlocal pos
        if lvl == 0:
            start = pos
            while pos < len(text) and text[pos] not in ",]":
                pos += 1
            if start == pos:
                raise PdsError(f"expected a symbol at {start} in {text!r}")
            return text[start:pos]
        if pos >= len(text) or text[pos] != "[":
            raise PdsError(f"expected '[' at {pos} in {text!r}")
        pos += 1
        items = []
        while pos < len(text) and text[pos] != "]":
            items.append(read(lvl - 1))
            if pos < len(text) and text[pos] == ",":
                pos += 1
        if pos >= len(text):
            raise PdsError(f"unterminated store {text!r}")
        pos += 1
        return tuple(items)

    content = read(level)
    if pos != len(text):
        raise PdsError(f"trailing text in {text!r}")
    return Pds(level, content)


def attach(outer: Pds, inner: Pds) -> Pds:
    """``outer : inner``; an inner store more than one level down is first wrapped in singletons."""
    if outer.level <= inner.level:
        raise LevelError(f"cannot attach a level-{inner.level} store to a level-{outer.level} store")
    content = inner.content
    for _ in range(outer.level - inner.level - 1):
        content = (content,)
    return Pds(outer.level, outer.content + (content,))


def _replace_top(content, level, fn):
    """Apply ``fn`` to the topmost ``level``-deep sequence selected by descent."""
    if level == 0:
        return fn(content)
    return content[:-1] + (_replace_top(content[-1], level - 1, fn),)


def pop(store: Pds, k: int) -> Pds:
    n = store.level
    if not 0 < k <= n:
        raise LevelError(f"pop {k} is not an operation at level {n}")
    if not store.is_proper:
        raise ImproperStoreError(f"{store} is not proper")

    def drop(seq):
        if len(seq) <= 1:
            raise ImproperStoreError(f"pop {k} would empty a level-{k} sequence of {store}")
        return seq[:-1]

    return Pds(n, _replace_top(store.content, n - k, drop))


def _set_top_symbol(content, level, a):
    if level == 0:
        return a
    return content[:-1] + (_set_top_symbol(content[-1], level - 1, a),)


def push(store: Pds, k: int, a) -> Pds:
    n = store.level
    if not 0 < k <= n:
        raise LevelError(f"push {k} is not an operation at level {n}")
    if not store.is_proper:
        raise ImproperStoreError(f"{store} is not proper")

    def dup(seq):
        return seq + (_set_top_symbol(seq[-1], k - 1, a),)

    return Pds(n, _replace_top(store.content, n - k, dup))


@dataclass(frozen=True)
class Operation:
    kind: str  # "pop" or "push"
    k: int
    symbol: object = None

    def apply(self, store: Pds) -> Pds:
        if self.kind == "pop":
            return pop(store, self.k)
        return push(store, self.k, self.symbol)

    def __str__(self):
        return f"pop {self.k}" if self.kind == "pop" else f"push {self.k} {self.symbol}"

    @classmethod
    def parse(cls, text: str) -> "Operation":
        parts = text.split()
        if len(parts) == 2 and parts[0] == "pop":
            return cls("pop", int(parts[1]))
        if len(parts) == 3 and parts[0] == "push":
            return cls("push", int(parts[1]), parts[2])
        raise PdsError(f"bad operation {text!r}; expected 'pop k' or 'push k a'")


@dataclass(frozen=True)
class Transition:
    state: object
    symbol: object
    target: object
    op: Operation
    label: object = EPSILON

    def __str__(self):
        return f"{self.state} ; {self.symbol} ; {self.target} ; {self.op} ; {self.label}"


@dataclass(frozen=True)
class Configuration:
    state: object
    store: Pds

    def __str__(self):
        return f"({self.state}, {self.store})"


@dataclass
class PushdownSystem:
    level: int
    input_alphabet: frozenset
    stack_alphabet: frozenset
    initial_symbol: object
    states: frozenset
    initial_state: object
    transitions: tuple = ()

    def __post_init__(self):
        if self.level < 1:
            raise LevelError("pushdown systems have level >= 1")
        self.input_alphabet = frozenset(self.input_alphabet)
        self.stack_alphabet = frozenset(self.stack_alphabet)
        self.states = frozenset(self.states)
        self.transitions = tuple(self.transitions)
        for sym in (self.initial_symbol,):
            if sym not in self.stack_alphabet:
                raise PdsError(f"initial symbol {sym!r} is not a stack symbol")
        if self.initial_state not in self.states:
            raise PdsError(f"initial state {self.initial_state!r} is not a state")
        for t in self.transitions:
            if t.state not in self.states or t.target not in self.states:
                raise PdsError(f"transition {t} uses an undeclared state")
            if t.symbol not in self.stack_alphabet:
                raise PdsError(f"transition {t} reads an undeclared stack symbol")
            if not 0 < t.op.k <= self.level:
                raise LevelError(f"transition {t} uses a level-{t.op.k} operation at level {self.level}")
            if t.op.kind == "push" and t.op.symbol not in self.stack_alphabet:
                raise PdsError(f"transition {t} pushes an undeclared symbol")
            if t.label != EPSILON and t.label not in self.input_alphabet:
                raise PdsError(f"transition {t} has label outside the input alphabet")
        self._by_key: dict = {}
        for t in self.transitions:
            self._by_key.setdefault((t.state, t.symbol), []).append(t)

    @property
    def labels(self) -> frozenset:
        return self.input_alphabet | {EPSILON}

    @classmethod
    def from_text(cls, text: str) -> "PushdownSystem":
        """Header ``key: value`` lines then ``q ; s ; q' ; pop k | push k a ; label`` lines.

        Header keys: ``level``, ``input``, ``stack``, ``states``, ``initial-state``,
        ``initial-symbol``.  A label of ``ε`` or ``eps`` marks a silent transition.
        """
        header: dict = {}
        transitions = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ";" in line:
                parts = [p.strip() for p in line.split(";")]
                if len(parts) != 5:
                    raise PdsError(f"line {lineno}: expected 5 ';'-separated fields")
                q, s, q2, op, label = parts
                label = EPSILON if label in ("ε", "eps", "") else label
                transitions.append(Transition(q, s, q2, Operation.parse(op), label))
            elif ":" in line:
                key, value = line.split(":", 1)
                header[key.strip()] = value.strip()
            else:
                raise PdsError(f"line {lineno}: not a header or transition line")
        try:
            level = int(header["level"])
            states = header.get("states", "").split()
            if not states:
                states = sorted({t.state for t in transitions} | {t.target for t in transitions}
                                | {header["initial-state"]})
            return cls(level, header.get("input", "").split(), header["stack"].split(),
                       header["initial-symbol"], states, header["initial-state"], transitions)
        except KeyError as exc:
            raise PdsError(f"missing header field {exc.args[0]!r}") from None


def initial_configuration(sys: PushdownSystem) -> Configuration:
    content = sys.initial_symbol
    for _ in range(sys.level):
        content = (content,)
    return Configuration(sys.initial_state, Pds(sys.level, content))


def one_step_successors(sys: PushdownSystem, w: Configuration) -> list[tuple[Transition, Configuration]]:
    top = w.store.top_symbol
    out = []
    for t in sys._by_key.get((w.state, top), ()):
        try:
            store = t.op.apply(w.store)
        except ImproperStoreError:
            continue
        out.append((t, Configuration(t.target, store)))
    return out


def configuration_graph(sys: PushdownSystem) -> LazyGraph:
    """Lazy configuration graph rooted at the initial configuration; colors are labels."""

    def out_fn(w):
        return [(t.label, w2) for t, w2 in one_step_successors(sys, w)]

    return LazyGraph(sys.labels, initial_configuration(sys), out_fn, labeler=str)


def explore_configurations(sys: PushdownSystem, bound: Bound = Bound()):
    return explore(configuration_graph(sys), bound)


def run(sys: PushdownSystem, bound: Bound = Bound()) -> list[tuple[Configuration, list]]:
    """Reachable configurations in breadth-first order with their enabled transitions."""
    ex = explore_configurations(sys, bound)
    return [(w, one_step_successors(sys, w)) for w in ex.order]


def epsilon_contraction(g, closure_bound: int = 10**4) -> LazyGraph:
    """Collapse silent moves: ``v1 -c-> v2`` iff an ε-path leads from v1 to some v3 with ``v3 -c-> v2``.

    Vertices are the root and every target of a visible edge.  Raises
    :class:`MixedEpsilonError` when an inspected vertex mixes silent and visible
    outgoing edges, and :class:`BoundExceededError` when an ε-closure grows past
    ``closure_bound`` vertices.
    """
    if g.root is None:
        raise PdsError("the configuration graph needs a root (the initial configuration)")

    def checked_out(v):
        edges = g.out_edges(v)
        silent = [e for e in edges if e[0] == EPSILON]
        if silent and len(silent) != len(edges):
            raise MixedEpsilonError(v)
        return edges

    def out_fn(v1):
        seen = {v1}
        queue = deque([v1])
        result = []
        while queue:
            v3 = queue.popleft()
            for c, w in checked_out(v3):
                if c == EPSILON:
                    if w not in seen:
                        if len(seen) >= closure_bound:
                            raise BoundExceededError(f"ε-closure of {v1} exceeds {closure_bound} vertices")
                        seen.add(w)
                        queue.append(w)
                elif (c, w) not in result:
                    result.append((c, w))
        return result

    colors = {c for c in g.colors if c != EPSILON}
    return LazyGraph(colors, g.root, out_fn, labeler=g.label)


def contract_explored(g: FiniteGraph) -> FiniteGraph:
    """Contraction of a finite (fully explored) configuration graph."""
    lazy = epsilon_contraction(g, closure_bound=max(1, len(g)))
    vertices = [g.root] + [w for u, c, w in g.edges if c != EPSILON]
    vertices = list(dict.fromkeys(vertices))
    edges = [(v, c, w) for v in vertices for c, w in lazy.out_edges(v)]
    return FiniteGraph(lazy.colors, vertices, edges, root=g.root, labeler=g.label)


def label_words(g, length: int, accept=lambda v: True, start=None) -> set[tuple]:
    """Color words of paths from ``start`` (default root) of length <= ``length`` ending in accepted vertices."""
    start = g.root if start is None else start
    words = set()
    frontier = [(start, ())]
    for step in range(length + 1):
        nxt = []
        for v, word in frontier:
            if accept(v):
                words.add(word)
            if step < length:
                nxt.extend((w, word + (c,)) for c, w in g.out_edges(v))
        frontier = nxt
    return words


def pumping_threshold(level: int, m: int, c: int, max_bits: int | None = None) -> int:
    """``beth(level-1, (m+1)*c)``: path-length threshold above which infinitely many paths exist."""
    if level < 1:
        raise LevelError("level must be >= 1")
    return beth(level - 1, (m + 1) * c, DEFAULT_MAX_BITS if max_bits is None else max_bits)


def random_store(rng, level: int, symbols: Iterable, max_len: int) -> Pds:
    symbols = list(symbols)

    def build(lvl):
        if lvl == 0:
            return rng.choice(symbols)
        return tuple(build(lvl - 1) for _ in range(rng.randint(1, max_len)))

    return Pds(level, build(level))


ANBN_TEXT = """\
# level-1 system for a^n b^n; the r -> r2 -> q detour makes some moves silent
level: 1
input: a b
stack: Z A
states: p q r r2
initial-state: p
initial-symbol: Z
p ; Z ; p ; push 1 A ; a
p ; A ; p ; push 1 A ; a
p ; A ; r ; pop 1 ; b
r ; A ; r2 ; push 1 A ; ε
r2 ; A ; q ; pop 1 ; ε
q ; A ; r ; pop 1 ; b
"""


def anbn_system() -> PushdownSystem:
    return PushdownSystem.from_text(ANBN_TEXT)


def anbn_accepting(w: Configuration) -> bool:
    return w.state in ("p", "r") and w.store.content == ("Z",)


EXAMPLES = {"anbn": ANBN_TEXT}
