"""Word automata over colors and inverse colors, switch relations, and vertex pair types.

An automaton *switches* from ``q`` to ``q'`` along a walk when reading the walk's
color word can take it from ``q`` to ``q'``.  The type of a vertex pair
``(v1, v2)`` records every switch realized on walks ``v1 -> v2`` (forward) and
``v2 -> v1`` (backward) in the inverse closure.

In a tree every walk from inside a cone to outside it passes through the cone's
root, so types of far-apart pairs are relational joins of types of nearer ones.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass

from .graph import Bound, BoundExceededError, _bidirectional
from .regex import NFA, compile_regex, parse_color


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True)
class WordAutomaton:
    alphabet: frozenset
    states: tuple
    instructions: frozenset  # of (q, symbol, q')
    initial: object = None
    accepting: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "alphabet", frozenset(self.alphabet))
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "instructions", frozenset(self.instructions))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        states = set(self.states)
        for q, a, r in self.instructions:
            if q not in states or r not in states:
                raise AutomatonError(f"instruction {(q, a, r)} uses an undeclared state")
            if a not in self.alphabet:
                raise AutomatonError(f"instruction {(q, a, r)} reads {a!r} outside the alphabet")
        if self.initial is not None and self.initial not in states:
            raise AutomatonError(f"initial state {self.initial!r} is not declared")
        if not self.accepting <= states:
            raise AutomatonError("accepting states must be declared")

    def step_table(self) -> dict:
        table: dict = {}
        for q, a, r in self.instructions:
            table.setdefault((q, a), set()).add(r)
        return table

    def accepts(self, word) -> bool:
        table = self.step_table()
        current = {self.initial}
        for a in word:
            current = {r for q in current for r in table.get((q, a), ())}
        return bool(current & self.accepting)

    @classmethod
    def from_nfa(cls, nfa: NFA, alphabet=None) -> "WordAutomaton":
        """Remove ε-moves: ``q -a-> r`` whenever some state in the ε-closure of q reads a into r."""
        closures = [nfa.eps_closure([q]) for q in range(nfa.n_states)]
        instructions = set()
        for q in range(nfa.n_states):
            for p in closures[q]:
                for sym, r in nfa.edges[p]:
                    if sym is not None:
                        instructions.add((q, sym, r))
        accepting = {q for q in range(nfa.n_states) if nfa.accept in closures[q]}
        alphabet = frozenset(alphabet) if alphabet is not None else frozenset(nfa.alphabet())
        return cls(alphabet | nfa.alphabet(), range(nfa.n_states), instructions, nfa.start, accepting)

    @classmethod
    def from_regex(cls, text: str, alphabet=None) -> "WordAutomaton":
        return cls.from_nfa(compile_regex(text), alphabet)

    @classmethod
    def from_text(cls, text: str) -> "WordAutomaton":
        """Lines ``q ; symbol ; q'`` plus ``initial: q`` and ``accepting: q1 q2``; ``#`` comments.

        ``states:`` may list states explicitly (isolated ones included); symbols use
        the color syntax, so ``a-`` is the inverse of ``a``.
        """
        states: dict = {}
        instructions, initial, accepting = set(), None, set()
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if ";" in line:
                parts = [p.strip() for p in line.split(";")]
                if len(parts) != 3:
                    raise AutomatonError(f"line {lineno}: expected 'q ; symbol ; q'")
                q, sym, r = parts
                states.setdefault(q, None)
                states.setdefault(r, None)
                instructions.add((q, parse_color(sym), r))
                continue
            key, _, value = line.partition(":")
            key = key.strip()
            if key == "initial":
                initial = value.strip()
                states.setdefault(initial, None)
            elif key == "accepting":
                accepting.update(value.split())
                for q in value.split():
                    states.setdefault(q, None)
            elif key == "states":
                for q in value.split():
                    states.setdefault(q, None)
            else:
                raise AutomatonError(f"line {lineno}: unknown line {line!r}")
        alphabet = {sym for _, sym, _ in instructions}
        return cls(alphabet, list(states), instructions, initial, accepting)

    def to_text(self) -> str:
        lines = []
        lines.append("states: " + " ".join(str(q) for q in self.states))
        if self.initial is not None:
            lines.append(f"initial: {self.initial}")
        if self.accepting:
            lines.append("accepting: " + " ".join(sorted(str(q) for q in self.accepting)))
        for q, a, r in sorted(self.instructions, key=lambda t: tuple(map(str, t))):
            lines.append(f"{q} ; {a} ; {r}")
        return "\n".join(lines) + "\n"


def switch_relation(aut: WordAutomaton, g, v, q, bound: Bound = Bound()) -> dict:
    """Least sets ``S[q_i]`` with ``v`` in ``S[q]`` and closed under instruction steps.

    Worklist iteration over (vertex, state) pairs in the inverse closure of ``g``.
    Raises :class:`BoundExceededError` when more than ``bound.max_vertices``
    distinct vertices are touched.
    """
    if q not in aut.states:
        raise AutomatonError(f"{q!r} is not a state")
    table = aut.step_table()
    result: dict = {s: set() for s in aut.states}
    result[q].add(v)
    touched = {v}
    work = deque([(v, q)])
    while work:
        u, s = work.popleft()
        for c, w in _bidirectional(g, u):
            for r in table.get((s, c), ()):
                if w in result[r]:
                    continue
                if w not in touched:
                    if len(touched) >= bound.max_vertices:
                        raise BoundExceededError(f"switch relation touches more than {bound.max_vertices} vertices")
                    touched.add(w)
                result[r].add(w)
                work.append((w, r))
    return result


@dataclass(frozen=True)
class VertexPairType:
    forward: frozenset
    backward: frozenset

    def __post_init__(self):
        object.__setattr__(self, "forward", frozenset(self.forward))
        object.__setattr__(self, "backward", frozenset(self.backward))

    @classmethod
    def identity(cls, states) -> "VertexPairType":
        diag = frozenset((q, q) for q in states)
        return cls(diag, diag)

    def sort_key(self) -> str:
        """Canonical serialization; the fixed linear order on types."""
        return json.dumps(self.to_json(), sort_keys=True)

    def to_json(self) -> dict:
        def pairs(rel):
            return sorted([str(a), str(b)] for a, b in rel)

        return {"forward": pairs(self.forward), "backward": pairs(self.backward)}

    def __str__(self):
        def fmt(rel):
            return "{" + ", ".join(f"{a}->{b}" for a, b in sorted(rel, key=lambda p: tuple(map(str, p)))) + "}"

        return f"forward {fmt(self.forward)} backward {fmt(self.backward)}"


def _switches(aut, g, src, dst, bound) -> frozenset:
    out = set()
    for q in aut.states:
        sets = switch_relation(aut, g, src, q, bound)
        out.update((q, r) for r, vs in sets.items() if dst in vs)
    return frozenset(out)


def pair_type(aut: WordAutomaton, g, v1, v2, bound: Bound = Bound()) -> VertexPairType:
    return VertexPairType(_switches(aut, g, v1, v2, bound), _switches(aut, g, v2, v1, bound))


def pair_types_from(aut: WordAutomaton, g, v, bound: Bound = Bound()) -> dict:
    """Forward switch sets from ``v``: ``vertex -> frozenset of (q, q')``."""
    out: dict = {}
    for q in aut.states:
        for r, vs in switch_relation(aut, g, v, q, bound).items():
            for w in vs:
                out.setdefault(w, set()).add((q, r))
    return {w: frozenset(rel) for w, rel in out.items()}


def join(*relations) -> frozenset:
    """Relational composition, left to right."""
    result = relations[0]
    for rel in relations[1:]:
        by_first: dict = {}
        for a, b in rel:
            by_first.setdefault(a, []).append(b)
        result = frozenset((a, c) for a, b in result for c in by_first.get(b, ()))
    return frozenset(result)


def compose_collinear(t1: VertexPairType, t2: VertexPairType) -> VertexPairType:
    """Type of ``(v1, v3)`` from ``t1 = type(v1, v2)`` and ``t2 = type(v2, v3)``,
    when v1 is in the cone of v2 and v3 is not."""
    return VertexPairType(join(t1.forward, t2.forward), join(t2.backward, t1.backward))


def compose_forked(t1: VertexPairType, t2: VertexPairType, t3: VertexPairType) -> VertexPairType:
    """Type of ``(u1, u2)`` from ``t1 = type(v1, v2)``, ``t2 = type(v1, u1)``,
    ``t3 = type(v2, u2)``, when u1, u2 lie in the disjoint cones of v1, v2."""
    return VertexPairType(join(t2.backward, t1.forward, t3.forward),
                          join(t3.backward, t1.backward, t2.forward))


def accepts_between(aut: WordAutomaton, g, v1, v2, bound: Bound = Bound()) -> bool:
    """Some walk ``v1 -> v2`` is labeled by a word the automaton accepts."""
    if aut.initial is None:
        raise AutomatonError("automaton has no initial state")
    sets = switch_relation(aut, g, v1, aut.initial, bound)
    return any(v2 in sets[q] for q in aut.accepting)
