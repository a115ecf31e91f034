"""Regular expressions over edge colors and their inverses.

Syntax: a color is a letter optionally followed by digits (``a``, ``b``,
``a12``) or any name in angle brackets (``<edge>``).  A trailing ``-`` or
``⁻`` marks the inverse color.  Operators: juxtaposition, ``|`` (or ``∪``),
postfix ``*``, ``+``, ``?``, parentheses, and ``ε`` for the empty word.
Whitespace, ``.`` and ``·`` are ignored.

Expressions compile to Thompson automata (single start, single accept,
epsilon moves encoded as ``None`` symbols).
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class RegexSyntaxError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Inverse:
    """The fresh color ``c⁻`` traversing a ``c`` edge backwards."""

    color: object

    def __str__(self):
        return f"{self.color}-"


def inverse(color):
    return color.color if isinstance(color, Inverse) else Inverse(color)


def color_str(color) -> str:
    return str(color)


def parse_color(text: str):
    text = text.strip()
    for mark in ("-", "⁻"):
        if text.endswith(mark) and len(text) > len(mark):
            return Inverse(text[: -len(mark)])
    return text


_TOKEN = re.compile(r"<([^>]*)>|([A-Za-z][0-9]*)|(ε)|([|∪*+?()])|([-⁻])|([\s.·]+)|(.)")


def _tokenize(text: str):
    out = []
    for m in _TOKEN.finditer(text):
        name, letter, eps, op, inv, _space, bad = m.groups()
        if bad is not None:
            raise RegexSyntaxError(f"unexpected {bad!r} in {text!r}")
        if name is not None or letter is not None:
            out.append(("sym", name if name is not None else letter))
        elif eps:
            out.append(("eps", None))
        elif op:
            out.append(("op", "|" if op == "∪" else op))
        elif inv:
            if not out or out[-1][0] != "sym" or isinstance(out[-1][1], Inverse):
                raise RegexSyntaxError(f"inverse mark must follow a color in {text!r}")
            out[-1] = ("sym", Inverse(out[-1][1]))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def parse(self):
        node = self.alt()
        if self.i != len(self.toks):
            raise RegexSyntaxError(f"unbalanced or stray token in {self.text!r}")
        return node

    def alt(self):
        node = self.cat()
        while self.peek() == ("op", "|"):
            self.i += 1
            node = ("alt", node, self.cat())
        return node

    def cat(self):
        items = []
        while True:
            kind, val = self.peek()
            if kind in ("sym", "eps") or (kind, val) == ("op", "("):
                items.append(self.post())
            else:
                break
        if not items:
            return ("eps",)
        node = items[0]
        for item in items[1:]:
            node = ("cat", node, item)
        return node

    def post(self):
        node = self.atom()
        while self.peek()[0] == "op" and self.peek()[1] in "*+?":
            op = self.peek()[1]
            self.i += 1
            node = ({"*": "star", "+": "plus", "?": "opt"}[op], node)
        return node

    def atom(self):
        kind, val = self.peek()
        self.i += 1
        if kind == "sym":
            return ("sym", val)
        if kind == "eps":
            return ("eps",)
        if (kind, val) == ("op", "("):
            node = self.alt()
            if self.peek() != ("op", ")"):
                raise RegexSyntaxError(f"missing ')' in {self.text!r}")
            self.i += 1
            return node
        raise RegexSyntaxError(f"unexpected {val!r} in {self.text!r}")


def parse_regex(text: str):
    return _Parser(text).parse()


class NFA:
    """Thompson automaton; ``edges[q]`` lists ``(symbol | None, target)``."""

    def __init__(self):
        self.edges: list[list] = []
        self.start = self.accept = None

    def new_state(self) -> int:
        self.edges.append([])
        return len(self.edges) - 1

    def add(self, q, symbol, r):
        self.edges[q].append((symbol, r))

    @property
    def n_states(self):
        return len(self.edges)

    def alphabet(self) -> set:
        return {s for out in self.edges for s, _ in out if s is not None}

    def eps_closure(self, states) -> frozenset:
        seen = set(states)
        stack = list(states)
        while stack:
            q = stack.pop()
            for s, r in self.edges[q]:
                if s is None and r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)

    def accepts(self, word) -> bool:
        current = self.eps_closure([self.start])
        for sym in word:
            current = self.eps_closure([r for q in current for s, r in self.edges[q] if s == sym])
            if not current:
                return False
        return self.accept in current


def _build(nfa: NFA, node) -> tuple[int, int]:
    kind = node[0]
    if kind in ("sym", "eps"):
        s, f = nfa.new_state(), nfa.new_state()
        nfa.add(s, node[1] if kind == "sym" else None, f)
        return s, f
    if kind == "cat":
        s1, f1 = _build(nfa, node[1])
        s2, f2 = _build(nfa, node[2])
        nfa.add(f1, None, s2)
        return s1, f2
    if kind == "alt":
        s, f = nfa.new_state(), nfa.new_state()
        for sub in node[1:]:
            si, fi = _build(nfa, sub)
            nfa.add(s, None, si)
            nfa.add(fi, None, f)
        return s, f
    s, f = nfa.new_state(), nfa.new_state()
    si, fi = _build(nfa, node[1])
    nfa.add(s, None, si)
    nfa.add(fi, None, f)
    if kind in ("star", "opt"):
        nfa.add(s, None, f)
    if kind in ("star", "plus"):
        nfa.add(fi, None, si)
    return s, f


def compile_regex(text_or_ast) -> NFA:
    ast = parse_regex(text_or_ast) if isinstance(text_or_ast, str) else text_or_ast
    nfa = NFA()
    nfa.start, nfa.accept = _build(nfa, ast)
    return nfa


def format_regex(ast) -> str:
    kind = ast[0]
    if kind == "sym":
        sym = ast[1]
        if isinstance(sym, Inverse):
            return f"{_fmt_name(sym.color)}-"
        return _fmt_name(sym)
    if kind == "eps":
        return "ε"
    if kind == "cat":
        return "".join(_wrap(ast[i], ("alt",)) for i in (1, 2))
    if kind == "alt":
        return f"{format_regex(ast[1])} | {format_regex(ast[2])}"
    op = {"star": "*", "plus": "+", "opt": "?"}[kind]
    inner = ast[1]
    if inner[0] == "sym" and not isinstance(inner[1], Inverse):
        return format_regex(inner) + op
    return f"({format_regex(inner)}){op}"


def _wrap(ast, kinds):
    s = format_regex(ast)
    return f"({s})" if ast[0] in kinds else s


def _fmt_name(name) -> str:
    name = str(name)
    return name if re.fullmatch(r"[A-Za-z][0-9]*", name) else f"<{name}>"
