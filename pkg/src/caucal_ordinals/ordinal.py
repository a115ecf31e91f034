"""Ordinals below epsilon_0 in Cantor normal form.

An ordinal is stored as a tuple of ``(exponent, coefficient)`` pairs with
strictly decreasing exponents (themselves ordinals) and positive integer
coefficients.  The empty tuple is zero.  Values are immutable and hashable.

Text syntax::

    0 | 7 | w | w^3 | w^w | w^(w+1) | w^3*2+w*5+7

``^`` binds tighter than ``*`` and is right associative, so ``w^w^2`` is
``w^(w^2)``.  ``ω`` is accepted as an alias for ``w``.
"""

from __future__ import annotations

import enum
import re
from itertools import product
from typing import Iterator, NamedTuple

DEFAULT_MAX_DEPTH = 64


class OrdinalError(ValueError):
    pass


class NotALimitError(OrdinalError):
    pass


class DepthCapError(OrdinalError):
    pass


class OrdinalSyntaxError(OrdinalError):
    pass


class Cmp(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class Kind(enum.Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


class Classification(NamedTuple):
    kind: Kind
    predecessor: "Ordinal | None" = None


class Ordinal:
    __slots__ = ("terms", "_hash", "_depth")

    def __init__(self, terms=()):
        # ``terms`` must already be in normal form; use add()/parse() otherwise.
        self.terms: tuple[tuple[Ordinal, int], ...] = tuple(terms)
        self._hash = None
        self._depth = None

    # -- construction -------------------------------------------------------

    @classmethod
    def of(cls, value: "int | Ordinal") -> "Ordinal":
        if isinstance(value, Ordinal):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot make an ordinal from {value!r}")
        if value < 0:
            raise OrdinalError("ordinals are non-negative")
        return ZERO if value == 0 else cls(((ZERO, value),))

    @classmethod
    def power(cls, exponent: "int | Ordinal", coefficient: int = 1,
              max_depth: int = DEFAULT_MAX_DEPTH) -> "Ordinal":
        """``w^exponent * coefficient``."""
        if coefficient < 0:
            raise OrdinalError("coefficients are non-negative")
        if coefficient == 0:
            return ZERO
        result = cls(((cls.of(exponent), coefficient),))
        if result.depth > max_depth:
            raise DepthCapError(f"nesting depth {result.depth} exceeds cap {max_depth}")
        return result

    # -- basic structure ----------------------------------------------------

    @property
    def depth(self) -> int:
        if self._depth is None:
            self._depth = 0 if not self.terms else 1 + max(e.depth for e, _ in self.terms)
        return self._depth

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero)

    @property
    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero

    def __int__(self) -> int:
        if not self.is_finite:
            raise OrdinalError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = Ordinal.of(other) if other >= 0 else None
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.terms)
        return self._hash

    def __lt__(self, other):
        return compare(self, Ordinal.of(other)) < 0

    def __le__(self, other):
        return compare(self, Ordinal.of(other)) <= 0

    def __gt__(self, other):
        return compare(self, Ordinal.of(other)) > 0

    def __ge__(self, other):
        return compare(self, Ordinal.of(other)) >= 0

    def __add__(self, other):
        return add(self, Ordinal.of(other))

    def __radd__(self, other):
        return add(Ordinal.of(other), self)

    def __str__(self):
        return format_ordinal(self)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"

    def to_json(self):
        return [{"exponent": e.to_json(), "coefficient": c} for e, c in self.terms]

    @classmethod
    def from_json(cls, data) -> "Ordinal":
        result = ZERO
        for item in data:
            result = add(result, cls.power(cls.from_json(item["exponent"]), int(item["coefficient"])))
        return result


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def compare(a: Ordinal, b: Ordinal) -> Cmp:
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c:
            return c
        if ca != cb:
            return Cmp.LESS if ca < cb else Cmp.GREATER
    la, lb = len(a.terms), len(b.terms)
    if la == lb:
        return Cmp.EQUAL
    return Cmp.LESS if la < lb else Cmp.GREATER


def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if b.is_zero:
        return a
    if a.is_zero:
        return b
    lead_exp, lead_coef = b.terms[0]
    kept = []
    for e, c in a.terms:
        cmp = compare(e, lead_exp)
        if cmp > 0:
            kept.append((e, c))
        elif cmp == 0:
            kept.append((e, c + lead_coef))
            return Ordinal(tuple(kept) + b.terms[1:])
        else:
            break
    return Ordinal(tuple(kept) + b.terms)


def classify(a: Ordinal) -> Classification:
    if a.is_zero:
        return Classification(Kind.ZERO)
    if a.is_successor:
        return Classification(Kind.SUCCESSOR, predecessor(a))
    return Classification(Kind.LIMIT)


def predecessor(a: Ordinal) -> Ordinal:
    if not a.is_successor:
        raise OrdinalError(f"{a} is not a successor")
    head, (e, c) = a.terms[:-1], a.terms[-1]
    return Ordinal(head + (((e, c - 1),) if c > 1 else ()))


def successor(a: Ordinal) -> Ordinal:
    return add(a, ONE)


def last_exponent(a: Ordinal) -> Ordinal:
    if a.is_zero:
        raise OrdinalError("zero has no last exponent")
    return a.terms[-1][0]


def standard_fundamental(a: Ordinal, n: int) -> Ordinal:
    """The n-th member of the standard fundamental sequence of a limit.

    Below ``w^w`` this is ``s(x + w^(m+1), n) = x + w^m * n``; limit exponents
    recurse into the exponent.
    """
    if n < 0:
        raise ValueError("n must be a natural number")
    if not a.is_limit:
        raise NotALimitError(f"{a} is not a limit ordinal")
    *head, (e, c) = a.terms
    base = Ordinal(tuple(head) + (((e, c - 1),) if c > 1 else ()))
    if e.is_successor:
        return add(base, Ordinal.power(predecessor(e), n))
    return add(base, Ordinal.power(standard_fundamental(e, n), 1, max_depth=10**9))


def omega_tower(k: int, max_depth: int = DEFAULT_MAX_DEPTH) -> Ordinal:
    """``w_0 = 1``, ``w_(k+1) = w^(w_k)``."""
    if k < 0:
        raise ValueError("k must be a natural number")
    if k + 1 > max_depth:
        raise DepthCapError(f"omega_tower({k}) has depth {k + 1} > cap {max_depth}")
    result = ONE
    for _ in range(k):
        result = Ordinal(((result, 1),))
    return result


def cofinality_witness(a: Ordinal, b: Ordinal, limit: int = 10**6) -> int:
    """Least n with ``b <= standard_fundamental(a, n)``, for ``b < a``."""
    if not b < a:
        raise OrdinalError(f"{b} is not below {a}")
    for n in range(limit):
        if b <= standard_fundamental(a, n):
            return n
    raise OrdinalError(f"no witness below n={limit}")


# -- text syntax ---------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([wω])|(\S))")


def _tokens(text: str) -> Iterator[str]:
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        pos = m.end()
        if m.group(1):
            yield m.group(1)
        elif m.group(2):
            yield "w"
        else:
            yield m.group(3)


class _Parser:
    def __init__(self, text: str, max_depth: int):
        self.text = text
        self.toks = list(_tokens(text))
        self.i = 0
        self.max_depth = max_depth
        self.nesting = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            want = expected or "a token"
            raise OrdinalSyntaxError(f"expected {want} at token {self.i} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self) -> Ordinal:
        if not self.toks:
            raise OrdinalSyntaxError("empty ordinal expression")
        value = self.sum()
        if self.peek() is not None:
            raise OrdinalSyntaxError(f"unexpected {self.peek()!r} in {self.text!r}")
        return value

    def sum(self) -> Ordinal:
        value = self.term()
        while self.peek() == "+":
            self.take()
            value = add(value, self.term())
        return value

    def term(self) -> Ordinal:
        value = self.atom()
        while self.peek() == "*":
            self.take()
            tok = self.take()
            if not tok.isdigit():
                raise OrdinalSyntaxError(f"coefficient must be a natural, got {tok!r}")
            value = _times_nat(value, int(tok))
        return value

    def atom(self) -> Ordinal:
        tok = self.take()
        if tok.isdigit():
            return Ordinal.of(int(tok))
        if tok == "(":
            value = self.sum()
            self.take(")")
            return value
        if tok == "w":
            if self.peek() != "^":
                return OMEGA
            self.take()
            self.nesting += 1
            if self.nesting >= self.max_depth:
                raise DepthCapError(f"nesting exceeds cap {self.max_depth}")
            exponent = self.atom()
            self.nesting -= 1
            return Ordinal.power(exponent, 1, self.max_depth)
        raise OrdinalSyntaxError(f"unexpected {tok!r} in {self.text!r}")


def _times_nat(a: Ordinal, n: int) -> Ordinal:
    # right multiplication by a natural: (w^e*c + rest) * n = w^e*(c*n) + rest
    if n == 0 or a.is_zero:
        return ZERO
    (e, c), rest = a.terms[0], a.terms[1:]
    return Ordinal(((e, c * n),) + rest)


def parse(text: str, max_depth: int = DEFAULT_MAX_DEPTH) -> Ordinal:
    return _Parser(text, max_depth).parse()


def format_ordinal(a: Ordinal) -> str:
    if a.is_zero:
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero:
            parts.append(str(c))
            continue
        if e == ONE:
            s = "w"
        elif e.is_finite or (len(e.terms) == 1 and e.terms[0][1] == 1):
            s = f"w^{format_ordinal(e)}"
        else:
            s = f"w^({format_ordinal(e)})"
        parts.append(s if c == 1 else f"{s}*{c}")
    return "+".join(parts)


def ordinals_below(top_exponent: int, max_coefficient: int) -> list[Ordinal]:
    """All ``w^(k-1)*c_(k-1) + ... + c_0`` with k = top_exponent, c_i <= max_coefficient, ascending."""
    out = []
    for coeffs in product(range(max_coefficient + 1), repeat=top_exponent):
        value = ZERO
        for power, c in zip(range(top_exponent - 1, -1, -1), coeffs):
            value = add(value, Ordinal.power(power, c))
        out.append(value)
    return out
