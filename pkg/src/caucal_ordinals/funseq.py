"""Fundamental-sequence systems over well-orderings.

A system pairs an :class:`OrderPresentation` (comparison, classification,
minimum) with a sequence function ``s(x, n)`` defined on limit points.  The
module provides path codes and their resolution, the greedy least-measure
path search, brute-force path enumeration, the step-down chain, and checkers
for the Bachmann property and Schmidt coherence.
"""

from __future__ import annotations

import heapq
import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from . import ordinal as O
from .ordinal import Classification, Kind, Ordinal

DEFAULT_STEP_CAP = 10**6


class FunSeqError(ValueError):
    pass


class InvalidPathError(FunSeqError):
    def __init__(self, index: int, message: str):
        super().__init__(f"path entry {index}: {message}")
        self.index = index


class StepLimitError(FunSeqError):
    pass


class TargetNotBelowError(FunSeqError):
    pass


class UndefinedEntryError(FunSeqError):
    pass


class OrderPresentation(ABC):
    """A strict well-ordering presented by comparison and classification."""

    @abstractmethod
    def compare(self, a, b) -> int: ...

    @abstractmethod
    def classify(self, a) -> Classification: ...

    @property
    @abstractmethod
    def minimum(self): ...

    def validate(self, a) -> None:
        """Raise ``ValueError`` if ``a`` is not an element of the ordering."""

    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        raise NotImplementedError

    def less(self, a, b) -> bool:
        return self.compare(a, b) < 0

    def is_limit(self, a) -> bool:
        return self.classify(a).kind is Kind.LIMIT


class OrdinalOrder(OrderPresentation):
    def compare(self, a, b):
        return int(O.compare(a, b))

    def classify(self, a):
        return O.classify(a)

    @property
    def minimum(self):
        return O.ZERO

    def validate(self, a):
        if not isinstance(a, Ordinal):
            raise TypeError(f"{a!r} is not an Ordinal")

    def parse(self, text):
        return O.parse(text)


ORDINALS = OrdinalOrder()


class FunSeqSystem(ABC):
    """Assignment ``s(x, n)`` of strictly increasing sequences to limit points."""

    order: OrderPresentation

    @abstractmethod
    def fundamental(self, x, n: int): ...

    def __call__(self, x, n):
        return self.fundamental(x, n)


class StandardSystem(FunSeqSystem):
    """``s(a + w^(m+1), n) = a + w^m * n``, extended by the Wainer rules."""

    name = "st"

    def __init__(self):
        self.order = ORDINALS

    def fundamental(self, x, n):
        return O.standard_fundamental(x, n)


class ShiftedSystem(FunSeqSystem):
    """``s'(a + w^(m+1), n) = a + w^m * (n+1)``; limit exponents recurse."""

    name = "shifted"

    def __init__(self):
        self.order = ORDINALS

    def fundamental(self, x, n):
        if not x.is_limit:
            raise O.NotALimitError(f"{x} is not a limit ordinal")
        *head, (e, c) = x.terms
        base = Ordinal(tuple(head) + (((e, c - 1),) if c > 1 else ()))
        if e.is_successor:
            return O.add(base, Ordinal.power(O.predecessor(e), n + 1))
        return O.add(base, Ordinal.power(self.fundamental(e, n), 1, max_depth=10**9))


class TableSystem(FunSeqSystem):
    """Explicit ``(x, n) -> s(x, n)`` entries overriding an optional fallback."""

    def __init__(self, entries: dict, fallback: FunSeqSystem | None = None,
                 order: OrderPresentation | None = None):
        self.entries = dict(entries)
        self.fallback = fallback
        self.order = order or (fallback.order if fallback else ORDINALS)

    def fundamental(self, x, n):
        try:
            return self.entries[(x, n)]
        except KeyError:
            if self.fallback is None:
                raise UndefinedEntryError(f"s({self.order.format(x)}, {n}) is not tabulated") from None
            return self.fallback.fundamental(x, n)

    @classmethod
    def from_text(cls, text: str, fallback: FunSeqSystem | None = None,
                  order: OrderPresentation = ORDINALS) -> "TableSystem":
        """Parse lines ``x ; n ; s(x,n)``; ``#`` starts a comment."""
        entries = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(";")]
            if len(parts) != 3:
                raise FunSeqError(f"line {lineno}: expected 'x ; n ; s(x,n)'")
            x, n, value = order.parse(parts[0]), int(parts[1]), order.parse(parts[2])
            entries[(x, n)] = value
        return cls(entries, fallback=fallback, order=order)


class FunctionSystem(FunSeqSystem):
    def __init__(self, order: OrderPresentation, fn: Callable):
        self.order = order
        self._fn = fn

    def fundamental(self, x, n):
        return self._fn(x, n)


def bachmann_counterexample() -> TableSystem:
    """``s(w^2, n) = w*(n+1)`` but ``s(w*2, 0) = 0``: fails the Bachmann property at x = w^2, n = 0, y = w*2."""
    return TableSystem({(O.parse("w*2"), 0): O.ZERO}, fallback=ShiftedSystem())


SYSTEMS = {"st": StandardSystem, "shifted": ShiftedSystem, "counterexample": bachmann_counterexample}


def system_by_name(name: str) -> FunSeqSystem:
    try:
        return SYSTEMS[name]()
    except KeyError:
        raise FunSeqError(f"unknown system {name!r}; choose from {sorted(SYSTEMS)}") from None


# -- path codes ----------------------------------------------------------------


def path_measure(p: Sequence[int]) -> int:
    return sum(p) + len(p)


def _step(sys: FunSeqSystem, x, entry: int, index: int):
    kind = sys.order.classify(x)
    if kind.kind is Kind.ZERO:
        raise InvalidPathError(index, "no step is possible from the minimum")
    if kind.kind is Kind.SUCCESSOR:
        if entry != 0:
            raise InvalidPathError(index, f"entry {entry} at a successor (only 0 allowed)")
        return kind.predecessor
    if entry < 1:
        raise InvalidPathError(index, f"entry {entry} at a limit point (must be >= 1)")
    return sys.fundamental(x, entry - 1)


def resolve_path(sys: FunSeqSystem, a, p: Iterable[int]):
    x = a
    for i, entry in enumerate(p):
        x = _step(sys, x, entry, i)
    return x


def path_points(sys: FunSeqSystem, a, p: Iterable[int]) -> list:
    """All endpoints along the path, starting with ``a``."""
    points = [a]
    for i, entry in enumerate(p):
        points.append(_step(sys, points[-1], entry, i))
    return points


def greedy_min_path(sys: FunSeqSystem, a, b, step_cap: int = DEFAULT_STEP_CAP) -> tuple[int, ...]:
    """Least-measure path code from ``a`` down to ``b``.

    Each step takes the least entry whose endpoint is still ``>= b``.  The
    result is minimal when the system has the Bachmann property.
    """
    order = sys.order
    if not order.less(b, a):
        raise TargetNotBelowError(f"{order.format(b)} is not below {order.format(a)}")
    path = []
    x = a
    steps = 0
    while order.compare(x, b) != 0:
        kind = order.classify(x)
        if kind.kind is Kind.SUCCESSOR:
            path.append(0)
            x = kind.predecessor
            steps += 1
        else:
            m = 1
            while True:
                steps += 1
                if steps > step_cap:
                    raise StepLimitError(f"greedy search exceeded {step_cap} steps")
                y = sys.fundamental(x, m - 1)
                if not order.less(y, b):
                    break
                m += 1
            path.append(m)
            x = y
        if steps > step_cap:
            raise StepLimitError(f"greedy search exceeded {step_cap} steps")
    return tuple(path)


def iter_paths(sys: FunSeqSystem, a, b, measure_cap: int) -> Iterator[tuple[int, ...]]:
    """Every valid path from ``a`` ending at ``b`` with measure <= cap, by increasing measure.

    Uniform-cost search over the tree of path codes, pruning endpoints below
    ``b`` (paths strictly descend, so they can never come back up).
    """
    order = sys.order
    if not order.less(b, a):
        return
    tie = itertools.count()
    # heap items: (measure, tiebreak, path, endpoint, sibling_parent)
    heap = [(0, next(tie), (), a, None)]
    while heap:
        measure, _, path, x, parent = heapq.heappop(heap)
        if parent is not None:
            # lazily schedule the next sibling of a limit step: same prefix, entry + 1
            px = parent
            entry = path[-1] + 1
            if measure + 1 <= measure_cap:
                y = sys.fundamental(px, entry - 1)
                if not order.less(y, b):
                    heapq.heappush(heap, (measure + 1, next(tie), path[:-1] + (entry,), y, px))
        if order.compare(x, b) == 0:
            yield path
            continue
        kind = order.classify(x)
        if kind.kind is Kind.SUCCESSOR:
            y = kind.predecessor
            if measure + 1 <= measure_cap and not order.less(y, b):
                heapq.heappush(heap, (measure + 1, next(tie), path + (0,), y, None))
        elif kind.kind is Kind.LIMIT and measure + 2 <= measure_cap:
            # entries m whose endpoint is below b are skipped; monotonicity means
            # the first admissible m is found by scanning upward.
            m = 1
            while measure + m + 1 <= measure_cap:
                y = sys.fundamental(x, m - 1)
                if not order.less(y, b):
                    heapq.heappush(heap, (measure + m + 1, next(tie), path + (m,), y, x))
                    break
                m += 1


def enumerate_paths(sys: FunSeqSystem, a, b, measure_cap: int) -> list[tuple[int, ...]]:
    return list(iter_paths(sys, a, b, measure_cap))


def min_path_measure(sys: FunSeqSystem, a, b, measure_cap: int) -> int | None:
    """Measure of the first path produced by :func:`iter_paths`, or ``None``."""
    for p in iter_paths(sys, a, b, measure_cap):
        return path_measure(p)
    return None


def step_down(sys: FunSeqSystem, x):
    """The unique step-down image of ``x`` (``None`` at the minimum)."""
    kind = sys.order.classify(x)
    if kind.kind is Kind.ZERO:
        return None
    if kind.kind is Kind.SUCCESSOR:
        return kind.predecessor
    return sys.fundamental(x, 0)


def step_down_chain(sys: FunSeqSystem, a, step_cap: int = DEFAULT_STEP_CAP) -> Iterator:
    x = a
    for _ in range(step_cap + 1):
        yield x
        x = step_down(sys, x)
        if x is None:
            return
    raise StepLimitError(f"step-down chain from {sys.order.format(a)} exceeded {step_cap} steps")


def step_down_reachable(sys: FunSeqSystem, low, high, step_cap: int = DEFAULT_STEP_CAP) -> bool:
    """Whether ``low`` lies on the step-down chain strictly below ``high``."""
    order = sys.order
    chain = step_down_chain(sys, high, step_cap)
    next(chain)
    for x in chain:
        c = order.compare(x, low)
        if c == 0:
            return True
        if c < 0:
            return False
    return False


# -- property checkers ---------------------------------------------------------


@dataclass
class CheckReport:
    property: str
    checked: int = 0
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self, fmt: Callable = str) -> dict:
        return {
            "property": self.property,
            "checked": self.checked,
            "ok": self.ok,
            "violations": [{k: (v if isinstance(v, int) else fmt(v)) for k, v in w.items()}
                           for w in self.violations],
        }


def check_bachmann(sys: FunSeqSystem, limit_sample: Iterable, n_cap: int) -> CheckReport:
    """For sampled limits x, y and n <= n_cap: s(x,n) < y <= s(x,n+1) implies s(x,n) <= s(y,0)."""
    order = sys.order
    sample = list(limit_sample)
    report = CheckReport("bachmann")
    first = {y: sys.fundamental(y, 0) for y in sample}
    for x in sample:
        seq = [sys.fundamental(x, n) for n in range(n_cap + 2)]
        for n in range(n_cap + 1):
            lo, hi = seq[n], seq[n + 1]
            for y in sample:
                if order.less(lo, y) and not order.less(hi, y):
                    report.checked += 1
                    if order.less(first[y], lo):
                        report.violations.append({"x": x, "n": n, "y": y, "s_x_n": lo, "s_y_0": first[y]})
    return report


def check_schmidt_coherent(sys: FunSeqSystem, limit_sample: Iterable, n_cap: int,
                           step_cap: int = DEFAULT_STEP_CAP) -> CheckReport:
    report = CheckReport("schmidt")
    for x in limit_sample:
        seq = [sys.fundamental(x, n) for n in range(n_cap + 2)]
        for n in range(n_cap + 1):
            report.checked += 1
            if not step_down_reachable(sys, seq[n], seq[n + 1], step_cap):
                report.violations.append({"x": x, "n": n, "s_x_n": seq[n], "s_x_n1": seq[n + 1]})
    return report


def check_monotone(sys: FunSeqSystem, limit_sample: Iterable, n_cap: int) -> CheckReport:
    """s(x, n) < s(x, n+1) < x for the sampled limits."""
    order = sys.order
    report = CheckReport("monotone")
    for x in limit_sample:
        prev = None
        for n in range(n_cap + 1):
            y = sys.fundamental(x, n)
            report.checked += 1
            if not order.less(y, x) or (prev is not None and not order.less(prev, y)):
                report.violations.append({"x": x, "n": n, "value": y})
            prev = y
    return report


def limits_in(order: OrderPresentation, elements: Iterable) -> list:
    return [x for x in elements if order.is_limit(x)]
