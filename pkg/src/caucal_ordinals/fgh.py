"""Budget-capped fast-growing hierarchy evaluation.

``F_0(x) = x+1``, ``F_(b+1)(x)`` is the x-fold iterate of ``F_b`` applied to
``x``, and ``F_l(x) = F_(s(l,x))(x)`` at limits.  Evaluation uses an explicit
stack so deep index descents never hit the interpreter recursion limit.

Every intermediate value of an evaluation is at most its final value
(``F_b(y) >= y`` for all b, y), so when the bit cap is hit the outcome records a
proven lower bound ``value >= 2**max_result_bits``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterable

from .funseq import FunSeqSystem, TargetNotBelowError, greedy_min_path, path_measure
from .ordinal import Kind

DEFAULT_MAX_STEPS = 10**6
DEFAULT_MAX_BITS = 2**20


class BethOverflowError(OverflowError):
    pass


@dataclass(frozen=True)
class EvalBudget:
    max_recursion_steps: int = DEFAULT_MAX_STEPS
    max_result_bits: int = DEFAULT_MAX_BITS

    def __post_init__(self):
        if self.max_recursion_steps <= 0 or self.max_result_bits <= 0:
            raise ValueError("budget limits must be positive")


@dataclass(frozen=True)
class EvalOutcome:
    value: int | None
    steps: int
    reason: str | None = None  # "steps" or "bits" when the budget ran out
    max_result_bits: int = DEFAULT_MAX_BITS

    @property
    def exact(self) -> bool:
        return self.value is not None

    @property
    def exceeds_bits(self) -> bool:
        """True when the value is known to be at least ``2**max_result_bits``."""
        return self.reason == "bits"

    def __str__(self):
        if self.exact:
            return str(self.value)
        return f"<budget exceeded: {self.reason} after {self.steps} steps>"

    def to_json(self):
        if self.exact:
            return {"exact": True, "value": str(self.value), "steps": self.steps}
        return {"exact": False, "reason": self.reason, "steps": self.steps}


class _OutOfBudget(Exception):
    def __init__(self, reason):
        self.reason = reason


class _Evaluator:
    def __init__(self, sys: FunSeqSystem, budget: EvalBudget):
        self.sys = sys
        self.order = sys.order
        self.budget = budget
        self.steps = 0
        self.memo: dict = {}
        self.minimum = self.order.minimum

    def tick(self, n=1):
        self.steps += n
        if self.steps > self.budget.max_recursion_steps:
            raise _OutOfBudget("steps")

    def checked(self, value: int) -> int:
        if value.bit_length() > self.budget.max_result_bits:
            raise _OutOfBudget("bits")
        return value

    def _is_min(self, b) -> bool:
        return self.order.compare(b, self.minimum) == 0

    def _is_one(self, b) -> bool:
        kind = self.order.classify(b)
        return kind.kind is Kind.SUCCESSOR and self._is_min(kind.predecessor)

    def run(self, a, x: int) -> int:
        # frame: [b, remaining iterations, keys waiting for this frame's result]
        stack: list[list] = []
        pending: list = []
        while True:
            value = None
            while value is None:
                self.tick()
                key = (a, x)
                if key in self.memo:
                    value = self.memo[key]
                    break
                pending.append(key)
                kind = self.order.classify(a)
                if kind.kind is Kind.ZERO:
                    value = self.checked(x + 1)
                elif kind.kind is Kind.LIMIT:
                    a = self.sys.fundamental(a, x)
                elif x == 0:
                    value = 0
                else:
                    b = kind.predecessor
                    if self._is_min(b):
                        # x-fold iterate of y -> y+1
                        value = self.checked(x + x)
                    elif self._is_one(b):
                        # x-fold iterate of y -> 2y
                        if x.bit_length() + x > self.budget.max_result_bits:
                            raise _OutOfBudget("bits")
                        value = x << x
                    else:
                        stack.append([b, x, pending])
                        pending = []
                        a = b
            for key in pending:
                self.memo[key] = value
            pending = []
            while stack:
                frame = stack[-1]
                frame[1] -= 1
                if frame[1] == 0:
                    stack.pop()
                    for key in frame[2]:
                        self.memo[key] = value
                    continue
                a, x = frame[0], value
                break
            else:
                return value


def fgh_eval(sys: FunSeqSystem, a, x: int, budget: EvalBudget | None = None) -> EvalOutcome:
    budget = budget or EvalBudget()
    if x < 0:
        raise ValueError("x must be a natural number")
    sys.order.validate(a)
    ev = _Evaluator(sys, budget)
    try:
        value = ev.run(a, x)
    except _OutOfBudget as exc:
        return EvalOutcome(None, ev.steps, exc.reason, budget.max_result_bits)
    return EvalOutcome(value, ev.steps, None, budget.max_result_bits)


def beth(n: int, x: int, max_bits: int = DEFAULT_MAX_BITS) -> int:
    """Iterated exponential: ``beth(0, x) = x``, ``beth(n+1, x) = 2**beth(n, x)``."""
    if n < 0 or x < 0:
        raise ValueError("arguments must be natural numbers")
    value = x
    if value.bit_length() > max_bits:
        raise BethOverflowError(f"beth({n}, {x}) exceeds {max_bits} bits")
    for _ in range(n):
        if value + 1 > max_bits:
            raise BethOverflowError(f"beth({n}, {x}) exceeds {max_bits} bits")
        value = 1 << value
    return value


# -- comparisons ---------------------------------------------------------------

GREATER = "greater"
NOT_GREATER = "not-greater"
INCONCLUSIVE = "inconclusive"


def compare_outcomes(lhs: EvalOutcome, rhs: EvalOutcome, strict: bool = True) -> str:
    """Three-valued ``lhs > rhs`` (or ``>=`` when not strict).

    Both outcomes must come from the same budget for the bit-cap bounds to be
    comparable.
    """
    if lhs.exact and rhs.exact:
        holds = lhs.value > rhs.value if strict else lhs.value >= rhs.value
        return GREATER if holds else NOT_GREATER
    if lhs.exceeds_bits and rhs.exact:
        return GREATER
    if rhs.exceeds_bits and lhs.exact:
        return NOT_GREATER
    return INCONCLUSIVE


@dataclass
class DominationRow:
    x: int
    lhs: EvalOutcome
    rhs: EvalOutcome
    verdict: str


@dataclass
class DominationTable:
    a: object
    b: object
    rows: list[DominationRow] = field(default_factory=list)

    @property
    def crossover(self):
        """Least sampled x from which no later sample is a counter-verdict.

        ``None`` when the last decided sample is not a domination.
        """
        result = None
        for row in reversed(self.rows):
            if row.verdict == NOT_GREATER:
                break
            if row.verdict == GREATER:
                result = row.x
        return result

    def counter_verdicts(self, from_x: int) -> list[DominationRow]:
        return [r for r in self.rows if r.x >= from_x and r.verdict == NOT_GREATER]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "lhs", "rhs", "verdict"])
        for r in self.rows:
            writer.writerow([r.x, str(r.lhs), str(r.rhs), r.verdict])
        return buf.getvalue()

    def to_json(self, fmt=str) -> dict:
        return {
            "a": fmt(self.a),
            "b": fmt(self.b),
            "crossover": self.crossover,
            "rows": [{"x": r.x, "lhs": r.lhs.to_json(), "rhs": r.rhs.to_json(), "verdict": r.verdict}
                     for r in self.rows],
        }


def domination_experiment(sys1: FunSeqSystem, sys2: FunSeqSystem, a, b, x_values: Iterable[int],
                          budget: EvalBudget | None = None) -> DominationTable:
    """Compare ``F^sys2_b(x)`` (lhs) against ``F^sys1_a(x)`` (rhs) for ``a < b``."""
    order = sys1.order
    if not order.less(a, b):
        raise TargetNotBelowError(f"{order.format(a)} is not below {order.format(b)}")
    budget = budget or EvalBudget()
    table = DominationTable(a, b)
    for x in sorted(set(x_values)):
        lhs = fgh_eval(sys2, b, x, budget)
        rhs = fgh_eval(sys1, a, x, budget)
        table.rows.append(DominationRow(x, lhs, rhs, compare_outcomes(lhs, rhs, strict=True)))
    return table


@dataclass
class CoherentDomReport:
    path: tuple[int, ...]
    rows: list[DominationRow] = field(default_factory=list)
    skipped: list[int] = field(default_factory=list)

    @property
    def measure(self) -> int:
        return path_measure(self.path)

    @property
    def violations(self) -> list[DominationRow]:
        return [r for r in self.rows if r.verdict == NOT_GREATER]

    @property
    def inconclusive(self) -> list[DominationRow]:
        return [r for r in self.rows if r.verdict == INCONCLUSIVE]

    @property
    def holds(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "path": list(self.path),
            "measure": self.measure,
            "holds": self.holds,
            "skipped": self.skipped,
            "rows": [{"x": r.x, "lhs": r.lhs.to_json(), "rhs": r.rhs.to_json(), "verdict": r.verdict}
                     for r in self.rows],
        }


def check_coherent_dom(sys: FunSeqSystem, a, b, x_values: Iterable[int],
                       budget: EvalBudget | None = None) -> CoherentDomReport:
    """For ``b < a`` and the greedy path p from a to b: ``F_a(x) >= F_b(x)`` whenever ``x >= |p|``."""
    budget = budget or EvalBudget()
    p = greedy_min_path(sys, a, b)
    report = CoherentDomReport(p)
    bound = path_measure(p)
    for x in sorted(set(x_values)):
        if x < bound:
            report.skipped.append(x)
            continue
        lhs = fgh_eval(sys, a, x, budget)
        rhs = fgh_eval(sys, b, x, budget)
        # ">=" holds, "not-greater" here means a genuine violation F_a(x) < F_b(x)
        report.rows.append(DominationRow(x, lhs, rhs, compare_outcomes(lhs, rhs, strict=False)))
    return report
