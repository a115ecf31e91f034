import pytest
from hypothesis import assume, given, settings, strategies as st

from caucal_ordinals import fgh as G
from caucal_ordinals.funseq import ShiftedSystem, StandardSystem, TableSystem
from caucal_ordinals.ordinal import OMEGA, ZERO, Kind, Ordinal, parse

from conftest import finite_exponent_ordinals

ST = StandardSystem()


def naive_fgh(sys, a, x):
    """Plain recursive reference evaluator for tiny inputs."""
    kind = sys.order.classify(a)
    if kind.kind is Kind.ZERO:
        return x + 1
    if kind.kind is Kind.LIMIT:
        return naive_fgh(sys, sys.fundamental(a, x), x)
    y = x
    for _ in range(x):
        y = naive_fgh(sys, kind.predecessor, y)
    return y


def value(a, x, sys=ST, **kw):
    out = G.fgh_eval(sys, parse(a) if isinstance(a, str) else a, x, G.EvalBudget(**kw) if kw else None)
    assert out.exact, out
    return out.value


class TestEval:
    def test_examples(self):
        assert value(ZERO, 5) == 6
        assert value(Ordinal.of(1), 3) == 6
        assert value(OMEGA, 2) == 8

    @pytest.mark.parametrize("a, xs", [
        ("0", range(8)), ("1", range(8)), ("2", range(8)),
        ("3", range(3)), ("w", range(3)), ("w+1", range(2)), ("w^2", range(2)),
    ])
    def test_matches_naive(self, a, xs):
        for x in xs:
            assert value(a, x) == naive_fgh(ST, parse(a), x)

    def test_closed_forms(self):
        for x in range(17):
            assert value("1", x) == 2 * x
            assert value("2", x) == (2 ** x) * x

    def test_deep_descent_does_not_recurse(self):
        # F_(w^3)(1) walks a long chain of limits without exhausting the stack
        assert value("w^3", 1) == 2

    def test_budget_steps(self):
        out = G.fgh_eval(ST, parse("w^2"), 2, G.EvalBudget(max_recursion_steps=5))
        assert not out.exact and out.reason == "steps"

    def test_budget_bits(self):
        out = G.fgh_eval(ST, parse("3"), 3, G.EvalBudget(max_result_bits=64))
        assert not out.exact and out.exceeds_bits

    def test_negative_x(self):
        with pytest.raises(ValueError):
            G.fgh_eval(ST, ZERO, -1)

    def test_budget_must_be_positive(self):
        with pytest.raises(ValueError):
            G.EvalBudget(max_recursion_steps=0)

    @settings(max_examples=40)
    @given(finite_exponent_ordinals(2, 2), st.integers(1, 3))
    def test_successor_and_limit_rules(self, a, x):
        budget = G.EvalBudget(max_recursion_steps=10**5, max_result_bits=4096)
        out = G.fgh_eval(ST, a, x, budget)
        assume(out.exact)
        if a.is_limit:
            assert G.fgh_eval(ST, ST(a, x), x, budget).value == out.value
        elif a.is_successor:
            y = x
            for _ in range(x):
                step = G.fgh_eval(ST, ST.order.classify(a).predecessor, y, budget)
                assume(step.exact)
                y = step.value
            assert y == out.value

    @settings(max_examples=40)
    @given(st.integers(0, 2), st.integers(1, 7))
    def test_monotone_in_argument(self, k, x):
        assert value(Ordinal.of(k), x) < value(Ordinal.of(k), x + 1)


class TestBeth:
    def test_examples(self):
        assert G.beth(0, 7) == 7
        assert G.beth(1, 10) == 1024
        assert G.beth(2, 3) == 256

    def test_overflow(self):
        with pytest.raises(G.BethOverflowError):
            G.beth(3, 5, max_bits=1000)

    def test_negative(self):
        with pytest.raises(ValueError):
            G.beth(-1, 2)


class TestComparisons:
    def test_three_valued(self):
        exact = lambda v: G.EvalOutcome(v, 1)
        big = G.EvalOutcome(None, 1, "bits")
        slow = G.EvalOutcome(None, 1, "steps")
        assert G.compare_outcomes(exact(3), exact(2)) == G.GREATER
        assert G.compare_outcomes(exact(2), exact(2)) == G.NOT_GREATER
        assert G.compare_outcomes(exact(2), exact(2), strict=False) == G.GREATER
        assert G.compare_outcomes(big, exact(2)) == G.GREATER
        assert G.compare_outcomes(exact(2), big) == G.NOT_GREATER
        assert G.compare_outcomes(slow, exact(2)) == G.INCONCLUSIVE
        assert G.compare_outcomes(big, big) == G.INCONCLUSIVE

    def test_domination_finite(self):
        table = G.domination_experiment(ST, ST, Ordinal.of(1), Ordinal.of(2), range(1, 7))
        assert table.crossover == 2
        assert [r.verdict for r in table.rows][0] == G.NOT_GREATER
        assert not table.counter_verdicts(2)

    def test_domination_shifted(self):
        table = G.domination_experiment(ST, ShiftedSystem(), OMEGA, parse("w*2"), range(1, 6))
        # x = 1 is a tie (both sides equal 2); from x = 2 the shifted side wins
        first = table.rows[0]
        assert (first.lhs.value, first.rhs.value) == (2, 2)
        assert not table.counter_verdicts(2)
        assert table.rows[1].verdict == G.GREATER
        assert table.crossover == 2

    def test_domination_requires_order(self):
        with pytest.raises(ValueError):
            G.domination_experiment(ST, ST, Ordinal.of(2), Ordinal.of(1), [1])

    def test_csv_and_json(self):
        table = G.domination_experiment(ST, ST, Ordinal.of(1), Ordinal.of(2), [1, 2])
        assert table.to_csv().splitlines()[0] == "x,lhs,rhs,verdict"
        assert table.to_json()["rows"][1]["lhs"]["value"] == "8"


class TestCoherent:
    def test_examples(self):
        report = G.check_coherent_dom(ST, OMEGA, Ordinal.of(3), [4, 5, 6])
        assert report.path == (4,) and report.measure == 5
        assert report.skipped == [4]
        assert report.holds and not report.violations
        report = G.check_coherent_dom(ST, OMEGA, Ordinal.of(1), [2, 3])
        assert report.path == (2,) and report.holds and not report.inconclusive
        report = G.check_coherent_dom(ST, Ordinal.of(1), ZERO, [1])
        assert report.holds and report.rows[0].lhs.value == 2

    def test_violation_is_reported(self):
        # a crooked table makes F_w(x) tiny at x = 5
        crooked = TableSystem({(OMEGA, 5): ZERO}, fallback=ST)
        report = G.check_coherent_dom(crooked, OMEGA, Ordinal.of(2), [5])
        assert not report.holds
        assert report.to_json()["holds"] is False
