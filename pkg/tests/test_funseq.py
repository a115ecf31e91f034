import pytest
from hypothesis import assume, given, settings, strategies as st

from caucal_ordinals import funseq as F
from caucal_ordinals import ordinal as O
from caucal_ordinals.ordinal import OMEGA, ZERO, Ordinal, parse

from conftest import finite_exponent_ordinals

ST = F.StandardSystem()
SHIFTED = F.ShiftedSystem()


def w(text):
    return parse(text)


def n(k):
    return Ordinal.of(k)


class TestPaths:
    def test_resolve(self):
        assert F.resolve_path(ST, OMEGA, ()) == OMEGA
        assert F.resolve_path(ST, OMEGA, (3,)) == n(2)

    def test_resolve_rejects_zero_entry_at_limit(self):
        with pytest.raises(F.InvalidPathError) as info:
            F.resolve_path(ST, w("w^2"), (2, 0))
        assert info.value.index == 1

    def test_resolve_rejects_positive_entry_at_successor(self):
        with pytest.raises(F.InvalidPathError):
            F.resolve_path(ST, n(3), (1,))

    def test_measure(self):
        assert F.path_measure(()) == 0
        assert F.path_measure((3,)) == 4
        assert F.path_measure((2, 0, 1)) == 6

    def test_greedy(self):
        assert F.greedy_min_path(ST, OMEGA, n(2)) == (3,)
        assert F.greedy_min_path(ST, w("w^2"), OMEGA) == (2,)
        assert F.greedy_min_path(ST, n(5), n(4)) == (0,)

    def test_greedy_needs_target_below(self):
        with pytest.raises(F.TargetNotBelowError):
            F.greedy_min_path(ST, OMEGA, OMEGA)

    def test_greedy_step_cap(self):
        with pytest.raises(F.StepLimitError):
            F.greedy_min_path(ST, OMEGA, n(500), step_cap=100)

    def test_enumerate(self):
        assert F.enumerate_paths(ST, OMEGA, n(2), 4) == [(3,)]
        assert F.enumerate_paths(ST, n(3), n(2), 10) == [(0,)]
        assert F.enumerate_paths(ST, OMEGA, OMEGA, 5) == []

    def test_enumerate_is_by_measure_and_lists_alternatives(self):
        paths = F.enumerate_paths(ST, OMEGA, n(2), 6)
        assert paths[0] == (3,)
        assert (4, 0) in paths
        measures = [F.path_measure(p) for p in paths]
        assert measures == sorted(measures)
        assert all(F.resolve_path(ST, OMEGA, p) == n(2) for p in paths)

    @settings(max_examples=60)
    @given(finite_exponent_ordinals(3, 3), finite_exponent_ordinals(3, 3))
    def test_greedy_is_minimal(self, a, b):
        assume(b < a)
        greedy = F.greedy_min_path(ST, a, b)
        assert F.resolve_path(ST, a, greedy) == b
        assert F.min_path_measure(ST, a, b, F.path_measure(greedy)) == F.path_measure(greedy)

    @given(finite_exponent_ordinals(3, 3), st.lists(st.integers(0, 4), max_size=6))
    def test_concatenation_and_strict_descent(self, a, raw):
        # make the raw entries valid by adjusting 0 / positive per the point's kind
        p, x = [], a
        for entry in raw:
            if x.is_zero:
                break
            e = 0 if x.is_successor else max(entry, 1)
            p.append(e)
            x = F.resolve_path(ST, x, (e,))
        points = F.path_points(ST, a, p)
        assert all(u > v for u, v in zip(points, points[1:]))
        for cut in range(len(p) + 1):
            mid = F.resolve_path(ST, a, p[:cut])
            assert F.resolve_path(ST, mid, p[cut:]) == points[-1]


class TestStepDown:
    def test_chains(self):
        assert list(F.step_down_chain(ST, w("w^2"))) == [w("w^2"), ZERO]
        assert list(F.step_down_chain(ST, n(3))) == [n(3), n(2), n(1), ZERO]
        assert list(F.step_down_chain(ST, w("w+1"))) == [w("w+1"), OMEGA, ZERO]

    def test_chain_cap(self):
        with pytest.raises(F.StepLimitError):
            list(F.step_down_chain(ST, n(50), step_cap=10))

    @given(finite_exponent_ordinals(4, 5))
    def test_chain_strictly_decreasing_to_zero(self, a):
        chain = list(F.step_down_chain(ST, a))
        assert chain[-1] == ZERO
        assert all(u > v for u, v in zip(chain, chain[1:]))

    def test_reachable(self):
        assert F.step_down_reachable(ST, OMEGA, w("w+2"))
        assert not F.step_down_reachable(ST, n(1), w("w+2"))


class TestChecks:
    def test_bachmann_examples(self):
        assert F.check_bachmann(ST, [w("w^2"), w("w*2")], 3).ok
        assert F.check_bachmann(ST, [], 5).ok
        report = F.check_bachmann(F.bachmann_counterexample(), [w("w^2"), w("w*2")], 3)
        assert not report.ok
        v = report.violations[0]
        assert (v["x"], v["n"], v["y"]) == (w("w^2"), 0, w("w*2"))

    def test_bachmann_standard_below_w4(self):
        sample = [x for x in O.ordinals_below(4, 5) if x.is_limit]
        assert F.check_bachmann(ST, sample, 6).ok

    def test_shifted_is_bachmann(self):
        sample = [x for x in O.ordinals_below(3, 3) if x.is_limit]
        assert F.check_bachmann(SHIFTED, sample, 5).ok

    def test_above_w_to_w_the_completion_is_not_bachmann(self):
        # s(w^w, 1) = w < w^2 <= w^2 = s(w^w, 2), yet s(w^2, 0) = 0
        report = F.check_bachmann(ST, [w("w^w"), w("w^2")], 2)
        assert not report.ok

    def test_schmidt(self):
        assert F.check_schmidt_coherent(ST, [OMEGA], 4).ok
        assert F.check_schmidt_coherent(ST, [w("w^2")], 3).ok
        assert F.check_schmidt_coherent(ST, [], 1).ok

    def test_monotone(self):
        sample = [x for x in O.ordinals_below(3, 3) if x.is_limit]
        assert F.check_monotone(ST, sample, 6).ok
        bad = F.TableSystem({(OMEGA, 1): ZERO}, fallback=ST)
        assert not F.check_monotone(bad, [OMEGA], 3).ok

    def test_report_json(self):
        report = F.check_bachmann(F.bachmann_counterexample(), [w("w^2"), w("w*2")], 1)
        data = report.to_json(O.format_ordinal)
        assert data["ok"] is False
        assert data["violations"][0]["y"] == "w*2"


class TestSystems:
    def test_shifted(self):
        assert SHIFTED(w("w^2"), 0) == OMEGA
        assert SHIFTED(OMEGA, 4) == n(5)
        assert SHIFTED(w("w^w"), 1) == w("w^2")

    def test_table_from_text(self):
        sys_ = F.TableSystem.from_text("w ; 0 ; 5  # override\n\nw^2 ; 1 ; w+7\n", fallback=ST)
        assert sys_(OMEGA, 0) == n(5)
        assert sys_(w("w^2"), 1) == w("w+7")
        assert sys_(OMEGA, 3) == n(3)

    def test_table_without_fallback(self):
        sys_ = F.TableSystem({(OMEGA, 0): ZERO})
        with pytest.raises(F.UndefinedEntryError):
            sys_(OMEGA, 1)

    def test_table_syntax_error(self):
        with pytest.raises(F.FunSeqError):
            F.TableSystem.from_text("w ; 0")

    def test_system_by_name(self):
        assert isinstance(F.system_by_name("st"), F.StandardSystem)
        with pytest.raises(F.FunSeqError):
            F.system_by_name("nope")
