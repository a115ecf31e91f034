import json

import pydot
import pytest
from hypothesis import given, settings, strategies as st

from caucal_ordinals import graph as G
from caucal_ordinals import regex as R
from caucal_ordinals.lextree import LexTree, lex_compare
from caucal_ordinals.ordinal import Cmp


def chain():
    return G.FiniteGraph({"a"}, ["u", "v", "w"], [("u", "a", "v"), ("v", "a", "w")])


@st.composite
def small_graphs(draw, max_vertices=4, colors=("a", "b")):
    n = draw(st.integers(1, max_vertices))
    vs = list(range(n))
    edges = draw(st.lists(st.tuples(st.sampled_from(vs), st.sampled_from(colors), st.sampled_from(vs)),
                          max_size=6))
    return G.FiniteGraph(colors, vs, edges)


REGEXES = ["a", "b", "a-", "ab", "a|b", "a*", "(ab-)*", "a+b?", "(a|b-)(a|b)*", "ε", "b-b"]


class TestRegex:
    def test_colors(self):
        assert R.parse_color("a-") == R.Inverse("a")
        assert R.parse_color("a⁻") == R.Inverse("a")
        assert R.inverse(R.inverse("c")) == "c"
        assert str(R.Inverse("b")) == "b-"

    @pytest.mark.parametrize("text, yes, no", [
        ("ab*", [("a",), ("a", "b", "b")], [(), ("b",)]),
        ("a|b-", [("a",), (R.Inverse("b"),)], [("b",)]),
        ("ε", [()], [("a",)]),
        ("<edge>+", [("edge",), ("edge", "edge")], [()]),
        ("(b-)*a", [("a",), (R.Inverse("b"), "a")], [(R.Inverse("b"),)]),
        ("a?b", [("b",), ("a", "b")], [("a", "a", "b")]),
    ])
    def test_accepts(self, text, yes, no):
        nfa = R.compile_regex(text)
        assert all(nfa.accepts(w) for w in yes)
        assert not any(nfa.accepts(w) for w in no)

    @pytest.mark.parametrize("bad", ["(a", "a)", "*", "a$"])
    def test_syntax_errors(self, bad):
        with pytest.raises(R.RegexSyntaxError):
            R.compile_regex(bad)

    def test_empty_alternative_is_epsilon(self):
        assert R.parse_regex("|a") == R.parse_regex("ε|a")

    @pytest.mark.parametrize("text", REGEXES)
    def test_format_round_trip(self, text):
        ast = R.parse_regex(text)
        assert R.parse_regex(R.format_regex(ast)) == ast


class TestConstructions:
    def test_inverse_closure(self):
        g = G.FiniteGraph({"c"}, ["u", "v"], [("u", "c", "v")])
        h = G.inverse_closure(g)
        assert set(h.edges) == {("u", "c", "v"), ("v", R.Inverse("c"), "u")}
        empty = G.inverse_closure(G.FiniteGraph({"c"}, [], []))
        assert empty.colors == {"c", R.Inverse("c")} and not empty.edges

    @given(small_graphs())
    def test_inverse_closure_doubles_edges(self, g):
        assert len(G.inverse_closure(g).edges) == 2 * len(g.edges)

    def test_unfold_examples(self):
        single = G.FiniteGraph({"c"}, ["v"], [])
        assert G.unfold(single, "v", 4).vertices == [("v",)]
        loop = G.FiniteGraph({"c"}, ["v"], [("v", "c", "v")])
        tree = G.unfold(loop, "v", 3)
        assert len(tree.vertices) == 4 and len(tree.edges) == 3
        assert all(c == "c" for _, c, _ in tree.edges)
        edge = G.FiniteGraph({"c"}, ["u", "v"], [("u", "c", "v")])
        assert len(G.unfold(edge, "u", 5).edges) == 1

    def test_unfold_missing_vertex(self):
        with pytest.raises(G.VertexNotFoundError):
            G.unfold(chain(), "zz", 2)

    @given(small_graphs(), st.integers(0, 3))
    def test_unfold_is_a_tree(self, g, depth):
        tree = G.unfold(g, 0, depth)
        indeg = {v: 0 for v in tree.vertices}
        for _, _, w in tree.edges:
            indeg[w] += 1
        assert [v for v, d in indeg.items() if d == 0] == [tree.root]
        assert all(d <= 1 for d in indeg.values())
        # each (color, child) pair leaves a path at most once
        for v in tree.vertices:
            outs = tree.out_edges(v)
            assert len(outs) == len(set(outs))

    def test_unfold_lazy_matches_bounded(self):
        g = G.FiniteGraph({"a", "b"}, [0, 1], [(0, "a", 1), (1, "b", 0), (0, "b", 0)])
        lazy = G.unfold_lazy(g, 0)
        snap = G.explore(lazy, G.Bound(max_path_length=3))
        assert set(snap.order) == set(G.unfold(g, 0, 3).vertices)
        assert G.is_deterministic(lazy, G.Bound(max_vertices=50))

    def test_treegraph_examples(self):
        one = G.FiniteGraph({"c"}, ["v"], [])
        tg = G.treegraph(one, "e", 2)
        assert set(tg.vertices) == {("v",), ("v", "v")}
        assert tg.edges == [(("v",), "e", ("v", "v"))]
        three = G.FiniteGraph({"c"}, ["x", "y", "z"], [])
        assert len(G.treegraph(three, "e", 1).vertices) == 3 and not G.treegraph(three, "e", 1).edges
        edge = G.FiniteGraph({"c"}, ["u", "v"], [("u", "c", "v")])
        edges = set(G.treegraph(edge, "e", 2).edges)
        assert {(("u",), "c", ("v",)), (("u", "u"), "c", ("u", "v")), (("v", "u"), "c", ("v", "v"))} <= edges
        assert {(("u",), "e", ("u", "u")), (("v",), "e", ("v", "v"))} <= edges

    def test_treegraph_errors(self):
        with pytest.raises(G.GraphError):
            G.treegraph(chain(), "a", 2)
        with pytest.raises(G.GraphError):
            G.treegraph(chain(), "e", 0)

    def test_determinism(self):
        bad = G.FiniteGraph({"c"}, ["u", "v", "w"], [("u", "c", "v"), ("u", "c", "w")])
        assert not G.is_deterministic(bad)
        assert G.is_deterministic(G.FiniteGraph({"c"}, [], []))

    def test_undeclared_color(self):
        with pytest.raises(G.GraphError):
            G.FiniteGraph({"a"}, ["u"], [("u", "b", "u")])


class TestQueries:
    def test_examples(self):
        g = chain()
        assert set(G.regular_path_query(g, "u", "aa").targets) == {"w"}
        assert set(G.regular_path_query(g, "v", "a-").targets) == {"u"}

    def test_witness_is_shortest(self):
        g = chain()
        res = G.regular_path_query(g, "u", "a*")
        assert res.targets == {"u": (), "v": ("a",), "w": ("a", "a")}
        assert res.complete

    def test_lex_tree_query(self):
        t = LexTree(2)
        start = t.parse("a^1 b^2")
        res = G.regular_path_query(t, start, "(b-)*aa*b*", G.Bound(max_path_length=8))
        assert not res.complete
        # the a-jump branch reaches exactly the vertices with a larger first exponent
        for v in res.targets:
            assert lex_compare(t, start, v) is Cmp.LESS and v[0] > start[0]
        assert (2, 0) in res.targets and (3, 2) in res.targets

    def test_bound_is_reported(self):
        loop = G.FiniteGraph({"a"}, list(range(10)), [(i, "a", i + 1) for i in range(9)])
        res = G.regular_path_query(loop, 0, "a*", G.Bound(max_vertices=3))
        assert not res.complete and len(res.targets) == 3

    @given(small_graphs())
    def test_single_color_is_edge_relation(self, g):
        for v in g.vertices:
            got = set(G.regular_path_query(g, v, "a").targets)
            assert got == {w for c, w in g.out_edges(v) if c == "a"}

    @settings(max_examples=60)
    @given(small_graphs(), st.sampled_from(REGEXES))
    def test_agrees_with_naive_enumeration(self, g, text):
        nfa = R.compile_regex(text)
        length = 5
        naive = {w for w, words in G.words_between(g, 0, length).items() if any(nfa.accepts(x) for x in words)}
        res = G.regular_path_query(g, 0, text, G.Bound(max_path_length=length))
        assert set(res.targets) == naive
        for v, word in res.targets.items():
            assert nfa.accepts(word)

    @given(small_graphs())
    def test_closure_does_not_change_plain_colors(self, g):
        h = G.inverse_closure(g)
        for v in g.vertices:
            assert set(G.regular_path_query(h, v, "a").targets) == set(G.regular_path_query(g, v, "a").targets)


class TestSerialization:
    TEXT = "root: u\nu ; a ; v\nv ; b ; w  # tail\nlonely\n"

    def test_parse_text(self):
        g = G.parse_graph_text(self.TEXT)
        assert g.root == "u" and set(g.vertices) == {"u", "v", "w", "lonely"}
        assert g.colors == {"a", "b"}

    def test_parse_errors(self):
        with pytest.raises(G.GraphError):
            G.parse_graph_text("u ; a")
        with pytest.raises(G.GraphError):
            G.parse_graph_text("u ; a- ; v")

    def test_dot_parses(self):
        g = G.parse_graph_text(self.TEXT)
        (dot,) = pydot.graph_from_dot_data(G.to_dot(g))
        assert len(dot.get_edges()) == 2
        labels = sorted(e.get_label().strip('"') for e in dot.get_edges())
        assert labels == ["a", "b"]

    def test_adjacency(self):
        g = G.parse_graph_text(self.TEXT)
        data = json.loads(G.to_adjacency_json(g))
        assert data["root"] == "u"
        assert {"source": "u", "color": "a", "target": "v"} in data["edges"]
