import networkx as nx
import pytest
from hypothesis import strategies as st

from caucal_ordinals.graph import FiniteGraph
from caucal_ordinals.ordinal import ZERO, Ordinal, add
from caucal_ordinals.pairtypes import VertexPairType, WordAutomaton
from caucal_ordinals.regex import Inverse


# -- acceptance reporting: one pass/fail line per criterion --------------------------

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def report(request):
    """Attach a one-line detail (counts, timings) to the running criterion."""

    def note(text):
        request.node.user_properties.append(("detail", text))

    return note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and not rep.failed):
        return
    number, title = marker.args
    details = [v for k, v in item.user_properties if k == "detail"]
    previous = _CRITERIA.get(number)
    passed = rep.passed and (previous is None or previous[0])
    _CRITERIA[number] = (passed, title, "; ".join(details))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        passed, title, detail = _CRITERIA[number]
        line = f"{'PASS' if passed else 'FAIL'}  {number:>2}. {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))


def from_coefficients(coeffs) -> Ordinal:
    """``coeffs[i]`` is the coefficient of w^i; builds the ordinal by repeated addition."""
    value = ZERO
    for power in range(len(coeffs) - 1, -1, -1):
        value = add(value, Ordinal.power(power, coeffs[power]))
    return value


def coefficients(a: Ordinal, width: int) -> list[int]:
    """Inverse of :func:`from_coefficients` for ordinals below w^width."""
    out = [0] * width
    for e, c in a.terms:
        out[int(e)] = c
    return out


def finite_exponent_ordinals(width=4, max_coefficient=5):
    return st.lists(st.integers(0, max_coefficient), min_size=width, max_size=width).map(from_coefficients)


def limit_ordinals(width=4, max_coefficient=5):
    return finite_exponent_ordinals(width, max_coefficient).filter(lambda a: a.is_limit)


def _cnf(depth):
    # arbitrary ordinals below epsilon_0 with bounded nesting, built through add()
    if depth == 0:
        return st.integers(0, 6).map(Ordinal.of)
    term = st.tuples(_cnf(depth - 1), st.integers(1, 3)).map(lambda ec: Ordinal.power(ec[0], ec[1]))
    return st.lists(term, max_size=3).map(_sum)


def _sum(terms):
    value = ZERO
    for t in terms:
        value = add(value, t)
    return value


def ordinals(depth=3):
    return _cnf(depth)


# -- random trees, automata and a product-graph oracle for pair types -------------

TREE_COLORS = ("a", "b")


def random_tree(rng, n, colors=TREE_COLORS) -> FiniteGraph:
    """Vertex 0 is the root; every other vertex hangs off an earlier one."""
    edges = [(rng.randrange(v), rng.choice(colors), v) for v in range(1, n)]
    return FiniteGraph(colors, range(n), edges, root=0)


def random_automaton(rng, n_states, colors=TREE_COLORS, density=0.3) -> WordAutomaton:
    alphabet = list(colors) + [Inverse(c) for c in colors]
    states = list(range(n_states))
    instructions = {(q, a, r) for q in states for a in alphabet for r in states if rng.random() < density}
    return WordAutomaton(alphabet, states, instructions, 0, {n_states - 1})


def subtree(g: FiniteGraph, v) -> set:
    out, stack = {v}, [v]
    while stack:
        for _, w in g.out_edges(stack.pop()):
            out.add(w)
            stack.append(w)
    return out


def product_graph(aut: WordAutomaton, g: FiniteGraph) -> "nx.DiGraph":
    """Nodes (vertex, state); an arc per tree edge (either direction) and matching instruction."""
    p = nx.DiGraph()
    p.add_nodes_from((v, q) for v in g.vertices for q in aut.states)
    moves = [(u, c, w) for u, c, w in g.edges] + [(w, Inverse(c), u) for u, c, w in g.edges]
    for u, c, w in moves:
        for q, a, r in aut.instructions:
            if a == c:
                p.add_edge((u, q), (w, r))
    return p


def oracle_pair_type(aut: WordAutomaton, g: FiniteGraph, v1, v2, product=None) -> VertexPairType:
    product = product if product is not None else product_graph(aut, g)

    def switches(src, dst):
        out = set()
        for q in aut.states:
            reach = nx.descendants(product, (src, q)) | {(src, q)}
            out.update((q, r) for r in aut.states if (dst, r) in reach)
        return out

    return VertexPairType(switches(v1, v2), switches(v2, v1))


def collinear_triple(rng, g: FiniteGraph):
    """``(v1, v2, v3)`` with v1 in the cone of v2 and v3 outside it, or None."""
    v2 = rng.choice([v for v in g.vertices if v != g.root] or [None])
    if v2 is None:
        return None
    cone = subtree(g, v2)
    outside = [v for v in g.vertices if v not in cone]
    return rng.choice(sorted(cone)), v2, rng.choice(outside)


def forked_quadruple(rng, g: FiniteGraph):
    """``(v1, v2, u1, u2)`` with disjoint cones at v1, v2 and u_i in the cone of v_i, or None."""
    cones = {v: subtree(g, v) for v in g.vertices}
    pairs = [(x, y) for x in g.vertices for y in g.vertices if x != y and not cones[x] & cones[y]]
    if not pairs:
        return None
    v1, v2 = rng.choice(pairs)
    return v1, v2, rng.choice(sorted(cones[v1])), rng.choice(sorted(cones[v2]))
