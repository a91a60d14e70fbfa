import itertools

import pytest
from hypothesis import given, settings

from cgmeek import kernel
from cgmeek.errors import DomainError, InputError, ResourceError
from cgmeek.generate import corpus
from cgmeek.graph import HybridGraph
from cgmeek.mimap import mi_map, oracle_from_graph
from cgmeek.separation import (
    IndependenceModel,
    _masks,
    Route,
    Triple,
    all_routes,
    check_graphoid,
    check_pairwise_block_recursive,
    enumerate_model,
    find_active_route,
    is_active_route,
    is_imap,
    is_independent,
    sections,
    separated,
    separated_bruteforce,
    separated_moral,
)
from helpers import chain, fs, g
from strategies import chain_graphs, chain_graphs_with_chain

COLLIDER = "A -> B; B -- C; D -> C"

# computed with the unpruned route enumeration (routes of <= 8 edges) and
# separated_bruteforce, which agreed on all 24 queries
COLLIDER_MODEL = {("A", "C", "BD"), ("A", "D", ""), ("B", "D", "AC")}


def canonical_queries(G):
    V = G.sorted_nodes
    for x, y in itertools.combinations(V, 2):
        rest = [v for v in V if v not in (x, y)]
        for k in range(len(rest) + 1):
            for Z in itertools.combinations(rest, k):
                yield x, y, frozenset(Z)


class TestRoutes:
    @pytest.mark.parametrize(
        "graph, route, Z, expected",
        [
            (COLLIDER, "ABCD", "B", True),
            (COLLIDER, "ABCD", "", False),
            ("A -- B", "AB", "", True),
            ("A -> B; C -> B", "ABC", "", False),
            ("A -> B; C -> B", "ABC", "B", True),
            ("A -> B; B -> C", "ABC", "B", False),
            ("A -> B; B -> C", "ABC", "", True),
            ("A -- B", "A", "", True),
        ],
    )
    def test_is_active_route(self, graph, route, Z, expected):
        assert is_active_route(g(graph), Route(route), fs(Z)) is expected

    def test_sections_of_collider_route(self):
        G = g(COLLIDER)
        assert sections(G, Route("ABCD")) == [(0, 0, False), (1, 2, True), (3, 3, False)]

    def test_repeated_nodes_allowed(self):
        G = g("A -- B")
        assert len(Route("ABAB")) == 3
        assert is_active_route(G, Route("ABAB"), fs())

    def test_invalid_step(self):
        with pytest.raises(InputError):
            is_active_route(g("A -- B; node C"), Route("AC"), fs())


@pytest.mark.parametrize("engine", [separated, separated_bruteforce, separated_moral])
@pytest.mark.parametrize(
    "graph, X, Y, Z, expected",
    [
        (COLLIDER, "A", "D", "", True),
        (COLLIDER, "A", "D", "B", False),
        ("A -- B", "A", "B", "", False),
        ("A -> B", "A", "B", "", False),
        ("A -> B; B -> C", "A", "C", "B", True),
        ("A -> B; node C", "AB", "C", "", True),
    ],
)
def test_separation_examples(engine, graph, X, Y, Z, expected):
    assert engine(g(graph), fs(X), fs(Y), fs(Z)) is expected


@pytest.mark.parametrize("engine", [separated, separated_bruteforce, separated_moral])
def test_separation_input_errors(engine):
    G = g(COLLIDER)
    with pytest.raises(InputError):
        engine(G, fs("A"), fs("A"), fs())
    with pytest.raises(InputError):
        engine(G, fs("A"), fs("D"), fs("A"))
    with pytest.raises(InputError):
        engine(G, fs("A"), fs("Q"), fs())
    with pytest.raises(InputError):
        engine(G, fs(), fs("D"), fs())


def test_separation_rejects_non_chain_graph():
    with pytest.raises(DomainError):
        separated(g("A -> B; B -- C; C -> A; node D"), fs("A"), fs("D"))


def test_bruteforce_bound_must_cover_state_space():
    with pytest.raises(InputError):
        separated_bruteforce(g("A -> B"), fs("A"), fs("B"), fs(), max_len=3)


def test_bruteforce_returns_witness():
    route = find_active_route(g(COLLIDER), fs("A"), fs("D"), fs("B"))
    assert route == Route("ABCD")


@given(chain_graphs(max_n=4))
@settings(max_examples=40)
def test_unpruned_routes_are_sound(G):
    # any active route found by blind enumeration must mean "not separated"
    for x, y, Z in canonical_queries(G):
        hit = any(r.nodes[-1] == y and is_active_route(G, r, Z) for r in all_routes(G, x, 6))
        if hit:
            assert not separated(G, {x}, {y}, Z)


@given(chain_graphs(max_n=5))
def test_three_engines_agree(G):
    for x, y, Z in canonical_queries(G):
        a = separated(G, {x}, {y}, Z)
        assert a == separated_bruteforce(G, {x}, {y}, Z)
        assert a == separated_moral(G, {x}, {y}, Z)


@given(chain_graphs(max_n=5))
def test_symmetry(G):
    for x, y, Z in canonical_queries(G):
        assert separated(G, {x}, {y}, Z) == separated(G, {y}, {x}, Z)


@given(chain_graphs(min_n=3, max_n=5))
def test_composition_over_unions(G):
    V = G.sorted_nodes
    for x in V:
        others = [v for v in V if v != x]
        for Ysize in range(1, len(others) + 1):
            for Y in itertools.combinations(others, Ysize):
                rest = [v for v in others if v not in Y]
                for Z in itertools.chain.from_iterable(
                    itertools.combinations(rest, k) for k in range(len(rest) + 1)
                ):
                    whole = separated(G, {x}, set(Y), set(Z))
                    parts = all(separated(G, {x}, {y}, set(Z)) for y in Y)
                    assert whole == parts


class TestModel:
    def test_collider_model(self):
        M = enumerate_model(g(COLLIDER))
        assert {(t.x, t.y, "".join(sorted(t.z))) for t in M} == COLLIDER_MODEL

    def test_two_isolated_nodes(self):
        M = enumerate_model(g("node A; node B"))
        assert set(M) == {Triple.make("A", "B")}

    def test_adjacent_pair_has_empty_model(self):
        assert len(enumerate_model(g("A -- B"))) == 0

    def test_bound(self):
        G = HybridGraph([f"N{i:02d}" for i in range(11)])
        with pytest.raises(ResourceError):
            enumerate_model(G)
        assert len(enumerate_model(G, max_nodes=11)) > 0

    def test_kernel_matches_per_query(self):
        for G in corpus(30, max_n=5, seed=7):
            expected = {Triple(x, y, Z) for x, y, Z in canonical_queries(G) if separated_bruteforce(G, {x}, {y}, Z)}
            assert set(enumerate_model(G)) == expected

    def test_iteration_is_sorted(self):
        M = enumerate_model(g(COLLIDER))
        assert [str(t) for t in M] == ["A ; C | B D", "A ; D |", "B ; D | A C"]


class TestIsIndependent:
    def test_singletons(self):
        M = IndependenceModel("AB", [Triple.make("A", "B")])
        assert is_independent(M, fs("A"), fs("B"), fs())
        assert is_independent(M, fs("B"), fs("A"), fs())

    def test_union_requires_every_pair(self):
        M = IndependenceModel("ABC", [Triple.make("A", "B")])
        assert not is_independent(M, fs("A"), fs("BC"), fs())

    def test_from_graph_model(self):
        M = enumerate_model(g(COLLIDER))
        assert is_independent(M, fs("A"), fs("D"), fs())

    def test_universe_checked(self):
        with pytest.raises(InputError):
            IndependenceModel("AB", [Triple.make("A", "C")])


class TestImap:
    def test_reflexive(self):
        G = g(COLLIDER)
        assert is_imap(G, G)

    def test_empty_graph_not_imap_of_edge(self):
        assert not is_imap(g("node A; node B"), g("A -> B"))

    def test_complete_graph_is_imap(self):
        assert is_imap(g("A -- B; B -- C; A -- C"), g("A -> B; B -- C"))

    def test_node_mismatch(self):
        with pytest.raises(InputError):
            is_imap(g("node A"), g("node B"))

    @given(chain_graphs(max_n=5), chain_graphs(max_n=5))
    def test_mutual_imap_iff_equal_models(self, G, H):
        if G.nodes != H.nodes:
            return
        both = is_imap(H, G) and is_imap(G, H)
        assert both == (enumerate_model(G) == enumerate_model(H))


class TestGraphoid:
    def test_empty_model(self):
        assert check_graphoid(IndependenceModel("ABC")) == []

    def test_weak_union_violation(self):
        M = IndependenceModel("ABC", [Triple.make("A", "B"), Triple.make("A", "C")])
        found = check_graphoid(M)
        assert found
        assert {v.axiom for v in found} == {"weak union"}
        assert any(v.Y == fs("B") and v.W == fs("C") for v in found)

    def test_intersection_violation(self):
        M = IndependenceModel("ABC", [Triple.make("A", "B", "C"), Triple.make("A", "C", "B")])
        assert "intersection" in {v.axiom for v in check_graphoid(M)}

    def test_contraction_violation(self):
        M = IndependenceModel("ABC", [Triple.make("A", "B", "C"), Triple.make("A", "C")])
        assert "contraction" in {v.axiom for v in check_graphoid(M)}

    def test_bound(self):
        with pytest.raises(ResourceError):
            check_graphoid(IndependenceModel([f"N{i}" for i in range(6)]), max_nodes=5)

    @given(chain_graphs(max_n=4))
    @settings(max_examples=60)
    def test_graph_models_are_graphoids(self, G):
        assert check_graphoid(enumerate_model(G)) == []


class TestPairwiseBlockRecursive:
    def test_mi_map_satisfies_it(self):
        G = g(COLLIDER)
        alpha = chain("A", "D", "BC")
        Ga = mi_map(oracle_from_graph(G), alpha)
        assert check_pairwise_block_recursive(Ga, alpha, oracle_from_graph(G))

    def test_missing_edge_fails(self):
        assert not check_pairwise_block_recursive(g("node A; node B"), chain("AB"), oracle_from_graph(g("A -- B")))

    def test_complete_graph_vacuous(self):
        G = g("A -- B; B -- C; A -- C")
        assert check_pairwise_block_recursive(G, chain("ABC"), oracle_from_graph(g("node A; node B; node C")))

    def test_inconsistent_chain(self):
        with pytest.raises(DomainError):
            check_pairwise_block_recursive(g("A -> B"), chain("B", "A"), oracle_from_graph(g("A -> B")))

    @given(chain_graphs_with_chain(max_n=5))
    def test_implies_imap_for_graph_oracles(self, pair):
        # when a graph satisfies the property wrt I(G) it must be an I map of I(G)
        G, alpha = pair
        Ga = mi_map(oracle_from_graph(G), alpha)
        oracle = oracle_from_graph(G)
        assert check_pairwise_block_recursive(Ga, alpha, oracle)
        assert is_imap(Ga, G)


class TestKernelBackends:
    def test_backend_reported(self):
        assert kernel.BACKEND in ("cython", "python")

    @pytest.mark.skipif(kernel._compiled is None, reason="compiled kernel not built")
    @given(chain_graphs(max_n=7))
    def test_compiled_matches_python(self, G):
        _, _, und, ch, pa = _masks(G)
        assert kernel._compiled.separated_pairs(und, ch, pa) == kernel._kernel_py.separated_pairs(und, ch, pa)

    def test_python_kernel_handles_wide_graphs(self):
        # beyond 64 nodes the dispatcher must use the pure-Python module
        n = 70
        labels = [f"N{i:02d}" for i in range(n)]
        G = HybridGraph.from_edges([(labels[i], labels[i + 1]) for i in range(n - 1)])
        assert not separated(G, {labels[0]}, {labels[-1]})
        assert separated(G, {labels[0]}, {labels[-1]}, {labels[30]})

    @pytest.mark.skipif(kernel._compiled is None, reason="compiled kernel not built")
    def test_compiled_handles_64_nodes(self):
        n = 64
        labels = [f"N{i:02d}" for i in range(n)]
        G = HybridGraph.from_edges([(labels[i], labels[i + 1]) for i in range(n - 1)])
        _, _, und, ch, pa = _masks(G)
        x, y = 1 << 0, 1 << 63
        for z in (0, 1 << 10):
            assert kernel._compiled.reach_separated(und, ch, pa, x, y, z) == kernel._kernel_py.reach_separated(
                und, ch, pa, x, y, z
            )
