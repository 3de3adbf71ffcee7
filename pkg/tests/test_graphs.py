"""Graph core: chordality, orderings, DAG utilities, separation."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chordalearn.graphs import (
    ChordalGraph,
    CycleError,
    Dag,
    NotChordalError,
    UndirectedGraph,
    check_chordality,
    d_separated,
    find_chordless_cycle,
    is_chordal,
    is_perfect_order,
    maximum_cardinality_order,
    min_fill_chordalize,
    moralize,
    orient_by_ordering,
    peo_with_prefix,
    separated,
)

from conftest import (
    all_graphs,
    naive_d_separated,
    nx_is_chordal,
    path_separated,
    random_chordal_graph,
    random_dag,
    random_graph,
)


class TestUndirectedGraph:
    def test_lines_canonical_and_sorted(self):
        g = UndirectedGraph(4, [(3, 1), (2, 0), (1, 3)])
        assert g.lines == ((0, 2), (1, 3))

    def test_self_loop_rejected(self):
        with pytest.raises(ValueError):
            UndirectedGraph(3, [(1, 1)])

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError):
            UndirectedGraph(3, [(0, 3)])

    def test_neighbors_and_mask(self):
        g = UndirectedGraph(4, [(0, 1), (1, 2)])
        assert g.neighbors(1) == frozenset({0, 2})
        assert g.neighbor_mask(1) == 0b0101
        assert g.degree(1) == 2

    def test_with_without_line(self):
        g = UndirectedGraph(3, [(0, 1)])
        assert g.with_line(1, 2).lines == ((0, 1), (1, 2))
        assert g.without_line(0, 1).lines == ()
        # original untouched
        assert g.lines == ((0, 1),)

    def test_induced_keeps_labels(self):
        g = UndirectedGraph(4, [(0, 1), (1, 2), (2, 3)])
        h = g.induced([1, 2, 3])
        assert h.n == 4
        assert h.lines == ((1, 2), (2, 3))

    def test_is_complete_set(self):
        g = UndirectedGraph(4, [(0, 1), (0, 2), (1, 2)])
        assert g.is_complete_set([0, 1, 2])
        assert g.is_complete_set([0, 1])
        assert g.is_complete_set([3])
        assert g.is_complete_set([])
        assert not g.is_complete_set([0, 3])

    def test_text_roundtrip(self):
        g = UndirectedGraph(5, [(0, 4), (2, 3)])
        assert UndirectedGraph.from_text(g.to_text()) == g

    def test_fingerprint(self):
        g = UndirectedGraph(5, [(2, 3), (0, 1)])
        assert g.fingerprint() == "n=5;0-1,2-3"
        assert UndirectedGraph(2).fingerprint() == "n=2;"

    def test_complete_and_empty(self):
        assert UndirectedGraph.complete(4).line_count == 6
        assert UndirectedGraph.empty(4).line_count == 0


class TestChordality:
    def test_agrees_with_networkx_exhaustive_n5(self):
        for n in range(1, 6):
            for g in all_graphs(n):
                assert is_chordal(g) == nx_is_chordal(g)

    def test_agrees_with_networkx_sampled_n7(self):
        rng = np.random.default_rng(5)
        for _ in range(600):
            g = random_graph(7, rng, p=float(rng.random()))
            assert is_chordal(g) == nx_is_chordal(g)

    def test_labelled_chordal_counts(self):
        # known values for n = 1..5
        counts = [
            sum(is_chordal(g) for g in all_graphs(n)) for n in range(1, 6)
        ]
        assert counts == [1, 2, 8, 61, 822]

    def test_chordless_cycle_reported(self):
        g = UndirectedGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)])
        res = check_chordality(g)
        assert not res.is_chordal
        cyc = res.chordless_cycle
        assert len(cyc) >= 4
        # cycle is closed, chordless
        for i, v in enumerate(cyc):
            assert g.has_line(v, cyc[(i + 1) % len(cyc)])
        for i, j in itertools.combinations(range(len(cyc)), 2):
            if abs(i - j) not in (1, len(cyc) - 1):
                assert not g.has_line(cyc[i], cyc[j])

    def test_find_chordless_cycle_none_when_chordal(self):
        g = UndirectedGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
        assert find_chordless_cycle(g) is None

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 2**15 - 1))
    def test_property_agrees_with_networkx_n6(self, mask):
        pairs = list(itertools.combinations(range(6), 2))
        g = UndirectedGraph(6, [pairs[i] for i in range(15) if mask >> i & 1])
        assert is_chordal(g) == nx_is_chordal(g)


class TestOrdering:
    def test_mcs_order_is_perfect_on_all_chordal_n5(self):
        for n in range(1, 6):
            for g in all_graphs(n):
                if not nx_is_chordal(g):
                    continue
                order = maximum_cardinality_order(g)
                assert sorted(order) == list(range(n))
                assert is_perfect_order(g, order)

    def test_mcs_order_not_perfect_on_hole(self):
        g = UndirectedGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        assert not is_perfect_order(g, maximum_cardinality_order(g))
        err = pytest.raises(NotChordalError, ChordalGraph.from_graph, g)
        assert len(err.value.cycle) >= 4

    def test_is_perfect_order_rejects_bad_order(self):
        # star: centre first works (each leaf sees only the centre earlier);
        # centre last does not (its earlier neighbours are non-adjacent)
        g = UndirectedGraph(3, [(0, 1), (0, 2)])
        assert is_perfect_order(g, (0, 1, 2))
        assert not is_perfect_order(g, (1, 2, 0))

    def test_every_perfect_order_accepted_definitionally(self):
        # cross-check is_perfect_order against its own definition
        rng = np.random.default_rng(7)
        for _ in range(40):
            g = random_chordal_graph(5, rng)
            for perm in itertools.permutations(range(5)):
                expected = all(
                    g.is_complete_set(
                        [u for u in g.neighbors(perm[i]) if u in set(perm[:i])]
                    )
                    for i in range(5)
                )
                assert is_perfect_order(g, perm) == expected

    def test_peo_with_prefix(self):
        g = ChordalGraph.from_lines(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        order = peo_with_prefix(g, (2,))
        assert order[0] == 2
        assert is_perfect_order(g.graph, order)

    def test_peo_with_prefix_rejects_impossible(self):
        # path 0-1-2: starting at both endpoints leaves the middle vertex
        # with two earlier neighbours that are non-adjacent
        g = ChordalGraph.from_lines(3, [(0, 1), (1, 2)])
        with pytest.raises(ValueError):
            peo_with_prefix(g, (0, 2))


class TestChordalGraph:
    def test_from_graph_requires_chordal(self):
        hole = UndirectedGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        with pytest.raises(NotChordalError):
            ChordalGraph.from_graph(hole)

    def test_ordering_validated(self):
        g = UndirectedGraph(3, [(0, 1), (0, 2)])
        with pytest.raises(ValueError):
            ChordalGraph(g, (1, 2, 0))  # star centre last is not perfect

    def test_oriented_parents_earlier_neighbours(self):
        g = ChordalGraph.from_lines(4, [(0, 1), (1, 2), (1, 3), (2, 3)])
        pa = g.oriented_parents()
        order = g.ordering
        pos = {v: i for i, v in enumerate(order)}
        for v in range(4):
            assert pa[v] == frozenset(
                u for u in g.neighbors(v) if pos[u] < pos[v]
            )

    def test_text_roundtrip(self):
        g = ChordalGraph.from_lines(4, [(0, 1), (2, 3)])
        h = ChordalGraph.from_text(g.to_text())
        assert h.graph == g.graph


class TestDag:
    def test_cycle_rejected(self):
        with pytest.raises(CycleError):
            Dag(3, [(0, 1), (1, 2), (2, 0)])

    def test_self_arc_rejected_duplicates_collapsed(self):
        with pytest.raises(ValueError):
            Dag(2, [(0, 0)])
        assert Dag(2, [(0, 1), (0, 1)]).arcs == ((0, 1),)
        with pytest.raises(CycleError):
            Dag(2, [(0, 1), (1, 0)])

    def test_topological_order(self):
        d = Dag(4, [(2, 0), (0, 3), (2, 3), (1, 3)])
        order = d.topological_order()
        pos = {v: i for i, v in enumerate(order)}
        for u, v in d.arcs:
            assert pos[u] < pos[v]

    def test_v_structures(self):
        collider = Dag(3, [(0, 2), (1, 2)])
        assert collider.v_structures() == [(0, 1, 2)]
        chain = Dag(3, [(0, 1), (1, 2)])
        assert chain.v_structures() == []
        # shielded collider is not a v-structure
        shielded = Dag(3, [(0, 2), (1, 2), (0, 1)])
        assert shielded.v_structures() == []

    def test_skeleton_and_moralize(self):
        d = Dag(4, [(0, 2), (1, 2), (2, 3)])
        assert d.skeleton().lines == ((0, 2), (1, 2), (2, 3))
        m = moralize(d)
        assert m.lines == ((0, 1), (0, 2), (1, 2), (2, 3))

    def test_with_without_arc(self):
        d = Dag(3, [(0, 1)])
        assert d.with_arc(1, 2).arcs == ((0, 1), (1, 2))
        assert d.without_arc(0, 1).arcs == ()
        with pytest.raises(CycleError):
            d.with_arc(1, 0)

    def test_text_roundtrip(self):
        d = Dag(4, [(0, 2), (3, 1)])
        assert Dag.from_text(d.to_text()) == d

    def test_reachable_from_proper_descendants(self):
        d = Dag(5, [(0, 1), (1, 2), (3, 4)])
        assert d.reachable_from(0) == {1, 2}
        assert d.reachable_from(3) == {4}
        assert d.reachable_from(2) == set()


class TestOrientByOrdering:
    def test_no_v_structures_and_skeleton_preserved(self):
        rng = np.random.default_rng(11)
        for _ in range(60):
            g = ChordalGraph.from_graph(random_chordal_graph(6, rng))
            d = orient_by_ordering(g, g.ordering)
            assert d.skeleton() == g.graph
            assert d.v_structures() == []
            # moral graph adds nothing when there are no v-structures
            assert moralize(d) == g.graph

    def test_rejects_imperfect_order(self):
        g = ChordalGraph.from_lines(3, [(0, 1), (0, 2)])
        with pytest.raises(ValueError):
            orient_by_ordering(g, (1, 2, 0))


class TestMinFill:
    def test_chordal_input_unchanged(self):
        rng = np.random.default_rng(13)
        for _ in range(30):
            g = random_chordal_graph(6, rng)
            chordal, fills = min_fill_chordalize(g)
            assert fills == ()
            assert chordal.graph == g

    def test_result_chordal_supergraph(self):
        rng = np.random.default_rng(17)
        for _ in range(60):
            g = random_graph(7, rng, p=0.35)
            chordal, fills = min_fill_chordalize(g)
            assert nx_is_chordal(chordal.graph)
            assert set(g.lines) <= set(chordal.graph.lines)
            assert set(chordal.graph.lines) - set(g.lines) == set(fills)

    def test_four_cycle_gets_single_fill(self):
        g = UndirectedGraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        chordal, fills = min_fill_chordalize(g)
        assert len(fills) == 1
        assert nx_is_chordal(chordal.graph)


class TestSeparation:
    def test_agrees_with_path_enumeration_exhaustive_n4(self):
        for g in all_graphs(4):
            verts = range(4)
            for a in verts:
                for b in verts:
                    if a >= b:
                        continue
                    rest = [v for v in verts if v not in (a, b)]
                    for k in range(len(rest) + 1):
                        for c in itertools.combinations(rest, k):
                            assert separated(g, [a], [b], c) == path_separated(
                                g, [a], [b], c
                            )

    def test_set_arguments(self):
        g = UndirectedGraph(5, [(0, 2), (1, 2), (2, 3), (2, 4)])
        assert separated(g, [0, 1], [3, 4], [2])
        assert not separated(g, [0, 1], [3, 4], [])

    def test_overlap_rejected(self):
        g = UndirectedGraph(3, [(0, 1)])
        with pytest.raises(ValueError):
            separated(g, [0], [0], [])
        with pytest.raises(ValueError):
            separated(g, [0], [1], [1])

    def test_empty_side_rejected(self):
        g = UndirectedGraph(3, [(0, 1)])
        with pytest.raises(ValueError):
            separated(g, [], [1], [])


class TestDSeparation:
    def test_agrees_with_ancestral_moral_oracle(self):
        rng = np.random.default_rng(19)
        for _ in range(60):
            d = random_dag(5, rng)
            for a in range(5):
                for b in range(a + 1, 5):
                    rest = [v for v in range(5) if v not in (a, b)]
                    for k in range(len(rest) + 1):
                        for c in itertools.combinations(rest, k):
                            assert d_separated(d, [a], [b], c) == naive_d_separated(
                                d, {a}, {b}, set(c)
                            )

    def test_collider_pattern(self):
        d = Dag(3, [(0, 2), (1, 2)])
        assert d_separated(d, [0], [1], [])
        assert not d_separated(d, [0], [1], [2])

    def test_chain_pattern(self):
        d = Dag(3, [(0, 1), (1, 2)])
        assert not d_separated(d, [0], [2], [])
        assert d_separated(d, [0], [2], [1])
