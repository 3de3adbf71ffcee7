"""BDeu scoring: high-precision oracle, ordering invariance, deltas."""

import itertools
import math
from collections import Counter

import mpmath
import numpy as np
import pytest

from chordalearn.graphs import (
    ChordalGraph,
    Dag,
    UndirectedGraph,
    is_perfect_order,
    orient_by_ordering,
)
from chordalearn.scoring import (
    Dataset,
    ScoreCache,
    _parent_config_codes,
    bdeu_local_score,
    dimension,
    dimension_dag,
    move_delta,
    score_chordal,
    score_dag,
)
from chordalearn.search import Move, inclusion_boundary
from chordalearn.synthetic import ancestral_sample, rng_from

from conftest import random_chordal_graph

mpmath.mp.dps = 60


def oracle_local_score(v, parents, data, ess=1.0):
    """From-scratch BDeu local term with 60-digit arithmetic.

    Counts go through a plain Counter keyed by explicit state tuples, so
    neither the configuration coding nor the gamma evaluation is shared
    with the library.
    """
    parents = tuple(sorted(parents))
    r = data.arities[v]
    q = 1
    for p in parents:
        q *= data.arities[p]
    a_cell = mpmath.mpf(ess) / (r * q)
    a_cfg = mpmath.mpf(ess) / q
    cell = Counter()
    cfg = Counter()
    for row in np.asarray(data.rows):
        key = tuple(int(row[p]) for p in parents)
        cfg[key] += 1
        cell[key + (int(row[v]),)] += 1
    total = mpmath.mpf(0)
    for c in cfg.values():
        total += mpmath.loggamma(a_cfg) - mpmath.loggamma(a_cfg + c)
    for c in cell.values():
        total += mpmath.loggamma(a_cell + c) - mpmath.loggamma(a_cell)
    return float(total)


def random_dataset(n, rows, rng, max_arity=3):
    arities = [int(rng.integers(2, max_arity + 1)) for _ in range(n)]
    data = rng.integers(0, arities, size=(rows, n))
    return Dataset(data, arities)


class TestDataset:
    def test_arity_inference(self):
        d = Dataset([[0, 2], [1, 0]])
        assert d.arities == (2, 3)

    def test_explicit_arities_validated(self):
        with pytest.raises(ValueError):
            Dataset([[0, 3]], arities=[2, 3])

    def test_rows_read_only(self):
        d = Dataset([[0, 1]])
        with pytest.raises(ValueError):
            d.rows[0, 0] = 1

    def test_csv_roundtrip(self, tmp_path):
        d = Dataset([[0, 1, 2], [1, 0, 0]], names=["a", "b", "c"])
        path = tmp_path / "d.csv"
        d.to_csv(path)
        e = Dataset.from_csv(path, arities=d.arities)
        assert e.names == d.names
        assert e.arities == d.arities
        assert np.array_equal(e.rows, d.rows)

    def test_from_csv_text(self):
        d = Dataset.from_csv_text("x,y\n0,1\n1,1\n")
        assert d.names == ("x", "y")
        assert d.arities == (2, 2)


class TestParentCodes:
    def test_lowest_index_fastest(self):
        rows = np.array([[1, 0, 2], [0, 1, 2]])
        codes, q = _parent_config_codes(rows, (2, 2, 3), (0, 1))
        assert q == 4
        # code = row[0] + 2 * row[1]
        assert list(codes) == [1, 2]

    def test_parent_order_irrelevant(self):
        rng = np.random.default_rng(0)
        rows = rng.integers(0, 3, size=(50, 4))
        a, qa = _parent_config_codes(rows, (3, 3, 3, 3), (2, 0))
        b, qb = _parent_config_codes(rows, (3, 3, 3, 3), (0, 2))
        assert qa == qb and np.array_equal(a, b)

    def test_empty_parent_set(self):
        codes, q = _parent_config_codes(np.zeros((5, 2), dtype=int), (2, 2), ())
        assert q == 1 and not codes.any()


class TestLocalScore:
    def test_known_value_single_binary_variable(self):
        # one binary column, rows [0] and [1], ess 1: the marginal
        # likelihood is exactly 1/8, so the log score is -3 ln 2
        data = Dataset([[0], [1]])
        got = bdeu_local_score(0, (), data, ess=1.0)
        assert abs(got - (-3.0 * math.log(2.0))) < 1e-12

    def test_empty_dataset_scores_zero(self):
        data = Dataset(np.zeros((0, 2), dtype=int), arities=(2, 2))
        assert bdeu_local_score(0, (1,), data) == 0.0

    def test_matches_high_precision_oracle(self):
        rng = np.random.default_rng(21)
        for trial in range(120):
            n = int(rng.integers(2, 5))
            data = random_dataset(n, int(rng.integers(1, 120)), rng)
            v = int(rng.integers(n))
            others = [u for u in range(n) if u != v]
            k = int(rng.integers(0, len(others) + 1))
            parents = tuple(rng.choice(others, size=k, replace=False))
            ess = float(rng.choice([0.1, 1.0, 4.0, 10.0]))
            got = bdeu_local_score(v, parents, data, ess)
            want = oracle_local_score(v, parents, data, ess)
            assert abs(got - want) < 1e-9, (trial, v, parents, ess)

    def test_ess_must_be_positive(self):
        data = Dataset([[0]])
        with pytest.raises(ValueError):
            bdeu_local_score(0, (), data, ess=0.0)

    def test_own_parent_rejected(self):
        data = Dataset([[0, 1]])
        with pytest.raises(ValueError):
            bdeu_local_score(0, (0,), data)


class TestScoreCache:
    def test_cache_returns_identical_values(self):
        rng = np.random.default_rng(2)
        data = random_dataset(4, 60, rng)
        cache = ScoreCache(data, ess=2.0)
        a = cache.local_score(1, (0, 3))
        b = cache.local_score(1, (3, 0))
        assert a == b == bdeu_local_score(1, (0, 3), data, 2.0)
        assert len(cache) == 1

    def test_mismatched_binding_rejected(self):
        rng = np.random.default_rng(3)
        data = random_dataset(3, 20, rng)
        other = random_dataset(3, 20, rng)
        cache = ScoreCache(data, ess=1.0)
        with pytest.raises(ValueError):
            score_dag(Dag(3), other, cache=cache)
        with pytest.raises(ValueError):
            score_dag(Dag(3), data, ess=2.0, cache=cache)


class TestOrderingInvariance:
    def all_perfect_orders(self, g):
        return [
            p
            for p in itertools.permutations(range(g.n))
            if is_perfect_order(g, p)
        ]

    def test_score_identical_across_perfect_orderings(self):
        # acceptance-scale check: 100 random chordal graphs, up to 6
        # vertices, at least 10 orderings each where available
        rng = np.random.default_rng(29)
        checked_graphs = 0
        while checked_graphs < 100:
            n = int(rng.integers(3, 7))
            graph = random_chordal_graph(n, rng)
            orders = self.all_perfect_orders(graph)
            if len(orders) > 10:
                idx = rng.choice(len(orders), size=10, replace=False)
                orders = [orders[i] for i in idx]
            data = random_dataset(n, int(rng.integers(20, 200)), rng)
            values = [
                score_chordal(ChordalGraph(graph, order), data)
                for order in orders
            ]
            assert max(values) - min(values) <= 1e-9, graph.fingerprint()
            checked_graphs += 1

    def test_oriented_dag_scores_equal_chordal_score(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            g = ChordalGraph.from_graph(random_chordal_graph(5, rng))
            data = random_dataset(5, 80, rng)
            d = orient_by_ordering(g, g.ordering)
            assert abs(score_chordal(g, data) - score_dag(d, data)) <= 1e-9


class TestMoveDelta:
    def test_thousand_random_triples(self):
        # acceptance-scale check: delta vs full rescoring, n <= 10,
        # N <= 1000, tolerance 1e-9
        rng = np.random.default_rng(37)
        checked = 0
        while checked < 1000:
            n = int(rng.integers(3, 11))
            graph = random_chordal_graph(n, rng)
            g = ChordalGraph.from_graph(graph)
            moves = inclusion_boundary(g)
            if not moves:
                continue
            move = moves[int(rng.integers(len(moves)))]
            data = random_dataset(n, int(rng.integers(1, 1001)), rng)
            cache = ScoreCache(data)
            before = score_chordal(g, data, cache=cache)
            edited = (
                graph.with_line(move.a, move.b)
                if move.kind == "add"
                else graph.without_line(move.a, move.b)
            )
            after = score_chordal(ChordalGraph.from_graph(edited), data, cache=cache)
            delta = move_delta(g, move, data, cache=cache)
            assert abs(delta - (after - before)) <= 1e-9, (move, n)
            checked += 1

    def test_illegal_moves_rejected(self):
        g = ChordalGraph.from_lines(4, [(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)])
        data = Dataset(np.zeros((4, 4), dtype=int), arities=(2, 2, 2, 2))
        # removing a chord of the only 4-cycle leaves a hole
        with pytest.raises(ValueError):
            move_delta(g, Move("remove", 0, 2), data)
        # adding the absent diagonal is fine, removing an absent line is not
        with pytest.raises(ValueError):
            move_delta(g, Move("remove", 1, 3), data)
        with pytest.raises(ValueError):
            move_delta(g, Move("add", 0, 1), data)


class TestAsymptoticBehaviour:
    def test_delta_sign_tracks_the_generating_structure(self):
        # large-sample probe on a strongly coupled binary chain
        # 0 - 1 - 2 - 3: on the complete graph, removing a chain line must
        # lower the score while removing any other line must raise it,
        # because the conditioning set is all remaining vertices
        from chordalearn.synthetic import DiscreteBayesNet

        flip = np.array([[0.9, 0.1], [0.1, 0.9]])
        net = DiscreteBayesNet(
            Dag(4, [(0, 1), (1, 2), (2, 3)]),
            (2, 2, 2, 2),
            [np.array([[0.5, 0.5]]), flip, flip, flip],
        )
        data = ancestral_sample(net, 30000, rng_from(43))
        cache = ScoreCache(data)
        g = ChordalGraph.from_graph(UndirectedGraph.complete(4))
        chain_lines = {(0, 1), (1, 2), (2, 3)}
        for move in inclusion_boundary(g):
            assert move.kind == "remove"
            delta = move_delta(g, move, data, cache=cache)
            if (move.a, move.b) in chain_lines:
                assert delta < 0, move
            else:
                assert delta > 0, move


class TestDimension:
    def clique_separator_dimension(self, g: ChordalGraph, arities) -> int:
        """Junction-tree inclusion-exclusion computed from maximal cliques
        in visit order; an independent derivation of the parameter count."""
        import networkx as nx

        h = nx.Graph()
        h.add_nodes_from(range(g.n))
        h.add_edges_from(g.lines)
        cliques = [frozenset(c) for c in nx.find_cliques(h)]
        # order cliques along the perfect ordering for running intersection
        pos = {v: i for i, v in enumerate(g.ordering)}
        cliques.sort(key=lambda c: max(pos[v] for v in c))
        seen: set = set()
        dim = 0
        for c in cliques:
            prod = 1
            for v in c:
                prod *= arities[v]
            dim += prod - 1
            sep = c & seen
            if sep:
                prod = 1
                for v in sep:
                    prod *= arities[v]
                dim -= prod - 1
            seen |= c
        return dim

    def test_matches_clique_separator_formula(self):
        rng = np.random.default_rng(41)
        for _ in range(80):
            n = int(rng.integers(2, 7))
            g = ChordalGraph.from_graph(random_chordal_graph(n, rng))
            arities = tuple(int(rng.integers(2, 4)) for _ in range(n))
            assert dimension(g, arities) == self.clique_separator_dimension(
                g, arities
            )

    def test_matches_oriented_dag_dimension(self):
        rng = np.random.default_rng(43)
        for _ in range(40):
            g = ChordalGraph.from_graph(random_chordal_graph(5, rng))
            arities = tuple(int(rng.integers(2, 4)) for _ in range(5))
            d = orient_by_ordering(g, g.ordering)
            assert dimension(g, arities) == dimension_dag(d, arities)

    def test_known_values(self):
        g = ChordalGraph.from_lines(3, [(0, 1), (1, 2)])
        # binary: cliques {0,1}, {1,2}, separator {1} -> 3 + 3 - 1
        assert dimension(g, (2, 2, 2)) == 5
        assert dimension(ChordalGraph.empty(3), (2, 2, 2)) == 3
        assert dimension(ChordalGraph.from_lines(2, [(0, 1)]), (3, 3)) == 8
