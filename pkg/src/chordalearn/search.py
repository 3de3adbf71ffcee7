"""Greedy structure search over the single-line neighborhood of chordal
graphs, a DAG hill-climber for comparison, and an exact combinatorial
score for verifying search behavior against a known target model.

The chordal neighborhood of a graph (its inclusion boundary) is the set of
single-line additions and removals whose result is still chordal.  Greedy
search repeatedly applies the best strictly improving neighbor and stops
when none exists; ties break on the lexicographically smallest move, so
runs are deterministic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Protocol, Sequence

from .graphs import ChordalGraph, Dag, UndirectedGraph, is_chordal
from .independence import DependencyModel
from .scoring import Dataset, ScoreCache, common_neighbors, score_dag

_KIND_ORDER = {"add": 0, "remove": 1, "reverse": 2}


@dataclass(frozen=True, order=False)
class Move:
    """A single-line edit.  For undirected moves a < b; directed moves
    ("reverse" included) keep their endpoint order as (parent, child)."""

    kind: str
    a: int
    b: int

    def __post_init__(self):
        if self.kind not in _KIND_ORDER:
            raise ValueError(f"unknown move kind {self.kind!r}")
        if self.a == self.b:
            raise ValueError("move endpoints must differ")

    def sort_key(self) -> tuple[int, int, int]:
        return (_KIND_ORDER[self.kind], self.a, self.b)

    def to_string(self) -> str:
        return f"{self.kind} {self.a} {self.b}"

    def __str__(self) -> str:
        return self.to_string()


@dataclass(frozen=True)
class TraceStep:
    step: int
    move: Move
    delta: object  # float for data scores, integer pair for oracle scores
    total: object
    fingerprint: str


@dataclass
class SearchTrace:
    start_fingerprint: str
    start_score: object
    steps: list = field(default_factory=list)
    terminal: bool = False

    def to_jsonl(self) -> str:
        out = []
        for s in self.steps:
            out.append(
                json.dumps(
                    {
                        "step": s.step,
                        "move": s.move.to_string(),
                        "delta": s.delta,
                        "total": s.total,
                    },
                    sort_keys=True,
                )
            )
        return "\n".join(out) + ("\n" if out else "")


def removal_keeps_chordal(g: ChordalGraph, a: int, b: int) -> bool:
    """Necessary pre-filter for removals: the endpoints' common neighbors
    must be pairwise adjacent (two non-adjacent common neighbors would
    close a chordless 4-cycle once the line is gone)."""
    return g.graph.is_complete_set(common_neighbors(g, a, b))


def inclusion_boundary(g: ChordalGraph) -> list[Move]:
    """All legal single-line moves: additions first, then removals, each
    group in lexicographic endpoint order."""
    moves = []
    for a in range(g.n):
        for b in range(a + 1, g.n):
            if not g.has_line(a, b) and is_chordal(g.graph.with_line(a, b)):
                moves.append(Move("add", a, b))
    for a, b in g.lines:
        if removal_keeps_chordal(g, a, b) and is_chordal(g.graph.without_line(a, b)):
            moves.append(Move("remove", a, b))
    return moves


def apply_move(g: ChordalGraph, move: Move) -> ChordalGraph:
    if move.kind == "add":
        return ChordalGraph.from_graph(g.graph.with_line(move.a, move.b))
    if move.kind == "remove":
        return ChordalGraph.from_graph(g.graph.without_line(move.a, move.b))
    raise ValueError(f"move kind {move.kind!r} does not apply to chordal graphs")


# ---------------------------------------------------------------------------
# scorers


class ChordalScorer(Protocol):  # pragma: no cover - typing only
    def score(self, g: ChordalGraph) -> object: ...

    def move_score(self, g: ChordalGraph, current, move: Move) -> object: ...


class BDeuScorer:
    """Data-driven scorer: totals are floats, move scores are computed
    incrementally from two cached local terms."""

    def __init__(self, data: Dataset, ess: float = 1.0, cache: Optional[ScoreCache] = None):
        self.cache = cache if cache is not None else ScoreCache(data, ess)
        if self.cache.data is not data or self.cache.ess != ess:
            raise ValueError("cache does not match the given dataset and ess")
        self.data = data
        self.ess = ess

    def score(self, g: ChordalGraph) -> float:
        parents = g.oriented_parents()
        return math.fsum(
            self.cache.local_score(v, parents[v]) for v in range(g.n)
        )

    def delta(self, g: ChordalGraph, move: Move) -> float:
        s = common_neighbors(g, move.a, move.b)
        child = max(move.a, move.b)
        other = min(move.a, move.b)
        d = self.cache.local_score(child, s | {other}) - self.cache.local_score(child, s)
        return d if move.kind == "add" else -d

    def move_score(self, g: ChordalGraph, current: float, move: Move) -> float:
        return current + self.delta(g, move)


class OracleScore:
    """Exact score against a known undirected target model.

    The score of a chordal graph is the integer pair
    ``(-violation_weight, -dimension)`` compared lexicographically, with
    all-binary dimension.  The violation weight is zero exactly when every
    separation of the graph holds in the target, and the score is a sum of
    per-vertex terms over any perfect-ordering orientation, so single-line
    edits change it by a closed-form amount.  Both properties follow from
    an explicit distribution that is exactly faithful to the target: one
    independent fair coin per connected vertex set of the target graph,
    each vertex observing the coins of the sets containing it.  Entropies
    of that distribution are integers (in coin units): the entropy of a
    set W of vertices is the number of connected sets meeting W.

    Consequences, checkable exhaustively with ``verification``:

    * graphs whose model is included in the target all share the minimum
      violation weight 0, so among them lower dimension wins (score
      consistency);
    * removing line a-b with common neighbors S changes the violation
      weight by the number of connected target sets containing both a and
      b and avoiding S, which is zero exactly when S separates a from b in
      the target (local consistency, strict in both directions).
    """

    def __init__(self, target):
        if isinstance(target, DependencyModel):
            if target.kind != "ug":
                raise ValueError(
                    "the combinatorial oracle score needs an undirected target"
                )
            graph = target.graph
            model = target
        elif isinstance(target, UndirectedGraph):
            graph = target
            model = DependencyModel.from_undirected(target)
        else:
            raise TypeError("target must be an UndirectedGraph or a model over one")
        self.target = model
        self.target_graph = graph
        n = graph.n
        self._full = (1 << n) - 1
        # connected[mask] for all vertex masks, then counts of connected
        # subsets inside each mask (a subset-sum / zeta transform)
        connected = self._connected_table(graph)
        counts = [1 if connected[m] else 0 for m in range(1 << n)]
        for bit in range(n):
            step = 1 << bit
            for m in range(1 << n):
                if m & step:
                    counts[m] += counts[m ^ step]
        self._conn_count = counts
        self._total_entropy = counts[self._full]

    @staticmethod
    def _connected_table(graph: UndirectedGraph) -> list[bool]:
        n = graph.n
        table = [False] * (1 << n)
        for m in range(1, 1 << n):
            low = m & -m
            if m == low:
                table[m] = True
                continue
            # grow a component from the lowest vertex inside the mask
            reach = low
            frontier = low
            while frontier:
                nxt = 0
                f = frontier
                while f:
                    b = f & -f
                    f ^= b
                    nxt |= graph.neighbor_mask(b.bit_length() - 1) & m
                frontier = nxt & ~reach
                reach |= frontier
            table[m] = reach == m
        return table

    def set_entropy(self, mask: int) -> int:
        """Number of connected target sets meeting the masked vertex set."""
        return self._total_entropy - self._conn_count[self._full & ~mask]

    def conditional_info(self, a: int, b: int, s_mask: int) -> int:
        """Connected target sets containing both a and b and avoiding the
        masked set S; zero exactly when S separates a from b."""
        sa = s_mask | (1 << a)
        sb = s_mask | (1 << b)
        return (
            self.set_entropy(sa)
            + self.set_entropy(sb)
            - self.set_entropy(s_mask)
            - self.set_entropy(sa | sb)
        )

    def violation_weight(self, g: ChordalGraph) -> int:
        parents = g.oriented_parents()
        total = 0
        for v in range(g.n):
            pmask = 0
            for p in parents[v]:
                pmask |= 1 << p
            total += self.set_entropy(pmask | (1 << v)) - self.set_entropy(pmask)
        return total - self._total_entropy

    def score(self, g: ChordalGraph) -> tuple[int, int]:
        if g.n != self.target_graph.n:
            raise ValueError("graph and target have different vertex counts")
        dim = 0
        for v, ps in enumerate(g.oriented_parents()):
            dim += 1 << len(ps)
        return (-self.violation_weight(g), -dim)

    def move_score(self, g: ChordalGraph, current: tuple[int, int], move: Move):
        s = common_neighbors(g, move.a, move.b)
        s_mask = 0
        for v in s:
            s_mask |= 1 << v
        info = self.conditional_info(move.a, move.b, s_mask)
        viol = -current[0]
        dim = -current[1]
        # denser graphs assert fewer separations: additions can only lower
        # the violation weight, removals raise it by the blocked information
        if move.kind == "add":
            return (-(viol - info), -(dim + (1 << len(s))))
        return (-(viol + info), -(dim - (1 << len(s))))


def statement_local_optimum(g: ChordalGraph, target: DependencyModel) -> bool:
    """Local-optimality test induced by local consistency alone.

    Any score that is locally consistent for ``target`` strictly prefers
    removing line a-b (common neighbors S) exactly when "a independent of
    b given S" holds in the target, and strictly prefers an addition
    exactly when the corresponding statement in the enlarged graph fails.
    That fixes the improving/worsening status of every neighbor without
    choosing a particular score, which is what the latent-target searches
    need (no numeric oracle exists there).
    """
    for move in inclusion_boundary(g):
        if move.kind == "remove":
            s = common_neighbors(g, move.a, move.b)
            if target.independent([move.a], [move.b], s):
                return False
        else:
            bigger = g.graph.with_line(move.a, move.b)
            s = bigger.neighbors(move.a) & bigger.neighbors(move.b)
            if not target.independent([move.a], [move.b], s):
                return False
    return True


# ---------------------------------------------------------------------------
# greedy search


def _best_move(g, scorer, current, moves):
    best = None
    best_score = current
    for move in sorted(moves, key=Move.sort_key):
        cand = scorer.move_score(g, current, move)
        if cand > best_score:
            best = move
            best_score = cand
    return best, best_score


def greedy_chordal(
    scorer: ChordalScorer,
    start: ChordalGraph,
    policy: str = "best",
) -> tuple[ChordalGraph, SearchTrace]:
    """Hill-climb over the inclusion boundary from ``start``.

    ``policy`` is "best" (steepest ascent; ties break on the smallest
    move) or "first" (take the first improving move in move order).  Both
    stop at the first graph with no strictly improving neighbor, so the
    result is a local optimum of the scorer.
    """
    if policy not in ("best", "first"):
        raise ValueError(f"unknown policy {policy!r}")
    g = start
    total = scorer.score(g)
    trace = SearchTrace(start_fingerprint=g.fingerprint(), start_score=total)
    step = 0
    while True:
        moves = inclusion_boundary(g)
        chosen = None
        new_total = total
        if policy == "best":
            chosen, new_total = _best_move(g, scorer, total, moves)
        else:
            for move in sorted(moves, key=Move.sort_key):
                cand = scorer.move_score(g, total, move)
                if cand > total:
                    chosen, new_total = move, cand
                    break
        if chosen is None:
            trace.terminal = True
            return g, trace
        step += 1
        g = apply_move(g, chosen)
        delta = _score_delta(new_total, total)
        total = new_total
        trace.steps.append(
            TraceStep(step, chosen, delta, total, g.fingerprint())
        )


def _score_delta(new, old):
    if isinstance(new, tuple):
        return tuple(x - y for x, y in zip(new, old))
    return new - old


def dag_moves(d: Dag) -> list[Move]:
    """Legal arrow edits: additions, removals, and reversals that keep the
    digraph acyclic, in deterministic order."""
    moves = []
    for u in range(d.n):
        for v in range(d.n):
            if u == v or d.has_arc(u, v) or d.has_arc(v, u):
                continue
            if u not in d.reachable_from(v):
                moves.append(Move("add", u, v))
    for u, v in d.arcs:
        moves.append(Move("remove", u, v))
    for u, v in d.arcs:
        trimmed = d.without_arc(u, v)
        if v not in trimmed.reachable_from(u) and u not in trimmed.reachable_from(v):
            moves.append(Move("reverse", u, v))
    return sorted(moves, key=Move.sort_key)


def _dag_move_delta(d: Dag, move: Move, cache: ScoreCache) -> float:
    u, v = move.a, move.b
    if move.kind == "add":
        return cache.local_score(v, d.parents[v] | {u}) - cache.local_score(
            v, d.parents[v]
        )
    if move.kind == "remove":
        return cache.local_score(v, d.parents[v] - {u}) - cache.local_score(
            v, d.parents[v]
        )
    # reversal u->v becomes v->u: two local terms change
    return (
        cache.local_score(v, d.parents[v] - {u})
        - cache.local_score(v, d.parents[v])
        + cache.local_score(u, d.parents[u] | {v})
        - cache.local_score(u, d.parents[u])
    )


def apply_dag_move(d: Dag, move: Move) -> Dag:
    if move.kind == "add":
        return d.with_arc(move.a, move.b)
    if move.kind == "remove":
        return d.without_arc(move.a, move.b)
    return d.without_arc(move.a, move.b).with_arc(move.b, move.a)


def greedy_dag(cache: ScoreCache, start: Optional[Dag] = None) -> tuple[Dag, SearchTrace]:
    """Hill-climb over arrow additions, removals, and reversals.

    Starts from the empty DAG unless told otherwise; steepest ascent with
    the same deterministic tie-breaking as the chordal search.
    """
    d = start if start is not None else Dag(cache.data.n_vars)
    total = score_dag(d, cache.data, cache.ess, cache)
    trace = SearchTrace(start_fingerprint=d.to_text(), start_score=total)
    step = 0
    while True:
        best = None
        best_delta = 0.0
        for move in dag_moves(d):
            delta = _dag_move_delta(d, move, cache)
            if delta > best_delta:
                best = move
                best_delta = delta
        if best is None:
            trace.terminal = True
            return d, trace
        step += 1
        d = apply_dag_move(d, best)
        total += best_delta
        trace.steps.append(TraceStep(step, best, best_delta, total, d.to_text()))
