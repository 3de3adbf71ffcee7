"""BDeu scoring of discrete datasets over chordal graphs and DAGs.

The local score of a child with a parent set is the log marginal
likelihood of the child's conditional table under a Dirichlet prior whose
total equivalent sample size ``ess`` is split uniformly over the joint
child-parent state space.  A chordal graph is scored by orienting it along
its perfect ordering and summing local scores; that sum does not depend on
which perfect ordering is used.  Single-line edits change exactly one
local term on each side, which gives the incremental delta used by the
search layer.
"""

from __future__ import annotations

import csv
import io
import math
from typing import TYPE_CHECKING, Iterable, Optional, Sequence

import numpy as np
from scipy.special import gammaln

from .graphs import ChordalGraph, Dag, is_chordal

if TYPE_CHECKING:  # pragma: no cover
    from .search import Move

LocalScoreKey = tuple[int, tuple[int, ...]]


class Dataset:
    """A complete discrete dataset: named columns, per-column arity, and
    rows of integer state indices in [0, arity)."""

    __slots__ = ("names", "arities", "rows")

    def __init__(
        self,
        rows,
        arities: Optional[Sequence[int]] = None,
        names: Optional[Sequence[str]] = None,
    ):
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim != 2:
            raise ValueError("rows must be a 2-d array (records x variables)")
        n = rows.shape[1]
        if rows.size and rows.min() < 0:
            raise ValueError("state indices must be nonnegative")
        if arities is None:
            if rows.shape[0] == 0:
                raise ValueError("arities are required for an empty dataset")
            arities = tuple(int(x) + 1 for x in rows.max(axis=0))
        arities = tuple(int(r) for r in arities)
        if len(arities) != n:
            raise ValueError("arity count does not match column count")
        if any(r < 1 for r in arities):
            raise ValueError("arities must be >= 1")
        if rows.size:
            too_big = rows.max(axis=0) >= np.asarray(arities)
            if too_big.any():
                v = int(np.nonzero(too_big)[0][0])
                raise ValueError(f"column {v} contains states >= arity {arities[v]}")
        if names is None:
            names = tuple(f"x{i}" for i in range(n))
        names = tuple(str(s) for s in names)
        if len(names) != n:
            raise ValueError("name count does not match column count")
        rows.setflags(write=False)
        self.rows = rows
        self.arities = arities
        self.names = names

    @property
    def n_vars(self) -> int:
        return len(self.arities)

    @property
    def n_rows(self) -> int:
        return int(self.rows.shape[0])

    # -- CSV: header row of names, then integer state indices ------------

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(self.names)
            w.writerows(self.rows.tolist())

    @classmethod
    def from_csv(cls, path, arities: Optional[Sequence[int]] = None) -> "Dataset":
        with open(path, "r", newline="") as fh:
            return cls._read_csv(fh, arities)

    @classmethod
    def from_csv_text(cls, text: str, arities=None) -> "Dataset":
        return cls._read_csv(io.StringIO(text), arities)

    @classmethod
    def _read_csv(cls, fh, arities) -> "Dataset":
        reader = csv.reader(fh)
        try:
            names = next(reader)
        except StopIteration:
            raise ValueError("dataset CSV is empty") from None
        data = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                data.append([int(x) for x in row])
            except ValueError as exc:
                raise ValueError(f"non-integer state on line {lineno}") from exc
            if len(row) != len(names):
                raise ValueError(f"wrong column count on line {lineno}")
        rows = np.asarray(data, dtype=np.int64).reshape(len(data), len(names))
        return cls(rows, arities=arities, names=names)


def _parent_config_codes(
    rows: np.ndarray, arities: Sequence[int], parents: Sequence[int]
) -> tuple[np.ndarray, int]:
    """Configuration index per row; the lowest-index parent varies fastest."""
    q = 1
    codes = np.zeros(rows.shape[0], dtype=np.int64)
    for p in sorted(parents):
        codes += rows[:, p] * q
        q *= arities[p]
    return codes, q


def bdeu_local_score(
    v: int, parents: Iterable[int], data: Dataset, ess: float = 1.0
) -> float:
    """Log marginal likelihood of child ``v`` with the given parent set.

    With q parent configurations and child arity r, the prior pseudo-count
    is ess/(r*q) per cell and ess/q per configuration.  Configurations
    with no data contribute zero, so the empty dataset scores 0.
    """
    if ess <= 0:
        raise ValueError("ess must be positive")
    parents = tuple(sorted(set(parents)))
    if v in parents:
        raise ValueError(f"vertex {v} cannot be its own parent")
    for p in parents + (v,):
        if not (0 <= p < data.n_vars):
            raise ValueError(f"vertex {p} out of range")
    r = data.arities[v]
    pcodes, q = _parent_config_codes(data.rows, data.arities, parents)
    if data.n_rows == 0:
        return 0.0
    cell = pcodes * r + data.rows[:, v]
    uniq, counts = np.unique(cell, return_counts=True)
    a_cell = ess / (r * q)
    a_cfg = ess / q
    total = float(np.sum(gammaln(a_cell + counts) - gammaln(a_cell)))
    cfg = uniq // r
    boundaries = np.flatnonzero(np.diff(cfg)) + 1
    n_cfg = np.add.reduceat(counts, np.concatenate(([0], boundaries)))
    total += float(np.sum(gammaln(a_cfg) - gammaln(a_cfg + n_cfg)))
    return total


class ScoreCache:
    """Memoized local scores bound to one (dataset, ess) pair.

    Returned values are bit-identical across repeated queries of the same
    (child, parent set) key.  Reads are safe to share; insertion happens
    under the GIL, so plain dict semantics suffice here.
    """

    def __init__(self, data: Dataset, ess: float = 1.0):
        if ess <= 0:
            raise ValueError("ess must be positive")
        self.data = data
        self.ess = float(ess)
        self._table: dict[LocalScoreKey, float] = {}

    def local_score(self, v: int, parents: Iterable[int]) -> float:
        key = (v, tuple(sorted(set(parents))))
        hit = self._table.get(key)
        if hit is None:
            hit = bdeu_local_score(key[0], key[1], self.data, self.ess)
            self._table[key] = hit
        return hit

    def __len__(self) -> int:
        return len(self._table)


def _resolve_cache(data: Dataset, ess: float, cache: Optional[ScoreCache]) -> ScoreCache:
    if cache is None:
        return ScoreCache(data, ess)
    if cache.data is not data:
        raise ValueError("cache is bound to a different dataset")
    if cache.ess != ess:
        raise ValueError("cache is bound to a different ess")
    return cache


def score_dag(d: Dag, data: Dataset, ess: float = 1.0, cache: Optional[ScoreCache] = None) -> float:
    """Sum of local scores over the DAG's parent sets."""
    if d.n != data.n_vars:
        raise ValueError("graph and dataset have different variable counts")
    cache = _resolve_cache(data, ess, cache)
    return math.fsum(cache.local_score(v, d.parents[v]) for v in range(d.n))


def score_chordal(
    g: ChordalGraph, data: Dataset, ess: float = 1.0, cache: Optional[ScoreCache] = None
) -> float:
    """Score a chordal graph by orienting along its perfect ordering.

    All perfect orderings give the same value up to floating rounding,
    since the oriented DAGs encode the same factorization.
    """
    if g.n != data.n_vars:
        raise ValueError("graph and dataset have different variable counts")
    cache = _resolve_cache(data, ess, cache)
    parents = g.oriented_parents()
    return math.fsum(cache.local_score(v, parents[v]) for v in range(g.n))


def common_neighbors(graph, a: int, b: int) -> frozenset:
    g = graph.graph if hasattr(graph, "graph") else graph
    return g.neighbors(a) & g.neighbors(b)


def move_delta(
    g: ChordalGraph,
    move: "Move",
    data: Dataset,
    ess: float = 1.0,
    cache: Optional[ScoreCache] = None,
) -> float:
    """Score change of a legal single-line edit, new minus old.

    Let S be the common neighbors of the endpoints (unaffected by the edit
    itself).  Both the edited and the original graph admit perfect
    orderings that differ only at one endpoint's parent set, so the score
    difference collapses to two local terms at the higher endpoint:
    removal scores f(b, S) - f(b, S + {a}); addition is the negation.

    Illegal moves (edits whose result is not chordal, or edits of
    absent/present lines) are rejected.
    """
    cache = _resolve_cache(data, ess, cache)
    a, b = move.a, move.b
    s = common_neighbors(g, a, b)
    if move.kind == "remove":
        if not g.has_line(a, b):
            raise ValueError(f"line {a}-{b} not present")
        # removal keeps chordality exactly when the common neighborhood is
        # complete: otherwise two non-adjacent common neighbors close a
        # chordless 4-cycle, and conversely any new chordless cycle would
        # force such a pair
        if not g.graph.is_complete_set(s):
            raise ValueError(f"removing {a}-{b} breaks chordality")
        sign = -1.0
    elif move.kind == "add":
        if g.has_line(a, b):
            raise ValueError(f"line {a}-{b} already present")
        if not is_chordal(g.graph.with_line(a, b)):
            raise ValueError(f"adding {a}-{b} breaks chordality")
        sign = 1.0
    else:
        raise ValueError(f"unknown move kind {move.kind!r}")
    child = max(a, b)
    other = min(a, b)
    with_line = cache.local_score(child, s | {other})
    without_line = cache.local_score(child, s)
    return sign * (with_line - without_line)


def dimension(g: ChordalGraph, arities: Sequence[int]) -> int:
    """Number of free parameters of the decomposable model of ``g``.

    Computed over the perfect-ordering orientation as the sum over
    vertices of (arity - 1) times the product of parent arities; it equals
    the clique-minus-separator state-space count and is the same for every
    perfect ordering.
    """
    if len(arities) != g.n:
        raise ValueError("arity count does not match vertex count")
    parents = g.oriented_parents()
    total = 0
    for v in range(g.n):
        block = arities[v] - 1
        for p in parents[v]:
            block *= arities[p]
        total += block
    return total


def dimension_dag(d: Dag, arities: Sequence[int]) -> int:
    """Free parameters of a DAG model: sum of (arity-1) * parent states."""
    if len(arities) != d.n:
        raise ValueError("arity count does not match vertex count")
    total = 0
    for v in range(d.n):
        block = arities[v] - 1
        for p in d.parents[v]:
            block *= arities[p]
        total += block
    return total
