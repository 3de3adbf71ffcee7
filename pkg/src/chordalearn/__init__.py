"""Greedy learning of chordal graphical models from discrete data, with
exact combinatorial oracles and brute-force verification suites."""

from .graphs import (
    ChordalGraph,
    CycleError,
    Dag,
    NotChordalError,
    UndirectedGraph,
    check_chordality,
    d_separated,
    is_chordal,
    maximum_cardinality_order,
    min_fill_chordalize,
    moralize,
    orient_by_ordering,
    separated,
)
from .independence import (
    DependencyModel,
    IndependenceStatement,
    chain_disjunction_holds,
    enumerate_independencies,
    graphoid_report,
    inclusion_optimal,
    model_included,
)
from .scoring import (
    Dataset,
    ScoreCache,
    bdeu_local_score,
    dimension,
    dimension_dag,
    move_delta,
    score_chordal,
    score_dag,
)
from .search import (
    BDeuScorer,
    Move,
    OracleScore,
    SearchTrace,
    apply_move,
    greedy_chordal,
    greedy_dag,
    inclusion_boundary,
    statement_local_optimum,
)
from .synthetic import (
    DiscreteBayesNet,
    ancestral_sample,
    random_chordal_target,
    random_dag,
    random_parameters,
    rng_from,
)
from .evaluation import (
    ResultRow,
    fit_parameters,
    kl_estimate,
    kl_exact,
    line_diff,
)

__version__ = "0.1.0"

__all__ = [
    "BDeuScorer",
    "ChordalGraph",
    "CycleError",
    "Dag",
    "Dataset",
    "DependencyModel",
    "DiscreteBayesNet",
    "IndependenceStatement",
    "Move",
    "NotChordalError",
    "OracleScore",
    "ResultRow",
    "ScoreCache",
    "SearchTrace",
    "UndirectedGraph",
    "ancestral_sample",
    "apply_move",
    "bdeu_local_score",
    "chain_disjunction_holds",
    "check_chordality",
    "d_separated",
    "dimension",
    "dimension_dag",
    "enumerate_independencies",
    "fit_parameters",
    "graphoid_report",
    "greedy_chordal",
    "greedy_dag",
    "inclusion_boundary",
    "inclusion_optimal",
    "is_chordal",
    "kl_estimate",
    "kl_exact",
    "line_diff",
    "maximum_cardinality_order",
    "min_fill_chordalize",
    "model_included",
    "moralize",
    "move_delta",
    "orient_by_ordering",
    "random_chordal_target",
    "random_dag",
    "random_parameters",
    "rng_from",
    "score_chordal",
    "score_dag",
    "separated",
    "statement_local_optimum",
]
