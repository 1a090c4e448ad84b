"""stochgames: ergodicity and fixed-point analysis of finite zero-sum
stochastic games with perfect information.

The central objects are a validated :class:`~stochgames.game.GameSpec`, its
transition :class:`~stochgames.game.SupportSpec`, and the payment-free
recession operator derived from them.  The library decides whether the
game's mean payoff is robustly state-independent (ergodicity), computes the
antitone pairing between invariant faces of the hypercube certifying the
verdict, answers prescribed-argmin/argmax fixed-point queries, and exposes
the underlying Boolean abstractions and reachability hypergraphs.
"""

from .boolean import (
    ENUMERATION_GUARD,
    LatticePair,
    boolean_kleene,
    check_h1,
    check_h2,
    enumerate_lattices,
    f_minus,
    f_plus,
)
from .errors import (
    DegenerateSupportError,
    GameFormatError,
    GuardExceededError,
    NumericFailureError,
    PreconditionError,
    StochasticityError,
)
from .galois import (
    ErgodicityReport,
    closure,
    conjugate_pairs,
    is_ergodic,
    nontrivial_boolean_fixed_points,
    phi,
    phi_star,
)
from .game import (
    GameSpec,
    MaxOption,
    MinActionSpec,
    Policy,
    SupportRow,
    SupportSpec,
    Trajectory,
    TrajectoryStep,
    extract_support,
    load_game,
    parse_game,
    perturb_payments,
    serialize_game,
    simulate,
)
from .hypergraph import (
    Hypergraph,
    ReachResult,
    build_g_minus,
    build_g_plus,
    export_dot,
    hypergraph_to_json,
    is_invariant_relative,
    merge_primes,
    reach,
    state_nodes,
)
from .markov import ChainAnalysis, analyze_chain, cesaro_limit_estimate, harmonic_constant_check
from .operators import GameOperator
from .shapley import (
    MeanPayoffEstimate,
    apply_shapley,
    argmax_set,
    argmin_set,
    check_ergodic_equation,
    dual_operator,
    kleene_limit_real,
    mean_payoff_estimate,
    perturbed_mean_payoff_estimates,
    recession_apply,
    sup_norm,
    value_iteration,
)
from .solver import (
    ActiveSets,
    IMinAnswer,
    ReducedGame,
    construct_witness,
    lattice_witness,
    reduce_operator,
    semiderivative_active_sets,
    semiderivative_apply,
    solve_i_min,
    solve_i_min_j_max,
)
from .subsets import Subset

__version__ = "0.1.0"

__all__ = [
    "ENUMERATION_GUARD",
    "ActiveSets",
    "ChainAnalysis",
    "DegenerateSupportError",
    "ErgodicityReport",
    "GameFormatError",
    "GameOperator",
    "GameSpec",
    "GuardExceededError",
    "Hypergraph",
    "IMinAnswer",
    "LatticePair",
    "MaxOption",
    "MeanPayoffEstimate",
    "MinActionSpec",
    "NumericFailureError",
    "Policy",
    "PreconditionError",
    "ReachResult",
    "ReducedGame",
    "StochasticityError",
    "Subset",
    "SupportRow",
    "SupportSpec",
    "Trajectory",
    "TrajectoryStep",
    "analyze_chain",
    "apply_shapley",
    "argmax_set",
    "argmin_set",
    "boolean_kleene",
    "build_g_minus",
    "build_g_plus",
    "cesaro_limit_estimate",
    "check_ergodic_equation",
    "check_h1",
    "check_h2",
    "closure",
    "conjugate_pairs",
    "construct_witness",
    "dual_operator",
    "enumerate_lattices",
    "export_dot",
    "extract_support",
    "f_minus",
    "f_plus",
    "harmonic_constant_check",
    "hypergraph_to_json",
    "is_ergodic",
    "is_invariant_relative",
    "kleene_limit_real",
    "lattice_witness",
    "load_game",
    "mean_payoff_estimate",
    "merge_primes",
    "nontrivial_boolean_fixed_points",
    "parse_game",
    "perturb_payments",
    "perturbed_mean_payoff_estimates",
    "phi",
    "phi_star",
    "reach",
    "recession_apply",
    "reduce_operator",
    "semiderivative_active_sets",
    "semiderivative_apply",
    "serialize_game",
    "simulate",
    "solve_i_min",
    "solve_i_min_j_max",
    "state_nodes",
    "sup_norm",
    "value_iteration",
]
