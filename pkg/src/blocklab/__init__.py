"""blocklab: block-sequence calculus over GF(p) and the rationals at desk
scale, with FIN combinatorics, oscillation sets, the three vector-space
games, and finite filter-base diagonalization.

All values are immutable and all operations are pure functions; exhaustive
searches are capped by an explicit state budget.
"""

from .algebra import (
    FieldSpec,
    LinearMap,
    SubspaceBasis,
    Vector,
    basis_vector,
    complement_of,
    gf,
    is_injective_on,
    kernel_of,
    projection_along,
    rationals,
    support,
    vector,
)
from .blockseq import (
    BlockSeq,
    Interval,
    basis_block,
    block_seq,
    dominates,
    eventually_dominates,
    fuse_diagonalize,
    intersect_block,
    is_block_sequence,
    lift_from_supports,
    span_contains,
    tail_beyond,
)
from .errors import (
    BlocklabError,
    BudgetError,
    ExhaustionError,
    IllegalMoveError,
    VerificationBugError,
)
from .fin import (
    Coloring,
    FinBlockSeq,
    FinSet,
    fin_blocks,
    fin_dominates,
    fin_set,
    finite_unions,
    hindman_search,
    milliken_search,
    min_max_trace,
    supp_seq,
)
from .filters import (
    FilterBase,
    FinitePartition,
    IntervalSeq,
    b_set_membership,
    check_spread_witness,
    coarsen_intervals,
    density_probe,
    is_directed_base,
    p_diagonalize,
    qpoint_check,
    split_even_odd,
    spread_from_tail_diag,
    strong_family_from_fin,
    strong_p_diagonalize,
)
from .games import (
    GameKind,
    GameTranscript,
    Move,
    Strategy,
    StrategyTree,
    clopen_diag_membership,
    diagonalizing_strategy_for_I,
    into_tree_strategy_for_II,
    outcome_of,
    play,
    strategy_tree_of,
    validate_move,
)
from .oscillation import (
    VectorPredicate,
    meets_every_block_subspace,
    osc,
    osc_range,
    parity_pair,
)

__version__ = "0.1.0"
