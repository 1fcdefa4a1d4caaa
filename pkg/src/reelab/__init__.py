"""reelab: entropic quantities and entanglement criteria for bipartite states."""

from .criteria import (
    CriterionVerdict,
    MonotoneCounterexample,
    loewner_matrix_psd_check,
    operator_monotone_search,
    ppt_criterion,
    reduction_criterion,
)
from .entropy import (
    lemma2_bound,
    log_order_check,
    negative_conditional_entropy,
    relative_entropy,
    theorem1_gap,
    von_neumann_entropy,
)
from .errors import (
    ConvergenceWarning,
    DomainError,
    EigensolverError,
    InputError,
    NormalizationError,
    ShapeError,
    StateFileParseError,
    StateInvariantError,
)
from .hermitian import HermitianMatrix, eig_hermitian, matrix_function, matrix_log
from .solver import (
    ReeOptions,
    ReeResult,
    bell_diagonal_ree_oracle,
    closest_state_for_pure,
    dykstra_ppt_density,
    eof_two_qubit,
    ree_ppt,
)
from .statefile import dumps_state, load_state, loads_state, save_state
from .states import (
    BipartiteDims,
    DensityMatrix,
    PureState,
    bell_diagonal,
    maximally_mixed,
    partial_trace_A,
    partial_trace_B,
    partial_transpose_B,
    pure_from_schmidt,
    random_density,
    random_pure,
    random_separable,
    reduction_operator,
    singlet,
    werner,
)
from .verify import run_suite

__version__ = "0.1.0"

__all__ = [
    "BipartiteDims",
    "ConvergenceWarning",
    "CriterionVerdict",
    "DensityMatrix",
    "DomainError",
    "EigensolverError",
    "HermitianMatrix",
    "InputError",
    "MonotoneCounterexample",
    "NormalizationError",
    "PureState",
    "ReeOptions",
    "ReeResult",
    "ShapeError",
    "StateFileParseError",
    "StateInvariantError",
    "bell_diagonal",
    "bell_diagonal_ree_oracle",
    "closest_state_for_pure",
    "dumps_state",
    "dykstra_ppt_density",
    "eig_hermitian",
    "eof_two_qubit",
    "lemma2_bound",
    "load_state",
    "loads_state",
    "loewner_matrix_psd_check",
    "log_order_check",
    "matrix_function",
    "matrix_log",
    "maximally_mixed",
    "negative_conditional_entropy",
    "operator_monotone_search",
    "partial_trace_A",
    "partial_trace_B",
    "partial_transpose_B",
    "ppt_criterion",
    "pure_from_schmidt",
    "random_density",
    "random_pure",
    "random_separable",
    "ree_ppt",
    "reduction_criterion",
    "reduction_operator",
    "relative_entropy",
    "run_suite",
    "save_state",
    "singlet",
    "theorem1_gap",
    "von_neumann_entropy",
    "werner",
]
