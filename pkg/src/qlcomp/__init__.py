"""Access-redundancy tradeoffs for {+1,-1}-quantized linear computation.

Constructions (parity, covering-code blocks, custom block matrices),
exhaustive verification, numerical lower bounds, and approximate-recovery
schemes (relaxed covering, block discarding, K-SVD/OMP).
"""

from .core import (
    BudgetError,
    Protocol,
    SignVector,
    SparseCombination,
    count_pm1_in_span,
    enumerate_sign_vectors,
    is_integral,
    matrix_from_text,
    matrix_to_text,
    span_contains,
)
from .covering import (
    AntipodalHalf,
    CoveringCode,
    CoveringDesign,
    antipodal_half,
    covering_radius,
    erdos_spencer_bound,
    full_cube,
    greedy_covering_code,
    greedy_covering_design,
    repetition_pair,
)
from .construct import (
    BLOCK_5X6,
    BlockConstructionError,
    BlockSpec,
    RatePoint,
    block_5x6_spec,
    covering_code_block,
    custom_block,
    expand_blocks,
    load_protocol,
    nonsystematic_block,
    rate_point,
    save_protocol,
    trivial_protocol,
)
from .verify import (
    VerificationReport,
    min_access_for_M,
    subspace_cap_audit,
    verify_protocol,
)
from .bounds import (
    BoundCurve,
    asymptotic_lhs,
    binary_entropy,
    block_bound_admissible,
    block_bound_constrained,
    block_bound_curve,
    cor1_curve,
    cor1_lambda_min,
    log2_comb,
    region_export,
    thm1_admissible,
    thm1_curve,
    thm2_admissible,
)
from .approx import (
    ApproxProtocol,
    KsvdResult,
    approx_covering,
    approx_covering_codeonly,
    discard_blocks,
    ksvd,
    ksvd_approx_protocol,
    measure_epsilon,
    omp,
)

__version__ = "0.1.0"
