"""Exact matrix Kloosterman sums over finite fields.

K_n(a, b) = sum over x in GL_n(F_q) of psi(tr(ax + b x^(-1))), with
psi the canonical additive character.  Values live in Z[zeta_p] and
every computation here is exact integer arithmetic; floating point
only ever appears when a caller asks for an absolute value.
"""

from .errors import (
    BudgetExceeded,
    MatKloosError,
    NoExactPath,
)
from .ffield import CycloInt, FieldCtx, FqElem, cyclo_abs, make_field
from .combinat import (
    Involution,
    Partition,
    check_partition,
    gl_order,
    involutions,
    partitions,
    q_binomial,
    rank_count,
)
from .matfq import (
    DEFAULT_BUDGET,
    JordanData,
    MatFq,
    SpectralClass,
    block_diag,
    char_poly,
    companion_matrix,
    enumerate_gl,
    jordan_data,
    jordan_matrix,
    mat_inverse,
    nilpotent_from_epsilons,
    random_gl,
    random_matrix,
    spectral_class,
)
from .oracle import CellSpec, cell_oracle, k1_sum, kloosterman_oracle
from .symbolic import (
    KPoly,
    full_block_cell_poly,
    identity_cell_poly,
    involution_closed_form,
    kpoly_eval,
    n4_cell_table,
    partition_poly,
    shape_epsilons,
    single_block_poly,
    transposition_cell_poly,
)
from .evaluator import (
    BoundReport,
    ConjectureInstance,
    CubeRootCheck,
    EvalResult,
    bound_report,
    conjecture_scan,
    cube_root_family_check,
    eval_kn,
    eval_knab,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "BudgetExceeded",
    "CellSpec",
    "ConjectureInstance",
    "CubeRootCheck",
    "CycloInt",
    "DEFAULT_BUDGET",
    "EvalResult",
    "FieldCtx",
    "FqElem",
    "Involution",
    "JordanData",
    "KPoly",
    "MatFq",
    "MatKloosError",
    "NoExactPath",
    "Partition",
    "SpectralClass",
    "block_diag",
    "bound_report",
    "cell_oracle",
    "char_poly",
    "check_partition",
    "companion_matrix",
    "conjecture_scan",
    "cube_root_family_check",
    "cyclo_abs",
    "enumerate_gl",
    "eval_kn",
    "eval_knab",
    "full_block_cell_poly",
    "gl_order",
    "identity_cell_poly",
    "involution_closed_form",
    "involutions",
    "jordan_data",
    "jordan_matrix",
    "k1_sum",
    "kloosterman_oracle",
    "kpoly_eval",
    "make_field",
    "mat_inverse",
    "n4_cell_table",
    "nilpotent_from_epsilons",
    "partition_poly",
    "partitions",
    "q_binomial",
    "random_gl",
    "random_matrix",
    "rank_count",
    "shape_epsilons",
    "single_block_poly",
    "spectral_class",
    "transposition_cell_poly",
]
