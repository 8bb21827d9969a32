"""Superselector construction, verification, and decoding.

A (p, v, n)-superselector is an m x n binary matrix that is an
(i, v_i, n)-selector for every level i up to p: each i-column submatrix
contains at least v_i distinct rows of the identity. The package builds
such matrices at a union-bound threshold size (randomized or fully
deterministic), verifies them by brute force, and layers group-testing,
encoding, compression, and user-tracing applications on top.
"""

from .core import (
    BitMatrix,
    BudgetError,
    ColumnSet,
    DEFAULT_SUBSET_BUDGET,
    InputError,
    ParseError,
    SuperSelectorSpec,
    arithmetic_sum,
    boolean_sum,
    count_identity_rows,
    covered_columns,
    format_matrix,
    format_spec,
    format_vector,
    is_covered,
    is_list_disjunct,
    is_selector,
    is_superselector,
    parse_matrix,
    parse_spec,
    parse_vector,
    selector_spec,
)
from .sizing import (
    SampleDistribution,
    SizeBound,
    derand_threshold,
    selector_upper_bound,
    superselector_lower_bound,
    superselector_upper_bound,
    split_level,
)
from .construct import (
    ConstructionFailure,
    DerandState,
    FTable,
    PrecisionFault,
    build_f_table,
    conditional_probability,
    construct_derandomized,
    construct_randomized,
    construct_stacked,
    sample_random_matrix,
)
from .decode import (
    DecodeResult,
    InconsistentObservationError,
    additive_decode,
    approx_decode,
    identify_from_union,
)
from .apps import (
    CompressedWord,
    MonotoneEncoding,
    additive_gt_spec,
    approx_gt_spec,
    compress,
    decompress,
    fut_spec,
    list_disjunct_params,
    monotone_chain,
    monotone_decode,
    monotone_encode,
    mut_decode,
    mut_spec,
)

__all__ = [
    "BitMatrix",
    "BudgetError",
    "ColumnSet",
    "CompressedWord",
    "ConstructionFailure",
    "DEFAULT_SUBSET_BUDGET",
    "DecodeResult",
    "DerandState",
    "FTable",
    "InconsistentObservationError",
    "InputError",
    "MonotoneEncoding",
    "ParseError",
    "PrecisionFault",
    "SampleDistribution",
    "SizeBound",
    "SuperSelectorSpec",
    "additive_decode",
    "additive_gt_spec",
    "approx_decode",
    "approx_gt_spec",
    "arithmetic_sum",
    "boolean_sum",
    "build_f_table",
    "compress",
    "conditional_probability",
    "construct_derandomized",
    "construct_randomized",
    "construct_stacked",
    "count_identity_rows",
    "covered_columns",
    "decompress",
    "derand_threshold",
    "format_matrix",
    "format_spec",
    "format_vector",
    "fut_spec",
    "identify_from_union",
    "is_covered",
    "is_list_disjunct",
    "is_selector",
    "is_superselector",
    "list_disjunct_params",
    "monotone_chain",
    "monotone_decode",
    "monotone_encode",
    "mut_decode",
    "mut_spec",
    "parse_matrix",
    "parse_spec",
    "parse_vector",
    "sample_random_matrix",
    "selector_spec",
    "selector_upper_bound",
    "superselector_lower_bound",
    "superselector_upper_bound",
    "split_level",
]

__version__ = "0.1.0"
