"""Exact decision of diagonalizability for higher degree forms.

The package decides whether a homogeneous polynomial of degree d >= 3
(equivalently a symmetric d-tensor) is a sum of d-th powers of
independent linear forms, working in exact arithmetic over the rationals
or a quadratic radical tower.  The route goes through the center of the
form: a commutative matrix algebra whose idempotent structure governs
every direct-sum decomposition.  Orthogonal and unitary decomposability
fall out as a direct check on the computed change of variables.
"""

from .center import CenterBasis, center_basis, center_dim, hessian_cross_check
from .decomp import (
    Block,
    Certificate,
    Decomposition,
    decompose,
    odeco_precheck,
    ortho_check,
    verify,
)
from .errors import (
    ConfigError,
    DegenerateFormError,
    DegreeTooLowError,
    DimensionMismatchError,
    FormSyntaxError,
    IndexRangeError,
    NotClosedError,
    NotHomogeneousError,
    NotRealError,
    NotSquareError,
    UnknownRadicalError,
)
from .fields import (
    FieldConfig,
    NeedsExtension,
    Scalar,
    parse_scalar,
    scalar_text,
    squarefree_part,
    try_sqrt,
)
from .forms import (
    Form,
    SymTensor,
    congruence,
    form_from_gram,
    form_text,
    gram_tensor,
    hessian_at,
    linear_text,
    parse_form,
    slice_matrix,
)
from .harness import (
    GroundTruth,
    expand_powersum,
    random_diagonalizable,
    random_orthogonal_rational,
    substitute_linear,
)
from .idem import (
    AlgebraDescription,
    AlgebraFactor,
    IdempotentSplit,
    classify_algebra,
    is_rank1_trace1,
    min_poly,
    mult_table,
    split_idempotents,
)
from .linalg import Matrix, block_diag, spans_equal
from .rank import Reduction, radical_basis, reduce_nondegenerate, slicing_rank

__version__ = "0.1.0"

__all__ = [
    "AlgebraDescription", "AlgebraFactor", "Block", "CenterBasis",
    "Certificate", "ConfigError", "Decomposition", "DegenerateFormError",
    "DegreeTooLowError", "DimensionMismatchError", "FieldConfig", "Form",
    "FormSyntaxError", "GroundTruth", "IdempotentSplit", "IndexRangeError",
    "Matrix", "NeedsExtension", "NotClosedError", "NotHomogeneousError",
    "NotRealError", "NotSquareError", "Reduction", "Scalar", "SymTensor",
    "UnknownRadicalError", "block_diag", "center_basis", "center_dim",
    "classify_algebra", "congruence", "decompose", "expand_powersum",
    "form_from_gram", "form_text", "gram_tensor", "hessian_at",
    "hessian_cross_check", "is_rank1_trace1", "linear_text", "min_poly",
    "mult_table", "odeco_precheck", "ortho_check", "parse_form",
    "parse_scalar", "radical_basis", "random_diagonalizable",
    "random_orthogonal_rational", "reduce_nondegenerate", "scalar_text",
    "slice_matrix", "slicing_rank", "spans_equal", "split_idempotents",
    "squarefree_part", "substitute_linear", "try_sqrt", "verify",
]
