from .basis import DIM, PATHS, POLS, BasisLabel, all_labels, basis_index
from .jacobi import jacobi_eigh
from .linalg import (
    LinearOperator,
    Spectrum,
    StateVector,
    apply,
    exact_rank,
    exact_spectrum,
    inner,
    kron,
    kron_vectors,
    operator_from_json,
    proportionality,
    tensor_embed,
    vector_from_json,
)
from .scalar import (
    HALF,
    INV_SQRT2,
    ONE,
    SQRT2,
    ZERO,
    AlgebraicScalar,
    scalar,
    scalar_arith,
)

__all__ = [
    "DIM",
    "PATHS",
    "POLS",
    "BasisLabel",
    "all_labels",
    "basis_index",
    "jacobi_eigh",
    "LinearOperator",
    "Spectrum",
    "StateVector",
    "apply",
    "exact_rank",
    "exact_spectrum",
    "inner",
    "kron",
    "kron_vectors",
    "operator_from_json",
    "proportionality",
    "tensor_embed",
    "vector_from_json",
    "HALF",
    "INV_SQRT2",
    "ONE",
    "SQRT2",
    "ZERO",
    "AlgebraicScalar",
    "scalar",
    "scalar_arith",
]
