"""qinfo: a numerical toolkit for quantum information at desk scale.

Dense operator algebra, quantum operations, entropies, distance measures,
two-qubit entanglement, process tomography, block compression, error
correction and capacity bounds, with a CLI (`qinfo`) and an acceptance
suite (`qinfo --check`).
"""

from .core import (
    SchmidtDecomposition,
    abs_op,
    dag,
    ket,
    mixed_schmidt_verify,
    partial_trace,
    projector,
    purify,
    schmidt_operator,
    schmidt_pure,
    sqrt_psd,
    tensor,
    validate_density,
)
from .entropy import (
    Ensemble,
    binary,
    coherent_information,
    conditional_mutual,
    entropy_exchange,
    holevo_chi,
    relative_entropy,
    shannon,
    vn_entropy,
)
from .metrics import (
    absolute_distance,
    angle,
    derived_metrics,
    dynamic_distance,
    dynamic_fidelity,
    error,
    fidelity,
)
from .ops import (
    POVM,
    QuantumOperation,
    apply,
    canonical_kraus,
    choi,
    classify,
    compose,
    environment_model,
    kraus_equivalent,
    kraus_from_environment,
    maps_equal,
    povm_outcomes,
    quantum_op,
    qubit_affine,
    standard_channel,
    tensor_ops,
    unitary_op,
    w_matrix,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
