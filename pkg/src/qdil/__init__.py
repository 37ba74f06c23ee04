"""Construct, classify and verify unitary dilations of quantum operations."""
from .analysis import (
    BoundsReport,
    MajorizationReport,
    ancilla_lower_bound,
    check_bounds,
    check_majorization_constraint,
    dilation_majorization_vector,
    majorizes,
)
from .channels import (
    ChoiOperator,
    DensityState,
    QuantumOperation,
    apply,
    apply_choi,
    apply_dual,
    canonical_kraus,
    choi,
    is_trace_preserving,
    new_quantum_operation,
    occurrence_probability,
)
from .dilations import (
    FreeDilation,
    HalmosDilation,
    InteractingDilation,
    IsometricDilation,
    PowerDilation,
    apply_free,
    apply_halmos,
    apply_interacting,
    apply_power,
    complementary_kraus,
    free_dilation,
    halmos_dilation,
    interacting_dilation,
    isometric_dilation,
    power_dilation,
    stinespring_contraction,
)
from .errors import (
    DilationMismatchError,
    DimensionError,
    FormatError,
    PreconditionError,
    QdilError,
    ValidationError,
)
from .verify import ChannelSpec, cp_audit, mix_kraus, random_channel, reconstruction_error

__version__ = "0.1.0"

__all__ = [
    "BoundsReport",
    "ChannelSpec",
    "ChoiOperator",
    "DensityState",
    "DilationMismatchError",
    "DimensionError",
    "FormatError",
    "FreeDilation",
    "HalmosDilation",
    "InteractingDilation",
    "IsometricDilation",
    "MajorizationReport",
    "PowerDilation",
    "PreconditionError",
    "QdilError",
    "QuantumOperation",
    "ValidationError",
    "ancilla_lower_bound",
    "apply",
    "apply_choi",
    "apply_dual",
    "apply_free",
    "apply_halmos",
    "apply_interacting",
    "apply_power",
    "canonical_kraus",
    "check_bounds",
    "check_majorization_constraint",
    "choi",
    "complementary_kraus",
    "cp_audit",
    "dilation_majorization_vector",
    "free_dilation",
    "halmos_dilation",
    "interacting_dilation",
    "is_trace_preserving",
    "isometric_dilation",
    "majorizes",
    "mix_kraus",
    "new_quantum_operation",
    "occurrence_probability",
    "power_dilation",
    "random_channel",
    "reconstruction_error",
    "stinespring_contraction",
]
