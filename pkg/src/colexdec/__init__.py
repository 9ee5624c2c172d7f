"""Decode 3D color codes by projecting them onto 3D toric codes.

The package builds 4-colored 3D cell complexes and their duals, derives
the color-restricted minor complexes, decodes the toric-code instances
living on those minors, and reassembles and lifts the component estimates
into a correction for the full code.  A Monte Carlo harness and a small
CLI sit on top.
"""

from .cellcomplex import (
    COLOR_PAIRS,
    COLORS,
    CellComplex,
    Colex,
    Color,
    DualComplex,
    ValidationReport,
    build_bcc_colex,
    colex_from_dict,
    colex_to_dict,
    complement_pair,
    dual,
    first_betti_number,
    load_colex,
    save_colex,
    validate_colex,
)
from .code import (
    ErrorSupport,
    ResidualClass,
    StabilizerMatrices,
    Syndrome,
    code_dimension,
    residual_class,
    stabilizer_matrices,
    syndrome_of,
)
from .minors import (
    MinorComplexC,
    MinorComplexCC,
    edge_boundary,
    face_boundary,
    minor_c,
    minor_cc,
)
from .pipeline import (
    DecodeFailure,
    DecodeResult,
    DecodingContext,
    EdgeBoundaryEstimate,
    FaceBoundaryEstimate,
    FailureMode,
    as_context,
    check_edge_boundary,
    decode,
    estimate_x_boundary,
    estimate_z_edge_boundary,
    lift_boundary,
    project_x_syndrome,
    project_z_syndrome,
)
from .sim import (
    NoiseModel,
    SweepPoint,
    SweepReport,
    TrialRecord,
    VerificationError,
    run_trials,
    sweep,
    wilson_interval,
)
from .toricdecoder import (
    DEFAULT_CAPS,
    DecoderCaps,
    DecoderKind,
    DecoderRefusalError,
    InvalidSyndromeError,
    ToricXInstance,
    ToricZInstance,
    decode_toric_x,
    decode_toric_z,
)

__version__ = "0.1.0"

__all__ = [
    "COLOR_PAIRS",
    "COLORS",
    "CellComplex",
    "Colex",
    "Color",
    "DualComplex",
    "ValidationReport",
    "build_bcc_colex",
    "colex_from_dict",
    "colex_to_dict",
    "complement_pair",
    "dual",
    "first_betti_number",
    "load_colex",
    "save_colex",
    "validate_colex",
    "ErrorSupport",
    "ResidualClass",
    "StabilizerMatrices",
    "Syndrome",
    "code_dimension",
    "residual_class",
    "stabilizer_matrices",
    "syndrome_of",
    "MinorComplexC",
    "MinorComplexCC",
    "edge_boundary",
    "face_boundary",
    "minor_c",
    "minor_cc",
    "DecodeFailure",
    "DecodeResult",
    "DecodingContext",
    "EdgeBoundaryEstimate",
    "FaceBoundaryEstimate",
    "FailureMode",
    "as_context",
    "check_edge_boundary",
    "decode",
    "estimate_x_boundary",
    "estimate_z_edge_boundary",
    "lift_boundary",
    "project_x_syndrome",
    "project_z_syndrome",
    "NoiseModel",
    "SweepPoint",
    "SweepReport",
    "TrialRecord",
    "VerificationError",
    "run_trials",
    "sweep",
    "wilson_interval",
    "DEFAULT_CAPS",
    "DecoderCaps",
    "DecoderKind",
    "DecoderRefusalError",
    "InvalidSyndromeError",
    "ToricXInstance",
    "ToricZInstance",
    "decode_toric_x",
    "decode_toric_z",
    "__version__",
]
