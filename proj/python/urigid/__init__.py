"""Universal rigidity certificates for bar frameworks."""

from ._core import (
    Certificate,
    Error,
    Framework,
    affine_flex,
    certify,
    detect_quadric,
    find_max_rank_psd_stress,
    gale_basis,
    generate,
    is_general_position,
    named_examples,
    refute,
    stress_matrix,
    stress_space_basis,
    verify,
)

__all__ = [
    "Certificate",
    "Error",
    "Framework",
    "affine_flex",
    "certify",
    "detect_quadric",
    "find_max_rank_psd_stress",
    "gale_basis",
    "generate",
    "is_general_position",
    "named_examples",
    "refute",
    "stress_matrix",
    "stress_space_basis",
    "verify",
]
