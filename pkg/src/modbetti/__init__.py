"""Exact Koszul cohomology of graded rings over prime fields."""

from .gfp import DEFAULT_PRIME, KERNEL_BACKEND, FieldContext, MatrixGF, matmul_mod
from .gradedring import (
    BigradedParametrization,
    GradedAlgebra,
    IdealPresentation,
    RingConstructionError,
    expected_hilbert,
    hilbert_check,
    ring_from_ideal,
    ring_from_parametrization,
)
from .instances import (
    DegenerateDrawError,
    InstanceSpec,
    build_ring,
    canonical_json,
    generate,
    hyperplane_section,
    lm_ledger,
    load_instance,
)
from .koszul import (
    BettiTable,
    ChainConditionError,
    GreenReport,
    KoszulCell,
    betti_table,
    euler_strand_check,
    gorenstein_duality_check,
    koszul_dim,
    lefschetz_compare,
    verify_green,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_PRIME",
    "KERNEL_BACKEND",
    "FieldContext",
    "MatrixGF",
    "matmul_mod",
    "BigradedParametrization",
    "GradedAlgebra",
    "IdealPresentation",
    "RingConstructionError",
    "expected_hilbert",
    "hilbert_check",
    "ring_from_ideal",
    "ring_from_parametrization",
    "DegenerateDrawError",
    "InstanceSpec",
    "build_ring",
    "canonical_json",
    "generate",
    "hyperplane_section",
    "lm_ledger",
    "load_instance",
    "BettiTable",
    "ChainConditionError",
    "GreenReport",
    "KoszulCell",
    "betti_table",
    "euler_strand_check",
    "gorenstein_duality_check",
    "koszul_dim",
    "lefschetz_compare",
    "verify_green",
    "__version__",
]
