"""Exact classification of triples (linear map, form, form) under congruence.

The package canonicalizes matrix triples (A: U -> V, B a form on U, C a form
on V) over the rational models of R, C and the quaternions, with exact
invertible-certificate output, and decomposes representations of the
four-vertex cycle of linear mappings into indecomposables.
"""

from .scalars import FieldSpec, all_field_specs, involute, parse_scalar, format_scalar, symmetric_sign
from .matrices import (
    Matrix,
    MatrixTriple,
    adjoint,
    apply_transformation,
    direct_sum_triple,
    rank_kernel,
    validate_triple,
)
from .catalog import (
    CanonicalDescriptor,
    SummandDescriptor,
    descriptor_normalize,
    make_F,
    make_G,
    make_Z,
    make_jordan,
    oslash,
    synth_summand,
)
from .quadruple import (
    QuadHom,
    Quadruple,
    decompose_quadruple,
    dual_quadruple,
    regularize_cycle,
    verify_quad_iso,
)

__all__ = [
    "FieldSpec",
    "Matrix",
    "MatrixTriple",
    "CanonicalDescriptor",
    "SummandDescriptor",
    "QuadHom",
    "Quadruple",
    "adjoint",
    "all_field_specs",
    "apply_transformation",
    "decompose_quadruple",
    "descriptor_normalize",
    "direct_sum_triple",
    "dual_quadruple",
    "format_scalar",
    "involute",
    "make_F",
    "make_G",
    "make_Z",
    "make_jordan",
    "oslash",
    "parse_scalar",
    "rank_kernel",
    "regularize_cycle",
    "symmetric_sign",
    "synth_summand",
    "validate_triple",
    "verify_quad_iso",
]

__version__ = "0.1.0"
