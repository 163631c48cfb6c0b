"""Exact Toeplitz quantization of quadratic algebras over Q(i)."""

from .algebra import (
    ConfluenceFailure,
    NcPoly,
    Presentation,
    PresentationError,
    check_confluence,
    multiply,
    normal_form,
)
from .axioms import AxiomReport, check_model, verify_axioms
from .ccr import (
    DeformedRelation,
    DequantizedAlgebra,
    FreeElem,
    Relation,
    classical_relation,
    dequantize,
    find_relations,
    hbar_deform,
    hbar_deform_inverse,
    pi_eval,
    search_relations,
)
from .modelfile import ModelConfig, ModelParseError, parse_model, parse_symbol, render_model
from .quantization import (
    GramData,
    Model,
    ModelError,
    TruncatedOperator,
    annihilation_op,
    basis,
    creation_op,
    inner_product,
    kernel_witness_check,
    multiplication_op,
    projection,
    toeplitz_op,
)
from .scalar import Scalar, parse_scalar
from .symbols import SymbolElem, conjugate, embed, embed_star, left_act, star_multiply

__all__ = [
    "ConfluenceFailure",
    "NcPoly",
    "Presentation",
    "PresentationError",
    "check_confluence",
    "multiply",
    "normal_form",
    "AxiomReport",
    "check_model",
    "verify_axioms",
    "DeformedRelation",
    "DequantizedAlgebra",
    "FreeElem",
    "Relation",
    "classical_relation",
    "dequantize",
    "find_relations",
    "hbar_deform",
    "hbar_deform_inverse",
    "pi_eval",
    "search_relations",
    "ModelConfig",
    "ModelParseError",
    "parse_model",
    "parse_symbol",
    "render_model",
    "GramData",
    "Model",
    "ModelError",
    "TruncatedOperator",
    "annihilation_op",
    "basis",
    "creation_op",
    "inner_product",
    "kernel_witness_check",
    "multiplication_op",
    "projection",
    "toeplitz_op",
    "Scalar",
    "parse_scalar",
    "SymbolElem",
    "conjugate",
    "embed",
    "embed_star",
    "left_act",
    "star_multiply",
]
