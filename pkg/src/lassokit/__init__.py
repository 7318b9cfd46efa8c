"""Lasso contractions of finite copresheaves and pushforward of structured decompositions."""

from .colimits import (Cocone, FiniteDiagram, Span, coequalizer, colimit, image_factorization,
                       is_colimit_cocone, pullback, pushout)
from .contraction import (Contraction, PushforwardResult, contract, equivalence_check,
                          pushforward_images, pushforward_span)
from .cset import Hom, Instance, check_hom, enumerate_homs, find_isomorphism, is_epi, is_iso, is_mono
from .decomposition import (ShapeGraph, StructuredDecomposition, decomposition_colimit,
                            pullback_decomposition, validate_decomposition, width)
from .lasso import (Lasso, compose_lassos, lasso_cc, lasso_color, lasso_morphism_exists, lasso_rgrph,
                    lasso_trivial, smoothing)
from .schema import SchemaPresentation, builtin_schema, validate_schema

__all__ = [
    "Cocone", "FiniteDiagram", "Span", "coequalizer", "colimit", "image_factorization",
    "is_colimit_cocone", "pullback", "pushout",
    "Contraction", "PushforwardResult", "contract", "equivalence_check", "pushforward_images",
    "pushforward_span",
    "Hom", "Instance", "check_hom", "enumerate_homs", "find_isomorphism", "is_epi", "is_iso", "is_mono",
    "ShapeGraph", "StructuredDecomposition", "decomposition_colimit", "pullback_decomposition",
    "validate_decomposition", "width",
    "Lasso", "compose_lassos", "lasso_cc", "lasso_color", "lasso_morphism_exists", "lasso_rgrph",
    "lasso_trivial", "smoothing",
    "SchemaPresentation", "builtin_schema", "validate_schema",
]
