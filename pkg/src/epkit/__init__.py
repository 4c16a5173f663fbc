"""Exact and floating-point tools for EP-type matrix classes.

Moore-Penrose inverses, range inclusions, the (p-)(hypo-)EP family of
classes with cross-checked characterizations, the block representation over
R(T*) (+) N(T), and a seeded search for separating examples.
"""

__version__ = "0.1.0"

from .scalar import EXACT, FLOAT, BackendMismatch, Gaussian  # noqa: E402
from .matrix import DEFAULT_TOL, Matrix, ShapeError, Tolerance, adjoint, rank  # noqa: E402
from .polynomial import Polynomial, poly_eval  # noqa: E402
from .pinv import cauchy_dual, moore_penrose, penrose_residuals  # noqa: E402
from .ranges import douglas_constant, douglas_constant_dual, pointwise_constant, range_included  # noqa: E402
from .classes import (  # noqa: E402
    ClassReport,
    ConsensusFailure,
    classify,
    is_EP,
    is_hypo_EP,
    is_n_EP,
    is_n_hypo_EP,
    is_normal,
    is_p_EP,
    is_p_hypo_EP,
    is_p_normal,
    is_SD,
    unitary_conjugation_check,
)
from .audit import AuditViolation, implication_audit  # noqa: E402
from .blockrep import BlockRep, block_form_of_poly, orthodecompose, pinv_from_blocks, rep_criterion  # noqa: E402
from .parser import ParseError, parse_polynomial, parse_scalar  # noqa: E402
from .witness import SeparationQuery, fixture, search_separation  # noqa: E402

__all__ = [
    "__version__",
    "EXACT",
    "FLOAT",
    "BackendMismatch",
    "Gaussian",
    "DEFAULT_TOL",
    "Matrix",
    "ShapeError",
    "Tolerance",
    "adjoint",
    "rank",
    "Polynomial",
    "poly_eval",
    "cauchy_dual",
    "moore_penrose",
    "penrose_residuals",
    "douglas_constant",
    "douglas_constant_dual",
    "pointwise_constant",
    "range_included",
    "ClassReport",
    "ConsensusFailure",
    "classify",
    "is_EP",
    "is_hypo_EP",
    "is_n_EP",
    "is_n_hypo_EP",
    "is_normal",
    "is_p_EP",
    "is_p_hypo_EP",
    "is_p_normal",
    "is_SD",
    "unitary_conjugation_check",
    "AuditViolation",
    "implication_audit",
    "BlockRep",
    "block_form_of_poly",
    "orthodecompose",
    "pinv_from_blocks",
    "rep_criterion",
    "ParseError",
    "parse_polynomial",
    "parse_scalar",
    "SeparationQuery",
    "fixture",
    "search_separation",
]
