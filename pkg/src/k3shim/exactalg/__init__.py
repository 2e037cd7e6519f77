"""Exact arithmetic kernel."""
from .ec import EllipticCurvePoint, WeierstrassCurve, ec_add, ec_multiple, ec_negate
from .errors import (
    ComputationMismatch,
    DegenerateBasis,
    InvalidPrime,
    K3ShimError,
    NoSquareRootAtPoint,
    NotRecognized,
    PrecisionLost,
    VerificationFailed,
)
from .fields import NFElem, NumberField, RatFunc
from .lattice import lll_reduce, recognize_algebraic
from .mpoly import MPoly
from .poly import (
    Poly,
    content_int,
    field_sqrt,
    format_poly,
    inverse,
    is_square_poly,
    multiplicity,
    poly_discriminant,
    poly_gcd,
    poly_xgcd,
    rational_roots,
    resultant,
    squarefree_decomposition,
)
from .scalars import (
    Mod,
    Padic,
    is_prime,
    legendre_symbol,
    rational_reconstruct,
    rational_sqrt,
    sqrt_mod,
    squarefree_int,
)
from .series import TruncatedSeries, series_sqrt

__all__ = [
    "ComputationMismatch", "DegenerateBasis", "EllipticCurvePoint", "InvalidPrime",
    "K3ShimError", "MPoly", "Mod", "NFElem", "NoSquareRootAtPoint", "NotRecognized",
    "NumberField", "Padic", "Poly", "PrecisionLost", "RatFunc", "TruncatedSeries",
    "VerificationFailed", "WeierstrassCurve", "content_int", "ec_add", "ec_multiple",
    "ec_negate", "field_sqrt", "format_poly", "inverse", "is_prime", "is_square_poly",
    "legendre_symbol", "lll_reduce", "multiplicity", "poly_discriminant", "poly_gcd",
    "poly_xgcd", "rational_reconstruct", "rational_roots", "rational_sqrt",
    "recognize_algebraic", "resultant", "series_sqrt", "sqrt_mod", "squarefree_decomposition",
    "squarefree_int",
]
