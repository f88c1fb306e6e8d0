"""Exact arithmetic in real number fields and exact linear algebra over them."""

from .field import (
    QQ,
    FieldElement,
    NumberField,
    as_rational,
    field_sign,
    format_univariate,
    parse_univariate,
)
from .matrix import FieldMatrix, common_field, det, left_kernel, rank, right_kernel
from .polysys import (
    NoSolution,
    Polynomial,
    PositiveDimensional,
    SystemSolution,
    UnsupportedExtension,
    det_poly,
    groebner,
    is_zero_dimensional,
    polynomial_ring,
    solve_multilinear_system,
)

__all__ = [
    "QQ",
    "FieldElement",
    "NumberField",
    "as_rational",
    "field_sign",
    "format_univariate",
    "parse_univariate",
    "FieldMatrix",
    "common_field",
    "det",
    "left_kernel",
    "rank",
    "right_kernel",
    "NoSolution",
    "Polynomial",
    "PositiveDimensional",
    "SystemSolution",
    "UnsupportedExtension",
    "det_poly",
    "groebner",
    "is_zero_dimensional",
    "polynomial_ring",
    "solve_multilinear_system",
]
