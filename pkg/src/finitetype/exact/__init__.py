"""Exact arithmetic: rational coefficients, jet polynomials, tube expressions."""

from fractions import Fraction as BigRational

from .framevec import FrameVec, framevec_dphi, framevec_dt
from .jets import JetPoly, jet_derivative
from .tubexpr import LeadingTerm, TubeExpr, expr_add, expr_dphi, expr_dt, expr_mul


def leading_term(x: TubeExpr) -> LeadingTerm:
    return x.leading_term()


__all__ = [
    "BigRational",
    "FrameVec",
    "JetPoly",
    "LeadingTerm",
    "TubeExpr",
    "expr_add",
    "expr_dphi",
    "expr_dt",
    "expr_mul",
    "framevec_dphi",
    "framevec_dt",
    "jet_derivative",
    "leading_term",
]
