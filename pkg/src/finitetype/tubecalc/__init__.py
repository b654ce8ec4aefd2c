"""Exact tube and anchor-ring operator calculus and certificates."""

from .anchor import (
    AnchorExpr,
    CoefficientTable,
    anchor_iterate_x1,
    anchor_iterates,
    anchor_position,
    apply_delta3_anchor,
    coefficient_table,
    d_first_closed_form,
    d_last_closed_form,
    secant_power_image,
)
from .certificates import (
    InfiniteTypeCertificate,
    anchor_infinite_type_certificate,
    d_lambda_closed_form,
    iterate_shape,
    pole_growth_check,
    tube_infinite_type_certificate,
)
from .tube import (
    EngineLimitError,
    TubeOperator,
    apply_delta3_tube,
    tube_iterates,
    tube_operator,
    tube_position,
)


def tube_iterate(lam: int, **kw):
    """IterateSequence [x, D x, ..., D^lam x] with the leading shape asserted."""
    seq = tube_iterates(lam, **kw)
    for k in range(1, lam + 1):
        shape = iterate_shape(k, **kw)
        if not shape.matches_shape or shape.d != d_lambda_closed_form(k):
            raise ArithmeticError(f"iterate {k} does not have the expected shape: {shape}")
    return seq


def d_closed_form_check(m: int, **kw) -> dict:
    _, table = anchor_iterate_x1(m, **kw)
    return {
        "m": m,
        "d_first": table.d[0],
        "d_first_closed": d_first_closed_form(m),
        "d_last": table.d[-1],
        "d_last_closed": d_last_closed_form(m),
        "passed": table.d[0] == d_first_closed_form(m) and table.d[-1] == d_last_closed_form(m),
    }


__all__ = [
    "AnchorExpr",
    "CoefficientTable",
    "EngineLimitError",
    "InfiniteTypeCertificate",
    "TubeOperator",
    "anchor_infinite_type_certificate",
    "coefficient_table",
    "anchor_iterate_x1",
    "anchor_iterates",
    "anchor_position",
    "apply_delta3_anchor",
    "apply_delta3_tube",
    "d_closed_form_check",
    "d_first_closed_form",
    "d_lambda_closed_form",
    "d_last_closed_form",
    "secant_power_image",
    "iterate_shape",
    "pole_growth_check",
    "tube_infinite_type_certificate",
    "tube_iterate",
    "tube_iterates",
    "tube_operator",
    "tube_position",
]
