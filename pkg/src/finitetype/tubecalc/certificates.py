"""Exact infinite-type certificates for anchor rings and tubes."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .._util import rational_json
from ..exact import TubeExpr
from . import anchor as _anchor
from . import tube as _tube


@dataclass
class InfiniteTypeCertificate:
    mode: str  # "anchor" | "tube"
    order: int
    leading_exponent: int
    lower_exponent: int
    leading_coefficient: Fraction
    nonzero: bool
    relation: str
    details: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.nonzero and self.leading_exponent > self.lower_exponent and all(
            self.details.get("checks", {}).values()
        )

    def to_json(self) -> dict:
        out = asdict(self)
        out["leading_coefficient"] = rational_json(self.leading_coefficient)
        out["valid"] = self.valid
        return out


# -- pole growth: D(beta^m / (kappa c)^n) ------------------------------------------------


@dataclass
class PoleGrowthReport:
    m: int
    n: int
    leading_coefficient: Fraction
    expected_coefficient: int
    remainder_pole_order: int
    remainder_den_kc: int
    passed: bool
    remainder: TubeExpr

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "leading_coefficient": rational_json(self.leading_coefficient),
            "expected_coefficient": self.expected_coefficient,
            "remainder_pole_order": self.remainder_pole_order,
            "remainder_den_kc": self.remainder_den_kc,
            "passed": self.passed,
        }


def _ratio_of_leading(x: TubeExpr, ref: TubeExpr) -> Fraction | None:
    lx, lr = x.leading_term(), ref.leading_term()
    if (lx.power, lx.sin_deg, lx.kappa_den) != (lr.power, lr.sin_deg, lr.kappa_den):
        return None
    return lx.coeff.ratio_to(lr.coeff)


def pole_growth_check(m: int, n: int, *, m_max: int = 5, n_max: int = 9) -> PoleGrowthReport:
    """Check D(beta^m/(kc)^n) = -n(n+2) beta^(m+2)/(kc)^(n+4) + O((kc)^-(n+3))."""
    if not (1 <= m <= m_max and 1 <= n <= n_max):
        raise _tube.EngineLimitError(f"(m, n) = ({m}, {n}) outside bounds ({m_max}, {n_max})")
    beta = TubeExpr.beta()
    image = _tube.apply_delta3_tube(beta**m * TubeExpr.inv_kc(n))
    ref = beta ** (m + 2) * TubeExpr.inv_kc(n + 4)
    coeff = _ratio_of_leading(image, ref)
    expected = -n * (n + 2)
    if coeff is None:
        return PoleGrowthReport(m, n, Fraction(0), expected, image.pole_order(), image.den_kc, False, image)
    remainder = image - coeff * ref
    pole = remainder.pole_order()
    passed = coeff == expected and pole <= n + 3
    return PoleGrowthReport(m, n, Fraction(coeff), expected, pole, remainder.den_kc, passed, remainder)


# -- tube iterates ---------------------------------------------------------------


def d_lambda_closed_form(lam: int) -> int:
    return (-1) ** (lam - 1) * math.prod(2 * j - 1 for j in range(1, 2 * lam))


@dataclass
class IterateShape:
    lam: int
    d: Fraction
    t_pole_order: int
    remainder_pole_order: int
    h_pole_order: int
    b_pole_order: int

    @property
    def matches_shape(self) -> bool:
        lam = self.lam
        return (
            self.t_pole_order == 4 * lam - 1
            and self.remainder_pole_order <= 4 * lam - 2
            and self.h_pole_order <= 4 * lam - 2
            and self.b_pole_order <= 4 * lam - 2
        )


def iterate_shape(lam: int, *, bound: int = _tube.DEFAULT_MAX_ITERATE) -> IterateShape:
    """Split D^lam x = d beta^(2lam-1)/(kc)^(4lam-1) t + P/(kc)^(4lam-2)."""
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    v = _tube.tube_iterates(lam, bound=bound)[-1]
    ref = TubeExpr.beta() ** (2 * lam - 1) * TubeExpr.inv_kc(4 * lam - 1)
    d = _ratio_of_leading(v.t_coeff, ref)
    if d is None:
        raise ArithmeticError(f"t-component of D^{lam} x is not led by a multiple of beta^{2 * lam - 1}")
    remainder = v.t_coeff - d * ref
    return IterateShape(
        lam,
        Fraction(d),
        v.t_coeff.pole_order(),
        remainder.pole_order(),
        v.h_coeff.pole_order(),
        v.b_coeff.pole_order(),
    )


def _relation_text(lam: int) -> str:
    lower = [f"c_{j} D^{lam + 1 - j} x" for j in range(1, lam + 1)]
    lower = [t.replace("D^1 x", "D x") for t in lower]
    if len(lower) > 3:
        lower = lower[:1] + ["..."] + lower[-1:]
    return " + ".join([f"D^{lam + 1} x"] + lower) + " = 0"


def tube_infinite_type_certificate(
    lam: int, *, beta_zero: bool = False, bound: int = _tube.DEFAULT_MAX_ITERATE
) -> InfiniteTypeCertificate:
    """No monic relation of order lam+1 among the tube iterates.

    With ``beta_zero`` the curve is a circle (kappa constant, tau = 0) and the
    anchor-ring certificate is returned instead.
    """
    if beta_zero:
        cert = anchor_infinite_type_certificate(max(lam + 1, 1))
        cert.notes.append("beta = 0: kappa constant, tau = 0; tube is an anchor ring")
        return cert
    if lam < 1:
        raise ValueError("lambda must be >= 1")
    top = iterate_shape(lam + 1, bound=bound)
    lower = [iterate_shape(k, bound=bound) for k in range(1, lam + 1)]
    lower_exp = max([top.remainder_pole_order] + [s.t_pole_order for s in lower])
    d_next = top.d
    checks = {
        "closed_form": d_next == d_lambda_closed_form(lam + 1),
        "recursion": all(
            b.d == -(4 * a.lam - 1) * (4 * a.lam + 1) * a.d
            for a, b in zip(lower, lower[1:] + [top])
        ),
        "shape": top.matches_shape and all(s.matches_shape for s in lower),
    }
    notes = [
        "jets treated as independent symbols; leading t-coefficient at cos(phi)=0 is "
        f"{d_next} (kappa tau)^{2 * lam + 1} sin(phi), nonzero whenever tau is not identically 0",
    ]
    notes.extend(_planar_note(lam + 1, bound))
    return InfiniteTypeCertificate(
        mode="tube",
        order=lam,
        leading_exponent=top.t_pole_order,
        lower_exponent=lower_exp,
        leading_coefficient=d_next,
        nonzero=d_next != 0,
        relation=_relation_text(lam),
        details={
            "d": {str(s.lam): rational_json(s.d) for s in lower + [top]},
            "t_pole_orders": {str(s.lam): s.t_pole_order for s in lower + [top]},
            "checks": checks,
        },
        notes=notes,
    )


def _planar_note(lam: int, bound: int) -> list[str]:
    """Pole growth of the h-component with tau = 0 (not covered by the t argument)."""
    from ..exact import monomial as mono

    def drop_tau(e: TubeExpr) -> TubeExpr:
        kept = {
            k: v
            for k, v in e.terms.items()
            if not any(f >= mono.JET_START and (f - mono.JET_START) % 2 for f, _ in mono.fields(k))
        }
        return TubeExpr(kept, e.den_kc, e.den_delta)

    orders = [drop_tau(v.h_coeff).pole_order() for v in _tube.tube_iterates(lam, bound=bound)[1:]]
    strictly = all(b > a for a, b in zip(orders, orders[1:]))
    return [
        f"tau = 0 sub-case: h-component pole orders {orders}"
        + (" strictly increase (leading coefficients formally nonzero)" if strictly else " do not increase")
    ]


# -- anchor ring -----------------------------------------------------------------


def anchor_infinite_type_certificate(
    m_max: int, *, bound: int = _anchor.DEFAULT_MAX_ANCHOR
) -> InfiniteTypeCertificate:
    """Triangularity of {x1, D x1, ..., D^m x1} in the basis cos(phi)/cos^(2j) t."""
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    seq = _anchor.anchor_iterates(m_max, bound=bound)
    pivots = []
    triangular = True
    closed = True
    for m in range(1, m_max + 1):
        table = _anchor.coefficient_table(seq[m], m)
        pivots.append(table.d[-1])
        closed &= table.d[-1] == _anchor.d_last_closed_form(m)
        closed &= table.d[0] == _anchor.d_first_closed_form(m)
        # nothing of lower order reaches cos(phi)/cos^(2m) t
        for k in range(m):
            triangular &= seq[k].coefficient(cos_t=-2 * m, cos_phi=1, a=1) == 0
    last = Fraction(pivots[-1])
    return InfiniteTypeCertificate(
        mode="anchor",
        order=m_max,
        leading_exponent=2 * m_max,
        lower_exponent=2 * m_max - 2,
        leading_coefficient=last,
        nonzero=all(p != 0 for p in pivots),
        relation=f"D^m x1 + c_1 D^(m-1) x1 + ... + c_m x1 = 0, m <= {m_max}",
        details={
            "pivots": [rational_json(p) for p in pivots],
            "checks": {"triangular": triangular, "closed_form": closed},
        },
        notes=["pivot m is the coefficient of a cos(phi)/cos^(2m) t, present only in D^m x1"],
    )
