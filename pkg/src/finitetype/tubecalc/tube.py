"""Third-form Beltrami operator of a tube about a unit-speed curve."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from ..exact import FrameVec, TubeExpr

DEFAULT_MAX_ITERATE = 4


class EngineLimitError(RuntimeError):
    """An exact computation was requested beyond its configured bound."""


@dataclass(frozen=True)
class TubeOperator:
    """Coefficients of

        (1/(kappa c)^2) [ -f_tt + 2 tau f_tphi - (tau^2 + kappa^2 c^2) f_phiphi
                          + beta/(kappa c) f_t
                          + (tau' + kappa^2 c s - tau beta/(kappa c)) f_phi ]

    with ``beta = kappa' cos(phi) + kappa tau sin(phi)``.
    """

    prefactor: TubeExpr = field(default_factory=lambda: TubeExpr.inv_kc(2))
    c_tt: TubeExpr = field(default_factory=lambda: TubeExpr.const(-1))
    c_tphi: TubeExpr = field(default_factory=lambda: 2 * TubeExpr.tau())
    c_phiphi: TubeExpr = field(
        default_factory=lambda: -(TubeExpr.tau() ** 2 + (TubeExpr.kappa() * TubeExpr.cos()) ** 2)
    )
    c_t: TubeExpr = field(default_factory=lambda: TubeExpr.beta() * TubeExpr.inv_kc(1))
    c_phi: TubeExpr = field(
        default_factory=lambda: TubeExpr.tau(1)
        + TubeExpr.kappa() ** 2 * TubeExpr.cos() * TubeExpr.sin()
        - TubeExpr.tau() * TubeExpr.beta() * TubeExpr.inv_kc(1)
    )

    def coefficients(self) -> dict[str, TubeExpr]:
        return {
            "prefactor": self.prefactor,
            "tt": self.c_tt,
            "tphi": self.c_tphi,
            "phiphi": self.c_phiphi,
            "t": self.c_t,
            "phi": self.c_phi,
        }

    def evaluate(self, phi, kappa, tau) -> dict[str, float]:
        """Numeric coefficients (prefactor folded in) at one point."""
        pre = self.prefactor.evaluate(phi, kappa, tau)
        return {
            name: pre * c.evaluate(phi, kappa, tau)
            for name, c in self.coefficients().items()
            if name != "prefactor"
        }


@lru_cache(maxsize=1)
def tube_operator() -> TubeOperator:
    return TubeOperator()


def tube_position() -> FrameVec:
    """alpha + r cos(phi) h + r sin(phi) b."""
    r = TubeExpr.r()
    return FrameVec(TubeExpr.const(1), TubeExpr(), r * TubeExpr.cos(), r * TubeExpr.sin())


def apply_delta3_tube(f):
    """Exact image of a TubeExpr or FrameVec under the tube operator."""
    if isinstance(f, FrameVec):
        return _apply_vec(f)
    if isinstance(f, TubeExpr):
        return _apply_scalar(f)
    raise TypeError(f"expected TubeExpr or FrameVec, got {type(f).__name__}")


def _apply_scalar(f: TubeExpr) -> TubeExpr:
    op = tube_operator()
    f_t, f_p = f.dt(), f.dphi()
    # beta/(kc) f_t - tau beta/(kc) f_phi shares a factor
    first = op.c_t * (f_t - TubeExpr.tau() * f_p)
    first = first + (TubeExpr.tau(1) + TubeExpr.kappa() ** 2 * TubeExpr.cos() * TubeExpr.sin()) * f_p
    second = -f_t.dt() + op.c_tphi * f_t.dphi() + op.c_phiphi * f_p.dphi()
    return op.prefactor * (second + first)


def _apply_vec(v: FrameVec) -> FrameVec:
    op = tube_operator()
    v_t, v_p = v.dt(), v.dphi()
    v_tt, v_tp, v_pp = v_t.dt(), v_t.dphi(), v_p.dphi()
    tau = TubeExpr.tau()
    phi_rest = TubeExpr.tau(1) + TubeExpr.kappa() ** 2 * TubeExpr.cos() * TubeExpr.sin()
    comps = []
    for ct, cp, ctt, ctp, cpp in zip(
        v_t.components(), v_p.components(), v_tt.components(), v_tp.components(), v_pp.components()
    ):
        acc = -ctt + op.c_tphi * ctp + op.c_phiphi * cpp
        acc = acc + op.c_t * (ct - tau * cp) + phi_rest * cp
        comps.append(op.prefactor * acc)
    return FrameVec(*comps)


def tube_iterates(lam: int, *, bound: int = DEFAULT_MAX_ITERATE) -> list[FrameVec]:
    """[x, D x, ..., D^lam x] for the tube position vector."""
    if lam < 0:
        raise ValueError("iterate order must be nonnegative")
    if lam > bound:
        raise EngineLimitError(f"tube iterate order {lam} exceeds bound {bound}")
    return list(_cached_iterates(lam))


@lru_cache(maxsize=None)
def _cached_iterates(lam: int) -> tuple[FrameVec, ...]:
    if lam == 0:
        return (tube_position(),)
    prev = _cached_iterates(lam - 1)
    return prev + (apply_delta3_tube(prev[-1]),)
