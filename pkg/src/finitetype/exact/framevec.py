"""Vectors in the moving basis {alpha, t, h, b} of a unit-speed curve."""

from __future__ import annotations

from dataclasses import dataclass

from .tubexpr import TubeExpr

_ZERO = TubeExpr()


@dataclass(frozen=True)
class FrameVec:
    """``alpha_coeff * alpha + t_coeff * t + h_coeff * h + b_coeff * b``.

    Derivatives in t follow Frenet-Serret (alpha' = t, t' = kappa h,
    h' = -kappa t + tau b, b' = -tau h); the frame does not depend on phi.
    """

    alpha_coeff: TubeExpr = _ZERO
    t_coeff: TubeExpr = _ZERO
    h_coeff: TubeExpr = _ZERO
    b_coeff: TubeExpr = _ZERO

    def components(self) -> tuple[TubeExpr, TubeExpr, TubeExpr, TubeExpr]:
        return (self.alpha_coeff, self.t_coeff, self.h_coeff, self.b_coeff)

    def map(self, fn) -> FrameVec:
        return FrameVec(*(fn(c) for c in self.components()))

    def __add__(self, other: FrameVec) -> FrameVec:
        return FrameVec(*(a + b for a, b in zip(self.components(), other.components())))

    def __sub__(self, other: FrameVec) -> FrameVec:
        return FrameVec(*(a - b for a, b in zip(self.components(), other.components())))

    def __neg__(self) -> FrameVec:
        return self.map(lambda c: -c)

    def scale(self, factor) -> FrameVec:
        """Multiply every component by a scalar (TubeExpr or rational)."""
        return self.map(lambda c: c * factor)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components())

    def __eq__(self, other):
        if not isinstance(other, FrameVec):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None

    def dt(self) -> FrameVec:
        return framevec_dt(self)

    def dphi(self) -> FrameVec:
        return framevec_dphi(self)

    def evaluate(self, phi, frame, kappa=(), tau=(), r=0.0, alpha=None):
        """Numeric vector given the frame vectors ``(t, h, b)`` at the point."""
        t, h, b = frame
        args = dict(phi=phi, kappa=kappa, tau=tau, r=r)
        out = (
            self.t_coeff.evaluate(**args) * t
            + self.h_coeff.evaluate(**args) * h
            + self.b_coeff.evaluate(**args) * b
        )
        if not self.alpha_coeff.is_zero():
            if alpha is None:
                raise ValueError("alpha component present but no curve point given")
            out = out + self.alpha_coeff.evaluate(**args) * alpha
        return out

    def to_text(self) -> str:
        names = ("alpha", "t", "h", "b")
        return "\n".join(f"{n}: {c.to_text()}" for n, c in zip(names, self.components()))


def framevec_dt(v: FrameVec) -> FrameVec:
    a, t, h, b = v.components()
    kappa, tau = TubeExpr.kappa(), TubeExpr.tau()
    return FrameVec(
        a.dt(),
        a + t.dt() - kappa * h,
        h.dt() + kappa * t - tau * b,
        b.dt() + tau * h,
    )


def framevec_dphi(v: FrameVec) -> FrameVec:
    return v.map(lambda c: c.dphi())
