"""Exact Laurent-trigonometric algebra on the anchor ring.

Terms are ``coeff * cos^i(t) sin^j(t) cos^k(phi) sin^l(phi) * a^p r^q`` with
``i`` any integer, ``j, l`` in {0, 1}, ``k, p, q >= 0``; ``a`` is the major
radius and ``r`` the tube radius of the ring.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .._util import normalize_rational
from .tube import EngineLimitError

DEFAULT_MAX_ANCHOR = 12

# key = (cos t, sin t, cos phi, sin phi, a, r)
_CT, _ST, _CP, _SP, _A, _R = range(6)


class AnchorExpr:
    __slots__ = ("_terms",)

    def __init__(self, terms: dict | None = None):
        out: dict = {}
        for key, v in (terms or {}).items():
            for k2, v2 in _reduce(tuple(key), v):
                out[k2] = out.get(k2, 0) + v2
        self._terms = {k: normalize_rational(v) for k, v in out.items() if v}

    @classmethod
    def term(cls, coeff=1, cos_t=0, sin_t=0, cos_phi=0, sin_phi=0, a=0, r=0) -> AnchorExpr:
        return cls({(cos_t, sin_t, cos_phi, sin_phi, a, r): coeff})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, cos_t=0, sin_t=0, cos_phi=0, sin_phi=0, a=0, r=0):
        return self._terms.get((cos_t, sin_t, cos_phi, sin_phi, a, r), 0)

    def __add__(self, other):
        other = _coerce(other)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out.get(k, 0) + v
        return AnchorExpr(out)

    __radd__ = __add__

    def __neg__(self):
        return AnchorExpr({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out: dict = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                key = tuple(x + y for x, y in zip(k1, k2))
                out[key] = out.get(key, 0) + v1 * v2
        return AnchorExpr(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AnchorExpr):
            try:
                other = _coerce(other)
            except TypeError:
                return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def dt(self) -> AnchorExpr:
        return AnchorExpr(_d_trig(self._terms, _CT, _ST))

    def dphi(self) -> AnchorExpr:
        return AnchorExpr(_d_trig(self._terms, _CP, _SP))

    def evaluate(self, t, phi, a, r):
        """Numeric value; ``t`` and ``phi`` may be numpy arrays."""
        import numpy as np

        ct, st = np.cos(t), np.sin(t)
        cp, sp = np.cos(phi), np.sin(phi)
        total = 0.0
        for (i, j, k, l, p, q), v in self._terms.items():
            total = total + float(v) * ct**i * st**j * cp**k * sp**l * a**p * r**q
        return total

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        names = ("cos(t)", "sin(t)", "cos(phi)", "sin(phi)", "a", "r")
        parts = []
        for key in sorted(self._terms, key=lambda k: (k[_A], k[_R], -k[_CT], k)):
            factors = []
            for name, e in zip(names, key):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            v = self._terms[key]
            parts.append("*".join([str(v)] + factors) if factors else str(v))
        return " + ".join(parts).replace("+ -", "- ")

    __str__ = to_text

    def __repr__(self):
        return f"AnchorExpr({self.to_text()!r})"


def _reduce(key, v):
    """Eliminate sin^2 of either angle."""
    pending = [(key, v)]
    done = []
    while pending:
        key, v = pending.pop()
        for c_idx, s_idx in ((_CT, _ST), (_CP, _SP)):
            if key[s_idx] >= 2:
                base = list(key)
                base[s_idx] -= 2
                hi = list(base)
                hi[c_idx] += 2
                pending.append((tuple(base), v))
                pending.append((tuple(hi), -v))
                break
        else:
            done.append((key, v))
    return done


def _d_trig(terms: dict, c_idx: int, s_idx: int) -> dict:
    out: dict = {}

    def put(key, value):
        out[key] = out.get(key, 0) + value

    for key, v in terms.items():
        ce, se = key[c_idx], key[s_idx]
        k = list(key)
        if se:
            # cos^e sin: -e cos^(e-1) (1 - cos^2) + cos^(e+1)
            k[s_idx] = 0
            if ce:
                k[c_idx] = ce - 1
                put(tuple(k), -ce * v)
            k[c_idx] = ce + 1
            put(tuple(k), (ce + 1) * v)
        elif ce:
            k[c_idx] = ce - 1
            k[s_idx] = 1
            put(tuple(k), -ce * v)
    return out


def _coerce(other) -> AnchorExpr:
    if isinstance(other, AnchorExpr):
        return other
    if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
        return AnchorExpr({(0, 0, 0, 0, 0, 0): other})
    raise TypeError(f"cannot combine AnchorExpr with {type(other).__name__}")


_TAN_T = AnchorExpr.term(1, cos_t=-1, sin_t=1)
_SEC2_T = AnchorExpr.term(1, cos_t=-2)


def apply_delta3_anchor(f: AnchorExpr) -> AnchorExpr:
    """-f_tt + tan(t) f_t - f_phiphi / cos^2(t)."""
    f_t = f.dt()
    return -f_t.dt() + _TAN_T * f_t - _SEC2_T * f.dphi().dphi()


def anchor_position() -> tuple[AnchorExpr, AnchorExpr, AnchorExpr]:
    """((a + r cos t) cos phi, (a + r cos t) sin phi, r sin t)."""
    x1 = AnchorExpr.term(1, cos_phi=1, a=1) + AnchorExpr.term(1, cos_t=1, cos_phi=1, r=1)
    x2 = AnchorExpr.term(1, sin_phi=1, a=1) + AnchorExpr.term(1, cos_t=1, sin_phi=1, r=1)
    x3 = AnchorExpr.term(1, sin_t=1, r=1)
    return x1, x2, x3


def secant_power_image(k: int) -> AnchorExpr:
    """(k^2 - k - (k^2 - 1)/cos^2 t) cos(phi)/cos^k(t)."""
    return AnchorExpr.term(k * k - k, cos_t=-k, cos_phi=1) + AnchorExpr.term(
        -(k * k - 1), cos_t=-k - 2, cos_phi=1
    )


class CoefficientTable:
    """Coefficients of ``D^m x1 = sum_j d[j] a cos(phi)/cos^(2j+2) t + r_coeff r cos t cos(phi)``."""

    def __init__(self, m: int, d: list, r_coeff):
        self.m = m
        self.d = list(d)
        self.r_coeff = r_coeff

    def __repr__(self):
        return f"CoefficientTable(m={self.m}, d={[str(x) for x in self.d]}, r_coeff={self.r_coeff})"

    def as_tuple(self):
        return tuple(self.d), self.r_coeff


def coefficient_table(expr: AnchorExpr, m: int) -> CoefficientTable:
    """Read off d_{j,m}; raises if ``expr`` has terms outside the expected span."""
    expected = {(-(2 * j + 2), 0, 1, 0, 1, 0) for j in range(m)} | {(1, 0, 1, 0, 0, 1)}
    extra = set(expr.terms) - expected
    if extra:
        raise ValueError(f"unexpected terms in D^{m} x1: {sorted(extra)}")
    d = [expr.coefficient(cos_t=-(2 * j + 2), cos_phi=1, a=1) for j in range(m)]
    return CoefficientTable(m, d, expr.coefficient(cos_t=1, cos_phi=1, r=1))


def anchor_iterates(m: int, *, bound: int = DEFAULT_MAX_ANCHOR) -> list[AnchorExpr]:
    """[x1, D x1, ..., D^m x1]."""
    if m < 0:
        raise ValueError("iterate order must be nonnegative")
    if m > bound:
        raise EngineLimitError(f"anchor iterate order {m} exceeds bound {bound}")
    seq = [anchor_position()[0]]
    for _ in range(m):
        seq.append(apply_delta3_anchor(seq[-1]))
    return seq


def anchor_iterate_x1(m: int, *, bound: int = DEFAULT_MAX_ANCHOR):
    if m < 1:
        raise ValueError("m must be >= 1")
    expr = anchor_iterates(m, bound=bound)[-1]
    return expr, coefficient_table(expr, m)


def d_first_closed_form(m: int) -> int:
    return 2 ** (m - 1)


def d_last_closed_form(m: int) -> int:
    return (-1) ** (m - 1) * (2 * m - 1) * math.prod((2 * j - 3) ** 2 for j in range(1, m + 1))
