"""The differential ring of tube expressions.

An element is ``(s0(c) + sin(phi) * s1(c)) / ((kappa c)^n * delta^m)`` with
``c = cos(phi)``, ``delta = 1 - r kappa c`` and jet-polynomial coefficients.
Numerators are kept in the normal form with sin-degree at most one.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

from . import _terms
from . import monomial as mono
from .jets import JetPoly, _as_rational, jet_values

_DELTA = {0: 1, mono.R + mono.K0 + mono.C: -1}
_U = mono.R + mono.K0  # r * kappa


class LeadingTerm(NamedTuple):
    """Top term ``coeff * sin^sin_deg / (kappa^kappa_den * cos^power)``."""

    power: int
    sin_deg: int
    coeff: JetPoly
    kappa_den: int


class TubeExpr:
    __slots__ = ("_terms", "den_kc", "den_delta", "_hash")

    def __init__(self, terms: dict | None = None, den_kc: int = 0, den_delta: int = 0):
        if den_kc < 0 or den_delta < 0:
            raise ValueError("denominator exponents must be nonnegative")
        self._terms, self.den_kc, self.den_delta = _canonical(
            _terms.clean(terms or {}), den_kc, den_delta
        )
        self._hash = None

    @classmethod
    def _raw(cls, terms, den_kc, den_delta):
        obj = cls.__new__(cls)
        obj._terms, obj.den_kc, obj.den_delta = _canonical(terms, den_kc, den_delta)
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def const(cls, value) -> TubeExpr:
        return cls({0: _as_rational(value)})

    @classmethod
    def from_jet(cls, p: JetPoly) -> TubeExpr:
        return cls(p.terms)

    @classmethod
    def cos(cls) -> TubeExpr:
        return cls({mono.C: 1})

    @classmethod
    def sin(cls) -> TubeExpr:
        return cls({mono.S: 1})

    @classmethod
    def kappa(cls, order: int = 0) -> TubeExpr:
        return cls({mono.unit(mono.kappa_field(order)): 1})

    @classmethod
    def tau(cls, order: int = 0) -> TubeExpr:
        return cls({mono.unit(mono.tau_field(order)): 1})

    @classmethod
    def r(cls) -> TubeExpr:
        return cls({mono.R: 1})

    @classmethod
    def beta(cls) -> TubeExpr:
        """kappa' cos(phi) + kappa tau sin(phi)."""
        k1 = mono.unit(mono.kappa_field(1))
        kt = mono.K0 + mono.unit(mono.tau_field(0))
        return cls({k1 + mono.C: 1, kt + mono.S: 1})

    @classmethod
    def delta(cls) -> TubeExpr:
        return cls(dict(_DELTA))

    @classmethod
    def inv_kc(cls, n: int = 1) -> TubeExpr:
        """1 / (kappa cos(phi))^n."""
        return cls({0: 1}, den_kc=n)

    # structure
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def numerator(self) -> TubeExpr:
        return TubeExpr._raw(dict(self._terms), 0, 0)

    def cos_valuation(self) -> int:
        if not self._terms:
            raise ValueError("valuation of zero")
        return _terms.min_field(self._terms, mono.COS_FIELD)

    def pole_order(self) -> int:
        """Order of the pole at cos(phi) = 0 (kappa counts as a unit)."""
        if not self._terms:
            return -math.inf
        return self.den_kc - self.cos_valuation()

    def leading_term(self) -> LeadingTerm:
        if not self._terms:
            raise ValueError("no leading term")
        cmin = self.cos_valuation()
        top = {k: v for k, v in self._terms.items() if mono.cos_exp(k) == cmin}
        sin_deg = max(mono.sin_exp(k) for k in top)
        coeff = {mono.jet_part(k): v for k, v in top.items() if mono.sin_exp(k) == sin_deg}
        return LeadingTerm(self.den_kc - cmin, sin_deg, JetPoly(coeff), self.den_kc)

    def cos_coefficients(self) -> dict[tuple[int, int], JetPoly]:
        """Numerator coefficients keyed by (cos exponent, sin exponent)."""
        groups: dict[tuple[int, int], dict] = {}
        for k, v in self._terms.items():
            g = groups.setdefault((mono.cos_exp(k), mono.sin_exp(k)), {})
            g[mono.jet_part(k)] = v
        return {idx: JetPoly(t) for idx, t in sorted(groups.items())}

    # arithmetic
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _combine(self, other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return _combine(self, other, -1)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return TubeExpr._raw(_terms.scale(self._terms, -1), self.den_kc, self.den_delta)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if not other.den_kc and not other.den_delta and len(other._terms) == 1 and 0 in other._terms:
            factor = other._terms[0]
            return TubeExpr._raw(_terms.scale(self._terms, factor), self.den_kc, self.den_delta)
        return TubeExpr._raw(
            _terms.mul(self._terms, other._terms),
            self.den_kc + other.den_kc,
            self.den_delta + other.den_delta,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self * (Fraction(1) / other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not in the ring")
        out, base = TubeExpr.const(1), self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return (self - other).is_zero()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((frozenset(self._terms.items()), self.den_kc, self.den_delta))
        return self._hash

    # calculus
    def dt(self) -> TubeExpr:
        return expr_dt(self)

    def dphi(self) -> TubeExpr:
        return expr_dphi(self)

    # numerics
    def evaluate(self, phi: float, kappa=(), tau=(), r: float = 0.0) -> float:
        values = jet_values(kappa, tau, r)
        values[mono.COS_FIELD] = math.cos(phi)
        values[mono.SIN_FIELD] = math.sin(phi)
        return evaluate_parts(self._terms, self.den_kc, self.den_delta, values)

    # text
    def to_text(self) -> str:
        num = _terms.to_text(self._terms)
        den = []
        if self.den_kc:
            den.append("(kappa*c)" if self.den_kc == 1 else f"(kappa*c)^{self.den_kc}")
        if self.den_delta:
            den.append("delta" if self.den_delta == 1 else f"delta^{self.den_delta}")
        if not den:
            return num
        return f"({num}) / " + " / ".join(den)

    __str__ = to_text

    def __repr__(self):
        return f"TubeExpr({self.to_text()!r})"

    def __len__(self):
        return len(self._terms)


def evaluate_parts(terms: dict, den_kc: int, den_delta: int, values: dict[int, float]) -> float:
    """Numeric value of ``terms / ((kappa c)^den_kc delta^den_delta)``."""
    num = _terms.evaluate(terms, values)
    kc = values[mono.kappa_field(0)] * values[mono.COS_FIELD]
    delta = 1.0 - values[mono.R_FIELD] * kc
    return num / (kc**den_kc * delta**den_delta)


def expr_add(x: TubeExpr, y: TubeExpr) -> TubeExpr:
    return x + y


def expr_mul(x: TubeExpr, y: TubeExpr) -> TubeExpr:
    return x * y


def expr_dt(x: TubeExpr) -> TubeExpr:
    n, m, num = x.den_kc, x.den_delta, x._terms
    d_num = _terms.d_jets(num)
    if not n and not m:
        return TubeExpr._raw(d_num, 0, 0)
    k1c = mono.unit(mono.kappa_field(1)) + mono.C
    # d(kappa c)/dt = kappa' c ; d(delta)/dt = -r kappa' c
    out = _terms.shift(d_num, mono.KC)
    if n:
        out = _terms.add(out, _terms.shift(num, k1c), -n)
    if m:
        out = _terms.mul(out, _DELTA)
        out = _terms.add(out, _terms.shift(num, mono.R + k1c + mono.KC), m)
        return TubeExpr._raw(out, n + 1, m + 1)
    return TubeExpr._raw(out, n + 1, 0)


def expr_dphi(x: TubeExpr) -> TubeExpr:
    n, m, num = x.den_kc, x.den_delta, x._terms
    d_num = _terms.d_phi(num)
    if not n and not m:
        return TubeExpr._raw(d_num, 0, 0)
    ks = mono.K0 + mono.S
    # d(kappa c)/dphi = -kappa s ; d(delta)/dphi = r kappa s
    out = _terms.shift(d_num, mono.KC)
    if n:
        out = _terms.add(out, _terms.mul(num, {ks: 1}), n)
    if m:
        out = _terms.mul(out, _DELTA)
        out = _terms.add(out, _terms.mul(num, {mono.R + ks + mono.KC: 1}), -m)
        return TubeExpr._raw(out, n + 1, m + 1)
    return TubeExpr._raw(out, n + 1, 0)


def _combine(x: TubeExpr, y: TubeExpr, sign: int) -> TubeExpr:
    n = max(x.den_kc, y.den_kc)
    m = max(x.den_delta, y.den_delta)
    return TubeExpr._raw(
        _terms.add(_lift(x, n, m), _lift(y, n, m), sign), n, m
    )


def _lift(x: TubeExpr, n: int, m: int) -> dict:
    terms = x._terms
    if n > x.den_kc:
        terms = _terms.shift(terms, (n - x.den_kc) * mono.KC)
    for _ in range(m - x.den_delta):
        terms = _terms.mul(terms, _DELTA)
    return terms


def _canonical(terms: dict, n: int, m: int):
    if not terms:
        return {}, 0, 0
    if n:
        d = min(
            n,
            _terms.min_field(terms, mono.COS_FIELD),
            _terms.min_field(terms, mono.JET_START),
        )
        if d:
            terms = _terms.shift(terms, -d * mono.KC)
            n -= d
    while m:
        q = _divide_delta(terms)
        if q is None:
            break
        terms, m = q, m - 1
    return terms, n, m


def _divide_delta(terms: dict) -> dict | None:
    """Exact quotient by delta = 1 - (r kappa) c, or None."""
    by_c: dict[int, dict] = {}
    for k, v in terms.items():
        ce = mono.cos_exp(k)
        by_c.setdefault(ce, {})[k - ce * mono.C] = v
    top = max(by_c)
    if top == 0:
        return None
    quotient: dict = {}
    prev: dict = {}
    for j in range(top):
        q_j = _terms.add(by_c.get(j, {}), _terms.shift(prev, _U))
        for k, v in q_j.items():
            quotient[k + j * mono.C] = v
        prev = q_j
    if _terms.add(by_c.get(top, {}), _terms.shift(prev, _U)):
        return None
    return quotient


def _coerce(other):
    if isinstance(other, TubeExpr):
        return other
    if isinstance(other, JetPoly):
        return TubeExpr.from_jet(other)
    try:
        return TubeExpr.const(other)
    except TypeError:
        return NotImplemented
