"""Polynomials in the curve jets kappa, kappa', ..., tau, tau', ... and r."""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from . import _terms
from . import monomial as mono


class JetPoly:
    """Immutable polynomial with rational coefficients in the jet variables.

    >>> JetPoly.kappa() * JetPoly.tau()
    JetPoly('kappa*tau')
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: dict | None = None):
        terms = _terms.clean(terms or {})
        for key in terms:
            if key & (mono.MASK | (mono.MASK << mono.FIELD_BITS)):
                raise ValueError("JetPoly terms may not involve cos/sin(phi)")
        self._terms = terms
        self._hash = None

    @classmethod
    def const(cls, value) -> JetPoly:
        return cls({0: _as_rational(value)})

    @classmethod
    def kappa(cls, order: int = 0) -> JetPoly:
        return cls({mono.unit(mono.kappa_field(order)): 1})

    @classmethod
    def tau(cls, order: int = 0) -> JetPoly:
        return cls({mono.unit(mono.tau_field(order)): 1})

    @classmethod
    def r(cls) -> JetPoly:
        return cls({mono.R: 1})

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def derivative(self) -> JetPoly:
        return JetPoly(_terms.d_jets(self._terms))

    def evaluate(self, kappa=(), tau=(), r=0.0) -> float:
        return _terms.evaluate(self._terms, jet_values(kappa, tau, r))

    def kappa_valuation(self) -> int:
        if not self._terms:
            raise ValueError("valuation of zero")
        return _terms.min_field(self._terms, mono.JET_START)

    def ratio_to(self, other: JetPoly) -> Fraction | None:
        """Rational q with ``self == q * other``, or None."""
        if other.is_zero():
            return None
        if self.is_zero():
            return Fraction(0)
        if self._terms.keys() != other._terms.keys():
            return None
        key = next(iter(other._terms))
        q = Fraction(self._terms[key]) / Fraction(other._terms[key])
        if all(self._terms[k] == q * other._terms[k] for k in self._terms):
            return q
        return None

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return JetPoly(_terms.add(self._terms, other._terms))

    __radd__ = __add__

    def __neg__(self):
        return JetPoly(_terms.scale(self._terms, -1))

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return JetPoly(_terms.add(self._terms, other._terms, -1))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return JetPoly(_terms.mul(self._terms, other._terms))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = JetPoly.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    def __str__(self):
        return _terms.to_text(self._terms)

    def __repr__(self):
        return f"JetPoly({str(self)!r})"


def jet_derivative(p: JetPoly) -> JetPoly:
    return p.derivative()


def jet_values(kappa, tau, r) -> dict[int, float]:
    values = {mono.R_FIELD: float(r)}
    for i, k in enumerate(kappa):
        values[mono.kappa_field(i)] = float(k)
    for i, t in enumerate(tau):
        values[mono.tau_field(i)] = float(t)
    return values


def _as_rational(value):
    if isinstance(value, bool) or not isinstance(value, Rational):
        if isinstance(value, str):
            return _terms.normalize(Fraction(value))
        raise TypeError(f"exact coefficients must be rational, got {value!r}")
    return _terms.normalize(Fraction(value)) if not isinstance(value, int) else value


def _coerce(other):
    if isinstance(other, JetPoly):
        return other
    try:
        return JetPoly.const(other)
    except TypeError:
        return NotImplemented
