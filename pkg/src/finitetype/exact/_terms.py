"""Low-level operations on term dicts ``{packed monomial: rational}``.

Coefficients are ``int`` or ``fractions.Fraction``; ints are kept whenever
possible because Fraction arithmetic is an order of magnitude slower.
"""

from __future__ import annotations

from fractions import Fraction

from . import monomial as mono

C, S = mono.C, mono.S
_SIN_SHIFT = mono.FIELD_BITS * mono.SIN_FIELD
_MASK = mono.MASK
_JET_START = mono.JET_START
_W = mono.FIELD_BITS


def normalize(value):
    if type(value) is Fraction and value.denominator == 1:
        return value.numerator
    return value


def clean(terms: dict) -> dict:
    return {k: normalize(v) for k, v in terms.items() if v}


def add(a: dict, b: dict, scale=1) -> dict:
    out = dict(a)
    get = out.get
    for k, v in b.items():
        out[k] = get(k, 0) + scale * v
    return {k: v for k, v in out.items() if v}


def scale(a: dict, factor) -> dict:
    if not factor:
        return {}
    if factor == 1:
        return dict(a)
    return {k: v * factor for k, v in a.items()}


def shift(a: dict, key: int) -> dict:
    """Multiply by a monomial free of sin(phi)."""
    return {k + key: v for k, v in a.items()}


def mul(a: dict, b: dict) -> dict:
    """Product with sin^2 = 1 - cos^2 reduction."""
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    get = out.get
    two_s = 2 * S
    two_c = 2 * C
    for ka, va in a.items():
        sa = (ka >> _SIN_SHIFT) & _MASK
        for kb, vb in b.items():
            k = ka + kb
            v = va * vb
            if sa and (kb >> _SIN_SHIFT) & _MASK:
                k -= two_s
                out[k] = get(k, 0) + v
                k += two_c
                out[k] = get(k, 0) - v
            else:
                out[k] = get(k, 0) + v
    return {k: v for k, v in out.items() if v}


def d_jets(a: dict) -> dict:
    """d/dt acting on jet variables only (kappa^(i) -> kappa^(i+1), r -> 0)."""
    out: dict = {}
    get = out.get
    for key, v in a.items():
        rest = key >> (_W * _JET_START)
        field = _JET_START
        while rest:
            e = rest & _MASK
            if e:
                k = key - (1 << (_W * field)) + (1 << (_W * (field + 2)))
                out[k] = get(k, 0) + e * v
            rest >>= _W
            field += 1
    return {k: v for k, v in out.items() if v}


def d_phi(a: dict) -> dict:
    """d/dphi acting on cos(phi), sin(phi) with the normal form kept."""
    out: dict = {}
    get = out.get
    for key, v in a.items():
        ce = key & _MASK
        if (key >> _SIN_SHIFT) & _MASK:
            base = key - S
            k = base + C
            out[k] = get(k, 0) + (ce + 1) * v
            if ce:
                k = base - C
                out[k] = get(k, 0) - ce * v
        elif ce:
            k = key - C + S
            out[k] = get(k, 0) - ce * v
    return {k: v for k, v in out.items() if v}


def min_field(a: dict, field: int) -> int:
    shift_ = _W * field
    return min((k >> shift_) & _MASK for k in a)


def evaluate(a: dict, values: dict[int, float]) -> float:
    total = 0.0
    for key, v in a.items():
        term = float(v)
        for field, e in mono.fields(key):
            term *= values[field] ** e
        total += term
    return total


def to_text(a: dict) -> str:
    if not a:
        return "0"
    parts = []
    for key in sorted(a, key=mono.order_key):
        v = a[key]
        m = mono.format_monomial(key)
        if not m:
            parts.append(str(v))
        elif v == 1:
            parts.append(m)
        elif v == -1:
            parts.append("-" + m)
        else:
            parts.append(f"{v}*{m}")
    text = " + ".join(parts)
    return text.replace("+ -", "- ")
