"""Packed monomial keys.

A monomial over the tube ring's generators is packed into one Python int,
``FIELD_BITS`` bits per generator, so that multiplying monomials is integer
addition.  Field layout::

    0   cos(phi)
    1   sin(phi)
    2   r                (tube radius, constant in t)
    3+2i  kappa^(i)      (i-th derivative of the curvature)
    4+2i  tau^(i)        (i-th derivative of the torsion)
"""

from __future__ import annotations

FIELD_BITS = 16
MASK = (1 << FIELD_BITS) - 1

COS_FIELD = 0
SIN_FIELD = 1
R_FIELD = 2
JET_START = 3


def unit(field: int) -> int:
    return 1 << (FIELD_BITS * field)


C = unit(COS_FIELD)
S = unit(SIN_FIELD)
R = unit(R_FIELD)


def kappa_field(order: int) -> int:
    return JET_START + 2 * order


def tau_field(order: int) -> int:
    return JET_START + 2 * order + 1


K0 = unit(kappa_field(0))
KC = K0 + C  # the monomial kappa*cos(phi)

_SIN_SHIFT = FIELD_BITS * SIN_FIELD


def get(key: int, field: int) -> int:
    return (key >> (FIELD_BITS * field)) & MASK


def cos_exp(key: int) -> int:
    return key & MASK


def sin_exp(key: int) -> int:
    return (key >> _SIN_SHIFT) & MASK


def kappa0_exp(key: int) -> int:
    return (key >> (FIELD_BITS * JET_START)) & MASK


def fields(key: int):
    """Yield ``(field, exponent)`` for every nonzero field of ``key``."""
    idx = 0
    while key:
        e = key & MASK
        if e:
            yield idx, e
        key >>= FIELD_BITS
        idx += 1


def jet_part(key: int) -> int:
    """Strip the cos/sin fields."""
    return key >> (FIELD_BITS * R_FIELD) << (FIELD_BITS * R_FIELD)


def field_name(field: int) -> str:
    if field == COS_FIELD:
        return "c"
    if field == SIN_FIELD:
        return "s"
    if field == R_FIELD:
        return "r"
    order, which = divmod(field - JET_START, 2)
    base = "tau" if which else "kappa"
    return base if order == 0 else f"{base}{order}"


def from_exponents(exps: dict[int, int]) -> int:
    key = 0
    for field, e in exps.items():
        if e < 0 or e > MASK:
            raise ValueError(f"exponent {e} out of range for field {field}")
        key += e << (FIELD_BITS * field)
    return key


def degree(key: int) -> int:
    return sum(e for _, e in fields(key))


def order_key(key: int) -> tuple:
    """Graded lexicographic sort key (higher degree first, then by field)."""
    exps = tuple(fields(key))
    return (-sum(e for _, e in exps), tuple((-f, -e) for f, e in exps))


def format_monomial(key: int) -> str:
    parts = []
    for field, e in fields(key):
        name = field_name(field)
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts)


def format_coeff(value) -> str:
    return str(value)
