from fractions import Fraction


def normalize_rational(value):
    if type(value) is Fraction and value.denominator == 1:
        return value.numerator
    return value


def rational_json(value) -> dict:
    """Exact rational as decimal strings, e.g. {"num": "-3", "den": "1"}."""
    q = Fraction(value)
    return {"num": str(q.numerator), "den": str(q.denominator)}
