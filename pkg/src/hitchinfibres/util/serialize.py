"""Exact scalars as JSON-friendly strings.

Rationals are written as ``"num/den"`` (always with a denominator) and
Gaussian rationals as a ``[re, im]`` pair of such strings.

"""
from sympy.polys.domains import QQ, QQ_I


def rational_to_str(value) -> str:
    value = QQ.convert(value)
    return f"{QQ.numer(value)}/{QQ.denom(value)}"


def scalar_to_json(value, domain=QQ):
    if domain == QQ_I:
        value = QQ_I.convert(value)
        return [rational_to_str(value.x), rational_to_str(value.y)]
    return rational_to_str(value)


def vector_to_json(values, domain=QQ):
    return [scalar_to_json(value, domain) for value in values]
