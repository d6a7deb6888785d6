from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from hnnlinear.polys import (
    factor_integer_poly,
    factor_rational_poly,
    is_unit_factor,
    poly_mul,
    poly_pow,
    primitive_part,
)


def product(factors):
    out = (1,)
    for f, e in factors:
        out = poly_mul(out, poly_pow(f, e))
    return out


def test_examples():
    assert factor_integer_poly([1, 0, -1]) == [((1, -1), 1), ((1, 1), 1)]
    assert factor_integer_poly([1, -2]) == [((1, -2), 1)]
    assert factor_integer_poly([1, 1, 1, 1, 1]) == [((1, 1, 1, 1, 1), 1)]


def test_non_monic_rejected():
    with pytest.raises(ValueError):
        factor_integer_poly([2, 1])
    with pytest.raises(ValueError):
        factor_integer_poly([0])


def test_rational_input():
    assert primitive_part([Fraction(1, 2), Fraction(-3, 4)]) == (2, -3)
    assert factor_rational_poly([Fraction(1), Fraction(-3, 2)]) == [((2, -3), 1)]


def test_unit_factor():
    assert is_unit_factor((1, -3, 1))
    assert is_unit_factor((1, 1))
    assert not is_unit_factor((1, -2))
    assert not is_unit_factor((2, -3))
    assert not is_unit_factor((1,))


def _rational_roots(f):
    lead, const = f[0], f[-1]
    if const == 0:
        return [0]
    divs = lambda n: [d for d in range(1, abs(n) + 1) if n % d == 0]
    roots = []
    for p in divs(const):
        for q in divs(lead):
            for s in (1, -1):
                x = Fraction(s * p, q)
                if sum(c * x ** (len(f) - 1 - i) for i, c in enumerate(f)) == 0:
                    roots.append(x)
    return roots


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-6, 6), min_size=1, max_size=5))
def test_product_reproduces_input(tail):
    f = (1, *tail)
    factors = factor_integer_poly(f)
    assert product(factors) == f
    for g, _ in factors:
        assert g[0] == 1
        if 2 <= len(g) - 1 <= 3:
            assert _rational_roots(g) == []
