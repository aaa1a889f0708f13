import random

import pytest
from hypothesis import given, settings, strategies as st

from optsync.polynomial import IntPolynomial, leibniz_char_poly, roots, squarefree_decomposition


def test_arithmetic():
    p = IntPolynomial([-1, 1])
    assert (p * p).coeffs == (1, -2, 1)
    assert (p**3).coeffs == (-1, 3, -3, 1)
    assert (p + IntPolynomial([1])).coeffs == (0, 1)
    assert (p - p).degree == -1
    assert p(5) == 4
    assert IntPolynomial([0, 0, 3]).derivative().coeffs == (0, 6)


def test_text_format_constant_first():
    p = IntPolynomial.from_roots([0, 2, 2, 2, 2])
    assert p.to_text() == "0 16 -32 24 -8 1"
    assert IntPolynomial.from_text("0 16 -32 24 -8 1") == p
    assert str(IntPolynomial([2, -3, 1])) == "x^2 - 3x + 2"


def test_deflate_zero():
    k, q = IntPolynomial.from_roots([0, 0, 3]).deflate_zero()
    assert k == 2 and q == IntPolynomial([-3, 1])


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=1, max_size=9))
def test_squarefree_reconstructs(rs):
    p = IntPolynomial.from_roots(rs)
    rebuilt = IntPolynomial([1])
    for f, mult in squarefree_decomposition(p):
        rebuilt = rebuilt * f**mult
    assert rebuilt == p
    mults = {}
    for r in rs:
        mults[r] = mults.get(r, 0) + 1
    assert sorted(m for _, m in squarefree_decomposition(p) for _ in range(_.degree)) == sorted(mults.values())


@settings(max_examples=150, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=8))
def test_integer_roots_are_exact(rs):
    got = sorted(z.real for z in roots(IntPolynomial.from_roots(rs)))
    assert got == sorted(float(r) for r in rs)


def test_complex_roots():
    rs = sorted(roots(IntPolynomial([1, 0, 1])), key=lambda z: z.imag)
    assert rs[0] == pytest.approx(-1j) and rs[1] == pytest.approx(1j)
    # (x^2 + 1)^2 has double roots at +-i
    rs = roots(IntPolynomial([1, 0, 1]) ** 2)
    assert sum(abs(z - 1j) < 1e-12 for z in rs) == 2


def test_leibniz_small():
    assert leibniz_char_poly([[0, 0], [-1, 1]]).coeffs == (0, -1, 1)
    assert leibniz_char_poly([[2]]).coeffs == (-2, 1)
