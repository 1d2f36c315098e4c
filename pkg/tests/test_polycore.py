"""Exact polynomial arithmetic: domains, term orders, parsing, calculus."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tangentcat.errors import ParseError, UnsupportedDomain
from tangentcat.polycore import (
    GREVLEX,
    LEX,
    NN,
    QQ,
    ZZ,
    Polynomial,
    context,
    elimination_order,
    poly_parse,
    prime_field,
    variables,
)

XY = context("x", "y")
XYZ = context("x", "y", "z")
F5 = prime_field(5)


def qq(text, ctx=XY):
    return poly_parse(text, ctx, QQ)


# --- coefficient domains ----------------------------------------------------

def test_domain_flags():
    assert QQ.is_field and QQ.has_negation
    assert not ZZ.is_field and ZZ.has_negation
    assert not NN.is_field and not NN.has_negation
    assert F5.is_field and F5.has_negation


def test_prime_field_arithmetic():
    two = F5.from_int(2)
    assert F5.div(F5.one(), two) == F5.from_int(3)
    assert F5.add(F5.from_int(4), two) == F5.one()
    assert F5.normalize(F5.from_int(7)) == two


def test_prime_field_rejects_composite_modulus():
    with pytest.raises(UnsupportedDomain):
        prime_field(6)


def test_integer_domains_reject_division():
    with pytest.raises(UnsupportedDomain):
        ZZ.div(ZZ.from_int(3), ZZ.from_int(2))
    with pytest.raises(UnsupportedDomain):
        NN.sub(NN.from_int(2), NN.from_int(3))


# --- construction and printing ----------------------------------------------

def test_parse_print_round_trip_examples():
    for text in ("x^2 + 2*x*y + y^2", "3/4*x^2 - y", "x*y - 1", "0", "1", "-x + 1"):
        p = qq(text)
        assert poly_parse(str(p), XY, QQ) == p


def test_rational_literals():
    p = qq("3/4*x + 1/2")
    assert p.coefficient((1, 0)) == Fraction(3, 4)
    assert p.coefficient((0, 0)) == Fraction(1, 2)


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        qq("x + * y")
    assert exc.value.column == 5
    with pytest.raises(ParseError) as exc:
        qq("z + 1")
    assert "unknown variable 'z'" in str(exc.value)


def test_constant_and_variable_constructors():
    c = Polynomial.constant(XY, QQ, Fraction(7))
    assert c.is_constant() and c.constant_value() == 7
    x = Polynomial.variable(XY, QQ, 0)
    assert str(x) == "x"
    assert Polynomial.zero(XY, QQ).is_zero()


# --- term orders ------------------------------------------------------------

def test_leading_terms_differ_by_order():
    p = qq("x^2 - y^3")
    assert p.leading_term(LEX)[0] == (2, 0)
    assert p.leading_term(GREVLEX)[0] == (0, 3)


def test_elimination_order_prefers_the_block():
    order = elimination_order(1)
    p = qq("x - y^3")
    # any monomial touching the eliminated block beats any that avoids it
    assert p.leading_term(order)[0] == (1, 0)
    # "eliminates" marks monomials that avoid the block entirely
    assert not order.eliminates((1, 0))
    assert order.eliminates((0, 3))


# --- ring axioms (property-based) -------------------------------------------

small_coeff = st.integers(min_value=-4, max_value=4)


def polys(ctx, dom, degree=3):
    n = len(ctx)
    monos = st.tuples(*(st.integers(min_value=0, max_value=degree) for _ in range(n)))
    return st.dictionaries(monos, small_coeff, max_size=4).map(
        lambda d: Polynomial(ctx, dom, {m: dom.from_int(c) for m, c in d.items()})
    )


@settings(max_examples=50)
@given(polys(XY, QQ), polys(XY, QQ), polys(XY, QQ))
def test_ring_axioms_qq(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a + (-a) == Polynomial.zero(XY, QQ)


@settings(max_examples=25)
@given(polys(XY, F5), polys(XY, F5))
def test_distributivity_mod_p(a, b):
    assert (a + b) * (a + b) == a * a + a * b + a * b + b * b


@settings(max_examples=25)
@given(polys(XY, QQ), polys(XY, QQ))
def test_leibniz_rule(a, b):
    for i in range(2):
        lhs = (a * b).partial(i)
        rhs = a.partial(i) * b + a * b.partial(i)
        assert lhs == rhs


@settings(max_examples=25)
@given(polys(XY, QQ), polys(XY, QQ), small_coeff, small_coeff)
def test_evaluation_is_a_ring_map(a, b, v0, v1):
    point = (QQ.from_int(v0), QQ.from_int(v1))
    assert (a + b).evaluate(point) == QQ.add(a.evaluate(point), b.evaluate(point))
    assert (a * b).evaluate(point) == QQ.mul(a.evaluate(point), b.evaluate(point))


@settings(max_examples=25)
@given(polys(XY, QQ))
def test_parse_print_round_trip_property(p):
    assert poly_parse(p.to_str(), XY, QQ) == p


# --- substitution and renaming ----------------------------------------------

def test_substitute_composes():
    p = qq("x^2 + y")
    images = (qq("y + 1"), qq("x*y"))
    q = p.substitute(images)
    assert q == qq("(y + 1)^2 + x*y")


def test_rename_embeds_into_a_larger_context():
    p = qq("x^2 - y")
    q = p.rename(XYZ, [0, 2])
    assert str(q) == "x^2 - z"
    assert q.rename(XY, [0, 0, 1]) == p


def test_power_and_scale():
    x, y = variables(XY, QQ)
    assert (x + y) ** 0 == Polynomial.one(XY, QQ)
    assert (x - y) ** 2 == qq("x^2 - 2*x*y + y^2")
    assert x.scale(Fraction(1, 2)) == qq("1/2*x")


def test_subtraction_unavailable_over_nn():
    xn, yn = variables(XY, NN)
    with pytest.raises(UnsupportedDomain):
        _ = xn - yn
