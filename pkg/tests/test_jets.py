"""Truncated Taylor jets: arithmetic, reciprocals, polynomial seeding."""
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ppcheck.geometry import OrderBudgetError
from ppcheck.jets import (EXACT, FLOAT, Jet, SingularJetError,
                          jet_from_polynomial, jet_recip)
from ppcheck.polynomials import parse_polynomial


def J(dim, order, coeffs):
    return Jet(dim, order, {k: F(v) for k, v in coeffs.items()})


class TestArithmetic:
    def test_square_of_one_plus_u(self):
        a = J(1, 2, {(0,): 1, (1,): 1})
        assert a * a == J(1, 2, {(0,): 1, (1,): 2, (2,): 1})

    def test_zero_annihilates(self):
        a = J(2, 3, {(1, 2): F(5, 7), (0, 0): 3})
        assert (a * Jet.zero(2, 3)).is_zero()

    def test_two_variable_product_truncates(self):
        a = J(2, 2, {(0, 0): 1, (1, 0): 1, (0, 1): 1})   # 1 + x + y
        b = J(2, 2, {(0, 0): 1, (1, 0): -1})             # 1 - x
        expect = J(2, 2, {(0, 0): 1, (0, 1): 1, (2, 0): -1, (1, 1): -1})
        assert a * b == expect

    def test_mixed_order_product_takes_min(self):
        a = J(1, 3, {(0,): 1})
        b = J(1, 1, {(1,): 1})
        assert (a * b).order == 1

    def test_scalar_broadcast(self):
        a = J(1, 2, {(1,): 1})
        assert a * F(1, 2) == J(1, 2, {(1,): F(1, 2)})

    def test_derivative_drops_order(self):
        a = J(1, 2, {(2,): 1})
        d = a.derivative(0)
        assert d == J(1, 1, {(1,): 2}) and d.order == 1

    def test_derivative_budget_exhaustion(self):
        a = J(1, 0, {(0,): 1})
        with pytest.raises(OrderBudgetError):
            a.derivative(0, "test")


class TestReciprocal:
    def test_constant(self):
        assert jet_recip(J(1, 2, {(0,): 2})) == J(1, 2, {(0,): F(1, 2)})

    def test_geometric_series(self):
        a = J(1, 2, {(0,): 1, (1,): 1})
        assert jet_recip(a) == J(1, 2, {(0,): 1, (1,): -1, (2,): 1})

    def test_shifted_series(self):
        a = J(1, 1, {(0,): 2, (1,): 1})
        assert jet_recip(a) == J(1, 1, {(0,): F(1, 2), (1,): F(-1, 4)})

    def test_recip_is_inverse(self):
        a = J(2, 3, {(0, 0): 3, (1, 0): 1, (0, 2): F(-1, 2)})
        one = Jet.constant(2, 3, F(1))
        assert a * jet_recip(a) == one

    def test_zero_constant_term_rejected(self):
        with pytest.raises(SingularJetError):
            jet_recip(J(1, 2, {(1,): 1}))


class TestPolynomialSeeding:
    def test_monomial_at_origin(self):
        p = parse_polynomial("x^2", ("x",))
        assert jet_from_polynomial(p, (F(0),), 2, EXACT) == J(1, 2, {(2,): 1})

    def test_binomial_shift(self):
        p = parse_polynomial("x^2", ("x",))
        assert jet_from_polynomial(p, (F(3),), 2, EXACT) == \
            J(1, 2, {(0,): 9, (1,): 6, (2,): 1})

    def test_two_variable_shift(self):
        # u*x1^2 around (1, 2): (1+du)(2+dx)^2
        p = parse_polynomial("u*x1^2", ("u", "x1"))
        got = jet_from_polynomial(p, (F(1), F(2)), 3, EXACT)
        expect = J(2, 3, {(0, 0): 4, (1, 0): 4, (0, 1): 4,
                          (1, 1): 4, (0, 2): 1, (1, 2): 1})
        assert got == expect

    def test_truncation_drops_high_degree(self):
        p = parse_polynomial("x^3", ("x",))
        got = jet_from_polynomial(p, (F(1),), 2, EXACT)
        assert got == J(1, 2, {(0,): 1, (1,): 3, (2,): 3})

    def test_float_mode_produces_floats(self):
        p = parse_polynomial("x^2", ("x",))
        got = jet_from_polynomial(p, (F(1, 2),), 2, FLOAT)
        assert all(isinstance(c, float) for c in got.coeffs.values())


def jet_strategy(order=3):
    fracs = st.fractions(min_value=-2, max_value=2, max_denominator=5)
    monos = st.tuples(st.integers(0, order), st.integers(0, order)).filter(
        lambda mi: sum(mi) <= order)
    return st.dictionaries(monos, fracs, max_size=4).map(
        lambda d: Jet(2, order, {k: v for k, v in d.items() if v}))


@settings(max_examples=40, deadline=None)
@given(jet_strategy(), jet_strategy(), jet_strategy())
def test_jet_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@settings(max_examples=40, deadline=None)
@given(jet_strategy())
def test_truncate_is_idempotent(a):
    assert a.truncate(2).truncate(2) == a.truncate(2)
    assert a.truncate(3) == a
