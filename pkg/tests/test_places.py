import math
from fractions import Fraction

import flint
import pytest
from sympy import QQ

from errors import InputError, NonIntegralModel, PrecisionExhausted
from fields import qt_from_coeffs
from places import LocalPlace, PadicRing, PlaceKind, PolyadicRing


def test_parse_places():
    assert LocalPlace.parse("5") == LocalPlace.prime(5)
    assert LocalPlace.parse("inf").kind == PlaceKind.INFINITY
    assert LocalPlace.parse("t-1").label == "t-1"
    assert LocalPlace.parse("t").label == "t"
    assert LocalPlace.parse("t^2+1").degree == 2


@pytest.mark.parametrize("text", ["4", "1", "t^2-1", "x+"])
def test_parse_rejects(text):
    with pytest.raises(InputError):
        LocalPlace.parse(text)


def test_prime_valuation():
    two = LocalPlace.prime(2)
    assert two.valuation(QQ(12)) == 2
    assert two.valuation(QQ(1, 8)) == -3
    assert two.valuation(QQ(0)) == math.inf


def test_qt_valuations():
    at_zero = LocalPlace.parse("t")
    assert at_zero.valuation(qt_from_coeffs([0, 0, 3])) == 2
    assert LocalPlace.infinity().valuation(qt_from_coeffs([1, 1])) == -1
    assert LocalPlace.parse("t+1").valuation(qt_from_coeffs([1, 2, 1])) == 2


def test_padic_ring():
    ring = PadicRing(3, 5)
    assert ring.embed(Fraction(1, 2)) * 2 % 243 == 1
    assert ring.valuation(ring.embed(QQ(18))) == 2
    assert ring.shift(ring.embed(QQ(18)), 2) == 2
    with pytest.raises(NonIntegralModel):
        ring.embed(Fraction(1, 3))
    with pytest.raises(PrecisionExhausted):
        ring.valuation(ring.embed(QQ(3**5)))


def test_polyadic_ring_inverts_units():
    ring = PolyadicRing(flint.fmpq_poly([-1, 1]), 4)
    t_plus_1 = qt_from_coeffs([1, 1])
    inv = ring.embed(1 / t_plus_1)
    assert ring.mul(inv, flint.fmpq_poly([1, 1])) == flint.fmpq_poly([1])
    assert ring.valuation(ring.embed(qt_from_coeffs([-1, 0, 1]))) == 1
    with pytest.raises(NonIntegralModel):
        ring.embed(1 / qt_from_coeffs([-1, 1]))
