import random
from fractions import Fraction

import pytest

from kummer_forms import _poly, _Sampler, kummer_of_divisor, rational_reconstruct

P = 1009


@pytest.fixture
def sampler():
    return _Sampler(P, random.Random(3))


def test_divisor_coordinates(sampler):
    F = _poly(sampler.curve(), P)
    pts = sampler.points(F, 2)
    a, b = sampler.divisor(pts)
    (u1, v1), (u2, v2) = pts
    assert int(b(u1)) == v1 and int(b(u2)) == v2
    x = kummer_of_divisor(a, b, F, P)
    assert x[:3] == (1, (u1 + u2) % P, u1 * u2 % P)


def test_divisor_off_the_curve(sampler):
    F = _poly(sampler.curve(), P)
    a, b = sampler.divisor(sampler.points(F, 2))
    with pytest.raises(ValueError):
        kummer_of_divisor(a, 2 * b, F, P)


def test_residual_divisor_is_monic_quadratic(sampler):
    f, x, y, w, z = sampler.sample()
    assert len(f) == 7
    assert w[0] == 1 and z[0] == 1


@pytest.mark.parametrize("q", [Fraction(3, 7), Fraction(-5, 11), Fraction(12)])
def test_rational_reconstruct(q):
    p = 2**61 - 1
    residue = q.numerator * pow(q.denominator, -1, p) % p
    assert rational_reconstruct(residue, p) == q
