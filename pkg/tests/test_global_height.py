import math
import random
from fractions import Fraction

import mpmath
import pytest
import sympy

from conftest import RECORD_BETA, RECORD_MINIMA, cusp_model, ex1_model
from errors import InputError
from fetch_data import fetch_curve, fetch_point, fetch_points
from global_height import (MINIMALITY_WARNING, canonical_height, canonical_height_qt, coprime_base,
                           factor_integer, factor_refine, finite_part_nofact, finite_part_simple,
                           height_difference_bound, height_of_kummer, height_pairing, place_bound,
                           simplest_between, supported_part)
from jacobian import double, make_point, mumford_to_kummer, random_curve_point
from kummer import KummerCoords
from lattice import lll_reduce, successive_minima
from local_nonarch import local_mu
from places import LocalPlace


def test_coprime_base():
    assert coprime_base([12, 18]) == [2, 3]
    assert coprime_base([1, 7]) == [7]
    basis = factor_refine([12, 18, 1])
    assert basis.q == (2, 3)
    assert basis.exponents == ((2, 1, 0), (1, 2, 0))
    with pytest.raises(InputError):
        factor_refine([0])


def test_coprime_base_without_factoring():
    values = [2**3 * 10007, 10007 * 10009**2, 10009 * 3**5, 1]
    basis = coprime_base(values)
    assert basis == [8, 243, 10007, 10009]
    assert all(math.gcd(a, b) == 1 for k, a in enumerate(basis) for b in basis[k + 1:])
    assert factor_refine(values).exponents[2] == (1, 1, 0, 0)


@pytest.mark.parametrize("lo, hi, expected", [
    (Fraction(1, 3), Fraction(1, 2), Fraction(1, 2)),
    (Fraction(3, 10), Fraction(7, 20), Fraction(1, 3)),
    (Fraction(2), Fraction(5), Fraction(2)),
    (Fraction(5, 2), Fraction(3), Fraction(3)),
])
def test_simplest_between(lo, hi, expected):
    assert simplest_between(lo, hi) == expected


def test_supported_part():
    assert supported_part(2**3 * 3 * 5, 6) == 24
    assert supported_part(7, 6) == 1


def test_factor_integer():
    assert factor_integer(2**5 * 101 * 1000003) == {2: 5, 101: 1, 1000003: 1}
    assert factor_integer(1) == {}


@pytest.fixture(scope="module")
def generators(record_curve, data_dir):
    return fetch_points(str(data_dir / "record_generators.json"), record_curve)


def test_finite_part_on_cusp_point():
    model = cusp_model(3)
    P = make_point(model, (0, 0, 1), (81, Fraction(3, 2)))
    part = finite_part_nofact(mumford_to_kummer(P, model).integers(), model)
    threes = [(q, mu) for q, mu in part.terms if q % 3 == 0]
    assert len(threes) == 1
    q, mu = threes[0]
    assert mu * sympy.multiplicity(3, q) == 2


def test_finite_part_algorithms_agree(record_curve, generators):
    for P in generators[:4]:
        x = mumford_to_kummer(P, record_curve).integers()
        exact = finite_part_nofact(x, record_curve).value()
        approx = finite_part_simple(x, record_curve, digits=30)
        with mpmath.workdps(30):
            assert abs(exact - approx) < mpmath.mpf(10) ** -20


def test_finite_part_rejects_h(record_curve):
    from curve import two_adic_model
    with pytest.raises(InputError):
        finite_part_nofact((0, 0, 0, 1), two_adic_model(record_curve))


def test_origin_has_height_zero(record_curve):
    assert height_of_kummer((0, 0, 0, 1), record_curve).hhat == 0


def test_height_is_quadratic(record_curve, generators):
    P = generators[0]
    h1 = canonical_height(P, record_curve, digits=30).hhat
    h2 = canonical_height(double(P, record_curve), record_curve, digits=30).hhat
    assert h1 > 0
    with mpmath.workdps(30):
        assert abs(h2 - 4 * h1) < mpmath.mpf(10) ** -20


def test_height_decomposition(record_curve, generators):
    dec = canonical_height(generators[1], record_curve, digits=25)
    with mpmath.workdps(30):
        assert abs(dec.naive_h - dec.finite_part.value() - dec.arch_part - dec.hhat) < mpmath.mpf(10) ** -20
    assert len(dec.kummer) == 4


def test_height_pairing_is_symmetric(record_curve, generators):
    pairing = height_pairing(generators[:2], record_curve, digits=20)
    assert pairing.gram[0, 1] == pairing.gram[1, 0]
    with mpmath.workdps(20):
        assert abs(pairing.gram[0, 0] - pairing.heights[0]) < mpmath.mpf(10) ** -15
        expected = pairing.gram[0, 0] * pairing.gram[1, 1] - pairing.gram[0, 1] ** 2
        assert abs(pairing.regulator - expected) < mpmath.mpf(10) ** -15


@pytest.mark.parametrize("p", sorted(RECORD_BETA))
def test_record_place_bounds(record_curve, p):
    shift, beta = RECORD_BETA[p]
    hint = {3: "I0-IV-0"}.get(p)
    entry = place_bound(record_curve, p, hint)
    assert entry.shift == shift
    assert entry.beta == Fraction(beta)


def test_typed_hint_overrides_inference(record_curve):
    entry = place_bound(record_curve, 5, "[I_{4-3-2}]")
    assert entry.reduction_type == "[I_{4-3-2}]"
    assert entry.group_exponent == 26


@pytest.mark.slow
def test_record_height_difference_bound(record_curve):
    report = height_difference_bound(record_curve, {3: "I0-IV-0"}, digits=30)
    assert MINIMALITY_WARNING in report.warnings
    assert report.unfactored == 1
    assert abs(float(report.finite_sum()) - 20.429) < 1e-3
    assert abs(float(report.total) - 1.17273) < 1e-4
    big = [e for e in report.entries if e.p > 10**6]
    assert {e.p for e in big} == {108217976921, 8723283517315751077}
    assert all(e.beta == 0 for e in big)


def test_qt_requires_function_field(record_curve):
    with pytest.raises(InputError):
        canonical_height_qt((0, 0, 0, 1), record_curve)


@pytest.mark.slow
@pytest.mark.xfail(strict=False, reason="depends on caller-supplied bounds at places where "
                                         "the model is not stably minimal")
def test_qt_height(data_dir):
    model, _, _, mu_hints = fetch_curve(str(data_dir / "qt_curve.json"))
    x = fetch_point(str(data_dir / "qt_point.json"), model)
    result = canonical_height_qt(x, model, hints=mu_hints)
    assert result.naive == 3
    assert result.hhat == Fraction(11, 5330)


def test_finite_part_without_factoring_matches_local_mu():
    p1, p2 = sympy.nextprime(10**19), sympy.nextprime(3 * 10**19)
    model = ex1_model(p1 * p2)
    x = (0, 1, 0, 0)
    part = finite_part_nofact(x, model)
    for p in (p1, p2):
        expected = local_mu(KummerCoords.of(x), LocalPlace.prime(p), model).mu
        found = [mu * sympy.multiplicity(p, q) for q, mu in part.terms if q % p == 0]
        assert found == [expected]
        assert expected > 0


@pytest.mark.slow
def test_duplication_consistency_on_random_curves():
    rng = random.Random(25)
    for _ in range(25):
        model, P = random_curve_point(rng, size=10)
        h1 = canonical_height(P, model, digits=30).hhat
        h2 = canonical_height(double(P, model), model, digits=30).hhat
        with mpmath.workdps(30):
            assert abs(h2 - 4 * h1) <= mpmath.mpf(10) ** -25 * max(1, abs(h2))


@pytest.mark.slow
def test_record_pairing_is_positive_definite(record_curve, generators):
    pairing = height_pairing(generators, record_curve, digits=20)
    assert pairing.regulator > 0
    with mpmath.workdps(20):
        mpmath.cholesky(pairing.gram)
    reduced = lll_reduce(pairing.gram)
    assert reduced.norms[0] > 8.52
    minima = successive_minima(pairing.gram)
    assert [float(m) for m in minima] == pytest.approx(RECORD_MINIMA, abs=0.005)
