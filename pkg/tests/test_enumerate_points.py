import logging
import math
import random
from fractions import Fraction
from types import SimpleNamespace

import mpmath
import pytest

import enumerate_points
from conftest import ex1_model
from enumerate_points import (SearchConfig, enumerate_bounded, points_below_canonical, primitive_key,
                              primitive_triples, rational_x4)
from errors import InputError
from fetch_data import fetch_points
from global_height import canonical_height, height_difference_bound
from jacobian import double, mumford_to_kummer, negate, random_curve_point


def test_primitive_triples():
    assert list(primitive_triples(1, 0)) == [(0, 0, 1), (0, 1, -1), (0, 1, 0), (0, 1, 1)]
    assert len(list(primitive_triples(1, 1))) == 9
    assert (2, 2, 0) not in primitive_triples(2, 2)


def test_bound_must_be_positive():
    with pytest.raises(InputError):
        SearchConfig(0)


@pytest.fixture(scope="module")
def small_search(record_curve):
    return enumerate_bounded(record_curve, SearchConfig(1))


def test_finds_a_known_generator(record_curve, data_dir, small_search):
    P = fetch_points(str(data_dir / "record_generators.json"), record_curve)[0]
    keys = [fp.kummer for fp in small_search.points]
    assert primitive_key(mumford_to_kummer(P, record_curve)) in keys
    assert keys == sorted(keys)
    for fp in small_search.points:
        assert fp.lifts
        assert fp.hprime is not None
        assert max(abs(c) for c in fp.kummer[:3]) >= 1


def test_sieve_keeps_every_point(record_curve, small_search):
    sieved = enumerate_bounded(record_curve, SearchConfig(1, (3, 5, 7)))
    assert [fp.kummer for fp in sieved.points] == [fp.kummer for fp in small_search.points]
    assert sieved.triples_tried == small_search.triples_tried
    assert sieved.triples_sieved >= 0


def test_h_model_is_rejected(record_curve):
    from curve import two_adic_model
    with pytest.raises(InputError):
        enumerate_bounded(two_adic_model(record_curve), SearchConfig(1))


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_search_finds_constructed_points(seed):
    model, P = random_curve_point(random.Random(100 + seed), size=4)
    keys = [primitive_key(mumford_to_kummer(Q, model)) for Q in (P, double(P, model)) if not Q.is_zero]
    keys = [k for k in keys if max(abs(c) for c in k[:3]) <= 200]
    assert keys
    search = enumerate_bounded(model, SearchConfig(200, (3, 5, 7, 11, 13)))
    found = [fp.kummer for fp in search.points]
    for key in keys:
        assert key in found
    for fp in search.points:
        assert fp.lifts
        for Q in fp.lifts:
            assert primitive_key(mumford_to_kummer(Q, model)) == fp.kummer


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(20))
def test_sieve_never_drops_a_point(seed):
    model, _ = random_curve_point(random.Random(seed), size=4)
    plain = enumerate_bounded(model, SearchConfig(25))
    sieved = enumerate_bounded(model, SearchConfig(25, (3, 5, 7, 11, 13)))
    assert sieved.triples_sieved > 0
    assert [fp.kummer for fp in sieved.points] == [fp.kummer for fp in plain.points]


def test_linear_and_degenerate_x4(caplog):
    linear = ((), (((1, 0, 0, 0), 2),), (((0, 0, 0, 0), -3),))
    assert rational_x4(linear, (1, 0, 0)) == [Fraction(3, 2)]
    with caplog.at_level(logging.WARNING, logger="enumerate_points"):
        assert rational_x4(((), (), ()), (1, 0, 0)) == []
    assert "vanishes identically" in caplog.text


def test_origin_only_below_the_minimal_height(record_curve, monkeypatch):
    report = SimpleNamespace(total=mpmath.mpf(-1), height_lower_bound=mpmath.mpf(1))
    monkeypatch.setattr(enumerate_points, "height_difference_bound", lambda *args, **kwargs: report)
    result, _ = points_below_canonical(record_curve, 0.5)
    assert [fp.kummer for fp in result.points] == [(0, 0, 0, 1)]
    assert result.points[0].hhat == 0
    assert result.points[0].lifts[0].is_zero
    assert result.notes
    below_zero, _ = points_below_canonical(record_curve, -2)
    assert below_zero.points == []


@pytest.mark.slow
def test_canonical_search_matches_a_wider_naive_search():
    model = ex1_model(1)
    total = float(height_difference_bound(model).total)
    bound = max(0.0, math.log(6) - total)
    result, report = points_below_canonical(model, bound, digits=30)
    keys = {fp.kummer for fp in result.points}
    assert (0, 0, 0, 1) in keys
    N = int(math.exp(bound + float(report.total))) + 3
    wider = enumerate_bounded(model, SearchConfig(N, (3, 5, 7)))
    expected = {fp.kummer for fp in wider.points
                if canonical_height(fp.lifts[0], model, 30).hhat <= bound + 1e-15}
    assert keys - {(0, 0, 0, 1)} == expected
    for fp in result.points:
        for P in fp.lifts:
            minus = negate(P, model)
            assert primitive_key(mumford_to_kummer(minus, model)) == fp.kummer
            assert minus in fp.lifts
