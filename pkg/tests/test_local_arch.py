import mpmath
import pytest

from conftest import ex1_model
from errors import InputError
from kummer import KummerCoords, duplicate
from local_arch import (eps_arch, gamma_tilde, mu_arch, partition_coefficients, phi_iterate_bound,
                        series_terms, single_step_bound)


def test_origin_has_zero_correction(record_curve):
    assert mu_arch((0, 0, 0, 1), record_curve, digits=20) == 0


def test_eps_on_ex1_point():
    model = ex1_model(2)
    value = eps_arch((0, 1, 0, 0), model, digits=30)
    with mpmath.workdps(30):
        assert abs(value + mpmath.log(16)) < mpmath.mpf(10) ** -25


def test_mu_satisfies_the_duplication_recursion():
    model = ex1_model(2)
    x = KummerCoords.of((0, 1, 0, 0))
    d = duplicate(x, model)
    lhs = mu_arch(x.x, model, digits=30)
    e = eps_arch(x.x, model, digits=40)
    tail = mu_arch(d.x, model, digits=30)
    with mpmath.workdps(40):
        assert abs(lhs - e / 4 - tail / 4) < mpmath.mpf(10) ** -25


def test_mu_is_projective():
    model = ex1_model(2)
    a = mu_arch((0, 1, 0, 0), model, digits=25)
    b = mu_arch((0, 7, 0, 0), model, digits=25)
    with mpmath.workdps(25):
        assert abs(a - b) < mpmath.mpf(10) ** -20


def test_rejects_bad_input(qt_curve, record_curve):
    with pytest.raises(InputError):
        mu_arch((0, 0, 0, 1), qt_curve)
    with pytest.raises(InputError):
        mu_arch((0, 0, 0, 0), record_curve)


def test_series_terms():
    assert series_terms(30, 3) == 51
    assert series_terms(60, 3) > series_terms(30, 3)


@pytest.mark.slow
def test_record_bounds(record_curve):
    unscaled = partition_coefficients(record_curve, scaled=False, digits=40)
    bound = phi_iterate_bound(unscaled, iterations=8)
    assert 0.97 <= float(bound.value) <= 0.98
    assert float(bound.value) <= float(single_step_bound(unscaled)) + 1e-9
    scaled = partition_coefficients(record_curve, scaled=True, digits=40)
    assert -19.30 <= float(phi_iterate_bound(scaled, iterations=8).value) <= -19.25


@pytest.mark.slow
def test_gamma_bounds_eps(record_curve, data_dir):
    from fetch_data import fetch_points
    from jacobian import mumford_to_kummer
    coeffs = partition_coefficients(record_curve, digits=40)
    gamma = gamma_tilde(coeffs)
    for P in fetch_points(str(data_dir / "record_generators.json"), record_curve)[:5]:
        x = mumford_to_kummer(P, record_curve).x
        assert eps_arch(x, record_curve, digits=40) <= gamma + mpmath.mpf(10) ** -20
