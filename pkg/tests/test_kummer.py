import json

import pytest
from sympy import QQ

from commands.selftest import exact_gate
from conftest import ex1_model
from errors import AmbiguousDivision, InputError, UnsupportedTransformation
from fetch_data import fetch_points
from jacobian import cantor_add, mumford_to_kummer, negate
from kummer import (KummerCoords, Transformation, duplicate, on_kummer, pseudo_add, solve_star, star,
                    transform_diag_swap, twist_map, twist_model)
from kummer_forms import PAIRS, derive_forms


@pytest.mark.parametrize("a", [2, 10**10 + 19])
def test_duplication_on_ex1_point(a):
    model = ex1_model(a)
    x = KummerCoords.of((0, 1, 0, 0))
    assert on_kummer(x, model)
    assert duplicate(x, model).x == (4 * a * a, 0, 0, a**4)


def test_origin_is_fixed(record_curve):
    assert duplicate(KummerCoords.origin(), record_curve).x == (0, 0, 0, 1)


def test_forms_are_memoized_and_complete():
    forms = derive_forms()
    assert forms is derive_forms()
    assert set(forms.B) == set(PAIRS)
    assert len(forms.delta) == 4
    assert forms.K


def test_forms_dump(tmp_path):
    path = tmp_path / "forms.json"
    derive_forms().dump(path)
    data = json.loads(path.read_text())
    assert set(data) == {"seed", "B", "K", "delta"}
    assert set(data["B"]) == {f"{i + 1}{j + 1}" for i, j in PAIRS}


def test_exact_identities_on_random_samples():
    models = exact_gate(100, 3)
    assert len(models) == 100


def test_pseudo_addition(record_curve, data_dir):
    P, Q = fetch_points(str(data_dir / "record_generators.json"), record_curve)[:2]
    x, y = mumford_to_kummer(P, record_curve), mumford_to_kummer(Q, record_curve)
    z = mumford_to_kummer(cantor_add(P, negate(Q, record_curve), record_curve), record_curve)
    w = pseudo_add(x, y, z, record_curve).w
    assert w.projectively_equal(mumford_to_kummer(cantor_add(P, Q, record_curve), record_curve))


def test_star_and_solve_star():
    w, z = (QQ(1), QQ(2), QQ(3), QQ(4)), (QQ(5), QQ(0), QQ(7), QQ(1))
    Bxy = star(w, z)
    assert Bxy[0][1] == 1 * 0 + 2 * 5
    assert Bxy[2][2] == 21
    recovered = KummerCoords(solve_star(Bxy, z, 0))
    assert recovered.projectively_equal(KummerCoords(w))


def test_pseudo_add_needs_nonzero_z(record_curve):
    x = KummerCoords.of((1, 0, 0, 0))
    with pytest.raises(AmbiguousDivision):
        pseudo_add(x, x, (0, 0, 0, 0), record_curve)


def test_twist(record_curve, data_dir):
    P = fetch_points(str(data_dir / "record_generators.json"), record_curve)[0]
    x = mumford_to_kummer(P, record_curve)
    assert on_kummer(twist_map(x, QQ(-3)), twist_model(record_curve, QQ(-3)))
    with pytest.raises(InputError):
        twist_map(x, 0)


@pytest.mark.parametrize("tau", [Transformation(a=2, d=3, e=5), Transformation(a=1, d=2, swap=True)])
def test_transformations(record_curve, data_dir, tau):
    P = fetch_points(str(data_dir / "record_generators.json"), record_curve)[1]
    x = mumford_to_kummer(P, record_curve)
    image = transform_diag_swap(x, tau)
    assert on_kummer(image, tau.apply_model(record_curve))


def test_unsupported_transformation(record_curve):
    with pytest.raises(UnsupportedTransformation):
        transform_diag_swap((1, 0, 0, 0), "not a transformation")
