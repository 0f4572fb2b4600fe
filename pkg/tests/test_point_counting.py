import pytest

from curve import CurveModel
from errors import BadReduction, InputError
from point_counting import PointCounts, count_points, count_points_curve, jacobian_order, torsion_bound

QUINTIC = CurveModel.from_coefficients([1, 0, 0, 0, 0, 1])
SPLIT = CurveModel.from_coefficients([0, -12, 4, 15, -5, -3, 1])
QUINTIC_COUNTS = PointCounts(3, 4, 10)


def test_counts_over_f3():
    # x^5 + 1 over F_3: x = 0 gives two points, x = 2 one, plus one at infinity
    assert count_points(QUINTIC, 3) == PointCounts(3, 4, 10)
    assert jacobian_order(QUINTIC, 3) == 10


def test_rational_two_torsion_divides_orders():
    bound, used = torsion_bound(SPLIT, [7, 11, 13])
    assert used == (7, 11, 13)
    assert bound % 16 == 0


def test_bad_primes_are_skipped():
    _, used = torsion_bound(QUINTIC, [3, 5, 7])
    assert used == (3, 7)


def test_errors():
    with pytest.raises(InputError):
        count_points(QUINTIC, 2)
    with pytest.raises(BadReduction):
        count_points(QUINTIC, 5)


def test_prime_power_fields():
    # L(T) = 1 + 9T^4 over F_3, so #J(F_9) = (1 + 9T^2)^2 at T = 1
    assert count_points_curve(QUINTIC, 3) == 4
    assert count_points_curve(QUINTIC, 9) == 10
    assert count_points_curve(QUINTIC, 81) == 118
    assert jacobian_order(QUINTIC, 9) == 100
    assert QUINTIC_COUNTS.power_sums(4) == [4, 0, 0, 0, -36]
    with pytest.raises(InputError):
        count_points_curve(QUINTIC, 15)


@pytest.mark.parametrize("q", [7, 11, 13, 49, 121])
def test_weil_interval(q):
    order = jacobian_order(SPLIT, q)
    assert (q ** 0.5 - 1) ** 4 <= order <= (q ** 0.5 + 1) ** 4
