import mpmath
import pytest

from errors import InputError
from lattice import hermite_power, index_bound, lll_reduce, short_vectors, successive_minima


def test_hermite_powers():
    assert hermite_power(2) == mpmath.mpf(4) / 3
    assert hermite_power(8) == 256
    assert hermite_power(9) > hermite_power(8)
    with pytest.raises(InputError):
        hermite_power(0)


def test_lll_finds_short_vector():
    gram = mpmath.matrix([[1, 0.9], [0.9, 1]])
    reduced = lll_reduce(gram)
    (a, b), (c, d) = reduced.transform
    assert abs(a * d - b * c) == 1
    assert abs(reduced.norms[0] - 0.2) < 1e-9
    assert abs(reduced.norms[1] - 1) < 1e-9
    assert reduced.as_array().shape == (2, 2)


def test_reduced_gram_has_the_same_determinant():
    gram = mpmath.matrix([[5, 3, 1], [3, 6, 2], [1, 2, 4]])
    reduced = lll_reduce(gram)
    assert abs(mpmath.det(reduced.gram) - mpmath.det(gram)) < 1e-9
    assert list(reduced.norms) == sorted(reduced.norms)


@pytest.mark.parametrize("regulator, minima, bound, expected", [
    (1, (1, 1), 1, 1),
    (16, (1, 1), 1, 4),
    (16, (4, 4), 1, 4),
    (16, (4, 4), 10, 1),
])
def test_index_bound(regulator, minima, bound, expected):
    assert index_bound(regulator, minima, bound) == expected


def test_index_bound_needs_positive_minima():
    with pytest.raises(InputError):
        index_bound(1, (0, 1), 1)


def test_short_vectors_of_the_square_lattice():
    gram = mpmath.matrix([[1, 0], [0, 1]])
    assert sorted(short_vectors(gram, 1)) == [(0, 1), (1, 0)]
    assert len(short_vectors(gram, 2)) == 4


def test_successive_minima_beat_the_reduced_norms():
    # the A2 lattice in a skewed basis: both minima equal 2
    gram = mpmath.matrix([[2, 1], [1, 2]])
    skew = mpmath.matrix([[1, 0], [7, 1]])
    minima = successive_minima(skew * gram * skew.T)
    assert [float(m) for m in minima] == pytest.approx([2, 2])


def test_successive_minima_of_a_diagonal_lattice():
    gram = mpmath.matrix([[3, 0, 0], [0, 1, 0], [0, 0, 2]])
    assert [float(m) for m in successive_minima(gram)] == pytest.approx([1, 2, 3])
