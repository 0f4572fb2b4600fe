import random
from pathlib import Path

import pytest

from curve import CurveModel
from fields import Base
from settings import clear_overrides

DATA = Path(__file__).resolve().parent.parent / "data"

RECORD_F = (247747600, -985905640, 567207969, 2396040466, 52485681, -470135160, 82342800)

# beta_p on the record curve, including the +2 from the 2-adic model.
RECORD_BETA = {
    2: (2, "1145/242"), 3: (0, "2/3"), 5: (0, "22/13"), 11: (0, "1/2"), 13: (0, "1/2"),
    17: (0, "1"), 19: (0, "3/5"), 23: (0, "1/2"), 41: (0, "3/5"), 73: (0, "1/3"),
}

# successive minima of the height lattice spanned by the record generators
RECORD_MINIMA = (
    8.5276, 8.5668, 8.5956, 8.8594, 9.0256, 9.0776, 9.1426, 9.1753,
    9.4456, 9.7428, 9.7747, 9.9047, 9.9465, 9.9611, 9.9704, 10.1408,
    10.3472, 10.3784, 10.5284, 10.5356, 10.6318, 10.9287,
)


def ex1_model(a):
    """y^2 = x^5 + a^2 x + a^2."""
    return CurveModel.from_coefficients([a * a, a * a, 0, 0, 0, 1, 0])


def cusp_model(p):
    """y^2 = (x^2 + 1)(x^3 + p^5 x + p^8)."""
    return CurveModel.from_coefficients([p**8, p**5, p**8, p**5 + 1, 0, 1, 0])


QT_F = (
    (0, 0, 0, 0, 4, 16, 24, 16, 4),
    (0, 0, 4, 4, -16, -32, -20, -4),
    (1, -3, -2, 2, -3, -3),
    (0, 2, 4, 8, 12, 6),
    (-2, 2, -1, -4, 1),
    (0, -2, -2),
    (1,),
)


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def record_curve():
    return CurveModel.from_coefficients(RECORD_F)


@pytest.fixture(scope="session")
def qt_curve():
    return CurveModel.from_coefficients([list(c) for c in QT_F], base=Base.QT)


@pytest.fixture
def rng():
    return random.Random(20240519)


@pytest.fixture(autouse=True)
def fresh_settings():
    yield
    clear_overrides()
