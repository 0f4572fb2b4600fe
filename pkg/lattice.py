"""Mordell-Weil lattice utilities: LLL reduction, successive minima and index bounds."""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import flint
import mpmath
import numpy as np

from errors import InputError

logger = logging.getLogger(__name__)

# gamma_r^r, exact for r <= 8 and r = 24
HERMITE_POWERS = {1: Fraction(1), 2: Fraction(4, 3), 3: Fraction(2), 4: Fraction(4),
                  5: Fraction(8), 6: Fraction(64, 3), 7: Fraction(64), 8: Fraction(256),
                  24: Fraction(4 ** 24)}


def hermite_power(r):
    """An upper bound for gamma_r^r (Blichfeldt's bound where no exact value is tabulated)."""
    if r < 1 or r > 24:
        raise InputError("Hermite constants are tabulated for 1 <= r <= 24")
    if r in HERMITE_POWERS:
        return mpmath.mpf(HERMITE_POWERS[r].numerator) / HERMITE_POWERS[r].denominator
    return (2 / mpmath.pi) ** r * mpmath.gamma(2 + mpmath.mpf(r) / 2) ** 2


@dataclass(frozen=True)
class ReducedLattice:
    transform: tuple
    gram: object
    norms: tuple

    def as_array(self):
        r = self.gram.rows
        return np.array([[float(self.gram[i, j]) for j in range(r)] for i in range(r)])


def lll_reduce(gram, scale_digits=20):
    """LLL-reduce a real Gram matrix; norms are achieved values, sorted."""
    r = gram.rows
    scale = mpmath.mpf(10) ** scale_digits
    entries = [int(mpmath.nint(gram[i, j] * scale)) for i in range(r) for j in range(r)]
    _, U = flint.fmpz_mat(r, r, entries).lll(transform=True, rep="gram")
    T = mpmath.matrix([[int(U[i, j]) for j in range(r)] for i in range(r)])
    reduced = T * gram * T.T
    norms = tuple(sorted(reduced[i, i] for i in range(r)))
    logger.debug("reduced norms: %s", [mpmath.nstr(n, 8) for n in norms])
    return ReducedLattice(tuple(tuple(int(U[i, j]) for j in range(r)) for i in range(r)),
                          reduced, norms)


def index_bound(regulator, minima, bound):
    """I <= sqrt(R gamma_r^r / prod min(m_j, B)) for a subgroup of full rank r."""
    r = len(minima)
    denom = mpmath.fprod(min(m, bound) for m in minima)
    if denom <= 0:
        raise InputError("the bound and all minima must be positive")
    value = mpmath.sqrt(regulator * hermite_power(r) / denom)
    return max(1, int(math.floor(value)))


def short_vectors(gram, radius):
    """Nonzero x, one of each pair +-x, with x G x^T <= radius (Fincke-Pohst enumeration)."""
    G = np.array([[float(gram[i, j]) for j in range(gram.cols)] for i in range(gram.rows)])
    r = len(G)
    R = np.linalg.cholesky(G).T
    d = np.diag(R) ** 2
    mu = R / np.diag(R)[:, None]
    x = [0] * r
    out = []

    def walk(i, remaining):
        center = -sum(mu[i, j] * x[j] for j in range(i + 1, r))
        span = math.sqrt(max(remaining, 0.0) / d[i])
        for v in range(math.ceil(center - span), math.floor(center + span) + 1):
            left = remaining - d[i] * (v - center) ** 2
            if left < -1e-9:
                continue
            x[i] = v
            if i > 0:
                walk(i - 1, left)
            elif any(x):
                out.append(tuple(x))
        x[i] = 0

    walk(r - 1, float(radius))
    # keep the representative whose last nonzero entry is positive
    return [v for v in out if next(c for c in reversed(v) if c) > 0]


def successive_minima(gram):
    """lambda_1 <= ... <= lambda_r of the lattice with Gram matrix ``gram``."""
    reduced = lll_reduce(gram)
    r = gram.rows
    radius = float(reduced.norms[-1]) * (1 + 1e-9)
    G = reduced.gram
    candidates = []
    for v in short_vectors(G, radius):
        w = mpmath.matrix(v)
        candidates.append(((w.T * G * w)[0, 0], v))
    candidates.sort(key=lambda item: item[0])
    logger.debug("%d short vectors below %.6g", len(candidates), radius)
    chosen, minima = [], []
    for norm, v in candidates:
        rows = chosen + [v]
        if flint.fmpz_mat(len(rows), r, [c for row in rows for c in row]).rank() == len(rows):
            chosen.append(v)
            minima.append(norm)
            if len(chosen) == r:
                break
    return tuple(minima)
