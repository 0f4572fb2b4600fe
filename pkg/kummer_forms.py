"""Derivation of the Kummer surface forms for y^2 = F(x).

The biquadratic forms B_ij, the duplication polynomials delta_j = B_j4(x, x)
and the Kummer quartic K have integer coefficients that are polynomials in
f0..f6.  They are recovered here by exact linear algebra over a large prime
field: random curves and random divisors give Kummer coordinates of P, Q,
P+Q and P-Q, which are sampled into linear systems restricted to monomials of
the right weight.  The result is validated modulo a second prime before use.

Every form is stored as a tuple of terms ``(alpha, beta, gamma, coeff)``:
``alpha`` the exponent vector of f0..f6, ``beta`` and ``gamma`` exponent
vectors of x1..x4 and y1..y4 (for B; an unordered pair), ``coeff`` a
Fraction.
"""
import json
import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

import flint
import sympy

from errors import ValidationFailure
from settings import get_settings

logger = logging.getLogger(__name__)

# torus weights of x1..x4 (f_i has weight i) and degrees in the twist grading
WEIGHTS = (0, -1, -2, 2)
TWIST = (0, 0, 0, 1)
PAIRS = tuple((i, j) for i in range(4) for j in range(i, 4))


def exponent_vectors(degree, nvars=4):
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for k in combo:
            e[k] += 1
        out.append(tuple(e))
    return out


QUADRATIC = exponent_vectors(2)
QUARTIC = exponent_vectors(4)


def _weight(e):
    return sum(w * k for w, k in zip(WEIGHTS, e))


@lru_cache(maxsize=None)
def f_monomials(size, weight):
    """Exponent vectors alpha over f0..f6 with |alpha| = size and sum i*alpha_i = weight."""
    if size < 0 or weight < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(7), size):
        if sum(combo) == weight:
            e = [0] * 7
            for k in combo:
                e[k] += 1
            out.append(tuple(e))
    return tuple(out)


@lru_cache(maxsize=None)
def biquadratic_basis(i, j):
    """Candidate terms (alpha, beta, gamma) for B_ij, beta <= gamma in QUADRATIC order."""
    basis = []
    for a in range(len(QUADRATIC)):
        for b in range(a, len(QUADRATIC)):
            beta, gamma = QUADRATIC[a], QUADRATIC[b]
            size = TWIST[i] + TWIST[j] + 2 - beta[3] - gamma[3]
            weight = WEIGHTS[i] + WEIGHTS[j] + 4 - _weight(beta) - _weight(gamma)
            for alpha in f_monomials(size, weight):
                basis.append((alpha, beta, gamma))
    return tuple(basis)


@lru_cache(maxsize=None)
def quartic_basis():
    basis = []
    for gamma in QUARTIC:
        for alpha in f_monomials(2 - gamma[3], 2 - _weight(gamma)):
            basis.append((alpha, gamma))
    return tuple(basis)


# ==============================
# ARITHMETIC MODULO A PRIME
# ==============================
def _poly(coeffs, p):
    return flint.nmod_poly([int(c) % p for c in coeffs], p)


def _coeffs(poly, n=0):
    """Integer coefficients, constant term first, padded to length n."""
    out = [int(c) for c in poly.coeffs()]
    return out + [0] * (n - len(out))


def _sqrt_mod(a, p):
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    return int(sympy.sqrt_mod(a, p))


def _linear_product(roots, p):
    X = flint.nmod_poly([0, 1], p)
    out = flint.nmod_poly([1], p)
    for u in roots:
        out *= X - u
    return out


def _interpolate(points, p):
    """Lagrange interpolation through (u, v) pairs mod p."""
    out = flint.nmod_poly([], p)
    for k, (uk, vk) in enumerate(points):
        others = [um for m, (um, _) in enumerate(points) if m != k]
        den = 1
        for um in others:
            den = den * (uk - um) % p
        out += _linear_product(others, p) * (vk * pow(den, -1, p) % p)
    return out


def kummer_of_divisor(a, b, f, p):
    """Kummer coordinates of (a, b) over F_p; a monic quadratic, all three nmod_poly."""
    b = b % a
    c, r = divmod(b * b - f, a)
    if r.degree() >= 0:
        raise ValueError("b^2 - F is not divisible by a")
    c = _coeffs(c, 5)
    a0, a1 = _coeffs(a, 2)[:2]
    x4 = (c[0] + c[2] * a0 + c[4] * a0 * a0) % p
    return (1, (-a1) % p, a0, x4)


class _Sampler:
    """Random curves and divisor pairs over F_p with non-square leading coefficient."""

    def __init__(self, p, rng):
        self.p = p
        self.rng = rng

    def curve(self):
        p = self.p
        while True:
            f = [self.rng.randrange(p) for _ in range(7)]
            if f[6] and pow(f[6], (p - 1) // 2, p) == p - 1:
                return f

    def points(self, F, count):
        p = self.p
        seen, pts = set(), []
        while len(pts) < count:
            u = self.rng.randrange(p)
            if u in seen:
                continue
            v = _sqrt_mod(int(F(u)), p)
            if v is None or v == 0:
                continue
            seen.add(u)
            if self.rng.random() < 0.5:
                v = p - v
            pts.append((u, v))
        return pts

    def divisor(self, pts):
        return _linear_product([u for u, _ in pts], self.p), _interpolate(pts, self.p)

    def residual(self, F, pts):
        """Kummer coordinates of the residual divisor of the cubic through four points."""
        p = self.p
        c = _interpolate(pts, p)
        quad, r = divmod(c * c - F, _linear_product([u for u, _ in pts], p))
        if r.degree() >= 0 or quad.degree() != 2:
            return None
        quad *= pow(int(quad[2]), -1, p)
        return kummer_of_divisor(quad, c, F, p)

    def sample(self):
        """(f, x, y, w, z) with x = k(P), y = k(Q), w = k(P+Q), z = k(P-Q)."""
        p = self.p
        while True:
            f = self.curve()
            F = _poly(f, p)
            pts = self.points(F, 4)
            P, Q = pts[:2], pts[2:]
            x = kummer_of_divisor(*self.divisor(P), F, p)
            y = kummer_of_divisor(*self.divisor(Q), F, p)
            w = self.residual(F, P + Q)
            z = self.residual(F, P + [(u, (-v) % p) for u, v in Q])
            if w is not None and z is not None:
                return f, x, y, w, z


def _star(w, z, i, j, p):
    if i == j:
        return w[i] * z[i] % p
    return (w[i] * z[j] + w[j] * z[i]) % p


class _MonomialCache:
    def __init__(self, f, p):
        self.f, self.p = f, p
        self.cache = {}

    def f_value(self, alpha):
        val = self.cache.get(alpha)
        if val is None:
            val = 1
            for k, e in enumerate(alpha):
                if e:
                    val = val * pow(self.f[k], e, self.p) % self.p
            self.cache[alpha] = val
        return val


def _x_value(x, e, p):
    val = 1
    for k, n in enumerate(e):
        if n:
            val = val * pow(x[k], n, p) % p
    return val


def _biquadratic_row(basis, f_cache, x, y, p):
    row = []
    for alpha, beta, gamma in basis:
        m = _x_value(x, beta, p) * _x_value(y, gamma, p)
        if beta != gamma:
            m += _x_value(x, gamma, p) * _x_value(y, beta, p)
        row.append(f_cache.f_value(alpha) * m % p)
    return row


# ==============================
# LINEAR ALGEBRA
# ==============================
def _rref(rows, ncols, p):
    M = flint.nmod_mat(len(rows), ncols, [v for r in rows for v in r], p)
    R, rank = M.rref()
    return R, rank


def _pivots(R, rank, ncols):
    pivots = []
    for i in range(rank):
        for j in range(ncols):
            if int(R[i, j]) != 0:
                pivots.append(j)
                break
    return pivots


def nullspace_vector(rows, ncols, p):
    """The unique (up to scale) kernel vector; raises when the kernel is not a line."""
    R, rank = _rref(rows, ncols, p)
    if rank != ncols - 1:
        raise ValidationFailure(f"expected a one-dimensional kernel, rank {rank} of {ncols}")
    pivots = _pivots(R, rank, ncols)
    free = next(j for j in range(ncols) if j not in set(pivots))
    vec = [0] * ncols
    vec[free] = 1
    for i, j in enumerate(pivots):
        vec[j] = (-int(R[i, free])) % p
    return vec


def solve_full_rank(rows, rhs, ncols, p):
    augmented = [r + [b] for r, b in zip(rows, rhs)]
    R, rank = _rref(augmented, ncols + 1, p)
    pivots = _pivots(R, rank, ncols + 1)
    if ncols in pivots:
        raise ValidationFailure("inconsistent interpolation system")
    if rank != ncols:
        raise ValidationFailure(f"interpolation system has rank {rank} < {ncols}")
    return [int(R[i, ncols]) for i in range(ncols)]


def rational_reconstruct(a, p):
    """Fraction n/d = a (mod p) with |n|, d <= sqrt(p/2)."""
    bound = math.isqrt(p // 2)
    r0, r1 = p, a % p
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        raise ValidationFailure(f"no small rational for residue {a}")
    return Fraction(r1, s1)


# ==============================
# DERIVATION
# ==============================
@dataclass(frozen=True)
class KummerForms:
    B: dict
    K: tuple
    delta: tuple
    seed: int

    def to_json(self):
        def term(alpha, *parts):
            return {"f": list(alpha), "x": [list(q) for q in parts[:-1]], "c": str(parts[-1])}

        return {
            "seed": self.seed,
            "B": {f"{i + 1}{j + 1}": [term(a, b, g, c) for a, b, g, c in self.B[i, j]]
                  for i, j in PAIRS},
            "K": [term(a, g, c) for a, g, c in self.K],
            "delta": [[term(a, g, c) for a, g, c in d] for d in self.delta],
        }

    def dump(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json(), fh, indent=1)


def _collapse_diagonal(terms):
    """B_j4(x, x) as a quartic in x."""
    acc = {}
    for alpha, beta, gamma, c in terms:
        mono = tuple(b + g for b, g in zip(beta, gamma))
        factor = 1 if beta == gamma else 2
        acc[alpha, mono] = acc.get((alpha, mono), 0) + factor * c
    return tuple((a, m, c) for (a, m), c in sorted(acc.items()) if c)


def _lift(vec, basis, scale, p):
    terms = []
    for coeff, key in zip(vec, basis):
        c = rational_reconstruct(coeff * scale % p, p)
        if c:
            terms.append((*key, c))
    return tuple(terms)


def _solve_biquadratic(samples, p):
    basis11, basis12 = biquadratic_basis(0, 0), biquadratic_basis(0, 1)
    n11, n12, S = len(basis11), len(basis12), len(samples)
    ncols = n11 + n12 + S
    rows = []
    for s, (f, x, y, w, z) in enumerate(samples):
        cache = _MonomialCache(f, p)
        r11 = _biquadratic_row(basis11, cache, x, y, p)
        r12 = _biquadratic_row(basis12, cache, x, y, p)
        row = r11 + [0] * n12 + [0] * S
        row[n11 + n12 + s] = (-_star(w, z, 0, 0, p)) % p
        rows.append(row)
        row = [0] * n11 + r12 + [0] * S
        row[n11 + n12 + s] = (-_star(w, z, 0, 1, p)) % p
        rows.append(row)
    vec = nullspace_vector(rows, ncols, p)
    scales = vec[n11 + n12:]
    solved = {(0, 0): vec[:n11], (0, 1): vec[n11:n11 + n12]}
    for i, j in PAIRS:
        if (i, j) in solved:
            continue
        basis = biquadratic_basis(i, j)
        rows, rhs = [], []
        for s, (f, x, y, w, z) in enumerate(samples):
            rows.append(_biquadratic_row(basis, _MonomialCache(f, p), x, y, p))
            rhs.append(scales[s] * _star(w, z, i, j, p) % p)
        solved[i, j] = solve_full_rank(rows, rhs, len(basis), p)
        logger.debug("B_%d%d: %d unknowns solved", i + 1, j + 1, len(basis))
    return solved


def _solve_quartic(points, p):
    basis = quartic_basis()
    rows = []
    for f, x in points:
        cache = _MonomialCache(f, p)
        rows.append([cache.f_value(alpha) * _x_value(x, gamma, p) % p for alpha, gamma in basis])
    vec = nullspace_vector(rows, len(basis), p)
    lead = basis.index(((0,) * 7, (0, 2, 0, 2)))
    inv = pow(vec[lead], -1, p)
    return _lift(vec, basis, inv, p)


def _evaluate_B(terms, f, x, y, q):
    total = 0
    cache = _MonomialCache([c % q for c in f], q)
    for alpha, beta, gamma, c in terms:
        m = _x_value(x, beta, q) * _x_value(y, gamma, q)
        if beta != gamma:
            m += _x_value(x, gamma, q) * _x_value(y, beta, q)
        total += c.numerator * pow(c.denominator, -1, q) * cache.f_value(alpha) * m
    return total % q


def _validate(forms, q, count, rng):
    sampler = _Sampler(q, rng)
    for _ in range(count):
        f, x, y, w, z = sampler.sample()
        values = {ij: _evaluate_B(forms.B[ij], f, x, y, q) for ij in PAIRS}
        ref = values[0, 0]
        scale = ref * pow(_star(w, z, 0, 0, q), -1, q) % q
        for i, j in PAIRS:
            if values[i, j] != scale * _star(w, z, i, j, q) % q:
                raise ValidationFailure(f"B_{i + 1}{j + 1} fails w*z = B(x, y) modulo {q}")
        kval = 0
        for alpha, gamma, c in forms.K:
            kval += (c.numerator * pow(c.denominator, -1, q)
                     * _MonomialCache(f, q).f_value(alpha) * _x_value(x, gamma, q))
        if kval % q:
            raise ValidationFailure(f"Kummer quartic does not vanish modulo {q}")


@lru_cache(maxsize=4)
def derive_forms(seed=None):
    """Interpolate and validate B, delta and K; memoized per seed."""
    cfg = get_settings()
    seed = cfg.seed if seed is None else seed
    p, q = cfg.interpolation_prime, cfg.check_prime
    rng = random.Random(seed)
    sampler = _Sampler(p, rng)
    largest = max(len(biquadratic_basis(i, j)) for i, j in PAIRS)
    count = max(largest, len(biquadratic_basis(0, 0)) + len(biquadratic_basis(0, 1))) + cfg.extra_samples
    logger.info("deriving Kummer forms from %d samples modulo %d", count, p)
    samples = [sampler.sample() for _ in range(count)]
    solved = _solve_biquadratic(samples, p)

    norm_basis = biquadratic_basis(3, 3)
    lead = norm_basis.index(((0,) * 7, (0, 0, 0, 2), (0, 0, 0, 2)))
    inv = pow(solved[3, 3][lead], -1, p)
    B = {ij: _lift(solved[ij], biquadratic_basis(*ij), inv, p) for ij in PAIRS}

    points = [(f, x) for f, x, y, _, _ in samples] + [(f, y) for f, x, y, _, _ in samples]
    K = _solve_quartic(points, p)
    delta = tuple(_collapse_diagonal(B[j, 3]) for j in range(4))
    forms = KummerForms(B=B, K=K, delta=delta, seed=seed)
    _validate(forms, q, cfg.validation_samples, random.Random(seed + 1))
    logger.info("Kummer forms validated modulo %d", q)
    return forms
