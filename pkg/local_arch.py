"""The archimedean place: mu-tilde by the duplication series and bounds for it.

mu~(x) = sum_n 4^(-n-1) eps~(delta^n(x)) with eps~(x) = 4 log|x| - log|delta(x)|
(sup norms).  The series is summed in mpmath at a working precision that is
doubled until two successive values agree.

Upper bounds come from the ten quadrics y_s that are eigenvectors of the
2-torsion translations acting on quadratic forms: x_i^2 = sum_s a_is y_s(x)
and y_s(x)^2 = sum_j b_sj delta_j(x) on the Kummer surface.  Translation by a
2-torsion point t pulls a quadric in w back along w * w = B(x, t), so the
operators are read off the biquadratic forms; a random combination of them
separates the eigenvectors.
"""
import logging
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import mpmath
from mpmath.libmp import NoConvergence as MpNoConvergence
from sympy import QQ

from errors import InputError, NoConvergence, PrecisionExhausted, RootIsolationFailure, ValidationFailure
from fields import as_fraction
from kummer import evaluate_form, specialize
from kummer_forms import PAIRS, QUADRATIC, QUARTIC
from settings import get_settings

logger = logging.getLogger(__name__)

QUADRATIC_INDEX = {e: k for k, e in enumerate(QUADRATIC)}
QUARTIC_INDEX = {e: k for k, e in enumerate(QUARTIC)}
SQUARES = tuple(tuple(2 if k == i else 0 for k in range(4)) for i in range(4))


@dataclass(frozen=True)
class PartitionCoefficients:
    roots: tuple
    root_error: object
    a: tuple
    b: tuple
    scaled: bool
    norm: object
    digits: int


@dataclass(frozen=True)
class ArchBound:
    value: object
    iterations: int
    residual: object
    gamma: object = None


def _mpf(c):
    q = as_fraction(c)
    return mpmath.mpf(q.numerator) / q.denominator


def _check_rational(model):
    if model.domain != QQ:
        raise InputError("the archimedean place is defined for curves over Q")


@lru_cache(maxsize=32)
def numeric_forms(model, digits):
    """The specialized Kummer forms with mpf coefficients at ``digits`` precision."""
    with mpmath.workdps(digits):
        return specialize(model).mapped(_mpf)


def sup_norm(model):
    return max(abs(_mpf(c)) for c in model.f)


# ==============================
# MU BY THE DUPLICATION SERIES
# ==============================
def _series(x, model, digits, terms):
    forms = numeric_forms(model, digits)
    with mpmath.workdps(digits):
        y = [_mpf(c) for c in x]
        total = mpmath.mpf(0)
        for n in range(terms):
            norm = max(abs(c) for c in y)
            y = [c / norm for c in y]
            d = [evaluate_form(dj, y) for dj in forms.delta]
            dn = max(abs(c) for c in d)
            if dn == 0:
                raise PrecisionExhausted("delta vanished at the working precision")
            total += -mpmath.log(dn) / mpmath.mpf(4) ** (n + 1)
            y = d
        return total


def _eta(model):
    return 4 * math.log(2 + float(sup_norm(model))) + 10


def series_terms(digits, eta):
    """Terms needed so that the tail eta/3 * 4^-N is below 10^-digits."""
    return math.ceil((digits * math.log(10) + math.log(max(eta / 3, 1))) / math.log(4)) + 1


def mu_arch(x, model, digits=None):
    """mu~ of Kummer coordinates x (rational entries) to ``digits`` decimal digits."""
    _check_rational(model)
    x = tuple(x)
    if all(c == 0 for c in x):
        raise InputError("Kummer coordinates cannot all vanish")
    cfg = get_settings()
    digits = digits or cfg.default_digits
    eta = _eta(model)
    working = digits + cfg.guard_digits
    ceiling = max(cfg.ceiling_digits, working)
    previous = None
    while True:
        try:
            value = _series(x, model, working, series_terms(working, eta))
        except PrecisionExhausted:
            value = None
        if value is not None and previous is not None:
            with mpmath.workdps(working):
                if abs(value - previous) <= mpmath.mpf(10) ** (-digits) * max(1, abs(value)):
                    return value
        if working >= ceiling:
            raise NoConvergence(f"mu~ did not stabilize below {ceiling} digits")
        previous = value
        working = min(2 * working, ceiling)
        logger.debug("mu_arch: raising precision to %d digits", working)


def eps_arch(x, model, digits=None):
    """eps~(x) = 4 log|x| - log|delta(x)|."""
    _check_rational(model)
    digits = digits or get_settings().default_digits
    forms = numeric_forms(model, digits)
    with mpmath.workdps(digits):
        y = [_mpf(c) for c in x]
        d = [evaluate_form(dj, y) for dj in forms.delta]
        return 4 * mpmath.log(max(abs(c) for c in y)) - mpmath.log(max(abs(c) for c in d))


# ==============================
# PARTITION COEFFICIENTS
# ==============================
def _roots(coeffs):
    high = list(reversed(coeffs))
    while high and high[0] == 0:
        high.pop(0)
    dps = mpmath.mp.dps
    try:
        roots, err = mpmath.polyroots(high, maxsteps=100 + 10 * dps, extraprec=2 * dps, error=True)
    except MpNoConvergence as exc:
        raise RootIsolationFailure(f"roots of F did not converge: {exc}") from exc
    gap = min(abs(r - s) for r, s in combinations(roots, 2))
    if gap <= 100 * err:
        raise RootIsolationFailure(f"roots of F are not separated (gap {gap}, error {err})")
    return tuple(roots), err


def _divide_root(f, r):
    """Quotient of f (coefficients from x^0) by x - r."""
    f = list(f)
    while len(f) > 1 and f[-1] == 0:
        f.pop()
    out = [0] * (len(f) - 1)
    acc = 0
    for k in range(len(f) - 1, 0, -1):
        acc = f[k] + r * acc
        out[k - 1] = acc
    return out


def two_torsion_points(f, roots):
    """Kummer coordinates of [(r_i, 0) + (r_j, 0) - W] for pairs of finite roots."""
    for r1, r2 in combinations(roots, 2):
        c = [-v for v in _divide_root(_divide_root(f, r1), r2)] + [0] * 5
        a0 = r1 * r2
        yield (mpmath.mpf(1), r1 + r2, a0, c[0] + c[2] * a0 + c[4] * a0 * a0)


def _power(x, e):
    return mpmath.fprod(x[k] ** n for k, n in enumerate(e) if n)


def _pair_exponent(k, l):
    e = [0] * 4
    e[k] += 1
    e[l] += 1
    return tuple(e)


def translation_operator(forms, t):
    """Pull-back of quadrics along translation by the 2-torsion point t."""
    P = mpmath.matrix(10, 10)
    for k, l in PAIRS:
        col = QUADRATIC_INDEX[_pair_exponent(k, l)]
        scale = mpmath.mpf(1) if k == l else mpmath.mpf(1) / 2
        for beta, gamma, c in forms.B[k, l]:
            P[QUADRATIC_INDEX[beta], col] += scale * c * _power(t, gamma)
            if beta != gamma:
                P[QUADRATIC_INDEX[gamma], col] += scale * c * _power(t, beta)
    square = P * P
    trace = sum(square[k, k] for k in range(10)) / 10
    return P / mpmath.sqrt(trace)


def _eigen_quadrics(operators, rng, attempts=5):
    tol = mpmath.mpf(10) ** (-(mpmath.mp.dps // 4))
    for _ in range(attempts):
        A = mpmath.matrix(10, 10)
        for P in operators:
            A += mpmath.mpf(rng.uniform(-1, 1)) * P
        E, Y = mpmath.eig(A)
        gap = min(abs(u - v) for u, v in combinations(E, 2))
        if gap > tol:
            return Y
    raise ValidationFailure("translation operators do not separate the ten quadrics")


def _quadric_square(Y, s):
    out = {}
    for a, ea in enumerate(QUADRATIC):
        for b, eb in enumerate(QUADRATIC):
            e = tuple(u + v for u, v in zip(ea, eb))
            out[e] = out.get(e, 0) + Y[a, s] * Y[b, s]
    return out


def _quartic_vector(terms):
    v = mpmath.matrix(len(QUARTIC), 1)
    for e, c in terms:
        v[QUARTIC_INDEX[e]] += c
    return v


def _least_squares(M, v):
    MH = M.H
    x = mpmath.lu_solve(MH * M, MH * v)
    residual = mpmath.norm(M * x - v) / max(mpmath.norm(v), mpmath.mpf(1) / 10 ** mpmath.mp.dps)
    return x, residual


def _y_values(Y, x):
    mons = [_power(x, e) for e in QUADRATIC]
    return [mpmath.fsum(Y[k, s] * mons[k] for k in range(10)) for s in range(10)]


def random_kummer_point(forms, rng):
    """Complex point of the Kummer surface with random real x1, x2, x3."""
    x123 = [mpmath.mpf(rng.uniform(-1, 1)) for _ in range(3)]
    parts = [0, 0, 0]
    for e, c in forms.K:
        parts[2 - e[3]] += c * _power(x123 + [1], e[:3] + (0,))
    K2, K1, K0 = parts
    if K2 == 0:
        return x123 + [-K0 / K1]
    return x123 + [(-K1 + mpmath.sqrt(K1 * K1 - 4 * K2 * K0)) / (2 * K2)]


def _validate(forms, Y, a, b, rng, count):
    tol = mpmath.mpf(10) ** (-(mpmath.mp.dps // 2))
    for _ in range(count):
        x = random_kummer_point(forms, rng)
        ys = _y_values(Y, x)
        deltas = [evaluate_form(dj, x) for dj in forms.delta]
        for i in range(4):
            lhs = x[i] ** 2
            rhs = mpmath.fsum(a[i][s] * ys[s] for s in range(10))
            size = mpmath.fsum(abs(a[i][s] * ys[s]) for s in range(10)) + abs(lhs)
            if abs(lhs - rhs) > tol * size:
                raise ValidationFailure(f"x_{i + 1}^2 identity fails (residual {abs(lhs - rhs)})")
        for s in range(10):
            lhs = ys[s] ** 2
            rhs = mpmath.fsum(b[s][j] * deltas[j] for j in range(4))
            size = mpmath.fsum(abs(b[s][j] * deltas[j]) for j in range(4)) + abs(lhs)
            if abs(lhs - rhs) > tol * size:
                raise ValidationFailure(f"y_s^2 identity fails (residual {abs(lhs - rhs)})")


@lru_cache(maxsize=16)
def partition_coefficients(model, scaled=False, digits=None):
    """The a_is and b_sj tables, validated at random points of the Kummer surface."""
    _check_rational(model)
    cfg = get_settings()
    digits = max(digits or cfg.default_digits, 2 * cfg.default_digits)
    work = model.completed_square()
    forms = numeric_forms(work, digits)
    rng = random.Random(cfg.seed)
    with mpmath.workdps(digits):
        f = [_mpf(c) for c in work.f]
        roots, err = _roots(f)
        operators = [translation_operator(forms, t) for t in two_torsion_points(f, roots)]
        Y = _eigen_quadrics(operators, rng)
        a = []
        for i in range(4):
            e = mpmath.matrix(10, 1)
            e[QUADRATIC_INDEX[SQUARES[i]]] = 1
            sol = mpmath.lu_solve(Y, e)
            a.append([sol[s] for s in range(10)])
        M = mpmath.matrix(len(QUARTIC), 5)
        for j, terms in enumerate(list(forms.delta) + [forms.K]):
            col = _quartic_vector(terms)
            for r in range(len(QUARTIC)):
                M[r, j] = col[r]
        b = []
        tol = mpmath.mpf(10) ** (-(digits // 2))
        for s in range(10):
            square = _quadric_square(Y, s)
            v = _quartic_vector(square.items())
            sol, residual = _least_squares(M, v)
            if residual > tol:
                raise ValidationFailure(f"y_s^2 is not in the span of delta and K (residual {residual})")
            b.append([sol[j] for j in range(4)])
        _validate(forms, Y, a, b, rng, cfg.arch_validation_points)
        norm = sup_norm(model)
        if scaled:
            a[3] = [c / norm ** 2 for c in a[3]]
            b = [row[:3] + [row[3] * norm] for row in b]
        logger.debug("partition coefficients: max|a| = %s, max|b| = %s",
                     mpmath.nstr(max(abs(c) for row in a for c in row), 8),
                     mpmath.nstr(max(abs(c) for row in b for c in row), 8))
        return PartitionCoefficients(
            roots=roots, root_error=err,
            a=tuple(tuple(row) for row in a), b=tuple(tuple(row) for row in b),
            scaled=scaled, norm=norm, digits=digits,
        )


# ==============================
# BOUNDS
# ==============================
def phi(coeffs, d):
    inner = [mpmath.sqrt(mpmath.fsum(abs(coeffs.b[s][j]) * d[j] for j in range(4)))
             for s in range(10)]
    return [mpmath.sqrt(mpmath.fsum(abs(coeffs.a[i][s]) * inner[s] for s in range(10)))
            for i in range(4)]


def gamma_tilde(coeffs):
    """Single-step bound for eps~: log max_i (sum_s |a_is| sqrt(sum_j |b_sj|))^2."""
    with mpmath.workdps(coeffs.digits):
        return 4 * mpmath.log(max(phi(coeffs, [1, 1, 1, 1])))


def phi_iterate_bound(coeffs, iterations=None):
    """(4^N / (4^N - 1)) log |b_N| with b_0 = (1, 1, 1, 1) and b_(n+1) = phi(b_n)."""
    N = iterations or get_settings().phi_iterations
    if N < 1:
        raise InputError("at least one phi iteration is needed")
    with mpmath.workdps(coeffs.digits):
        d = [mpmath.mpf(1)] * 4
        first = None
        for n in range(N):
            d = phi(coeffs, d)
            if first is None:
                first = mpmath.log(max(d))
            logger.debug("phi iteration %d: log|b| = %s", n + 1, mpmath.nstr(mpmath.log(max(d)), 10))
        scale = mpmath.mpf(4) ** N
        value = scale / (scale - 1) * mpmath.log(max(d))
        residual = abs(first) * mpmath.mpf(4) / 3 / scale
        return ArchBound(value=value, iterations=N, residual=residual, gamma=gamma_tilde(coeffs))


def single_step_bound(coeffs):
    """gamma~/3, the bound on mu~ from eps~ <= gamma~."""
    return gamma_tilde(coeffs) / 3
