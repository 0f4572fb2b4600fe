"""Divisor-class arithmetic on genus-2 Jacobians in Mumford representation.

Points are stored on the given sextic model with their multiplicities at the
two points at infinity.  Arithmetic runs in an affine chart, chosen by a
Moebius change of coordinates so that the chart's leading coefficient is not
a square: there every class has a unique representative (a, b) with a monic
of degree at most 2, so Cantor composition and reduction need no balancing.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from curve import CurveModel, discriminant
from errors import ChartError, InvalidPoint, NotOnKummer
from fields import coeff_list, degree, form_ring, from_coeffs, poly_ring, square_root, to_domain, xgcd
from kummer import KummerCoords, kummer_quartic

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class MumfordPoint:
    """[D - D_inf]: a monic (or 1), b with deg b <= 3, inf_weights (w+, w-)."""
    a: tuple
    b: tuple
    inf_weights: tuple = (0, 0)

    @property
    def is_zero(self):
        return len(self.a) == 1 and self.inf_weights == (1, 1)

    def polys(self, model):
        R, _ = poly_ring(model.domain)
        return from_coeffs(R, self.a), from_coeffs(R, self.b)

    def __str__(self):
        if self.is_zero:
            return "O"
        a = " + ".join(f"{c}*x^{i}" for i, c in enumerate(self.a) if c)
        b = " + ".join(f"{c}*x^{i}" for i, c in enumerate(self.b) if c) or "0"
        return f"({a}, {b})" + (f" + {self.inf_weights}" if any(self.inf_weights) else "")


def _point(a, b, weights=(0, 0)):
    return MumfordPoint(tuple(coeff_list(a)), tuple(coeff_list(b)), tuple(weights))


def zero(model):
    return MumfordPoint((model.domain.one,), (), (1, 1))


def make_point(model, a, b, inf_weights=(0, 0)):
    """Validated Mumford point; b is reduced modulo a."""
    K = model.domain
    R, _ = poly_ring(K)
    A = from_coeffs(R, [to_domain(c, K) for c in a])
    B = from_coeffs(R, [to_domain(c, K) for c in b])
    if A == 0 or degree(A) > 2:
        raise InvalidPoint("a must be nonzero of degree at most 2")
    if sum(inf_weights) + degree(A) != 2:
        raise InvalidPoint("deg a plus the weights at infinity must be 2")
    A = A.quo_ground(A.LC)
    if degree(A) == 0 and (tuple(inf_weights) == (1, 1) or model.f[6] == K.zero):
        return zero(model)
    if (B * B + model.H() * B - model.F()) % A != 0:
        raise InvalidPoint("b^2 + H b - F is not divisible by a")
    return _point(A, B % A if degree(A) > 0 else R.zero, inf_weights)


# ==============================
# BINARY FORMS AND CHARTS
# ==============================
def substitute(coeffs, d, M, K):
    """Form sum c_i X^i Z^(d-i) evaluated at (alpha X + beta Z, gamma X + delta Z)."""
    R, X, Z = form_ring(K)
    al, be, ga, de = M
    Xn, Zn = al * X + be * Z, ga * X + de * Z
    G = R.zero
    for i, c in enumerate(coeffs):
        if c:
            G += c * Xn**i * Zn**(d - i)
    return tuple(G.get((i, d - i), K.zero) for i in range(d + 1))


def _form_value(coeffs, X, Z):
    d = len(coeffs) - 1
    return sum((c * X**i * Z**(d - i) for i, c in enumerate(coeffs)), 0 * X)


@dataclass(frozen=True)
class Chart:
    """Affine chart x' = X'/Z' with X = alpha X' + beta Z', Z = gamma X' + delta Z'."""
    M: tuple
    inverse: tuple
    f: tuple


def _candidates(K):
    yield (K.one, K.zero)
    if getattr(K, "mod", None):
        for alpha in range(int(K.mod)):
            yield (K.convert(alpha), K.one)
        return
    for n in range(64):
        alpha = (n + 1) // 2 * (1 if n % 2 else -1)
        yield (K.convert(alpha), K.one)


@lru_cache(maxsize=64)
def chart_for(model):
    if model.has_h:
        raise ChartError("charts are built on the completed-square model")
    K = model.domain
    for al, ga in _candidates(K):
        value = _form_value(model.f, al, ga)
        if value != K.zero and square_root(value, K) is None:
            be, de = (K.one, K.zero) if ga != K.zero else (K.zero, K.one)
            det = al * de - be * ga
            M = (al, be, ga, de)
            inverse = (de / det, -be / det, -ga / det, al / det)
            f = substitute(model.f, 6, M, K)
            logger.debug("chart (%s:%s) for %s", al, ga, model)
            return Chart(M, inverse, f)
    raise ChartError("no chart with a non-square leading coefficient")


def to_forms(P, model):
    """Binary forms (A, B): A quadratic, B cubic, describing the divisor of P."""
    K = model.domain
    a = list(P.a) + [K.zero] * (3 - len(P.a))
    b = list(P.b) + [K.zero] * (4 - len(P.b))
    wp, wm = P.inf_weights
    if degree_of(P.a) == 2:
        return tuple(a), tuple(b)
    s = square_root(model.f[6], K)
    if s is None:
        raise InvalidPoint("points at infinity need f6 to be a square")
    eps = s if wp else -s
    if degree_of(P.a) == 1:
        r = -a[0] / a[1]
        yr = b[0] + b[1] * r
        return (-r, K.one, K.zero), (yr - eps * r**3, K.zero, K.zero, eps)
    if s == K.zero:
        raise InvalidPoint("a double point at infinity needs f6 != 0")
    return (K.one, K.zero, K.zero), (K.zero, K.zero, model.f[5] / (2 * eps), eps)


def degree_of(coeffs):
    return len(coeffs) - 1


def from_forms(A, B, model):
    """Mumford point from binary forms (A, B) on the original model."""
    K = model.domain
    R, x = poly_ring(K)
    A0, A1, A2 = A
    if A2 != K.zero:
        a = from_coeffs(R, [A0 / A2, A1 / A2, K.one])
        b = from_coeffs(R, B) % a
        return _point(a, b)
    s = square_root(model.f[6], K)
    B3 = B[3]
    if s is None:
        raise InvalidPoint("divisor meets infinity but f6 is not a square")
    if s == K.zero:
        if A1 == K.zero:
            return zero(model)
        r = -A0 / A1
        return _point(x - r, R.zero + (B[0] + B[1] * r + B[2] * r**2), (1, 0))
    if B3 == s:
        sign = (1, 0)
    elif B3 == -s:
        sign = (0, 1)
    else:
        raise InvalidPoint("divisor at infinity on neither branch")
    if A1 != K.zero:
        r = -A0 / A1
        yr = B[0] + B[1] * r + B[2] * r**2 + B3 * r**3
        return _point(x - r, R.zero + yr, sign)
    return MumfordPoint((K.one,), (), (2 * sign[0], 2 * sign[1]))


def _chart_coords(P, model):
    chart = chart_for(model)
    K = model.domain
    R, _ = poly_ring(K)
    if P.is_zero:
        return R.one, R.zero
    A, B = to_forms(P, model)
    A2 = substitute(A, 2, chart.M, K)
    B2 = substitute(B, 3, chart.M, K)
    if A2[2] == K.zero:
        raise InvalidPoint("divisor meets the chart's points at infinity")
    a = from_coeffs(R, [c / A2[2] for c in A2])
    return a, from_coeffs(R, B2) % a


def _from_chart(a, b, model):
    chart = chart_for(model)
    K = model.domain
    if degree(a) <= 0:
        return zero(model)
    coeffs_a = coeff_list(a) + [K.zero] * (3 - degree(a) - 1)
    coeffs_b = coeff_list(b) + [K.zero] * (4 - len(coeff_list(b)))
    A = substitute(coeffs_a, 2, chart.inverse, K)
    B = substitute(coeffs_b, 3, chart.inverse, K)
    return from_forms(A, B, model)


def _chart_poly(model):
    R, _ = poly_ring(model.domain)
    return from_coeffs(R, chart_for(model).f)


def _compose(a1, b1, a2, b2, F):
    d0, e1, e2 = xgcd(a1, a2)
    d, c1, c2 = xgcd(d0, b1 + b2)
    a = (a1 * a2).exquo(d * d)
    b = (c1 * e1 * a1 * b2 + c1 * e2 * a2 * b1 + c2 * (b1 * b2 + F)).exquo(d) % a
    return a, b


def _reduce(a, b, F):
    while degree(a) > 2:
        a_new = (F - b * b).exquo(a)
        a_new = a_new.quo_ground(a_new.LC)
        b = (-b) % a_new
        a = a_new
    if degree(a) <= 0:
        return a.ring.one, a.ring.zero
    return a, b % a


def _completed(P, model):
    if not model.has_h:
        return P, model
    K = model.domain
    R, _ = poly_ring(K)
    a, b = P.polys(model)
    if P.is_zero:
        return P, model.completed_square()
    b2 = (2 * b + model.H()) % a if degree(a) > 0 else R.zero
    return _point(a, b2, P.inf_weights), model.completed_square()


def _uncompleted(P, model):
    if not model.has_h or P.is_zero:
        return P
    K = model.domain
    R, _ = poly_ring(K)
    a, b = P.polys(model)
    if degree(a) <= 0:
        return P
    return _point(a, ((b - model.H()) * (K.one / 2)) % a, P.inf_weights)


# ==============================
# GROUP LAW
# ==============================
def cantor_add(P, Q, model):
    P1, work = _completed(P, model)
    Q1, _ = _completed(Q, model)
    F = _chart_poly(work)
    a1, b1 = _chart_coords(P1, work)
    a2, b2 = _chart_coords(Q1, work)
    a, b = _reduce(*_compose(a1, b1, a2, b2, F), F)
    return _uncompleted(_from_chart(a, b, work), model)


def negate(P, model):
    if P.is_zero:
        return P
    K = model.domain
    R, _ = poly_ring(K)
    a, b = P.polys(model)
    if degree(a) > 0:
        b = (-b - model.H()) % a
    else:
        b = R.zero
    return _point(a, b, (P.inf_weights[1], P.inf_weights[0]))


def double(P, model):
    return cantor_add(P, P, model)


def scalar_mult(n, P, model):
    if n < 0:
        return scalar_mult(-n, negate(P, model), model)
    result, base = zero(model), P
    while n:
        if n & 1:
            result = cantor_add(result, base, model)
        base = cantor_add(base, base, model)
        n >>= 1
    return result


def order_divides(P, n, model):
    return scalar_mult(n, P, model).is_zero


# ==============================
# KUMMER MAP
# ==============================
def _xi4(a, b, F):
    c = (b * b - F).exquo(a)
    cs = coeff_list(c) + [0] * 5
    a0 = coeff_list(a)[0]
    return cs[0] + cs[2] * a0 + cs[4] * a0 * a0


def mumford_to_kummer(P, model):
    """Kummer coordinates of P (the completed-square model is used when H != 0)."""
    P, model = _completed(P, model)
    K = model.domain
    if P.is_zero:
        return KummerCoords.origin(K)
    A, B = to_forms(P, model)
    A0, A1, A2 = A
    F = model.F()
    R, _ = poly_ring(K)
    if A2 != K.zero:
        a = from_coeffs(R, [A0 / A2, A1 / A2, K.one])
        b = from_coeffs(R, B) % a
        return KummerCoords((A2, -A1, A0, A2 * _xi4(a, b, F)))
    if A0 != K.zero:
        swapped = CurveModel(tuple(reversed(model.f)), None, model.base, model.modulus)
        Rs, _ = poly_ring(K)
        a = from_coeffs(Rs, [A2 / A0, A1 / A0, K.one])
        b = from_coeffs(Rs, tuple(reversed(B))) % a
        xs = (A0, -A1, A2, A0 * _xi4(a, b, swapped.F()))
        return KummerCoords((xs[2], xs[1], xs[0], xs[3]))
    return KummerCoords((K.zero, K.one, K.zero, -2 * B[0] * B[3]))


# ==============================
# LIFTING
# ==============================
def _lift_affine(x, model):
    """Lifts with x1 = 1: a = X^2 - x2 X + x3, b from its trace and norm."""
    K = model.domain
    R, X = poly_ring(K)
    _, sigma, pi, xi4 = x
    a = X * X - sigma * X + pi
    Fbar = model.F() % a
    r = coeff_list(Fbar) + [K.zero] * 2
    f = model.f
    f0 = (2 * f[0] + f[1] * sigma + 2 * f[2] * pi + f[3] * pi * sigma
          + 2 * f[4] * pi**2 + f[5] * pi**2 * sigma + 2 * f[6] * pi**3)
    disc = sigma * sigma - 4 * pi
    n0 = (f0 - disc * xi4) / 2
    trace_F = 2 * r[0] + r[1] * sigma
    t2 = trace_F + 2 * n0
    candidates = []
    t = square_root(t2, K)
    if t is None:
        return []
    if t != K.zero:
        b = (Fbar + n0) * (K.one / t)
        candidates = [b, -b]
    elif disc != K.zero and r[1] == K.zero:
        b1 = square_root(4 * r[0] / disc, K)
        if b1 is not None:
            b = b1 * (2 * X - sigma) * (K.one / 2)
            candidates = [b, -b]
    elif r == [K.zero] * len(r):
        candidates = [R.zero]
    out = []
    for b in candidates:
        b = b % a
        if (b * b - model.F()) % a == 0:
            out.append(_point(a, b))
    return out


def _swap_point(P, model):
    """Image of a point under (X:Z) -> (Z:X), as a point on the reversed model."""
    A, B = to_forms(P, model)
    swapped = CurveModel(tuple(reversed(model.f)), None, model.base, model.modulus)
    return from_forms(tuple(reversed(A)), tuple(reversed(B)), swapped)


def _dedupe(points):
    out = []
    for P in points:
        if P not in out:
            out.append(P)
    return out


def lift_to_jacobian(x, model):
    """All rational points P with k(P) = x projectively (both signs when distinct)."""
    if model.has_h:
        completed = model.completed_square()
        return [_uncompleted(P, model) for P in lift_to_jacobian(x, completed)]
    K = model.domain
    x = KummerCoords(tuple(to_domain(c, K) for c in x))
    if kummer_quartic(model)(x) != K.zero:
        raise NotOnKummer(f"{x} is not on the Kummer surface")
    if x.is_origin():
        return [zero(model)]
    x1, x2, x3, x4 = x
    if x1 != K.zero:
        points = _lift_affine((K.one, x2 / x1, x3 / x1, x4 / x1), model)
    elif x3 != K.zero:
        swapped = CurveModel(tuple(reversed(model.f)), None, model.base, model.modulus)
        found = _lift_affine((K.one, x2 / x3, x1 / x3, x4 / x3), swapped)
        points = [_swap_point(P, swapped) for P in found]
    else:
        points = []
        roots0 = _signed_roots(model.f[0], K)
        roots6 = _signed_roots(model.f[6], K)
        for y0, y6 in product(roots0, roots6):
            if -2 * y0 * y6 * x2 == x4:
                points.append(from_forms((K.zero, K.one, K.zero), (y0, K.zero, K.zero, y6), model))
    points = _dedupe(points)
    return [P for P in points if mumford_to_kummer(P, model).projectively_equal(x)]


def _signed_roots(c, K):
    s = square_root(c, K)
    if s is None:
        return []
    return [s] if s == K.zero else [s, -s]


# ==============================
# SAMPLING
# ==============================
def random_curve_point(rng, size=20):
    """A random integral model y^2 = F through two chosen affine points, and their class.

    The points have consecutive x-coordinates so the linear coefficients stay integral.
    """
    while True:
        f = [rng.randint(-size, size) for _ in range(7)]
        f[6] = f[6] or 1
        x1 = rng.randint(-size, size)
        x2 = x1 + 1
        y1, y2 = rng.randint(-size, size), rng.randint(-size, size)
        r1 = y1 * y1 - sum(f[i] * x1**i for i in range(2, 7))
        r2 = y2 * y2 - sum(f[i] * x2**i for i in range(2, 7))
        f[1] = r2 - r1
        f[0] = r1 - f[1] * x1
        model = CurveModel.from_coefficients(f)
        if discriminant(model) == 0:
            continue
        a = (x1 * x2, -(x1 + x2), 1)
        b = (y1 - (y2 - y1) * x1, y2 - y1)
        return model, make_point(model, a, b)
