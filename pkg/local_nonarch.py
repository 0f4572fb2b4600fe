"""Local height corrections at non-archimedean places.

mu(x) = sum_n eps(delta^n(x)) / 4^(n+1), with eps(x) = v(delta(x)) - 4 v(x).
Two ways to get it exactly:

* ``mu_fast`` iterates duplication in a truncated local ring for a bounded
  number of steps and snaps the partial sum to the unique fraction with
  denominator at most M in a window of width 1/M^2;
* ``mu_period`` walks the multiples nP by pseudo-addition until it meets the
  subgroup where eps vanishes and averages the pairing shifts.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from curve import CurveModel, discriminant
from errors import InputError, NoConvergence, NonIntegralModel, PrecisionExhausted, ValidationFailure
from fields import QT, T, flint_to_qt
from kummer import KummerCoords, duplicate, evaluate_biquadratic, evaluate_form, solve_star, specialize
from places import LocalPlace, PlaceKind
from settings import get_settings

logger = logging.getLogger(__name__)


class MuMethod(str, Enum):
    FAST_LOOP = "FastLoop"
    PERIOD = "Period"
    EARLY_EXIT = "EarlyExit"


class FiberHint(str, Enum):
    GENERIC = "generic"
    NON_REDUCED = "non_reduced"
    MULTIPLICITY_3 = "multiplicity_3"
    MULTIPLICITY_4 = "multiplicity_4"


@dataclass(frozen=True)
class MuHints:
    """Optional bounds injected by the reduction-graph code."""
    B: int = None
    M: int = None
    fiber: FiberHint = FiberHint.GENERIC
    group_exponent: int = None
    minimal: bool = False


@dataclass
class LocalMuResult:
    mu: Fraction
    eps_trace: list = field(default_factory=list)
    method: MuMethod = MuMethod.FAST_LOOP
    bounds_used: tuple = (0, 0, 0)


# ==============================
# EPS AND BOUNDS
# ==============================
def _check_integral(model, place):
    if not model.is_integral_at(place):
        raise NonIntegralModel(f"model is not integral at {place}")


def eps(x, place, model):
    """v(delta(x)) - 4 v(x)."""
    _check_integral(model, place)
    return duplicate(x, model).valuation(place) - 4 * x.valuation(place)


def denominator_bound(vdelta, hint=FiberHint.GENERIC, group_exponent=None, minimal=False):
    """Smallest applicable bound M for the denominator of mu at a place with v(Delta) = vdelta."""
    bounds = [max(2, vdelta * vdelta // 3)]
    if hint == FiberHint.NON_REDUCED:
        bounds.append(4 if vdelta <= 12 else max(12, vdelta - 15))
    elif hint == FiberHint.MULTIPLICITY_3:
        if vdelta <= 10:
            bounds.append(min(6, vdelta + 1))
        elif vdelta <= 20:
            bounds.append(12)
        else:
            bounds.append((vdelta - 12) ** 2 // 4)
    elif hint == FiberHint.MULTIPLICITY_4:
        if vdelta <= 10:
            bounds.append(3 * vdelta - 10)
        elif minimal:
            bounds.append(4 * vdelta - 20)
        else:
            bounds.append((vdelta - 10) ** 2 // 3)
    if group_exponent:
        bounds.append(2 * group_exponent)
    return max(1, min(b for b in bounds if b > 0))


def loss_bound(model, place):
    """B: the largest possible eps at the place."""
    vdelta = place.valuation(discriminant(model))
    if math.isinf(vdelta):
        raise InputError("the model is singular")
    if model.has_h:
        return vdelta
    return max(0, vdelta - 4 * place.valuation(model.domain.convert(2)))


# ==============================
# TRUNCATED DUPLICATION
# ==============================
def uniformizer(place, domain):
    if place.kind == PlaceKind.PRIME:
        return domain.convert(place.p)
    if place.kind == PlaceKind.POLY:
        return flint_to_qt(place.uniformizer_poly())
    raise InputError("the infinite place has no uniformizer in Q[t]")


def normalized(x, place, domain):
    """x scaled by pi^(-v(x)) so that v(x) = 0."""
    v = x.valuation(place)
    if v == 0:
        return x
    pi = uniformizer(place, domain)
    return x.scaled(pi ** (-v))


def _vector_valuation(ring, values):
    vals = [ring.valuation(c) for c in values if not ring.is_zero(c)]
    if not vals:
        raise PrecisionExhausted("all coordinates vanish at the working precision")
    return min(vals)


class _TruncatedKummer:
    """Duplication and pseudo-addition in a truncated local ring."""

    def __init__(self, model, place, precision):
        self.ring = place.local_ring(precision)
        forms = specialize(model)
        self.delta = [tuple((e, self.ring.embed(c)) for e, c in d) for d in forms.delta]
        self.B = {ij: tuple((b, g, self.ring.embed(c)) for b, g, c in terms)
                  for ij, terms in forms.B.items()}

    def embed(self, x):
        return [self.ring.embed(c) for c in x]

    def duplicate(self, x, ring):
        return [ring.reduce(evaluate_form(d, x)) for d in self.delta]

    def biquadratic(self, x, y, ring):
        out = [[None] * 4 for _ in range(4)]
        for (i, j), terms in self.B.items():
            out[i][j] = out[j][i] = ring.reduce(evaluate_biquadratic(terms, x, y))
        return out


def _snap(mu0, M):
    """The fraction with denominator <= M in [mu0, mu0 + 1/M^2]."""
    upper = mu0 + Fraction(1, M * M)
    for q in range(1, M + 1):
        n = math.ceil(mu0 * q)
        if Fraction(n, q) <= upper:
            return Fraction(n, q)
    raise ValidationFailure(f"no fraction with denominator <= {M} near {mu0}")


def mu_fast(x, place, model, hints=None):
    """mu at a finite place by bounded duplication with truncated arithmetic."""
    if place.kind == PlaceKind.INFINITY:
        return mu_at_infinity(x, model, method="fast", hints=hints)
    _check_integral(model, place)
    hints = hints or MuHints()
    K = model.domain
    x = normalized(KummerCoords(tuple(x)), place, K)
    vdelta = place.valuation(discriminant(model))
    B = hints.B if hints.B is not None else loss_bound(model, place)
    if B == 0:
        return LocalMuResult(Fraction(0), [], MuMethod.EARLY_EXIT, (0, 0, 0))
    M = hints.M or denominator_bound(vdelta, hints.fiber, hints.group_exponent, hints.minimal)
    m = int(math.floor(math.log(B * M * M / 3) / math.log(4))) if B * M * M > 3 else 0
    precision = (m + 1) * B + 1
    logger.debug("mu_fast at %s: B=%d M=%d m=%d precision=%d", place, B, M, m, precision)
    tk = _TruncatedKummer(model, place, precision)
    ring = tk.ring
    y = tk.embed(x)
    mu0 = Fraction(0)
    trace = []
    for n in range(m + 1):
        y = tk.duplicate(y, ring)
        v = _vector_valuation(ring, y)
        trace.append(v)
        if v == 0:
            return LocalMuResult(mu0, trace, MuMethod.EARLY_EXIT, (B, M, m))
        if v > B:
            raise ValidationFailure(f"eps = {v} exceeds its bound {B} at {place}")
        mu0 += Fraction(v, 4 ** (n + 1))
        y = [ring.shift(c, v) for c in y]
        ring = ring.lowered(v)
    return LocalMuResult(_snap(mu0, M), trace, MuMethod.FAST_LOOP, (B, M, m))


# ==============================
# PERIOD ALGORITHM
# ==============================
def _resolving_index(ring, z):
    best = None
    for k, c in enumerate(z):
        if ring.is_zero(c):
            continue
        v = ring.valuation(c)
        if best is None or v < best[0]:
            best = (v, k)
    if best is None:
        raise PrecisionExhausted("z vanishes at the working precision")
    return best[1]


def _period_once(x, place, model, precision, max_terms, B):
    tk = _TruncatedKummer(model, place, precision)
    ring = tk.ring
    xs = tk.embed(x)
    prev = tk.embed((0, 0, 0, 1))
    cur = list(xs)
    trace = []
    for n in range(1, max_terms + 1):
        if _vector_valuation(ring, tk.duplicate(cur, ring)) == 0:
            total = sum(trace)
            return LocalMuResult(Fraction(total, 2 * n), trace, MuMethod.PERIOD, (B, 2 * n, n))
        Bxy = tk.biquadratic(xs, cur, ring)
        k = _resolving_index(ring, prev)
        w = [ring.reduce(c) for c in solve_star(Bxy, prev, k)]
        e = _vector_valuation(ring, w)
        trace.append(e)
        w = [ring.shift(c, e) for c in w]
        ring = ring.lowered(e)
        prev, cur = [ring.reduce(c) for c in cur], w
    raise NoConvergence(f"no multiple of the point reached eps = 0 within {max_terms} steps")


def mu_period(x, place, model, max_terms=2000):
    """mu as (1/2N) sum_{n<N} eps(P, nP) with N the first n where nP has eps = 0."""
    if place.kind == PlaceKind.INFINITY:
        return mu_at_infinity(x, model, method="period")
    _check_integral(model, place)
    cfg = get_settings()
    x = normalized(KummerCoords(tuple(x)), place, model.domain)
    B = max(loss_bound(model, place), 1)
    precision = max(cfg.default_digits, 8 * B)
    ceiling = max(cfg.ceiling_digits, precision)
    while True:
        try:
            return _period_once(x, place, model, precision, max_terms, B)
        except PrecisionExhausted:
            if precision >= ceiling:
                raise NoConvergence(f"period algorithm needs more than {ceiling} digits at {place}")
            precision = min(2 * precision, ceiling)
            logger.debug("mu_period at %s: raising precision to %d", place, precision)


# ==============================
# THE INFINITE PLACE OF Q(t)
# ==============================
def _invert_t(c):
    return QT.from_sympy(QT.to_sympy(QT.convert(c)).subs(T, 1 / T))


def _poly_degree(c):
    c = QT.convert(c)
    if c == 0:
        return -1
    if c.denom.degree() > 0:
        raise NonIntegralModel("coefficients must be polynomials in t")
    return c.numer.degree()


def model_at_infinity(model):
    """(model', k): f'_i(s) = s^(2k) f_i(1/s) with 2k >= max deg f_i."""
    top = max(_poly_degree(c) for c in model.f)
    k = max(0, (top + 1) // 2)
    scale = QT.from_sympy(T ** (2 * k))
    f = tuple(scale * _invert_t(c) for c in model.f)
    return CurveModel(f, None, model.base, model.modulus), k


def mu_at_infinity(x, model, method="fast", hints=None):
    """mu(x) = mu'(tau x) + v(tau x) - v(x) - v(tau) for tau: t -> 1/s, y -> s^k y."""
    if model.domain != QT:
        raise InputError("the infinite place exists over Q(t) only")
    inf = LocalPlace.infinity()
    new_model, k = model_at_infinity(model)
    s_place = LocalPlace.polynomial([0, 1])
    tx = [_invert_t(c) for c in x]
    tx[3] = tx[3] * QT.from_sympy(T ** (2 * k))
    tx = KummerCoords(tuple(tx))
    inner = mu_fast(tx, s_place, new_model, hints) if method == "fast" else mu_period(tx, s_place, new_model)
    shift = tx.valuation(s_place) - KummerCoords(tuple(x)).valuation(inf) - 2 * k
    return LocalMuResult(inner.mu + shift, inner.eps_trace, inner.method, inner.bounds_used)


# ==============================
# LOCAL HEIGHTS
# ==============================
def local_mu(x, place, model, method="fast", hints=None):
    if method == "period":
        return mu_period(x, place, model)
    return mu_fast(x, place, model, hints)


def lambda_hat(x, place, model, method="fast", hints=None):
    """Canonical local height -v(x) - mu(x)."""
    x = KummerCoords(tuple(x))
    return -Fraction(x.valuation(place)) - local_mu(x, place, model, method, hints).mu


def lambda_tilde(x, place, model, method="fast", hints=None):
    vdelta = place.valuation(discriminant(model))
    return lambda_hat(x, place, model, method, hints) + Fraction(vdelta, 10)
