"""Canonical heights over Q and Q(t), the height pairing and height-difference bounds.

The finite part of the height correction over Q is computed without
factoring: the gcds g_n of the duplicated coordinates are refined into a
coprime basis q_i and each mu_i is recovered exactly as a fraction, so the
result is the formal sum sum_i mu_i log q_i.
"""
import logging
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import sympy

from curve import (CurveModel, ReductionType, UNKNOWN_TYPE, discriminant, igusa_invariants,
                   infer_reduction_type, two_adic_model)
from errors import (FactorizationTimeout, InputError, NonIntegralModel, NonIntegralPart,
                    ValidationFailure)
from fields import QT, as_fraction, coeff_list
from jacobian import cantor_add, mumford_to_kummer
from kummer import KummerCoords, duplicate, evaluate_form, specialize
from local_arch import mu_arch, partition_coefficients, phi_iterate_bound, single_step_bound
from local_nonarch import MuHints, local_mu, mu_at_infinity
from places import LocalPlace
from redgraph import beta_bound, beta_from_hint, group_exponent
from settings import get_settings

logger = logging.getLogger(__name__)

MINIMALITY_WARNING = ("minimality_asserted: the model is taken to be minimal with reduced "
                      "special fiber at every bad prime; this is not verified")


# ==============================
# COPRIME BASES
# ==============================
@dataclass(frozen=True)
class CoprimeBasis:
    """g_n = prod_i q_i^exponents[i][n]."""
    q: tuple
    exponents: tuple


def coprime_base(values):
    """Pairwise coprime integers > 1 that multiplicatively generate every value.

    Any two entries sharing a factor g are replaced by a/g, g and b/g until no such
    pair is left.  Quadratic in the number of entries; no integer is factored.
    """
    basis = sorted({int(v) for v in values if v > 1})
    while True:
        pair = next(((a, b) for k, a in enumerate(basis) for b in basis[k + 1:]
                     if math.gcd(a, b) > 1), None)
        if pair is None:
            return basis
        a, b = pair
        g = math.gcd(a, b)
        rest = [v for v in basis if v not in (a, b)]
        basis = sorted(set(rest + [v for v in (a // g, g, b // g) if v > 1]))


def factor_refine(inputs):
    """Pairwise coprime q_i such that every input is a product of their powers."""
    inputs = [int(n) for n in inputs]
    if any(n < 1 for n in inputs):
        raise InputError("factor refinement needs positive integers")
    basis = coprime_base(inputs)
    exponents = []
    for q in basis:
        row = []
        for n in inputs:
            e = 0
            while n % q == 0:
                n //= q
                e += 1
            row.append(e)
        exponents.append(tuple(row))
    for k, n in enumerate(inputs):
        product = math.prod(q ** exponents[i][k] for i, q in enumerate(basis))
        if product != n:
            raise ValidationFailure(f"{n} is not a product of powers of {basis}")
    return CoprimeBasis(q=tuple(basis), exponents=tuple(exponents))


def simplest_between(lo, hi):
    """The fraction with the smallest denominator in [lo, hi] (lo >= 0)."""
    lo, hi = Fraction(lo), Fraction(hi)
    fl = math.floor(lo)
    if fl == lo:
        return Fraction(fl)
    if fl + 1 <= hi:
        return Fraction(fl + 1)
    return fl + 1 / simplest_between(1 / (hi - fl), 1 / (lo - fl))


# ==============================
# INTEGER DUPLICATION
# ==============================
def _require_integral(model):
    if model.has_h:
        raise InputError("the finite-part algorithms need a model with H = 0")
    if any(as_fraction(c).denominator != 1 for c in model.f):
        raise NonIntegralModel("F must have integer coefficients")


@lru_cache(maxsize=32)
def integer_delta(model):
    def to_int(c):
        q = as_fraction(c)
        if q.denominator != 1:
            raise NonIntegralModel("duplication polynomials must have integer coefficients")
        return q.numerator
    return specialize(model).mapped(to_int).delta


def duplicate_ints(x, model, modulus=None):
    values = [evaluate_form(d, x) for d in integer_delta(model)]
    return [v % modulus for v in values] if modulus else values


def primitive_ints(x):
    ints = KummerCoords(tuple(x)).integers() if not all(isinstance(c, int) for c in x) else tuple(x)
    g = math.gcd(*ints)
    if g == 0:
        raise InputError("Kummer coordinates cannot all vanish")
    return tuple(c // g for c in ints)


def reduced_discriminant(model):
    """D = |Delta| / 16 = 2^4 |disc F| for an integral model with H = 0."""
    delta = as_fraction(discriminant(model))
    if delta == 0:
        raise InputError("the model is singular")
    return abs(delta.numerator) // 16


def supported_part(n, g):
    """gcd(n, g^infinity)."""
    d = 1
    while (c := math.gcd(n, g)) > 1:
        n //= c
        d *= c
    return d


# ==============================
# FINITE PART
# ==============================
@dataclass(frozen=True)
class FinitePart:
    terms: tuple = ()
    g: tuple = ()
    bounds: tuple = (0, 0, 0)

    def value(self):
        return mpmath.fsum(mpmath.mpf(mu.numerator) / mu.denominator * mpmath.log(q)
                           for q, mu in self.terms)

    def as_dict(self):
        return {q: mu for q, mu in self.terms}


def finite_part_nofact(x, model):
    """Exact sum_i mu_i log q_i for primitive integral Kummer coordinates x."""
    _require_integral(model)
    x = primitive_ints(x)
    d = duplicate_ints(x, model)
    g0 = math.gcd(*d)
    if g0 == 1:
        return FinitePart(g=(1,))
    D = supported_part(reduced_discriminant(model), g0)
    B = D.bit_length() - 1
    if B <= 1:
        return FinitePart(g=(g0,))
    M = max(2, (B + 4) ** 2 // 3)
    m = 0
    while 3 * 4 ** (m + 1) <= B ** 3 * M * M:
        m += 1
    modulus = D ** (m + 1) * g0
    logger.debug("finite part: g0=%d D=%d B=%d M=%d m=%d", g0, D, B, M, m)
    gs = [g0]
    y = [c // g0 for c in d]
    for _ in range(m):
        y = duplicate_ints(y, model, modulus)
        gn = math.gcd(D, *y)
        y = [c // gn for c in y]
        gs.append(gn)
    basis = factor_refine(gs)
    window = Fraction(1, B * B * M * M)
    terms = []
    for q, row in zip(basis.q, basis.exponents):
        a = sum((Fraction(e, 4 ** (n + 1)) for n, e in enumerate(row)), Fraction(0))
        mu = simplest_between(a, a + window)
        if mu:
            terms.append((q, mu))
    return FinitePart(terms=tuple(terms), g=tuple(gs), bounds=(B, M, m))


def finite_part_simple(x, model, digits=None):
    """sum_n 4^(-n-1) log g_n to ``digits`` decimals, working modulo D^(m+2)."""
    _require_integral(model)
    digits = digits or get_settings().default_digits
    D = reduced_discriminant(model)
    if D <= 1:
        return mpmath.mpf(0)
    bits = math.ceil(digits * math.log2(10))
    m = max(0, math.floor(bits / 2 + math.log2(max(math.log(D) / 3, 1)))) + 1
    modulus = D ** (m + 2)
    y = list(primitive_ints(x))
    with mpmath.workdps(digits + get_settings().guard_digits):
        total = mpmath.mpf(0)
        for n in range(m + 1):
            y = duplicate_ints(y, model, modulus)
            g = math.gcd(D, *y)
            y = [c // g for c in y]
            if g > 1:
                total += mpmath.log(g) / mpmath.mpf(4) ** (n + 1)
        return total


# ==============================
# HEIGHTS OVER Q
# ==============================
@dataclass(frozen=True)
class HeightDecomposition:
    naive_h: object
    finite_part: FinitePart
    arch_part: object
    hhat: object
    kummer: tuple = ()
    digits: int = 30


def naive_height(x):
    ints = primitive_ints(x)
    return mpmath.log(max(abs(c) for c in ints))


def modified_naive_height(x, model):
    """h'(x): the fourth coordinate is scaled by |F|_v at every place."""
    _require_integral(model)
    ints = primitive_ints(x)
    f = [as_fraction(c).numerator for c in model.f]
    norm = max(abs(c) for c in f)
    value = mpmath.log(max(max(abs(c) for c in ints[:3]), mpmath.mpf(abs(ints[3])) / norm))
    for p, e in sympy.factorint(model.content()).items():
        v123 = min((sympy.multiplicity(p, c) for c in ints[:3] if c), default=math.inf)
        v4 = sympy.multiplicity(p, ints[3]) if ints[3] else math.inf
        local = max(-v123, e - v4)
        if local > 0:
            value += local * mpmath.log(p)
    return value


def height_of_kummer(x, model, digits=None):
    """h-hat from Kummer coordinates x on the Kummer surface of ``model`` (H = 0)."""
    digits = digits or get_settings().default_digits
    x = KummerCoords(tuple(x))
    if x.is_origin():
        zero = mpmath.mpf(0)
        return HeightDecomposition(zero, FinitePart(), zero, zero, (0, 0, 0, 1), digits)
    ints = primitive_ints(x)
    with mpmath.workdps(digits + get_settings().guard_digits):
        naive = mpmath.log(max(abs(c) for c in ints))
        finite = finite_part_nofact(ints, model)
        arch = mu_arch(ints, model, digits)
        hhat = naive - finite.value() - arch
    logger.debug("height of %s: h=%s finite=%s arch=%s", ints, mpmath.nstr(naive, 10),
                 finite.terms, mpmath.nstr(arch, 10))
    return HeightDecomposition(naive, finite, arch, hhat, ints, digits)


def canonical_height(P, model, digits=None):
    """h-hat(P) = h(P) - sum mu_i log q_i - mu~(kappa P)."""
    work = model.completed_square()
    return height_of_kummer(mumford_to_kummer(P, model), work, digits)


@dataclass(frozen=True)
class Pairing:
    heights: tuple
    gram: object
    regulator: object


def height_pairing(points, model, digits=None):
    """Gram matrix of <P, Q> = (h(P+Q) - h(P) - h(Q))/2 and its determinant."""
    digits = digits or get_settings().default_digits
    heights = [canonical_height(P, model, digits).hhat for P in points]
    r = len(points)
    with mpmath.workdps(digits + get_settings().guard_digits):
        gram = mpmath.matrix(r, r)
        for i in range(r):
            gram[i, i] = heights[i]
            for j in range(i + 1, r):
                hsum = canonical_height(cantor_add(points[i], points[j], model), model, digits).hhat
                gram[i, j] = gram[j, i] = (hsum - heights[i] - heights[j]) / 2
        regulator = mpmath.det(gram) if r else mpmath.mpf(1)
    return Pairing(tuple(heights), gram, regulator)


# ==============================
# HEIGHTS OVER Q(t)
# ==============================
@dataclass(frozen=True)
class QtHeight:
    naive: int
    places: tuple
    mu_infinity: Fraction
    hhat: Fraction


def _qt_gcd(values):
    g = None
    for v in values:
        if v != 0:
            g = v.numer if g is None else g.gcd(v.numer)
    return g


def _places_of(poly):
    _, factors = poly.factor_list()
    out = []
    for fac, _ in factors:
        if fac.degree() > 0:
            out.append(LocalPlace.polynomial([as_fraction(c) for c in coeff_list(fac)]))
    return sorted(out, key=lambda pl: (pl.degree, pl.poly))


def canonical_height_qt(x, model, method="fast", hints=None):
    """Exact h-hat over Q(t): deg(x) - sum_v mu_v(x) deg v - mu_inf(x)."""
    if model.domain != QT:
        raise InputError("canonical_height_qt needs a curve over Q(t)")
    hints = hints or {}
    x = KummerCoords(tuple(QT.convert(c) for c in x)).primitive()
    if x.is_origin():
        return QtHeight(0, (), Fraction(0), Fraction(0))
    naive = max(c.numer.degree() for c in x if c != 0)
    g = _qt_gcd(duplicate(x, model))
    places = []
    total = Fraction(naive)
    for place in _places_of(g):
        mu = local_mu(x, place, model, method, hints.get(place.label)).mu
        places.append((place.label, place.degree, mu))
        total -= mu * place.degree
    mu_inf = mu_at_infinity(x, model, method, hints.get("inf")).mu
    total -= mu_inf
    logger.info("Q(t) height: naive %d, places %s, infinity %s", naive, places, mu_inf)
    return QtHeight(naive, tuple(places), mu_inf, total)


# ==============================
# FACTORING WITH A BUDGET
# ==============================
def _split(n, deadline):
    power = sympy.perfect_power(n)
    if power:
        return power[0]
    steps, seed = 10 ** 4, 1
    while time.monotonic() < deadline:
        d = sympy.pollard_rho(n, s=seed + 1, retries=1, max_steps=steps)
        if not d:
            d = sympy.pollard_pm1(n, B=steps)
        if d and 1 < d < n:
            return d
        steps, seed = 2 * steps, seed + 1
    return None


def factor_integer(n, trial_bound=None, timeout=None):
    """Prime factorization of n > 0; FactorizationTimeout carries the factored part."""
    cfg = get_settings()
    trial_bound = trial_bound or cfg.trial_bound
    timeout = cfg.factor_timeout if timeout is None else timeout
    primes = {}
    pending = []
    for q, k in sympy.factorint(n, limit=trial_bound).items():
        pending.append((q, k))
    deadline = time.monotonic() + timeout
    unfactored = 1
    while pending:
        q, k = pending.pop()
        if q == 1:
            continue
        if sympy.isprime(q):
            primes[q] = primes.get(q, 0) + k
            continue
        d = _split(q, deadline)
        if d is None:
            unfactored *= q ** k
            continue
        pending.extend([(d, k), (q // d, k)])
    if unfactored > 1:
        exc = FactorizationTimeout(f"{unfactored} was not factored within {timeout} s")
        exc.primes, exc.unfactored = primes, unfactored
        raise exc
    return primes


# ==============================
# HEIGHT-DIFFERENCE BOUND
# ==============================
@dataclass(frozen=True)
class PlaceBound:
    p: int
    content_exponent: int
    reduction_type: str
    vdelta: int
    beta: Fraction
    shift: int
    gamma: Fraction
    provenance: str
    group_exponent: int = None

    @property
    def total(self):
        return self.beta + self.shift


@dataclass
class HeightBoundReport:
    entries: list
    arch_beta: object
    content_term: object
    unfactored: int = 1
    total: object = None
    single_step: object = None
    warnings: list = field(default_factory=list)

    def finite_sum(self):
        return mpmath.fsum(e.total.numerator * mpmath.log(e.p) / e.total.denominator
                           for e in self.entries)

    @property
    def height_lower_bound(self):
        """-beta~ when negative: no nontrivial point has smaller canonical height."""
        return -self.total if self.total < 0 else None


def _scaled_model(model, p, e):
    if e == 0:
        return model
    return CurveModel.from_coefficients([as_fraction(c) / p ** e for c in model.f])


def place_bound(model, p, hint=None, rationality=None, warnings=None):
    """beta_p for the prime p of an integral model y^2 = f."""
    warnings = warnings if warnings is not None else []
    e = sympy.multiplicity(p, model.content())
    work = _scaled_model(model, p, e)
    shift = 0
    if p == 2:
        alt = two_adic_model(work)
        if alt is not None:
            work, shift = alt, 2
    place = LocalPlace.prime(p)
    vdelta = place.valuation(discriminant(work))
    typed_hint = bool(hint) and hint.lstrip("[").startswith("I_{")
    if typed_hint:
        rtype = ReductionType.parse(hint)
    else:
        try:
            rtype = infer_reduction_type(igusa_invariants(work), place)
        except NonIntegralPart:
            rtype = UNKNOWN_TYPE
    exponent = None
    if hint and not typed_hint:
        bound = beta_from_hint(hint, vdelta)
        label = hint
    else:
        label = str(rtype)
        bound = beta_bound(rtype, vdelta, rationality if e % 2 == 0 else None)
        if rtype == UNKNOWN_TYPE:
            msg = f"p={p}: reduction type unknown, using v(Delta)/4 = {bound.beta}"
            logger.warning(msg)
            warnings.append(msg)
        elif rtype.is_nodal:
            exponent = group_exponent(rtype)
    logger.debug("p=%d: e=%d type=%s vdelta=%d beta=%s", p, e, label, vdelta, bound.beta)
    return PlaceBound(p, e, label, vdelta, bound.beta, shift, bound.gamma,
                      bound.provenance.value, exponent)


def height_difference_bound(model, hints=None, rationality=None, digits=None, iterations=None):
    """beta~ with h'(P) <= h-hat(P) + beta~ for all P in J(Q)."""
    _require_integral(model)
    hints = {int(k): v for k, v in (hints or {}).items()}
    rationality = rationality or {}
    warnings = [MINIMALITY_WARNING]
    g = model.content()
    disc_f = abs(as_fraction(discriminant(model)).numerator) // 256
    try:
        primes = factor_integer(2 * disc_f)
        unfactored = 1
    except FactorizationTimeout as exc:
        primes, unfactored = exc.primes, exc.unfactored
        msg = f"factorization fallback: {unfactored} bounded by v(Delta)/4"
        logger.warning(msg)
        warnings.append(msg)
    entries = [place_bound(model, p, hints.get(p), rationality.get(p), warnings)
               for p in sorted(set(primes) | {2})]
    coeffs = partition_coefficients(model, scaled=True, digits=digits)
    arch = phi_iterate_bound(coeffs, iterations)
    with mpmath.workdps(coeffs.digits):
        content_term = mpmath.log(g)
        report = HeightBoundReport(entries=entries, arch_beta=arch.value, content_term=content_term,
                                   unfactored=unfactored, single_step=single_step_bound(coeffs),
                                   warnings=warnings)
        report.total = (arch.value + report.finite_sum() + content_term
                        + mpmath.log(unfactored) / 4)
    logger.info("height difference bound: arch %s, finite %s, total %s",
                mpmath.nstr(arch.value, 8), mpmath.nstr(report.finite_sum(), 8),
                mpmath.nstr(report.total, 8))
    return report


def default_mu_hints(model, place):
    """MuHints from the inferred reduction type at a prime (group exponent when nodal)."""
    try:
        rtype = infer_reduction_type(igusa_invariants(model), place)
    except NonIntegralPart:
        return MuHints()
    if rtype.is_nodal:
        return MuHints(group_exponent=group_exponent(rtype))
    return MuHints()
