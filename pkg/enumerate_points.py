"""Search for rational points on the Jacobian by naive height.

Every primitive triple (x1, x2, x3) with max |x_i| <= N is tried: the Kummer
quartic is quadratic in x4, and each rational root is lifted to J(Q).  The
sieve drops triples whose x4-discriminant is a non-square modulo a small
prime, which never happens for a triple with a rational x4.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product

import mpmath

from errors import InputError
from fields import as_fraction
from global_height import canonical_height, height_difference_bound, modified_naive_height
from jacobian import lift_to_jacobian, zero
from kummer import KummerCoords, evaluate_form, kummer_quartic
from settings import get_settings

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchConfig:
    bound: int
    sieve_primes: tuple = ()
    jobs: int = 1

    def __post_init__(self):
        if self.bound < 1:
            raise InputError("the naive-height bound N must be at least 1")


@dataclass
class FoundPoint:
    kummer: tuple
    lifts: list
    hprime: object = None
    hhat: object = None


@dataclass
class SearchResult:
    points: list
    triples_tried: int = 0
    triples_sieved: int = 0
    notes: list = field(default_factory=list)


def _integer_parts(model):
    """K2, K1, K0 as integer forms in (x1, x2, x3)."""
    parts = []
    for part in kummer_quartic(model).parts:
        terms = []
        for e, c in part:
            q = as_fraction(c)
            if q.denominator != 1:
                raise InputError("the Kummer quartic needs an integral model")
            terms.append((e, q.numerator))
        parts.append(tuple(terms))
    return tuple(parts)


def _parts_at(parts, x123):
    x = tuple(x123) + (1,)
    return tuple(evaluate_form(part, x) for part in parts)


@lru_cache(maxsize=64)
def sieve_table(model, p):
    """Residues (x1, x2, x3) mod p for which K2 x4^2 + K1 x4 + K0 can have a rational root."""
    parts = _integer_parts(model)
    squares = {(k * k) % p for k in range(p)}
    ok = set()
    for r in product(range(p), repeat=3):
        K2, K1, K0 = (v % p for v in _parts_at(parts, r))
        if K2 == 0 or (K1 * K1 - 4 * K2 * K0) % p in squares:
            ok.add(r)
    return frozenset(ok)


def rational_x4(parts, x123):
    """Rational roots x4 of the Kummer quartic above (x1 : x2 : x3)."""
    K2, K1, K0 = _parts_at(parts, x123)
    if K2 == 0:
        if K1 != 0:
            return [Fraction(-K0, K1)]
        if K0 == 0:
            # the whole line through (x1 : x2 : x3 : 0) and the node lies on K
            logger.warning("Kummer quartic vanishes identically above %s; triple skipped", tuple(x123))
        return []
    disc = K1 * K1 - 4 * K2 * K0
    if disc < 0:
        return []
    root = math.isqrt(disc)
    if root * root != disc:
        return []
    return sorted({Fraction(-K1 + root, 2 * K2), Fraction(-K1 - root, 2 * K2)})


def primitive_triples(N, x1):
    """Primitive (x1, x2, x3) with the given x1, |x_i| <= N and first nonzero entry positive."""
    for x2 in range(-N, N + 1):
        if x1 == 0 and x2 < 0:
            continue
        for x3 in range(-N, N + 1):
            if x1 == 0 and x2 == 0 and x3 <= 0:
                continue
            if math.gcd(x1, x2, x3) == 1:
                yield x1, x2, x3


def _search_stratum(model, N, x1, primes):
    parts = _integer_parts(model)
    tables = [(p, sieve_table(model, p)) for p in primes]
    found, tried, sieved = [], 0, 0
    for triple in primitive_triples(N, x1):
        tried += 1
        if any(tuple(c % p for c in triple) not in table for p, table in tables):
            sieved += 1
            continue
        for x4 in rational_x4(parts, triple):
            den = x4.denominator
            x = KummerCoords.of((triple[0] * den, triple[1] * den, triple[2] * den, x4.numerator))
            lifts = lift_to_jacobian(x, model)
            if lifts:
                found.append(FoundPoint(kummer=primitive_key(x), lifts=lifts))
    return found, tried, sieved


def primitive_key(x):
    return tuple(int(c) for c in KummerCoords(tuple(x)).integers())


def enumerate_bounded(model, cfg):
    """All P != O in J(Q) with h_std((x1 : x2 : x3)) <= log N."""
    if model.has_h:
        raise InputError("enumeration needs a model with H = 0")
    primes = tuple(p for p in cfg.sieve_primes if p > 2)
    strata = range(0, cfg.bound + 1)
    result = SearchResult(points=[])
    if cfg.jobs > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            chunks = list(pool.map(_search_stratum, *zip(*[(model, cfg.bound, x1, primes)
                                                           for x1 in strata])))
    else:
        chunks = [_search_stratum(model, cfg.bound, x1, primes) for x1 in strata]
    for found, tried, sieved in chunks:
        result.points.extend(found)
        result.triples_tried += tried
        result.triples_sieved += sieved
    result.points.sort(key=lambda fp: fp.kummer)
    for fp in result.points:
        fp.hprime = modified_naive_height(fp.kummer, model)
    logger.info("searched %d triples (%d sieved), found %d Kummer points",
                result.triples_tried, result.triples_sieved, len(result.points))
    return result


def origin_point(model):
    return FoundPoint(kummer=(0, 0, 0, 1), lifts=[zero(model)], hprime=mpmath.mpf(0), hhat=mpmath.mpf(0))


def points_below_canonical(model, bound, digits=None, hints=None, sieve_primes=None, jobs=1):
    """Points with h-hat <= bound, O included, via the height-difference bound and a naive search."""
    digits = digits or get_settings().default_digits
    report = height_difference_bound(model, hints=hints, digits=digits)
    with mpmath.workdps(digits):
        N = int(mpmath.floor(mpmath.exp(bound + report.total)))
        tolerance = mpmath.mpf(10) ** (-(digits // 2))
        keep_origin = bound + tolerance >= 0
    result = SearchResult(points=[origin_point(model)] if keep_origin else [])
    if report.height_lower_bound is not None:
        result.notes.append(f"no nontrivial point has canonical height below "
                            f"{mpmath.nstr(report.height_lower_bound, 8)}")
    if N < 1:
        logger.info("N = %d: no nontrivial point can have h-hat <= %s", N, bound)
        return result, report
    primes = tuple(sieve_primes if sieve_primes is not None else get_settings().sieve_primes)
    search = enumerate_bounded(model, SearchConfig(N, primes, jobs))
    for fp in search.points:
        fp.hhat = canonical_height(fp.lifts[0], model, digits).hhat
        if fp.hhat <= bound + tolerance:
            result.points.append(fp)
    result.triples_tried, result.triples_sieved = search.triples_tried, search.triples_sieved
    return result, report
