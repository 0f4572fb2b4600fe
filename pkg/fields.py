"""Base fields and polynomial helpers shared by the curve, Jacobian and Kummer code.

Three kinds of base field are supported through sympy domains: the rationals,
rational functions in ``t`` over the rationals, and prime fields (test use).
"""
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import isqrt

import flint
import sympy
from sympy import GF, QQ, ZZ
from sympy.polys.rings import ring

T = sympy.Symbol("t")
QT = QQ.frac_field(T)


class Base(str, Enum):
    Q = "Q"
    QT = "Q(t)"
    FP = "F_p"


def domain_for(base, modulus=None):
    if base == Base.Q:
        return QQ
    if base == Base.QT:
        return QT
    if base == Base.FP:
        if not modulus:
            raise ValueError("a prime field needs its modulus")
        return GF(modulus)
    raise ValueError(f"unknown base {base!r}")


@lru_cache(maxsize=None)
def poly_ring(domain, name="x"):
    """Univariate sympy ring over ``domain``; returns (ring, generator)."""
    R, x = ring(name, domain)
    return R, x


@lru_cache(maxsize=None)
def form_ring(domain):
    """Ring of binary forms in X, Z over ``domain``."""
    R, X, Z = ring("X,Z", domain)
    return R, X, Z


# ==============================
# ELEMENT CONVERSION
# ==============================
def parse_rational(text):
    """Exact rational from an int, Fraction or a "num/den" string."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    value = str(text).strip()
    if not value:
        raise ValueError("empty rational")
    return Fraction(value)


def to_domain(value, domain):
    """Convert ints, Fractions, strings or domain elements into ``domain``."""
    if isinstance(value, (str, Fraction)):
        value = parse_rational(value)
    if isinstance(value, Fraction):
        return domain.convert(value.numerator) / domain.convert(value.denominator)
    if isinstance(value, (list, tuple)):
        return qt_from_coeffs(value) if domain == QT else to_domain(value[0], domain)
    return domain.convert(value)


def qt_from_coeffs(coeffs):
    """Element of Q(t) from polynomial coefficients listed from t^0 upwards."""
    expr = sum((sympy.Rational(str(parse_rational(c))) * T**i for i, c in enumerate(coeffs)),
               sympy.Integer(0))
    return QT.from_sympy(expr)


def as_fraction(c):
    """Fraction from a rational domain element (QQ or ZZ)."""
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    num = getattr(c, "numerator", None)
    if num is None:
        return Fraction(int(c))
    return Fraction(int(c.numerator), int(c.denominator))


def coeff_list(p):
    """Coefficients of a univariate ring element, from x^0 upwards."""
    if p == 0:
        return []
    deg = p.degree()
    K = p.ring.domain
    return [p.get((i,), K.zero) for i in range(deg + 1)]


def from_coeffs(R, coeffs):
    x = R.gens[0]
    out = R.zero
    for i, c in enumerate(coeffs):
        if c:
            out += R.domain.convert(c) * x**i
    return out


def degree(p):
    return -1 if p == 0 else p.degree()


def xgcd(a, b):
    """(g, s, t) with g = s*a + t*b and g monic; g = 0 when a = b = 0."""
    if a == 0 and b == 0:
        return a, a.ring.zero, a.ring.zero
    s, t, g = a.gcdex(b)
    return g, s, t


# ==============================
# Q(t) AS FLINT POLYNOMIALS
# ==============================
def qt_parts(c):
    """Numerator and denominator of a Q(t) element as flint ``fmpq_poly``."""
    return _poly_to_flint(c.numer), _poly_to_flint(c.denom)


def _poly_to_flint(p):
    coeffs = [Fraction(0)] * (max((m[0] for m in p.keys()), default=-1) + 1)
    for (i,), v in p.items():
        coeffs[i] = as_fraction(v)
    return flint.fmpq_poly([flint.fmpq(q.numerator, q.denominator) for q in coeffs])


def flint_to_qt(poly):
    coeffs = [Fraction(int(c.p), int(c.q)) for c in poly.coeffs()]
    return qt_from_coeffs(coeffs or [0])


# ==============================
# SQUARES
# ==============================
def _rational_sqrt(q):
    q = as_fraction(q)
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def square_root(c, domain):
    """A square root of ``c`` in ``domain`` or None when ``c`` is not a square."""
    if c == domain.zero:
        return domain.zero
    if domain == QQ or domain == ZZ:
        r = _rational_sqrt(c)
        return None if r is None else to_domain(r, domain)
    if domain == QT:
        num, den = c.numer, c.denom
        prod = num * den
        lc, factors = prod.sqf_list()
        lc_root = _rational_sqrt(lc)
        if lc_root is None or any(k % 2 for _, k in factors):
            return None
        root = to_domain(lc_root, domain)
        for g, k in factors:
            root = root * QT.from_sympy(g.as_expr()) ** (k // 2)
        return root / QT.from_sympy(den.as_expr())
    p = domain.mod
    value = int(c) % p
    if pow(value, (p - 1) // 2, p) != 1:
        return None
    return domain.convert(sympy.sqrt_mod(value, p))


def is_square(c, domain):
    return square_root(c, domain) is not None
