"""Places of Q and Q(t), valuations, and truncated local rings.

A ``LocalPlace`` is a prime p, a monic irreducible polynomial in t, or the
infinite place of Q(t).  ``PadicRing`` and ``PolyadicRing`` carry elements of
the valuation ring modulo a power of the uniformizer and are what the
duplication loops run in.
"""
import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

import flint
import sympy

from errors import InputError, NonIntegralModel, PrecisionExhausted
from fields import QT, T, as_fraction, parse_rational, qt_parts

logger = logging.getLogger(__name__)


class PlaceKind(str, Enum):
    PRIME = "prime"
    POLY = "poly"
    INFINITY = "inf"


def _fmpq_poly(coeffs):
    return flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in coeffs])


def poly_multiplicity(poly, factor):
    """Multiplicity of ``factor`` in a nonzero ``fmpq_poly``."""
    if poly == 0:
        return math.inf
    count = 0
    while True:
        q, r = divmod(poly, factor)
        if r != 0:
            return count
        poly = q
        count += 1


@dataclass(frozen=True)
class LocalPlace:
    kind: PlaceKind
    p: int = 0
    poly: tuple = ()

    @classmethod
    def prime(cls, p):
        p = int(p)
        if p < 2 or not sympy.isprime(p):
            raise InputError(f"{p} is not a prime")
        return cls(PlaceKind.PRIME, p=p)

    @classmethod
    def polynomial(cls, coeffs):
        """Finite place of Q(t) given by a polynomial, coefficients from t^0 upwards."""
        coeffs = [parse_rational(c) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if len(coeffs) < 2:
            raise InputError("a place of Q(t) needs a polynomial of positive degree")
        lead = coeffs[-1]
        coeffs = tuple(c / lead for c in coeffs)
        if not sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)],
                          T).is_irreducible:
            raise InputError("place polynomial is reducible over Q")
        return cls(PlaceKind.POLY, poly=coeffs)

    @classmethod
    def infinity(cls):
        return cls(PlaceKind.INFINITY)

    @classmethod
    def parse(cls, text):
        """Parse "5", "t-1", "t^2+1", "t" or "inf"."""
        text = str(text).strip().replace(" ", "")
        if text in ("inf", "oo", "infinity"):
            return cls.infinity()
        if re.fullmatch(r"\d+", text):
            return cls.prime(int(text))
        try:
            expr = sympy.sympify(text.replace("^", "**"), locals={"t": T})
            poly = sympy.Poly(expr, T)
        except (sympy.SympifyError, sympy.PolynomialError) as exc:
            raise InputError(f"cannot parse place {text!r}") from exc
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
        return cls.polynomial(coeffs)

    # ==============================
    # PROPERTIES
    # ==============================
    @property
    def degree(self):
        return len(self.poly) - 1 if self.kind == PlaceKind.POLY else 1

    @property
    def residue_size(self):
        if self.kind == PlaceKind.PRIME:
            return self.p
        return f"Q[t]/({self.label})" if self.kind == PlaceKind.POLY else "Q"

    @property
    def residue_characteristic(self):
        return self.p if self.kind == PlaceKind.PRIME else 0

    @property
    def label(self):
        if self.kind == PlaceKind.PRIME:
            return str(self.p)
        if self.kind == PlaceKind.INFINITY:
            return "inf"
        expr = sum(sympy.Rational(c.numerator, c.denominator) * T**i for i, c in enumerate(self.poly))
        return str(expr).replace("**", "^").replace(" ", "")

    def uniformizer_poly(self):
        return _fmpq_poly(self.poly)

    def __str__(self):
        return self.label

    # ==============================
    # VALUATION
    # ==============================
    def valuation(self, c):
        """Normalized valuation of a base-field element; math.inf for zero."""
        if c == 0:
            return math.inf
        if self.kind == PlaceKind.PRIME:
            q = as_fraction(c)
            return (sympy.multiplicity(self.p, q.numerator)
                    - sympy.multiplicity(self.p, q.denominator))
        if not hasattr(c, "numer"):
            return 0
        num, den = qt_parts(c)
        if self.kind == PlaceKind.INFINITY:
            return den.degree() - num.degree()
        P = self.uniformizer_poly()
        return poly_multiplicity(num, P) - poly_multiplicity(den, P)

    def valuation_of_tuple(self, values):
        return min(self.valuation(c) for c in values)

    def log_norm(self):
        """log of the residue field size, used for weighting local heights over Q."""
        if self.kind != PlaceKind.PRIME:
            raise InputError("only places of Q have a numeric log weight")
        return math.log(self.p)

    def local_ring(self, precision):
        if self.kind == PlaceKind.PRIME:
            return PadicRing(self.p, precision)
        if self.kind == PlaceKind.POLY:
            return PolyadicRing(self.uniformizer_poly(), precision)
        raise InputError("the infinite place is handled through a change of variable")


# ==============================
# TRUNCATED LOCAL RINGS
# ==============================
class PadicRing:
    """Z_p modulo p^precision; elements are Python ints in [0, p^precision)."""

    def __init__(self, p, precision):
        self.p = p
        self.precision = int(precision)
        self.modulus = p ** self.precision

    def embed(self, c):
        q = as_fraction(c)
        if q.denominator % self.p == 0:
            raise NonIntegralModel(f"{q} is not integral at {self.p}")
        return q.numerator * pow(q.denominator, -1, self.modulus) % self.modulus

    def reduce(self, a):
        return a % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def is_zero(self, a):
        return a % self.modulus == 0

    def valuation(self, a):
        """Valuation of ``a``; raises PrecisionExhausted when a vanishes to full precision."""
        a %= self.modulus
        if a == 0:
            raise PrecisionExhausted(f"element vanishes modulo {self.p}^{self.precision}")
        return sympy.multiplicity(self.p, a)

    def shift(self, a, k):
        """Divide by the k-th power of the uniformizer (exact)."""
        return (a % self.modulus) // self.p ** k

    def lowered(self, k):
        return PadicRing(self.p, self.precision - k)


class PolyadicRing:
    """Q[t] localized at an irreducible P, modulo P^precision; elements are fmpq_poly."""

    def __init__(self, uniformizer, precision):
        self.P = uniformizer
        self.precision = int(precision)
        self.modulus = uniformizer ** self.precision

    def embed(self, c):
        if isinstance(c, flint.fmpq_poly):
            return c % self.modulus
        if not hasattr(c, "numer"):
            q = as_fraction(c)
            return flint.fmpq_poly([flint.fmpq(q.numerator, q.denominator)])
        num, den = qt_parts(c)
        if poly_multiplicity(den, self.P) > 0:
            raise NonIntegralModel("element has a pole at the place")
        return num * _inverse_mod(den, self.modulus) % self.modulus

    def reduce(self, a):
        return a % self.modulus

    def mul(self, a, b):
        return a * b % self.modulus

    def is_zero(self, a):
        return a % self.modulus == 0

    def valuation(self, a):
        a = a % self.modulus
        if a == 0:
            raise PrecisionExhausted("element vanishes to full precision")
        return poly_multiplicity(a, self.P)

    def shift(self, a, k):
        return (a % self.modulus) // self.P ** k

    def lowered(self, k):
        return PolyadicRing(self.P, self.precision - k)


def _inverse_mod(a, m):
    g, s, _ = (a % m).xgcd(m)
    if g.degree() != 0:
        raise NonIntegralModel("element is not a unit at the place")
    return s % m

