"""Genus-2 curve models y^2 + H y = F, discriminants and Igusa invariants.

The reduction-type inference follows the valuation rules for semistable
models: the caller asserts that the model is minimal with reduced special
fiber, nothing here verifies it.
"""
import logging
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial

import sympy

from errors import InputError, NonIntegralPart
from fields import Base, domain_for, form_ring, poly_ring, to_domain, as_fraction

logger = logging.getLogger(__name__)


# ==============================
# MODEL
# ==============================
@dataclass(frozen=True)
class CurveModel:
    """y^2 + H(X,Z) y = F(X,Z) with F = f0 Z^6 + f1 X Z^5 + ... + f6 X^6."""
    f: tuple
    h: tuple = None
    base: Base = Base.Q
    modulus: int = 0

    @classmethod
    def from_coefficients(cls, f, h=None, base=Base.Q, modulus=0):
        domain = domain_for(base, modulus)
        f = tuple(to_domain(c, domain) for c in f)
        if len(f) > 7:
            raise ValueError("F has degree at most 6")
        f = f + (domain.zero,) * (7 - len(f))
        if h is not None:
            h = tuple(to_domain(c, domain) for c in h)
            h = h + (domain.zero,) * (4 - len(h))
            if all(c == domain.zero for c in h):
                h = None
        return cls(f, h, base, modulus)

    @property
    def domain(self):
        return domain_for(self.base, self.modulus)

    @property
    def has_h(self):
        return self.h is not None

    def F(self):
        R, x = poly_ring(self.domain)
        return sum((c * x**i for i, c in enumerate(self.f)), R.zero)

    def H(self):
        R, x = poly_ring(self.domain)
        if self.h is None:
            return R.zero
        return sum((c * x**i for i, c in enumerate(self.h)), R.zero)

    def completed_square(self):
        """The H = 0 model (2y + H)^2 = 4F + H^2 of the same curve."""
        if self.h is None:
            return self
        return CurveModel(sextic_of(self), None, self.base, self.modulus)

    def is_integral_at(self, place):
        coeffs = self.f + (self.h or ())
        return all(place.valuation(c) >= 0 for c in coeffs)

    def sup_norm(self):
        """max |f_i| over Q."""
        return max(abs(as_fraction(c)) for c in self.f)

    def content(self):
        """Positive gcd of the integer coefficients of F."""
        g = 0
        for c in self.f:
            q = as_fraction(c)
            if q.denominator != 1:
                raise ValueError("content is defined for integral models")
            g = math.gcd(g, q.numerator)
        return g

    def __str__(self):
        terms = ", ".join(str(c) for c in self.f)
        return f"y^2 = F({terms})" + ("" if self.h is None else f" - H({', '.join(map(str, self.h))}) y")


def sextic_of(model):
    """Coefficients of 4F + H^2."""
    K = model.domain
    g = [4 * c for c in model.f]
    if model.h is not None:
        for i, hi in enumerate(model.h):
            for j, hj in enumerate(model.h):
                g[i + j] += hi * hj
    return tuple(K.convert(c) for c in g)


# ==============================
# DISCRIMINANT
# ==============================
def binary_discriminant(g, K):
    """Discriminant of the binary sextic with coefficients g0..g6."""
    R, x = poly_ring(K)
    if g[6] != K.zero:
        p = sum((c * x**i for i, c in enumerate(g)), R.zero)
        return -p.resultant(p.diff(x)) / g[6]
    if g[5] == K.zero:
        return K.zero
    p = sum((c * x**i for i, c in enumerate(g[:6])), R.zero)
    disc5 = p.resultant(p.diff(x)) / g[5]
    return g[5] ** 2 * disc5


def discriminant(model):
    """Delta(F, H) = 2^-12 disc(4F + H^2)."""
    K = model.domain
    return binary_discriminant(sextic_of(model), K) / K.convert(4096)


# ==============================
# IGUSA INVARIANTS
# ==============================
@dataclass(frozen=True)
class IgusaData:
    J2: object
    J4: object
    J6: object
    J8: object
    J10: object
    I4: object
    I12: object

    def as_dict(self):
        return {k: getattr(self, k) for k in ("J2", "J4", "J6", "J8", "J10", "I4", "I12")}


def _transvectant(f, g, k, m, n):
    R = f.ring
    X, Z = R.gens
    K = R.domain
    total = R.zero
    for i in range(k + 1):
        df = f
        for _ in range(k - i):
            df = df.diff(X)
        for _ in range(i):
            df = df.diff(Z)
        dg = g
        for _ in range(i):
            dg = dg.diff(X)
        for _ in range(k - i):
            dg = dg.diff(Z)
        total += (-1) ** i * comb(k, i) * df * dg
    scale = K.convert(factorial(m - k) * factorial(n - k)) / K.convert(factorial(m) * factorial(n))
    return total * scale


def _constant(p):
    return p.get((0, 0), p.ring.domain.zero)


def igusa_from_sextic(g, K):
    R, X, Z = form_ring(K)
    f = sum((c * X**i * Z**(6 - i) for i, c in enumerate(g)), R.zero)
    i4 = _transvectant(f, f, 4, 6, 6)
    delta = _transvectant(i4, i4, 2, 4, 4)
    A = _constant(_transvectant(f, f, 6, 6, 6))
    B = _constant(_transvectant(i4, i4, 4, 4, 4))
    C = _constant(_transvectant(i4, delta, 4, 4, 4))
    I2 = -120 * A
    I4c = -720 * A**2 + 6750 * B
    I6 = 8640 * A**3 - 108000 * A * B + 202500 * C
    J2 = I2 / K.convert(8)
    J4 = (4 * J2**2 - I4c) / K.convert(96)
    J6 = (8 * J2**3 - 160 * J2 * J4 - I6) / K.convert(576)
    J8 = (J2 * J6 - J4**2) / K.convert(4)
    J10 = binary_discriminant(g, K) / K.convert(4096)
    I4 = J2**2 - 24 * J4
    I12 = -8 * J4**3 + 9 * J2 * J4 * J6 - 27 * J6**2 - J2**2 * J8
    return IgusaData(J2, J4, J6, J8, J10, I4, I12)


def igusa_invariants(model):
    """J_{2i}(4F + H^2) together with Liu's I4 and I12."""
    return igusa_from_sextic(sextic_of(model), model.domain)


def two_adic_model(model):
    """At p = 2, a model (F2, H) with 4 F2 + H^2 = f when f = h^2 (mod 4) for a 0/1 cubic h.

    Returns None when no such h exists.
    """
    if model.base != Base.Q or model.h is not None:
        return None
    f = [as_fraction(c) for c in model.f]
    if any(c.denominator != 1 for c in f):
        return None
    f = [c.numerator for c in f]
    for bits in product((0, 1), repeat=4):
        if not any(bits):
            continue
        sq = [0] * 7
        for i, hi in enumerate(bits):
            for j, hj in enumerate(bits):
                sq[i + j] += hi * hj
        if all((f[k] - sq[k]) % 4 == 0 for k in range(7)):
            F2 = [(f[k] - sq[k]) // 4 for k in range(7)]
            return CurveModel.from_coefficients(F2, list(bits), Base.Q)
    return None


# ==============================
# SPECIAL FIBER
# ==============================
class SingularityClass(str, Enum):
    SMOOTH = "Smooth"
    ONE_NODE = "OneNode"
    TWO_NODES = "TwoNodes"
    THREE_NODES = "ThreeNodes"
    CUSP = "Cusp"
    DEEP_DEGENERATE = "DeepDegenerate"


def _vanishes(c, place):
    if place is None:
        return c == 0
    return place.valuation(c) > 0


def classify_special_fiber(inv, place=None):
    """Singularity class of the reduction of the curve at ``place``.

    With ``place=None`` the invariants are tested for exact vanishing, which
    classifies the curve they were computed from.
    """
    z = {k: _vanishes(v, place) for k, v in inv.as_dict().items()}
    if not z["J10"]:
        return SingularityClass.SMOOTH
    if not z["I12"]:
        return SingularityClass.ONE_NODE
    if not z["I4"]:
        if z["J4"] and z["J6"]:
            return SingularityClass.THREE_NODES
        return SingularityClass.TWO_NODES
    if not all(z[k] for k in ("J2", "J4", "J6", "J8")):
        return SingularityClass.CUSP
    return SingularityClass.DEEP_DEGENERATE


class ReductionTag(str, Enum):
    I_M00 = "I_m00"
    I_M1M2 = "I_m1m2"
    I_M1M2M3 = "I_m1m2m3"
    I0_I0_L = "I0_I0_l"
    IM1_I0_L = "Im1_I0_l"
    IM1_IM2_L = "Im1_Im2_l"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ReductionType:
    tag: ReductionTag
    parts: tuple = ()

    @property
    def is_nodal(self):
        return self.tag in (ReductionTag.I_M00, ReductionTag.I_M1M2, ReductionTag.I_M1M2M3)

    @property
    def is_chain(self):
        return self.tag in (ReductionTag.I0_I0_L, ReductionTag.IM1_I0_L, ReductionTag.IM1_IM2_L)

    def chain_parts(self):
        """(m1, m2, l) for the three cuspidal chain types."""
        if self.tag == ReductionTag.I0_I0_L:
            return 0, 0, self.parts[0]
        if self.tag == ReductionTag.IM1_I0_L:
            return self.parts[0], 0, self.parts[1]
        return self.parts

    def __str__(self):
        if self.tag == ReductionTag.UNKNOWN:
            return "Unknown"
        if self.is_nodal:
            nodes = list(self.parts) + [0] * (3 - len(self.parts))
            return "[I_{%s}]" % "-".join(str(m) for m in nodes)
        m1, m2, l = self.chain_parts()
        return "[I_{%d}-I_{%d}-%d]" % (m1, m2, l)

    @classmethod
    def parse(cls, text):
        """Inverse of ``__str__`` for nodal and chain types, e.g. "[I_{4-3-2}]" or "[I_{3}-I_{0}-1]"."""
        body = text.strip().strip("[]").replace(" ", "")
        chain = re.fullmatch(r"I_\{?(\d+)\}?-I_\{?(\d+)\}?-(\d+)", body)
        if chain:
            return make_chain_type(*(int(g) for g in chain.groups()))
        nodal = re.fullmatch(r"I_\{(\d+)-(\d+)-(\d+)\}", body)
        if not nodal:
            raise InputError(f"cannot parse reduction type {text!r}")
        nodes = sorted((int(g) for g in nodal.groups()), reverse=True)
        nonzero = tuple(m for m in nodes if m)
        if len(nonzero) == 3:
            return cls(ReductionTag.I_M1M2M3, nonzero)
        if len(nonzero) == 2:
            return cls(ReductionTag.I_M1M2, nonzero)
        return cls(ReductionTag.I_M00, (nodes[0],))


UNKNOWN_TYPE = ReductionType(ReductionTag.UNKNOWN)


def make_chain_type(m1, m2, l):
    m1, m2 = sorted((m1, m2))
    if m2 == 0:
        return ReductionType(ReductionTag.I0_I0_L, (l,))
    if m1 == 0:
        return ReductionType(ReductionTag.IM1_I0_L, (m2, l))
    return ReductionType(ReductionTag.IM1_IM2_L, (m1, m2, l))


def _integral(value, what):
    value = Fraction(value)
    if value.denominator != 1:
        raise NonIntegralPart(f"{what} = {value} is not an integer")
    return int(value)


def infer_reduction_type(inv, place):
    """Semistable reduction type from valuations of the Igusa invariants at ``place``."""
    v = {k: place.valuation(c) for k, c in inv.as_dict().items()}
    cls = classify_special_fiber(inv, place)
    logger.debug("place %s: class %s, valuations %s", place, cls.value, v)
    if math.isinf(v["J10"]):
        return UNKNOWN_TYPE
    vJ10, vI12, vI4, vJ4 = v["J10"], v["I12"], v["I4"], v["J4"]

    if cls == SingularityClass.SMOOTH:
        return ReductionType(ReductionTag.I_M00, (0,))
    if cls == SingularityClass.ONE_NODE:
        return ReductionType(ReductionTag.I_M00, (vJ10,))
    if cls == SingularityClass.TWO_NODES:
        m1 = _integral(min(Fraction(vI12) if not math.isinf(vI12) else Fraction(vJ10),
                           Fraction(vJ10, 2)), "m1")
        m2 = vJ10 - m1
        if m1 <= 0 or m2 < m1:
            return UNKNOWN_TYPE
        return ReductionType(ReductionTag.I_M1M2, (m2, m1))
    if cls == SingularityClass.THREE_NODES:
        candidates = [Fraction(vJ10, 3)]
        if not math.isinf(vJ4):
            candidates.append(Fraction(vJ4))
        if not math.isinf(vI12):
            candidates.append(Fraction(vI12, 2))
        m1 = _integral(min(candidates), "m1")
        second = [Fraction(vJ10 - m1, 2)]
        if not math.isinf(vI12):
            second.append(Fraction(vI12 - m1))
        m2 = _integral(min(second), "m2")
        m3 = vJ10 - m1 - m2
        if not 0 < m1 <= m2 <= m3:
            return UNKNOWN_TYPE
        return ReductionType(ReductionTag.I_M1M2M3, (m3, m2, m1))
    if cls == SingularityClass.CUSP:
        if math.isinf(vI12):
            return UNKNOWN_TYPE
        if vJ10 == vI12:
            return ReductionType(ReductionTag.I0_I0_L, (_integral(Fraction(vJ10, 12), "l"),))
        if not math.isinf(vI4) and vI12 > 3 * vI4:
            l = _integral(Fraction(vI4, 4), "l")
            m1 = _integral(min(Fraction(vI12 - 3 * vI4), Fraction(vJ10 - 3 * vI4, 2)), "m1")
            m2 = vJ10 - 3 * vI4 - m1
            if l <= 0 or not 0 < m1 <= m2:
                return UNKNOWN_TYPE
            return ReductionType(ReductionTag.IM1_IM2_L, (m1, m2, l))
        l = _integral(Fraction(vI12, 12), "l")
        m1 = vJ10 - vI12
        if m1 <= 0:
            return UNKNOWN_TYPE
        return ReductionType(ReductionTag.IM1_I0_L, (m1, l))
    return UNKNOWN_TYPE


@lru_cache(maxsize=64)
def bad_primes(model):
    """Primes dividing the discriminant of an integral model over Q (factors it)."""
    delta = as_fraction(discriminant(model))
    if delta == 0:
        return ()
    return tuple(sorted(sympy.factorint(abs(delta.numerator)).keys()))

