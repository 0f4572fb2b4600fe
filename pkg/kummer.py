"""Kummer surface arithmetic for y^2 = F(x).

Forms come from ``kummer_forms.derive_forms`` and are specialized to a model
once (``specialize``); evaluation uses plain ring operators so the same code
serves exact base-field elements, Python ints modulo p^n and polynomials in t.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from sympy import QQ

from curve import CurveModel
from errors import AmbiguousDivision, InputError, UnsupportedTransformation
from fields import QT, as_fraction, to_domain
from kummer_forms import PAIRS, derive_forms

logger = logging.getLogger(__name__)

ORIGIN = (0, 0, 0, 1)


# ==============================
# COORDINATES
# ==============================
@dataclass(frozen=True)
class KummerCoords:
    x: tuple

    @classmethod
    def of(cls, values, domain=QQ):
        values = tuple(to_domain(v, domain) for v in values)
        if len(values) != 4:
            raise InputError("Kummer coordinates have four entries")
        if all(v == 0 for v in values):
            raise InputError("Kummer coordinates cannot all vanish")
        return cls(values)

    @classmethod
    def origin(cls, domain=QQ):
        return cls.of(ORIGIN, domain)

    def __iter__(self):
        return iter(self.x)

    def __getitem__(self, i):
        return self.x[i]

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.x) + ")"

    def is_origin(self):
        return self.x[0] == 0 and self.x[1] == 0 and self.x[2] == 0

    def scaled(self, c):
        return KummerCoords(tuple(c * v for v in self.x))

    def valuation(self, place):
        return min(place.valuation(v) for v in self.x)

    def projectively_equal(self, other):
        return all(self.x[i] * other.x[j] == self.x[j] * other.x[i]
                   for i in range(4) for j in range(i + 1, 4))

    def primitive(self):
        """Representative with coprime integral entries (polynomials over Q(t))."""
        if hasattr(self.x[0], "numer") or any(hasattr(v, "numer") for v in self.x):
            return self._primitive_qt()
        fracs = [as_fraction(v) for v in self.x]
        lcm = math.lcm(*(q.denominator for q in fracs))
        ints = [int(q * lcm) for q in fracs]
        g = math.gcd(*ints)
        lead = next(v for v in ints if v)
        sign = -1 if lead < 0 else 1
        return KummerCoords(tuple(QQ(sign * v // g) for v in ints))

    def _primitive_qt(self):
        vals = [QT.convert(v) for v in self.x]
        lcm = None
        for v in vals:
            if v:
                lcm = v.denom if lcm is None else lcm.lcm(v.denom)
        scale = QT.from_sympy(lcm.as_expr())
        vals = [v * scale for v in vals]
        g = None
        for v in vals:
            if v:
                g = v.numer if g is None else g.gcd(v.numer)
        vals = [v / QT.from_sympy(g.as_expr()) for v in vals]
        lead = next(v for v in vals if v)
        lc = lead.numer.LC / lead.denom.LC
        return KummerCoords(tuple(v / QT.convert(lc) for v in vals))

    def integers(self):
        return tuple(int(as_fraction(v)) for v in self.primitive().x)


def star(w, z):
    """The symmetric product (w * z)_ij = w_i z_j + w_j z_i, (w * z)_ii = w_i z_i."""
    out = [[None] * 4 for _ in range(4)]
    for i in range(4):
        for j in range(i, 4):
            out[i][j] = out[j][i] = w[i] * z[i] if i == j else w[i] * z[j] + w[j] * z[i]
    return out


# ==============================
# SPECIALIZED FORMS
# ==============================
def _monomial(x, e):
    val = None
    for k, n in enumerate(e):
        if n:
            term = x[k] ** n
            val = term if val is None else val * term
    return val


def evaluate_form(terms, x):
    """Sum of c * x^e over (e, c) terms; None-safe for the constant monomial."""
    total = None
    for e, c in terms:
        m = _monomial(x, e)
        term = c if m is None else c * m
        total = term if total is None else total + term
    return 0 if total is None else total


def evaluate_biquadratic(terms, x, y):
    total = None
    for beta, gamma, c in terms:
        m = _monomial(x, beta) * _monomial(y, gamma)
        if beta != gamma:
            m = m + _monomial(x, gamma) * _monomial(y, beta)
        term = c * m
        total = term if total is None else total + term
    return 0 if total is None else total


def _f_value(f, alpha, one):
    val = one
    for k, n in enumerate(alpha):
        if n:
            val = val * f[k] ** n
    return val


@dataclass(frozen=True)
class SpecializedForms:
    """B, delta and K with f0..f6 substituted; coefficients are base-field elements."""
    B: dict
    delta: tuple
    K: tuple

    def mapped(self, convert):
        """Same forms with every coefficient passed through ``convert``."""
        return SpecializedForms(
            B={ij: tuple((b, g, convert(c)) for b, g, c in terms) for ij, terms in self.B.items()},
            delta=tuple(tuple((e, convert(c)) for e, c in d) for d in self.delta),
            K=tuple((e, convert(c)) for e, c in self.K),
        )


def _collect(pairs, zero):
    acc = {}
    for key, c in pairs:
        acc[key] = acc.get(key, zero) + c
    return tuple((k, c) for k, c in acc.items() if c != zero)


@lru_cache(maxsize=64)
def specialize(model):
    if model.has_h:
        model = model.completed_square()
    K_dom = model.domain
    forms = derive_forms()

    def coeff(c):
        return to_domain(Fraction(c), K_dom)

    B = {}
    for ij in PAIRS:
        acc = _collect((((beta, gamma), coeff(c) * _f_value(model.f, alpha, K_dom.one))
                        for alpha, beta, gamma, c in forms.B[ij]), K_dom.zero)
        B[ij] = tuple((b, g, c) for (b, g), c in acc)
    delta = tuple(_collect(((gamma, coeff(c) * _f_value(model.f, alpha, K_dom.one))
                            for alpha, gamma, c in d), K_dom.zero) for d in forms.delta)
    quartic = _collect(((gamma, coeff(c) * _f_value(model.f, alpha, K_dom.one))
                        for alpha, gamma, c in forms.K), K_dom.zero)
    return SpecializedForms(B=B, delta=delta, K=quartic)


# ==============================
# OPERATIONS
# ==============================
@dataclass(frozen=True)
class KummerQuartic:
    terms: tuple
    parts: tuple

    def __call__(self, x):
        return evaluate_form(self.terms, tuple(x))

    def coefficients_in_x4(self, x123):
        """(K2, K1, K0) evaluated at (x1, x2, x3)."""
        x = tuple(x123) + (1,)
        return tuple(evaluate_form(part, x) for part in self.parts)


def kummer_quartic(model):
    terms = specialize(model).K
    parts = tuple(tuple(((e[0], e[1], e[2], 0), c) for e, c in terms if e[3] == k)
                  for k in (2, 1, 0))
    return KummerQuartic(terms=terms, parts=parts)


def on_kummer(x, model):
    return kummer_quartic(model)(x) == 0


def duplicate(x, model):
    forms = specialize(model)
    values = tuple(evaluate_form(d, tuple(x)) for d in forms.delta)
    return KummerCoords(values)


def biquadratic(x, y, model):
    forms = specialize(model)
    out = [[None] * 4 for _ in range(4)]
    for i, j in PAIRS:
        out[i][j] = out[j][i] = evaluate_biquadratic(forms.B[i, j], tuple(x), tuple(y))
    return out


def _index_key(c, place):
    if place is not None:
        return place.valuation(c)
    if hasattr(c, "numer"):
        return 0
    return -abs(as_fraction(c))


def _resolving_index(z, place=None):
    """Index of z used to divide out the *-ambiguity; lowest index on ties."""
    best = None
    for k, c in enumerate(z):
        if c == 0:
            continue
        key = _index_key(c, place)
        if best is None or key < best[0]:
            best = (key, k)
    if best is None:
        raise AmbiguousDivision("z has no nonzero coordinate")
    return best[1]


def solve_star(Bxy, z, k):
    """w with w * z = B, scaled by z_k^2 so that no division is needed."""
    zk = z[k]
    Bkk = Bxy[k][k]
    return tuple(Bkk * zk if i == k else Bxy[i][k] * zk - Bkk * z[i] for i in range(4))


@dataclass(frozen=True)
class PseudoAddResult:
    w: KummerCoords
    index: int


def pseudo_add(x, y, z, model, place=None):
    """Kummer coordinates of P+Q from those of P, Q and P-Q."""
    Bxy = biquadratic(x, y, model)
    k = _resolving_index(tuple(z), place)
    w = solve_star(Bxy, tuple(z), k)
    if all(c == 0 for c in w):
        raise AmbiguousDivision("B(x, y) vanishes; w is not determined")
    return PseudoAddResult(w=KummerCoords(w), index=k)


def eps_pair(x, y, place, model):
    """v(B(x, y)) - 2 v(x) - 2 v(y)."""
    Bxy = biquadratic(x, y, model)
    vB = min(place.valuation(Bxy[i][j]) for i, j in PAIRS)
    return vB - 2 * x.valuation(place) - 2 * y.valuation(place)


def twist_map(x, c):
    """(x1, x2, x3, c x4): Kummer surface of Y^2 = F0 to that of Y^2 = c F0."""
    if c == 0:
        raise InputError("twist parameter must be nonzero")
    return KummerCoords((x[0], x[1], x[2], c * x[3]))


def twist_model(model, c):
    return CurveModel(tuple(c * fi for fi in model.f), model.h, model.base, model.modulus)


# ==============================
# TRANSFORMATIONS
# ==============================
@dataclass(frozen=True)
class Transformation:
    """X -> aX, Z -> dZ, Y -> eY, optionally preceded by the swap (X:Z) -> (Z:X)."""
    a: object = 1
    d: object = 1
    e: object = 1
    swap: bool = False

    @property
    def det(self):
        return -self.a * self.d if self.swap else self.a * self.d

    def valuation(self, place):
        return 2 * place.valuation(self.e) - 3 * place.valuation(self.det)

    def apply_model(self, model):
        """The transformed model tau^* F = det^-6 e^2 F(dX - bZ, -cX + aZ)."""
        if model.has_h:
            raise UnsupportedTransformation("transformations are supported for H = 0 only")
        K = model.domain
        a, d, e = (to_domain(v, K) for v in (self.a, self.d, self.e))
        f = list(reversed(model.f)) if self.swap else list(model.f)
        det = a * d
        scale = e ** 2 / det ** 6
        g = tuple(scale * f[i] * d ** i * a ** (6 - i) for i in range(7))
        return CurveModel(g, None, model.base, model.modulus)


def transform_diag_swap(x, tau):
    """Image of Kummer coordinates under a diagonal/swap transformation and v-ledger input."""
    if not isinstance(tau, Transformation):
        raise UnsupportedTransformation("only diagonal, swap and scaling transformations act")
    x = tuple(x)
    if tau.swap:
        x = (x[2], x[1], x[0], x[3])
    a, d, e = tau.a, tau.d, tau.e
    det = a * d
    image = (d * d * x[0] / det, x[1], a * a * x[2] / det, e * e * x[3] / det ** 3)
    return KummerCoords(image)
