"""Point counts of genus-2 curves and their Jacobians over small finite fields.

Only prime-field arithmetic is used: an x in F_{p^2} \\ F_p is represented by its
minimal polynomial X^2 - sX + n, and F(x) is a square in F_{p^2} exactly when
its norm F(x)F(x') is a square in F_p. Counts over F_{p^k} follow from the two
prime-level counts through the zeta function.
"""
import logging
import math
from dataclasses import dataclass

import flint
import sympy

from curve import discriminant, sextic_of
from errors import BadReduction, InputError
from fields import as_fraction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PointCounts:
    p: int
    n1: int
    n2: int

    @property
    def jacobian_order(self):
        """#J(F_p) = (N1^2 + N2)/2 - p."""
        return (self.n1 * self.n1 + self.n2) // 2 - self.p

    def power_sums(self, upto):
        """s_0..s_upto, s_m the sum of the m-th powers of the Frobenius eigenvalues."""
        p = self.p
        s1 = p + 1 - self.n1
        s2 = p * p + 1 - self.n2
        e = (1, s1, (s1 * s1 - s2) // 2, p * s1, p * p)
        s = [4, s1]
        for m in range(2, upto + 1):
            acc = sum((-1) ** (i - 1) * e[i] * s[m - i] for i in range(1, min(m, 5)))
            if m <= 4:
                acc += (-1) ** (m - 1) * m * e[m]
            s.append(acc)
        return s[:upto + 1]


def _legendre(a, p):
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def reduced_sextic(model, p):
    """4F + H^2 with coefficients reduced modulo the odd prime p."""
    out = []
    for c in sextic_of(model):
        q = as_fraction(c)
        if q.denominator % p == 0:
            raise BadReduction(f"the model is not integral at {p}")
        out.append(q.numerator * pow(q.denominator, -1, p) % p)
    return out


def _norm_at_quadratic(G, s, n, p):
    """F(x)F(x') for x, x' the roots of X^2 - sX + n."""
    w, u = ([int(c) for c in (G % flint.nmod_poly([n, -s % p, 1], p)).coeffs()] + [0, 0])[:2]
    return (u * u * n + u * w * s + w * w) % p


def count_points(model, p):
    """#C(F_p) and #C(F_{p^2}) for an odd prime of good reduction."""
    if p == 2:
        raise InputError("point counting is implemented for odd primes")
    delta = as_fraction(discriminant(model))
    if delta.numerator % p == 0 or delta.denominator % p == 0:
        raise BadReduction(f"{p} divides the discriminant")
    g = reduced_sextic(model, p)
    G = flint.nmod_poly(g, p)
    at_inf = g[6] != 0
    n1 = (1 + _legendre(g[6], p)) if at_inf else 1
    n2 = 2 if at_inf else 1
    for x in range(p):
        val = int(G(x))
        n1 += 1 + _legendre(val, p)
        n2 += 2 if val else 1
    for s in range(p):
        for n in range(p):
            if _legendre(s * s - 4 * n, p) != -1:
                continue
            n2 += 2 * (1 + _legendre(_norm_at_quadratic(G, s, n, p), p))
    logger.debug("p=%d: #C(F_p)=%d #C(F_p^2)=%d", p, n1, n2)
    return PointCounts(p, n1, n2)


def _split_prime_power(q):
    factors = sympy.factorint(q) if q > 1 else {}
    if len(factors) != 1:
        raise InputError(f"{q} is not a prime power")
    (p, k), = factors.items()
    return p, k


def count_points_curve(model, q):
    """#C(F_q) for an odd prime power q."""
    p, k = _split_prime_power(q)
    if k == 1:
        return count_points(model, p).n1
    return q + 1 - count_points(model, p).power_sums(k)[k]


def jacobian_order(model, q):
    p, k = _split_prime_power(q)
    counts = count_points(model, p)
    if k == 1:
        return counts.jacobian_order
    s = counts.power_sums(2 * k)
    n1, n2 = q + 1 - s[k], q * q + 1 - s[2 * k]
    return (n1 * n1 + n2) // 2 - q


def torsion_bound(model, primes):
    """gcd of #J(F_p) over the given odd good primes; divisible by #J(Q)_tors."""
    g = 0
    used = []
    for p in primes:
        try:
            g = math.gcd(g, jacobian_order(model, p))
        except BadReduction:
            continue
        used.append(p)
    return g, tuple(used)
