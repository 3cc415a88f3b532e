"""Exact arithmetic in cyclotomic fields Q(zeta_e).

Values are stored on the integral power basis 1, z, ..., z^{phi(e)-1} after
reduction modulo the e-th cyclotomic polynomial, so equality is decidable by
dict comparison.  Coefficients are ints whenever possible and Fractions only
after division.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache


def _poly_divmod(num, den):
    """Exact division of integer polynomials (ascending coefficient lists)."""
    num = list(num)
    deg_d = len(den) - 1
    lead = den[-1]
    quot = [0] * (len(num) - deg_d)
    for k in range(len(num) - 1, deg_d - 1, -1):
        c = num[k]
        if c % lead != 0:
            raise ArithmeticError("non-exact polynomial division")
        q = c // lead
        quot[k - deg_d] = q
        if q:
            for i, d in enumerate(den):
                num[k - deg_d + i] -= q * d
    if any(num[: deg_d]) or any(num[deg_d:]):
        if any(num):
            raise ArithmeticError("nonzero remainder in cyclotomic division")
    return quot


@lru_cache(maxsize=None)
def cyclotomic_coeffs(e):
    """Monic coefficients (ascending) of the e-th cyclotomic polynomial."""
    if e == 1:
        return (-1, 1)
    num = [0] * (e + 1)
    num[0] = -1
    num[e] = 1
    for d in range(1, e):
        if e % d == 0:
            num = _poly_divmod(num, list(cyclotomic_coeffs(d)))
    return tuple(num)


@lru_cache(maxsize=None)
def _reduction_table(e):
    """x^k mod Phi_e for 0 <= k < e, as coefficient dicts on the power basis."""
    phi = cyclotomic_coeffs(e)
    deg = len(phi) - 1
    rows = [{k: 1} for k in range(deg)]
    for k in range(deg, e):
        prev = rows[k - 1]
        nxt = {}
        for exp, c in prev.items():
            if exp + 1 < deg:
                nxt[exp + 1] = nxt.get(exp + 1, 0) + c
            else:
                for i in range(deg):
                    if phi[i]:
                        nxt[i] = nxt.get(i, 0) - c * phi[i]
        rows.append({a: b for a, b in nxt.items() if b})
    return rows, deg


class Cyclo:
    """An element of Q(zeta_e) in canonical reduced form."""

    __slots__ = ("e", "c")

    def __init__(self, e, coeffs, _reduced=False):
        self.e = e
        if _reduced:
            self.c = coeffs
            return
        rows, _deg = _reduction_table(e)
        out = {}
        for exp, v in coeffs.items():
            if not v:
                continue
            for b, mult in rows[exp % e].items():
                out[b] = out.get(b, 0) + v * mult
        self.c = {k: v for k, v in out.items() if v}

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero():
        return Cyclo(1, {}, _reduced=True)

    @staticmethod
    def integer(n):
        return Cyclo(1, {0: n} if n else {}, _reduced=True)

    @staticmethod
    def rational(fr):
        fr = Fraction(fr)
        if fr.denominator == 1:
            return Cyclo.integer(fr.numerator)
        return Cyclo(1, {0: fr}, _reduced=True)

    @staticmethod
    def root(e, k=1):
        """zeta_e^k."""
        return Cyclo(e, {k % e: 1})

    # -- coercion -----------------------------------------------------

    def to_order(self, L):
        if L == self.e:
            return self
        if L % self.e != 0:
            raise ValueError("cannot embed Q(zeta_%d) in Q(zeta_%d)" % (self.e, L))
        step = L // self.e
        return Cyclo(L, {exp * step: v for exp, v in self.c.items()})

    @staticmethod
    def _common(a, b):
        if a.e == b.e:
            return a, b
        L = math.lcm(a.e, b.e)
        return a.to_order(L), b.to_order(L)

    def shrink(self):
        """Return an equal value at order 1 if rational, else self."""
        if self.e != 1 and self.is_rational():
            return Cyclo(1, {0: self.c.get(0, 0)} if self.c.get(0, 0) else {},
                         _reduced=True)
        return self

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        a, b = Cyclo._common(self, other)
        out = dict(a.c)
        for k, v in b.c.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Cyclo(a.e, out, _reduced=True)

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.e, {k: -v for k, v in self.c.items()}, _reduced=True)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Cyclo.zero()
            return Cyclo(self.e, {k: v * other for k, v in self.c.items()},
                         _reduced=True)
        a, b = Cyclo._common(self, other)
        if not a.c or not b.c:
            return Cyclo.zero()
        out = {}
        for k1, v1 in a.c.items():
            for k2, v2 in b.c.items():
                k = k1 + k2
                out[k] = out.get(k, 0) + v1 * v2
        return Cyclo(a.e, {k % a.e: v for k, v in _merge_mod(out, a.e).items()})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, int):
            other = Fraction(other)
        if isinstance(other, Fraction):
            return self * (1 / other)
        raise TypeError("division only by rationals")

    def conj(self):
        """Complex conjugation, zeta -> zeta^{-1}."""
        return Cyclo(self.e, {(-k) % self.e: v for k, v in self.c.items()})

    # -- predicates ---------------------------------------------------

    def is_zero(self):
        return not self.c

    def is_rational(self):
        return all(k == 0 for k in self.c)

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("value is not rational: %r" % (self,))
        return Fraction(self.c.get(0, 0))

    def is_integer(self):
        return self.is_rational() and Fraction(self.c.get(0, 0)).denominator == 1

    def integer_value(self):
        v = self.rational_value()
        if v.denominator != 1:
            raise ValueError("value is not an integer: %r" % (self,))
        return v.numerator

    # -- hashing / output ---------------------------------------------

    def key(self):
        s = self.shrink()
        return (s.e, tuple(sorted((k, Fraction(v)) for k, v in s.c.items())))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _coerce(other)
        if not isinstance(other, Cyclo):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        if not self.c:
            return "0"
        if self.is_rational():
            return str(self.c.get(0, 0))
        terms = []
        for k in sorted(self.c):
            v = self.c[k]
            if k == 0:
                terms.append(str(v))
            else:
                terms.append("%s*z%d^%d" % (v, self.e, k))
        return "(" + " + ".join(terms) + ")"


def _merge_mod(raw, e):
    out = {}
    for k, v in raw.items():
        k %= e
        s = out.get(k, 0) + v
        if s:
            out[k] = s
        else:
            out.pop(k, None)
    return out


def _coerce(x):
    if isinstance(x, Cyclo):
        return x
    if isinstance(x, int):
        return Cyclo.integer(x)
    if isinstance(x, Fraction):
        return Cyclo.rational(x)
    raise TypeError("cannot coerce %r to Cyclo" % (x,))


def cyclo_sum(values):
    acc = Cyclo.zero()
    for v in values:
        acc = acc + v
    return acc
