"""Representation theory of GL_n(F_q): parabolic (Harish-Chandra) induction
as a graded ring product, cuspidality, cuspidal supports, and the derivative
calculus on the mirabolic subgroup.

Everything is exact character arithmetic on tables from chartheory.  The
grade budget keeps table sizes at desk scale: GL_4(F_2) is the largest group
touched by default.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .cyclotomic import Cyclo
from .chartheory import (ClassFunction, character_table, conjugacy_classes,
                         decompose, induce, inner_product, restrict)
from .ringmat import BudgetExceeded, Partition, enumerate_gl, subgroup

GRADE_BUDGET = {2: 4, 3: 3, 5: 2}


def grade_budget(q):
    return GRADE_BUDGET.get(q, 2)


def _check_grade(n, q):
    if n > grade_budget(q):
        raise BudgetExceeded("grade %d exceeds budget %d for q=%d"
                             % (n, grade_budget(q), q))


def glq(n, q):
    """GL_n(F_q) as an enumerated group handle."""
    _check_grade(n, q)
    return enumerate_gl(n, q, 1)


def psi_additive(p, x):
    """The fixed additive character of F_p: x -> zeta_p^x."""
    return Cyclo.root(p, x % p)


# -- labels and ring elements ----------------------------------------


@dataclass(frozen=True, order=True)
class IrrLabel:
    """Irreducible of GL_n(F_q), identified by its row in the table."""
    q: int
    n: int
    index: int

    def char(self):
        if self.n == 0:
            raise ValueError("the grade-0 unit has no underlying group")
        return character_table(glq(self.n, self.q)).irreducibles[self.index]

    def dim(self):
        if self.n == 0:
            return 1
        return self.char().dim().integer_value()

    def name(self):
        return "1_R" if self.n == 0 else "X%d" % self.index

    def __repr__(self):
        return "IrrLabel(q=%d, n=%d, %s)" % (self.q, self.n, self.name())


def unit_label(q):
    return IrrLabel(q, 0, 0)


def all_labels(n, q):
    if n == 0:
        return [unit_label(q)]
    table = character_table(glq(n, q))
    return [IrrLabel(q, n, i) for i in range(table.r)]


class ZElem:
    """Element of the graded induction ring: Z-combination of IrrLabels."""

    __slots__ = ("q", "coeffs")

    def __init__(self, q, coeffs=None):
        self.q = q
        self.coeffs = {}
        for lab, c in (coeffs or {}).items():
            if c:
                self.coeffs[lab] = self.coeffs.get(lab, 0) + c
        self.coeffs = {k: v for k, v in self.coeffs.items() if v}

    @staticmethod
    def unit(q):
        return ZElem(q, {unit_label(q): 1})

    @staticmethod
    def of(label):
        return ZElem(label.q, {label: 1})

    def grades(self):
        return sorted({lab.n for lab in self.coeffs})

    def grade_part(self, n):
        return ZElem(self.q, {lab: c for lab, c in self.coeffs.items()
                              if lab.n == n})

    def is_zero(self):
        return not self.coeffs

    def dim(self):
        return sum(c * lab.dim() for lab, c in self.coeffs.items())

    def _same_q(self, other):
        if self.q != other.q:
            raise ValueError("ring elements over different fields")

    def __add__(self, other):
        other = _as_zelem(other, self.q)
        self._same_q(other)
        out = dict(self.coeffs)
        for lab, c in other.coeffs.items():
            out[lab] = out.get(lab, 0) + c
        return ZElem(self.q, out)

    def __sub__(self, other):
        other = _as_zelem(other, self.q)
        return self + ZElem(other.q, {k: -v for k, v in other.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return ZElem(self.q, {k: v * other for k, v in self.coeffs.items()})
        other = _as_zelem(other, self.q)
        self._same_q(other)
        return hc_product(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, ZElem):
            return NotImplemented
        return self.q == other.q and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.q, tuple(sorted(self.coeffs.items()))))

    def sorted_items(self):
        return sorted(self.coeffs.items(), key=lambda kv: (kv[0].n, kv[0].index))

    def __repr__(self):
        return zelem_to_text(self)


def _as_zelem(x, q):
    if isinstance(x, ZElem):
        return x
    if isinstance(x, IrrLabel):
        return ZElem.of(x)
    raise TypeError("cannot interpret %r as a ring element" % (x,))


def zelem_to_text(x):
    items = ", ".join("(%d, %s, %d)" % (lab.n, lab.name(), c)
                      for lab, c in x.sorted_items())
    return "%d; [%s]" % (x.q, items)


def zelem_from_text(s):
    q_str, _, rest = s.partition(";")
    q = int(q_str)
    rest = rest.strip()
    if not (rest.startswith("[") and rest.endswith("]")):
        raise ValueError("malformed ring element text: %r" % s)
    body = rest[1:-1].strip()
    coeffs = {}
    if body:
        for item in body.split("),"):
            item = item.strip().strip("()")
            n_str, name, c_str = (t.strip() for t in item.split(","))
            n = int(n_str)
            idx = 0 if name == "1_R" else int(name[1:])
            coeffs[IrrLabel(q, n, idx)] = int(c_str)
    return ZElem(q, coeffs)


# -- Harish-Chandra product ------------------------------------------


@lru_cache(maxsize=None)
def _hc_product_labels(a, b):
    q = a.q
    if a.n == 0:
        return ZElem.of(b)
    if b.n == 0:
        return ZElem.of(a)
    n = a.n + b.n
    _check_grade(n, q)
    G = glq(n, q)
    P = subgroup(G, ("P", Partition((a.n, b.n)), 1))
    ca, cb = a.char(), b.char()
    ccA = conjugacy_classes(glq(a.n, q))
    ccB = conjugacy_classes(glq(b.n, q))

    def value(g):
        top = tuple(g[i * n + j] % q for i in range(a.n) for j in range(a.n))
        bot = tuple(g[i * n + j] % q
                    for i in range(a.n, n) for j in range(a.n, n))
        return ca.values[ccA.class_of[top]] * cb.values[ccB.class_of[bot]]

    chi = ClassFunction.from_callable(P, value)
    ind = induce(P, chi, G)
    dec = decompose(ind, character_table(G))
    if not dec.genuine:
        raise AssertionError("parabolic induction decomposed non-integrally")
    return ZElem(q, {IrrLabel(q, n, i): m
                     for i, m in enumerate(dec.as_ints()) if m})


def hc_product(a, b):
    """Bilinear extension of parabolic induction to ring elements."""
    a = a if isinstance(a, ZElem) else ZElem.of(a)
    b = b if isinstance(b, ZElem) else ZElem.of(b)
    a._same_q(b)
    out = ZElem(a.q)
    for la, ca in a.coeffs.items():
        for lb, cb in b.coeffs.items():
            out = out + _hc_product_labels(la, lb) * (ca * cb)
    return out


# -- cuspidality ------------------------------------------------------


@lru_cache(maxsize=None)
def _cuspidal_indices(n, q):
    if n == 1:
        return tuple(range(character_table(glq(1, q)).r))
    G = glq(n, q)
    table = character_table(G)
    cc = table.cc
    out = []
    for idx, chi in enumerate(table.irreducibles):
        cuspidal = True
        for a in range(1, n):
            U = subgroup(G, ("unipotent", Partition((a, n - a))))
            total = Cyclo.zero()
            for u in U.elements:
                total = total + chi.values[cc.class_of[u]]
            if not total.is_zero():
                cuspidal = False
                break
        if cuspidal:
            out.append(idx)
    return tuple(out)


def is_cuspidal(label):
    if label.n == 0:
        return False
    return label.index in _cuspidal_indices(label.n, label.q)


def cuspidal_labels(n, q):
    return [IrrLabel(q, n, i) for i in _cuspidal_indices(n, q)]


@dataclass(frozen=True)
class CuspidalSupport:
    parts: tuple  # sorted tuple of (k, IrrLabel), sizes summing to n

    @property
    def n(self):
        return sum(k for k, _lab in self.parts)

    def __repr__(self):
        inner = ", ".join("(%d, %s)" % (k, lab.name()) for k, lab in self.parts)
        return "CuspidalSupport{%s}" % inner


def _support_candidates(n, q):
    """All multisets of cuspidals with sizes summing to n, sorted."""
    out = []
    for sizes in _partitions_desc(n):
        pools = [cuspidal_labels(k, q) for k in sizes]
        groups = {}
        for k, pool in zip(sizes, pools):
            groups.setdefault(k, []).append(pool)
        choices_per_size = []
        for k in sorted(groups):
            count = len(groups[k])
            pool = cuspidal_labels(k, q)
            choices_per_size.append(
                [tuple((k, lab) for lab in combo)
                 for combo in itertools.combinations_with_replacement(pool, count)])
        for combo in itertools.product(*choices_per_size):
            parts = tuple(sorted(sum(combo, ())))
            out.append(CuspidalSupport(parts))
    return sorted(set(out), key=lambda s: s.parts)


def _partitions_desc(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        return [()]
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions_desc(n - k, k):
            out.append((k,) + rest)
    return out


def support_product(supp):
    x = ZElem.unit(supp.parts[0][1].q)
    for _k, lab in supp.parts:
        x = hc_product(x, ZElem.of(lab))
    return x


def cuspidal_support(label):
    """The unique cuspidal multiset whose induction contains the label."""
    if is_cuspidal(label):
        return CuspidalSupport(((label.n, label),))
    matches = [supp for supp in _support_candidates(label.n, label.q)
               if support_product(supp).coeffs.get(label, 0) > 0]
    if len(matches) != 1:
        raise AssertionError("cuspidal support not unique for %r: %r"
                             % (label, matches))
    return matches[0]


# -- mirabolic subgroup and derivatives -------------------------------


def mirabolic(n, q):
    return subgroup(glq(n, q), ("mirabolic",))


def _piece_subgroup(n, q, k):
    """Block upper-triangular subgroup of Mir_n of shape (n-k, 1, ..., 1)
    with identity diagonal on the last k entries."""
    s = n - k

    def pred(g):
        for i in range(n):
            for j in range(n):
                v = g[i * n + j]
                if i >= s or j >= s:
                    if i > j and v != 0:
                        return False
                    if i == j and i >= s and v != 1:
                        return False
        return True

    return subgroup(mirabolic(n, q), ("custom", "mirpiece%d" % k, pred))


def mirabolic_piece(sigma, k):
    """Character on Mir_{sigma.n + k} of the k-step extension-induction of
    sigma; for k = 0, plain restriction to the mirabolic subgroup."""
    q = sigma.q
    n = sigma.n + k
    if k < 0 or n < 1:
        raise ValueError("invalid piece parameters")
    M = mirabolic(n, q)
    if k == 0:
        return restrict(sigma.char(), M)
    s = n - k
    H = _piece_subgroup(n, q, k)
    if sigma.n:
        csig = sigma.char()
        ccS = conjugacy_classes(glq(sigma.n, q))

    def value(h):
        x = 0
        for j in range(s + 1, n):
            x += h[(j - 1) * n + j]
        v = psi_additive(q, x)
        if sigma.n:
            top = tuple(h[i * n + j] % q for i in range(s) for j in range(s))
            v = v * csig.values[ccS.class_of[top]]
        return v

    chi = ClassFunction.from_callable(H, value, check=True)
    return induce(H, chi, M)


def derivative(label, k):
    """The k-th derivative as a ring element of grade n - k."""
    if k == 0:
        return ZElem.of(label)
    n, q = label.n, label.q
    if not 0 <= k <= n:
        raise ValueError("derivative order out of range")
    M = mirabolic(n, q)
    res = restrict(label.char(), M)
    out = ZElem(q)
    for sigma in all_labels(n - k, q):
        m = inner_product(res, mirabolic_piece(sigma, k))
        if m.denominator != 1 or m < 0:
            raise AssertionError("derivative multiplicity %s not in Z>=0" % m)
        if m:
            out = out + ZElem(q, {sigma: int(m)})
    return out


@lru_cache(maxsize=None)
def _d_of_label(label):
    if label.n == 0:
        return ZElem.unit(label.q)
    out = ZElem(label.q)
    for k in range(label.n + 1):
        out = out + derivative(label, k)
    return out


def D_map(x):
    """D = sum of all derivatives; a ring endomorphism."""
    out = ZElem(x.q)
    for lab, c in x.coeffs.items():
        out = out + _d_of_label(lab) * c
    return out


def x_term(chis, k):
    """Degree n-k term of prod_i (chi_i + 1_R) for GL_1 characters chi_i."""
    if not chis:
        raise ValueError("need at least one character")
    q = chis[0].q
    prod = ZElem.unit(q)
    for chi in chis:
        if chi.n != 1:
            raise ValueError("x_term expects GL_1 characters")
        prod = hc_product(prod, ZElem.of(chi) + ZElem.unit(q))
    n = len(chis)
    if not 0 <= k <= n:
        raise ValueError("term index out of range")
    return prod.grade_part(n - k)


# -- cuspidals with prescribed central character ----------------------


def central_character(label):
    """Values of the central character on units of F_q, via scalar classes."""
    n, q = label.n, label.q
    chi = label.char()
    d = label.dim()
    cc = conjugacy_classes(glq(n, q))
    vals = {}
    for a in range(1, q):
        scalar = tuple(a if i == j else 0 for i in range(n) for j in range(n))
        vals[a] = chi.values[cc.class_of[scalar]] * Fraction(1, d)
    return vals


def gl2_cuspidals_with_central(q, chi):
    """All cuspidal labels of GL_2(F_q) with central character chi (a GL_1
    label).  The list is guaranteed nonempty."""
    cc1 = conjugacy_classes(glq(1, q))
    chi_vals = {a: chi.char().values[cc1.class_of[(a,)]] for a in range(1, q)}
    out = []
    for lab in cuspidal_labels(2, q):
        if central_character(lab) == chi_vals:
            out.append(lab)
    if not out:
        raise AssertionError("no cuspidal with the requested central character")
    return out


# -- the covering lemma witness ---------------------------------------


def noncuspidal_cover(G, U, H, xi):
    """A non-cuspidal irreducible of G whose restriction to H contains xi.

    xi may be a ClassFunction on H or an index into character_table(H).
    Requires H to meet the unipotent radical U trivially."""
    ident = G.identity()
    for h in H.elements:
        if h in U.index and h != ident:
            raise ValueError("H meets the unipotent radical nontrivially")
    if isinstance(xi, int):
        xi = character_table(H).irreducibles[xi]
    n, q = G.n, G.ring.p
    table = character_table(G)
    for idx, sigma in enumerate(table.irreducibles):
        if is_cuspidal(IrrLabel(q, n, idx)):
            continue
        if inner_product(restrict(sigma, H), xi) > 0:
            return IrrLabel(q, n, idx)
    raise AssertionError("no non-cuspidal cover found; this contradicts the "
                         "covering property")
