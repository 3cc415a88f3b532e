"""Exact character theory for the enumerable matrix groups of ringmat.

Conjugacy classes come from orbit BFS under a generating set.  Irreducible
tables are computed by the class-algebra method: simultaneous eigenvectors
of the class-multiplication matrices over a prime field F_l with l = 1 mod
exponent(G), lifted to exact cyclotomic values through eigenvalue
multiplicities of the power maps.  All table invariants are re-checked in
exact arithmetic.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from sympy import isprime, nextprime, primitive_root

from . import modlinalg as ml
from .cyclotomic import Cyclo, cyclo_sum
from .ringmat import SubgroupHandle, mat_identity

_TABLE_SEED = 0x5EED


# -- conjugacy classes -----------------------------------------------


@dataclass
class ConjugacyClasses:
    group: SubgroupHandle
    reps: list          # one min-key representative per class
    sizes: list
    classes: list       # full element lists
    class_of: dict      # element tuple -> class index

    @property
    def r(self):
        return len(self.reps)

    def identity_class(self):
        return self.class_of[mat_identity(self.group.n)]

    def element_order(self, g):
        G = self.group
        ident = G.identity()
        x = g
        o = 1
        while x != ident:
            x = G.mul(x, g)
            o += 1
        return o

    def rep_orders(self):
        key = "rep_orders"
        if key not in self.group._cache:
            self.group._cache[key] = [self.element_order(g) for g in self.reps]
        return self.group._cache[key]

    def exponent(self):
        return math.lcm(*self.rep_orders())

    def inverse_class(self, i):
        return self.class_of[self.group.inv(self.reps[i])]

    def power_class(self, i, t):
        G = self.group
        g = self.reps[i]
        x = G.identity()
        for _ in range(t):
            x = G.mul(x, g)
        return self.class_of[x]


def conjugacy_classes(G):
    if "classes" in G._cache:
        return G._cache["classes"]
    gens = G.generators()
    pairs = [(g, G.inv(g)) for g in gens]
    class_of = {}
    raw = []
    mul = G.mul
    for g in G.elements:  # sorted, so the min-key element of a class is seen first
        if g in class_of:
            continue
        idx = len(raw)
        orbit = [g]
        class_of[g] = idx
        frontier = [g]
        while frontier:
            nxt = []
            for x in frontier:
                for s, sinv in pairs:
                    y = mul(mul(s, x), sinv)
                    if y not in class_of:
                        class_of[y] = idx
                        orbit.append(y)
                        nxt.append(y)
            frontier = nxt
        raw.append(orbit)
    order = sorted(range(len(raw)), key=lambda i: (len(raw[i]), min(raw[i])))
    classes = [sorted(raw[i]) for i in order]
    remap = {old: new for new, old in enumerate(order)}
    class_of = {g: remap[i] for g, i in class_of.items()}
    cc = ConjugacyClasses(
        group=G,
        reps=[c[0] for c in classes],
        sizes=[len(c) for c in classes],
        classes=classes,
        class_of=class_of,
    )
    assert sum(cc.sizes) == G.order
    G._cache["classes"] = cc
    return cc


# -- class functions -------------------------------------------------


class ClassFunction:
    """Cyclotomic-valued class function, stored per conjugacy class."""

    __slots__ = ("group", "cc", "values", "label")

    def __init__(self, group, values, label=None):
        self.group = group
        self.cc = conjugacy_classes(group)
        values = list(values)
        if len(values) != self.cc.r:
            raise ValueError("value count does not match class count")
        self.values = [v if isinstance(v, Cyclo) else Cyclo.rational(Fraction(v))
                       for v in values]
        self.label = label

    @staticmethod
    def from_callable(group, f, check=False):
        cc = conjugacy_classes(group)
        vals = [f(g) for g in cc.reps]
        if check:
            for i, cls in enumerate(cc.classes):
                for g in cls:
                    if f(g) != vals[i]:
                        raise ValueError("function is not a class function")
        return ClassFunction(group, vals)

    @staticmethod
    def trivial(group):
        cc = conjugacy_classes(group)
        return ClassFunction(group, [Cyclo.integer(1)] * cc.r, label="triv")

    @staticmethod
    def regular(group):
        cc = conjugacy_classes(group)
        vals = [Cyclo.integer(0)] * cc.r
        vals[cc.identity_class()] = Cyclo.integer(group.order)
        return ClassFunction(group, vals, label="reg")

    @staticmethod
    def zero(group):
        cc = conjugacy_classes(group)
        return ClassFunction(group, [Cyclo.zero()] * cc.r)

    def value_of(self, g):
        return self.values[self.cc.class_of[g]]

    def dim(self):
        return self.values[self.cc.identity_class()]

    def _same_group(self, other):
        if self.group is not other.group:
            raise ValueError("class functions live on different groups")

    def __add__(self, other):
        self._same_group(other)
        return ClassFunction(self.group,
                             [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        self._same_group(other)
        return ClassFunction(self.group,
                             [a - b for a, b in zip(self.values, other.values)])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ClassFunction(self.group, [v * other for v in self.values])
        self._same_group(other)
        return ClassFunction(self.group,
                             [a * b for a, b in zip(self.values, other.values)])

    __rmul__ = __mul__

    def conj(self):
        return ClassFunction(self.group, [v.conj() for v in self.values])

    def is_zero(self):
        return all(v.is_zero() for v in self.values)

    def __eq__(self, other):
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return self.group is other.group and all(
            a == b for a, b in zip(self.values, other.values))

    def __hash__(self):
        return hash((id(self.group), tuple(v.key() for v in self.values)))

    def key(self):
        return tuple(v.key() for v in self.values)

    def __repr__(self):
        return "ClassFunction(%s, dim=%s)" % (self.label or self.group.name,
                                              self.dim())


def tensor(a, b):
    return a * b


def inner_product(a, b):
    """Exact <a, b> = (1/|G|) sum |C| a(C) conj(b(C)); returns a Fraction."""
    a._same_group(b)
    cc = a.cc
    total = cyclo_sum(av * bv.conj() * size
                      for av, bv, size in zip(a.values, b.values, cc.sizes))
    if not total.is_rational():
        raise ValueError("non-rational inner product")
    return total.rational_value() / a.group.order


def restrict(chi, H):
    """Restriction of a class function on G to a subgroup H."""
    G = chi.group
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of the domain of chi")
    ccH = conjugacy_classes(H)
    return ClassFunction(H, [chi.value_of(g) for g in ccH.reps])


def induce(H, chi, G):
    """Induced character, exact Frobenius formula summed over H once."""
    if chi.group is not H:
        raise ValueError("chi must live on H")
    if not H.is_subgroup_of(G):
        raise ValueError("H is not a subgroup of G")
    ccH = conjugacy_classes(H)
    ccG = conjugacy_classes(G)
    counts = {}
    for h in H.elements:
        kk = (ccG.class_of[h], ccH.class_of[h])
        counts[kk] = counts.get(kk, 0) + 1
    acc = [Cyclo.zero() for _ in range(ccG.r)]
    for (iG, iH), c in counts.items():
        acc[iG] = acc[iG] + chi.values[iH] * c
    scale_num = G.order
    vals = [acc[i] * Fraction(scale_num, H.order * ccG.sizes[i])
            for i in range(ccG.r)]
    return ClassFunction(G, vals)


class GroupHom:
    """A verified surjective homomorphism between enumerable groups."""

    def __init__(self, src, dst, func, name=""):
        self.src = src
        self.dst = dst
        self.func = func
        self.name = name
        self._verify()

    def _verify(self):
        f = self.func
        image = set()
        for g in self.src.elements:
            y = f(g)
            if y not in self.dst.index:
                raise ValueError("homomorphism image escapes codomain at %r" % (g,))
            image.add(y)
        if len(image) != self.dst.order:
            raise ValueError("homomorphism %s is not surjective" % self.name)
        gens = self.src.generators()
        for s in gens:
            fs = f(s)
            for x in self.src.elements:
                if f(self.src.mul(s, x)) != self.dst.mul(fs, f(x)):
                    raise ValueError("map %s is not a homomorphism" % self.name)

    def __call__(self, g):
        return self.func(g)


def inflate(chi, hom):
    """Pull back a class function on hom.dst to hom.src."""
    if chi.group is not hom.dst:
        raise ValueError("chi must live on the codomain of the quotient map")
    ccS = conjugacy_classes(hom.src)
    return ClassFunction(hom.src, [chi.value_of(hom(g)) for g in ccS.reps])


@dataclass
class Decomposition:
    multiplicities: list   # Fractions aligned with table.irreducibles
    genuine: bool          # all nonnegative integers and exact reconstruction

    def as_ints(self):
        if not self.genuine:
            raise ValueError("decomposition is not a genuine character combination")
        return [int(m) for m in self.multiplicities]


def decompose(chi, table):
    mults = [inner_product(chi, irr) for irr in table.irreducibles]
    genuine = all(m.denominator == 1 and m >= 0 for m in mults)
    if genuine:
        recon = ClassFunction.zero(chi.group)
        for m, irr in zip(mults, table.irreducibles):
            if m:
                recon = recon + irr * m
        genuine = recon == chi
    return Decomposition(multiplicities=mults, genuine=genuine)


# -- character table (class-algebra method) ---------------------------


class CharacterTable:
    def __init__(self, group, irreducibles):
        self.group = group
        self.cc = conjugacy_classes(group)
        self.irreducibles = irreducibles

    @property
    def r(self):
        return len(self.irreducibles)

    def dims(self):
        return [int(x.dim().rational_value()) for x in self.irreducibles]

    def verify(self, full=True):
        """Exact invariants; raises InternalTableFault on any failure."""
        cc = self.cc
        if self.r != cc.r:
            raise InternalTableFault("irreducible count != class count")
        if sum(d * d for d in self.dims()) != self.group.order:
            raise InternalTableFault("sum of squared dimensions mismatch")
        if full:
            for i, a in enumerate(self.irreducibles):
                for j in range(i, self.r):
                    got = inner_product(a, self.irreducibles[j])
                    if got != (1 if i == j else 0):
                        raise InternalTableFault(
                            "row orthogonality fails at (%d, %d): %s" % (i, j, got))
            for i in range(cc.r):
                for j in range(i, cc.r):
                    s = cyclo_sum(x.values[i] * x.values[j].conj()
                                  for x in self.irreducibles)
                    want = (Fraction(self.group.order, cc.sizes[i])
                            if i == j else 0)
                    if s != Cyclo.rational(Fraction(want)):
                        raise InternalTableFault(
                            "column orthogonality fails at (%d, %d)" % (i, j))
        else:
            for a in self.irreducibles:
                if inner_product(a, a) != 1:
                    raise InternalTableFault("row norm fails for %s" % a.label)
        return True


class InternalTableFault(AssertionError):
    pass


def _choose_field(order, exponent):
    lower = max(2 * math.isqrt(order) + 3, exponent + 2, 101)
    l = lower + ((1 - lower) % exponent)
    while l < lower or not isprime(l):
        l += exponent
    return int(l)


def _class_matrix(cc, i, l):
    """(M_i)_{j,k} = #{x in C_i : x^{-1} g_k in C_j}, reduced mod l."""
    G = cc.group
    r = cc.r
    M = np.zeros((r, r), dtype=np.int64)
    invs = [G.inv(x) for x in cc.classes[i]]
    for xinv in invs:
        for k, gk in enumerate(cc.reps):
            j = cc.class_of[G.mul(xinv, gk)]
            M[j, k] += 1
    return M % l


def _common_eigenvectors(cc, l, rng):
    """One normalized common eigenvector per irreducible, mod l."""
    r = cc.r
    spaces = [np.eye(r, dtype=np.int64)]
    ident = cc.identity_class()
    class_order = sorted(range(r), key=lambda i: (cc.sizes[i], i))
    for i in class_order:
        if all(S.shape[0] == 1 for S in spaces):
            break
        if i == ident:
            continue
        M = _class_matrix(cc, i, l)
        new_spaces = []
        for S in spaces:
            if S.shape[0] == 1:
                new_spaces.append(S)
                continue
            B, piv = ml.rref(S, l)
            C = (B @ M.T) % l
            A = C[:, piv]
            for _lam, coords in ml.eigenvalues(A.T, l, rng):
                new_spaces.append((coords @ B) % l)
        spaces = new_spaces
    if not all(S.shape[0] == 1 for S in spaces):
        raise InternalTableFault("class matrices failed to split the algebra")
    vecs = []
    for S in spaces:
        v = S[0] % l
        c = int(v[ident])
        if c == 0:
            raise InternalTableFault("eigenvector vanishes at the identity class")
        v = (v * pow(c, l - 2, l)) % l
        vecs.append(v)
    return vecs


def character_table(G, verify="auto"):
    """The table of irreducible characters of G, exact and deterministic."""
    if "table" in G._cache:
        return G._cache["table"]
    cc = conjugacy_classes(G)
    r = cc.r
    e = cc.exponent()
    l = _choose_field(G.order, e)
    rng = random.Random(_TABLE_SEED)
    vecs = _common_eigenvectors(cc, l, rng)
    inv_sizes = [pow(s % l, l - 2, l) for s in cc.sizes]
    inv_classes = [cc.inverse_class(i) for i in range(r)]
    sqrt_order = math.isqrt(G.order)
    u = primitive_root(l) if l > 2 else 1
    orders = cc.rep_orders()
    power_classes = [[cc.power_class(i, t) for t in range(orders[i])]
                     for i in range(r)]

    irreducibles = []
    for v in vecs:
        s = 0
        for i in range(r):
            s = (s + int(v[i]) * int(v[inv_classes[i]]) * inv_sizes[i]) % l
        d_sq = (G.order % l) * pow(s, l - 2, l) % l
        d = _sqrt_mod(d_sq, l)
        if d > sqrt_order:
            d = l - d
        if d > sqrt_order or (d * d - d_sq) % l:
            raise InternalTableFault("dimension recovery failed")
        chi_mod = [(d * int(v[i]) * inv_sizes[i]) % l for i in range(r)]
        values = []
        for i in range(r):
            o = orders[i]
            if o == 1:
                values.append(Cyclo.integer(d))
                continue
            z = pow(u, (l - 1) // o, l)
            zinv = pow(z, l - 2, l)
            inv_o = pow(o % l, l - 2, l)
            coeffs = {}
            for j in range(o):
                acc = 0
                for t in range(o):
                    acc = (acc + chi_mod[power_classes[i][t]]
                           * pow(zinv, (j * t) % (o), l)) % l
                m_j = (acc * inv_o) % l
                if m_j:
                    if m_j > sqrt_order:
                        raise InternalTableFault("multiplicity lift out of range")
                    coeffs[(j * (e // o)) % e] = m_j
            values.append(Cyclo(e, coeffs).shrink())
        irreducibles.append(ClassFunction(G, values))

    irreducibles.sort(key=lambda x: (x.dim().rational_value(), x.key()))
    for idx, chi in enumerate(irreducibles):
        chi.label = "X%d" % idx
    table = CharacterTable(G, irreducibles)
    if verify == "auto":
        table.verify(full=r <= 60)
    elif verify:
        table.verify(full=True)
    G._cache["table"] = table
    return table


def _sqrt_mod(a, l):
    from sympy.ntheory.residue_ntheory import sqrt_mod
    s = sqrt_mod(a % l, l)
    if s is None:
        raise InternalTableFault("quadratic residue expected mod %d" % l)
    return int(s)


# -- serialization ----------------------------------------------------


def _cyclo_to_text(v):
    v = v.shrink()
    parts = ",".join("%d:%s" % (k, Fraction(v.c[k])) for k in sorted(v.c))
    return "%d;%s" % (v.e, parts)


def _cyclo_from_text(s):
    e_str, _, rest = s.partition(";")
    e = int(e_str)
    coeffs = {}
    if rest:
        for item in rest.split(","):
            k_str, _, f_str = item.partition(":")
            coeffs[int(k_str)] = Fraction(f_str)
    return Cyclo(e, coeffs)


def serialize_table(table):
    cc = table.cc
    G = table.group
    lines = ["levelzero-chartable 1",
             "group %d %d %d %s" % (G.n, G.ring.p, G.ring.m, G.name),
             "order %d" % G.order,
             "exponent %d" % cc.exponent(),
             "classes %d" % cc.r]
    for i in range(cc.r):
        lines.append("class %d %d %s"
                     % (i, cc.sizes[i], " ".join(map(str, cc.reps[i]))))
    for chi in table.irreducibles:
        lines.append("irr %s %s" % (
            chi.label, " ".join(_cyclo_to_text(v) for v in chi.values)))
    return "\n".join(lines) + "\n"


def parse_table(text, group):
    """Rebuild a CharacterTable serialized by serialize_table on `group`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if lines[0] != "levelzero-chartable 1":
        raise ValueError("unknown table format")
    cc = conjugacy_classes(group)
    irreducibles = []
    for ln in lines:
        if ln.startswith("order "):
            if int(ln.split()[1]) != group.order:
                raise ValueError("table order mismatch")
        elif ln.startswith("class "):
            parts = ln.split()
            i, size = int(parts[1]), int(parts[2])
            rep = tuple(int(x) for x in parts[3:])
            if cc.sizes[i] != size or cc.reps[i] != rep:
                raise ValueError("class data mismatch at class %d" % i)
        elif ln.startswith("irr "):
            parts = ln.split()
            label = parts[1]
            vals = [_cyclo_from_text(tok) for tok in parts[2:]]
            chi = ClassFunction(group, vals, label=label)
            irreducibles.append(chi)
    table = CharacterTable(group, irreducibles)
    table.verify(full=False)
    return table
