"""Exact matrix arithmetic over Z/p^m and enumeration of GL_n and its
named subgroups (parabolic preimages, congruence subgroups, mirabolics, ...).

All group elements in hot loops are flat row-major tuples of residues; the
RMatrix wrapper is the public value type.  Everything is immutable.
"""

from __future__ import annotations

import os
from functools import lru_cache

DEFAULT_BUDGET = 200_000


class BudgetExceeded(RuntimeError):
    pass


def _budget(override=None):
    if override is not None:
        return override
    env = os.environ.get("LEVELZERO_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class FiniteRing:
    """The ring Z/p^m with its unit group and reduction maps."""

    __slots__ = ("p", "m", "q")

    def __init__(self, p, m):
        if not _is_prime(p):
            raise ValueError("p must be prime, got %r" % (p,))
        if m < 1:
            raise ValueError("depth must be >= 1")
        self.p = p
        self.m = m
        self.q = p ** m

    def is_unit(self, x):
        return x % self.p != 0

    def units(self):
        return [x for x in range(self.q) if x % self.p != 0]

    def unit_count(self):
        return self.q - self.q // self.p

    def inv(self, x):
        if not self.is_unit(x):
            raise ZeroDivisionError("%d is not a unit mod %d" % (x, self.q))
        return pow(x, -1, self.q)

    def reduce_to(self, m2):
        if m2 > self.m:
            raise ValueError("cannot reduce to deeper ring")
        return FiniteRing(self.p, m2)

    def residue_field(self):
        return FiniteRing(self.p, 1)

    def __eq__(self, other):
        return isinstance(other, FiniteRing) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self):
        return hash((self.p, self.m))

    def __repr__(self):
        return "Z/%d^%d" % (self.p, self.m) if self.m > 1 else "F_%d" % self.p


def make_ring(p, m):
    return FiniteRing(p, m)


class Partition:
    """Ordered composition (n_1, ..., n_r) of n."""

    __slots__ = ("parts",)

    def __init__(self, parts):
        parts = tuple(int(x) for x in parts)
        if not parts or any(x < 1 for x in parts):
            raise ValueError("parts must be positive: %r" % (parts,))
        self.parts = parts

    @property
    def n(self):
        return sum(self.parts)

    @property
    def r(self):
        return len(self.parts)

    def truncate(self):
        if self.r < 2:
            raise ValueError("truncation needs r > 1")
        return Partition(self.parts[:-1])

    def bounds(self):
        """Cumulative block boundaries [0, n_1, n_1+n_2, ..., n]."""
        out = [0]
        for x in self.parts:
            out.append(out[-1] + x)
        return out

    def __eq__(self, other):
        return isinstance(other, Partition) and self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return "Partition%r" % (self.parts,)


# -- flat tuple matrix kernel ----------------------------------------


def mat_mul(a, b, n, q):
    out = [0] * (n * n)
    for i in range(n):
        ai = a[i * n:(i + 1) * n]
        row = [0] * n
        for k in range(n):
            c = ai[k]
            if c:
                bk = b[k * n:(k + 1) * n]
                for j in range(n):
                    row[j] += c * bk[j]
        base = i * n
        for j in range(n):
            out[base + j] = row[j] % q
    return tuple(out)


def mat_identity(n):
    return tuple(1 if i == j else 0 for i in range(n) for j in range(n))


def mat_det(a, n, q):
    if n == 1:
        return a[0] % q
    if n == 2:
        return (a[0] * a[3] - a[1] * a[2]) % q
    det = 0
    for j in range(n):
        c = a[j]
        if c:
            minor = tuple(a[i * n + k] for i in range(1, n)
                          for k in range(n) if k != j)
            term = c * mat_det(minor, n - 1, q)
            det += term if j % 2 == 0 else -term
    return det % q


def mat_inv(a, n, ring):
    """Inverse via Gaussian elimination with unit pivots."""
    q = ring.q
    M = [list(a[i * n:(i + 1) * n]) + [1 if j == i else 0 for j in range(n)]
         for i in range(n)]
    for col in range(n):
        piv = None
        for row in range(col, n):
            if ring.is_unit(M[row][col]):
                piv = row
                break
        if piv is None:
            raise ZeroDivisionError("matrix is not invertible mod %d" % q)
        M[col], M[piv] = M[piv], M[col]
        inv = ring.inv(M[col][col])
        M[col] = [(x * inv) % q for x in M[col]]
        for row in range(n):
            if row != col and M[row][col]:
                f = M[row][col]
                M[row] = [(x - f * y) % q for x, y in zip(M[row], M[col])]
    return tuple(M[i][n + j] for i in range(n) for j in range(n))


class RMatrix:
    """Immutable n x n matrix over a FiniteRing."""

    __slots__ = ("ring", "n", "entries")

    def __init__(self, ring, entries):
        entries = tuple(x % ring.q for x in entries)
        n = int(round(len(entries) ** 0.5))
        if n * n != len(entries):
            raise ValueError("entries must form a square matrix")
        self.ring = ring
        self.n = n
        self.entries = entries

    @staticmethod
    def identity(ring, n):
        return RMatrix(ring, mat_identity(n))

    @staticmethod
    def from_rows(ring, rows):
        return RMatrix(ring, [x for row in rows for x in row])

    def rows(self):
        n = self.n
        return [self.entries[i * n:(i + 1) * n] for i in range(n)]

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.n + j]

    def __mul__(self, other):
        if self.ring != other.ring:
            raise ValueError("mixed rings")
        return RMatrix(self.ring, mat_mul(self.entries, other.entries,
                                          self.n, self.ring.q))

    def det(self):
        return mat_det(self.entries, self.n, self.ring.q)

    def is_invertible(self):
        return self.ring.is_unit(self.det())

    def inverse(self):
        return RMatrix(self.ring, mat_inv(self.entries, self.n, self.ring))

    def reduce_to(self, m2):
        r2 = self.ring.reduce_to(m2)
        return RMatrix(r2, tuple(x % r2.q for x in self.entries))

    def key(self):
        """Canonical row-major digit key used for all deterministic orderings."""
        return self.entries

    def __eq__(self, other):
        return (isinstance(other, RMatrix) and self.ring == other.ring
                and self.entries == other.entries)

    def __hash__(self):
        return hash((self.ring.p, self.ring.m, self.entries))

    def __repr__(self):
        return "RMatrix(%r, %r)" % (self.ring, self.rows())


def gl_order(n, ring):
    p, m = ring.p, ring.m
    order = 1
    for i in range(n):
        order *= p ** n - p ** i
    return order * p ** ((m - 1) * n * n)


@lru_cache(maxsize=None)
def _gl_residue_elements(n, p):
    """All invertible flat tuples over F_p, sorted by key."""
    out = []
    total = p ** (n * n)
    for code in range(total):
        t = []
        c = code
        for _ in range(n * n):
            t.append(c % p)
            c //= p
        t = tuple(reversed(t))
        if mat_det(t, n, p) % p != 0:
            out.append(t)
    out.sort()
    return out


@lru_cache(maxsize=None)
def _gl_elements(n, p, m, budget=None):
    """All elements of GL_n(Z/p^m) as sorted flat tuples."""
    order = gl_order(n, FiniteRing(p, m))
    if order > _budget(budget):
        raise BudgetExceeded(
            "GL_%d(Z/%d^%d) has order %d, exceeding budget %d"
            % (n, p, m, order, _budget(budget)))
    q = p ** m
    res = _gl_residue_elements(n, p)
    if m == 1:
        return res
    # every lift g0 + p*anything of an invertible residue matrix is invertible
    k = n * n
    lift_digits = q // p  # p^{m-1} choices per entry
    out = []
    for g0 in res:
        codes = [0] * k
        while True:
            out.append(tuple(g0[i] + p * codes[i] for i in range(k)))
            idx = k - 1
            while idx >= 0:
                codes[idx] += 1
                if codes[idx] < lift_digits:
                    break
                codes[idx] = 0
                idx -= 1
            if idx < 0:
                break
    out.sort()
    assert len(out) == order
    return out


class SubgroupHandle:
    """An enumerable subgroup of GL_n(Z/p^m) with verified closure.

    Elements are stored as sorted flat tuples; `index` maps element to its
    canonical position.  Construction certifies that the element set is a
    subgroup by rebuilding it as the closure of a greedy generating set.
    """

    CLOSURE_FULL_LIMIT = 300  # full |H|^2 product table below this order

    def __init__(self, n, ring, name, elements, check=True):
        self.n = n
        self.ring = ring
        self.name = name
        self.elements = sorted(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.order = len(self.elements)
        self._cache = {}
        self._generators = None
        if check:
            self._verify()

    # -- group operations --------------------------------------------

    def mul(self, a, b):
        return mat_mul(a, b, self.n, self.ring.q)

    def inv(self, a):
        return mat_inv(a, self.n, self.ring)

    def identity(self):
        return mat_identity(self.n)

    def contains(self, g):
        return g in self.index

    def __contains__(self, g):
        if isinstance(g, RMatrix):
            g = g.entries
        return g in self.index

    def __len__(self):
        return self.order

    def __iter__(self):
        return iter(self.elements)

    def rmatrix(self, g):
        return RMatrix(self.ring, g)

    def is_subgroup_of(self, other):
        return (self.n == other.n and self.ring == other.ring
                and all(g in other.index for g in self.elements))

    def key(self):
        return (self.n, self.ring.p, self.ring.m, self.name)

    def __repr__(self):
        return "SubgroupHandle(%s in GL_%d(%r), order %d)" % (
            self.name, self.n, self.ring, self.order)

    # -- closure certification and generators ------------------------

    def _verify(self):
        ident = self.identity()
        if ident not in self.index:
            raise ValueError("subgroup %s does not contain the identity" % self.name)
        for g in self.elements:
            if self.inv(g) not in self.index:
                raise ValueError("subgroup %s not closed under inverse at %r"
                                 % (self.name, g))
        self.generators()  # closure proof: regenerates the full element list
        if self.order <= self.CLOSURE_FULL_LIMIT:
            idx = self.index
            mul = self.mul
            for a in self.elements:
                for b in self.elements:
                    if mul(a, b) not in idx:
                        raise ValueError(
                            "subgroup %s not closed: %r * %r escapes"
                            % (self.name, a, b))

    def verify_closure_full(self):
        """Exhaustive |H|^2 product-closure check (used by property tests)."""
        idx = self.index
        mul = self.mul
        for a in self.elements:
            for b in self.elements:
                if mul(a, b) not in idx:
                    return False
        return True

    def generators(self):
        """Greedy deterministic generating set; certifies product closure."""
        if self._generators is not None:
            return self._generators
        gens = []
        closure = {self.identity()}
        mul = self.mul
        idx = self.index
        for cand in self.elements:
            if cand in closure:
                continue
            gens.append(cand)
            frontier = list(closure) + [cand]
            closure.add(cand)
            while frontier:
                nxt = []
                for x in frontier:
                    for g in gens:
                        y = mul(x, g)
                        if y not in closure:
                            if y not in idx:
                                raise ValueError(
                                    "subgroup %s not closed under product"
                                    % self.name)
                            closure.add(y)
                            nxt.append(y)
                frontier = nxt
            if len(closure) == self.order:
                break
        if len(closure) != self.order:
            raise ValueError("subgroup %s closure mismatch" % self.name)
        self._generators = gens
        return gens


_GL_CACHE = {}


def enumerate_gl(n, p, m, budget=None):
    """The full group GL_n(Z/p^m) as a SubgroupHandle.

    Cached on (n, p, m) only, so every caller shares one handle; the budget
    matters only for a computation that is not cached yet.
    """
    key = (n, p, m)
    got = _GL_CACHE.get(key)
    if got is None:
        ring = FiniteRing(p, m)
        elements = _gl_elements(n, p, m, budget)
        got = SubgroupHandle(n, ring, "GL", elements, check=False)
        _GL_CACHE[key] = got
    return got


# -- block predicates ------------------------------------------------


def _block_of(i, bounds):
    for b in range(len(bounds) - 1):
        if bounds[b] <= i < bounds[b + 1]:
            return b
    raise IndexError(i)


def _upper_block_triangular(g, n, bounds, mod):
    for i in range(n):
        bi = _block_of(i, bounds)
        for j in range(n):
            if _block_of(j, bounds) < bi and g[i * n + j] % mod != 0:
                return False
    return True


def _block_diag(g, n, bounds, mod):
    for i in range(n):
        bi = _block_of(i, bounds)
        for j in range(n):
            if _block_of(j, bounds) != bi and g[i * n + j] % mod != 0:
                return False
    return True


def _make_predicate(n, ring, spec):
    p = ring.p
    tag = spec[0]
    if tag == "P":
        I, level = spec[1], spec[2]
        bounds = I.bounds()
        mod = p ** level
        return lambda g: _upper_block_triangular(g, n, bounds, mod)
    if tag == "congruence":
        level = spec[1]
        mod = p ** level
        ident = mat_identity(n)
        return lambda g: all((x - e) % mod == 0 for x, e in zip(g, ident))
    if tag == "P1m":
        I, m = spec[1], spec[2]
        if I.r < 2:
            raise ValueError("P_I(1,m) needs r >= 2")
        nr = I.parts[-1]
        s = n - nr
        bounds_ip = I.truncate().bounds()
        pm = p ** m

        def pred(g):
            for i in range(s, n):
                for j in range(s):
                    if g[i * n + j] % pm != 0:
                        return False
            top = tuple(g[i * n + j] for i in range(s) for j in range(s))
            return _upper_block_triangular(top, s, bounds_ip, p)
        return pred
    if tag == "KI":
        I, m = spec[1], spec[2]
        nr = I.parts[-1]
        s = n - nr
        pm = p ** m

        def pred(g):
            for i in range(n):
                for j in range(n):
                    v = g[i * n + j]
                    if i < s and j < s or i >= s and j >= s:
                        target = 1 if i == j else 0
                        if (v - target) % pm != 0:
                            return False
                    elif i >= s and j < s:
                        if v % pm != 0:
                            return False
            return True
        return pred
    if tag == "unipotent":
        I = spec[1]
        bounds = I.bounds()

        def pred(g):
            for i in range(n):
                bi = _block_of(i, bounds)
                for j in range(n):
                    v = g[i * n + j]
                    bj = _block_of(j, bounds)
                    if bj < bi and v != 0:
                        return False
                    if bj == bi and v != (1 if i == j else 0):
                        return False
            return True
        return pred
    if tag == "levi":
        I = spec[1]
        bounds = I.bounds()
        return lambda g: _block_diag(g, n, bounds, ring.q)
    if tag == "mirabolic":
        last = tuple(1 if j == n - 1 else 0 for j in range(n))
        return lambda g: g[(n - 1) * n:] == last
    if tag == "borel":
        level = spec[1]
        bounds = Partition([1] * n).bounds()
        mod = p ** level
        return lambda g: _upper_block_triangular(g, n, bounds, mod)
    if tag == "custom":
        return spec[2]
    raise ValueError("unknown subgroup spec %r" % (spec,))


def _spec_name(spec):
    tag = spec[0]
    if tag == "custom":
        return spec[1]
    args = []
    for x in spec[1:]:
        if isinstance(x, Partition):
            args.append("I" + "_".join(map(str, x.parts)))
        else:
            args.append(str(x))
    return tag + ("(" + ",".join(args) + ")" if args else "")


def subgroup(ambient, spec):
    """Construct a named subgroup of `ambient` (a SubgroupHandle).

    spec is a tuple: ("P", I, level), ("P1m", I, m), ("KI", I, m),
    ("congruence", m), ("unipotent", I), ("levi", I), ("mirabolic",),
    ("borel", level), or ("custom", name, predicate).
    """
    tag = spec[0]
    M = ambient.ring.m
    for x in spec[1:]:
        if isinstance(x, int) and tag in ("P", "P1m", "KI", "congruence", "borel"):
            if x > M:
                raise ValueError("level %d exceeds ambient depth %d" % (x, M))
    name = _spec_name(spec)
    cache = ambient._cache.setdefault("subgroups", {})
    ck = name if tag != "custom" else None
    if ck is not None and ck in cache:
        return cache[ck]
    pred = _make_predicate(ambient.n, ambient.ring, spec)
    elements = [g for g in ambient.elements if pred(g)]
    H = SubgroupHandle(ambient.n, ambient.ring, name, elements)
    if ck is not None:
        cache[ck] = H
    return H


# -- Iwahori factorization -------------------------------------------


def iwahori_factorize(g, I, H):
    """Factor g in H as u_minus * levi * u_plus for the block structure I.

    g may be an RMatrix or a flat tuple; returns flat tuples.  Raises
    ValueError if g is not in H or a diagonal block pivot fails.
    """
    if isinstance(g, RMatrix):
        g = g.entries
    if g not in H.index:
        raise ValueError("element is not in the subgroup")
    n, ring = H.n, H.ring
    q = ring.q
    bounds = I.bounds()
    r = I.r
    A = [[g[i * n + j] for j in range(n)] for i in range(n)]
    L = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for b in range(r):
        lo, hi = bounds[b], bounds[b + 1]
        blk = tuple(A[i][j] for i in range(lo, hi) for j in range(lo, hi))
        try:
            blk_inv = mat_inv(blk, hi - lo, ring)
        except ZeroDivisionError:
            raise ValueError(
                "no Iwahori factorization: singular diagonal block %d at %r"
                % (b, g))
        for i in range(hi, n):
            # factor = A[i, lo:hi] * blk_inv
            fac = [sum(A[i][lo + k] * blk_inv[k * (hi - lo) + t]
                       for k in range(hi - lo)) % q for t in range(hi - lo)]
            if any(fac):
                for j in range(n):
                    s = sum(fac[t] * A[lo + t][j] for t in range(hi - lo))
                    A[i][j] = (A[i][j] - s) % q
                for j in range(n):
                    s = sum(fac[t] * L[lo + t][j] for t in range(hi - lo))
                    L[i][j] = (L[i][j] + s) % q
    u_minus = tuple(L[i][j] for i in range(n) for j in range(n))
    upper = tuple(A[i][j] for i in range(n) for j in range(n))
    # split upper = levi * u_plus
    levi = [0] * (n * n)
    for b in range(r):
        lo, hi = bounds[b], bounds[b + 1]
        for i in range(lo, hi):
            for j in range(lo, hi):
                levi[i * n + j] = upper[i * n + j]
    levi = tuple(levi)
    u_plus = mat_mul(mat_inv(levi, n, ring), upper, n, q)
    check = mat_mul(mat_mul(u_minus, levi, n, q), u_plus, n, q)
    assert check == g
    for part, tag in ((u_minus, "lower"), (levi, "levi"), (u_plus, "upper")):
        if part not in H.index:
            raise ValueError(
                "H lacks the Iwahori decomposition: %s factor %r of %r escapes H"
                % (tag, part, g))
    return u_minus, levi, u_plus


# -- lattice stabilizer ----------------------------------------------


def lattice_exponents(I, m):
    """Valuation vectors of the lattice chain characterizing P_I(1,m).

    L_k for 2 <= k <= r: blocks before k get valuation 0, blocks k..r-1 get 1,
    the last block gets m.  For r = 2 this is the single lattice
    O^{n_1} + (p^m O)^{n_2}.
    """
    r = I.r
    if r < 2:
        raise ValueError("need r >= 2")
    out = []
    for k in range(2, r + 1):
        exps = []
        for b in range(r):  # 0-based block index; paper's block b+1
            if b == r - 1:
                e = m
            elif b + 1 < k:
                e = 0
            else:
                e = 1
            exps.extend([e] * I.parts[b])
        out.append(tuple(exps))
    return out


def _stabilizes_lattice(g, ginv, n, exps, p, q):
    for mat in (g, ginv):
        for j in range(n):
            ej = exps[j]
            for i in range(n):
                need = exps[i] - ej
                if need > 0 and (mat[i * n + j] * p ** ej) % (p ** exps[i]) != 0:
                    return False
    return True


def lattice_stabilizer_check(I, m, M, p, budget=None):
    """True iff the enumerated stabilizer of the lattice chain equals P_I(1,m)."""
    if I.r < 2 or m > M:
        raise ValueError("need r >= 2 and m <= M")
    G = enumerate_gl(I.n, p, M, budget)
    exps_list = lattice_exponents(I, m)
    pred = _make_predicate(I.n, G.ring, ("P1m", I, m))
    q = G.ring.q
    n = I.n
    for g in G.elements:
        ginv = G.inv(g)
        stab = all(_stabilizes_lattice(g, ginv, n, exps, p, q)
                   for exps in exps_list)
        if stab != bool(pred(g)):
            return False
    return True
