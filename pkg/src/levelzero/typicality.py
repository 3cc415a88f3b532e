"""Depth-m level-zero structure inside GL_n(Z/p^M).

Builds the type characters tau_I on parabolic preimages, the complement
characters U_m(tau_I), the Clifford orbit decomposition of the congruence
layer between P_I(1,m) and P_I(1,m+1), orbit normal forms with their
stabilizer conditions, the explicit rank-one layer characters, and the
atypicality-witness searches that verify the main splitting statements.
All arithmetic is exact.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from .chartheory import (ClassFunction, character_table, conjugacy_classes,
                         decompose, induce, inner_product, restrict)
from .cyclotomic import Cyclo
from .glnfq import (IrrLabel, _support_candidates, glq, is_cuspidal,
                    psi_additive)
from .ringmat import (Partition, enumerate_gl, iwahori_factorize,
                      mat_identity, subgroup)


# -- small exact matrix helpers over F_p (flat row-major tuples) ------


def _fmul(A, B, r, s, t, p):
    out = [0] * (r * t)
    for i in range(r):
        for k in range(s):
            c = A[i * s + k]
            if c:
                for j in range(t):
                    out[i * t + j] = (out[i * t + j] + c * B[k * t + j]) % p
    return tuple(out)


def _fid(k):
    return mat_identity(k)


def _finv(A, k, p):
    M = [list(A[i * k:(i + 1) * k]) + [1 if j == i else 0 for j in range(k)]
         for i in range(k)]
    for col in range(k):
        piv = next(r for r in range(col, k) if M[r][col] % p)
        M[col], M[piv] = M[piv], M[col]
        inv = pow(M[col][col], -1, p)
        M[col] = [(x * inv) % p for x in M[col]]
        for r in range(k):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [(x - f * y) % p for x, y in zip(M[r], M[col])]
    return tuple(M[i][k + j] for i in range(k) for j in range(k))


def _reduce_with_transforms(U, r, c, p):
    """Invertible P (r x r), Q (c x c) with P U Q = [[1_t, 0], [0, 0]]."""
    M = [list(U[i * c:(i + 1) * c]) for i in range(r)]
    P = [[1 if j == i else 0 for j in range(r)] for i in range(r)]
    Q = [[1 if j == i else 0 for j in range(c)] for i in range(c)]
    t = 0
    while True:
        piv = None
        for i in range(t, r):
            for j in range(t, c):
                if M[i][j] % p:
                    piv = (i, j)
                    break
            if piv:
                break
        if piv is None:
            break
        i0, j0 = piv
        M[t], M[i0] = M[i0], M[t]
        P[t], P[i0] = P[i0], P[t]
        for row in M + Q:
            row[t], row[j0] = row[j0], row[t]
        inv = pow(M[t][t], -1, p)
        M[t] = [(x * inv) % p for x in M[t]]
        P[t] = [(x * inv) % p for x in P[t]]
        for i in range(r):
            if i != t and M[i][t]:
                f = M[i][t]
                M[i] = [(x - f * y) % p for x, y in zip(M[i], M[t])]
                P[i] = [(x - f * y) % p for x, y in zip(P[i], P[t])]
        for j in range(c):
            if j != t and M[t][j]:
                f = M[t][j]
                for row in M + Q:
                    row[j] = (row[j] - f * row[t]) % p
        t += 1
    Pf = tuple(P[i][j] for i in range(r) for j in range(r))
    Qf = tuple(Q[i][j] for i in range(c) for j in range(c))
    want = tuple(1 if i == j and i < t else 0
                 for i in range(r) for j in range(c))
    assert _fmul(_fmul(Pf, U, r, r, c, p), Qf, r, c, c, p) == want
    return Pf, Qf, t


# -- level-zero inertial classes --------------------------------------


@dataclass(frozen=True, order=True)
class InertialClassLZ:
    q: int
    parts: tuple  # sorted tuple of (size, cuspidal IrrLabel)

    @property
    def n(self):
        return sum(k for k, _lab in self.parts)

    def partition(self):
        return Partition(tuple(k for k, _lab in self.parts))

    def cuspidals(self):
        return [lab for _k, lab in self.parts]

    def describe(self):
        return "{" + ", ".join("(%d, %s)" % (k, lab.name())
                               for k, lab in self.parts) + "}"

    def __repr__(self):
        return "InertialClassLZ(q=%d, %s)" % (self.q, self.describe())


def make_class(q, pairs):
    parts = tuple(sorted((int(k), lab) for k, lab in pairs))
    for k, lab in parts:
        if lab.n != k or not is_cuspidal(lab):
            raise ValueError("non-cuspidal entry %r of size %d" % (lab, k))
    return InertialClassLZ(q, parts)


def inertial_eq(a, b):
    if a.q != b.q or a.n != b.n:
        raise ValueError("inertial classes of different shape")
    return a.parts == b.parts


def level_zero_classes(n, q):
    """Every level-zero class of total size n, deterministically ordered."""
    return [InertialClassLZ(q, supp.parts)
            for supp in _support_candidates(n, q)]


# -- tau_I and U_m ----------------------------------------------------


@dataclass
class TauI:
    I: Partition
    labels: tuple
    M: int
    p: int
    G: object          # GL_n(Z/p^M) handle
    P1: object         # P_I(1) handle
    chi: ClassFunction
    _cache: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.I.n

    def dim(self):
        return self.chi.dim().integer_value()

    def inertial_class(self):
        return make_class(self.p, tuple(zip(self.I.parts, self.labels)))


def _block_value_function(I, labels, p):
    """g -> prod tau_i(diagonal block i mod p), a character wherever the
    block-diagonal reduction is a homomorphism."""
    bounds = I.bounds()
    n = I.n
    chars = [lab.char() for lab in labels]
    ccs = [conjugacy_classes(glq(k, p)) for k in I.parts]

    def value(g):
        out = None
        for b in range(I.r):
            lo, hi = bounds[b], bounds[b + 1]
            blk = tuple(g[i * n + j] % p
                        for i in range(lo, hi) for j in range(lo, hi))
            v = chars[b].values[ccs[b].class_of[blk]]
            out = v if out is None else out * v
        return out

    return value


def build_tau_I(I, cuspidals, M):
    I = I if isinstance(I, Partition) else Partition(I)
    cuspidals = tuple(cuspidals)
    if len(cuspidals) != I.r:
        raise ValueError("one cuspidal label per part required")
    p = cuspidals[0].q
    for k, lab in zip(I.parts, cuspidals):
        if lab.n != k or not is_cuspidal(lab):
            raise ValueError("label %r is not cuspidal of size %d" % (lab, k))
    G = enumerate_gl(I.n, p, M)
    P1 = subgroup(G, ("P", I, 1))
    chi = ClassFunction.from_callable(P1, _block_value_function(I, cuspidals, p))
    tau = TauI(I=I, labels=cuspidals, M=M, p=p, G=G, P1=P1, chi=chi)
    want = 1
    for lab in cuspidals:
        want *= lab.dim()
    assert tau.dim() == want
    return tau


def tau_on_level(tau, m):
    """tau_I extended to P_I(m) (trivial on the unipotent layers)."""
    key = ("tau_on", m)
    if key not in tau._cache:
        if not 1 <= m <= tau.M:
            raise ValueError("level m=%d outside 1..%d" % (m, tau.M))
        Pm = subgroup(tau.G, ("P", tau.I, m))
        chi = ClassFunction.from_callable(
            Pm, _block_value_function(tau.I, tau.labels, tau.p))
        tau._cache[key] = (Pm, chi)
    return tau._cache[key]


def ind_level(tau, m):
    """ind_{P_I(m)}^{GL_n(Z/p^M)} tau_I as a class function."""
    key = ("ind", m)
    if key not in tau._cache:
        Pm, chi = tau_on_level(tau, m)
        tau._cache[key] = induce(Pm, chi, tau.G)
    return tau._cache[key]


def u_m_character(tau, m):
    """U_m(tau_I) = ind_{P_I(m)} tau_I - ind_{P_I(1)} tau_I."""
    return ind_level(tau, m) - ind_level(tau, 1)


def multiplicity_one_check(tau, m):
    """tau_I occurs exactly once in ind_{P_I(m)}^{P_I(1)} tau_I."""
    Pm, chi = tau_on_level(tau, m)
    ind = induce(Pm, chi, tau.P1)
    return inner_product(ind, tau.chi) == 1


# -- Clifford layer ---------------------------------------------------


def _eta_value(A, g, n, s, m, p):
    """Value at g of the layer character attached to A (s x n_r over F_p)."""
    nr = n - s
    acc = 0
    for j in range(nr):
        for i in range(s):
            a = A[i * nr + j]
            if a:
                c = g[(s + j) * n + i]
                if c % (p ** m):
                    raise ValueError("element outside the layer domain")
                acc += a * ((c // (p ** m)) % p)
    return psi_additive(p, acc)


def _levi_pair(g, n, s, p):
    g1 = tuple(g[i * n + j] % p for i in range(s) for j in range(s))
    g2 = tuple(g[i * n + j] % p for i in range(s, n) for j in range(s, n))
    return g1, g2


def _act_pair(g1, g2, A, s, nr, p):
    """(g1, g2) . A = g1 A g2^{-1}."""
    return _fmul(_fmul(g1, A, s, s, nr, p), _finv(g2, nr, p), s, nr, nr, p)


@dataclass
class CliffordOrbit:
    I: Partition
    m: int
    A: tuple               # min-key representative, flat s x n_r over F_p
    orbit: tuple           # all matrices in the orbit, sorted
    stabilizer: object     # Z(eta) as a subgroup handle of P_I(1,m)
    tag: dict              # {"condition": "zero"|"cond1"|"cond2", ...}

    def is_zero(self):
        return not any(self.A)


def clifford_orbits(I, m, M, p, budget=None):
    """Orbits of layer characters between P_I(1,m) and P_I(1,m+1),
    with stabilizers and normal-form condition tags."""
    I = I if isinstance(I, Partition) else Partition(I)
    if I.r < 2:
        raise ValueError("need at least two blocks")
    if m + 1 > M:
        raise ValueError("layer at level m needs container depth >= m+1")
    n = I.n
    nr = I.parts[-1]
    s = n - nr
    G = enumerate_gl(n, p, M, budget)
    P = subgroup(G, ("P1m", I, m))
    K = subgroup(G, ("KI", I, m))
    _verify_layer_equivariance(I, m, M, p, P, K)

    pairs = []
    for g in P.generators():
        g1, g2 = _levi_pair(g, n, s, p)
        pairs.append((g1, g2))
    space = [tuple(v) for v in itertools.product(range(p), repeat=s * nr)]
    seen = {}
    orbits = []
    for A in space:  # ascending, so orbit reps are min-key
        if A in seen:
            continue
        orbit = {A}
        frontier = [A]
        while frontier:
            nxt = []
            for B in frontier:
                for g1, g2 in pairs:
                    Bp = _act_pair(g1, g2, B, s, nr, p)
                    if Bp not in orbit:
                        orbit.add(Bp)
                        nxt.append(Bp)
            frontier = nxt
        for B in orbit:
            seen[B] = A
        if any(A):
            _, tag = orbit_normal_form(A, I, p)
        else:
            tag = {"condition": "zero"}
        stab = _stabilizer_handle(P, A, n, s, p, I, m)
        orbits.append(CliffordOrbit(I=I, m=m, A=A, orbit=tuple(sorted(orbit)),
                                    stabilizer=stab, tag=tag))
    assert sum(len(o.orbit) for o in orbits) == p ** (s * nr)
    assert orbits[0].is_zero() and len(orbits[0].stabilizer) == len(P)
    return orbits


def _stabilizer_handle(P, A, n, s, p, I, m):
    nr = n - s

    def pred(g):
        g1, g2 = _levi_pair(g, n, s, p)
        return _act_pair(g1, g2, A, s, nr, p) == A

    name = "Z(%s;I=%s,m=%d)" % ("".join(map(str, A)), I.parts, m)
    return subgroup(P, ("custom", name, pred))


def _verify_layer_equivariance(I, m, M, p, P, K):
    """theta equivariance and normality of the layer, on generators."""
    n = I.n
    nr = I.parts[-1]
    s = n - nr
    kgens = K.generators()
    space = [tuple(v) for v in itertools.product(range(p), repeat=s * nr)]
    for g in P.generators():
        ginv = P.inv(g)
        g1, g2 = _levi_pair(g, n, s, p)
        conj = []
        for x in kgens:
            y = P.mul(P.mul(ginv, x), g)
            if y not in K.index:
                raise AssertionError("layer subgroup is not normal: %r" % (g,))
            conj.append(y)
        for A in space:
            Ap = _act_pair(g1, g2, A, s, nr, p)
            for x, y in zip(kgens, conj):
                if _eta_value(Ap, x, n, s, m, p) != _eta_value(A, y, n, s, m, p):
                    raise AssertionError("layer action fails equivariance")


def _trace_form(A, C, rows, cols, p):
    acc = 0
    for i in range(rows):
        for j in range(cols):
            acc += A[i * cols + j] * C[j * rows + i]
    return acc % p


def trace_pairing_injective(rows, cols, p):
    """The map A -> psi(tr(A .)) hits every character exactly once.

    The map is additive in A (checked on a sample below), so bijectivity
    onto the p^(rows*cols) characters reduces to a trivial kernel: no
    nonzero A pairs to zero with every standard basis matrix."""
    space = [tuple(v) for v in itertools.product(range(p), repeat=rows * cols)]
    basis = []
    for j in range(cols):
        for i in range(rows):
            E = [0] * (rows * cols)
            E[j * rows + i] = 1
            basis.append(tuple(E))
    for A in space:
        if any(A) and all(_trace_form(A, E, rows, cols, p) == 0
                          for E in basis):
            return False
    for A in space[:: max(1, len(space) // 16)]:
        for B in space[:: max(1, len(space) // 16)]:
            S = tuple((a + b) % p for a, b in zip(A, B))
            for E in basis:
                lhs = _trace_form(S, E, rows, cols, p)
                rhs = (_trace_form(A, E, rows, cols, p)
                       + _trace_form(B, E, rows, cols, p)) % p
                if psi_additive(p, lhs) != psi_additive(p, rhs):
                    return False
    return True


# -- orbit normal form and the stabilizer conditions ------------------


def orbit_normal_form(A, I, p):
    """Representative of the orbit of A with its condition tag.

    The tag records which block carries the pivot data: condition cond2
    when the last nonzero row-block has full square rank, else cond1 with
    the preserved-kernel certificate."""
    I = I if isinstance(I, Partition) else Partition(I)
    if not any(A):
        raise ValueError("zero matrix has no normal form")
    nr = I.parts[-1]
    s = I.n - nr
    bounds = I.truncate().bounds()
    r1 = I.r - 1
    l = max(b for b in range(r1)
            if any(A[i * nr + j]
                   for i in range(bounds[b], bounds[b + 1])
                   for j in range(nr)))
    nl = I.parts[l]
    block = tuple(A[i * nr + j]
                  for i in range(bounds[l], bounds[l + 1]) for j in range(nr))
    P_l, Q, t = _reduce_with_transforms(block, nl, nr, p)
    g1 = [0] * (s * s)
    for b in range(r1):
        lo, hi = bounds[b], bounds[b + 1]
        for i in range(lo, hi):
            for j in range(lo, hi):
                if b == l:
                    g1[i * s + j] = P_l[(i - lo) * nl + (j - lo)]
                else:
                    g1[i * s + j] = 1 if i == j else 0
    rep = _fmul(_fmul(tuple(g1), A, s, s, nr, p), Q, s, nr, nr, p)
    if t == nl == nr:
        tag = {"condition": "cond2", "i": l + 1, "l": l + 1, "t": t}
    elif t < nl:
        tag = {"condition": "cond1", "j": l + 1, "l": l + 1, "t": t,
               "side": "row"}
    else:
        tag = {"condition": "cond1", "j": I.r, "l": l + 1, "t": t,
               "side": "column"}
    return rep, tag


def certify_orbit_condition(A, I, p):
    """Exhaustively check the tagged condition on the block-diagonal
    stabilizer of the normal form.  Returns the stabilizer size."""
    I = I if isinstance(I, Partition) else Partition(I)
    rep, tag = orbit_normal_form(A, I, p)
    nr = I.parts[-1]
    s = I.n - nr
    bounds = I.truncate().bounds()
    r1 = I.r - 1
    l = tag["l"] - 1
    t = tag["t"]
    nl = I.parts[l]
    block_groups = [list(glq(k, p).elements) for k in I.truncate().parts]
    gl_last = list(glq(nr, p).elements)
    count = 0
    for combo in itertools.product(*block_groups):
        g1 = [0] * (s * s)
        for b in range(r1):
            lo, hi = bounds[b], bounds[b + 1]
            blk = combo[b]
            kb = I.parts[b]
            for i in range(kb):
                for j in range(kb):
                    g1[(lo + i) * s + (lo + j)] = blk[i * kb + j]
        g1 = tuple(g1)
        for B in gl_last:
            if _act_pair(g1, B, rep, s, nr, p) != rep:
                continue
            count += 1
            Mll = combo[l]
            if tag["condition"] == "cond2":
                if Mll != B:
                    raise AssertionError("cond2 fails: p_l != p_r on stabilizer")
            elif tag["side"] == "row":
                # M_ll must preserve span{e_{t+1},...} acting on row vectors
                for i in range(t, nl):
                    for j in range(t):
                        if Mll[i * nl + j]:
                            raise AssertionError("cond1(row) kernel not kept")
            else:
                # B must preserve the column kernel span{e_{t+1},...}
                for i in range(t):
                    for j in range(t, nr):
                        if B[i * nr + j]:
                            raise AssertionError("cond1(col) kernel not kept")
    assert count, "stabilizer enumeration came up empty"
    return count


# -- the Clifford decomposition identity ------------------------------


def clifford_decomposition_check(I, m, M, p, budget=None):
    """ind_{P_I(1,m+1)}^{P_I(1,m)}(id) decomposes as the identity character
    plus one induced package per nonzero orbit; the identity occurs once."""
    I = I if isinstance(I, Partition) else Partition(I)
    n = I.n
    nr = I.parts[-1]
    s = n - nr
    G = enumerate_gl(n, p, M, budget)
    P = subgroup(G, ("P1m", I, m))
    Psub = subgroup(G, ("P1m", I, m + 1))
    K = subgroup(G, ("KI", I, m))
    one_sub = ClassFunction.trivial(Psub)
    lhs = induce(Psub, one_sub, P)
    if inner_product(lhs, ClassFunction.trivial(P)) != 1:
        return False
    total = ClassFunction.zero(P)
    for orb in clifford_orbits(I, m, M, p, budget):
        Z = orb.stabilizer
        ccZ = conjugacy_classes(Z)
        kelts = K.elements
        inv_k = Fraction(1, len(kelts))
        vals = []
        for z in ccZ.reps:
            acc = Cyclo.zero()
            for k in kelts:
                acc = acc + (_eta_value(orb.A, k, n, s, m, p).conj()
                             * lhs.value_of(P.mul(z, k)))
            vals.append(acc * inv_k)
        theta = ClassFunction(Z, vals)
        total = total + induce(Z, theta, P)
    return total == lhs


# -- explicit layer character in the (n, 1) shape ---------------------


def u_eta_character_n1(I, m, M, p, a=1, budget=None):
    """The explicit character of the stabilizer Z(eta) when n_r = 1,
    attached to the representative a.e_s; normalized by the top Levi
    block so that it is multiplicative."""
    I = I if isinstance(I, Partition) else Partition(I)
    if I.parts[-1] != 1:
        raise ValueError("explicit layer character needs last part 1")
    if a % p == 0:
        raise ValueError("trivial layer character has no extension here")
    n = I.n
    s = n - 1
    G = enumerate_gl(n, p, M, budget)
    P = subgroup(G, ("P1m", I, m))
    A = tuple(a if i == s - 1 else 0 for i in range(s))
    Z = _stabilizer_handle(P, A, n, s, p, I, m)
    pm = p ** m

    def value(g):
        row = tuple((g[s * n + j] // pm) % p for j in range(s))
        g1 = tuple(g[i * n + j] % p for i in range(s) for j in range(s))
        coord = _fmul(_fmul(row, _finv(g1, s, p), 1, s, s, p), A, 1, s, 1, p)
        return psi_additive(p, coord[0])

    return ClassFunction.from_callable(Z, value)


# -- Casselman pieces for GL_2 ----------------------------------------


def _varpi_on_entry(varpi):
    cc1 = conjugacy_classes(glq(1, varpi.q))
    chi = varpi.char()

    def val(x):
        return chi.values[cc1.class_of[(x % varpi.q,)]]

    return val


def casselman_u_i(varpi, i, M, budget=None):
    """The depth-i piece of the principal congruence filtration for GL_2
    with the level-zero central character varpi (a GL_1 label)."""
    p = varpi.q
    if not 1 <= i <= M:
        raise ValueError("depth index i=%d outside 1..%d" % (i, M))
    G = enumerate_gl(2, p, M, budget)
    w = _varpi_on_entry(varpi)

    def ind_from_b(level):
        B = subgroup(G, ("borel", level))
        chi = ClassFunction.from_callable(B, lambda g: w(g[0]))
        return induce(B, chi, G)

    out = ind_from_b(i)
    if i > 1:
        out = out - ind_from_b(i - 1)
    return out


def casselman_clifford_form(varpi, i, M, a=1, budget=None):
    """The same piece realized from the depth-(i-1) layer character."""
    p = varpi.q
    if i < 2 or i > M:
        raise ValueError("the layer form needs 2 <= i <= M")
    m = i - 1
    G = enumerate_gl(2, p, M, budget)
    u_eta = u_eta_character_n1(Partition((1, 1)), m, M, p, a, budget)
    Z = u_eta.group
    w = _varpi_on_entry(varpi)
    chi = u_eta * ClassFunction.from_callable(Z, lambda g: w(g[0]))
    return induce(Z, chi, G)


# -- twisting ---------------------------------------------------------


def twist_label(lab, chi):
    """lab tensored with chi(det), as a label of the same group."""
    from .ringmat import mat_det
    if chi.n != 1 or chi.q != lab.q:
        raise ValueError("twist requires a GL_1 character over the same field")
    q = lab.q
    G = glq(lab.n, q)
    cc = conjugacy_classes(G)
    wv = _varpi_on_entry(chi)
    base = lab.char()
    vals = [base.values[i] * wv(mat_det(cc.reps[i], lab.n, q))
            for i in range(cc.r)]
    key = tuple(v.key() for v in vals)
    for idx, irr in enumerate(character_table(G).irreducibles):
        if irr.key() == key:
            return IrrLabel(q, lab.n, idx)
    raise AssertionError("twisted character is not in the table")


def twist_class(s, chi):
    """Twist an inertial class or a TauI by a depth-zero character of the
    determinant."""
    if isinstance(s, InertialClassLZ):
        return make_class(s.q, [(k, twist_label(lab, chi))
                                for k, lab in s.parts])
    if isinstance(s, TauI):
        return build_tau_I(s.I, [twist_label(lab, chi) for lab in s.labels],
                           s.M)
    raise TypeError("cannot twist %r" % (s,))


# -- Iwahori induction identity ---------------------------------------


def _strict_block_pred(n, bounds, upper):
    from .ringmat import _block_of

    def pred(g):
        for i in range(n):
            bi = _block_of(i, bounds)
            for j in range(n):
                bj = _block_of(j, bounds)
                v = g[i * n + j]
                if bi == bj:
                    if v != (1 if i == j else 0):
                        return False
                elif (bj < bi) if upper else (bj > bi):
                    if v != 0:
                        return False
        return True

    return pred


def iwahori_induction_check(J1, J2, lam, I):
    """ind_{J2}^{J1} lam equals the inflation of ind on the Levi layers."""
    I = I if isinstance(I, Partition) else Partition(I)
    n = J1.n
    if not J2.is_subgroup_of(J1):
        raise ValueError("J2 is not contained in J1")
    bounds = I.bounds()
    for upper in (True, False):
        pred = _strict_block_pred(n, bounds, upper)
        side1 = {g for g in J1.elements if pred(g)}
        side2 = {g for g in J2.elements if pred(g)}
        if side1 != side2:
            raise ValueError("unipotent parts of J1 and J2 differ (upper=%s)"
                             % upper)
        dim = lam.dim()
        for u in side2:
            if lam.value_of(u) != dim:
                raise ValueError("lam is not trivial on the unipotent part")
    M1 = subgroup(J1, ("levi", I))
    M2 = subgroup(J2, ("levi", I))
    indM = induce(M2, restrict(lam, M2), M1)
    lhs = induce(J2, lam, J1)
    ccJ1 = conjugacy_classes(J1)
    vals = []
    for g in ccJ1.reps:
        _um, l, _up = iwahori_factorize(g, I, J1)
        vals.append(indM.value_of(l))
    return lhs == ClassFunction(J1, vals)


# -- witnesses and the theorem / corollary verifiers ------------------


_CLASS_IND_CACHE = {}


def class_induction(t, m, M, budget=None):
    """ind_{P_J(m)}^{GL_n(Z/p^M)} tau_J for the level-zero class t."""
    key = (t, m, M, budget)
    if key not in _CLASS_IND_CACHE:
        tau = build_tau_I(t.partition(), t.cuspidals(), M)
        _CLASS_IND_CACHE[key] = ind_level(tau, m)
    return _CLASS_IND_CACHE[key]


def _central_char_label(c):
    """The GL_1 label matching the central character of the cuspidal c."""
    from .glnfq import all_labels, central_character
    cc1 = conjugacy_classes(glq(1, c.q))
    target = central_character(c)
    for lab in all_labels(1, c.q):
        chi = lab.char()
        if all(chi.values[cc1.class_of[(a,)]] == target[a]
               for a in range(1, c.q)):
            return lab
    raise AssertionError("central character missing from GL_1 table")


def _block_options(t, M, budget=None):
    """Per block: the characters of GL_k(Z/p^M) that occur in restrictions
    of level-zero representations with that cuspidal datum.  Size-1 and
    inflated blocks always; cuspidal GL_2 blocks additionally contribute
    their depth-j pieces for 2 <= j <= M."""
    p = t.q
    opts = []
    for k, lab in t.parts:
        Gk = enumerate_gl(k, p, M, budget)
        cck = conjugacy_classes(Gk)
        base = lab.char()
        ccq = conjugacy_classes(glq(k, p))
        infl = ClassFunction(
            Gk, [base.values[ccq.class_of[tuple(x % p for x in g)]]
                 for g in cck.reps])
        block = [("t", infl)]
        if k == 2:
            varpi = _central_char_label(lab)
            for j in range(2, M + 1):
                block.append(("U%d" % j, casselman_u_i(varpi, j, M, budget)))
        opts.append(block)
    return opts


def _occurrence_characters(t, M, budget=None):
    """All (depth, descriptor, character) occurrence data for the class t,
    in deterministic search order: plain inductions first, then variants
    with some blocks replaced by their positive-depth pieces."""
    key = (t, M, budget)
    if key in _CLASS_IND_CACHE:
        return _CLASS_IND_CACHE[key]
    p = t.q
    J = t.partition()
    n = J.n
    G = enumerate_gl(n, p, M, budget)
    opts = _block_options(t, M, budget)
    combos = sorted(itertools.product(*opts),
                    key=lambda cb: (sum(d != "t" for d, _c in cb),
                                    tuple(d for d, _c in cb)))
    out = []
    for m in range(1, M + 1):
        for combo in combos:
            desc = "+".join(d for d, _c in combo)
            if all(d == "t" for d, _c in combo):
                out.append((m, desc, class_induction(t, m, M, budget)))
                continue
            out.append((m, desc, _extended_induction(G, J, m, combo, p)))
    _CLASS_IND_CACHE[key] = out
    return out


def _extended_induction(G, J, m, combo, p):
    """ind_{P_J(m)}^G of the boxed block characters, extended through the
    Iwahori factorization (trivial on the off-diagonal layers)."""
    n = J.n
    bounds = J.bounds()
    Pm = subgroup(G, ("P", J, m))
    block_data = []
    for b, (_d, chi) in enumerate(combo):
        block_data.append((bounds[b], bounds[b + 1], chi, chi.cc))

    def value(g):
        _um, l, _up = iwahori_factorize(g, J, Pm)
        out = None
        for lo, hi, chi, cc in block_data:
            blk = tuple(l[i * n + j] for i in range(lo, hi)
                        for j in range(lo, hi))
            v = chi.values[cc.class_of[blk]]
            out = v if out is None else out * v
        return out

    chi = ClassFunction(Pm, [value(g) for g in conjugacy_classes(Pm).reps])
    return induce(Pm, chi, G)


def atypicality_witness(gamma, s, M, budget=None, enhanced=True):
    """First level-zero class t != s (with depth and block variant) whose
    occurrence set contains gamma, or None.  Deterministic search order.

    With enhanced=False only the plain inductions ind_{P_J(m')} tau_J are
    searched.  The enhanced variants replace cuspidal GL_2 blocks by
    their positive-depth pieces; those pieces carry a different (deeper)
    inducing datum, so they count as evidence *against* a constituent
    pinning down the class s, but occurrence in them is not occurrence
    in the level-zero class t itself."""
    G = gamma.group
    p = G.ring.p
    for t in level_zero_classes(G.n, p):
        if t.parts == s.parts:
            continue
        for m, desc, chi in _occurrence_characters(t, M, budget):
            if not enhanced and desc.replace("t", "").replace("+", ""):
                continue
            if inner_product(gamma, chi) > 0:
                return (t, m, desc)
    return None


def _split_identity_holds(tau, m):
    """U_m(tau_I) = ind_{P_(s,nr)(m)}{U_m(tau_I') (x) tau_r}
    + ind_{P_I(1)}(U^0_(1,m)(tau_I)) as characters."""
    I, p, M, G = tau.I, tau.p, tau.M, tau.G
    n = I.n
    nr = I.parts[-1]
    s = n - nr
    lhs = u_m_character(tau, m)

    P1m = subgroup(G, ("P1m", I, m))
    chi_1m = ClassFunction.from_callable(
        P1m, _block_value_function(I, tau.labels, p))
    term2 = induce(P1m, chi_1m, G) - ind_level(tau, 1)

    tau_sub = build_tau_I(I.truncate(), tau.labels[:-1], M)
    um_sub = u_m_character(tau_sub, m)
    two = Partition((s, nr))
    Pm2 = subgroup(G, ("P", two, m))
    cc_sub = conjugacy_classes(tau_sub.G)
    cc_r = conjugacy_classes(glq(nr, p))
    tau_r = tau.labels[-1].char()

    def value(g):
        _um, l, _up = iwahori_factorize(g, two, Pm2)
        top = tuple(l[i * n + j] for i in range(s) for j in range(s))
        bot = tuple(l[i * n + j] % p for i in range(s, n) for j in range(s, n))
        return um_sub.values[cc_sub.class_of[top]] * tau_r.values[cc_r.class_of[bot]]

    term1 = induce(Pm2, ClassFunction(Pm2, [value(g) for g
                                            in conjugacy_classes(Pm2).reps]),
                   G)
    return lhs == term1 + term2


REPORT_SCHEMA = 1


@dataclass
class TypicalityReport:
    config: dict
    constituents: list     # atypical side (U_m)
    typical: list          # constituents of ind_{P_I(1)} tau_I
    checks: dict
    passed: bool

    def to_json(self):
        payload = {
            "schema": REPORT_SCHEMA,
            "config": self.config,
            "u_m_constituents": self.constituents,
            "typical_constituents": self.typical,
            "checks": self.checks,
            "verdict": "PASS" if self.passed else "FAIL",
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def _witness_json(w):
    if w is None:
        return None
    t, depth, desc = w
    return {"class": t.describe(), "depth": depth, "blocks": desc}


def verify_main_theorem(I, cuspidals, m, M, budget=None):
    """Decompose U_m(tau_I) and attach an atypicality witness to every
    irreducible constituent; re-derive the two-term splitting when the
    partition is proper."""
    tau = build_tau_I(I, cuspidals, M)
    I = tau.I
    s_class = tau.inertial_class()
    config = {"n": I.n, "p": tau.p, "M": M, "m": m,
              "partition": list(I.parts),
              "cuspidals": [lab.name() for lab in tau.labels]}
    checks = {"multiplicity_one": multiplicity_one_check(tau, m)}
    constituents = []
    passed = checks["multiplicity_one"]
    if I.r == 1:
        checks["vacuous"] = True
        return TypicalityReport(config, [], [], checks, passed)
    table = character_table(tau.G)
    um = u_m_character(tau, m)
    dec = decompose(um, table)
    if not dec.genuine:
        checks["u_m_genuine"] = False
        return TypicalityReport(config, [], [], checks, False)
    checks["u_m_genuine"] = True
    checks["split_identity"] = _split_identity_holds(tau, m)
    passed = passed and checks["split_identity"]
    for idx, mult in enumerate(dec.multiplicities):
        if not mult:
            continue
        gamma = table.irreducibles[idx]
        w = atypicality_witness(gamma, s_class, M, budget)
        if w is None:
            passed = False
        constituents.append({
            "label": gamma.label,
            "dim": int(gamma.dim().rational_value()),
            "multiplicity": int(mult),
            "witness": _witness_json(w),
        })
    if any(c["witness"] is None for c in constituents):
        passed = False
    return TypicalityReport(config, constituents, [], checks, passed)


def verify_corollary(I, cuspidals, M, budget=None):
    """Constituents of ind_{P_I(1)} tau_I have depth-independent
    multiplicities and no witness in any other level-zero class."""
    tau = build_tau_I(I, cuspidals, M)
    I = tau.I
    s_class = tau.inertial_class()
    config = {"n": I.n, "p": tau.p, "M": M,
              "partition": list(I.parts),
              "cuspidals": [lab.name() for lab in tau.labels]}
    table = character_table(tau.G)
    base = decompose(ind_level(tau, 1), table)
    checks = {"base_genuine": base.genuine}
    typical = []
    passed = base.genuine
    per_level = [decompose(ind_level(tau, m), table)
                 for m in range(1, M + 1)]
    for idx, mult in enumerate(base.multiplicities):
        if not mult:
            continue
        gamma = table.irreducibles[idx]
        mults = [int(d.multiplicities[idx]) for d in per_level]
        constant = all(x == mults[0] for x in mults)
        w = atypicality_witness(gamma, s_class, M, budget, enhanced=False)
        if not constant or w is not None:
            passed = False
        typical.append({
            "label": gamma.label,
            "dim": int(gamma.dim().rational_value()),
            "multiplicities": mults,
            "constant": constant,
            "witness": _witness_json(w),
        })
    checks["all_constant"] = all(t["constant"] for t in typical)
    checks["no_foreign_witness"] = all(t["witness"] is None for t in typical)
    return TypicalityReport(config, [], typical, checks, passed)
