"""Linear algebra and polynomial root extraction over a prime field F_l.

Backend for the class-algebra character table algorithm.  Matrices are numpy
int64 arrays with entries reduced mod l; l is always small enough that
products of two residues fit in int64.
"""

from __future__ import annotations

import random

import numpy as np


def mat_mod(a, l):
    return np.mod(a, l)


def matmul(a, b, l):
    return np.mod(a @ b, l)


def rref(a, l):
    """Reduced row echelon form mod l. Returns (R, pivot_columns)."""
    a = np.mod(np.array(a, dtype=np.int64), l)
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), l - 2, l)
        a[r] = (a[r] * inv) % l
        col = a[:, c].copy()
        col[r] = 0
        a = (a - np.outer(col, a[r])) % l
        pivots.append(c)
        r += 1
    return a[:r], pivots


def nullspace(a, l):
    """Basis (rows) of the right null space of a mod l."""
    a = np.array(a, dtype=np.int64)
    _rows, cols = a.shape
    r, pivots = rref(a, l)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, p in enumerate(pivots):
            basis[i, p] = (-int(r[j, f])) % l
    return basis


# -- dense polynomial arithmetic mod l (ascending coefficients) -------


def _trim(p):
    i = len(p)
    while i > 1 and p[i - 1] == 0:
        i -= 1
    return p[:i]


def poly_mul(p, q, l):
    out = np.convolve(p, q) % l
    return _trim(out)


def poly_divmod(p, q, l):
    p = np.array(p, dtype=np.int64) % l
    q = _trim(np.array(q, dtype=np.int64) % l)
    dq = len(q) - 1
    if dq == 0:
        inv = pow(int(q[0]), l - 2, l)
        return (p * inv) % l, np.zeros(1, dtype=np.int64)
    inv = pow(int(q[-1]), l - 2, l)
    rem = p.copy()
    if len(rem) - 1 < dq:
        return np.zeros(1, dtype=np.int64), _trim(rem)
    quot = np.zeros(len(rem) - dq, dtype=np.int64)
    for k in range(len(rem) - 1, dq - 1, -1):
        c = int(rem[k])
        if c == 0:
            continue
        f = (c * inv) % l
        quot[k - dq] = f
        rem[k - dq: k + 1] = (rem[k - dq: k + 1] - f * q) % l
    return _trim(quot), _trim(rem)


def poly_gcd(p, q, l):
    p = _trim(np.array(p, dtype=np.int64) % l)
    q = _trim(np.array(q, dtype=np.int64) % l)
    while len(q) > 1 or q[0] != 0:
        _, r = poly_divmod(p, q, l)
        p, q = q, r
    inv = pow(int(p[-1]), l - 2, l)
    return (p * inv) % l


def poly_powmod(base, exp, mod, l):
    result = np.array([1], dtype=np.int64)
    base = poly_divmod(base, mod, l)[1]
    while exp:
        if exp & 1:
            result = poly_divmod(poly_mul(result, base, l), mod, l)[1]
        base = poly_divmod(poly_mul(base, base, l), mod, l)[1]
        exp >>= 1
    return result


def poly_roots(p, l, rng):
    """All roots in F_l of p, which is assumed to split over F_l."""
    p = _trim(np.array(p, dtype=np.int64) % l)
    if len(p) == 1:
        return []
    # strip multiplicities via gcd with x^l - x
    xl = poly_powmod(np.array([0, 1], dtype=np.int64), l, p, l)
    sub = np.zeros(max(len(xl), 2), dtype=np.int64)
    sub[: len(xl)] = xl
    sub[1] = (sub[1] - 1) % l
    split = poly_gcd(p, _trim(sub), l)
    roots = []
    stack = [split]
    while stack:
        f = stack.pop()
        d = len(f) - 1
        if d == 0:
            continue
        if d == 1:
            roots.append((-int(f[0])) % l)
            continue
        while True:
            a = rng.randrange(l)
            shifted = np.array([a, 1], dtype=np.int64)
            g = poly_powmod(shifted, (l - 1) // 2, f, l)
            g = np.array(g, dtype=np.int64)
            g[0] = (g[0] - 1) % l
            g = poly_gcd(f, _trim(g), l) if (len(_trim(g)) > 1 or _trim(g)[0]) \
                else np.array([1], dtype=np.int64)
            if 0 < len(g) - 1 < d:
                stack.append(g)
                stack.append(poly_divmod(f, g, l)[0])
                break
    return sorted(set(roots))


def minpoly_of_vector(A, v, l):
    """Minimal polynomial of A relative to vector v (monic, ascending)."""
    d = A.shape[0]
    krylov = [v % l]
    w = v % l
    for _ in range(d):
        w = (w @ A.T) % l
        krylov.append(w.copy())
        _, piv = rref(np.array(krylov, dtype=np.int64), l)
        if len(piv) < len(krylov):
            break
    k = len(krylov) - 1
    K = np.array(krylov[:k], dtype=np.int64).T  # d x k
    target = (-krylov[k]) % l
    sol = solve(K, target, l)
    return np.array(list(sol) + [1], dtype=np.int64)


def solve(A, b, l):
    """One solution x of A x = b mod l (A: d x k)."""
    d, k = A.shape
    aug = np.concatenate([A, b.reshape(d, 1)], axis=1)
    R, piv = rref(aug, l)
    if k in piv:
        raise ArithmeticError("inconsistent linear system mod l")
    x = np.zeros(k, dtype=np.int64)
    for i, p in enumerate(piv):
        x[p] = R[i, k]
    return x


def eigenvalues(A, l, rng, tries=8):
    """Distinct eigenvalues of a diagonalizable matrix A over F_l.

    Uses minimal polynomials of random vectors; may miss eigenvalues with
    probability ~1/l per try, so callers should verify dimension counts.
    """
    d = A.shape[0]
    found = set()
    for _ in range(tries):
        v = np.array([rng.randrange(l) for _ in range(d)], dtype=np.int64)
        if not v.any():
            continue
        mp = minpoly_of_vector(A, v, l)
        found.update(poly_roots(mp, l, rng))
        total = 0
        spaces = []
        for lam in sorted(found):
            B = (A - lam * np.eye(d, dtype=np.int64)) % l
            ns = nullspace(B, l)
            total += ns.shape[0]
            spaces.append((lam, ns))
        if total == d:
            return spaces
    raise ArithmeticError("failed to split eigenspaces mod l")
