import pytest

from levelzero.ringmat import (BudgetExceeded, FiniteRing, Partition,
                               enumerate_gl, gl_order, iwahori_factorize,
                               lattice_stabilizer_check, mat_identity, mat_inv,
                               mat_mul, subgroup)


def test_ring_units():
    R = FiniteRing(3, 2)
    assert R.q == 9
    assert sorted(R.units()) == [u for u in range(9) if u % 3]
    for u in R.units():
        assert (u * R.inv(u)) % 9 == 1


def test_partition():
    I = Partition((2, 1))
    assert I.n == 3 and I.r == 2
    assert list(I.bounds()) == [0, 2, 3]
    assert I.truncate().parts == (2,)


def test_gl_order_matches_enumeration():
    for n, p, m in ((1, 3, 2), (2, 2, 1), (2, 3, 1), (2, 2, 2)):
        G = enumerate_gl(n, p, m)
        assert G.order == gl_order(n, G.ring)
        assert len(set(G.elements)) == G.order


def test_enumerate_gl_shares_handles():
    # one cached handle per (n, p, m) regardless of how budget is passed
    assert enumerate_gl(2, 2, 1) is enumerate_gl(2, 2, 1, None)
    assert enumerate_gl(2, 2, 1) is enumerate_gl(2, 2, 1, 10**6)


def test_matrix_inverse():
    ring = FiniteRing(2, 2)
    G = enumerate_gl(2, 2, 2)
    for g in G.elements[:50]:
        inv = mat_inv(g, 2, ring)
        assert mat_mul(g, inv, 2, 4) == mat_identity(2)


def test_budget_guard():
    with pytest.raises(BudgetExceeded):
        enumerate_gl(3, 3, 2, budget=10)


def test_subgroups_of_gl2_z4():
    G = enumerate_gl(2, 2, 2)
    I = Partition((1, 1))
    B = subgroup(G, ("borel", 1))
    P1 = subgroup(G, ("P", I, 1))
    assert B.order == P1.order == G.order // 3  # index = q + 1
    K2 = subgroup(G, ("congruence", 2))
    assert K2.order == 1
    K1 = subgroup(G, ("congruence", 1))
    assert K1.order == 16  # kernel of reduction mod 2
    assert subgroup(G, ("P1m", I, 1)).order == P1.order
    assert subgroup(G, ("P1m", I, 2)).order == P1.order // 2


def test_iwahori_factorization():
    G = enumerate_gl(2, 2, 2)
    I = Partition((1, 1))
    P1 = subgroup(G, ("P1m", I, 1))
    bounds = I.bounds()
    for g in P1.elements:
        um, l, up = iwahori_factorize(g, I, P1)
        assert mat_mul(mat_mul(um, l, 2, 4), up, 2, 4) == g
        # l is block diagonal
        assert l[1] % 4 == 0 and l[2] % 4 == 0
        assert bounds  # shape bookkeeping only


def test_lattice_stabilizer():
    assert lattice_stabilizer_check(Partition((1, 1)), 1, 2, 2)
    assert lattice_stabilizer_check(Partition((1, 1)), 2, 2, 2)
    assert lattice_stabilizer_check(Partition((1, 1)), 1, 2, 3)
